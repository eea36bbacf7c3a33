"""Wehrl entropy by polar phase-space quadrature.

Convention: ``H_w = -integral Q ln(pi Q) d^2 alpha`` with the natural log.
The ``pi`` inside the logarithm puts every coherent state at exactly 1 and a
thermal state at ``1 + ln(1 + nbar)``.

The grid is Gauss-Legendre in the radius on ``[0, r_max]`` (Jacobian folded
into the weights) times uniformly spaced angles with equal weights.  Because
the angles are uniform, a phase rotation by ``2 pi / angular_count`` only
permutes nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, InvalidParameter
from .states import State, mean_photon_number
from .gaussian import moments
from .husimi import NEGATIVE_FLAG, q_polar_raw

DEFAULT_TOL = 1e-6
DEFAULT_RADIAL = 200
DEFAULT_ANGULAR = 256
Q_FLOOR = 1e-300
MAX_REFINEMENTS = 3


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    radii: np.ndarray
    radial_weights: np.ndarray
    angular_count: int
    r_max: float
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if np.any(self.radial_weights <= 0):
            raise InvalidParameter("quadrature weights must be positive")
        for arr in (self.radii, self.radial_weights):
            arr.setflags(write=False)

    @classmethod
    def gauss_legendre(cls, r_max: float, radial: int, angular: int, tol: float = DEFAULT_TOL):
        x, w = np.polynomial.legendre.leggauss(radial)
        radii = 0.5 * r_max * (x + 1.0)
        return cls(radii, 0.5 * r_max * w * radii, int(angular), float(r_max), tol)

    @property
    def radial_count(self) -> int:
        return self.radii.size

    @property
    def angles(self) -> np.ndarray:
        return 2.0 * math.pi * np.arange(self.angular_count) / self.angular_count

    @property
    def weights(self) -> np.ndarray:
        """Node weights, shape (radial, angular)."""
        return np.repeat(
            (self.radial_weights * (2.0 * math.pi / self.angular_count))[:, None],
            self.angular_count,
            axis=1,
        )

    def points(self) -> np.ndarray:
        """Complex node coordinates, shape (radial, angular)."""
        return self.radii[:, None] * np.exp(1j * self.angles)[None, :]

    def integrate(self, values: np.ndarray) -> float:
        """Weighted sum with fixed-order compensated accumulation."""
        return math.fsum((self.weights * values).ravel())

    def refined(self) -> "QuadratureRule":
        return QuadratureRule.gauss_legendre(
            self.r_max, 2 * self.radial_count, 2 * self.angular_count, self.tol
        )

    def vacuum_normalization(self) -> float:
        q = np.exp(-self.radii**2) / math.pi
        return self.integrate(np.repeat(q[:, None], self.angular_count, axis=1))


def cutoff_radius(energy_scale: float) -> float:
    return math.sqrt(2.0 * (energy_scale + 1.0)) + 6.0


def build_rule(
    energy_scale: float = 0.0,
    tol: float = DEFAULT_TOL,
    radial: int = DEFAULT_RADIAL,
    angular: int = DEFAULT_ANGULAR,
    min_radius: float = 0.0,
) -> QuadratureRule:
    """Polar rule covering states with mean photon number up to ``energy_scale``.

    ``min_radius`` enlarges the disc for states whose Q is elongated.
    """
    energy_scale = float(energy_scale)
    if not (math.isfinite(energy_scale) and energy_scale >= 0):
        raise InvalidParameter(f"energy scale must be finite and >= 0, got {energy_scale}")
    if not (tol > 0 and math.isfinite(tol)):
        raise InvalidParameter(f"tolerance must be positive, got {tol}")
    r_max = max(cutoff_radius(energy_scale), float(min_radius))
    rule = QuadratureRule.gauss_legendre(r_max, radial, angular, tol)
    for _ in range(4):
        if abs(rule.vacuum_normalization() - 1.0) <= max(tol / 10, 1e-14):
            return rule
        rule = rule.refined()
    raise ConvergenceError("quadrature rule failed its vacuum normalization self-test")


def rule_for(state: State, tol: float = DEFAULT_TOL) -> QuadratureRule:
    """Rule sized for ``state``: its energy, plus six standard deviations of
    Q along the widest axis beyond the mean for squeezed shapes."""
    g = moments(state, check=False)
    widest = 0.5 * (float(np.linalg.eigvalsh(g.cov)[-1]) + 0.5)
    centre = float(np.hypot(*g.mean)) / math.sqrt(2.0)
    reach = centre + 6.0 * math.sqrt(2.0 * widest)
    return build_rule(mean_photon_number(state), tol, min_radius=reach)


@dataclass(frozen=True)
class WehrlEstimate:
    value: float
    normalization: float
    refinement_delta: float | None
    min_q: float
    diagnostics: dict = field(default_factory=dict)


def _entropy_on(state: State, rule: QuadratureRule):
    raw = q_polar_raw(state, rule.radii, rule.angular_count)
    q = np.where(raw < Q_FLOOR, 0.0, raw)
    with np.errstate(divide="ignore", invalid="ignore"):
        integrand = np.where(q > 0.0, -q * np.log(math.pi * q), 0.0)
    return rule.integrate(integrand), rule.integrate(q), float(raw.min())


def estimate_wehrl(
    state: State,
    rule: QuadratureRule | None = None,
    check: bool = True,
    max_refinements: int = MAX_REFINEMENTS,
) -> WehrlEstimate:
    """Wehrl entropy with normalization and self-convergence diagnostics.

    With ``check`` the rule is doubled in both directions until two
    successive values agree within ``rule.tol``; the finest value is
    returned.  Still disagreeing after ``max_refinements`` doublings raises
    ConvergenceError.
    """
    if rule is None:
        rule = rule_for(state)
    value, norm, min_q = _entropy_on(state, rule)
    delta = None
    used = rule
    if check:
        for _ in range(max(1, max_refinements)):
            used = used.refined()
            fine_value, norm, fine_min = _entropy_on(state, used)
            delta = abs(fine_value - value)
            value, min_q = fine_value, min(min_q, fine_min)
            if delta <= rule.tol:
                break
        else:
            raise ConvergenceError(
                f"Wehrl entropy changed by {delta:.3g} under refinement to "
                f"{used.radial_count}x{used.angular_count} nodes (tol {rule.tol:.3g})",
                delta=delta,
            )
    if abs(norm - 1.0) > max(rule.tol / 10, 1e-11):
        raise ConvergenceError(
            f"Q integrates to {norm:.12g} on the grid; the state does not fit inside r_max={rule.r_max:.3g}"
        )
    diagnostics = {
        "q_normalization": norm,
        "q_min": min_q,
        "negative_q_flag": min_q < NEGATIVE_FLAG,
        "radial_nodes": used.radial_count,
        "angular_nodes": used.angular_count,
        "r_max": rule.r_max,
    }
    if delta is not None:
        diagnostics["refinement_delta"] = delta
    return WehrlEstimate(value, norm, delta, min_q, diagnostics)


def wehrl_entropy(state: State, rule: QuadratureRule | None = None, check: bool = True) -> float:
    return estimate_wehrl(state, rule, check).value
