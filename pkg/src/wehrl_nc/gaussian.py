"""First and second quadrature moments and the Gaussian counterpart.

Quadratures are ``x = (a + a^dag)/sqrt(2)`` and ``p = (a - a^dag)/(i sqrt(2))``,
so the vacuum covariance is ``I/2`` and a single-mode covariance ``V`` has
symplectic eigenvalue ``sqrt(det V) = nbar + 1/2``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import UncertaintyViolation
from .states import DensityOperator, FockVector, State, as_density

log = logging.getLogger(__name__)

UNCERTAINTY_SLACK = 1e-9
EIGEN_FLOOR = 1e-12
SUPPORT_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class GaussianMoments:
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).reshape(2)
        cov = np.array(self.cov, dtype=float).reshape(2, 2)
        cov = 0.5 * (cov + cov.T)
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.cov))

    @property
    def symplectic_eigenvalue(self) -> float:
        return math.sqrt(max(self.det, 0.0))

    def check(self):
        if self.det < 0.25 - UNCERTAINTY_SLACK or np.any(np.diag(self.cov) < 0):
            raise UncertaintyViolation(
                f"covariance determinant {self.det:.6g} violates the uncertainty bound 1/4; "
                "the truncation dimension is probably too small"
            )
        return self


def _expectations(state: State):
    """<a>, <a^2>, <a^dag a> in the truncated basis."""
    dim = state.dim
    s = np.sqrt(np.arange(1, dim))
    s2 = s[:-1] * s[1:]
    n = np.arange(dim)
    if isinstance(state, FockVector):
        c = state.amplitudes
        a1 = np.vdot(c[:-1], s * c[1:])
        a2 = np.vdot(c[:-2], s2 * c[2:])
        nn = float(np.sum(n * np.abs(c) ** 2))
        return complex(a1), complex(a2), nn
    rho = state.matrix
    # Tr(rho a) = sum_n sqrt(n) rho[n, n-1]
    a1 = np.sum(s * np.diagonal(rho, offset=-1))
    a2 = np.sum(s2 * np.diagonal(rho, offset=-2))
    nn = float(np.sum(n * np.diagonal(rho).real))
    return complex(a1), complex(a2), nn


def moments(state: State, check: bool = True) -> GaussianMoments:
    a1, a2, nn = _expectations(state)
    mx = math.sqrt(2.0) * a1.real
    mp = math.sqrt(2.0) * a1.imag
    vxx = a2.real + nn + 0.5 - mx * mx
    vpp = -a2.real + nn + 0.5 - mp * mp
    vxp = a2.imag - mx * mp
    g = GaussianMoments(np.array([mx, mp]), np.array([[vxx, vxp], [vxp, vpp]]))
    return g.check() if check else g


def counterpart_thermal_occupation(g: GaussianMoments) -> float:
    """Thermal occupation in the displaced-squeezed-thermal form of the counterpart."""
    g.check()
    nbar = g.symplectic_eigenvalue - 0.5
    if nbar < 0.0:
        log.debug("clamping counterpart occupation %.3g to 0", nbar)
        return 0.0
    return nbar


def gaussian_wehrl(g: GaussianMoments) -> float:
    """Wehrl entropy of a Gaussian state: its Q function has covariance V + I/2."""
    g.check()
    return 1.0 + 0.5 * math.log(np.linalg.det(g.cov + 0.5 * np.eye(2)))


def gaussian_q(g: GaussianMoments, alpha) -> np.ndarray:
    """Husimi Q of the Gaussian state with moments ``g`` at complex points ``alpha``."""
    alpha = np.asarray(alpha, dtype=complex)
    sigma = g.cov + 0.5 * np.eye(2)
    inv = np.linalg.inv(sigma)
    dx = math.sqrt(2.0) * alpha.real - g.mean[0]
    dp = math.sqrt(2.0) * alpha.imag - g.mean[1]
    quad = inv[0, 0] * dx * dx + 2 * inv[0, 1] * dx * dp + inv[1, 1] * dp * dp
    # density in (x, p) is exp(-quad/2) / (2 pi sqrt(det)); d^2 alpha = dx dp / 2
    return np.exp(-0.5 * quad) / (math.pi * math.sqrt(np.linalg.det(sigma)))


def _spectrum(state: State):
    """Eigenvalues, eigenvectors and the floor below which values are unreliable.

    Number-diagonal operators (thermal and photon-added thermal states) have
    their spectrum on the diagonal exactly, so only non-positive entries are
    discarded.  Otherwise eigh's absolute error makes anything below
    ``EIGEN_FLOOR`` meaningless.
    """
    rho = as_density(state).matrix
    off = rho - np.diag(np.diag(rho))
    if not np.any(off):
        return np.diag(rho).real.copy(), np.eye(rho.shape[0]), 0.0
    vals, vecs = np.linalg.eigh(rho)
    return vals, vecs, EIGEN_FLOOR


def von_neumann_entropy(state: State) -> float:
    vals, _, floor = _spectrum(state)
    vals = vals[vals > floor]
    return float(-np.sum(vals * np.log(vals)))


def relative_entropy(rho: State, sigma: State) -> float:
    """Quantum relative entropy S(rho || sigma) = Tr rho (ln rho - ln sigma).

    Eigenvalues of sigma below the reliability floor are dropped; if rho puts
    more than ``SUPPORT_TOL`` weight on that dropped subspace the supports do
    not match and ``inf`` is returned.
    """
    if rho.dim != sigma.dim:
        raise ValueError("states must share the truncation dimension")
    r = as_density(rho).matrix
    s_vals, s_vecs, floor = _spectrum(sigma)
    kept = s_vals > floor
    overlap = np.einsum("ij,jk,ki->i", s_vecs.conj().T, r, s_vecs).real
    if np.sum(overlap[~kept]) > SUPPORT_TOL:
        return math.inf
    cross = float(np.sum(overlap[kept] * np.log(s_vals[kept])))
    return -von_neumann_entropy(rho) - cross
