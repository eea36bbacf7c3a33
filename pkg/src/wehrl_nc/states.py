"""Single-mode states in a truncated number basis.

Pure states are :class:`FockVector`, mixed states :class:`DensityOperator`.
Every constructor tracks how much probability sits outside the trustworthy
part of the basis (the top ``TAIL_WINDOW`` levels plus whatever was cut off
entirely) and raises :class:`DimensionTooSmall` when that exceeds
``tail_tol``.

Squeezing and displacement act through their number-basis matrix elements,
generated by recurrences that follow from ``S a S^dag = mu a - nu e^{i theta} a^dag``
and ``D a D^dag = a - beta``.  Every retained element is exact up to rounding,
so truncation only ever loses probability off the top of the basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Union

import numpy as np
from scipy.special import roots_hermite

from .errors import (
    DegenerateInput,
    DimensionTooSmall,
    IndexOutOfRange,
    InvalidParameter,
    InvalidState,
    SqueezingTooLarge,
)

DEFAULT_DIM = 64
DEFAULT_TAIL_TOL = 1e-10
TAIL_WINDOW = 4
MAX_SQUEEZING = 3.0

_NORM_TOL = 1e-12
_HERMITIAN_TOL = 1e-12
_EIGEN_FLOOR = -1e-10
# weight ignored above the highest level an operator is applied to
SUPPORT_MASS = 1e-28


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SqueezeParam:
    """Squeezing strength ``r >= 0`` and angle ``theta`` (radians)."""

    r: float
    theta: float = 0.0

    def __post_init__(self):
        r = float(self.r)
        theta = float(self.theta)
        if not (math.isfinite(r) and math.isfinite(theta)):
            raise InvalidParameter("squeezing parameters must be finite")
        if r < 0:
            raise InvalidParameter(f"squeezing strength must be >= 0, got {r}")
        theta = math.fmod(theta, 2 * math.pi)
        if theta < 0:
            theta += 2 * math.pi
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "theta", theta)

    @classmethod
    def coerce(cls, sq) -> "SqueezeParam":
        if isinstance(sq, cls):
            return sq
        if isinstance(sq, tuple):
            return cls(*sq)
        return cls(float(sq))

    @property
    def mu(self) -> float:
        return math.cosh(self.r)

    @property
    def nu(self) -> float:
        return math.sinh(self.r)


@dataclass(frozen=True, eq=False)
class FockVector:
    """Normalized ket over |0>, ..., |N-1>."""

    amplitudes: np.ndarray
    tail_mass: float | None = None
    diagnostics: Mapping = field(default_factory=dict)

    def __post_init__(self):
        amps = _readonly(self.amplitudes)
        if amps.ndim != 1 or amps.size == 0:
            raise InvalidState("amplitudes must be a non-empty 1-d array")
        if not np.all(np.isfinite(amps)):
            raise InvalidState("amplitudes must be finite")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > _NORM_TOL:
            raise InvalidState(f"state is not normalized (norm^2 = {norm!r})")
        object.__setattr__(self, "amplitudes", amps)
        if self.tail_mass is None:
            object.__setattr__(self, "tail_mass", _window_mass(np.abs(amps) ** 2))

    @classmethod
    def from_amplitudes(cls, amplitudes) -> "FockVector":
        amps = np.asarray(amplitudes, dtype=complex)
        norm = math.sqrt(float(np.vdot(amps, amps).real))
        if norm == 0.0:
            raise DegenerateInput("zero vector cannot be normalized")
        return cls(amps / norm)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def to_density(self) -> "DensityOperator":
        c = self.amplitudes
        return DensityOperator(
            np.outer(c, c.conj()), tail_mass=self.tail_mass, diagnostics=self.diagnostics
        )

    def __repr__(self):
        return f"FockVector(dim={self.dim}, tail_mass={self.tail_mass:.3g})"


def _check_positive(rho: np.ndarray):
    off = rho - np.diag(np.diag(rho))
    if not np.any(off):
        lowest = float(np.min(np.diag(rho).real))
    else:
        # Cholesky of rho - floor * I succeeds iff every eigenvalue exceeds
        # the floor; only a failure pays for the eigen solve
        try:
            np.linalg.cholesky(rho - _EIGEN_FLOOR * np.eye(rho.shape[0]))
            return
        except np.linalg.LinAlgError:
            lowest = float(np.linalg.eigvalsh(rho)[0])
    if lowest < _EIGEN_FLOOR:
        raise InvalidState(f"density matrix has eigenvalue {lowest:.3g} < 0")


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, positive semidefinite, unit-trace N x N matrix."""

    matrix: np.ndarray
    tail_mass: float | None = None
    diagnostics: Mapping = field(default_factory=dict)

    def __post_init__(self):
        rho = _readonly(self.matrix)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] == 0:
            raise InvalidState("density matrix must be square and non-empty")
        if not np.all(np.isfinite(rho)):
            raise InvalidState("density matrix must be finite")
        if np.max(np.abs(rho - rho.conj().T)) > _HERMITIAN_TOL:
            raise InvalidState("density matrix is not Hermitian")
        trace = float(np.trace(rho).real)
        if abs(trace - 1.0) > _NORM_TOL:
            raise InvalidState(f"density matrix trace is {trace!r}, expected 1")
        _check_positive(rho)
        object.__setattr__(self, "matrix", rho)
        if self.tail_mass is None:
            object.__setattr__(self, "tail_mass", _window_mass(np.diag(rho).real))

    @classmethod
    def from_matrix(cls, matrix) -> "DensityOperator":
        rho = np.asarray(matrix, dtype=complex)
        rho = 0.5 * (rho + rho.conj().T)
        trace = float(np.trace(rho).real)
        if trace <= 0.0:
            raise DegenerateInput("matrix has non-positive trace")
        return cls(rho / trace)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self):
        return f"DensityOperator(dim={self.dim}, tail_mass={self.tail_mass:.3g})"


State = Union[FockVector, DensityOperator]


def as_density(state: State) -> DensityOperator:
    return state.to_density() if isinstance(state, FockVector) else state


def _window_mass(populations: np.ndarray) -> float:
    return float(np.sum(populations[-TAIL_WINDOW:]))


def _check_dim(dim) -> int:
    if int(dim) != dim or dim <= TAIL_WINDOW:
        raise InvalidParameter(f"dimension must be an integer > {TAIL_WINDOW}, got {dim}")
    return int(dim)


def _tail(kept_mass: float, total: float) -> float:
    return max(0.0, 1.0 - kept_mass / total)


def _raise_if_tail(tail: float, tail_tol: float, dim: int, what: str):
    if tail > tail_tol:
        raise DimensionTooSmall(
            f"{what}: tail mass {tail:.3g} exceeds {tail_tol:.3g} at dim={dim}; "
            "increase the truncation dimension",
            tail_mass=tail,
            dim=dim,
        )


def _finish_vector(amps, total, tail_tol, what, inherited_tail=0.0, diagnostics=None):
    """Normalize truncated amplitudes whose untruncated norm^2 is ``total``."""
    amps = np.asarray(amps, dtype=complex)
    dim = amps.size
    pops = np.abs(amps) ** 2
    if total is None:
        total = float(np.sum(pops))
    if not total > 0.0:
        raise DegenerateInput(f"{what}: state has zero norm")
    tail = max(_tail(float(np.sum(pops[: dim - TAIL_WINDOW])), total), inherited_tail)
    _raise_if_tail(tail, tail_tol, dim, what)
    kept = float(np.sum(pops))
    diag = {"truncation_loss": max(0.0, 1.0 - kept / total)}
    diag.update(diagnostics or {})
    return FockVector(amps / math.sqrt(kept), tail_mass=tail, diagnostics=diag)


def _finish_density(rho, total, tail_tol, what, inherited_tail=0.0, diagnostics=None):
    rho = np.asarray(rho, dtype=complex)
    rho = 0.5 * (rho + rho.conj().T)
    dim = rho.shape[0]
    pops = np.diag(rho).real
    if total is None:
        total = float(np.sum(pops))
    if not total > 0.0:
        raise DegenerateInput(f"{what}: state has zero trace")
    tail = max(_tail(float(np.sum(pops[: dim - TAIL_WINDOW])), total), inherited_tail)
    _raise_if_tail(tail, tail_tol, dim, what)
    kept = float(np.sum(pops))
    diag = {"truncation_loss": max(0.0, 1.0 - kept / total)}
    diag.update(diagnostics or {})
    return DensityOperator(rho / kept, tail_mass=tail, diagnostics=diag)


def _log_sqrt_factorials(n: int) -> np.ndarray:
    """0.5 * log(k!) for k = 0..n-1."""
    out = np.zeros(n)
    if n > 1:
        out[1:] = 0.5 * np.cumsum(np.log(np.arange(1, n)))
    return out


def _coherent_amplitudes(beta: complex, dim: int) -> np.ndarray:
    """<n|beta> for n < dim, evaluated in log space."""
    beta = complex(beta)
    amps = np.zeros(dim, dtype=complex)
    if beta == 0:
        amps[0] = 1.0
        return amps
    n = np.arange(dim)
    mag = np.exp(-0.5 * abs(beta) ** 2 + n * math.log(abs(beta)) - _log_sqrt_factorials(dim))
    return mag * np.exp(1j * n * np.angle(beta))


def _check_squeeze(sq: SqueezeParam):
    if sq.r > MAX_SQUEEZING:
        raise SqueezingTooLarge(f"squeezing r={sq.r} exceeds the supported maximum {MAX_SQUEEZING}")


def _squeezed_coherent_amplitudes(sq: SqueezeParam, alpha: complex, dim: int) -> np.ndarray:
    # (mu a - nu e^{i theta} a^dag) S|alpha> = alpha S|alpha>
    mu, nu = sq.mu, sq.nu
    eta = nu * np.exp(1j * sq.theta)
    alpha = complex(alpha)
    c = np.zeros(dim, dtype=complex)
    c[0] = np.exp(
        -0.5 * abs(alpha) ** 2 - 0.5 * np.exp(-1j * sq.theta) * math.tanh(sq.r) * alpha**2
    ) / math.sqrt(mu)
    if dim > 1:
        c[1] = alpha * c[0] / mu
    for n in range(1, dim - 1):
        c[n + 1] = (alpha * c[n] + eta * math.sqrt(n) * c[n - 1]) / (mu * math.sqrt(n + 1))
    return c


def _hermite_functions(x: np.ndarray, count: int) -> np.ndarray:
    """Oscillator eigenfunctions psi_n(x), n < count, as a (count, len(x)) table.

    The normalized recurrence is run on rescaled values with a per-node log
    scale, so large n and |x| neither overflow nor flush to zero early.
    """
    x = np.asarray(x, dtype=float)
    out = np.zeros((count, x.size))
    log_scale = -0.5 * x * x - 0.25 * math.log(math.pi)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    with np.errstate(under="ignore"):
        for n in range(count):
            out[n] = cur * np.exp(log_scale)
            nxt = math.sqrt(2.0 / (n + 1)) * x * cur - math.sqrt(n / (n + 1)) * prev
            big = np.maximum(np.abs(nxt), np.abs(cur))
            rescale = big > 1e150
            if np.any(rescale):
                factor = np.where(rescale, big, 1.0)
                nxt = nxt / factor
                cur = cur / factor
                log_scale = log_scale + np.log(factor)
            prev, cur = cur, nxt
    return out


def _gauss_hermite(count: int):
    """Nodes and weights*exp(y^2) of the Gauss-Hermite rule with ``count`` nodes."""
    nodes, _ = roots_hermite(count)
    # Christoffel form of the weights, free of exp(-y^2) underflow
    scaled = 1.0 / np.sum(_hermite_functions(nodes, count) ** 2, axis=0)
    return nodes, scaled


def squeeze_columns(sq, ncols: int, rows: int) -> np.ndarray:
    """Matrix elements <m|S(zeta)|n> for m < rows, n < ncols.

    For real r the squeeze only rescales position, (S psi)(x) = e^{-r/2} psi(e^{-r} x),
    so each element is an overlap of Hermite functions.  The integrand is a
    polynomial times a Gaussian and Gauss-Hermite quadrature with enough
    nodes integrates it exactly.  The angle enters through phase rotations.
    """
    sq = SqueezeParam.coerce(sq)
    _check_squeeze(sq)
    c = math.exp(-sq.r)
    s = 0.5 * (1.0 + c * c)
    nodes, weights = _gauss_hermite((rows + ncols) // 2 + 1)
    x = nodes / math.sqrt(s)
    left = _hermite_functions(x, rows) * weights
    right = _hermite_functions(c * x, ncols)
    real = math.sqrt(c / s) * (left @ right.T)
    m = np.arange(rows)[:, None]
    n = np.arange(ncols)[None, :]
    real[(m - n) % 2 == 1] = 0.0
    return real * np.exp(0.5j * sq.theta * (m - n))


def displacement_columns(beta: complex, ncols: int, rows: int) -> np.ndarray:
    """Matrix elements <m|D(beta)|n> for m < rows, n < ncols.

    Each diagonal k = m - n is an associated Laguerre sequence in n; the
    recurrence below runs on sqrt(n!/(n+k)!) L_n^(k)(|beta|^2), which stays
    bounded, with the beta^k / sqrt(k!) prefactor applied in log space.
    """
    beta = complex(beta)
    out = np.zeros((rows, ncols), dtype=complex)
    if beta == 0:
        size = min(rows, ncols)
        out[np.arange(size), np.arange(size)] = 1.0
        return out
    x = abs(beta) ** 2
    span = max(rows, ncols)
    k = np.arange(span)
    log_pref = -0.5 * x + k * math.log(abs(beta)) - np.array([0.5 * math.lgamma(j + 1.0) for j in k])
    below = np.exp(1j * k * np.angle(beta))  # m >= n: beta^k
    above = np.exp(1j * k * np.angle(-beta.conjugate()))  # m < n: (-conj beta)^k
    prev = np.zeros(span)
    cur = np.ones(span)
    with np.errstate(under="ignore", divide="ignore"):
        for n in range(min(span, ncols)):
            mag = np.where(cur == 0.0, 0.0, np.sign(cur) * np.exp(log_pref + np.log(np.abs(cur) + 1e-320)))
            # fill diagonal entries (n + k, n) and (n, n + k)
            kk = k[: max(0, span - n)]
            rows_lo = n + kk
            sel = (rows_lo < rows) & (n < ncols)
            out[rows_lo[sel], n] = mag[: kk.size][sel] * below[: kk.size][sel]
            sel_up = (n < rows) & (rows_lo < ncols) & (kk > 0)
            out[n, rows_lo[sel_up]] = mag[: kk.size][sel_up] * above[: kk.size][sel_up]
            nxt = ((2 * n + 1 + k - x) * cur - math.sqrt(n) * np.sqrt(n + k) * prev) / (
                np.sqrt((n + 1.0) * (n + 1.0 + k))
            )
            big = np.maximum(np.abs(nxt), np.abs(cur))
            rescale = big > 1e150
            if np.any(rescale):
                factor = np.where(rescale, big, 1.0)
                nxt = nxt / factor
                cur = cur / factor
                log_pref = log_pref + np.log(factor)
            prev, cur = cur, nxt
    return out


def _support(state: State) -> int:
    """Levels needed so that the weight left above them is below SUPPORT_MASS."""
    pops = (
        np.abs(state.amplitudes) ** 2
        if isinstance(state, FockVector)
        else np.diag(state.matrix).real
    )
    above = np.cumsum(pops[::-1])[::-1]  # above[k] = weight on levels >= k
    needed = np.nonzero(above > SUPPORT_MASS)[0]
    return int(needed[-1]) + 1 if needed.size else 1


def _apply_unitary_columns(state: State, cols: np.ndarray, tail_tol, what, diagnostics=None):
    k = cols.shape[1]
    if isinstance(state, FockVector):
        out = cols @ state.amplitudes[:k]
        return _finish_vector(out, 1.0, tail_tol, what, state.tail_mass, diagnostics)
    block = state.matrix[:k, :k]
    if not np.any(block - np.diag(np.diag(block))):
        half = cols * np.diag(block)[None, :]
    else:
        half = cols @ block
    return _finish_density(half @ cols.conj().T, 1.0, tail_tol, what, state.tail_mass, diagnostics)


# --------------------------------------------------------------------------
# constructors


def coherent(beta: complex, dim: int = DEFAULT_DIM, tail_tol: float = DEFAULT_TAIL_TOL) -> FockVector:
    dim = _check_dim(dim)
    return _finish_vector(_coherent_amplitudes(beta, dim), 1.0, tail_tol, f"coherent({beta})")


def fock(m: int, dim: int = DEFAULT_DIM, tail_tol: float = DEFAULT_TAIL_TOL) -> FockVector:
    dim = _check_dim(dim)
    if int(m) != m or m < 0:
        raise InvalidParameter(f"photon number must be a non-negative integer, got {m}")
    m = int(m)
    if m >= dim:
        raise IndexOutOfRange(f"|{m}> does not exist in a {dim}-level truncation")
    amps = np.zeros(dim, dtype=complex)
    amps[m] = 1.0
    return _finish_vector(amps, 1.0, tail_tol, f"fock({m})")


def vacuum(dim: int = DEFAULT_DIM, tail_tol: float = DEFAULT_TAIL_TOL) -> FockVector:
    return fock(0, dim, tail_tol)


def squeezed_coherent(
    sq, alpha: complex = 0.0, dim: int = DEFAULT_DIM, tail_tol: float = DEFAULT_TAIL_TOL
) -> FockVector:
    """S(zeta)|alpha> with zeta = r e^{i theta}."""
    dim = _check_dim(dim)
    sq = SqueezeParam.coerce(sq)
    _check_squeeze(sq)
    amps = _squeezed_coherent_amplitudes(sq, alpha, dim)
    return _finish_vector(amps, 1.0, tail_tol, f"squeezed_coherent(r={sq.r})")


def squeezed_vacuum(sq, dim: int = DEFAULT_DIM, tail_tol: float = DEFAULT_TAIL_TOL) -> FockVector:
    return squeezed_coherent(sq, 0.0, dim, tail_tol)


def squeezed_number(sq, m: int, dim: int = DEFAULT_DIM, tail_tol: float = DEFAULT_TAIL_TOL) -> FockVector:
    """S(zeta)|m>, the m-th column of the squeeze matrix."""
    dim = _check_dim(dim)
    if int(m) != m or m < 0:
        raise InvalidParameter(f"photon number must be a non-negative integer, got {m}")
    cols = squeeze_columns(sq, int(m) + 1, dim)
    return _finish_vector(cols[:, int(m)], 1.0, tail_tol, f"squeezed_number(m={m})")


def photon_addition_norm(state: State, m: int) -> float:
    """<a^m a^dag^m>, the squared norm of the unnormalized photon-added state."""
    dim = state.dim
    n = np.arange(dim)
    log_f2 = np.array([math.lgamma(k + m + 1) - math.lgamma(k + 1) for k in n])
    pops = (
        np.abs(state.amplitudes) ** 2
        if isinstance(state, FockVector)
        else np.diag(state.matrix).real
    )
    return float(np.sum(pops * np.exp(log_f2)))


def add_photons(state: State, m: int = 1, tail_tol: float = DEFAULT_TAIL_TOL) -> State:
    """Normalized a^dag^m |psi>, or a^dag^m rho a^m / Tr(...)."""
    if int(m) != m or m < 0:
        raise InvalidParameter(f"number of added photons must be a non-negative integer, got {m}")
    m = int(m)
    if m == 0:
        return state
    dim = state.dim
    keep = max(dim - m, 0)
    factors = np.exp(
        0.5 * np.array([math.lgamma(k + m + 1) - math.lgamma(k + 1) for k in range(keep)])
    )
    total = photon_addition_norm(state, m)
    what = f"add_photons(m={m})"
    if isinstance(state, FockVector):
        out = np.zeros(dim, dtype=complex)
        out[m:] = factors * state.amplitudes[:keep]
        return _finish_vector(out, total, tail_tol, what, state.tail_mass, {"norm": total})
    out = np.zeros((dim, dim), dtype=complex)
    out[m:, m:] = factors[:, None] * state.matrix[:keep, :keep] * factors[None, :]
    return _finish_density(out, total, tail_tol, what, state.tail_mass, {"norm": total})


def photon_added_coherent(
    m: int, alpha: complex, dim: int = DEFAULT_DIM, tail_tol: float = DEFAULT_TAIL_TOL
) -> FockVector:
    return add_photons(coherent(alpha, dim, tail_tol), m, tail_tol)


def photon_added_squeezed_vacuum(
    sq, m: int, dim: int = DEFAULT_DIM, tail_tol: float = DEFAULT_TAIL_TOL
) -> FockVector:
    return add_photons(squeezed_coherent(sq, 0.0, dim, tail_tol), m, tail_tol)


def cat_state(R: float, parity: str = "even", dim: int = DEFAULT_DIM, tail_tol: float = DEFAULT_TAIL_TOL) -> FockVector:
    """(|R> +- |-R>) / sqrt(2 (1 +- exp(-2 R^2))) for real R."""
    dim = _check_dim(dim)
    R = float(R)
    if not math.isfinite(R):
        raise InvalidParameter("cat amplitude must be finite")
    sign = {"even": 1, "+": 1, "odd": -1, "-": -1}.get(parity)
    if sign is None:
        raise InvalidParameter(f"parity must be 'even' or 'odd', got {parity!r}")
    if R == 0.0:
        if sign < 0:
            raise DegenerateInput("odd cat state with R=0 has zero norm")
        return fock(0, dim, tail_tol)
    amps = _coherent_amplitudes(R, dim)
    n = np.arange(dim)
    amps = np.where((n % 2 == 0) == (sign > 0), 2.0 * amps, 0.0)
    # ||(|R> +- |-R>)||^2, using expm1 to keep the odd case accurate for small R
    total = 2.0 * (2.0 + math.expm1(-2.0 * R * R)) if sign > 0 else -2.0 * math.expm1(-2.0 * R * R)
    return _finish_vector(amps, total, tail_tol, f"cat({R}, {parity})")


def thermal(nbar: float, dim: int = DEFAULT_DIM, tail_tol: float = DEFAULT_TAIL_TOL) -> DensityOperator:
    dim = _check_dim(dim)
    nbar = float(nbar)
    if not (math.isfinite(nbar) and nbar >= 0):
        raise InvalidParameter(f"thermal occupation must be >= 0, got {nbar}")
    n = np.arange(dim)
    if nbar == 0:
        pops = (n == 0).astype(float)
    else:
        pops = np.exp(n * math.log(nbar / (1 + nbar)) - math.log1p(nbar))
    return _finish_density(np.diag(pops), 1.0, tail_tol, f"thermal({nbar})")


def photon_added_thermal(
    m: int, nbar: float, dim: int = DEFAULT_DIM, tail_tol: float = DEFAULT_TAIL_TOL
) -> DensityOperator:
    return add_photons(thermal(nbar, dim, tail_tol), m, tail_tol)


def squeeze(state: State, sq, tail_tol: float = DEFAULT_TAIL_TOL) -> State:
    """Apply S(zeta) to a ket, or conjugate a density matrix by it."""
    sq = SqueezeParam.coerce(sq)
    if sq.r == 0.0:
        return state
    cols = squeeze_columns(sq, _support(state), state.dim)
    return _apply_unitary_columns(state, cols, tail_tol, f"squeeze(r={sq.r})")


def displace(state: State, beta: complex, tail_tol: float = DEFAULT_TAIL_TOL) -> State:
    beta = complex(beta)
    if beta == 0:
        return state
    cols = displacement_columns(beta, _support(state), state.dim)
    return _apply_unitary_columns(state, cols, tail_tol, f"displace({beta})")


def rotate(state: State, phi: float) -> State:
    """Passive phase rotation exp(-i phi a^dag a)."""
    phases = np.exp(-1j * float(phi) * np.arange(state.dim))
    if isinstance(state, FockVector):
        return FockVector(phases * state.amplitudes, state.tail_mass, state.diagnostics)
    rho = phases[:, None] * state.matrix * phases.conj()[None, :]
    return DensityOperator(rho, state.tail_mass, state.diagnostics)


def squeezed_thermal(
    nbar: float, sq, dim: int = DEFAULT_DIM, tail_tol: float = DEFAULT_TAIL_TOL
) -> DensityOperator:
    """S(zeta) rho_th(nbar) S(zeta)^dag."""
    return squeeze(thermal(nbar, dim, tail_tol), sq, tail_tol)


def purity(rho: State) -> float:
    if isinstance(rho, FockVector):
        return 1.0
    m = rho.matrix
    return float(np.vdot(m, m).real)


def mean_photon_number(state: State) -> float:
    n = np.arange(state.dim)
    if isinstance(state, FockVector):
        return float(np.sum(n * np.abs(state.amplitudes) ** 2))
    return float(np.sum(n * np.diag(state.matrix).real))


MAX_AUTO_DIM = 2048


def build_auto(build, start: int = DEFAULT_DIM, limit: int = MAX_AUTO_DIM) -> State:
    """Call ``build(dim)`` with dim = start, 2*start, ... until the tail fits.

    A level that does not exist yet (IndexOutOfRange) also triggers a
    doubling.  The number of doublings is recorded in the state's
    diagnostics; the last error propagates once ``limit`` is reached.
    """
    dim = int(start)
    escalations = 0
    while True:
        try:
            state = build(dim)
        except (DimensionTooSmall, IndexOutOfRange):
            if dim * 2 > limit:
                raise
            dim *= 2
            escalations += 1
            continue
        if escalations:
            diag = dict(state.diagnostics, dim_escalations=escalations)
            object.__setattr__(state, "diagnostics", diag)
        return state
