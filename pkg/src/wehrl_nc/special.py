"""Special functions used by the closed-form results.

Small, dependency-free implementations: digamma by upward recurrence plus the
asymptotic series, orthogonal polynomials by their three-term recurrences.
"""

import math

import numpy as np

EULER_GAMMA = 0.57721566490153286061

# Bernoulli-number coefficients B_2k / (2k) of the digamma asymptotic series.
_DIGAMMA_SERIES = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)


def digamma(x: float) -> float:
    """Logarithmic derivative of the Gamma function for real ``x > 0``."""
    x = float(x)
    if not x > 0.0 or not math.isfinite(x):
        raise ValueError(f"digamma is only implemented for finite x > 0, got {x}")
    shift = 0.0
    while x < 10.0:
        shift -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    power = inv2
    for coeff in _DIGAMMA_SERIES:
        series += coeff * power
        power *= inv2
    return shift + math.log(x) - 0.5 / x - series


def log_factorial(n: int) -> float:
    if n < 0:
        raise ValueError("log_factorial needs n >= 0")
    return math.lgamma(n + 1.0)


def laguerre(n: int, x, alpha: float = 0.0):
    """Generalized Laguerre polynomial L_n^(alpha)(x); ``x`` may be an array."""
    if n < 0:
        raise ValueError("polynomial degree must be >= 0")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur if cur.ndim else float(cur)


def legendre(n: int, x):
    """Legendre polynomial P_n(x) via Bonnet's recurrence."""
    if n < 0:
        raise ValueError("polynomial degree must be >= 0")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = x.copy()
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1) * x * cur - k * prev) / (k + 1)
    return cur if cur.ndim else float(cur)
