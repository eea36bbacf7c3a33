"""Husimi Q distribution Q(alpha) = <alpha|rho|alpha> / pi from the number basis."""

from __future__ import annotations

import math

import numpy as np

from .states import FockVector, State, _log_sqrt_factorials

NEGATIVE_FLAG = -1e-12
# off-diagonal bands of rho whose entries all stay below this are skipped
BAND_SKIP = 1e-17


def coherent_row(alpha: complex, dim: int) -> np.ndarray:
    """Overlaps <alpha|n> = exp(-|alpha|^2/2) conj(alpha)^n / sqrt(n!)."""
    alpha = complex(alpha)
    row = np.zeros(dim, dtype=complex)
    if alpha == 0:
        row[0] = 1.0
        return row
    n = np.arange(dim)
    with np.errstate(under="ignore"):
        mag = np.exp(-0.5 * abs(alpha) ** 2 + n * math.log(abs(alpha)) - _log_sqrt_factorials(dim))
    return mag * np.exp(-1j * n * np.angle(alpha))


def q_values(state: State, alphas) -> np.ndarray:
    """Q at an array of phase-space points (shape preserved)."""
    alphas = np.asarray(alphas, dtype=complex)
    rows = np.array([coherent_row(a, state.dim) for a in alphas.ravel()])
    if isinstance(state, FockVector):
        q = np.abs(rows @ state.amplitudes) ** 2
    else:
        q = np.einsum("ij,jk,ik->i", rows, state.matrix, rows.conj()).real
    return np.maximum(q / math.pi, 0.0).reshape(alphas.shape)


def q_value(state: State, alpha: complex) -> float:
    return float(q_values(state, np.array([alpha]))[0])


def radial_table(radii: np.ndarray, dim: int) -> np.ndarray:
    """exp(-r^2/2) r^n / sqrt(n!) for every radius (rows) and level (columns)."""
    radii = np.asarray(radii, dtype=float)
    n = np.arange(dim)
    safe = np.where(radii > 0.0, radii, 1.0)
    with np.errstate(under="ignore"):
        logs = (
            -0.5 * radii[:, None] ** 2
            + n[None, :] * np.log(safe)[:, None]
            - _log_sqrt_factorials(dim)[None, :]
        )
        table = np.exp(logs)
    table[radii == 0.0, 1:] = 0.0
    return table


def _fold(coeffs: np.ndarray, period: int) -> np.ndarray:
    """Alias harmonic coefficients (last axis) onto ``period`` bins."""
    size = coeffs.shape[-1]
    if size <= period:
        pad = np.zeros(coeffs.shape[:-1] + (period - size,), dtype=coeffs.dtype)
        return np.concatenate([coeffs, pad], axis=-1)
    out = np.zeros(coeffs.shape[:-1] + (period,), dtype=coeffs.dtype)
    for start in range(0, size, period):
        chunk = coeffs[..., start : start + period]
        out[..., : chunk.shape[-1]] += chunk
    return out


def q_polar_raw(state: State, radii: np.ndarray, angular_count: int) -> np.ndarray:
    """Unclamped Q on the polar grid r_i * exp(2 pi i j / angular_count).

    Q(r, phi) is a trigonometric polynomial in phi with one harmonic per
    level difference; folding the harmonics modulo the number of angles and
    applying an FFT evaluates it at the uniform angles exactly.
    """
    radial = radial_table(radii, state.dim)
    if isinstance(state, FockVector):
        # <alpha|psi> = sum_n radial_n c_n exp(-i n phi)
        amp = np.fft.fft(_fold(radial * state.amplitudes[None, :], angular_count), axis=1)
        return np.abs(amp) ** 2 / math.pi
    rho = state.matrix
    dim = state.dim
    harmonics = np.zeros((radial.shape[0], dim), dtype=complex)
    for k in range(dim):
        band = np.diagonal(rho, offset=k)
        # sum_m radial_m radial_{m+k} <= 1, so dropping entries below
        # BAND_SKIP moves f_k by at most that much
        kept = np.flatnonzero(np.abs(band) > BAND_SKIP)
        if kept.size == 0:
            continue
        lo, hi = kept[0], kept[-1] + 1
        # f_k(r) = sum_m radial_m radial_{m+k} rho[m, m+k]
        harmonics[:, k] = (radial[:, lo:hi] * radial[:, lo + k : hi + k]) @ band[lo:hi]
    zero = harmonics[:, 0].real.copy()
    harmonics[:, 0] = 0.0
    positive = angular_count * np.fft.ifft(_fold(harmonics, angular_count), axis=1)
    return (zero[:, None] + 2.0 * positive.real) / math.pi


def q_grid(state: State, rule) -> np.ndarray:
    """Q at every node of ``rule``, shape (radial, angular), radius-major."""
    return np.maximum(q_polar_raw(state, rule.radii, rule.angular_count), 0.0)
