"""Finite-blocklength error probability (normal approximation) and its inverses.

All functions accept scalars or numpy arrays and broadcast. Scalar inputs
return Python floats.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq
from scipy.special import erfc, erfcinv

LN2 = math.log(2.0)
SQRT2 = math.sqrt(2.0)

# bisection settings shared by the inverses
XTOL = 1e-9
MAXITER = 200

# bracket for SNR inversion; fbl_error is ~1 below and ~0 above
SNR_MIN = 1e-12
SNR_MAX = 1e12


class UnreachableError(ValueError):
    """Requested error probability cannot be met inside the search range."""


class Root(NamedTuple):
    value: float
    clamped: str | None  # None, "low" or "high"


def _out(x):
    if np.ndim(x) == 0:
        return float(x)
    return x


def q_func(x):
    """Gaussian tail probability Q(x) = P(N(0,1) > x)."""
    x = np.asarray(x, dtype=float)
    return _out(0.5 * erfc(x / SQRT2))


def q_inv(p):
    """Inverse of :func:`q_func` on the open interval (0, 1)."""
    p = np.asarray(p, dtype=float)
    if np.any((p <= 0.0) | (p >= 1.0)) or np.any(np.isnan(p)):
        raise ValueError("q_inv requires 0 < p < 1")
    return _out(SQRT2 * erfcinv(2.0 * p))


def capacity(snr):
    """Shannon capacity log2(1 + snr) in bits per channel use."""
    snr = np.asarray(snr, dtype=float)
    return _out(np.log1p(snr) / LN2)


def dispersion(snr):
    """Channel dispersion 1 - 1/(1 + snr)^2 of the AWGN channel."""
    snr = np.asarray(snr, dtype=float)
    return _out(1.0 - 1.0 / (1.0 + snr) ** 2)


def q_argument(snr, n, d):
    """Argument of the Q-function in the normal approximation.

    sqrt(n / V) * (C - d/n) * ln 2, with C in bits. Written as
    sqrt(n / V) * (ln(1 + snr) - d ln2 / n) so the ln 2 factor enters once.
    Zero SNR maps to -inf (the block is always lost).
    """
    snr = np.asarray(snr, dtype=float)
    n = np.asarray(n, dtype=float)
    d = np.asarray(d, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        v = -np.expm1(-2.0 * np.log1p(snr))
        w = np.sqrt(n / v) * (np.log1p(snr) - d * LN2 / n)
    w = np.where(snr > 0.0, w, -np.inf)
    return _out(w)


def fbl_error(snr, n, d):
    """Block error probability for ``d`` information bits in ``n`` channel uses."""
    w = np.asarray(q_argument(snr, n, d))
    return _out(0.5 * erfc(w / SQRT2))


def _phi(w):
    return np.exp(-0.5 * w * w) / math.sqrt(2.0 * math.pi)


def fbl_error_grad(snr, n, d):
    """Analytic partial derivatives (d eps / d snr, d eps / d d).

    Both are evaluated at positive SNR; at snr <= 0 they are returned as 0.
    """
    snr = np.asarray(snr, dtype=float)
    n = np.asarray(n, dtype=float)
    d = np.asarray(d, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        g1 = 1.0 + snr
        v = 1.0 - 1.0 / g1**2
        dv = 2.0 / g1**3
        gap = np.log1p(snr) - d * LN2 / n
        w = np.sqrt(n / v) * gap
        dw_dsnr = np.sqrt(n) * (1.0 / (np.sqrt(v) * g1) - 0.5 * gap * dv / v**1.5)
        dw_dd = -LN2 / np.sqrt(n * v)
        dens = -_phi(w)
        de_dsnr = np.where(snr > 0.0, dens * dw_dsnr, 0.0)
        de_dd = np.where(snr > 0.0, dens * dw_dd, 0.0)
    return _out(de_dsnr), _out(de_dd)


def invert_info_bits(snr: float, n: int, eps_target: float) -> Root:
    """Information bits ``d`` in [0, n] at which ``fbl_error`` equals ``eps_target``.

    ``fbl_error`` increases in ``d``. If the target lies below the error at
    d = 0 the result is clamped to 0 (``clamped="low"``); if it lies above the
    error at d = n it is clamped to n (``clamped="high"``).
    """
    if not 0.0 < eps_target < 1.0:
        raise ValueError("eps_target must lie in (0, 1)")
    if snr <= 0.0:
        # error is 1 for every d
        return Root(0.0, "low")
    f = lambda d: fbl_error(snr, n, d) - eps_target
    lo, hi = 0.0, float(n)
    if f(lo) >= 0.0:
        return Root(lo, "low") if f(lo) > 0.0 else Root(lo, None)
    if f(hi) <= 0.0:
        return Root(hi, "high") if f(hi) < 0.0 else Root(hi, None)
    return Root(brentq(f, lo, hi, xtol=XTOL, rtol=4 * np.finfo(float).eps, maxiter=MAXITER), None)


def invert_snr(n: int, d: float, eps_target: float) -> float:
    """SNR at which ``fbl_error(snr, n, d)`` equals ``eps_target``.

    Raises :class:`UnreachableError` when the target is outside what the
    SNR bracket [1e-12, 1e12] can produce.
    """
    if not 0.0 < eps_target < 1.0:
        raise ValueError("eps_target must lie in (0, 1)")
    # bisect in log-SNR: the function spans many decades
    f = lambda t: fbl_error(math.exp(t), n, d) - eps_target
    lo, hi = math.log(SNR_MIN), math.log(SNR_MAX)
    if f(lo) < 0.0 or f(hi) > 0.0:
        raise UnreachableError(f"eps={eps_target} unreachable for n={n}, d={d}")
    t = brentq(f, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=MAXITER)
    return math.exp(t)
