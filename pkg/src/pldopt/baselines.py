"""Conventional physical-layer-security baselines without deception.

Both send no key (d_K = 0, P_K = 0) and only minimize the leakage-failure
probability 1 - (1 - eps_bob_m) * eps_eve_m. Their deception rate is zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fbl import fbl_error
from .link import LinkScenario
from .scalar import golden_section


@dataclass(frozen=True)
class BaselineResult:
    name: str
    p_m: float
    n: int
    d_m: float
    eps_bob_m: float
    eps_eve_m: float
    eps_lf: float
    r_d: float = 0.0
    admissible: bool = True


def _lf(scn, p_m, n, d):
    e_b = fbl_error(scn.z_bob * p_m / scn.sigma2, n, d)
    e_e = fbl_error(scn.z_eve * p_m / scn.sigma2, n, d)
    return 1.0 - (1.0 - e_b) * e_e, e_b, e_e


def _admissible(scn, e_b, e_e):
    th = scn.thresholds
    return bool(e_b <= th.eps_bob_m + 1e-12 and e_e <= th.eps_eve_m + 1e-12)


def baseline_power(scn: LinkScenario, respect_thresholds: bool = False, grid: int = 1001) -> BaselineResult:
    """Best message power in [0, P_total] for the fixed payload d_M.

    A coarse scan brackets the global minimum (the leakage curve need not be
    unimodal over the whole range), then golden-section refines to 1e-6 of
    the budget. With ``respect_thresholds`` only powers meeting the message
    error thresholds are admitted.
    """
    P = scn.p_total
    lo_p = 1e-12 * P
    xs = np.linspace(lo_p, P, grid)
    lf, e_b, e_e = _lf(scn, xs, scn.n, scn.d_m)
    if respect_thresholds:
        th = scn.thresholds
        ok = (e_b <= th.eps_bob_m) & (e_e <= th.eps_eve_m)
        if not ok.any():
            i = int(np.argmin(lf))
            return BaselineResult("power", float(xs[i]), scn.n, scn.d_m, float(e_b[i]), float(e_e[i]),
                                  float(lf[i]), admissible=False)
        lf = np.where(ok, lf, np.inf)
    i = int(np.argmin(lf))
    a, b = xs[max(i - 1, 0)], xs[min(i + 1, grid - 1)]

    def f(p):
        v, eb, ee = _lf(scn, p, scn.n, scn.d_m)
        if respect_thresholds and not _admissible(scn, eb, ee):
            return np.inf
        return v

    x, _ = golden_section(f, a, b, tol=1e-6 * P / (b - a))
    if f(x) > lf[i]:
        x = xs[i]
    v, eb, ee = _lf(scn, x, scn.n, scn.d_m)
    return BaselineResult("power", float(x), scn.n, scn.d_m, float(eb), float(ee), float(v),
                          admissible=_admissible(scn, eb, ee))


def baseline_rate(scn: LinkScenario, knob: str = "blocklength", lo: int | None = None,
                  hi: int | None = None, respect_thresholds: bool = False) -> BaselineResult:
    """Best coding rate at full power, searched over integers.

    ``knob="blocklength"`` keeps the d_M-bit payload and searches the
    blocklength in [lo, hi] (default [1, n]); ``knob="info_bits"`` keeps the
    blocklength n and searches the information bits in [lo, hi] (default
    [d_M, n]). Ties go to the smaller value.
    """
    P = scn.p_total
    if knob == "blocklength":
        lo = 1 if lo is None else lo
        hi = scn.n if hi is None else hi
        vals = np.arange(lo, hi + 1)
        lf, e_b, e_e = _lf(scn, P, vals, scn.d_m)
    elif knob == "info_bits":
        lo = int(np.ceil(scn.d_m)) if lo is None else lo
        hi = scn.n if hi is None else hi
        vals = np.arange(lo, hi + 1)
        lf, e_b, e_e = _lf(scn, P, scn.n, vals)
    else:
        raise ValueError("knob must be 'blocklength' or 'info_bits'")
    if len(vals) == 0:
        raise ValueError("empty search range")
    lf = np.asarray(lf, dtype=float)
    if respect_thresholds:
        th = scn.thresholds
        ok = (np.asarray(e_b) <= th.eps_bob_m) & (np.asarray(e_e) <= th.eps_eve_m)
        if ok.any():
            lf = np.where(ok, lf, np.inf)
    i = int(np.argmin(lf))  # first minimum: smallest value on ties
    eb, ee = float(np.atleast_1d(e_b)[i]), float(np.atleast_1d(e_e)[i])
    n_used = int(vals[i]) if knob == "blocklength" else scn.n
    d_used = scn.d_m if knob == "blocklength" else float(vals[i])
    return BaselineResult("rate", P, n_used, d_used, eb, ee, float(lf[i]),
                          admissible=_admissible(scn, eb, ee))
