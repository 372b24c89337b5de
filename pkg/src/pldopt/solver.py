"""MM-BCD optimizer for key length and power split.

The outer loop majorizes 1/R_d by a tangent AM-GM bound around the current
local point; the inner loop minimizes that bound by alternating two scalar
convex problems, one in the message power P_M (with P_K = P_total - P_M)
and one in the relaxed key length d_K. The final real key length is rounded
to the better feasible integer neighbour.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import fbl
from .link import LinkScenario, check_feasible, evaluate, feasible_mask
from .scalar import golden_section

# inward margins keeping root-derived interval ends strictly feasible
D_MARGIN = 2e-9
P_MARGIN = 1e-10


class InfeasibleError(RuntimeError):
    """No feasible point could be found."""


class EmptyIntervalError(InfeasibleError):
    pass


@dataclass(frozen=True)
class Surrogate:
    """Tangent upper bound of 1/R_d built at a local point.

    R_hat = (1/R_b + l1/(1 - eps_eve_m) + l2/eps_eve_k)^3 / (27 l1 l2), with
    l1 = (1 - eps_eve_m)/R_b and l2 = eps_eve_k/R_b taken at the local point,
    so all three summands coincide there and the bound is tight.
    """

    scn: LinkScenario
    local_d_k: float
    local_p_m: float
    lambda1: float
    lambda2: float

    def __call__(self, d_k, p_m):
        prof, met = evaluate(self.scn, p_m, d_k)
        l1, l2 = self.lambda1, self.lambda2
        with np.errstate(divide="ignore", invalid="ignore"):
            s = 1.0 / met.r_b + l1 / (1.0 - prof.eps_eve_m) + l2 / prof.eps_eve_k
            val = s**3 / (27.0 * l1 * l2)
        val = np.where(np.isfinite(val), val, np.inf)
        return fbl._out(val)


def build_surrogate(scn: LinkScenario, local_d_k: float, local_p_m: float) -> Surrogate:
    prof, met = evaluate(scn, local_p_m, local_d_k)
    if not met.r_d > 0.0:
        raise ValueError("surrogate needs a local point with positive deception rate")
    l1 = (1.0 - prof.eps_eve_m) / met.r_b
    l2 = prof.eps_eve_k / met.r_b
    return Surrogate(scn, float(local_d_k), float(local_p_m), float(l1), float(l2))


def _snr_bound(n, d, eps_th):
    """SNR where the error crosses ``eps_th``; None if the error stays below it."""
    try:
        return fbl.invert_snr(n, d, eps_th)
    except fbl.UnreachableError:
        return None


def feasible_interval(scn: LinkScenario, *, p_m: float | None = None, d_k: float | None = None):
    """Interval of the free variable satisfying the threshold constraints.

    Pass exactly one of ``p_m`` (free variable d_K in [0, n]) or ``d_k`` (free
    variable P_M in [0, P_total], key power the remainder). Returns
    ``(lo, hi)`` or None when empty. The leakage-failure constraint is not
    monotone in either variable and is left to the caller.
    """
    if (p_m is None) == (d_k is None):
        raise TypeError("pass exactly one of p_m or d_k")
    th = scn.thresholds
    n = scn.n
    if p_m is not None:
        prof, _ = evaluate(scn, p_m, 0.0)
        if prof.eps_bob_m > th.eps_bob_m or prof.eps_eve_m > th.eps_eve_m:
            return None
        p_k = max(scn.p_total - p_m, 0.0)
        g_bob = scn.z_bob * p_k / scn.sigma2
        g_eve = scn.z_eve * p_k / scn.sigma2
        if g_bob <= 0.0:
            return None
        hi, c = fbl.invert_info_bits(g_bob, n, th.eps_bob_k)
        if c == "low":
            return None
        if c is None:
            hi -= D_MARGIN
        if g_eve <= 0.0:
            lo = 0.0
        else:
            lo, c = fbl.invert_info_bits(g_eve, n, th.eps_eve_k)
            if c == "high":
                return None
            if c is None:
                lo += D_MARGIN
        lo, hi = max(lo, 0.0), min(hi, float(n))
        return (lo, hi) if lo <= hi else None

    P, s2 = scn.p_total, scn.sigma2
    lo, hi = 0.0, P
    for z, eps_th in ((scn.z_bob, th.eps_bob_m), (scn.z_eve, th.eps_eve_m)):
        g = _snr_bound(n, scn.d_m, eps_th)
        if g is not None:
            lo = max(lo, g * (z * P + s2) / (z * (1.0 + g)) + P_MARGIN * P)
    # Bob's key: error <= th needs key SNR above the crossing
    g = _snr_bound(n, d_k, th.eps_bob_k)
    if g is not None:
        hi = min(hi, P - g * s2 / scn.z_bob - P_MARGIN * P)
    else:
        hi = min(hi, P * (1.0 - P_MARGIN))  # any positive key power suffices
    # Eve's key: error >= th needs key SNR below the crossing
    g = _snr_bound(n, d_k, th.eps_eve_k)
    if g is None:
        return None
    lo = max(lo, P - g * s2 / scn.z_eve + P_MARGIN * P)
    return (lo, hi) if lo <= hi else None


def _minimize_lf_filtered(scn, f, lo, hi, feasible_at, tol, maxiter, grid=257, incumbent=None):
    """Scalar minimization of ``f`` subject to the leakage-failure post-filter.

    ``incumbent`` is a known feasible value; it is kept when neither the
    unconstrained minimizer nor any grid point passes the filter.
    """
    x, fx = golden_section(f, lo, hi, tol=tol, maxiter=maxiter)
    if feasible_at(x):
        return x, fx
    xs = np.linspace(lo, hi, grid)
    best = None
    for i, xi in enumerate(xs):
        if feasible_at(xi):
            v = f(xi)
            if best is None or v < best[1]:
                best = (i, v)
    inc = None
    if incumbent is not None and feasible_at(incumbent):
        inc = (incumbent, f(incumbent))
    if best is None:
        return inc
    i, v = best
    a, b = xs[max(i - 1, 0)], xs[min(i + 1, grid - 1)]
    xr, fr = golden_section(f, a, b, tol=tol, maxiter=maxiter)
    out = (xr, fr) if fr < v and feasible_at(xr) else (xs[i], v)
    if inc is not None and inc[1] < out[1]:
        return inc
    return out


def _lf_ok(scn, p_m, d_k):
    _, met = evaluate(scn, p_m, d_k)
    return met.eps_lf <= scn.thresholds.eps_lf + 1e-12


def solve_sp1(scn: LinkScenario, sur: Surrogate, p_m: float, tol=1e-9, maxiter=300,
              incumbent: float | None = None) -> float:
    """Key length minimizing the surrogate with the message power held fixed."""
    iv = feasible_interval(scn, p_m=p_m)
    if iv is None:
        raise EmptyIntervalError(f"no feasible key length at p_m={p_m}")
    res = _minimize_lf_filtered(
        scn, lambda d: sur(d, p_m), iv[0], iv[1], lambda d: _lf_ok(scn, p_m, d), tol, maxiter,
        incumbent=incumbent,
    )
    if res is None:
        raise EmptyIntervalError(f"leakage constraint excludes every key length at p_m={p_m}")
    return float(res[0])


def solve_sp2(scn: LinkScenario, sur: Surrogate, d_k: float, tol=1e-9, maxiter=300,
              incumbent: float | None = None) -> float:
    """Message power minimizing the surrogate with the key length held fixed."""
    iv = feasible_interval(scn, d_k=d_k)
    if iv is None:
        raise EmptyIntervalError(f"no feasible message power at d_k={d_k}")
    res = _minimize_lf_filtered(
        scn, lambda p: sur(d_k, p), iv[0], iv[1], lambda p: _lf_ok(scn, p, d_k), tol, maxiter,
        incumbent=incumbent,
    )
    if res is None:
        raise EmptyIntervalError(f"leakage constraint excludes every power at d_k={d_k}")
    return float(res[0])


@dataclass(frozen=True)
class SolverConfig:
    mu_mm: float = 1e-7
    mu_bcd: float = 1.49e-8
    max_outer: int = 100  # Q
    max_inner: int = 100  # T
    init_d_k: float | None = None
    init_p_m: float | None = None
    order: str = "pd"  # "pd": P_M update then d_K update; "dp": reversed
    sub_tol: float = 1e-9
    sub_maxiter: int = 300
    prescan: int = 16

    def __post_init__(self):
        if self.mu_mm <= 0 or self.mu_bcd <= 0:
            raise ValueError("stop thresholds must be positive")
        if self.max_outer < 1 or self.max_inner < 1:
            raise ValueError("iteration caps must be >= 1")
        if self.order not in ("pd", "dp"):
            raise ValueError("order must be 'pd' or 'dp'")


@dataclass(frozen=True)
class TraceRow:
    q: int
    t: int
    d_k: float
    p_m: float
    surrogate: float
    r_d: float
    eps_lf: float


TRACE_COLUMNS = ("q", "t", "d_k", "p_m", "surrogate", "r_d", "eps_lf")


@dataclass
class SolverResult:
    d_k_star: int | None
    p_m_star: float | None
    p_k_star: float | None
    r_d: float
    eps_lf: float
    status: str  # "converged" | "iteration-cap" | "infeasible"
    d_k_relaxed: float | None = None
    outer_iterations: int = 0
    inner_cap_hits: int = 0
    p_total_used: float | None = None
    reduced_power: bool = False
    trace: list = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"

    def write_trace(self, path):
        write_trace_csv(self.trace, path)


def write_trace_csv(trace, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TRACE_COLUMNS)
        for r in trace:
            w.writerow([r.q, r.t, repr(r.d_k), repr(r.p_m), repr(r.surrogate), repr(r.r_d), repr(r.eps_lf)])


def initial_point(scn: LinkScenario, steps: int = 16) -> tuple[float, float]:
    """Feasible starting point ``(d_k, p_m)`` from a coarse full-power pre-scan.

    The bounding box of the points satisfying the threshold constraints
    (leakage excluded) gives a midpoint; if the midpoint also meets the
    leakage constraint it is used, otherwise the nearest fully feasible scan
    point. Falls back to a finer scan before giving up.
    """
    for s_p, s_d in ((steps, steps), (64, scn.n + 1), (512, scn.n + 1)):
        pm = np.linspace(0.0, scn.p_total, s_p)
        dk = np.linspace(0.0, scn.n, s_d)
        PM, DK = np.meshgrid(pm, dk, indexing="ij")
        PK = scn.p_total - PM
        box = feasible_mask(scn, PM, PK, DK, lf=False)
        full = feasible_mask(scn, PM, PK, DK)
        if not full.any():
            continue
        mid_p = 0.5 * (PM[box].min() + PM[box].max())
        mid_d = 0.5 * (DK[box].min() + DK[box].max())
        if check_feasible(scn, mid_p, mid_d):
            return float(mid_d), float(mid_p)
        dist = ((PM - mid_p) / scn.p_total) ** 2 + ((DK - mid_d) / scn.n) ** 2
        dist = np.where(full, dist, np.inf)
        i = np.unravel_index(np.argmin(dist), dist.shape)
        return float(DK[i]), float(PM[i])
    raise InfeasibleError("no feasible point under full-power transmission")


def refit_power(scn: LinkScenario, d_k: float, p_m: float, tol=1e-12, max_iter=200, mu=1e-15) -> float:
    """Re-optimize P_M for a fixed key length by MM on the power alone.

    Starts from ``p_m`` (projected into the feasible interval) and repeats
    surrogate construction plus the power subproblem until the relative
    change of 1/R_d drops below ``mu``.
    """
    iv = feasible_interval(scn, d_k=d_k)
    if iv is None:
        raise EmptyIntervalError(f"no feasible message power at d_k={d_k}")
    p = min(max(p_m, iv[0]), iv[1])
    if not check_feasible(scn, p, d_k):
        p = solve_sp2(scn, build_surrogate(scn, d_k, p), d_k, tol=tol)
    for _ in range(max_iter):
        sur = build_surrogate(scn, d_k, p)
        before = float(sur(d_k, p))
        p_new = solve_sp2(scn, sur, d_k, tol=tol)
        after = float(sur(d_k, p_new))
        if after > before:
            break
        p = p_new
        if before - after <= mu * before:
            break
    return p


def round_key(scn: LinkScenario, d_real: float, p_m: float):
    """Integer key length from the relaxed one.

    Each integer neighbour gets its message power re-fitted, then the
    neighbour with the larger true deception rate is kept (ties go to the
    shorter key). Returns ``(d_k, p_m)`` or None if neither is feasible.
    """
    best = None
    for d in sorted({math.floor(d_real), math.ceil(d_real)}):
        if not 0 <= d <= scn.n:
            continue
        try:
            p = refit_power(scn, d, p_m)
        except InfeasibleError:
            continue
        if not check_feasible(scn, p, d):
            continue
        r = evaluate(scn, p, d)[1].r_d
        if best is None or r > best[2]:
            best = (d, p, r)
    return None if best is None else (best[0], best[1])


def mm_bcd(scn: LinkScenario, cfg: SolverConfig | None = None) -> SolverResult:
    """Maximize the effective deception rate over (d_K, P_M) at full power."""
    cfg = cfg or SolverConfig()
    if cfg.init_d_k is not None and cfg.init_p_m is not None:
        d, p = float(cfg.init_d_k), float(cfg.init_p_m)
        rep = check_feasible(scn, p, d)
        if not rep:
            raise InfeasibleError(f"infeasible start, violates {rep.violated}")
    else:
        try:
            d, p = initial_point(scn, cfg.prescan)
        except InfeasibleError:
            return SolverResult(None, None, None, 0.0, 1.0, "infeasible", p_total_used=scn.p_total)
    kw = dict(tol=cfg.sub_tol, maxiter=cfg.sub_maxiter)

    def record(q, t, sur, d, p):
        _, met = evaluate(scn, p, d)
        trace.append(TraceRow(q, t, d, p, float(sur(d, p)), float(met.r_d), float(met.eps_lf)))

    trace: list[TraceRow] = []
    converged = False
    inner_caps = 0
    q = 0
    for q in range(1, cfg.max_outer + 1):
        sur = build_surrogate(scn, d, p)
        start_val = float(sur(d, p))
        record(q, 0, sur, d, p)
        prev = start_val
        inner_done = False
        for t in range(1, cfg.max_inner + 1):
            d_new, p_new = d, p
            for step in cfg.order:
                if step == "p":
                    p_new = solve_sp2(scn, sur, d_new, incumbent=p_new, **kw)
                else:
                    d_new = solve_sp1(scn, sur, p_new, incumbent=d_new, **kw)
            val = float(sur(d_new, p_new))
            if val <= prev:
                d, p = d_new, p_new
            else:
                val = prev  # a subproblem returned a worse point; keep the old one
            record(q, t, sur, d, p)
            if abs(val - prev) <= cfg.mu_bcd * abs(prev):
                inner_done = True
                break
            prev = val
        if not inner_done:
            inner_caps += 1
        if abs(val - start_val) <= cfg.mu_mm * abs(start_val):
            converged = True
            break

    rounded = round_key(scn, d, p)
    if rounded is None:
        return SolverResult(None, None, None, 0.0, 1.0, "infeasible", d_k_relaxed=d,
                            outer_iterations=q, inner_cap_hits=inner_caps,
                            p_total_used=scn.p_total, trace=trace)
    d_int, p_fin = rounded
    _, met = evaluate(scn, p_fin, d_int)
    return SolverResult(
        d_k_star=int(d_int),
        p_m_star=float(p_fin),
        p_k_star=float(scn.p_total - p_fin),
        r_d=float(met.r_d),
        eps_lf=float(met.eps_lf),
        status="converged" if converged else "iteration-cap",
        d_k_relaxed=float(d),
        outer_iterations=q,
        inner_cap_hits=inner_caps,
        p_total_used=scn.p_total,
        trace=trace,
    )


def solve_with_fallback(scn: LinkScenario, cfg: SolverConfig | None = None, steps: int = 40) -> SolverResult:
    """Run :func:`mm_bcd`; if full power is infeasible, try reduced budgets.

    Reduced budgets ``p_total * k / steps`` for k = steps-1 .. 1 are solved
    with full use of the reduced budget and the best feasible result is
    returned with ``reduced_power=True``.
    """
    res = mm_bcd(scn, cfg)
    if res.feasible:
        return res
    best = None
    for k in range(steps - 1, 0, -1):
        sub = scn.with_(p_total=scn.p_total * k / steps)
        r = mm_bcd(sub, cfg)
        if r.feasible and (best is None or r.r_d > best.r_d):
            best = r
    if best is None:
        return res
    best.reduced_power = True
    return best
