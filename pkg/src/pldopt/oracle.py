"""Exhaustive-search reference for the deception problem.

Dense, vectorized evaluation over the decision space. Used to check the
MM-BCD solver, to visualize feasible regions and to verify that optimal
power allocations exhaust the budget.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .link import LinkScenario, constraint_mask, error_profile, metrics
from .solver import InfeasibleError

SURFACE_COLUMNS = ("p_m", "p_k_or_dk", "r_d", "eps_lf", "feasible")


@dataclass(frozen=True)
class GridSpec:
    p_m_steps: int = 512
    p_k_steps: int = 512
    d_k_values: tuple | None = None  # None: every integer in 0..n
    full_power: bool = True

    def __post_init__(self):
        if self.p_m_steps < 2 or self.p_k_steps < 2:
            raise ValueError("need at least 2 steps per power axis")

    def keys(self, scn: LinkScenario) -> np.ndarray:
        if self.d_k_values is None:
            return np.arange(scn.n + 1, dtype=float)
        return np.asarray(self.d_k_values, dtype=float)


@dataclass
class Surface:
    """Dense grid evaluation. ``y`` holds P_K (power grid) or d_K (full power)."""

    x: np.ndarray
    y: np.ndarray
    r_d: np.ndarray
    eps_lf: np.ndarray
    feasible: np.ndarray
    kind: str  # "power" or "fullpower"
    best: tuple | None = None  # (x, y, r_d)

    @property
    def empty(self) -> bool:
        return not self.feasible.any()

    def masked_r_d(self):
        return np.where(self.feasible, self.r_d, np.nan)

    def write_csv(self, path):
        X, Y = np.meshgrid(self.x, self.y, indexing="ij")
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(SURFACE_COLUMNS)
            for row in zip(X.ravel(), Y.ravel(), self.r_d.ravel(), self.eps_lf.ravel(), self.feasible.ravel()):
                w.writerow([repr(float(row[0])), repr(float(row[1])), repr(float(row[2])),
                            repr(float(row[3])), int(row[4])])


def _evaluate(scn, p_m, p_k, d_k, lf=True):
    prof = error_profile(scn, p_m, p_k, d_k)
    met = metrics(prof)
    checks = constraint_mask(scn, p_m, p_k, d_k, prof, met, lf=lf)
    mask = np.logical_and.reduce([np.broadcast_to(v, np.shape(met.r_d)) for v in checks.values()])
    return prof, met, mask, checks


def _argmax(r_d, mask):
    """Index of the feasible maximum; ties go to the first (smallest) index."""
    if not mask.any():
        return None
    vals = np.where(mask, r_d, -np.inf)
    return np.unravel_index(np.argmax(vals), vals.shape)


def search_2d_power(scn: LinkScenario, d_k: float, grid: GridSpec | None = None) -> Surface:
    """Deception rate over (P_M, P_K) in [0, P_total]^2 for a fixed key length."""
    grid = grid or GridSpec()
    pm = np.linspace(0.0, scn.p_total, grid.p_m_steps)
    pk = np.linspace(0.0, scn.p_total, grid.p_k_steps)
    PM, PK = np.meshgrid(pm, pk, indexing="ij")
    _, met, mask, _ = _evaluate(scn, PM, PK, d_k)
    i = _argmax(met.r_d, mask)
    if i is None:
        raise InfeasibleError("no feasible point on the power grid")
    return Surface(pm, pk, met.r_d, met.eps_lf, mask, "power", (pm[i[0]], pk[i[1]], float(met.r_d[i])))


def search_fullpower(scn: LinkScenario, grid: GridSpec | None = None, refine: bool = False,
                     refine_points: int = 2001) -> Surface:
    """Deception rate over (P_M, d_K) with P_K = P_total - P_M.

    With ``refine`` the best key length and its two neighbours are re-searched
    on a fine power grid spanning two coarse steps either side of the coarse
    optimum. An all-infeasible grid yields ``best=None``.
    """
    grid = grid or GridSpec()
    pm = np.linspace(0.0, scn.p_total, grid.p_m_steps)
    dk = grid.keys(scn)
    PM, DK = np.meshgrid(pm, dk, indexing="ij")
    _, met, mask, _ = _evaluate(scn, PM, scn.p_total - PM, DK)
    i = _argmax(met.r_d, mask)
    surf = Surface(pm, dk, met.r_d, met.eps_lf, mask, "fullpower")
    if i is None:
        return surf
    best = (float(pm[i[0]]), float(dk[i[1]]), float(met.r_d[i]))
    if refine:
        step = pm[1] - pm[0]
        lo = max(best[0] - 2 * step, 0.0)
        hi = min(best[0] + 2 * step, scn.p_total)
        fine = np.linspace(lo, hi, refine_points)
        j = i[1]
        keys = dk[max(j - 1, 0): j + 2]
        FP, FD = np.meshgrid(fine, keys, indexing="ij")
        _, fmet, fmask, _ = _evaluate(scn, FP, scn.p_total - FP, FD)
        k = _argmax(fmet.r_d, fmask)
        if k is not None and fmet.r_d[k] > best[2]:
            best = (float(fine[k[0]]), float(keys[k[1]]), float(fmet.r_d[k]))
    surf.best = best
    return surf


def explain_infeasible(scn: LinkScenario, p_m, p_k, d_k) -> dict:
    """Per-constraint masks on a grid; False entries name the violated constraint."""
    return _evaluate(scn, p_m, p_k, d_k)[3]


def budget_line_violations(scn: LinkScenario, d_k: float, grid: GridSpec | None = None, tol=1e-12) -> list:
    """Feasible interior points whose on-budget counterpart (same P_K) is worse.

    An empty list means every feasible point with leftover power is matched
    or beaten by moving the residual into the message component.
    """
    surf = search_2d_power(scn, d_k, grid)
    PM, PK = np.meshgrid(surf.x, surf.y, indexing="ij")
    interior = surf.feasible & (PM + PK < scn.p_total * (1.0 - 1e-12))
    pm_full = np.maximum(scn.p_total - PK, 0.0)
    _, met_full, _, _ = _evaluate(scn, pm_full, PK, d_k)
    bad = interior & (met_full.r_d < surf.r_d - tol)
    return [(float(a), float(b)) for a, b in zip(PM[bad], PK[bad])]


def _min_lf_fullpower(scn: LinkScenario, grid: GridSpec) -> float:
    """Smallest leakage-failure probability over the full-power region (LF constraint off)."""
    pm = np.linspace(0.0, scn.p_total, grid.p_m_steps)
    dk = grid.keys(scn)
    PM, DK = np.meshgrid(pm, dk, indexing="ij")
    _, met, mask, _ = _evaluate(scn, PM, scn.p_total - PM, DK, lf=False)
    return float(np.min(np.where(mask, met.eps_lf, np.inf)))


def min_feasible_lfp_threshold(scn: LinkScenario, resolution: float = 1e-4,
                               grid: GridSpec | None = None, budget: str = "full",
                               power_step: float = 0.05) -> float:
    """Smallest leakage-failure threshold with a nonempty feasible region.

    ``budget="full"`` uses the full-power region (P_M + P_K = P_total).
    ``budget="relaxed"`` allows P_M + P_K <= P_total; that region is the union
    of full-power regions over budgets P' <= P_total, scanned on the absolute
    grid ``power_step, 2*power_step, ...`` plus P_total itself, so results for
    budgets on a common step lattice are nested.

    Bisection on the threshold (feasibility is monotone in it); the returned
    value is feasible and within ``resolution`` of the infeasible side.
    """
    if resolution <= 0:
        raise ValueError("resolution must be positive")
    if budget == "full":
        grid = grid or GridSpec(p_m_steps=2048)
        best = _min_lf_fullpower(scn, grid)
    elif budget == "relaxed":
        grid = grid or GridSpec(p_m_steps=512)
        k = int(np.floor(scn.p_total / power_step + 1e-9))
        budgets = [power_step * i for i in range(1, k + 1)]
        if not budgets or abs(budgets[-1] - scn.p_total) > 1e-9 * scn.p_total:
            budgets.append(scn.p_total)
        best = min(_min_lf_fullpower(scn.with_(p_total=b), grid) for b in budgets)
    else:
        raise ValueError("budget must be 'full' or 'relaxed'")

    def feasible(th):
        return best <= th

    lo, hi = 0.0, 1.0 - 1e-12
    if not feasible(hi):
        raise InfeasibleError("never feasible, even with a vacuous leakage threshold")
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi
