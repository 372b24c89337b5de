"""Exhaustive search as ground truth.

Scanning the power plane for a fixed key length shows the optimum on the
budget line. Scanning (P_M, d_K) at full power gives a reference optimum to
compare against the iterative solver.
"""

from pldopt import oracle
from pldopt.link import LinkScenario
from pldopt.solver import InfeasibleError, mm_bcd

scn = LinkScenario.from_db(0.0, -10.0, p_total=10.0)
for d in (30, 60):
    s = oracle.search_2d_power(scn, d)
    pm, pk, rd = s.best
    print(f"d_K={d}: best P_M={pm:.3f}, P_K={pk:.3f}, unused {scn.p_total - pm - pk:.2e} mW, "
          f"R_d={rd:.6f}, feasible cells {s.feasible.sum()}, "
          f"points beaten by full power: {len(oracle.budget_line_violations(scn, d))}")

surf = oracle.search_fullpower(scn, oracle.GridSpec(p_m_steps=2048), refine=True)
res = mm_bcd(scn)
print(f"\noracle: P_M={surf.best[0]:.5f}, d_K={surf.best[1]:.0f}, R_d={surf.best[2]:.9f}")
print(f"solver: P_M={res.p_m_star:.5f}, d_K={res.d_k_star}, R_d={res.r_d:.9f}")

for P in (1, 2, 4, 8):
    s = scn.with_(p_total=float(P))
    try:
        oracle.min_feasible_lfp_threshold(s, 1e-2)
    except InfeasibleError:
        print(f"P={P} mW: no feasible point at all")
        continue
    full = oracle.min_feasible_lfp_threshold(s, 1e-4, budget="full")
    relaxed = oracle.min_feasible_lfp_threshold(s, 1e-4, budget="relaxed")
    print(f"P={P} mW: smallest reachable leakage threshold {full:.4f} (full) / {relaxed:.4f} (any split)")
