"""Designing the deception strategy.

The solver maximizes the deception rate over key length and message power,
spending the whole budget. Each outer step builds a convex tangent upper
bound of 1/R_d and minimizes it by alternating two scalar searches.
"""

from pldopt.link import LinkScenario, default_thresholds
from pldopt.solver import SolverConfig, mm_bcd, solve_with_fallback

scn = LinkScenario.from_db(0.0, -5.0, p_total=2.0)
res = mm_bcd(scn)
print(f"status {res.status} after {res.outer_iterations} outer steps")
print(f"d_K = {res.d_k_star} bits (relaxed {res.d_k_relaxed:.3f}), P_M = {res.p_m_star:.4f} mW, "
      f"P_K = {res.p_k_star:.4f} mW")
print(f"R_d = {res.r_d:.5f}, leakage failure = {res.eps_lf:.5f}")

print("\nfirst trace rows (q, t, d_K, P_M, surrogate, R_d):")
for row in res.trace[:6]:
    print(f"  {row.q} {row.t} {row.d_k:8.4f} {row.p_m:.5f} {row.surrogate:.6f} {row.r_d:.6f}")

# the update order does not change the answer here
alt = mm_bcd(scn, SolverConfig(order="dp"))
print(f"\nreversed order: d_K = {alt.d_k_star}, R_d = {alt.r_d:.8f}")

# a very strict leakage target is out of reach at 10 mW but not at about 4 mW
strict = LinkScenario.from_db(0.0, -5.0, p_total=10.0, thresholds=default_thresholds(eps_lf=0.00721))
print("\nstrict target at 10 mW:", mm_bcd(strict).status)
fb = solve_with_fallback(strict)
print(f"fallback: {fb.status}, uses {fb.p_total_used} mW, R_d = {fb.r_d:.4f}, LF = {fb.eps_lf:.5f}")
