"""Reception metrics of one ciphertext/key split.

Both components share one block. Bob and Eve decode the ciphertext first
with the key as interference, then the key after cancellation. From the four
component errors follow the leakage-failure probability and the effective
deception rate.
"""

import warnings

import numpy as np

from pldopt import link

scn = link.LinkScenario.from_db(z_bob_db=0.0, z_eve_db=-5.0, p_total=2.0)

prof, met = link.evaluate(scn, p_m=1.43, d_k=27)
print("component errors:", {k: round(float(v), 4) for k, v in vars(prof).items()})
print(f"leakage failure {met.eps_lf:.4f}, deception rate {met.r_d:.4f}")

rep = link.check_feasible(scn, p_m=0.3, d_k=27)
print("p_m = 0.3 feasible?", rep.feasible, "violates", rep.violated)

# the metrics broadcast over grids
pm = np.linspace(0.5, 2.0, 4)[:, None]
d = np.array([10, 27, 45])[None, :]
_, grid = link.evaluate(scn, pm, d)
print("R_d on a 4x3 grid:\n", np.round(grid.r_d, 3))

gp, gd = link.deception_rate_grad(scn, 1.43, 27)
print(f"gradient at the same point: dR_d/dP_M = {gp:.4f}, dR_d/dd_K = {gd:.5f}")

with warnings.catch_warnings(record=True) as w:
    warnings.simplefilter("always")
    link.Thresholds()
print("threshold warning:", w[0].message)
