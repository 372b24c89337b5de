"""Deception against conventional secrecy.

Two baselines send no key. One tunes message power, one tunes the coding
rate at full power. Neither can deceive, and both leak more as Eve's
channel improves.
"""

from pldopt import baselines
from pldopt.link import LinkScenario
from pldopt.solver import mm_bcd

print("z_Eve   power-tuned   rate-tuned (n')   deception: LF      R_d")
for z in (-3, -5, -7):
    scn = LinkScenario.from_db(0.0, z, p_total=2.0)
    bp = baselines.baseline_power(scn)
    br = baselines.baseline_rate(scn)
    res = mm_bcd(scn)
    print(f"{z:4d}    {bp.eps_lf:.4f}        {br.eps_lf:.4f} ({br.n:2d})        {res.eps_lf:.4f}   {res.r_d:.4f}")

# the other rate knob: keep 64 channel uses and vary the payload
scn = LinkScenario.from_db(0.0, -5.0, p_total=2.0)
alt = baselines.baseline_rate(scn, knob="info_bits")
print(f"\npayload-tuned variant at -5 dB: {alt.d_m:.0f} bits, LF {alt.eps_lf:.4f}")
