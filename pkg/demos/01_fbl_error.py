"""Short-packet error probability.

At 64 channel uses the error probability of a 16-bit payload drops from
near certainty to about 1e-6 as the SNR moves through 0 dB. The inverse
helpers answer the design questions: how many bits fit at a target error
rate, and what SNR a payload needs.
"""

import numpy as np

from pldopt import fbl

n, d = 64, 16
print("SNR [dB]   capacity   dispersion   error")
for snr_db in (-10, -5, -3, 0, 3):
    g = 10 ** (snr_db / 10)
    print(f"{snr_db:7d}   {fbl.capacity(g):8.4f}   {fbl.dispersion(g):10.4f}   {fbl.fbl_error(g, n, d):.3e}")

# bits that fit at 1e-3 error for a few SNRs (the result is clamped at 0 or n)
for snr_db in (-10, 0, 10, 30):
    root = fbl.invert_info_bits(10 ** (snr_db / 10), n, 1e-3)
    print(f"{snr_db:3d} dB -> {root.value:6.2f} bits" + (f"  [clamped {root.clamped}]" if root.clamped else ""))

g = fbl.invert_snr(n, d, 1e-5)
print(f"SNR needed for 16 bits at 1e-5: {10 * np.log10(g):.2f} dB")

ds, dd = fbl.fbl_error_grad(1.0, n, d)
print(f"sensitivities at 0 dB: d eps/d snr = {ds:.3e}, d eps/d bits = {dd:.3e}")
