"""The deceptive cipher and litter sequences.

With a ciphertext in the plaintext space, a receiver missing the key cannot
tell whether the cipher was on. A litter sequence in the key slot decodes as
an erasure, exactly like a key lost to noise.
"""

import numpy as np

from pldopt import cipher

space = cipher.CipherSpace(d_p=8, d_k_bits=8)
p, k = 0b10110010, 0x3C
m = space.encrypt(p, k)
print(f"plaintext {p:08b} key {k:02x} -> ciphertext {m:08b} -> {space.decrypt(m, k):08b}")
print("exhaustive 8-bit check:", space.exhaustive_check())

rng = np.random.default_rng(5)
codebook = rng.integers(0, 2, (16, 24), dtype=np.uint8)
w = cipher.gen_litter(codebook, d_max=4, seed=1)
print("litter distance to codebook:", int(cipher.hamming(w, codebook).min()),
      "->", cipher.bounded_distance_decode(w, codebook, 4).status.value)

noisy = codebook[3].copy()
noisy[:2] ^= 1
print("noisy codeword 3 ->", cipher.bounded_distance_decode(noisy, codebook, 4))

for mode in cipher.MODES:
    table = cipher.outcome_table(mode)
    print(f"\n{mode}:")
    for (c, kk), o in table.items():
        print(f"  ciphertext {c.value:8s} key {kk.value:8s} -> {o.value}")
