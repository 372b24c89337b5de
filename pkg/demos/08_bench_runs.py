"""Config-driven experiment runs and the lookup table.

The same runs are available from the shell, for example
``pld-bench sweep-zeve -c demos/configs/zeve_sweep.ini -o out/zeve``.
"""

import csv
import os
import tempfile

from pldopt import bench

here = os.path.dirname(os.path.abspath(__file__))
out = tempfile.mkdtemp(prefix="pld-")

cfg = bench.load_config(os.path.join(here, "configs", "zeve_sweep.ini"),
                        overrides={("run", "out_dir"): os.path.join(out, "sweep")})
code, files = bench.run(cfg)
print("sweep exit code", code)
with open(files[0]) as fh:
    for row in csv.DictReader(fh):
        rd = f"{float(row['r_d']):.4f}" if row["r_d"] else "-"
        print(f"  {row['tag']:15s} z_Eve {row['z_eve_db']:>6s}  LF {float(row['eps_lf']):.4f}  R_d {rd}")

cfg = bench.load_config(os.path.join(here, "configs", "lut.ini"),
                        overrides={("run", "out_dir"): os.path.join(out, "lut")})
code, files = bench.run(cfg)
with open(files[0]) as fh:
    table = list(csv.DictReader(fh))
print(f"\nLUT with {len(table)} cells, exit code {code}")
hit = bench.lut_lookup(table, z_bob_db=0.3, z_eve_db=-6.4)
print("measured gains (0.3 dB, -6.4 dB) ->", {k: hit[k] for k in ("z_eve_db", "d_k", "p_m", "r_d")})
print("artifacts in", out)
