"""Configuration-driven experiment runner.

Configs are INI files. Every key has a default, so an empty file runs the
default setup (z_bob = 0 dB, sigma^2 = 1 mW, n = 64, all thresholds 0.5).

    [run]         kind, out_dir, threads, seed
    [scenario]    z_bob_db, z_eve_db, sigma2, p_total, n, d_m
    [thresholds]  eps_bob_m, eps_eve_m, eps_bob_k, eps_eve_k, eps_lf
    [solver]      mu_mm, mu_bcd, max_outer, max_inner, order, fallback
    [sweep]       z_eve_db, p_total   (lists "a,b,c" or ranges "start:stop:step")
    [grid]        p_m_steps, p_k_steps, d_k, refine, budget, resolution
    [montecarlo]  n_samples, mode, activation_prob
    [lut]         z_bob_db, z_eve_db
    [cipher]      d_p, d_k_bits, n, codewords, d_max

Exit codes: 0 success, 2 configuration error, 3 every point infeasible.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import json
import logging
import os
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import metadata

import numpy as np

from . import baselines, cipher, montecarlo, oracle
from .link import LinkScenario, Thresholds, check_feasible, evaluate, linear_to_db
from .solver import InfeasibleError, SolverConfig, mm_bcd, solve_with_fallback

log = logging.getLogger("pldopt.bench")

KINDS = ("solve", "sweep-zeve", "sweep-ptotal", "surface", "theorem1", "table3",
         "minlfp", "montecarlo", "lut", "cipher-demo")

RESULT_COLUMNS = ("tag", "z_bob_db", "z_eve_db", "p_total", "d_m", "eps_lf_th", "status",
                  "d_k", "p_m", "p_k", "r_d", "eps_lf", "reduced_power")
LUT_COLUMNS = ("z_bob_db", "z_eve_db", "d_k", "p_m", "r_d", "eps_lf", "feasible")
BUDGET_LINE_COLUMNS = ("d_k", "best_p_m", "best_p_k", "residual", "grid_step", "violations")
MINLFP_COLUMNS = ("z_eve_db", "p_total", "budget", "min_eps_lf_th")
CIPHER_COLUMNS = ("check", "cases", "failures")
REFERENCE_Z_EVE_DB = (-7.0, -5.0, -3.0)

SCHEMA = {
    "run": {"kind": str, "out_dir": str, "threads": int, "seed": int},
    "scenario": {"z_bob_db": float, "z_eve_db": float, "sigma2": float, "p_total": float,
                 "n": int, "d_m": float},
    "thresholds": {"eps_bob_m": float, "eps_eve_m": float, "eps_bob_k": float,
                   "eps_eve_k": float, "eps_lf": float},
    "solver": {"mu_mm": float, "mu_bcd": float, "max_outer": int, "max_inner": int,
               "order": str, "fallback": bool},
    "sweep": {"z_eve_db": "list", "p_total": "list"},
    "grid": {"p_m_steps": int, "p_k_steps": int, "d_k": "list", "refine": bool,
             "budget": str, "resolution": float},
    "montecarlo": {"n_samples": int, "mode": str, "activation_prob": float},
    "lut": {"z_bob_db": "list", "z_eve_db": "list"},
    "cipher": {"d_p": int, "d_k_bits": int, "n": int, "codewords": int, "d_max": int},
}

DEFAULTS = """
[run]
kind = solve
out_dir = out
threads = 1
seed = 0
[scenario]
z_bob_db = 0
z_eve_db = -5
sigma2 = 1
p_total = 2
n = 64
d_m = 16
[thresholds]
eps_bob_m = 0.5
eps_eve_m = 0.5
eps_bob_k = 0.5
eps_eve_k = 0.5
eps_lf = 0.5
[solver]
mu_mm = 1e-7
mu_bcd = 1.49e-8
max_outer = 100
max_inner = 100
order = pd
fallback = true
[sweep]
z_eve_db = -10:-5:1
p_total = 1:10:1
[grid]
p_m_steps = 512
p_k_steps = 512
d_k = 30,60
refine = true
budget = relaxed
resolution = 1e-4
[montecarlo]
n_samples = 1000000
mode = random-activation
activation_prob = 1.0
[lut]
z_bob_db = 0
z_eve_db = -10:-2:1
[cipher]
d_p = 8
d_k_bits = 8
n = 16
codewords = 8
d_max = 2
"""


class ConfigError(ValueError):
    pass


def parse_list(text: str) -> list[float]:
    """``"a,b,c"`` or inclusive ``"start:stop:step"``; empty text gives []."""
    text = text.strip()
    if not text:
        return []
    if ":" in text:
        parts = [float(x) for x in text.split(":")]
        if len(parts) != 3 or parts[2] == 0:
            raise ConfigError(f"bad range {text!r}")
        start, stop, step = parts
        k = int(np.floor((stop - start) / step + 1e-9))
        return [round(start + i * step, 12) for i in range(k + 1)] if k >= 0 else []
    return [float(x) for x in text.split(",") if x.strip()]


@dataclass
class ExperimentConfig:
    kind: str
    scenario: LinkScenario
    z_bob_db: float
    z_eve_db: float
    solver: SolverConfig
    fallback: bool
    sweep: dict
    grid: dict
    mc: dict
    lut: dict
    cipher: dict
    out_dir: str
    threads: int
    seed: int
    text: str = field(repr=False, default="")

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.text.encode()).hexdigest()


def load_config(path: str | None = None, text: str | None = None, overrides: dict | None = None) -> ExperimentConfig:
    cp = configparser.ConfigParser()
    cp.read_string(DEFAULTS)
    user = configparser.ConfigParser()
    try:
        if path is not None:
            with open(path) as fh:
                user.read_file(fh)
        if text is not None:
            user.read_string(text)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(str(exc)) from exc
    for sec in user.sections():
        if sec not in SCHEMA:
            raise ConfigError(f"unknown section [{sec}]")
        for key, val in user[sec].items():
            if key not in SCHEMA[sec]:
                raise ConfigError(f"unknown key {sec}.{key}")
            cp[sec][key] = val
    for (sec, key), val in (overrides or {}).items():
        cp[sec][key] = str(val)

    vals = {}
    try:
        for sec, keys in SCHEMA.items():
            vals[sec] = {}
            for key, typ in keys.items():
                raw = cp[sec][key]
                if typ == "list":
                    vals[sec][key] = parse_list(raw)
                elif typ is bool:
                    vals[sec][key] = cp[sec].getboolean(key)
                else:
                    vals[sec][key] = typ(raw)
        sc, th = vals["scenario"], vals["thresholds"]
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            thresholds = Thresholds(**th)
        scn = LinkScenario.from_db(sc["z_bob_db"], sc["z_eve_db"], sigma2=sc["sigma2"],
                                   p_total=sc["p_total"], n=sc["n"], d_m=sc["d_m"],
                                   thresholds=thresholds)
        s = vals["solver"]
        solver = SolverConfig(mu_mm=s["mu_mm"], mu_bcd=s["mu_bcd"], max_outer=s["max_outer"],
                              max_inner=s["max_inner"], order=s["order"])
    except (ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from exc
    run = vals["run"]
    if run["kind"] not in KINDS:
        raise ConfigError(f"unknown experiment kind {run['kind']!r}")
    if vals["grid"]["budget"] not in ("full", "relaxed"):
        raise ConfigError("grid.budget must be 'full' or 'relaxed'")
    if vals["montecarlo"]["mode"] not in cipher.MODES:
        raise ConfigError(f"unknown montecarlo.mode {vals['montecarlo']['mode']!r}")
    canon = "\n".join(f"{sec}.{k}={cp[sec][k].strip()}" for sec in SCHEMA for k in SCHEMA[sec])
    return ExperimentConfig(
        kind=run["kind"], scenario=scn, z_bob_db=sc["z_bob_db"], z_eve_db=sc["z_eve_db"],
        solver=solver, fallback=s["fallback"], sweep=vals["sweep"], grid=vals["grid"],
        mc=vals["montecarlo"], lut=vals["lut"], cipher=vals["cipher"], out_dir=run["out_dir"],
        threads=run["threads"], seed=run["seed"], text=canon,
    )


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return x


def write_csv(path, columns, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(r.get(c)) for c in columns])


def _db(x):
    return round(float(linear_to_db(x)), 9)


def solve_row(scn: LinkScenario, solver: SolverConfig, fallback: bool) -> dict:
    res = solve_with_fallback(scn, solver) if fallback else mm_bcd(scn, solver)
    row = dict(tag="pld", z_bob_db=_db(scn.z_bob), z_eve_db=_db(scn.z_eve), p_total=scn.p_total,
               d_m=scn.d_m, eps_lf_th=scn.thresholds.eps_lf, status=res.status, d_k=res.d_k_star,
               p_m=res.p_m_star, p_k=res.p_k_star, r_d=res.r_d if res.feasible else None,
               eps_lf=res.eps_lf if res.feasible else None, reduced_power=res.reduced_power)
    return row


def baseline_rows(scn: LinkScenario) -> list[dict]:
    common = dict(z_bob_db=_db(scn.z_bob), z_eve_db=_db(scn.z_eve), p_total=scn.p_total,
                  d_m=scn.d_m, eps_lf_th=scn.thresholds.eps_lf, d_k=0, p_k=0.0, r_d=0.0,
                  reduced_power=False)
    bp = baselines.baseline_power(scn)
    br = baselines.baseline_rate(scn)
    return [
        dict(common, tag="baseline-power", status="ok", p_m=bp.p_m, eps_lf=bp.eps_lf),
        dict(common, tag="baseline-rate", status=f"n={br.n}", p_m=br.p_m, eps_lf=br.eps_lf),
    ]


def _point(args):
    scn, solver, fallback = args
    return [solve_row(scn, solver, fallback)] + baseline_rows(scn)


def _pmap(fn, items, threads):
    if threads > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def _sort(rows):
    order = {"pld": 0, "baseline-power": 1, "baseline-rate": 2}
    return sorted(rows, key=lambda r: (r["z_bob_db"], r["z_eve_db"], r["p_total"], r["eps_lf_th"],
                                       order.get(r["tag"], 9)))


def _scenarios(cfg: ExperimentConfig, axis: str) -> list[LinkScenario]:
    base = cfg.scenario
    if axis == "zeve":
        return [base.with_(z_eve=10 ** (z / 10)) for z in cfg.sweep["z_eve_db"]]
    if axis == "ptotal":
        return [base.with_(p_total=p) for p in cfg.sweep["p_total"]]
    raise ValueError(axis)


def run(cfg: ExperimentConfig) -> tuple[int, list[str]]:
    """Execute one experiment; returns (exit code, artifact paths)."""
    os.makedirs(cfg.out_dir, exist_ok=True)
    t0 = time.perf_counter()
    kind = cfg.kind
    arts: list[str] = []
    code = 0

    def out(name):
        p = os.path.join(cfg.out_dir, name)
        arts.append(p)
        return p

    if kind in ("solve", "sweep-zeve", "sweep-ptotal", "table3"):
        if kind == "solve":
            scns = [cfg.scenario]
        elif kind == "sweep-zeve":
            scns = _scenarios(cfg, "zeve")
        elif kind == "sweep-ptotal":
            scns = _scenarios(cfg, "ptotal")
        else:
            scns = [cfg.scenario.with_(z_eve=10 ** (z / 10)) for z in REFERENCE_Z_EVE_DB]
        rows = [r for chunk in _pmap(_point, [(s, cfg.solver, cfg.fallback) for s in scns], cfg.threads)
                for r in chunk]
        rows = _sort(rows)
        write_csv(out(f"{kind.replace('-', '_')}.csv"), RESULT_COLUMNS, rows)
        if kind == "solve":
            res = mm_bcd(cfg.scenario, cfg.solver)
            res.write_trace(out("trace.csv"))
        pld = [r for r in rows if r["tag"] == "pld"]
        if pld and all(r["r_d"] is None for r in pld):
            code = 3
    elif kind == "surface":
        g = oracle.GridSpec(p_m_steps=cfg.grid["p_m_steps"], p_k_steps=cfg.grid["p_k_steps"])
        surf = oracle.search_fullpower(cfg.scenario, g, refine=cfg.grid["refine"])
        surf.write_csv(out("surface.csv"))
        if surf.empty:
            code = 3
    elif kind == "theorem1":
        g = oracle.GridSpec(p_m_steps=cfg.grid["p_m_steps"], p_k_steps=cfg.grid["p_k_steps"])
        rows = []
        for d in cfg.grid["d_k"]:
            try:
                s = oracle.search_2d_power(cfg.scenario, d, g)
            except InfeasibleError:
                rows.append(dict(d_k=d))
                continue
            pm, pk, _ = s.best
            rows.append(dict(d_k=d, best_p_m=pm, best_p_k=pk, residual=cfg.scenario.p_total - pm - pk,
                             grid_step=s.x[1] - s.x[0],
                             violations=len(oracle.budget_line_violations(cfg.scenario, d, g))))
        write_csv(out("theorem1.csv"), BUDGET_LINE_COLUMNS, rows)
        if rows and all(r.get("best_p_m") is None for r in rows):
            code = 3
    elif kind == "minlfp":
        rows = []
        zs = cfg.sweep["z_eve_db"] or [cfg.z_eve_db]
        for z in zs:
            for p in cfg.sweep["p_total"]:
                scn = cfg.scenario.with_(z_eve=10 ** (z / 10), p_total=p)
                try:
                    v = oracle.min_feasible_lfp_threshold(scn, cfg.grid["resolution"],
                                                          budget=cfg.grid["budget"])
                except InfeasibleError:
                    v = None
                rows.append(dict(z_eve_db=z, p_total=p, budget=cfg.grid["budget"], min_eps_lf_th=v))
        write_csv(out("minlfp.csv"), MINLFP_COLUMNS, rows)
    elif kind == "montecarlo":
        res = mm_bcd(cfg.scenario, cfg.solver)
        if not res.feasible:
            write_csv(out("montecarlo.csv"), montecarlo.STATS_COLUMNS, [])
            code = 3
        else:
            prof, _ = evaluate(cfg.scenario, res.p_m_star, res.d_k_star)
            stats = montecarlo.simulate(prof, cfg.mc["n_samples"], cfg.seed, cfg.mc["mode"],
                                        cfg.mc["activation_prob"])
            montecarlo.write_stats_csv(montecarlo.agreement_report(stats, prof), out("montecarlo.csv"))
    elif kind == "lut":
        rows = export_lut(cfg)
        write_csv(out("lut.csv"), LUT_COLUMNS, rows)
        if rows and not any(r["feasible"] for r in rows):
            code = 3
    elif kind == "cipher-demo":
        write_csv(out("cipher_demo.csv"), CIPHER_COLUMNS, cipher_demo(cfg))

    manifest = dict(kind=kind, config_sha256=cfg.digest, exit_code=code, artifacts=sorted(arts),
                    versions={m: _version(m) for m in ("pldopt", "numpy", "scipy")},
                    wall_time_s=round(time.perf_counter() - t0, 3))
    with open(os.path.join(cfg.out_dir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
    return code, arts


def _version(mod):
    try:
        return metadata.version(mod)
    except metadata.PackageNotFoundError:
        return "unknown"


def _lut_cell(args):
    scn, solver = args
    res = mm_bcd(scn, solver)
    ok = res.feasible and bool(check_feasible(scn, res.p_m_star, res.d_k_star))
    return dict(z_bob_db=_db(scn.z_bob), z_eve_db=_db(scn.z_eve), d_k=res.d_k_star,
                p_m=res.p_m_star, r_d=res.r_d if ok else None, eps_lf=res.eps_lf if ok else None,
                feasible=ok)


def export_lut(cfg: ExperimentConfig) -> list[dict]:
    """Optimal strategy per (z_bob, z_eve) cell of the configured gain grid."""
    cells = []
    for zb in cfg.lut["z_bob_db"]:
        for ze in cfg.lut["z_eve_db"]:
            cells.append((cfg.scenario.with_(z_bob=10 ** (zb / 10), z_eve=10 ** (ze / 10)), cfg.solver))
    rows = _pmap(_lut_cell, cells, cfg.threads)
    return sorted(rows, key=lambda r: (r["z_bob_db"], r["z_eve_db"]))


def lut_lookup(rows: list[dict], z_bob_db: float, z_eve_db: float) -> dict:
    """Nearest-neighbour lookup in an exported table (Euclidean in dB)."""
    if not rows:
        raise LookupError("empty table")
    d = [(float(r["z_bob_db"]) - z_bob_db) ** 2 + (float(r["z_eve_db"]) - z_eve_db) ** 2 for r in rows]
    return rows[int(np.argmin(d))]


def cipher_demo(cfg: ExperimentConfig) -> list[dict]:
    c = cfg.cipher
    space = cipher.CipherSpace(c["d_p"], c["d_k_bits"])
    chk = space.exhaustive_check()
    rng = np.random.default_rng(cfg.seed)
    cb = rng.integers(0, 2, (c["codewords"], c["n"]), dtype=np.uint8)
    lit_fail = 0
    trials = 32
    for i in range(trials):
        w = cipher.gen_litter(cb, c["d_max"], seed=cfg.seed * 1000 + i)
        lit_fail += cipher.bounded_distance_decode(w, cb, c["d_max"]).status is not cipher.Status.ERASURE
    return [
        dict(check="round_trip", cases=chk["pairs"], failures=chk["round_trip"]),
        dict(check="key_substitution", cases=chk["wrong_keys"], failures=chk["key_substitution"]),
        dict(check="litter_erasure", cases=trials, failures=lit_fail),
        dict(check="key_expansion_injective", cases=1 << space.d_k_bits, failures=int(not space.is_injective())),
    ]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="pld-bench", description="Run deception-strategy experiments.")
    ap.add_argument("kind", choices=KINDS + ("run",),
                    help="experiment kind, or 'run' to take it from the config")
    ap.add_argument("-c", "--config", help="INI config file")
    ap.add_argument("-o", "--out", help="output directory")
    ap.add_argument("--seed", type=int)
    ap.add_argument("-j", "--threads", type=int)
    ap.add_argument("--p-m-steps", type=int)
    ap.add_argument("--p-k-steps", type=int)
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    ov = {}
    if args.kind != "run":
        ov[("run", "kind")] = args.kind
    for (sec, key), val in {("run", "out_dir"): args.out, ("run", "seed"): args.seed,
                            ("run", "threads"): args.threads, ("grid", "p_m_steps"): args.p_m_steps,
                            ("grid", "p_k_steps"): args.p_k_steps}.items():
        if val is not None:
            ov[(sec, key)] = val
    try:
        cfg = load_config(args.config, overrides=ov)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    code, arts = run(cfg)
    for a in arts:
        log.info("wrote %s", a)
    return code


if __name__ == "__main__":
    sys.exit(main())
