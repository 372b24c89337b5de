"""Monte-Carlo check of the analytic reception metrics.

Each trial draws independent success/erasure events for the ciphertext and
the key at Bob and at Eve, classifies the plaintext outcome and aggregates.
Random numbers come from numpy's counter-based Philox generator, seeded
explicitly; trials are generated in fixed-size chunks so results do not
depend on how many chunks a caller runs at once.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .cipher import MODES, Outcome
from .link import ErrorProfile

CHUNK = 1 << 16


@dataclass(frozen=True)
class OutcomeStats:
    n_samples: int
    seed: int
    mode: str
    activation_prob: float
    counts: dict  # receiver -> {Outcome: count}
    eps_bob: float
    eps_eve: float
    eps_lf: float
    r_d: float

    def frequency(self, who: str, outcome: Outcome) -> float:
        return self.counts[who][outcome] / self.n_samples


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, index, 0]))


def _outcomes(cm_ok, k_ok, active, mode):
    """Vectorized outcome codes: 0 perception, 1 deception, 2 loss."""
    out = np.full(cm_ok.shape, 2, dtype=np.int8)
    # deactivated cipher: the key slot carries litter, always erased, and the
    # decoded ciphertext is the plaintext itself
    out[cm_ok & ~active] = 0
    on = cm_ok & active
    out[on & k_ok] = 0
    if mode == "random-activation":
        out[on & ~k_ok] = 1
    return out


def simulate(profile: ErrorProfile, n_samples: int, seed: int = 0,
             mode: str = "random-activation", activation_prob: float = 1.0) -> OutcomeStats:
    """Sample reception outcomes for ``n_samples`` transmissions."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "generic":
        # failure probabilities carry no undetected-error share, so every
        # failure is an erasure and the generic table reduces to this one
        mode_eff = "sufficient-redundancy"
    else:
        mode_eff = mode
    p = {
        "bob": (profile.eps_bob_m, profile.eps_bob_k),
        "eve": (profile.eps_eve_m, profile.eps_eve_k),
    }
    counts = {w: np.zeros(3, dtype=np.int64) for w in p}
    n_lf = 0
    n_rd = 0
    done = 0
    idx = 0
    while done < n_samples:
        m = min(CHUNK, n_samples - done)
        u = _chunk_rng(seed, idx).random((5, CHUNK))[:, :m]
        active = u[4] < activation_prob
        res = {}
        for j, w in enumerate(("bob", "eve")):
            em, ek = p[w]
            res[w] = _outcomes(u[2 * j] >= em, u[2 * j + 1] >= ek, active, mode_eff)
            counts[w] += np.bincount(res[w], minlength=3)
        n_lf += int(np.count_nonzero((res["bob"] != 0) | (res["eve"] == 0)))
        n_rd += int(np.count_nonzero((res["bob"] != 1) & (res["eve"] == 1)))
        done += m
        idx += 1
    order = (Outcome.PERCEPTION, Outcome.DECEPTION, Outcome.LOSS)
    cdict = {w: {o: int(c[i]) for i, o in enumerate(order)} for w, c in counts.items()}
    N = n_samples
    return OutcomeStats(
        n_samples=N,
        seed=seed,
        mode=mode,
        activation_prob=activation_prob,
        counts=cdict,
        eps_bob=1.0 - cdict["bob"][Outcome.PERCEPTION] / N,
        eps_eve=1.0 - cdict["eve"][Outcome.PERCEPTION] / N,
        eps_lf=n_lf / N,
        r_d=n_rd / N,
    )


def analytic_probabilities(profile: ErrorProfile, mode: str = "random-activation",
                           activation_prob: float = 1.0) -> dict:
    """Exact probabilities of every quantity :func:`simulate` estimates.

    Both receivers see the same activation draw, so the joint metrics are
    mixtures over the cipher state rather than products of the marginals.
    """
    a = activation_prob
    comp = {"bob": (profile.eps_bob_m, profile.eps_bob_k), "eve": (profile.eps_eve_m, profile.eps_eve_k)}
    per_state = {}  # (receiver, active) -> (perception, deception)
    for w, (em, ek) in comp.items():
        dec_on = (1.0 - em) * ek if mode == "random-activation" else 0.0
        per_state[(w, True)] = ((1.0 - em) * (1.0 - ek), dec_on)
        per_state[(w, False)] = (1.0 - em, 0.0)
    out = {}
    for w in comp:
        perc = a * per_state[(w, True)][0] + (1.0 - a) * per_state[(w, False)][0]
        dec = a * per_state[(w, True)][1] + (1.0 - a) * per_state[(w, False)][1]
        out[(w, Outcome.PERCEPTION)] = perc
        out[(w, Outcome.DECEPTION)] = dec
        out[(w, Outcome.LOSS)] = 1.0 - perc - dec
    out["eps_bob"] = 1.0 - out[("bob", Outcome.PERCEPTION)]
    out["eps_eve"] = 1.0 - out[("eve", Outcome.PERCEPTION)]
    lf = rd = 0.0
    for on, pr in ((True, a), (False, 1.0 - a)):
        bp, bd = per_state[("bob", on)]
        ep, ed = per_state[("eve", on)]
        lf += pr * (1.0 - bp * (1.0 - ep))
        rd += pr * (1.0 - bd) * ed
    out["eps_lf"] = lf
    out["r_d"] = rd
    return out


@dataclass(frozen=True)
class Agreement:
    metric: str
    empirical: float
    analytic: float
    sigma: float
    z: float
    flagged: bool


def agreement_report(stats: OutcomeStats, profile: ErrorProfile, z_max: float = 4.0) -> list[Agreement]:
    """Binomial z-scores of every empirical frequency against its analytic value.

    Zero-variance metrics (analytic probability 0 or 1) are checked for an
    exact match instead; a mismatch there is reported with infinite z.
    """
    ana = analytic_probabilities(profile, stats.mode, stats.activation_prob)
    emp = {"eps_bob": stats.eps_bob, "eps_eve": stats.eps_eve, "eps_lf": stats.eps_lf, "r_d": stats.r_d}
    for w in ("bob", "eve"):
        for o in Outcome:
            emp[(w, o)] = stats.frequency(w, o)
    rows = []
    for key, e in emp.items():
        a = float(ana[key])
        sigma = math.sqrt(max(a * (1.0 - a), 0.0) / stats.n_samples)
        if sigma == 0.0:
            z = 0.0 if e == a else math.inf
        else:
            z = (e - a) / sigma
        name = key if isinstance(key, str) else f"{key[0]}_{key[1].value}"
        rows.append(Agreement(name, e, a, sigma, z, abs(z) > z_max))
    return rows


STATS_COLUMNS = ("metric", "empirical", "analytic", "sigma", "z", "flagged")


def write_stats_csv(rows: list[Agreement], path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(STATS_COLUMNS)
        for r in rows:
            w.writerow([r.metric, repr(r.empirical), repr(r.analytic), repr(r.sigma), repr(r.z), int(r.flagged)])
