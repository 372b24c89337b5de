"""Link model: SINRs of the superposed ciphertext/key signal, component error
probabilities, leakage-failure probability and effective deception rate.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from . import fbl

SLACK = 1e-12


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class Thresholds:
    """Constraint thresholds. ``eps_eve_k`` is a lower bound, the rest upper bounds."""

    eps_bob_m: float = 0.5
    eps_eve_m: float = 0.5
    eps_bob_k: float = 0.5
    eps_eve_k: float = 0.5
    eps_lf: float = 0.5

    def __post_init__(self):
        for name in ("eps_bob_m", "eps_eve_m", "eps_bob_k", "eps_eve_k", "eps_lf"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"threshold {name}={v} must lie in (0, 1)")
        if self.eps_bob_k > 0.5 or self.eps_eve_k < 0.5:
            raise ValueError("full-power optimality needs eps_bob_k <= 0.5 <= eps_eve_k")
        if self.eps_bob_k == 0.5 or self.eps_eve_k == 0.5:
            warnings.warn(
                "key thresholds at 0.5: full-power optimality holds only weakly",
                stacklevel=3,
            )


@dataclass(frozen=True)
class LinkScenario:
    """One problem instance. Gains are linear, powers and noise in mW."""

    z_bob: float = 1.0
    z_eve: float = float(db_to_linear(-5.0))
    sigma2: float = 1.0
    p_total: float = 2.0
    n: int = 64
    d_m: float = 16
    thresholds: Thresholds = field(default_factory=lambda: _quiet(Thresholds))

    def __post_init__(self):
        for name in ("z_bob", "z_eve", "sigma2", "p_total"):
            v = getattr(self, name)
            if not (v > 0.0 and math.isfinite(v)):
                raise ValueError(f"{name}={v} must be positive and finite")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("blocklength n must be a positive integer")
        if not 0 < self.d_m <= self.n:
            raise ValueError("need 0 < d_m <= n")

    @classmethod
    def from_db(cls, z_bob_db=0.0, z_eve_db=-5.0, **kw) -> "LinkScenario":
        return cls(z_bob=float(db_to_linear(z_bob_db)), z_eve=float(db_to_linear(z_eve_db)), **kw)

    def with_(self, **kw) -> "LinkScenario":
        return replace(self, **kw)


def _quiet(factory, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return factory(**kw)


def default_thresholds(**kw) -> Thresholds:
    """Thresholds without the 0.5-equality warning (the defaults sit exactly there)."""
    return _quiet(Thresholds, **kw)


@dataclass(frozen=True)
class PowerSplit:
    p_m: float
    p_k: float

    def __post_init__(self):
        if self.p_m < 0.0 or self.p_k < 0.0:
            raise ValueError("powers must be nonnegative")

    @classmethod
    def full_power(cls, scn: LinkScenario, p_m: float) -> "PowerSplit":
        return cls(p_m, max(scn.p_total - p_m, 0.0))

    def validate(self, scn: LinkScenario):
        if self.p_m + self.p_k > scn.p_total * (1.0 + SLACK) + SLACK:
            raise ValueError("power split exceeds the budget")
        if self.p_m <= self.p_k:
            warnings.warn("message power should exceed key power", stacklevel=2)


@dataclass(frozen=True)
class ErrorProfile:
    """Decoding-failure probabilities of both components at both receivers.

    Fields may hold numpy arrays of a common shape for grid evaluation.
    """

    eps_bob_m: float
    eps_bob_k: float
    eps_eve_m: float
    eps_eve_k: float


@dataclass(frozen=True)
class Metrics:
    eps_bob: float
    eps_eve: float
    eps_lf: float
    r_b: float
    r_d: float


def sinr_message(z, p_m, p_k, sigma2):
    """Ciphertext SINR; the key component is interference before SIC."""
    return z * p_m / (z * p_k + sigma2)


def sinr_key(z, p_k, sigma2):
    """Key SNR after ideal cancellation of the ciphertext component."""
    return z * p_k / sigma2


def _eps(snr, n, d):
    # zero SNR means the component is absent: always lost
    return np.where(np.asarray(snr) > 0.0, fbl.fbl_error(np.maximum(snr, 1e-300), n, d), 1.0)


def error_profile(scn: LinkScenario, p_m, p_k, d_k) -> ErrorProfile:
    """Component error probabilities for split (p_m, p_k) and key length d_k.

    Broadcasts over array arguments.
    """
    p_m = np.asarray(p_m, dtype=float)
    p_k = np.asarray(p_k, dtype=float)
    d_k = np.asarray(d_k, dtype=float)
    shape = np.broadcast_shapes(p_m.shape, p_k.shape, d_k.shape)
    out = []
    for z in (scn.z_bob, scn.z_eve):
        out.append(_eps(sinr_message(z, p_m, p_k, scn.sigma2), scn.n, scn.d_m))
        out.append(_eps(sinr_key(z, p_k, scn.sigma2), scn.n, d_k))
    out = [fbl._out(np.broadcast_to(x, shape).astype(float)) for x in out]
    return ErrorProfile(eps_bob_m=out[0], eps_bob_k=out[1], eps_eve_m=out[2], eps_eve_k=out[3])


def metrics(profile: ErrorProfile) -> Metrics:
    bm, bk = profile.eps_bob_m, profile.eps_bob_k
    em, ek = profile.eps_eve_m, profile.eps_eve_k
    eps_bob = 1.0 - (1.0 - bm) * (1.0 - bk)
    eps_eve = 1.0 - (1.0 - em) * (1.0 - ek)
    r_b = 1.0 - (1.0 - bm) * bk
    return Metrics(
        eps_bob=eps_bob,
        eps_eve=eps_eve,
        eps_lf=1.0 - (1.0 - eps_bob) * eps_eve,
        r_b=r_b,
        r_d=r_b * (1.0 - em) * ek,
    )


def evaluate(scn: LinkScenario, p_m, d_k, p_k=None) -> tuple[ErrorProfile, Metrics]:
    """Profile and metrics; ``p_k`` defaults to the full-power remainder."""
    if p_k is None:
        p_k = np.maximum(scn.p_total - np.asarray(p_m, dtype=float), 0.0)
    prof = error_profile(scn, p_m, p_k, d_k)
    return prof, metrics(prof)


def deception_rate(scn: LinkScenario, p_m, d_k, p_k=None):
    return evaluate(scn, p_m, d_k, p_k)[1].r_d


CONSTRAINTS = (
    "nonnegativity",
    "power_budget",
    "key_length",
    "eps_bob_m",
    "eps_eve_m",
    "eps_bob_k",
    "eps_eve_k",
    "eps_lf",
)


@dataclass(frozen=True)
class FeasibilityReport:
    checks: dict
    profile: ErrorProfile
    metrics: Metrics

    @property
    def feasible(self) -> bool:
        return all(self.checks.values())

    @property
    def violated(self) -> list[str]:
        return [k for k, ok in self.checks.items() if not ok]

    def __bool__(self):
        return self.feasible


def constraint_mask(scn: LinkScenario, p_m, p_k, d_k, prof=None, met=None, *, lf=True) -> dict:
    """Per-constraint boolean arrays; the vectorized core of :func:`check_feasible`."""
    th = scn.thresholds
    p_m = np.asarray(p_m, dtype=float)
    p_k = np.asarray(p_k, dtype=float)
    d_k = np.asarray(d_k, dtype=float)
    if prof is None:
        prof = error_profile(scn, p_m, p_k, d_k)
    if met is None:
        met = metrics(prof)
    checks = {
        "nonnegativity": (p_m >= -SLACK) & (p_k >= -SLACK),
        "power_budget": p_m + p_k <= scn.p_total + SLACK * max(1.0, scn.p_total),
        "key_length": (d_k >= -SLACK) & (d_k <= scn.n + SLACK),
        "eps_bob_m": np.asarray(prof.eps_bob_m) <= th.eps_bob_m + SLACK,
        "eps_eve_m": np.asarray(prof.eps_eve_m) <= th.eps_eve_m + SLACK,
        "eps_bob_k": np.asarray(prof.eps_bob_k) <= th.eps_bob_k + SLACK,
        "eps_eve_k": np.asarray(prof.eps_eve_k) >= th.eps_eve_k - SLACK,
    }
    if lf:
        checks["eps_lf"] = np.asarray(met.eps_lf) <= th.eps_lf + SLACK
    return checks


def feasible_mask(scn: LinkScenario, p_m, p_k, d_k, prof=None, met=None, *, lf=True):
    checks = constraint_mask(scn, p_m, p_k, d_k, prof, met, lf=lf)
    out = None
    for v in checks.values():
        out = v if out is None else out & v
    return out


def check_feasible(scn: LinkScenario, p_m: float, d_k: float, p_k: float | None = None) -> FeasibilityReport:
    """Evaluate every constraint of the deception problem at one point."""
    if p_k is None:
        p_k = max(scn.p_total - p_m, 0.0)
    prof, met = evaluate(scn, p_m, d_k, p_k)
    checks = {k: bool(v) for k, v in constraint_mask(scn, p_m, p_k, d_k, prof, met).items()}
    return FeasibilityReport(checks, prof, met)


# Derivatives under the full-power substitution p_k = p_total - p_m.

def sinr_grad_pm(scn: LinkScenario, z: float, p_m):
    """d(gamma_M)/dP_M and d(gamma_K)/dP_M with p_k = p_total - p_m."""
    p_k = scn.p_total - np.asarray(p_m, dtype=float)
    dg_m = z * (z * scn.p_total + scn.sigma2) / (z * p_k + scn.sigma2) ** 2
    dg_k = -z / scn.sigma2 * np.ones_like(p_k)
    return fbl._out(dg_m), fbl._out(dg_k)


def profile_grad(scn: LinkScenario, p_m, d_k) -> dict:
    """Partial derivatives of each component error w.r.t. P_M and d_K (full power).

    Returns a dict keyed by ``(component, variable)``, e.g. ``("eps_eve_k", "p_m")``.
    """
    p_m = np.asarray(p_m, dtype=float)
    d_k = np.asarray(d_k, dtype=float)
    p_k = scn.p_total - p_m
    out = {}
    for who, z in (("bob", scn.z_bob), ("eve", scn.z_eve)):
        g_m = sinr_message(z, p_m, p_k, scn.sigma2)
        g_k = sinr_key(z, p_k, scn.sigma2)
        dgm, dgk = sinr_grad_pm(scn, z, p_m)
        de_dg_m, _ = fbl.fbl_error_grad(g_m, scn.n, scn.d_m)
        de_dg_k, de_dd_k = fbl.fbl_error_grad(g_k, scn.n, d_k)
        out[(f"eps_{who}_m", "p_m")] = de_dg_m * dgm
        out[(f"eps_{who}_m", "d_k")] = 0.0 * d_k + 0.0 * p_m
        out[(f"eps_{who}_k", "p_m")] = de_dg_k * dgk
        out[(f"eps_{who}_k", "d_k")] = de_dd_k
    return {k: fbl._out(v) for k, v in out.items()}


def deception_rate_grad(scn: LinkScenario, p_m, d_k):
    """Gradient (dR_d/dP_M, dR_d/dd_K) of the deception rate at full power.

    Product rule on R_d = R_b (1 - eps_eve_m) eps_eve_k with
    R_b = 1 - (1 - eps_bob_m) eps_bob_k.
    """
    prof, met = evaluate(scn, p_m, d_k)
    g = profile_grad(scn, p_m, d_k)
    res = []
    for var in ("p_m", "d_k"):
        d_rb = g[("eps_bob_m", var)] * prof.eps_bob_k - (1.0 - prof.eps_bob_m) * g[("eps_bob_k", var)]
        d_rd = (
            d_rb * (1.0 - prof.eps_eve_m) * prof.eps_eve_k
            - met.r_b * g[("eps_eve_m", var)] * prof.eps_eve_k
            + met.r_b * (1.0 - prof.eps_eve_m) * g[("eps_eve_k", var)]
        )
        res.append(d_rd)
    return tuple(res)
