"""Toy deceptive cipher, litter sequences, bounded-distance decoding and the
reception-outcome classifier.

Payloads (plaintext, ciphertext, key) are Python ints of fixed bit width;
channel codewords are numpy 0/1 vectors.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np

# odd multiplier: multiplication modulo 2**w is a bijection on w-bit words
_MIX = 0x9E3779B97F4A7C15


@dataclass(frozen=True)
class CipherSpace:
    """XOR cipher m = p ^ g(k) with an injective key expansion g.

    Ciphertexts live in the plaintext space (same width), so a ciphertext
    cannot be told apart from an unciphered plaintext, and distinct keys
    always decrypt a ciphertext to distinct plaintexts.
    """

    d_p: int
    d_k_bits: int

    def __post_init__(self):
        if self.d_p < 1 or self.d_k_bits < 0:
            raise ValueError("bit widths must be positive")
        if self.d_k_bits > self.d_p:
            raise ValueError("key expansion cannot be injective when d_k_bits > d_p")

    @property
    def d_m(self) -> int:
        return self.d_p

    def expand(self, k: int) -> int:
        """Key mask g(k); g(0) = 0."""
        self._check(k, self.d_k_bits, "key")
        return (k * _MIX) & ((1 << self.d_p) - 1)

    def encrypt(self, p: int, k: int) -> int:
        self._check(p, self.d_p, "plaintext")
        return p ^ self.expand(k)

    def decrypt(self, m: int, k: int) -> int:
        self._check(m, self.d_p, "ciphertext")
        return m ^ self.expand(k)

    def is_injective(self) -> bool:
        """Exhaustive check of the key expansion (intended for d_k_bits <= 16)."""
        masks = {self.expand(k) for k in range(1 << self.d_k_bits)}
        return len(masks) == 1 << self.d_k_bits

    def exhaustive_check(self) -> dict:
        """Failure counts of the round trip and key-substitution properties
        over every (plaintext, key) pair, and every wrong key. Vectorized; fine
        up to about 10-bit spaces.
        """
        p = np.arange(1 << self.d_p, dtype=np.uint64)[:, None]
        k = np.arange(1 << self.d_k_bits, dtype=np.uint64)
        g = (k * np.uint64(_MIX)) & np.uint64((1 << self.d_p) - 1)
        m = p ^ g[None, :]
        round_trip = int(np.count_nonzero((m ^ g[None, :]) != p))
        dec = m[:, :, None] ^ g[None, None, :]  # decrypt m(p, k) under every k2
        same = dec == p[:, :, None]
        same[:, np.arange(k.size), np.arange(k.size)] = False
        return {"round_trip": round_trip, "key_substitution": int(np.count_nonzero(same)),
                "pairs": p.size * k.size, "wrong_keys": p.size * k.size * (k.size - 1)}

    @staticmethod
    def _check(x, width, what):
        if not 0 <= x < (1 << width):
            raise ValueError(f"{what} {x} does not fit in {width} bits")


def hamming(a, b) -> np.ndarray:
    """Hamming distances between word(s) ``a`` and rows of ``b``."""
    return np.count_nonzero(np.asarray(a, dtype=np.uint8) != np.asarray(b, dtype=np.uint8), axis=-1)


class LitterError(RuntimeError):
    pass


def gen_litter(codebook, d_max: int, seed=None, budget: int = 10_000) -> np.ndarray:
    """Random n-bit word farther than ``d_max`` from every codeword.

    Rejection sampling with ``budget`` draws, then an exhaustive scan when
    n <= 20. Deterministic for a given seed.
    """
    cb = np.atleast_2d(np.asarray(codebook, dtype=np.uint8))
    n = cb.shape[1]
    rng = np.random.default_rng(seed)
    for _ in range(budget):
        w = rng.integers(0, 2, n, dtype=np.uint8)
        if hamming(w, cb).min() > d_max:
            return w
    if n <= 20:
        start = int(rng.integers(0, 1 << n))
        bits = np.arange(n - 1, -1, -1)
        for i in range(1 << n):
            w = ((((start + i) % (1 << n)) >> bits) & 1).astype(np.uint8)
            if hamming(w, cb).min() > d_max:
                return w
    raise LitterError(f"no word at distance > {d_max} from the codebook")


class Status(enum.Enum):
    SUCCESS = "success"
    ERASURE = "erasure"
    ERROR = "error"


@dataclass(frozen=True)
class DecodeResult:
    status: Status
    payload: int | None = None
    distance: int | None = None

    @classmethod
    def success(cls, payload=None, distance=None):
        return cls(Status.SUCCESS, payload, distance)

    @classmethod
    def erasure(cls):
        return cls(Status.ERASURE)

    @classmethod
    def error(cls, payload=None, distance=None):
        return cls(Status.ERROR, payload, distance)


def bounded_distance_decode(word, codebook, d_max: int) -> DecodeResult:
    """Nearest codeword if it is unique and within ``d_max``, else an erasure.

    The payload of a success is the row index of the codeword.
    """
    dist = hamming(word, np.atleast_2d(codebook))
    best = int(dist.min())
    hits = np.flatnonzero(dist == best)
    if best > d_max or len(hits) > 1:
        return DecodeResult.erasure()
    return DecodeResult.success(int(hits[0]), best)


def nearest_codeword_decode(word, codebook, truth: int) -> DecodeResult:
    """Decoder without a distance test: wrong guesses go undetected.

    ``truth`` is the transmitted row index, used only to label the outcome.
    Ties resolve to the lowest index.
    """
    dist = hamming(word, np.atleast_2d(codebook))
    i = int(np.argmin(dist))
    if i == truth:
        return DecodeResult.success(i, int(dist[i]))
    return DecodeResult.error(i, int(dist[i]))


class Outcome(enum.Enum):
    PERCEPTION = "perception"
    DECEPTION = "deception"
    LOSS = "loss"


MODES = ("generic", "sufficient-redundancy", "random-activation")


def classify_outcome(ciphertext: DecodeResult | Status, key: DecodeResult | Status,
                     mode: str = "random-activation") -> Outcome:
    """Plaintext-level outcome from the two component decoding results.

    generic: any erasure loses the plaintext, undetected errors deceive.
    sufficient-redundancy: no undetected errors; success of both perceives.
    random-activation: an erased key after a decoded ciphertext looks like a
    deactivated cipher, so the ciphertext is taken as plaintext (deception).
    """
    c = ciphertext.status if isinstance(ciphertext, DecodeResult) else Status(ciphertext)
    k = key.status if isinstance(key, DecodeResult) else Status(key)
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if mode != "generic" and Status.ERROR in (c, k):
        raise ValueError(f"undetected errors are not part of the {mode} model")
    if c is Status.ERASURE:
        return Outcome.LOSS  # SIC stops, the key is never decoded
    if c is Status.SUCCESS and k is Status.SUCCESS:
        return Outcome.PERCEPTION
    if k is Status.ERASURE:
        return Outcome.DECEPTION if mode == "random-activation" else Outcome.LOSS
    return Outcome.DECEPTION


def outcome_table(mode: str) -> dict:
    """Full classification table for a mode, keyed by (ciphertext, key) status."""
    allowed = list(Status) if mode == "generic" else [Status.SUCCESS, Status.ERASURE]
    return {(c, k): classify_outcome(c, k, mode) for c, k in itertools.product(allowed, allowed)}
