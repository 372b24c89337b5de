import numpy as np
import pytest

from pldopt import cipher
from pldopt.cipher import CipherSpace, Outcome, Status


def test_exhaustive_properties_8bit():
    sp = CipherSpace(8, 8)
    chk = sp.exhaustive_check()
    assert chk["round_trip"] == 0 and chk["key_substitution"] == 0
    assert chk["pairs"] == 256 * 256
    assert sp.is_injective()


def test_scalar_api_consistent():
    sp = CipherSpace(12, 6)
    for p, k in ((0, 0), (4095, 63), (1234, 17)):
        m = sp.encrypt(p, k)
        assert sp.decrypt(m, k) == p
        assert 0 <= m < 4096
    assert sp.expand(0) == 0
    with pytest.raises(ValueError):
        sp.encrypt(4096, 0)
    with pytest.raises(ValueError):
        CipherSpace(4, 8)


def test_litter_is_erasure():
    rng = np.random.default_rng(0)
    cb = rng.integers(0, 2, (16, 24), dtype=np.uint8)
    for s in range(50):
        w = cipher.gen_litter(cb, 4, seed=s)
        assert cipher.hamming(w, cb).min() > 4
        assert cipher.bounded_distance_decode(w, cb, 4).status is Status.ERASURE


def test_litter_deterministic_and_exhaustive_fallback():
    cb = np.array([[0] * 8, [1] * 8], dtype=np.uint8)
    a = cipher.gen_litter(cb, 3, seed=1, budget=0)
    assert np.array_equal(a, cipher.gen_litter(cb, 3, seed=1, budget=0))
    assert cipher.hamming(a, cb).min() > 3
    with pytest.raises(cipher.LitterError):
        cipher.gen_litter(cb, 4, seed=1)


def test_bounded_distance_decoder():
    cb = np.array([[0, 0, 0, 0, 0, 0], [1, 1, 1, 1, 1, 1]], dtype=np.uint8)
    r = cipher.bounded_distance_decode([0, 1, 0, 0, 0, 0], cb, 1)
    assert r.status is Status.SUCCESS and r.payload == 0 and r.distance == 1
    assert cipher.bounded_distance_decode([1, 1, 1, 0, 0, 0], cb, 3).status is Status.ERASURE  # tie
    assert cipher.bounded_distance_decode([1, 1, 0, 0, 0, 0], cb, 1).status is Status.ERASURE


def test_nearest_decoder_produces_errors():
    cb = np.array([[0, 0, 0, 0], [1, 1, 1, 1]], dtype=np.uint8)
    assert cipher.nearest_codeword_decode([1, 1, 1, 0], cb, truth=0).status is Status.ERROR
    assert cipher.nearest_codeword_decode([0, 0, 1, 0], cb, truth=0).status is Status.SUCCESS


def test_outcome_tables():
    S, E, X = Status.SUCCESS, Status.ERASURE, Status.ERROR
    ra = cipher.outcome_table("random-activation")
    assert ra == {(S, S): Outcome.PERCEPTION, (S, E): Outcome.DECEPTION,
                  (E, S): Outcome.LOSS, (E, E): Outcome.LOSS}
    sr = cipher.outcome_table("sufficient-redundancy")
    assert sr[(S, E)] is Outcome.LOSS
    g = cipher.outcome_table("generic")
    assert len(g) == 9
    assert g[(S, X)] is Outcome.DECEPTION and g[(X, S)] is Outcome.DECEPTION
    assert g[(E, X)] is Outcome.LOSS
    with pytest.raises(ValueError):
        cipher.classify_outcome(X, S, "random-activation")
    with pytest.raises(ValueError):
        cipher.classify_outcome(S, S, "unknown")
    assert cipher.classify_outcome(cipher.DecodeResult.success(), cipher.DecodeResult.erasure()) is Outcome.DECEPTION
