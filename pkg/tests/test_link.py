import warnings

import numpy as np
import pytest

from pldopt import link
from pldopt.link import LinkScenario, Thresholds


def test_db_round_trip():
    assert link.db_to_linear(0.0) == 1.0
    assert link.linear_to_db(link.db_to_linear(-7.3)) == pytest.approx(-7.3)


def test_threshold_validation():
    with pytest.raises(ValueError):
        Thresholds(eps_lf=0.0)
    with pytest.raises(ValueError):
        Thresholds(eps_bob_k=0.6)
    with pytest.raises(ValueError):
        Thresholds(eps_eve_k=0.4)
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        Thresholds()
    assert any("0.5" in str(w.message) for w in rec)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        Thresholds(eps_bob_k=0.3, eps_eve_k=0.7)
        link.default_thresholds()


def test_scenario_validation():
    with pytest.raises(ValueError):
        LinkScenario(z_eve=0.0)
    with pytest.raises(ValueError):
        LinkScenario(n=64.5)
    with pytest.raises(ValueError):
        LinkScenario(d_m=80)
    s = LinkScenario.from_db(0.0, -10.0)
    assert s.z_eve == pytest.approx(0.1)
    assert s.with_(p_total=5.0).p_total == 5.0


def test_power_split():
    scn = LinkScenario()
    ps = link.PowerSplit.full_power(scn, 1.5)
    assert ps.p_k == pytest.approx(0.5)
    ps.validate(scn)
    with pytest.raises(ValueError):
        link.PowerSplit(-1.0, 0.0)
    with pytest.raises(ValueError):
        link.PowerSplit(2.0, 1.0).validate(scn)
    with pytest.warns(UserWarning):
        link.PowerSplit(0.5, 1.0).validate(scn)


def test_sinr_mapping(scn):
    assert link.sinr_message(1.0, 1.5, 0.5, 1.0) == pytest.approx(1.0)
    assert link.sinr_key(0.5, 0.5, 1.0) == pytest.approx(0.25)
    prof = link.error_profile(scn, 1.5, 0.5, 20)
    assert prof.eps_bob_m == pytest.approx(link.fbl.fbl_error(1.0, 64, 16))
    assert prof.eps_eve_k == pytest.approx(link.fbl.fbl_error(scn.z_eve * 0.5, 64, 20))


def test_zero_key_power_means_lost_key(scn):
    prof = link.error_profile(scn, 2.0, 0.0, 10)
    assert prof.eps_bob_k == 1.0 and prof.eps_eve_k == 1.0


def test_metric_identities():
    prof = link.ErrorProfile(0.1, 0.2, 0.3, 0.7)
    m = link.metrics(prof)
    assert m.eps_bob == pytest.approx(1 - 0.9 * 0.8)
    assert m.eps_eve == pytest.approx(1 - 0.7 * 0.3)
    assert m.eps_lf == pytest.approx(1 - 0.72 * m.eps_eve)
    assert m.r_b == pytest.approx(1 - 0.9 * 0.2)
    assert m.r_d == pytest.approx(m.r_b * 0.7 * 0.7)


def test_grid_broadcast(scn):
    pm = np.linspace(0, 2, 7)[:, None]
    d = np.arange(5)[None, :]
    prof, met = link.evaluate(scn, pm, d)
    assert np.shape(met.r_d) == (7, 5)
    assert np.all((met.r_d >= 0) & (met.r_d <= 1))


def test_check_feasible_names_violations(scn):
    rep = link.check_feasible(scn, 1.4256, 27)
    assert rep.feasible and bool(rep)
    rep = link.check_feasible(scn, 0.2, 27)
    assert not rep
    assert "eps_bob_m" in rep.violated
    rep = link.check_feasible(scn, 1.5, 10, p_k=1.0)
    assert "power_budget" in rep.violated
    assert set(rep.checks) == set(link.CONSTRAINTS)


def test_deception_rate_gradient_matches_differences(scn):
    rng = np.random.default_rng(3)
    for _ in range(50):
        pm = rng.uniform(0.9, 1.9)
        d = rng.uniform(5, 60)
        gp, gd = link.deception_rate_grad(scn, pm, d)
        h = 1e-6
        fp = (link.deception_rate(scn, pm + h, d) - link.deception_rate(scn, pm - h, d)) / (2 * h)
        fd = (link.deception_rate(scn, pm, d + h) - link.deception_rate(scn, pm, d - h)) / (2 * h)
        assert gp == pytest.approx(fp, rel=1e-5, abs=1e-9)
        assert gd == pytest.approx(fd, rel=1e-5, abs=1e-9)
