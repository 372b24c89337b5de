import numpy as np
import pytest

from pldopt import baselines, oracle
from pldopt.link import LinkScenario, default_thresholds
from pldopt.solver import InfeasibleError


def test_power_grid_optimum_on_budget_line():
    scn = LinkScenario.from_db(0.0, -10.0, p_total=10.0)
    for d in (30, 60):
        s = oracle.search_2d_power(scn, d)
        pm, pk, _ = s.best
        assert scn.p_total - pm - pk <= s.x[1] - s.x[0] + 1e-12
        assert oracle.budget_line_violations(scn, d) == []


def test_power_grid_infeasible_raises():
    with pytest.raises(InfeasibleError):
        oracle.search_2d_power(LinkScenario.from_db(0.0, 5.0), 10)


def test_fullpower_surface_shapes_and_csv(tmp_path, scn):
    s = oracle.search_fullpower(scn, oracle.GridSpec(p_m_steps=64))
    assert s.r_d.shape == (64, scn.n + 1)
    assert not s.empty
    assert np.isnan(s.masked_r_d()[~s.feasible]).all()
    path = tmp_path / "s.csv"
    s.write_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(oracle.SURFACE_COLUMNS)
    assert len(lines) == 64 * (scn.n + 1) + 1


def test_fullpower_empty():
    s = oracle.search_fullpower(LinkScenario.from_db(0.0, 5.0))
    assert s.empty and s.best is None


def test_refine_never_worse(scn):
    g = oracle.GridSpec(p_m_steps=128)
    a = oracle.search_fullpower(scn, g)
    b = oracle.search_fullpower(scn, g, refine=True)
    assert b.best[2] >= a.best[2]


def test_explain_infeasible(scn):
    checks = oracle.explain_infeasible(scn, np.array([0.1, 1.43]), 2.0 - np.array([0.1, 1.43]), 27)
    assert not checks["eps_bob_m"][0] and checks["eps_bob_m"][1]


def test_min_lfp_threshold():
    scn = LinkScenario.from_db(0.0, -5.0, p_total=2.0)
    th = oracle.min_feasible_lfp_threshold(scn, 1e-4, budget="full")
    tight = scn.with_(thresholds=default_thresholds(eps_lf=th))
    assert not oracle.search_fullpower(tight, oracle.GridSpec(p_m_steps=2048)).empty
    assert oracle.min_feasible_lfp_threshold(scn, 1e-4, budget="relaxed") <= th + 1e-4
    with pytest.raises(ValueError):
        oracle.min_feasible_lfp_threshold(scn, budget="other")


def test_min_lfp_threshold_never_feasible():
    with pytest.raises(InfeasibleError):
        oracle.min_feasible_lfp_threshold(LinkScenario.from_db(0.0, 5.0))


# frozen leakage-failure values at 2 mW
BASELINE_POWER = {-3: 0.370797, -5: 0.161149, -7: 0.049269}
BASELINE_RATE = {-3: (13, 0.384043), -5: (15, 0.173196), -7: (17, 0.055701)}


@pytest.mark.parametrize("z", [-3, -5, -7])
def test_baselines_reference(z):
    scn = LinkScenario.from_db(0.0, z, p_total=2.0)
    bp = baselines.baseline_power(scn)
    assert bp.eps_lf == pytest.approx(BASELINE_POWER[z], abs=2e-6)
    assert bp.r_d == 0.0
    br = baselines.baseline_rate(scn)
    assert (br.n, round(br.eps_lf, 6)) == BASELINE_RATE[z]


def test_baseline_power_is_grid_optimal(scn):
    bp = baselines.baseline_power(scn)
    xs = np.linspace(0, scn.p_total, 5001)
    lf, _, _ = baselines._lf(scn, xs, scn.n, scn.d_m)
    assert bp.eps_lf <= lf.min() + 1e-9


def test_baseline_rate_info_bits_knob(scn):
    br = baselines.baseline_rate(scn, knob="info_bits")
    assert br.n == scn.n and scn.d_m <= br.d_m <= scn.n
    with pytest.raises(ValueError):
        baselines.baseline_rate(scn, knob="nope")
    with pytest.raises(ValueError):
        baselines.baseline_rate(scn, lo=10, hi=5)


def test_baseline_threshold_flag(scn):
    bp = baselines.baseline_power(scn, respect_thresholds=True)
    assert bp.admissible
    assert bp.eps_bob_m <= 0.5 and bp.eps_eve_m <= 0.5
