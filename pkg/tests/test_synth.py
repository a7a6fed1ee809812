import numpy as np
import pandas as pd
import pydantic
import pytest

from inertia import ingest, synth


def test_generate_is_deterministic(small_config):
    a, b = synth.generate(small_config), synth.generate(small_config)

    assert a.plants == b.plants
    np.testing.assert_array_equal(a.series.a_market, b.series.a_market)
    assert (a.ind.market != b.ind.market).nnz == 0

    other = synth.generate(small_config.model_copy(update={"seed": 4}))
    assert other.plants != a.plants


def test_generate_shape(small_scenario, small_config):
    s = small_scenario

    assert s.ind.n_periods == small_config.n_periods
    assert s.ind.plants[0] == "T_SYN-001"
    assert sum(w == 0 for w in s.w_true.values()) == small_config.n_zero
    assert all(
        p.fuel.zero_inertia for p in s.plants if p.true_inertia == 0
    )
    # TSO actions only switch plants that the market left off
    on = s.ind.market.toarray()
    tso = s.ind.tso.toarray()
    assert not ((tso != 0) & (on != 0)).any()
    assert (tso >= 0).all()


def test_generate_is_noiseless_by_default(small_scenario):
    s = small_scenario
    w = np.array([s.w_true[pid] for pid in s.ind.plants])
    expected = s.config.w_dem_true * s.series.demand + s.ind.market @ w
    np.testing.assert_allclose(s.series.a_market, expected)


def test_colinear_pairs():
    s = synth.generate(
        synth.ScenarioConfig(
            n_plants=10, zero_fraction=0.2, n_periods=96, colinear_pairs=2
        )
    )
    assert len(s.tied) == 2
    for a, b in s.tied:
        j, k = s.ind.column(a), s.ind.column(b)
        assert s.w_true[a] == s.w_true[b]
        assert (s.ind.market[:, j] != s.ind.market[:, k]).nnz == 0
    assert not set(s.identifiable) & {pid for pair in s.tied for pid in pair}


def test_config_validation():
    with pytest.raises(pydantic.ValidationError):
        synth.ScenarioConfig(n_plants=4, zero_fraction=0.5, colinear_pairs=2)
    with pytest.raises(pydantic.ValidationError):
        synth.ScenarioConfig(h_range=(5.0, 2.0))
    with pytest.raises(pydantic.ValidationError):
        synth.ScenarioConfig(zero_fraction=1.5)


def test_all_zero_fleet(tmp_path):
    config = synth.ScenarioConfig(n_plants=5, zero_fraction=1.0, n_periods=48)
    s = synth.generate(config)
    paths = synth.export_scenario(s, tmp_path)

    truth = pd.read_csv(paths["ground_truth"])
    assert (truth["w_true_gvas"] == 0).all()


def test_export_round_trip(small_scenario, tmp_path, subtests):
    paths = synth.export_scenario(small_scenario, tmp_path)
    assert set(paths) == {
        "positions",
        "market",
        "outturn",
        "demand",
        "actions",
        "plants",
        "ground_truth",
    }

    positions = ingest.load_positions(paths["positions"])
    actions = ingest.load_actions(paths["actions"])
    series = ingest.load_aggregate(paths["market"], paths["outturn"], paths["demand"])
    plants = ingest.load_plants(paths["plants"])
    ind = ingest.build_indicators(positions, actions, series, 0.0, plants)

    with subtests.test(msg="no warnings"):
        assert ind.warnings == []
        assert series.dropped == 0
    with subtests.test(msg="indicators"):
        assert (ind.market != small_scenario.ind.market).nnz == 0
        assert (ind.tso != small_scenario.ind.tso).nnz == 0
    with subtests.test(msg="aggregates"):
        np.testing.assert_allclose(series.a_market, small_scenario.series.a_market)
        np.testing.assert_allclose(series.demand, small_scenario.series.demand)


def test_export_is_byte_identical(small_config, tmp_path):
    a = synth.export_scenario(synth.generate(small_config), tmp_path / "a")
    b = synth.export_scenario(synth.generate(small_config), tmp_path / "b")
    for key in a:
        assert a[key].read_bytes() == b[key].read_bytes(), key


def test_recovery_report(small_scenario):
    truth = dict(small_scenario.w_true)
    zero = next(pid for pid, w in truth.items() if w == 0)
    nonzero = next(pid for pid, w in truth.items() if w > 0)

    recovered = dict(truth, **{zero: 0.5, nonzero: 0.0})
    sol = type("Fit", (), {"w": recovered})()
    report = synth.recovery_report(sol, small_scenario)

    assert report.false_positives == [zero]
    assert report.false_negatives == [nonzero]
    assert report.max_error == pytest.approx(max(0.5, truth[nonzero]))
