import numpy as np
import pytest

from inertia import ingest
from inertia.domain import FuelType
from inertia.exceptions import InvalidArgumentError


@pytest.fixture
def loaded(data_dir):
    positions = ingest.load_positions(data_dir / "positions.csv")
    actions = ingest.load_actions(data_dir / "actions.csv")
    series = ingest.load_aggregate(
        data_dir / "market_inertia.csv",
        data_dir / "outturn_inertia.csv",
        data_dir / "demand.csv",
    )
    plants = ingest.load_plants(data_dir / "plants.csv")
    return positions, actions, series, plants


def test_classify_actions(loaded):
    positions, actions, _, _ = loaded
    frame = ingest.classify_actions(positions, actions).frame.set_index("plant_id")

    # T_C has no position in period 1, T_B goes to zero, T_A was already on.
    assert frame.loc["T_C", "direction"] == "on"
    assert frame.loc["T_B", "direction"] == "off"
    assert frame.loc["T_A", "direction"] == "none"


def test_build_indicators(loaded, subtests):
    positions, actions, series, plants = loaded
    ind = ingest.build_indicators(positions, actions, series, 0.0, plants)

    with subtests.test(msg="columns"):
        assert ind.plants == ["T_A", "T_B", "T_C"]
        assert ind.fuels == [FuelType.CCGT, FuelType.COAL, FuelType.HYDRO]

    with subtests.test(msg="market"):
        expected = np.array([[1, 1, 0], [0, 1, 1], [1, 0, 0], [1, 0, 0]])
        assert (ind.market.toarray() == expected).all()

    with subtests.test(msg="tso"):
        expected = np.zeros((4, 3), dtype=int)
        expected[0, 2] = 1
        expected[1, 1] = -1
        assert (ind.tso.toarray() == expected).all()

    with subtests.test(msg="warnings"):
        text = " ".join(ind.warnings)
        assert "T_D" in text
        assert "T_X" in text
        assert "1 position row(s) outside" in text


def test_build_indicators_is_order_independent(loaded):
    positions, actions, series, _ = loaded
    shuffled = ingest.PositionsTable(positions.frame.iloc[::-1])

    a = ingest.build_indicators(positions, actions, series)
    b = ingest.build_indicators(shuffled, actions, series)
    assert (a.market != b.market).nnz == 0
    assert (a.tso != b.tso).nnz == 0


def test_build_indicators_follows_series_periods(loaded):
    positions, actions, series, _ = loaded
    full = ingest.build_indicators(positions, actions, series)
    part = ingest.build_indicators(positions, actions, series.take([1, 3]))

    assert part.periods == [series.periods[1], series.periods[3]]
    assert (part.market != full.take([1, 3]).market).nnz == 0
    assert (part.tso != full.take([1, 3]).tso).nnz == 0


def test_on_threshold(loaded):
    positions, _, series, _ = loaded
    ind = ingest.build_indicators(positions, None, series, on_threshold=100.0)
    # T_A at exactly 100 MW is not above the threshold
    assert ind.market.toarray()[:, 0].tolist() == [0, 0, 0, 0]


def test_IndicatorMatrix_validates(loaded):
    positions, _, series, _ = loaded
    ind = ingest.build_indicators(positions, None, series)

    with pytest.raises(InvalidArgumentError):
        ingest.IndicatorMatrix(
            periods=ind.periods,
            plants=ind.plants,
            market=ind.market.toarray() * 2,
            tso=ind.tso,
        )
    with pytest.raises(InvalidArgumentError):
        ingest.IndicatorMatrix(
            periods=ind.periods[:2], plants=ind.plants, market=ind.market, tso=ind.tso
        )
