import datetime as dt

import numpy as np
import pytest
from scipy import sparse

from inertia import ingest
from inertia.domain import FuelType, SettlementPeriod
from inertia.exceptions import InvalidArgumentError


def indicators(market, fuels):
    start = dt.date(2022, 1, 1)
    periods = [
        SettlementPeriod.from_key(start + dt.timedelta(days=t // 48), t % 48 + 1)
        for t in range(len(market))
    ]
    plants = [f"P{j}" for j in range(len(fuels))]
    return ingest.IndicatorMatrix(
        periods=periods,
        plants=plants,
        market=sparse.csr_matrix(np.array(market)),
        tso=sparse.csr_matrix((len(market), len(fuels)), dtype=np.int8),
        fuels=fuels,
    )


def test_group_colinear():
    market = [
        [1, 1, 1, 0],
        [0, 0, 0, 1],
        [1, 1, 1, 0],
        [1, 1, 0, 1],
    ]
    fuels = [FuelType.CCGT, FuelType.CCGT, FuelType.COAL, FuelType.CCGT]
    ind = indicators(market, fuels)

    groups = ingest.group_colinear(ind, agreement=1.0)
    # P2 shares P0's schedule but not its fuel
    assert groups.members == [[0, 1], [2], [3]]
    assert groups.representatives == [0, 2, 3]
    assert groups.tied == [[0, 1]]

    loose = ingest.group_colinear(ind, agreement=0.75)
    assert loose.members == [[0, 1], [2], [3]]


def test_group_colinear_transitive():
    market = [[1, 1, 0], [1, 1, 1], [0, 1, 1], [0, 0, 0]]
    ind = indicators(market, [FuelType.GAS] * 3)

    groups = ingest.group_colinear(ind, agreement=0.75)
    assert groups.members == [[0, 1, 2]]


def test_group_colinear_counts_shared_off_periods():
    # P0 and P1 each run once and never together: 998 of 1000 periods agree
    market = np.zeros((1000, 2), dtype=np.int8)
    market[10, 0] = 1
    market[500, 1] = 1
    ind = indicators(market.tolist(), [FuelType.BIOMASS] * 2)

    assert ingest.group_colinear(ind, agreement=0.995).members == [[0, 1]]
    assert ingest.group_colinear(ind, agreement=1.0).members == [[0], [1]]


@pytest.mark.parametrize("agreement", [0.5, 1.01, -1.0])
def test_group_colinear_rejects(agreement):
    ind = indicators([[1]], [FuelType.GAS])
    with pytest.raises(InvalidArgumentError):
        ingest.group_colinear(ind, agreement)


def test_ColinearityGroups():
    groups = ingest.ColinearityGroups.from_plant_ids(
        ["A", "B", "C", "D"], [["D", "B"]]
    )
    assert groups.members == [[0], [1, 3], [2]]
    assert groups.labels.tolist() == [0, 1, 2, 1]

    with pytest.raises(InvalidArgumentError):
        ingest.ColinearityGroups([[0], [2]])
