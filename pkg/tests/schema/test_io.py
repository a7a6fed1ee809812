import pytest

from inertia.exceptions import (
    DuplicateKeyError,
    MissingFileError,
    ParseError,
    SchemaFileError,
)
from inertia.schema import read_csv, tables


def test_read_positions(write_csv):
    path = write_csv(
        "positions.csv",
        """
        BMU,Settlement_Date,SP,level_mw,comment
        T_CARR-1 ,2022-01-01,1,450.5,ignored
        T_CARR-2,2022-01-01,2,0,

        """,
    )
    X = read_csv(path, tables.positions_schema())

    assert X.columns.tolist() == ["plant_id", "date", "period", "level_mw"]
    assert X["plant_id"].tolist() == ["T_CARR-1", "T_CARR-2"]
    assert X["period"].tolist() == [1, 2]
    assert X["level_mw"].tolist() == [450.5, 0.0]


def test_read_missing_file(tmp_path):
    with pytest.raises(MissingFileError, match="demand"):
        read_csv(tmp_path / "demand.csv", tables.demand_schema(), "demand")


def test_read_empty_and_header(write_csv):
    with pytest.raises(SchemaFileError, match="empty"):
        read_csv(write_csv("empty.csv", ""), tables.demand_schema())

    with pytest.raises(SchemaFileError, match="demand_gw"):
        path = write_csv("demand.csv", "date,period\n2022-01-01,1\n")
        read_csv(path, tables.demand_schema())


def test_read_reports_lines(write_csv, subtests):
    path = write_csv(
        "demand.csv",
        """
        date,period,demand_gw
        2022-01-01,1,30.0
        2022-01-01,49,30.0
        2022-01-01,3,-1
        2022/01/01,4,30.0
        """,
    )
    with pytest.raises(ParseError) as info:
        read_csv(path, tables.demand_schema())

    with subtests.test(msg="lines"):
        assert info.value.lines == [3, 4, 5]
    with subtests.test(msg="columns"):
        columns = {f["column"] for f in info.value.failures}
        assert {"period", "demand_gw", "date"} <= columns


def test_read_duplicate_key(write_csv):
    path = write_csv(
        "market.csv",
        """
        date,period,inertia_gvas
        2022-01-01,1,150
        2022-01-01,2,151
        2022-01-01,1,152
        """,
    )
    with pytest.raises(DuplicateKeyError) as info:
        read_csv(path, tables.market_schema())
    assert info.value.lines == [4]
