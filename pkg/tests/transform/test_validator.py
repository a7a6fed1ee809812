import pandas as pd
import pandera as pa
import pytest

from inertia.exceptions import DuplicateKeyError, ParseError
from inertia.transform import ReadPipeline, UniqueKey, Validator


@pytest.fixture
def schema() -> pa.DataFrameSchema:
    return pa.DataFrameSchema(
        columns={
            "plant_id": pa.Column(str),
            "period": pa.Column(int, checks=[pa.Check.in_range(1, 48)]),
        },
        coerce=True,
        strict="filter",
        metadata={"key": ["plant_id", "period"]},
    )


def test_Validator_collects_every_failure(schema, subtests):
    # "x" cannot be coerced; "0" coerces but is out of range
    X = pd.DataFrame({"plant_id": ["A", "B", "C"], "period": ["1", "0", "x"]})

    with pytest.raises(ParseError) as info:
        Validator(schema, path="p.csv").fit_transform(X)

    with subtests.test(msg="lines"):
        assert info.value.path == "p.csv"
        assert info.value.lines == [3, 4]

    with subtests.test(msg="checks"):
        checks = {(f["line"], f["check"].split("(")[0]) for f in info.value.failures}
        assert (3, "in_range") in checks
        assert (4, "coerce_dtype") in checks


def test_Validator_error_handler(schema):
    seen = []
    X = pd.DataFrame({"plant_id": ["A"], "period": ["99"]})

    with pytest.raises(pa.errors.SchemaErrors):
        Validator(schema, error_handler=seen.append).fit_transform(X)

    (cases,) = seen
    assert cases["index"].tolist() == [0]


def test_UniqueKey(schema):
    X = pd.DataFrame({"plant_id": ["A", "B", "A"], "period": [1, 1, 1]})

    with pytest.raises(DuplicateKeyError) as info:
        UniqueKey(schema).fit_transform(X)
    assert info.value.lines == [4]


def test_ReadPipeline(schema):
    X = pd.DataFrame(
        {"plant_id": [" A", "", "B "], "period": ["1", "", "2"], "extra": ["", "", ""]}
    )
    Y = X.pipe(ReadPipeline(schema))

    assert Y.columns.tolist() == ["plant_id", "period"]
    assert Y["plant_id"].tolist() == ["A", "B"]
    assert Y.index.tolist() == [0, 2]
