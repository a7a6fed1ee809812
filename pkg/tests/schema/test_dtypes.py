import pandas as pd
import pandera as pa
import pytest

from inertia.schema import Fuel, LiteralBool


@pytest.fixture
def schema() -> pa.DataFrameSchema:
    return pa.DataFrameSchema(
        columns={
            "flag": pa.Column(LiteralBool, nullable=True),
            "fuel": pa.Column(Fuel),
        },
        coerce=True,
    )


def test_LiteralBool(schema):
    X = pd.DataFrame(
        {
            "flag": ["true", " Y ", "1", "no", "F", "0", "maybe"],
            "fuel": ["ccgt"] * 7,
        }
    )
    flags = schema.validate(X)["flag"]

    assert flags.iloc[:3].tolist() == [True, True, True]
    assert flags.iloc[3:6].tolist() == [False, False, False]
    assert pd.isna(flags.iloc[6])


def test_LiteralBool_not_nullable():
    schema = pa.DataFrameSchema(
        {"flag": pa.Column(LiteralBool, nullable=False)}, coerce=True
    )
    with pytest.raises(pa.errors.SchemaError):
        schema.validate(pd.DataFrame({"flag": ["yes", "perhaps"]}))


def test_Fuel(schema):
    fuels = ["CCGT", "Pumped Storage", "wave", "WIND"]
    X = pd.DataFrame({"flag": ["1"] * 4, "fuel": fuels})
    assert schema.validate(X)["fuel"].tolist() == [
        "ccgt",
        "pumped_storage",
        "other",
        "wind",
    ]
