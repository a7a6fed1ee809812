"""
==========================
 `inertia.schema.tables`
==========================

One ``pa.DataFrameSchema`` per input/output file family. Each schema lists
accepted header ``aliases`` in column metadata and the row key in schema
metadata (``metadata["key"]``), which ``ReadPipeline`` enforces.

"""

import numpy as np
import pandas as pd
import pandera as pa
from pandera.engines import pandas_engine

from inertia.domain import PERIODS_PER_DAY
from inertia.schema.dtypes import Fuel, LiteralBool

ISO_DATE = pandas_engine.DateTime(  # type: ignore
    to_datetime_kwargs={"format": "%Y-%m-%d"},
)

finite = pa.Check(lambda s: np.isfinite(s.astype("float64")), name="finite")


def _plant_id(**kwargs) -> pa.Column:
    return pa.Column(
        str,
        checks=[pa.Check.str_matches(r"^\S+$")],
        metadata={"aliases": ["plant", "bmu", "bm_unit", "unit_id"]},
        **kwargs,
    )


def _date() -> pa.Column:
    return pa.Column(
        ISO_DATE,
        metadata={"aliases": ["settlement_date", "day"]},
    )


def _period() -> pa.Column:
    return pa.Column(
        int,
        checks=[pa.Check.in_range(1, PERIODS_PER_DAY)],
        metadata={"aliases": ["settlement_period", "sp"]},
    )


def _non_negative(aliases=()) -> pa.Column:
    return pa.Column(
        float,
        checks=[pa.Check.ge(0), finite],
        metadata={"aliases": list(aliases)},
    )


def positions_schema() -> pa.DataFrameSchema:
    return pa.DataFrameSchema(
        columns={
            "plant_id": _plant_id(),
            "date": _date(),
            "period": _period(),
            "level_mw": _non_negative(aliases=["level", "mw"]),
        },
        name="positions",
        coerce=True,
        strict="filter",
        metadata={"key": ["plant_id", "date", "period"]},
    )


def actions_schema() -> pa.DataFrameSchema:
    # Several acceptances may share a (plant, period); the reader nets them.
    return pa.DataFrameSchema(
        columns={
            "plant_id": _plant_id(),
            "date": _date(),
            "period": _period(),
            "accepted_delta_mw": pa.Column(
                float,
                checks=[finite],
                metadata={"aliases": ["delta_mw", "accepted_mw"]},
            ),
        },
        name="actions",
        coerce=True,
        strict="filter",
    )


def aggregate_schema(value_column: str, name: str) -> pa.DataFrameSchema:
    return pa.DataFrameSchema(
        columns={
            "date": _date(),
            "period": _period(),
            value_column: _non_negative(),
        },
        name=name,
        coerce=True,
        strict="filter",
        metadata={"key": ["date", "period"]},
    )


def market_schema() -> pa.DataFrameSchema:
    return aggregate_schema("inertia_gvas", "market_inertia")


def outturn_schema() -> pa.DataFrameSchema:
    return aggregate_schema("inertia_gvas", "outturn_inertia")


def demand_schema() -> pa.DataFrameSchema:
    return aggregate_schema("demand_gw", "demand")


def plants_schema() -> pa.DataFrameSchema:
    return pa.DataFrameSchema(
        columns={
            "plant_id": _plant_id(),
            "fuel": pa.Column(Fuel, metadata={"aliases": ["fuel_type"]}),
            "nameplate_mva": pa.Column(
                float,
                checks=[pa.Check.gt(0), finite],
                metadata={"aliases": ["nameplate", "capacity_mva"]},
            ),
        },
        name="plants",
        coerce=True,
        strict="filter",
        metadata={"key": ["plant_id"]},
    )


def ground_truth_schema() -> pa.DataFrameSchema:
    return pa.DataFrameSchema(
        columns={
            "plant_id": _plant_id(),
            "w_true_gvas": _non_negative(),
        },
        name="ground_truth",
        coerce=True,
        strict="filter",
        metadata={"key": ["plant_id"]},
    )


def candidates_schema() -> pa.DataFrameSchema:
    return pa.DataFrameSchema(
        columns={
            "plant_id": _plant_id(),
            "kind": pa.Column(
                str, checks=[pa.Check.isin(["keep_running", "start"])]
            ),
            "w_gvas": _non_negative(),
            "cost": _non_negative(),
            "notice_minutes": _non_negative(),
            "ramp_mw_per_min": pa.Column(float, checks=[pa.Check.gt(0), finite]),
            "stable_export_mw": pa.Column(float, checks=[pa.Check.gt(0), finite]),
            "currently_on": pa.Column(LiteralBool, nullable=False),
        },
        name="candidates",
        coerce=True,
        strict="filter",
        metadata={"key": ["plant_id", "kind"]},
    )


def forecast_columns() -> list:
    return ["date", "period", "predicted_gvas", "actual_gvas", "below_trigger"]


"""
Canonical file names inside a data directory.
"""
FILE_NAMES = {
    "positions": "positions.csv",
    "market": "market_inertia.csv",
    "outturn": "outturn_inertia.csv",
    "demand": "demand.csv",
    "actions": "actions.csv",
    "plants": "plants.csv",
    "ground_truth": "ground_truth.csv",
    "candidates": "candidates.csv",
}


__all__ = [
    "FILE_NAMES",
    "actions_schema",
    "aggregate_schema",
    "candidates_schema",
    "demand_schema",
    "forecast_columns",
    "ground_truth_schema",
    "market_schema",
    "outturn_schema",
    "plants_schema",
    "positions_schema",
]
