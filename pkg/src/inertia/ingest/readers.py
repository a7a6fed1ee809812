"""
==========================
 `inertia.ingest.readers`
==========================

File adapters for the CSV families (UTF-8, header row, comma separated,
ISO dates, period 1..48). Each loader validates through the schema
``ReadPipeline``, so a bad cell surfaces as ``ParseError`` with its file
line and a repeated key as ``DuplicateKeyError``.

"""

import logging
from typing import List

import numpy as np
import pandas as pd

from inertia import utils
from inertia.domain import Plant
from inertia.exceptions import AlignmentError
from inertia.ingest.tables import (
    KEY,
    ActionsTable,
    AggregateSeries,
    PositionsTable,
    frame_codes,
    periods_from_codes,
)
from inertia.schema import read_csv, tables
from inertia.schema.io import PathLike

logger = logging.getLogger(__name__)


@utils.timed
def load_positions(path: PathLike) -> PositionsTable:
    frame = read_csv(path, tables.positions_schema(), "positions")
    return PositionsTable(frame)


@utils.timed
def load_actions(path: PathLike) -> ActionsTable:
    """Accepted actions, netted to one row per (plant, period)."""
    frame = read_csv(path, tables.actions_schema(), "actions")
    if frame.empty:
        return ActionsTable.empty()

    netted = (
        frame.groupby(KEY, as_index=False, sort=True)["accepted_delta_mw"]
        .sum()
        .assign(direction="none")
    )
    return ActionsTable(netted)


@utils.timed
def load_plants(path: PathLike) -> List[Plant]:
    frame = read_csv(path, tables.plants_schema(), "plants")
    return [
        Plant(id=row.plant_id, fuel=row.fuel, nameplate=row.nameplate_mva)
        for row in frame.itertuples(index=False)
    ]


@utils.timed
def load_demand(path: PathLike) -> pd.DataFrame:
    return read_csv(path, tables.demand_schema(), "demand")


def load_inertia(path: PathLike, what: str = "market_inertia") -> pd.DataFrame:
    schema = (
        tables.outturn_schema() if what == "outturn_inertia" else tables.market_schema()
    )
    return read_csv(path, schema, what)


def _keyed(frame: pd.DataFrame, column: str) -> pd.Series:
    return pd.Series(frame[column].to_numpy(float), index=frame_codes(frame))


def align(
    market: pd.DataFrame, outturn: pd.DataFrame, demand: pd.DataFrame
) -> AggregateSeries:
    """Inner join of the three frames on (date, period)."""
    m = _keyed(market, "inertia_gvas")
    o = _keyed(outturn, "inertia_gvas")
    d = _keyed(demand, "demand_gw")

    union = m.index.union(o.index).union(d.index)
    common = m.index.intersection(o.index).intersection(d.index).sort_values()

    if common.empty:
        raise AlignmentError(
            "market, outturn and demand files share no settlement period"
        )

    dropped = len(union) - len(common)
    if dropped:
        logger.warning(f"Aligning aggregates dropped {dropped} period(s)")

    codes = common.to_numpy(np.int64)
    return AggregateSeries(
        periods=periods_from_codes(codes),
        a_market=m.reindex(codes).to_numpy(float),
        a_outturn=o.reindex(codes).to_numpy(float),
        demand=d.reindex(codes).to_numpy(float),
        dropped=dropped,
    )


@utils.timed
def load_aggregate(
    path_market: PathLike, path_outturn: PathLike, path_demand: PathLike
) -> AggregateSeries:
    return align(
        load_inertia(path_market, "market_inertia"),
        load_inertia(path_outturn, "outturn_inertia"),
        load_demand(path_demand),
    )


__all__ = [
    "align",
    "load_actions",
    "load_aggregate",
    "load_demand",
    "load_inertia",
    "load_plants",
    "load_positions",
]
