from inertia.ingest.colinear import ColinearityGroups, group_colinear
from inertia.ingest.indicators import build_indicators, classify_actions
from inertia.ingest.readers import (
    align,
    load_actions,
    load_aggregate,
    load_demand,
    load_inertia,
    load_plants,
    load_positions,
)
from inertia.ingest.tables import (
    ActionsTable,
    AggregateSeries,
    IndicatorMatrix,
    PositionsTable,
)

__all__ = [
    "ActionsTable",
    "AggregateSeries",
    "ColinearityGroups",
    "IndicatorMatrix",
    "PositionsTable",
    "align",
    "build_indicators",
    "classify_actions",
    "group_colinear",
    "load_actions",
    "load_aggregate",
    "load_demand",
    "load_inertia",
    "load_plants",
    "load_positions",
]
