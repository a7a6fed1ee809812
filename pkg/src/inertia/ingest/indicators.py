import logging
import math
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd
from scipy import sparse

from inertia import utils
from inertia.domain import FuelType, Plant
from inertia.exceptions import InvalidArgumentError
from inertia.ingest.tables import (
    KEY,
    ActionsTable,
    AggregateSeries,
    IndicatorMatrix,
    PositionsTable,
    frame_codes,
)

logger = logging.getLogger(__name__)


def classify_actions(
    positions: PositionsTable, actions: ActionsTable, on_threshold: float = 0.0
) -> ActionsTable:
    """
    Net accepted volume per (plant, period) and classify it against the
    physical position: ``on`` when it lifts the plant from at or below the
    threshold to above it, ``off`` for the reverse, ``none`` otherwise.
    A plant without a position row in that period is at 0 MW.
    """
    if actions.frame.empty:
        return ActionsTable.empty()

    net = actions.frame.groupby(KEY, as_index=False, sort=True)[
        "accepted_delta_mw"
    ].sum()
    levels = positions.frame[KEY + ["level_mw"]].drop_duplicates(KEY, keep="last")
    merged = net.merge(levels, on=KEY, how="left")

    level = merged["level_mw"].fillna(0.0).to_numpy(float)
    after = level + merged["accepted_delta_mw"].to_numpy(float)

    # fmt:off
    direction = np.select(
        [
            (level <= on_threshold) & (after > on_threshold),
            (level > on_threshold) & (after <= on_threshold),
        ],
        ["on", "off"],
        default="none",
    )
    # fmt:on

    return ActionsTable(
        merged.drop(columns=["level_mw"]).assign(direction=direction.astype(object))
    )


def _matrix(rows: np.ndarray, cols: np.ndarray, values: np.ndarray, shape):
    return sparse.csr_matrix(
        (values.astype(np.int8), (rows, cols)), shape=shape, dtype=np.int8
    )


@utils.timed
def build_indicators(
    positions: PositionsTable,
    actions: Optional[ActionsTable],
    series: AggregateSeries,
    on_threshold: float = 0.0,
    plants: Optional[Sequence[Plant]] = None,
) -> IndicatorMatrix:
    """
    Market and TSO indicator matrices over the periods of ``series``.

    Columns are the plants found in ``positions``, sorted by id so the result
    does not depend on row order. Registry plants without positions, actions
    on unknown plants and rows outside the series periods are skipped and
    listed in ``IndicatorMatrix.warnings``.
    """
    if not math.isfinite(on_threshold):
        raise InvalidArgumentError("on_threshold must be finite")

    warnings: List[str] = []
    frame = positions.frame.drop_duplicates(KEY, keep="last")
    ids = sorted(frame["plant_id"].unique())
    column = {pid: j for j, pid in enumerate(ids)}
    shape = (len(series), len(ids))
    index = pd.Index(series.codes)

    if plants is not None:
        registry = {p.id: p for p in plants}
        for pid in sorted(set(registry) - set(ids)):
            warnings.append(f"plant {pid} has no positions and is excluded")
        fuels = [
            registry[pid].fuel if pid in registry else FuelType.OTHER for pid in ids
        ]
    else:
        fuels = [FuelType.OTHER] * len(ids)

    rows = index.get_indexer(frame_codes(frame))
    cols = frame["plant_id"].map(column).to_numpy(np.int64)
    outside = rows < 0
    if outside.any():
        warnings.append(
            f"{int(outside.sum())} position row(s) outside the aggregate periods"
        )

    on = (frame["level_mw"].to_numpy(float) > on_threshold) & ~outside
    market = _matrix(rows[on], cols[on], np.ones(int(on.sum())), shape)

    tso = _matrix(np.empty(0, int), np.empty(0, int), np.empty(0), shape)
    if actions is not None and not actions.frame.empty:
        classified = classify_actions(positions, actions, on_threshold).frame

        unknown = sorted(set(classified["plant_id"]) - set(ids))
        for pid in unknown:
            warnings.append(f"actions for plant {pid} without positions are ignored")

        known = classified[classified["plant_id"].isin(column)]
        signed = known["direction"].map({"on": 1, "off": -1, "none": 0})
        trows = index.get_indexer(frame_codes(known))
        tcols = known["plant_id"].map(column).to_numpy(np.int64)
        keep = (trows >= 0) & (signed.to_numpy() != 0)
        if (trows < 0).any():
            warnings.append(
                f"{int((trows < 0).sum())} action row(s) outside the aggregate periods"
            )
        tso = _matrix(trows[keep], tcols[keep], signed.to_numpy()[keep], shape)

    for warning in warnings:
        logger.warning(warning)

    return IndicatorMatrix(
        periods=list(series.periods),
        plants=ids,
        market=market,
        tso=tso,
        fuels=fuels,
        warnings=warnings,
    )


__all__ = ["build_indicators", "classify_actions"]
