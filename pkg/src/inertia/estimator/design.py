"""
=============================
 `inertia.estimator.design`
=============================

Stacks the market rows

    a_market_t  ~  w_dem * d_t + sum_g w_g * (members of g ON at t)

and, optionally, the TSO rows

    a_tso_t  ~  sum_g w_g * (signed sum of member TSO indicators at t)

into one least-squares system. Columns are colinearity groups followed by a
single demand column, which is never penalized.

"""

import json
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from scipy import sparse

from inertia import utils
from inertia.exceptions import AlignmentError, AssemblyError, InvalidArgumentError
from inertia.ingest import AggregateSeries, ColinearityGroups, IndicatorMatrix

logger = logging.getLogger(__name__)

MARKET = "market"
TSO = "tso"


@dataclass
class DesignSystem:
    """
    ``X`` rows are observations and columns are groups plus the trailing
    demand column. ``penalized`` marks the columns counted by the l0 term.
    ``row_period`` is the period row (in the indicator matrix) each
    observation came from.
    """

    X: np.ndarray
    y: np.ndarray
    row_kind: np.ndarray
    col_map: List[List[str]]
    penalized: np.ndarray = field(default=None)  # type: ignore
    row_period: Optional[np.ndarray] = None

    def __post_init__(self):
        self.X = np.atleast_2d(np.asarray(self.X, dtype=float))
        self.y = np.asarray(self.y, dtype=float).ravel()
        self.row_kind = np.asarray(self.row_kind, dtype=object)

        n_rows, n_cols = self.X.shape
        if self.penalized is None:
            self.penalized = np.array([True] * (n_cols - 1) + [False])
        self.penalized = np.asarray(self.penalized, dtype=bool)

        if self.y.shape != (n_rows,) or self.row_kind.shape != (n_rows,):
            raise InvalidArgumentError(
                f"X has {n_rows} rows but y/row_kind have {self.y.shape[0]}/"
                f"{self.row_kind.shape[0]}"
            )
        if self.penalized.shape != (n_cols,):
            raise InvalidArgumentError("penalized must flag every column")
        if len(self.col_map) != int(self.penalized.sum()):
            raise InvalidArgumentError("col_map must name every penalized column")

    @classmethod
    def from_arrays(
        cls,
        X: np.ndarray,
        y: np.ndarray,
        demand_column: bool = True,
        names: Optional[Sequence[str]] = None,
    ) -> "DesignSystem":
        """
        A system over plain arrays. With ``demand_column`` the last column is
        the unpenalized demand term, otherwise every column is penalized.
        """
        X = np.atleast_2d(np.asarray(X, dtype=float))
        n_cols = X.shape[1]
        n_penalized = n_cols - 1 if demand_column else n_cols
        if n_penalized < 0:
            raise InvalidArgumentError("a demand column needs at least one column")

        names = list(names) if names else [f"x{k}" for k in range(n_penalized)]
        return cls(
            X=X,
            y=y,
            row_kind=np.array([MARKET] * X.shape[0], dtype=object),
            col_map=[[name] for name in names],
            penalized=np.array([True] * n_penalized + [False] * (n_cols - n_penalized)),
        )

    @property
    def n_rows(self) -> int:
        return self.X.shape[0]

    @property
    def n_cols(self) -> int:
        return self.X.shape[1]

    @property
    def n_penalized(self) -> int:
        return int(self.penalized.sum())

    @property
    def market_rows(self) -> np.ndarray:
        return self.row_kind == MARKET

    def check_finite(self) -> None:
        if not (np.isfinite(self.X).all() and np.isfinite(self.y).all()):
            raise InvalidArgumentError("design system has non-finite entries")


def membership(groups: ColinearityGroups, n_plants: int) -> sparse.csr_matrix:
    """``n_plants x n_groups`` 0/1 matrix, column g sums the members of g."""
    labels = groups.labels
    return sparse.csr_matrix(
        (np.ones(n_plants), (np.arange(n_plants), labels)),
        shape=(n_plants, groups.n_groups),
    )


@utils.timed
def assemble(
    ind: IndicatorMatrix,
    series: AggregateSeries,
    groups: Optional[ColinearityGroups] = None,
    use_tso_rows: bool = True,
) -> DesignSystem:
    if groups is None:
        groups = ColinearityGroups.singletons(ind.n_plants)
    if groups.n_plants != ind.n_plants:
        raise InvalidArgumentError(
            f"groups cover {groups.n_plants} plants, indicators {ind.n_plants}"
        )
    if len(series) != ind.n_periods or not np.array_equal(series.codes, ind.codes):
        raise AlignmentError("indicator and aggregate periods differ")

    P = membership(groups, ind.n_plants)
    col_map = [[ind.plants[i] for i in group] for group in groups.members]

    market = (ind.market.astype(np.float64) @ P).toarray()
    X_market = np.column_stack([market, series.demand])
    y_market = series.a_market
    rows_market = np.arange(ind.n_periods)

    blocks_X, blocks_y = [X_market], [y_market]
    kinds = [np.array([MARKET] * ind.n_periods, dtype=object)]
    periods = [rows_market]

    n_tso = 0
    if use_tso_rows and ind.tso.nnz:
        tso = (ind.tso.astype(np.float64) @ P).toarray()
        active = np.flatnonzero(ind.tso.getnnz(axis=1) > 0)
        n_tso = active.size
        blocks_X.append(np.column_stack([tso[active], np.zeros(n_tso)]))
        blocks_y.append(series.a_tso[active])
        kinds.append(np.array([TSO] * n_tso, dtype=object))
        periods.append(active)

    X = np.vstack(blocks_X)
    y = np.concatenate(blocks_y)
    row_kind = np.concatenate(kinds)
    row_period = np.concatenate(periods)

    usable = np.abs(X).sum(axis=1) > 0
    missing = np.isnan(y)
    if missing.any():
        logger.warning(f"{int(missing.sum())} row(s) without a target are skipped")
    keep = usable & ~missing

    if not keep.any():
        raise AssemblyError("no usable rows: every row is all zero or has no target")

    logger.info(
        json.dumps(
            {
                "type": "DesignSystem",
                "market_rows": int((keep & (row_kind == MARKET)).sum()),
                "tso_rows": int((keep & (row_kind == TSO)).sum()),
                "dropped_rows": int((~keep).sum()),
                "columns": X.shape[1],
            }
        )
    )

    return DesignSystem(
        X=X[keep],
        y=y[keep],
        row_kind=row_kind[keep],
        col_map=col_map,
        row_period=row_period[keep],
    )


__all__ = ["DesignSystem", "MARKET", "TSO", "assemble", "membership"]
