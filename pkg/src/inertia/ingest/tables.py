"""
=========================
 `inertia.ingest.tables`
=========================

In-memory tables produced by the loaders and consumed by the estimator.

Settlement periods are handled internally as integer *period codes*
(``days since 1970-01-01 * 48 + period - 1``), which sort like
``SettlementPeriod`` and make joins between files cheap.

"""

import datetime as dt
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy import sparse

from inertia.domain import PERIODS_PER_DAY, FuelType, SettlementPeriod
from inertia.exceptions import InvalidArgumentError

EPOCH = dt.date(1970, 1, 1)
KEY = ["plant_id", "date", "period"]

DateLike = Union[dt.date, str, pd.Timestamp]


def as_date(x: DateLike) -> dt.date:
    if isinstance(x, pd.Timestamp):
        return x.date()
    if isinstance(x, dt.datetime):
        return x.date()
    if isinstance(x, dt.date):
        return x
    return dt.date.fromisoformat(str(x))


def period_codes(periods: Sequence[SettlementPeriod]) -> np.ndarray:
    return np.fromiter(
        (
            (p.date - EPOCH).days * PERIODS_PER_DAY + p.period - 1
            for p in periods
        ),
        dtype=np.int64,
        count=len(periods),
    )


def frame_codes(frame: pd.DataFrame) -> np.ndarray:
    """Period codes of a frame with ``date`` and ``period`` columns."""
    days = pd.to_datetime(frame["date"]).to_numpy().astype("datetime64[D]")
    return days.astype(np.int64) * PERIODS_PER_DAY + (
        frame["period"].to_numpy(np.int64) - 1
    )


def periods_from_codes(codes: np.ndarray) -> List[SettlementPeriod]:
    return [
        SettlementPeriod(
            date=EPOCH + dt.timedelta(days=int(code // PERIODS_PER_DAY)),
            period=int(code % PERIODS_PER_DAY) + 1,
        )
        for code in codes
    ]


def periods_frame(periods: Sequence[SettlementPeriod]) -> pd.DataFrame:
    """``date`` (ISO string) and ``period`` columns for export."""
    return pd.DataFrame(
        {
            "date": [p.date.isoformat() for p in periods],
            "period": [p.period for p in periods],
        }
    )


@dataclass
class PositionsTable:
    """Rows of ``plant_id, date, period, level_mw``."""

    frame: pd.DataFrame

    def __len__(self) -> int:
        return len(self.frame.index)

    @property
    def plants(self) -> List[str]:
        return sorted(self.frame["plant_id"].unique())


@dataclass
class ActionsTable:
    """
    Rows of ``plant_id, date, period, accepted_delta_mw, direction`` with one
    net row per (plant, period). ``direction`` is ``on``, ``off`` or ``none``
    once classified against positions.
    """

    frame: pd.DataFrame

    def __len__(self) -> int:
        return len(self.frame.index)

    @classmethod
    def empty(cls) -> "ActionsTable":
        return cls(
            pd.DataFrame(
                {
                    "plant_id": pd.Series(dtype=object),
                    "date": pd.Series(dtype="datetime64[ns]"),
                    "period": pd.Series(dtype=np.int64),
                    "accepted_delta_mw": pd.Series(dtype=float),
                    "direction": pd.Series(dtype=object),
                }
            )
        )


def _check_increasing(codes: np.ndarray) -> None:
    if codes.size > 1 and not (np.diff(codes) > 0).all():
        raise InvalidArgumentError("periods must be strictly increasing")


def _check_values(name: str, values: np.ndarray, allow_nan: bool) -> None:
    present = values[~np.isnan(values)] if allow_nan else values
    if not np.isfinite(present).all():
        raise InvalidArgumentError(f"{name} must be finite")
    if (present < 0).any():
        raise InvalidArgumentError(f"{name} must be non-negative")


@dataclass
class AggregateSeries:
    """
    Per period market and outturn inertia (GVAs) and demand (GW).

    ``a_market`` and ``a_outturn`` may be NaN only for prediction-time series
    built with ``from_demand``. ``dropped`` counts periods lost when the three
    input files were aligned.
    """

    periods: List[SettlementPeriod]
    a_market: np.ndarray
    a_outturn: np.ndarray
    demand: np.ndarray
    dropped: int = 0

    def __post_init__(self):
        self.a_market = np.asarray(self.a_market, dtype=float)
        self.a_outturn = np.asarray(self.a_outturn, dtype=float)
        self.demand = np.asarray(self.demand, dtype=float)

        n = len(self.periods)
        for name in ("a_market", "a_outturn", "demand"):
            if getattr(self, name).shape != (n,):
                raise InvalidArgumentError(f"{name} must have one value per period")

        _check_increasing(self.codes)
        _check_values("a_market", self.a_market, allow_nan=True)
        _check_values("a_outturn", self.a_outturn, allow_nan=True)
        _check_values("demand", self.demand, allow_nan=False)

    def __len__(self) -> int:
        return len(self.periods)

    @cached_property
    def codes(self) -> np.ndarray:
        return period_codes(self.periods)

    @property
    def a_tso(self) -> np.ndarray:
        """Inertia added by TSO actions: outturn - market, clipped at 0."""
        return np.clip(self.a_outturn - self.a_market, 0.0, None)

    @property
    def has_actuals(self) -> bool:
        return bool((~np.isnan(self.a_market)).any())

    def take(self, rows: Union[Sequence[int], np.ndarray]) -> "AggregateSeries":
        rows = np.asarray(rows, dtype=np.int64)
        return AggregateSeries(
            periods=[self.periods[i] for i in rows],
            a_market=self.a_market[rows],
            a_outturn=self.a_outturn[rows],
            demand=self.demand[rows],
        )

    def rows_between(
        self, since: Optional[DateLike] = None, until: Optional[DateLike] = None
    ) -> np.ndarray:
        """Row numbers whose date lies in ``[since, until]`` (both inclusive)."""
        lo = as_date(since) if since is not None else None
        hi = as_date(until) if until is not None else None
        return np.array(
            [
                i
                for i, p in enumerate(self.periods)
                if (lo is None or p.date >= lo) and (hi is None or p.date <= hi)
            ],
            dtype=np.int64,
        )

    def between(
        self, since: Optional[DateLike] = None, until: Optional[DateLike] = None
    ) -> "AggregateSeries":
        return self.take(self.rows_between(since, until))

    @classmethod
    def from_demand(
        cls, demand: pd.DataFrame, market: Optional[pd.DataFrame] = None
    ) -> "AggregateSeries":
        """
        Prediction-time series from a demand frame (``date, period,
        demand_gw``). Market actuals come from ``market`` (``date, period,
        inertia_gvas``) where present and are NaN elsewhere.
        """
        codes = frame_codes(demand)
        order = np.argsort(codes, kind="stable")
        codes = codes[order]
        values = demand["demand_gw"].to_numpy(float)[order]

        actual = np.full(codes.shape, np.nan)
        if market is not None and len(market.index):
            keyed = pd.Series(
                market["inertia_gvas"].to_numpy(float), index=frame_codes(market)
            )
            actual = keyed.reindex(codes).to_numpy(float)

        return cls(
            periods=periods_from_codes(codes),
            a_market=actual,
            a_outturn=np.full(codes.shape, np.nan),
            demand=values,
        )

    def to_frame(self) -> pd.DataFrame:
        return periods_frame(self.periods).assign(
            a_market=self.a_market,
            a_outturn=self.a_outturn,
            demand_gw=self.demand,
        )


@dataclass
class IndicatorMatrix:
    """
    Market on/off indicators (``{0, 1}``) and TSO action indicators
    (``{-1, 0, 1}``), rows are periods and columns are plants.
    """

    periods: List[SettlementPeriod]
    plants: List[str]
    market: sparse.csr_matrix
    tso: sparse.csr_matrix
    fuels: List[FuelType] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.market = sparse.csr_matrix(self.market, dtype=np.int8)
        self.tso = sparse.csr_matrix(self.tso, dtype=np.int8)
        self.market.eliminate_zeros()
        self.tso.eliminate_zeros()

        if not self.fuels:
            self.fuels = [FuelType.OTHER] * len(self.plants)

        shape = (len(self.periods), len(self.plants))
        if self.market.shape != shape or self.tso.shape != shape:
            raise InvalidArgumentError(
                f"indicator shape {self.market.shape}/{self.tso.shape} "
                f"does not match {shape} (periods, plants)"
            )
        if len(self.fuels) != len(self.plants):
            raise InvalidArgumentError("one fuel per plant is required")
        if len(set(self.plants)) != len(self.plants):
            raise InvalidArgumentError("plant ids must be unique")
        if not np.isin(self.market.data, (1,)).all():
            raise InvalidArgumentError("market indicators must be 0 or 1")
        if not np.isin(self.tso.data, (-1, 1)).all():
            raise InvalidArgumentError("TSO indicators must be -1, 0 or 1")

        _check_increasing(self.codes)

    @property
    def n_periods(self) -> int:
        return len(self.periods)

    @property
    def n_plants(self) -> int:
        return len(self.plants)

    @cached_property
    def codes(self) -> np.ndarray:
        return period_codes(self.periods)

    def column(self, plant_id: str) -> int:
        return self.plants.index(plant_id)

    def take(self, rows: Union[Sequence[int], np.ndarray]) -> "IndicatorMatrix":
        rows = np.asarray(rows, dtype=np.int64)
        return IndicatorMatrix(
            periods=[self.periods[i] for i in rows],
            plants=list(self.plants),
            market=self.market[rows],
            tso=self.tso[rows],
            fuels=list(self.fuels),
            warnings=list(self.warnings),
        )


__all__ = [
    "ActionsTable",
    "AggregateSeries",
    "IndicatorMatrix",
    "KEY",
    "PositionsTable",
    "as_date",
    "frame_codes",
    "period_codes",
    "periods_frame",
    "periods_from_codes",
]
