"""
====================
 inertia.forecast
====================

Aggregate market inertia predicted from fitted constants and planned
positions, checked against published aggregates and against the 140 GVAs
operating floor (a period is low when its prediction is strictly below the
trigger).

"""

import datetime as dt
import logging
import pathlib
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np
import pandas as pd
import pydantic
from sklearn.metrics import mean_absolute_error, mean_absolute_percentage_error

from inertia import utils
from inertia.domain import SettlementPeriod
from inertia.estimator import market_prediction
from inertia.exceptions import (
    AlignmentError,
    EmptyEvaluationError,
    InvalidArgumentError,
)
from inertia.ingest import AggregateSeries, IndicatorMatrix
from inertia.ingest.tables import as_date, periods_frame
from inertia.schema.tables import forecast_columns

logger = logging.getLogger(__name__)

DEFAULT_TRIGGER_GVAS = 140.0


@dataclass(frozen=True)
class ForecastSeries:
    periods: List[SettlementPeriod]
    predicted: np.ndarray
    actual: np.ndarray
    below_trigger: np.ndarray
    trigger: float = DEFAULT_TRIGGER_GVAS

    def __len__(self) -> int:
        return len(self.periods)

    @property
    def has_actuals(self) -> bool:
        return bool((~np.isnan(self.actual)).any())

    def to_frame(self) -> pd.DataFrame:
        return periods_frame(self.periods).assign(
            predicted_gvas=self.predicted,
            actual_gvas=self.actual,
            below_trigger=self.below_trigger,
        )[forecast_columns()]


class EvalReport(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True)

    mae: pydantic.NonNegativeFloat
    mape: pydantic.NonNegativeFloat
    n_periods: int
    worst_period: Tuple[SettlementPeriod, float]
    n_skipped_zero: int = 0

    def to_dict(self) -> dict:
        period, error = self.worst_period
        return {
            "mae_gvas": self.mae,
            "mape": self.mape,
            "n_periods": self.n_periods,
            "n_skipped_zero": self.n_skipped_zero,
            "worst_period": {
                "date": period.date.isoformat(),
                "period": period.period,
                "error_gvas": error,
            },
        }


def predict(
    sol,
    ind: IndicatorMatrix,
    demand: Union[AggregateSeries, np.ndarray],
    actual: Optional[np.ndarray] = None,
    trigger: float = DEFAULT_TRIGGER_GVAS,
) -> ForecastSeries:
    """
    ``predicted_t = w_dem * d_t + sum_j w_j * I_market[t, j]`` for a fitted
    solution (or a loaded model). With an ``AggregateSeries`` its periods must
    match the indicators and its market values are the actuals unless
    ``actual`` is given.
    """
    if isinstance(demand, AggregateSeries):
        if not np.array_equal(demand.codes, ind.codes):
            raise AlignmentError("indicator and demand periods differ")
        if actual is None:
            actual = demand.a_market
        demand = demand.demand

    demand = np.asarray(demand, dtype=float)
    if demand.shape != (ind.n_periods,):
        raise AlignmentError(
            f"{demand.shape[0]} demand value(s) for {ind.n_periods} period(s)"
        )

    actual = (
        np.full(ind.n_periods, np.nan)
        if actual is None
        else np.asarray(actual, dtype=float)
    )
    if actual.shape != (ind.n_periods,):
        raise AlignmentError("one actual value (or NaN) per period is required")

    unknown = [pid for pid in ind.plants if pid not in sol.w]
    if unknown:
        logger.warning(
            f"{len(unknown)} plant(s) unknown to the model count as zero: "
            f"{unknown[:10]}"
        )

    predicted = market_prediction(sol, ind.plants, ind.market, demand)
    return ForecastSeries(
        periods=list(ind.periods),
        predicted=predicted,
        actual=actual,
        below_trigger=predicted < trigger,
        trigger=trigger,
    )


def evaluate(f: ForecastSeries) -> EvalReport:
    """MAE over periods with actuals; MAPE over those with a positive actual."""
    known = ~np.isnan(f.actual)
    if not known.any():
        raise EmptyEvaluationError("no period has an actual value to evaluate")

    predicted, actual = f.predicted[known], f.actual[known]
    errors = np.abs(predicted - actual)
    positive = actual > 0

    mae = float(mean_absolute_error(actual, predicted))
    mape = (
        float(mean_absolute_percentage_error(actual[positive], predicted[positive]))
        if positive.any()
        else 0.0
    )

    worst = int(np.argmax(errors))
    periods = [p for p, k in zip(f.periods, known) if k]
    return EvalReport(
        mae=mae,
        mape=mape,
        n_periods=int(known.sum()),
        worst_period=(periods[worst], float(errors[worst])),
        n_skipped_zero=int((~positive).sum()),
    )


def detect_low(
    f: ForecastSeries, trigger: Optional[float] = None
) -> List[SettlementPeriod]:
    """Periods predicted strictly below ``trigger``, in time order."""
    trigger = f.trigger if trigger is None else trigger
    low = f.predicted < trigger
    return sorted(p for p, flag in zip(f.periods, low) if flag)


def chronological_split(
    ind: IndicatorMatrix,
    series: AggregateSeries,
    *,
    fraction: Optional[float] = None,
    cutoff: Optional[Union[dt.date, str]] = None,
) -> Tuple[
    Tuple[IndicatorMatrix, AggregateSeries], Tuple[IndicatorMatrix, AggregateSeries]
]:
    """
    Split into (train, test) by time: either the last ``fraction`` of the
    periods is held out, or every period on or after ``cutoff`` is.
    """
    if (fraction is None) == (cutoff is None):
        raise InvalidArgumentError("give exactly one of fraction or cutoff")

    n = ind.n_periods
    if fraction is not None:
        if not 0.0 < fraction < 1.0:
            raise InvalidArgumentError(f"fraction must be in (0, 1), got {fraction!r}")
        n_train = n - int(round(n * fraction))
    else:
        first = as_date(cutoff)  # type: ignore
        n_train = sum(1 for p in ind.periods if p.date < first)

    train, test = np.arange(n_train), np.arange(n_train, n)
    return (ind.take(train), series.take(train)), (ind.take(test), series.take(test))


@utils.timed
def write_forecast(path: Union[str, pathlib.Path], f: ForecastSeries) -> None:
    frame = f.to_frame()
    frame["below_trigger"] = np.where(frame["below_trigger"], "true", "false")
    frame.to_csv(path, index=False, na_rep="", lineterminator="\n")


__all__ = [
    "DEFAULT_TRIGGER_GVAS",
    "EvalReport",
    "ForecastSeries",
    "chronological_split",
    "detect_low",
    "evaluate",
    "predict",
    "write_forecast",
]
