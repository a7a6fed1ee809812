import json
import logging
import math
from typing import Iterable, List, Optional, Tuple

import numpy as np

from inertia import utils
from inertia.estimator.design import assemble
from inertia.estimator.l0 import DEFAULT_EXACT_LIMIT, SolveMode, solve_l0
from inertia.estimator.solution import InertiaSolution
from inertia.exceptions import InvalidArgumentError
from inertia.ingest import AggregateSeries, ColinearityGroups, IndicatorMatrix

logger = logging.getLogger(__name__)

DEFAULT_GRID: Tuple[float, ...] = (0.0, 0.01, 0.03, 0.1, 0.3, 1.0, 3.0)
DEFAULT_VALIDATION_SPLIT = 0.2


@utils.timed
def fit(
    ind: IndicatorMatrix,
    series: AggregateSeries,
    groups: Optional[ColinearityGroups] = None,
    lam: float = 0.0,
    mode: str = SolveMode.AUTO,
    use_tso_rows: bool = True,
    exact_limit: int = DEFAULT_EXACT_LIMIT,
) -> InertiaSolution:
    """Assemble the stacked system and solve it; ``w`` is per plant."""
    system = assemble(ind, series, groups, use_tso_rows=use_tso_rows)
    return solve_l0(system, lam, mode=mode, exact_limit=exact_limit)


def market_prediction(
    sol, plants: Iterable[str], market, demand: np.ndarray
) -> np.ndarray:
    """``w_dem * d_t + sum_j w_j * I_market[t, j]``."""
    w = np.array([sol.w.get(pid, 0.0) for pid in plants], dtype=float)
    return np.asarray(market @ w).ravel() + sol.w_dem * np.asarray(demand, float)


def validation_mae(sol: InertiaSolution, ind: IndicatorMatrix, series) -> float:
    predicted = market_prediction(sol, ind.plants, ind.market, series.demand)
    known = ~np.isnan(series.a_market)
    if not known.any():
        return math.inf
    return float(np.mean(np.abs(predicted[known] - series.a_market[known])))


def chronological_rows(
    n: int, validation_split: float
) -> Tuple[np.ndarray, np.ndarray]:
    """The first ``1 - validation_split`` of the rows train, the rest validate."""
    if not 0.0 < validation_split < 1.0:
        raise InvalidArgumentError(
            f"validation_split must be in (0, 1), got {validation_split!r}"
        )
    n_validation = int(round(n * validation_split))
    n_train = n - n_validation
    return np.arange(n_train), np.arange(n_train, n)


def pick_lambda(table: List[dict], tie_rtol: float, tie_atol: float) -> dict:
    """
    The largest ``lambda`` whose MAE is within ``tie_rtol``/``tie_atol`` of
    the best one, with the numbers the choice rests on.
    """
    if not (tie_rtol >= 0 and tie_atol >= 0):
        raise InvalidArgumentError("tie tolerances must be >= 0")

    best = min(table, key=lambda row: (row["mae"], row["lambda"]))
    threshold = best["mae"] * (1 + tie_rtol) + tie_atol
    chosen = max(
        (row for row in table if row["mae"] <= threshold),
        key=lambda row: row["lambda"],
    )
    return {
        "chosen": chosen["lambda"],
        "chosen_mae": chosen["mae"],
        "best": best["lambda"],
        "best_mae": best["mae"],
        "rule": "largest lambda with mae <= best_mae * (1 + tie_rtol) + tie_atol",
        "tie_rtol": tie_rtol,
        "tie_atol": tie_atol,
    }


@utils.timed
def select_lambda(
    ind: IndicatorMatrix,
    series: AggregateSeries,
    groups: Optional[ColinearityGroups] = None,
    grid: Iterable[float] = DEFAULT_GRID,
    validation_split: float = DEFAULT_VALIDATION_SPLIT,
    mode: str = SolveMode.AUTO,
    use_tso_rows: bool = True,
    exact_limit: int = DEFAULT_EXACT_LIMIT,
    tie_rtol: float = 1e-3,
    tie_atol: float = 1e-9,
) -> Tuple[float, InertiaSolution]:
    """
    Fit every ``lam`` in ``grid`` on the earlier periods and score the
    market-row MAE on the later ones. Within ``tie_rtol``/``tie_atol`` of the
    best MAE the largest ``lam`` wins. The winner is refit on every period.
    """
    grid = sorted({float(lam) for lam in grid})
    if not grid:
        raise InvalidArgumentError("lambda grid must not be empty")
    if any(not math.isfinite(lam) or lam < 0 for lam in grid):
        raise InvalidArgumentError(f"lambda grid must be finite and >= 0: {grid}")

    train, validation = chronological_rows(ind.n_periods, validation_split)
    if train.size == 0 or validation.size == 0:
        logger.warning("Too few periods to split, scoring lambda in-sample")
        train = validation = np.arange(ind.n_periods)

    ind_train, series_train = ind.take(train), series.take(train)
    ind_val, series_val = ind.take(validation), series.take(validation)

    table = []
    for lam in grid:
        sol = fit(ind_train, series_train, groups, lam, mode, use_tso_rows, exact_limit)
        table.append(
            {
                "lambda": lam,
                "mae": validation_mae(sol, ind_val, series_val),
                "n_nonzero": sol.diagnostics.n_nonzero,
            }
        )

    selection = pick_lambda(table, tie_rtol, tie_atol)
    chosen = selection["chosen"]

    logger.info(json.dumps({"type": "LambdaSelection", **selection, "table": table}))
    return chosen, fit(ind, series, groups, chosen, mode, use_tso_rows, exact_limit)


__all__ = [
    "DEFAULT_GRID",
    "chronological_rows",
    "fit",
    "market_prediction",
    "pick_lambda",
    "select_lambda",
    "validation_mae",
]
