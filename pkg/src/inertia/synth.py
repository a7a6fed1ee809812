"""
=================
 inertia.synth
=================

Synthetic fleets with known inertia, used as ground truth for the estimator.

The pseudorandom stream is ``numpy.random.default_rng(seed)`` (PCG64), and
draws always happen in the same order, so a seed fixes every byte of a
scenario and of its export.

"""

import datetime as dt
import logging
import pathlib
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
import pydantic
from scipy import sparse

from inertia import utils
from inertia.domain import PERIODS_PER_DAY, FuelType, Plant, inertia_from_h
from inertia.ingest import AggregateSeries, ColinearityGroups, IndicatorMatrix
from inertia.ingest.tables import EPOCH, periods_from_codes
from inertia.schema.tables import FILE_NAMES

logger = logging.getLogger(__name__)

PathLike = Union[str, pathlib.Path]

ZERO_FUELS = [FuelType.WIND, FuelType.SOLAR, FuelType.BATTERY]
SYNCHRONOUS_FUELS = [
    FuelType.CCGT,
    FuelType.COAL,
    FuelType.BIOMASS,
    FuelType.GAS,
    FuelType.NUCLEAR,
    FuelType.HYDRO,
    FuelType.PUMPED_STORAGE,
]


class ScenarioConfig(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True, allow_inf_nan=False)

    n_plants: pydantic.PositiveInt = 50
    zero_fraction: float = pydantic.Field(0.3, ge=0.0, le=1.0)
    n_periods: pydantic.PositiveInt = 2000
    noise_sigma: pydantic.NonNegativeFloat = 0.0
    w_dem_true: pydantic.NonNegativeFloat = 0.5
    duty_cycle: float = pydantic.Field(0.6, ge=0.0, le=1.0)
    tso_action_rate: float = pydantic.Field(0.01, ge=0.0, le=1.0)
    seed: int = 0
    colinear_pairs: pydantic.NonNegativeInt = 0
    start_date: dt.date = dt.date(2020, 1, 1)
    h_range: Tuple[pydantic.NonNegativeFloat, pydantic.NonNegativeFloat] = (2.0, 10.0)
    nameplate_range: Tuple[pydantic.PositiveFloat, pydantic.PositiveFloat] = (
        20.0,
        800.0,
    )

    @property
    def n_zero(self) -> int:
        return int(round(self.zero_fraction * self.n_plants))

    @pydantic.model_validator(mode="after")
    def check_ranges(self) -> "ScenarioConfig":
        if self.h_range[0] > self.h_range[1]:
            raise ValueError(f"h_range is empty: {self.h_range}")
        if self.nameplate_range[0] > self.nameplate_range[1]:
            raise ValueError(f"nameplate_range is empty: {self.nameplate_range}")
        if 2 * self.colinear_pairs > self.n_plants - self.n_zero:
            raise ValueError(
                f"{self.colinear_pairs} colinear pair(s) need "
                f"{2 * self.colinear_pairs} plants with inertia"
            )
        return self


@dataclass(frozen=True)
class Scenario:
    config: ScenarioConfig
    plants: List[Plant]
    ind: IndicatorMatrix
    series: AggregateSeries
    groups: ColinearityGroups
    levels: np.ndarray
    deltas: np.ndarray

    @property
    def w_true(self) -> Dict[str, float]:
        return {p.id: float(p.true_inertia or 0.0) for p in self.plants}

    @property
    def tied(self) -> List[List[str]]:
        return [[self.ind.plants[i] for i in g] for g in self.groups.tied]

    @property
    def identifiable(self) -> List[str]:
        """Plants ever ON (or switched by the TSO) and not tied to another."""
        active = (self.ind.market.getnnz(axis=0) + self.ind.tso.getnnz(axis=0)) > 0
        tied = {pid for group in self.tied for pid in group}
        return [
            pid
            for j, pid in enumerate(self.ind.plants)
            if active[j] and pid not in tied
        ]


def diurnal_demand(periods: np.ndarray, days: np.ndarray) -> np.ndarray:
    """GW: a daily double hump over a weekly swell."""
    phase = 2 * np.pi * (periods - 1) / PERIODS_PER_DAY
    daily = 6.0 * np.sin(phase - np.pi / 2) + 2.5 * np.sin(2 * phase)
    weekly = 2.0 * np.cos(2 * np.pi * days / 7)
    return np.maximum(28.0 + daily + weekly, 0.0)


@utils.timed
def generate(cfg: ScenarioConfig) -> Scenario:
    rng = np.random.default_rng(cfg.seed)
    n, T = cfg.n_plants, cfg.n_periods

    ids = [f"T_SYN-{j + 1:03d}" for j in range(n)]
    zero = np.zeros(n, dtype=bool)
    zero[rng.choice(n, size=cfg.n_zero, replace=False)] = True

    zero_fuel = rng.integers(0, len(ZERO_FUELS), size=n)
    sync_fuel = rng.integers(0, len(SYNCHRONOUS_FUELS), size=n)
    fuels = [
        ZERO_FUELS[zero_fuel[j]] if zero[j] else SYNCHRONOUS_FUELS[sync_fuel[j]]
        for j in range(n)
    ]
    nameplate = rng.uniform(*cfg.nameplate_range, size=n)
    h = rng.uniform(*cfg.h_range, size=n)

    on = rng.random((T, n)) < cfg.duty_cycle
    switched = (rng.random((T, n)) < cfg.tso_action_rate) & ~on
    level_share = rng.uniform(0.3, 1.0, size=(T, n))
    delta_share = rng.uniform(0.3, 1.0, size=(T, n))
    noise = rng.normal(0.0, 1.0, size=T) * cfg.noise_sigma

    pairs = []
    synchronous = np.flatnonzero(~zero)
    for a, b in synchronous[: 2 * cfg.colinear_pairs].reshape(-1, 2):
        fuels[b], nameplate[b], h[b] = fuels[a], nameplate[a], h[a]
        on[:, b], switched[:, b] = on[:, a], switched[:, a]
        pairs.append([ids[a], ids[b]])

    w = np.array(
        [0.0 if zero[j] else inertia_from_h(h[j], nameplate[j]) for j in range(n)]
    )

    days = np.arange(T) // PERIODS_PER_DAY
    period = np.arange(T) % PERIODS_PER_DAY + 1
    demand = diurnal_demand(period, days)

    clean = cfg.w_dem_true * demand + on.astype(float) @ w
    a_market = np.maximum(clean + noise, 0.0)
    a_outturn = a_market + switched.astype(float) @ w

    start = (cfg.start_date - EPOCH).days * PERIODS_PER_DAY
    periods = periods_from_codes(start + np.arange(T, dtype=np.int64))

    plants = [
        Plant(id=ids[j], fuel=fuels[j], nameplate=nameplate[j], true_inertia=w[j])
        for j in range(n)
    ]
    ind = IndicatorMatrix(
        periods=periods,
        plants=ids,
        market=sparse.csr_matrix(on.astype(np.int8)),
        tso=sparse.csr_matrix(switched.astype(np.int8)),
        fuels=fuels,
    )
    series = AggregateSeries(
        periods=periods, a_market=a_market, a_outturn=a_outturn, demand=demand
    )

    logger.info(
        f"Generated {n} plants ({int(zero.sum())} zero) over {T} periods, "
        f"{len(pairs)} colinear pair(s), seed {cfg.seed}"
    )
    return Scenario(
        config=cfg,
        plants=plants,
        ind=ind,
        series=series,
        groups=ColinearityGroups.from_plant_ids(ids, pairs),
        levels=np.where(on, level_share * nameplate, 0.0),
        deltas=np.where(switched, delta_share * nameplate, 0.0),
    )


class RecoveryReport(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True)

    errors: Dict[str, float]
    max_error: float
    mae: float
    false_positives: List[str]
    false_negatives: List[str]

    @property
    def n_false_positives(self) -> int:
        return len(self.false_positives)

    @property
    def n_false_negatives(self) -> int:
        return len(self.false_negatives)


def recovery_report(
    sol, scenario: Scenario, plants: Optional[List[str]] = None
) -> RecoveryReport:
    """
    Absolute error per plant against the ground truth, plus plants recovered
    nonzero with zero truth (false positives) and the reverse. ``plants``
    restricts the comparison, e.g. to ``scenario.identifiable``.
    """
    truth = scenario.w_true
    ids = list(plants) if plants is not None else sorted(truth)
    recovered = {pid: float(sol.w.get(pid, 0.0)) for pid in ids}

    errors = {pid: abs(recovered[pid] - truth[pid]) for pid in ids}
    values = np.array(list(errors.values())) if errors else np.zeros(1)
    return RecoveryReport(
        errors=errors,
        max_error=float(values.max()),
        mae=float(values.mean()),
        false_positives=[p for p in ids if truth[p] == 0 and recovered[p] > 0],
        false_negatives=[p for p in ids if truth[p] > 0 and recovered[p] == 0],
    )


def _write(frame: pd.DataFrame, path: pathlib.Path) -> None:
    frame.to_csv(path, index=False, lineterminator="\n")


@utils.timed
def export_scenario(scenario: Scenario, out_dir: PathLike) -> Dict[str, pathlib.Path]:
    """Write the ingest CSV files plus ``ground_truth.csv``; returns the paths."""
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {key: out / name for key, name in FILE_NAMES.items() if key != "candidates"}

    ind, series = scenario.ind, scenario.series
    T, n = ind.n_periods, ind.n_plants
    dates = np.array([p.date.isoformat() for p in ind.periods], dtype=object)
    period = np.array([p.period for p in ind.periods])

    # Plant-major: every period of the first plant, then the next.
    _write(
        pd.DataFrame(
            {
                "plant_id": np.repeat(np.array(ind.plants, dtype=object), T),
                "date": np.tile(dates, n),
                "period": np.tile(period, n),
                "level_mw": scenario.levels.T.ravel(),
            }
        ),
        paths["positions"],
    )

    rows, cols = np.nonzero(scenario.deltas)
    order = np.lexsort((rows, cols))
    rows, cols = rows[order], cols[order]
    _write(
        pd.DataFrame(
            {
                "plant_id": np.array(ind.plants, dtype=object)[cols],
                "date": dates[rows],
                "period": period[rows],
                "accepted_delta_mw": scenario.deltas[rows, cols],
            }
        ),
        paths["actions"],
    )

    for key, values in (
        ("market", series.a_market),
        ("outturn", series.a_outturn),
    ):
        _write(
            pd.DataFrame({"date": dates, "period": period, "inertia_gvas": values}),
            paths[key],
        )
    _write(
        pd.DataFrame({"date": dates, "period": period, "demand_gw": series.demand}),
        paths["demand"],
    )

    _write(
        pd.DataFrame(
            {
                "plant_id": [p.id for p in scenario.plants],
                "fuel": [p.fuel.value for p in scenario.plants],
                "nameplate_mva": [p.nameplate for p in scenario.plants],
            }
        ),
        paths["plants"],
    )
    _write(
        pd.DataFrame(
            {
                "plant_id": [p.id for p in scenario.plants],
                "w_true_gvas": [p.true_inertia or 0.0 for p in scenario.plants],
            }
        ),
        paths["ground_truth"],
    )

    logger.info(f"Exported scenario ({T} periods, {n} plants) to {out}")
    return paths


__all__ = [
    "RecoveryReport",
    "Scenario",
    "ScenarioConfig",
    "diurnal_demand",
    "export_scenario",
    "generate",
    "recovery_report",
]
