"""
==================================
 `inertia.estimator.persistence`
==================================

The fitted-model JSON document and the tabular reports derived from it.

    {
      "schema_version": 1,
      "lambda": 0.1,
      "w_dem_gvas_per_gw": 0.5,
      "plants": [{"plant_id": ..., "fuel": ..., "w_gvas": ..., "h_seconds": ...}],
      "groups": [["T_DINO-1", "T_DINO-2"]],
      "diagnostics": {"rmse_gvas": ..., "mae_gvas": ..., "n_nonzero": ..., "exact": ...}
    }

Only tied groups (two or more plants) are listed under ``groups``.

"""

import json
import logging
import pathlib
from typing import Dict, List, Mapping, Optional, Sequence, Union

import numpy as np
import pandas as pd
import pydantic

from inertia.domain import LITERATURE_H_RANGES, FuelType, Plant, h_constant
from inertia.estimator.solution import InertiaSolution
from inertia.exceptions import MissingFileError, ModelError, SchemaVersionError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
PathLike = Union[str, pathlib.Path]


class PlantEntry(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True, allow_inf_nan=False)

    plant_id: str
    fuel: FuelType = FuelType.OTHER
    w_gvas: pydantic.NonNegativeFloat
    h_seconds: Optional[pydantic.NonNegativeFloat] = None

    @pydantic.field_validator("fuel", mode="before")
    @classmethod
    def parse_fuel(cls, value: object) -> FuelType:
        return FuelType.parse(value)


class ModelDiagnostics(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True)

    rmse_gvas: float
    mae_gvas: float
    n_nonzero: int
    exact: bool


class FittedModel(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True, populate_by_name=True)

    schema_version: int = SCHEMA_VERSION
    lam: pydantic.NonNegativeFloat = pydantic.Field(..., alias="lambda")
    w_dem_gvas_per_gw: pydantic.NonNegativeFloat
    plants: List[PlantEntry]
    groups: List[List[str]] = []
    diagnostics: ModelDiagnostics

    @property
    def w(self) -> Dict[str, float]:
        return {p.plant_id: p.w_gvas for p in self.plants}

    @property
    def w_dem(self) -> float:
        return self.w_dem_gvas_per_gw

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json", by_alias=True), indent=2) + "\n"


def build_model(
    sol: InertiaSolution,
    plants: Optional[Sequence[Plant]] = None,
    fuels: Optional[Mapping[str, FuelType]] = None,
) -> FittedModel:
    """
    Attach fuel and nameplate information to ``sol``. ``plants`` (the
    registry) wins over ``fuels``; H is null without a nameplate.
    """
    registry = {p.id: p for p in plants or []}
    fuels = dict(fuels or {})

    entries = []
    for pid in sorted(sol.w):
        w = sol.w[pid]
        plant = registry.get(pid)
        entries.append(
            PlantEntry(
                plant_id=pid,
                fuel=plant.fuel if plant else fuels.get(pid, FuelType.OTHER),
                w_gvas=w,
                h_seconds=h_constant(w, plant.nameplate) if plant else None,
            )
        )

    return FittedModel(
        lam=sol.lam,
        w_dem_gvas_per_gw=sol.w_dem,
        plants=entries,
        groups=[list(group) for group in sol.col_map if len(group) > 1],
        diagnostics=ModelDiagnostics(
            rmse_gvas=sol.diagnostics.rmse,
            mae_gvas=sol.diagnostics.mae,
            n_nonzero=sol.diagnostics.n_nonzero,
            exact=sol.diagnostics.exact,
        ),
    )


def save_model(
    path: PathLike,
    sol: Union[InertiaSolution, FittedModel],
    plants: Optional[Sequence[Plant]] = None,
    fuels: Optional[Mapping[str, FuelType]] = None,
) -> FittedModel:
    model = sol if isinstance(sol, FittedModel) else build_model(sol, plants, fuels)
    pathlib.Path(path).write_text(model.to_json(), encoding="utf-8")
    return model


def load_model(path: PathLike) -> FittedModel:
    path = pathlib.Path(path)
    if not path.is_file():
        raise MissingFileError(str(path), "model")

    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ModelError(f"{path}: not a JSON document ({e})") from e

    if not isinstance(document, dict):
        raise ModelError(f"{path}: expected a JSON object")

    version = document.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaVersionError(version, SCHEMA_VERSION)

    try:
        return FittedModel.model_validate(document)
    except pydantic.ValidationError as e:
        raise ModelError(f"{path}: invalid model document\n{e}") from e


def plant_report(model: FittedModel) -> pd.DataFrame:
    """``plant_id, fuel, w_gvas, h_seconds`` sorted by fuel then plant id."""
    frame = pd.DataFrame(
        {
            "plant_id": [p.plant_id for p in model.plants],
            "fuel": [p.fuel.value for p in model.plants],
            "w_gvas": [p.w_gvas for p in model.plants],
            "h_seconds": [
                np.nan if p.h_seconds is None else p.h_seconds for p in model.plants
            ],
        }
    )
    return frame.sort_values(["fuel", "plant_id"], kind="stable").reset_index(
        drop=True
    )


def _within_literature(row: pd.Series) -> float:
    bounds = LITERATURE_H_RANGES.get(FuelType(row["fuel"]))
    if bounds is None or pd.isna(row["h_seconds"]):
        return np.nan
    lo, hi = bounds
    return float(lo <= row["h_seconds"] <= hi)


def fuel_summary(model: FittedModel) -> pd.DataFrame:
    """Per fuel: plant count, nonzero count, H median/min/max and the share of
    plants whose H lies in the published range for that fuel."""
    report = plant_report(model)
    if report.empty:
        return pd.DataFrame(
            columns=[
                "fuel",
                "plants",
                "nonzero",
                "h_median",
                "h_min",
                "h_max",
                "within_literature",
            ]
        )

    report["nonzero"] = report["w_gvas"] > 0
    report["within"] = report.apply(_within_literature, axis=1)

    return (
        report.groupby("fuel", sort=True)
        .agg(
            plants=("plant_id", "count"),
            nonzero=("nonzero", "sum"),
            h_median=("h_seconds", "median"),
            h_min=("h_seconds", "min"),
            h_max=("h_seconds", "max"),
            within_literature=("within", "mean"),
        )
        .reset_index()
    )


__all__ = [
    "FittedModel",
    "PlantEntry",
    "SCHEMA_VERSION",
    "build_model",
    "fuel_summary",
    "load_model",
    "plant_report",
    "save_model",
]
