"""
==================
 inertia.config
==================

Run settings for the command line. Values come from defaults, then an
optional JSON/YAML file, then command-line flags (last wins).

"""

import datetime as dt
import logging
import pathlib
from typing import Any, Dict, List, Mapping, Optional, Union

import pydantic
import yaml

from inertia.estimator import DEFAULT_EXACT_LIMIT, DEFAULT_GRID, SolveMode
from inertia.exceptions import InvalidArgumentError, MissingFileError
from inertia.schema.tables import FILE_NAMES
from inertia.synth import ScenarioConfig

logger = logging.getLogger(__name__)

PathLike = Union[str, pathlib.Path]


class RunConfig(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(
        frozen=True, populate_by_name=True, extra="forbid", allow_inf_nan=False
    )

    data_dir: Optional[pathlib.Path] = None
    positions: Optional[pathlib.Path] = None
    market: Optional[pathlib.Path] = None
    outturn: Optional[pathlib.Path] = None
    demand: Optional[pathlib.Path] = None
    actions: Optional[pathlib.Path] = None
    plants: Optional[pathlib.Path] = None

    lam: Optional[pydantic.NonNegativeFloat] = pydantic.Field(None, alias="lambda")
    lambda_grid: List[pydantic.NonNegativeFloat] = list(DEFAULT_GRID)
    lambda_tie_rtol: pydantic.NonNegativeFloat = 1e-3
    mode: SolveMode = SolveMode.AUTO
    exact_limit: pydantic.PositiveInt = DEFAULT_EXACT_LIMIT
    validation_split: float = pydantic.Field(0.2, gt=0.0, lt=1.0)
    agreement: float = pydantic.Field(0.995, gt=0.5, le=1.0)
    use_tso_rows: bool = True
    group: bool = True

    on_threshold_mw: float = 0.0
    trigger_gvas: pydantic.PositiveFloat = 140.0
    lead_minutes: Optional[pydantic.NonNegativeFloat] = None
    since: Optional[dt.date] = None
    until: Optional[dt.date] = None

    seed: int = 0
    scenario: ScenarioConfig = ScenarioConfig()
    out: pathlib.Path = pathlib.Path("out")

    @pydantic.field_validator("lambda_grid")
    @classmethod
    def check_grid(cls, grid: List[float]) -> List[float]:
        if not grid:
            raise ValueError("lambda_grid must not be empty")
        return grid

    def path(self, name: str) -> Optional[pathlib.Path]:
        """Explicit path for ``name`` or its canonical file in ``data_dir``."""
        explicit = getattr(self, name)
        if explicit is not None:
            return explicit
        if self.data_dir is not None:
            return self.data_dir / FILE_NAMES[name]
        return None

    def required(self, name: str) -> pathlib.Path:
        path = self.path(name)
        if path is None:
            raise MissingFileError(f"--{name} or --data-dir", name)
        return path

    def optional(self, name: str) -> Optional[pathlib.Path]:
        """An explicitly given file must exist; a canonical one may be absent."""
        if getattr(self, name) is not None:
            return getattr(self, name)
        path = self.path(name)
        return path if path is not None and path.is_file() else None

    @classmethod
    def from_file(cls, path: PathLike) -> "RunConfig":
        path = pathlib.Path(path)
        if not path.is_file():
            raise MissingFileError(str(path), "config")
        try:
            document = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
        except yaml.YAMLError as e:
            raise InvalidArgumentError(f"{path}: not JSON/YAML ({e})") from e
        if not isinstance(document, dict):
            raise InvalidArgumentError(f"{path}: expected a mapping")
        return cls.model_validate(document)

    @classmethod
    def merged(
        cls, base: Optional["RunConfig"], overrides: Mapping[str, Any]
    ) -> "RunConfig":
        """``base`` with every non-None override applied, validated again."""
        document: Dict[str, Any] = (
            base.model_dump(exclude_unset=True) if base is not None else {}
        )
        scenario = dict(document.pop("scenario", {}) or {})
        scenario.update(overrides.get("scenario") or {})
        document.update(
            {k: v for k, v in overrides.items() if v is not None and k != "scenario"}
        )
        return cls.model_validate({**document, "scenario": scenario})


__all__ = ["RunConfig"]
