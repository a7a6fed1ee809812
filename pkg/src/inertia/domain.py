"""
==================
 inertia.domain
==================
---------------------------------------
 Value types shared by every module
---------------------------------------

Units are fixed across the package:

    inertia     GVAs
    demand      GW
    w_dem       GVAs per GW
    nameplate   MVA
    H           seconds

Every value type is an immutable ``pydantic`` model that rejects NaN and
infinity at construction.

"""

import datetime as dt
import enum
import math
import zoneinfo
from functools import total_ordering
from typing import Annotated, Dict, FrozenSet, Optional, Tuple, Union

import pydantic

from inertia.exceptions import InvalidArgumentError

GB_TIMEZONE = zoneinfo.ZoneInfo("Europe/London")
PERIODS_PER_DAY = 48

PlantId = Annotated[
    str,
    pydantic.StringConstraints(strip_whitespace=True, min_length=1, pattern=r"^\S+$"),
]


class FuelType(enum.StrEnum):
    CCGT = "ccgt"
    COAL = "coal"
    BIOMASS = "biomass"
    GAS = "gas"
    HYDRO = "hydro"
    PUMPED_STORAGE = "pumped_storage"
    NUCLEAR = "nuclear"
    WIND = "wind"
    SOLAR = "solar"
    BATTERY = "battery"
    OTHER = "other"

    @classmethod
    def _missing_(cls, value: object) -> "FuelType":
        if isinstance(value, str):
            normalized = value.strip().lower().replace(" ", "_").replace("-", "_")
            for member in cls:
                if member.value == normalized:
                    return member
        return cls.OTHER

    @classmethod
    def parse(cls, value: object) -> "FuelType":
        return cls(value)

    @property
    def zero_inertia(self) -> bool:
        """Technologies not electro-mechanically coupled to the grid."""
        return self in ZERO_INERTIA_FUELS

    @property
    def thermal(self) -> bool:
        return self in THERMAL_FUELS


ZERO_INERTIA_FUELS: FrozenSet[FuelType] = frozenset(
    {FuelType.WIND, FuelType.SOLAR, FuelType.BATTERY}
)
THERMAL_FUELS: FrozenSet[FuelType] = frozenset(
    {FuelType.CCGT, FuelType.COAL, FuelType.BIOMASS, FuelType.GAS}
)

"""
``LITERATURE_H_RANGES``
=======================

Published ranges of the inertia constant H (seconds) per technology. Fuels
without an entry have no reference range.
"""
LITERATURE_H_RANGES: Dict[FuelType, Tuple[float, float]] = {
    **{fuel: (3.0, 10.0) for fuel in THERMAL_FUELS},
    FuelType.HYDRO: (2.0, 4.0),
    FuelType.PUMPED_STORAGE: (2.0, 4.0),
    **{fuel: (0.0, 0.0) for fuel in ZERO_INERTIA_FUELS},
}


class _Value(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True, allow_inf_nan=False)


class Plant(_Value):
    """
    A generating unit. ``true_inertia`` is only known for synthetic fleets.
    """

    id: PlantId
    fuel: FuelType = FuelType.OTHER
    nameplate: pydantic.PositiveFloat = pydantic.Field(
        ..., description="Nameplate rating in MVA."
    )
    true_inertia: Optional[pydantic.NonNegativeFloat] = pydantic.Field(
        default=None, description="Ground-truth inertia in GVAs."
    )

    @pydantic.field_validator("fuel", mode="before")
    @classmethod
    def parse_fuel(cls, value: object) -> FuelType:
        return FuelType.parse(value)


@total_ordering
class SettlementPeriod(_Value):
    """
    A half-hourly GB settlement period. ``(date, period)`` is the key and
    ``utc_start`` is derived from it: period 1 starts at local midnight in
    Europe/London and each period adds 30 minutes of elapsed time.
    """

    date: dt.date
    period: int = pydantic.Field(..., ge=1, le=PERIODS_PER_DAY)

    @classmethod
    def from_key(
        cls, day: Union[dt.date, str, dt.datetime], period: int
    ) -> "SettlementPeriod":
        if isinstance(day, dt.datetime):
            day = day.date()
        elif isinstance(day, str):
            day = dt.date.fromisoformat(day)
        return cls(date=day, period=int(period))

    @property
    def key(self) -> Tuple[dt.date, int]:
        return (self.date, self.period)

    @property
    def utc_start(self) -> dt.datetime:
        midnight = dt.datetime.combine(self.date, dt.time(0), tzinfo=GB_TIMEZONE)
        return midnight.astimezone(dt.timezone.utc) + dt.timedelta(
            minutes=30 * (self.period - 1)
        )

    def __lt__(self, other: "SettlementPeriod") -> bool:
        return self.key < other.key

    def __str__(self) -> str:
        return f"{self.date.isoformat()}/{self.period}"


class InertiaValue(_Value):
    value: pydantic.NonNegativeFloat = pydantic.Field(..., description="GVAs")

    def __float__(self) -> float:
        return self.value


class DemandValue(_Value):
    value: pydantic.NonNegativeFloat = pydantic.Field(..., description="GW")

    def __float__(self) -> float:
        return self.value


def _as_float(x: Union[float, InertiaValue], name: str) -> float:
    value = float(x)
    if not math.isfinite(value):
        raise InvalidArgumentError(f"{name} must be finite, got {value!r}")
    return value


def h_constant(w: Union[float, InertiaValue], nameplate: float) -> float:
    """
    The inertia constant H in seconds: raw inertia (GVAs, i.e. 1000 MVA·s)
    divided by the nameplate rating (MVA).
    """
    value = _as_float(w, "inertia")
    rating = _as_float(nameplate, "nameplate")

    if rating <= 0:
        raise InvalidArgumentError(f"nameplate must be positive, got {rating!r}")
    if value < 0:
        raise InvalidArgumentError(f"inertia must be non-negative, got {value!r}")

    return value * 1000.0 / rating


def inertia_from_h(h_seconds: float, nameplate: float) -> float:
    """Inverse of ``h_constant``, in GVAs."""
    h = _as_float(h_seconds, "H")
    rating = _as_float(nameplate, "nameplate")

    if rating <= 0:
        raise InvalidArgumentError(f"nameplate must be positive, got {rating!r}")
    if h < 0:
        raise InvalidArgumentError(f"H must be non-negative, got {h!r}")

    return h * rating / 1000.0


__all__ = [
    "DemandValue",
    "FuelType",
    "GB_TIMEZONE",
    "InertiaValue",
    "LITERATURE_H_RANGES",
    "PERIODS_PER_DAY",
    "Plant",
    "PlantId",
    "SettlementPeriod",
    "THERMAL_FUELS",
    "ZERO_INERTIA_FUELS",
    "h_constant",
    "inertia_from_h",
]
