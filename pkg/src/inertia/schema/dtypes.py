"""
==========================
 `inertia.schema.dtypes`
==========================

Custom pandera data types registered with the pandas engine.

See https://pandera.readthedocs.io/en/stable/dtypes.html#example

"""

import pandas as pd
from pandera import dtypes
from pandera.engines import pandas_engine
from pandera.engines.type_aliases import PandasObject

from inertia.domain import FuelType


@pandas_engine.Engine.register_dtype(
    equivalents=["boolean", pd.BooleanDtype, pd.BooleanDtype()]
)
@dtypes.immutable
class LiteralBool(pandas_engine.BOOL):
    truthy = ["TRUE", "T", "YES", "Y", "1"]  # True
    falsey = ["FALSE", "F", "NO", "N", "0"]  # False

    def coerce(self, series: pd.Series) -> pd.Series:
        """Coerce a pandas.Series to boolean types; anything else is pd.NA."""
        if pd.api.types.is_bool_dtype(series):
            return series.astype("boolean")

        lookup = {**{t: True for t in self.truthy}, **{f: False for f in self.falsey}}
        return (
            series.astype("string")
            .str.strip()
            .str.upper()
            .map(lookup)
            .astype("boolean")
        )


@pandas_engine.Engine.register_dtype  # type: ignore
@dtypes.immutable
class Fuel(pandas_engine.NpString):
    def coerce(self, s: PandasObject) -> PandasObject:
        """Normalize fuel labels; unknown labels become ``other``."""
        return (
            s.astype("string")
            .fillna(FuelType.OTHER.value)
            .map(lambda x: FuelType.parse(x).value)
            .astype(object)
        )


__all__ = ["Fuel", "LiteralBool"]
