from inertia.schema import dtypes, tables
from inertia.schema.dtypes import Fuel, LiteralBool
from inertia.schema.io import read_csv

__all__ = ["dtypes", "tables", "Fuel", "LiteralBool", "read_csv"]
