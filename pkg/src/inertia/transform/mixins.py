from functools import cached_property
from typing import Dict, List

import pandera as pa


class SchemaDriven:
    schema: pa.DataFrameSchema

    def __init__(self, schema: pa.DataFrameSchema):
        self.schema = schema

    @cached_property
    def aliases(self) -> Dict[str, str]:
        """Lower-cased alias (and title) -> column name."""
        aliases = {}
        for name, column in self.schema.columns.items():
            for alias in (column.metadata or {}).get("aliases", []):
                aliases[alias.strip().lower()] = name
            if column.title:
                aliases[column.title.strip().lower()] = name
            aliases[name.lower()] = name
        return aliases

    @cached_property
    def required(self) -> List[str]:
        return [
            name for name, column in self.schema.columns.items() if column.required
        ]

    @cached_property
    def key(self) -> List[str]:
        """Columns that identify a row, from the schema ``metadata``."""
        return list((self.schema.metadata or {}).get("key", []))
