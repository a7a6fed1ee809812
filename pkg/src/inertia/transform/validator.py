import json
import logging
from datetime import date, datetime
from decimal import Decimal
from functools import partial
from typing import Any, Callable, Dict, List

import numpy as np
import pandas as pd
import pandera as pa
import pandera.errors

from inertia.exceptions import DuplicateKeyError, ParseError
from inertia.transform import abstract, mixins

logger = logging.getLogger(__name__)

# Header is line 1, so the first data row (index 0) is line 2.
LINE_OFFSET = 2

FAILURE_KEY = ["schema_context", "column", "check", "index"]


def schema_errors(cases: pd.DataFrame) -> dict:
    return {
        "types": "File",
        "data": (
            cases[cases.schema_context == "DataFrameSchema"][
                ["check", "failure_case"]
            ].to_dict(orient="records")
        ),
    }


def column_errors(cases: pd.DataFrame) -> dict:
    return {
        "types": "File",
        "data": (
            cases[cases.schema_context == "Column"][["column", "check", "index"]]
            .groupby(["column", "check"], as_index=False)
            .count()
            .rename(columns={"index": "count"})
            .to_dict(orient="records")
        ),
    }


def error_report(cases: pd.DataFrame) -> dict:
    return {
        "types": "FileReport",
        "sections": {
            "Schema Errors": schema_errors(cases),
            "Column Errors": column_errors(cases),
        },
    }


def _default(x):
    if isinstance(x, (date, datetime)):
        return x.isoformat()
    elif isinstance(x, (Decimal, np.floating)):
        return float(x)
    elif isinstance(x, np.integer):
        return int(x)
    else:
        return str(x)


def failures(cases: pd.DataFrame) -> List[Dict[str, Any]]:
    """One record per failing cell, located by file line."""
    records = []
    for case in cases.to_dict(orient="records"):
        index = case.get("index")
        line = (
            int(index) + LINE_OFFSET
            if index is not None and not pd.isna(index)
            else None
        )
        records.append(
            {
                "line": line,
                "column": case.get("column"),
                "check": str(case.get("check")),
                "failure_case": _default(case.get("failure_case")),
            }
        )
    return sorted(records, key=lambda r: (r["line"] is None, r["line"] or 0))


def unparsable_rows(cases: pd.DataFrame) -> pd.Index:
    """Row labels holding a value that could not be coerced to its dtype."""
    coercion = cases["check"].astype(str).str.startswith("coerce_dtype")
    return pd.Index(cases.loc[coercion, "index"].dropna().unique())


def raise_parse_error(cases: pd.DataFrame, path: str = "<frame>"):
    report = error_report(cases)
    logger.error(f"{report['types']} {json.dumps(report, default=_default)}")
    raise ParseError(path, failures(cases))


class Validator(abstract.Transform, mixins.SchemaDriven):
    """
    Validator applies lazy schema validation (every check runs before any
    error is raised) and hands the failure cases to ``error_handler``.

    pandera skips the checks of a column once a value in it fails to coerce,
    so rows with unparsable values are set aside and the rest validated again;
    both sets of failure cases are reported together.

    See <https://pandera.readthedocs.io/en/stable/index.html>.

    Params

        :type schema: pa.DataFrameSchema
        :param schema:

            A Pandera schema to be used as the validator.

        :type error_handler: Callable[[pd.DataFrame], Any]
        :param error_handler:

            Called with the ``failure_cases`` frame; the default raises a
            ``ParseError`` naming the failing file lines.

    Usage

        >>> validate = Validator(schema, path="positions.csv")
        >>> X = validate(pd.read_csv("positions.csv", dtype=str))

    """

    def __init__(
        self,
        schema: pa.DataFrameSchema,
        path: str = "<frame>",
        error_handler: Callable[[pd.DataFrame], Any] = None,  # type: ignore
    ):
        self.schema = schema
        self.path = path
        self.error_handler = error_handler or partial(raise_parse_error, path=path)

    def failure_cases(
        self, X: pd.DataFrame, e: pa.errors.SchemaErrors
    ) -> pd.DataFrame:
        cases = e.failure_cases
        unparsable = unparsable_rows(cases)
        if unparsable.empty:
            return cases

        try:
            self.schema.validate(X.loc[~X.index.isin(unparsable)], lazy=True)
        except pandera.errors.SchemaErrors as again:
            cases = pd.concat([cases, again.failure_cases], ignore_index=True)
            cases = cases.drop_duplicates(subset=FAILURE_KEY, ignore_index=True)
        return cases

    def fit_transform(self, X: pd.DataFrame, y=None, **fit_params) -> pd.DataFrame:
        try:
            return self.schema.validate(X, lazy=True)
        except pandera.errors.SchemaErrors as e:
            self.error_handler(self.failure_cases(X, e))
            raise


class UniqueKey(abstract.Transform, mixins.SchemaDriven):
    """
    UniqueKey raises ``DuplicateKeyError`` when two rows share the schema's
    ``metadata["key"]`` columns.
    """

    def __init__(self, schema: pa.DataFrameSchema, path: str = "<frame>"):
        self.schema = schema
        self.path = path

    def transform(self, X: pd.DataFrame) -> pd.DataFrame:
        if not self.key or X.empty:
            return X

        duplicated = X.duplicated(subset=self.key, keep="first")
        if duplicated.any():
            lines = [int(i) + LINE_OFFSET for i in X.index[duplicated]]
            raise DuplicateKeyError(self.path, self.key, lines)

        return X


__all__ = [
    "UniqueKey",
    "Validator",
    "error_report",
    "failures",
    "raise_parse_error",
    "unparsable_rows",
]
