import logging
import pathlib
from typing import Union

import pandas as pd
import pandera as pa

from inertia import utils
from inertia.exceptions import MissingFileError, SchemaFileError
from inertia.transform import ReadPipeline
from inertia.transform.mixins import SchemaDriven

logger = logging.getLogger(__name__)

PathLike = Union[str, pathlib.Path]


def check_header(path: str, columns: list, schema: pa.DataFrameSchema) -> None:
    """Raise ``SchemaFileError`` naming every required column not in the header."""
    aliases = SchemaDriven(schema).aliases
    present = {aliases.get(c.strip().lower(), c) for c in columns}
    missing = [
        name
        for name, column in schema.columns.items()
        if column.required and name not in present
    ]
    if missing:
        raise SchemaFileError(path, f"missing column(s) {missing}")


def read_csv(
    path: PathLike, schema: pa.DataFrameSchema, what: str = ""
) -> pd.DataFrame:
    """
    Read a UTF-8, comma separated file with a header row and return the frame
    validated (and coerced) by ``schema``.

    Raises ``MissingFileError``, ``SchemaFileError`` (header), ``ParseError``
    (invalid cells, with file lines) or ``DuplicateKeyError``.
    """
    path = pathlib.Path(path)
    if not path.is_file():
        raise MissingFileError(str(path), what or schema.name)

    try:
        X = pd.read_csv(
            path,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=False,
            encoding="utf-8",
        )
    except pd.errors.EmptyDataError as e:
        message = "file is empty, a header row is required"
        raise SchemaFileError(str(path), message) from e
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise SchemaFileError(str(path), f"unreadable CSV ({e})") from e

    check_header(str(path), list(X.columns), schema)

    with utils.frame_statistics(X, name=schema.name or path.name, logger=logger):
        # The index is kept: row i sits on file line i + 2.
        return X.pipe(ReadPipeline(schema, path=str(path)))
