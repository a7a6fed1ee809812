import pandas as pd

from inertia import utils
from inertia.transform import abstract, mixins


class Identity(abstract.Transform):
    """
    Identity returns the DataFrame it receives, with no changes.

    It is the default first step of every ``Pipeline``.
    """

    def transform(self, X: pd.DataFrame) -> pd.DataFrame:  # type: ignore
        return X


class CleanStrings(abstract.Transform):
    @utils.timed
    def transform(self, X: pd.DataFrame) -> pd.DataFrame:
        for column in X.select_dtypes(include=["object", "string"]):
            X[column] = X[column].str.strip()
        return X


class DropBlankRows(abstract.Transform):
    """
    DropBlankRows removes rows where every cell is empty, keeping the index
    so that failures downstream still point at the right file line.
    """

    def transform(self, X: pd.DataFrame) -> pd.DataFrame:
        blank = (X.astype("string").fillna("") == "").all(axis=1)
        return X.loc[~blank].copy()


class RenameAliases(abstract.Transform, mixins.SchemaDriven):
    """
    RenameAliases reads column metadata from a `schema` and renames any
    `aliases` (case-insensitive) to the given column name in the schema.

    Params

        :type schema: pa.DataFrameSchema
        :param schema:

            A Pandera schema whose column ``metadata["aliases"]`` lists the
            accepted spellings of each header.

    """

    def transform(self, X: pd.DataFrame) -> pd.DataFrame:
        columns = {
            column: self.aliases[column.strip().lower()]
            for column in X.columns
            if column.strip().lower() in self.aliases
        }
        return X.rename(columns=columns)


__all__ = [
    "CleanStrings",
    "DropBlankRows",
    "Identity",
    "RenameAliases",
]
