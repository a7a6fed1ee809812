import pandas as pd
import pandera as pa

from inertia import utils
from inertia.transform import abstract, mixins, simple
from inertia.transform.validator import UniqueKey, Validator

__all__ = ["ReadPipeline", "Pipeline"]


class Pipeline(abstract.Transform):
    """Pipeline chains a sequence of transform Estimators ending in a transform.

    The final component of a ``sklearn.pipeline.Pipeline`` must implement
    fit; this one only needs transforms.

    Params

        :type steps: tuple[tuple[str, Transform]]
        :param steps:
            A *-unpacked sequence of named pipeline steps subclassing the
            `(BaseEstimator, TransformerMixin)` classes, i.e. implements
            either `transform` or `fit_transform`.

    Usage

        >>> pipeline = Pipeline(
        ...     ("clean", CleanStrings()),
        ...     ("validate", Validator(schema)),
        ... )
        >>> X = pd.read_csv("positions.csv", dtype=str).pipe(pipeline)

    """

    def __init__(self, *steps: tuple[str, abstract.Transform]):
        self.steps = dict([("start", simple.Identity()), *steps])

    def add_step(self, key: str, step: abstract.Transform) -> "Pipeline":
        self.steps.update({key: step})
        return self

    def fit_transform(self, X: pd.DataFrame, y=None, **fit_params) -> pd.DataFrame:
        for step in self.steps.values():
            X = X.pipe(step.fit_transform, y=y, **fit_params)  # type: ignore
        return X


class ReadPipeline(Pipeline, mixins.SchemaDriven):
    """
    ReadPipeline is the standard path from raw CSV strings to a validated
    frame: drop blank rows, rename aliases, strip strings, validate lazily
    against the schema and finally reject duplicate keys.
    """

    def __init__(self, schema: pa.DataFrameSchema, path: str = "<frame>"):
        mixins.SchemaDriven.__init__(self, schema)
        Pipeline.__init__(
            self,
            *(
                ("blank", simple.DropBlankRows()),
                ("rename", simple.RenameAliases(schema)),
                ("clean_strings", simple.CleanStrings()),
                ("validate", Validator(schema, path=path)),
                ("unique", UniqueKey(schema, path=path)),
            ),
        )

    @utils.timed
    def fit_transform(self, X: pd.DataFrame, y=None, **fit_params) -> pd.DataFrame:
        return super().fit_transform(X, y=y, **fit_params)
