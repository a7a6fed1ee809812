from inertia.transform.pipeline import Pipeline, ReadPipeline
from inertia.transform.simple import (
    CleanStrings,
    DropBlankRows,
    Identity,
    RenameAliases,
)
from inertia.transform.validator import UniqueKey, Validator, error_report

__all__ = [
    "error_report",
    "CleanStrings",
    "DropBlankRows",
    "Identity",
    "Pipeline",
    "ReadPipeline",
    "RenameAliases",
    "UniqueKey",
    "Validator",
]
