"""
======================
 inertia.exceptions
======================

Every error raised on purpose by ``inertia`` derives from ``InertiaError``.
The ``exit_code`` is what the command line returns when the error escapes a
subcommand.

"""

from typing import Any, Dict, List, Optional


class InertiaError(Exception):
    exit_code: int = 1


class InvalidArgumentError(InertiaError, ValueError):
    exit_code = 2


class InputError(InertiaError):
    exit_code = 2


class MissingFileError(InputError, FileNotFoundError):
    def __init__(self, path: str, what: Optional[str] = None):
        self.path = str(path)
        label = f"{what} file" if what else "file"
        super().__init__(f"missing {label}: {self.path}")


class SchemaFileError(InputError):
    def __init__(self, path: str, message: str):
        self.path = str(path)
        super().__init__(f"{self.path}: {message}")


class ParseError(InputError):
    """
    Raised when rows of an input file fail validation.

    ``failures`` holds one record per failing cell with the 1-based ``line``
    in the file (``None`` for failures not tied to a row).
    """

    def __init__(self, path: str, failures: List[Dict[str, Any]]):
        self.path = str(path)
        self.failures = failures

        first = failures[0] if failures else {}
        where = f"line {first['line']}" if first.get("line") else "file"
        super().__init__(
            f"{self.path}: {len(failures)} invalid value(s), first at {where}: "
            f"column={first.get('column')!r} check={first.get('check')!r} "
            f"value={first.get('failure_case')!r}"
        )

    @property
    def lines(self) -> List[int]:
        return sorted({f["line"] for f in self.failures if f.get("line")})


class DuplicateKeyError(SchemaFileError):
    def __init__(self, path: str, keys: List[str], lines: List[int]):
        self.keys = keys
        self.lines = lines
        super().__init__(path, f"duplicate {tuple(keys)} key at line(s) {lines[:10]}")


class AlignmentError(InputError):
    pass


class AssemblyError(InertiaError):
    exit_code = 2


class SizeError(InertiaError, ValueError):
    exit_code = 2


class SolverError(InertiaError):
    exit_code = 1


class EmptyEvaluationError(InertiaError, ValueError):
    exit_code = 2


class ModelError(InertiaError):
    exit_code = 3


class SchemaVersionError(ModelError):
    def __init__(self, found: Any, expected: int):
        self.found = found
        self.expected = expected
        super().__init__(f"model schema_version {found!r}, expected {expected}")


class InfeasiblePlanError(InertiaError):
    exit_code = 4


__all__ = [
    "AlignmentError",
    "AssemblyError",
    "DuplicateKeyError",
    "EmptyEvaluationError",
    "InertiaError",
    "InfeasiblePlanError",
    "InputError",
    "InvalidArgumentError",
    "MissingFileError",
    "ModelError",
    "ParseError",
    "SchemaFileError",
    "SchemaVersionError",
    "SizeError",
    "SolverError",
]
