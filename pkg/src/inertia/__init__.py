from inertia import (
    anticipate,
    domain,
    estimator,
    forecast,
    ingest,
    schema,
    synth,
    transform,
    utils,
)

__all__ = [
    "anticipate",
    "domain",
    "estimator",
    "forecast",
    "ingest",
    "schema",
    "synth",
    "transform",
    "utils",
]
