from inertia.estimator.design import DesignSystem, assemble
from inertia.estimator.l0 import DEFAULT_EXACT_LIMIT, SolveMode, solve_l0
from inertia.estimator.model import DEFAULT_GRID, fit, market_prediction, select_lambda
from inertia.estimator.nnls import fnnls, kkt_violation, solve_nnls
from inertia.estimator.oracle import brute_force_oracle
from inertia.estimator.persistence import (
    FittedModel,
    build_model,
    fuel_summary,
    load_model,
    plant_report,
    save_model,
)
from inertia.estimator.solution import Diagnostics, InertiaSolution

__all__ = [
    "DEFAULT_EXACT_LIMIT",
    "DEFAULT_GRID",
    "Diagnostics",
    "DesignSystem",
    "FittedModel",
    "InertiaSolution",
    "SolveMode",
    "assemble",
    "brute_force_oracle",
    "build_model",
    "fit",
    "fnnls",
    "fuel_summary",
    "kkt_violation",
    "load_model",
    "market_prediction",
    "plant_report",
    "save_model",
    "select_lambda",
    "solve_l0",
    "solve_nnls",
]
