import itertools
import logging

import numpy as np

from inertia import utils
from inertia.estimator.design import DesignSystem
from inertia.estimator.nnls import nnls_columns
from inertia.estimator.solution import InertiaSolution, make_solution, objective_value
from inertia.exceptions import InvalidArgumentError, SizeError

logger = logging.getLogger(__name__)

ORACLE_LIMIT = 12


@utils.timed
def brute_force_oracle(sys: DesignSystem, lam: float) -> InertiaSolution:
    """
    Enumerate every support of the penalized columns (by size, then
    lexicographically), refit NNLS with ``scipy.optimize.nnls`` on each and
    keep the first minimum of residual^2 + lam * nonzero count.
    """
    if lam < 0 or not np.isfinite(lam):
        raise InvalidArgumentError(f"lambda must be finite and >= 0, got {lam!r}")
    if sys.n_penalized > ORACLE_LIMIT:
        raise SizeError(
            f"brute force handles at most {ORACLE_LIMIT} penalized columns, "
            f"got {sys.n_penalized}"
        )
    sys.check_finite()

    penalized = [int(k) for k in np.flatnonzero(sys.penalized)]
    free = [int(k) for k in np.flatnonzero(~sys.penalized)]

    best_value, best_coef = None, np.zeros(sys.n_cols)
    for size in range(len(penalized) + 1):
        for support in itertools.combinations(penalized, size):
            coef = nnls_columns(sys.X, sys.y, list(support) + free)
            value = objective_value(sys, coef, lam)
            if best_value is None or value < best_value - 1e-12 * max(
                1.0, abs(best_value)
            ):
                best_value, best_coef = value, coef

    return make_solution(sys, best_coef, lam, exact=True)


__all__ = ["ORACLE_LIMIT", "brute_force_oracle"]
