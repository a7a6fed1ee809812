"""
===========================
 `inertia.estimator.nnls`
===========================

Non-negative least squares. ``solve_nnls`` works on the design matrix with
``scipy.optimize.nnls``; ``fnnls`` is the Gram-form active-set variant the
subset search uses, since every candidate support then costs a solve on a
small block of the precomputed ``X^T X`` and ``X^T y``.

"""

import logging
from typing import Optional, Sequence

import numpy as np
from scipy import optimize

from inertia import utils
from inertia.estimator.design import DesignSystem
from inertia.estimator.solution import InertiaSolution, make_solution
from inertia.exceptions import InvalidArgumentError, SolverError

logger = logging.getLogger(__name__)

KKT_TOL = 1e-6


def kkt_violation(X: np.ndarray, y: np.ndarray, w: np.ndarray) -> float:
    """
    Largest violation of the NNLS optimality conditions for ``w``, scaled by
    ``||X^T y||_inf``: the gradient of ``||y - Xw||^2`` must vanish where
    ``w > 0`` and be non-negative where ``w == 0``.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float)
    w = np.asarray(w, dtype=float)

    if (w < 0).any():
        return float("inf")

    gradient = 2.0 * X.T @ (X @ w - y)
    scale = max(float(np.abs(X.T @ y).max(initial=0.0)), np.finfo(float).tiny)
    violation = np.where(w > 0, np.abs(gradient), np.maximum(-gradient, 0.0))
    return float(violation.max(initial=0.0) / scale)


def _passive_solve(gram: np.ndarray, xty: np.ndarray, passive: np.ndarray):
    s = np.zeros_like(xty)
    P = np.flatnonzero(passive)
    if P.size:
        s[P] = np.linalg.lstsq(gram[np.ix_(P, P)], xty[P], rcond=None)[0]
    return s


def fnnls(
    gram: np.ndarray,
    xty: np.ndarray,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
) -> np.ndarray:
    """
    Minimize ``||Xw - y||^2`` subject to ``w >= 0`` given ``gram = X^T X``
    and ``xty = X^T y`` (fast active-set NNLS).

    :param tol: gradient entries at or below ``tol`` count as zero; defaults
        to a multiple of machine precision scaled by the inputs.
    :param max_iter: defaults to ``30 * n``.
    """
    gram = np.atleast_2d(np.asarray(gram, dtype=float))
    xty = np.asarray(xty, dtype=float).ravel()
    n = xty.shape[0]

    if gram.shape != (n, n):
        raise InvalidArgumentError(
            f"gram is {gram.shape}, expected {(n, n)} for xty of size {n}"
        )
    if n == 0:
        return np.zeros(0)

    if tol is None:
        scale = max(1.0, float(np.abs(gram).max()), float(np.abs(xty).max()))
        tol = 10 * n * np.finfo(float).eps * scale
    if max_iter is None:
        max_iter = 30 * n

    passive = np.zeros(n, dtype=bool)
    blocked = np.zeros(n, dtype=bool)
    x = np.zeros(n)
    gradient = xty.copy()
    iterations = 0

    while True:
        candidates = np.flatnonzero(~passive & ~blocked)
        if not candidates.size:
            break

        k = candidates[np.argmax(gradient[candidates])]
        if gradient[k] <= tol:
            break

        iterations += 1
        if iterations > max_iter:
            raise SolverError(f"fnnls did not converge in {max_iter} iterations")

        passive[k] = True
        s = _passive_solve(gram, xty, passive)

        if s[k] <= 0:
            # Rounding, k cannot enter from here.
            passive[k] = False
            blocked[k] = True
            continue

        while (s[passive] <= 0).any():
            iterations += 1
            if iterations > max_iter:
                raise SolverError(f"fnnls did not converge in {max_iter} iterations")

            P = np.flatnonzero(passive)
            leaving = P[s[P] <= 0]
            ratios = x[leaving] / (x[leaving] - s[leaving])
            j = int(np.argmin(ratios))
            alpha = ratios[j]

            x = x + alpha * (s - x)
            x[leaving[j]] = 0.0
            passive &= x > 0
            s = _passive_solve(gram, xty, passive)

        x = np.where(passive, s, 0.0)
        gradient = xty - gram @ x
        blocked[:] = False

    return x


def nnls_columns(
    X: np.ndarray, y: np.ndarray, columns: Optional[Sequence[int]] = None
) -> np.ndarray:
    """
    ``scipy.optimize.nnls`` restricted to ``columns`` (all when ``None``),
    returned as a full-length coefficient vector. Falls back to the Gram form
    when scipy's iteration limit is hit.
    """
    n_cols = X.shape[1]
    cols = np.arange(n_cols) if columns is None else np.asarray(columns, dtype=int)
    coef = np.zeros(n_cols)
    if cols.size == 0 or X.shape[0] == 0:
        return coef

    A = X[:, cols]
    try:
        coef[cols] = optimize.nnls(A, y, maxiter=50 * max(cols.size, 1))[0]
    except RuntimeError as e:
        logger.warning(f"scipy nnls stopped early ({e}), using fnnls")
        coef[cols] = fnnls(A.T @ A, A.T @ y)
    return coef


def polish(X: np.ndarray, y: np.ndarray, coef: np.ndarray, columns=None):
    """
    Keep ``coef`` unless the Gram-form solve satisfies KKT more tightly on
    ``columns``. Returns the coefficients and their KKT violation.
    """
    cols = np.arange(X.shape[1]) if columns is None else np.asarray(columns, int)
    A = X[:, cols]
    violation = kkt_violation(A, y, coef[cols])
    if violation <= KKT_TOL or cols.size == 0:
        return coef, violation

    other = np.zeros_like(coef)
    try:
        other[cols] = fnnls(A.T @ A, A.T @ y)
    except SolverError:
        return coef, violation
    other_violation = kkt_violation(A, y, other[cols])
    logger.debug(f"KKT polish {violation:.3g} -> {other_violation:.3g}")

    if other_violation < violation:
        return other, other_violation
    return coef, violation


@utils.timed
def solve_nnls(sys: DesignSystem) -> InertiaSolution:
    """Global minimizer of ``||y - Xw||^2`` over ``w >= 0``."""
    if sys.n_rows == 0:
        raise InvalidArgumentError("the design system has no rows")
    sys.check_finite()

    coef = nnls_columns(sys.X, sys.y)
    coef, violation = polish(sys.X, sys.y, coef)
    if violation > KKT_TOL:
        logger.warning(f"NNLS KKT violation {violation:.3g} above {KKT_TOL}")

    return make_solution(sys, coef, lam=0.0, exact=True, kkt=violation)


__all__ = ["KKT_TOL", "fnnls", "kkt_violation", "nnls_columns", "solve_nnls"]
