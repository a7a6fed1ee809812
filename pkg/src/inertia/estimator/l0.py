"""
=========================
 `inertia.estimator.l0`
=========================

Best-subset search for

    min_{w >= 0}  ||y - Xw||^2 + lam * |{k penalized : w_k > 0}|

Every candidate support is scored by an unpenalized NNLS refit, so nonzero
weights are never shrunk. ``exact`` runs a best-first branch-and-bound over
include/exclude decisions; ``heuristic`` thresholds the NNLS solution, runs a
forward greedy pass and finishes with add/remove/swap local search.

"""

import enum
import heapq
import itertools
import json
import logging
import math
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from inertia import utils
from inertia.estimator.design import DesignSystem
from inertia.estimator.nnls import fnnls, nnls_columns, polish, solve_nnls
from inertia.estimator.solution import InertiaSolution, make_solution
from inertia.exceptions import InvalidArgumentError, SizeError

logger = logging.getLogger(__name__)

DEFAULT_EXACT_LIMIT = 20
MAX_NODES = 200_000
MAX_SWEEPS = 50
SWAP_CANDIDATES = 20

Support = FrozenSet[int]


class SolveMode(enum.StrEnum):
    EXACT = "exact"
    HEURISTIC = "heuristic"
    AUTO = "auto"


def _improves(value: float, incumbent: float) -> bool:
    return value < incumbent - 1e-12 * max(1.0, abs(incumbent))


class SupportEvaluator:
    """
    Scores supports with Gram-form NNLS refits. The unpenalized columns are
    part of every support. Results are cached per support.
    """

    def __init__(self, sys: DesignSystem):
        self.sys = sys
        self.gram = sys.X.T @ sys.X
        self.xty = sys.X.T @ sys.y
        self.free = np.flatnonzero(~sys.penalized)
        self.penalized = np.flatnonzero(sys.penalized)
        self.candidates = [int(k) for k in self.penalized if self.gram[k, k] > 0]
        self.evaluations = 0
        self._cache: Dict[Support, Tuple[np.ndarray, float]] = {}

    def solve(self, support: Support) -> Tuple[np.ndarray, float]:
        """NNLS restricted to ``support`` and the free columns: (coef, rss)."""
        if support in self._cache:
            return self._cache[support]

        cols = np.array(sorted(support) + list(self.free), dtype=int)
        coef = np.zeros(self.sys.n_cols)
        if cols.size:
            coef[cols] = fnnls(self.gram[np.ix_(cols, cols)], self.xty[cols])

        residual = self.sys.y - self.sys.X @ coef
        result = (coef, float(residual @ residual))
        self._cache[support] = result
        self.evaluations += 1
        return result

    def nonzero(self, coef: np.ndarray) -> Support:
        return frozenset(int(k) for k in self.penalized if coef[k] > 0)

    def score(self, support: Support, lam: float) -> Tuple[float, Support]:
        """Objective of the refit on ``support`` and its effective support."""
        coef, rss = self.solve(support)
        effective = self.nonzero(coef)
        return rss + lam * len(effective), effective

    def gradient(self, coef: np.ndarray) -> np.ndarray:
        return self.xty - self.gram @ coef


def thresholded(ev: SupportEvaluator, lam: float) -> Tuple[float, Support]:
    """
    Hard-threshold the NNLS solution, dropping columns whose removal alone
    costs less than ``lam``, and refit until the support is stable.
    """
    support: Support = frozenset(ev.candidates)
    for _ in range(len(ev.candidates) + 1):
        coef, _ = ev.solve(support)
        kept = frozenset(
            k
            for k in support
            if coef[k] > 0 and coef[k] ** 2 * ev.gram[k, k] >= lam
        )
        if kept == support:
            break
        support = kept
    return ev.score(support, lam)


def forward_greedy(ev: SupportEvaluator, lam: float) -> Tuple[float, Support]:
    """Add the best single column while the objective strictly improves."""
    value, support = ev.score(frozenset(), lam)
    while True:
        best: Optional[Tuple[float, Support]] = None
        for k in ev.candidates:
            if k in support:
                continue
            candidate = ev.score(support | {k}, lam)
            if best is None or _improves(candidate[0], best[0]):
                best = candidate
        if best is None or not _improves(best[0], value):
            return value, support
        value, support = best


def _neighbours(ev: SupportEvaluator, support: Support, with_swaps: bool):
    outside = [k for k in ev.candidates if k not in support]
    for k in outside:
        yield support | {k}
    for k in sorted(support):
        yield support - {k}
    if not with_swaps:
        return

    if len(outside) > SWAP_CANDIDATES:
        coef, _ = ev.solve(support)
        gradient = ev.gradient(coef)
        outside = sorted(outside, key=lambda k: (-gradient[k], k))[:SWAP_CANDIDATES]
        outside.sort()
    for k, j in itertools.product(sorted(support), outside):
        yield (support - {k}) | {j}


def local_search(
    ev: SupportEvaluator,
    lam: float,
    start: Tuple[float, Support],
    max_sweeps: int = MAX_SWEEPS,
) -> Tuple[float, Support]:
    """Best-improvement add/remove/swap moves until none improves."""
    value, support = start
    for _ in range(max_sweeps):
        best = (value, support)
        for with_swaps in (False, True):
            for neighbour in _neighbours(ev, support, with_swaps):
                candidate = ev.score(neighbour, lam)
                if _improves(candidate[0], best[0]):
                    best = candidate
            if best[1] != support:
                break
        if best[1] == support or not _improves(best[0], value):
            return value, support
        value, support = best
    logger.warning(f"Local search stopped after {max_sweeps} sweeps")
    return value, support


def heuristic_search(
    ev: SupportEvaluator, lam: float
) -> Tuple[Support, Dict[str, float]]:
    """
    Threshold, forward greedy, then local search from the better of the two.
    The trace holds each stage's objective: ``start`` is at most
    ``thresholded`` and ``forward_greedy``, ``local_search`` at most ``start``.
    """
    first = thresholded(ev, lam)
    greedy = forward_greedy(ev, lam)
    start = greedy if _improves(greedy[0], first[0]) else first
    final = local_search(ev, lam, start)

    trace = {
        "thresholded": first[0],
        "forward_greedy": greedy[0],
        "start": start[0],
        "local_search": final[0],
    }
    return final[1], trace


def branch_and_bound(
    ev: SupportEvaluator,
    lam: float,
    max_nodes: int = MAX_NODES,
) -> Tuple[Support, int, bool]:
    """
    Best-first search over (forced, free) column sets. The bound of a node is
    the NNLS residual with every free column available at no penalty plus
    ``lam`` per forced column; residuals only grow as columns are removed, so
    no completion of the node does better.

    Returns the best support, the node count and whether it is certified.
    """
    incumbent, best = thresholded(ev, lam)
    counter = itertools.count()

    root: Support = frozenset(ev.candidates)
    _, rss = ev.solve(root)
    heap: List[Tuple[float, int, Support, Support]] = [
        (rss, next(counter), frozenset(), root)
    ]

    nodes = 0
    while heap:
        bound, _, forced, free = heapq.heappop(heap)
        if not _improves(bound, incumbent):
            break

        nodes += 1
        if nodes > max_nodes:
            logger.warning(f"Branch-and-bound stopped at {max_nodes} nodes")
            return best, nodes, False

        coef, rss = ev.solve(forced | free)
        value, support = ev.score(forced | free, lam)
        if _improves(value, incumbent):
            incumbent, best = value, support
            logger.debug(
                json.dumps(
                    {"type": "Incumbent", "node": nodes, "objective": incumbent}
                )
            )

        branching = [k for k in sorted(free) if coef[k] > 0]
        if not branching:
            continue
        k = max(branching, key=lambda j: (coef[j], -j))

        included = rss + lam * (len(forced) + 1)
        if _improves(included, incumbent):
            heapq.heappush(heap, (included, next(counter), forced | {k}, free - {k}))

        _, excluded_rss = ev.solve(forced | (free - {k}))
        excluded = excluded_rss + lam * len(forced)
        if _improves(excluded, incumbent):
            heapq.heappush(heap, (excluded, next(counter), forced, free - {k}))

    logger.info(
        json.dumps(
            {
                "type": "BranchAndBound",
                "nodes": nodes,
                "evaluations": ev.evaluations,
                "objective": incumbent,
            }
        )
    )
    return best, nodes, True


def refit(
    sys: DesignSystem,
    support: Support,
    lam: float,
    exact: bool,
    trace: Optional[Dict[str, float]] = None,
    nodes: int = 0,
) -> InertiaSolution:
    """Unpenalized NNLS on ``support`` (plus the free columns) over ``X``."""
    cols = sorted(support) + [int(k) for k in np.flatnonzero(~sys.penalized)]
    coef = nnls_columns(sys.X, sys.y, cols)
    coef, violation = polish(sys.X, sys.y, coef, cols)
    return make_solution(
        sys, coef, lam, exact=exact, trace=trace, nodes=nodes, kkt=violation
    )


def resolve_mode(
    mode: str, n_penalized: int, exact_limit: int = DEFAULT_EXACT_LIMIT
) -> SolveMode:
    try:
        resolved = SolveMode(str(mode).lower())
    except ValueError as e:
        raise InvalidArgumentError(f"unknown mode {mode!r}") from e

    if resolved is SolveMode.AUTO:
        return SolveMode.EXACT if n_penalized <= exact_limit else SolveMode.HEURISTIC
    if resolved is SolveMode.EXACT and n_penalized > exact_limit:
        raise SizeError(
            f"exact mode handles at most {exact_limit} penalized columns, got "
            f"{n_penalized}; use mode 'heuristic' or 'auto'"
        )
    return resolved


@utils.timed
def solve_l0(
    sys: DesignSystem,
    lam: float,
    mode: str = SolveMode.AUTO,
    exact_limit: int = DEFAULT_EXACT_LIMIT,
    max_nodes: int = MAX_NODES,
) -> InertiaSolution:
    if not (math.isfinite(lam) and lam >= 0):
        raise InvalidArgumentError(f"lambda must be finite and >= 0, got {lam!r}")
    if sys.n_rows == 0:
        raise InvalidArgumentError("the design system has no rows")
    sys.check_finite()

    resolved = resolve_mode(mode, sys.n_penalized, exact_limit)
    if lam == 0:
        return solve_nnls(sys)

    ev = SupportEvaluator(sys)
    if resolved is SolveMode.EXACT:
        support, nodes, certified = branch_and_bound(ev, lam, max_nodes)
        return refit(sys, support, lam, exact=certified, nodes=nodes)

    support, trace = heuristic_search(ev, lam)
    logger.info(json.dumps({"type": "HeuristicTrace", "lambda": lam, **trace}))
    return refit(sys, support, lam, exact=False, trace=trace)


__all__ = [
    "DEFAULT_EXACT_LIMIT",
    "SolveMode",
    "SupportEvaluator",
    "branch_and_bound",
    "forward_greedy",
    "heuristic_search",
    "local_search",
    "resolve_mode",
    "solve_l0",
    "thresholded",
]
