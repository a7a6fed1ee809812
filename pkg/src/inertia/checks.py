"""
==================
 inertia.checks
==================

Seeded comparisons of the solvers against their brute-force oracles, run by
``inertia oracle-check``.

"""

import json
import logging
from typing import Dict, List

import numpy as np

from inertia import anticipate, utils
from inertia.estimator import (
    DesignSystem,
    brute_force_oracle,
    kkt_violation,
    solve_l0,
    solve_nnls,
)
from inertia.estimator.nnls import KKT_TOL

logger = logging.getLogger(__name__)

LAMBDAS = (0.0, 0.1, 1.0)
HEURISTIC_SLACK = 0.05
HEURISTIC_PASS_SHARE = 0.9


def random_design(
    rng: np.random.Generator, n_rows: int, n_penalized: int
) -> DesignSystem:
    """
    0/1 on-off columns plus a positive demand column, with a target built
    from a sparse non-negative truth and Gaussian noise.
    """
    on = (rng.random((n_rows, n_penalized)) < rng.uniform(0.3, 0.8)).astype(float)
    demand = rng.uniform(20.0, 40.0, size=(n_rows, 1))
    X = np.hstack([on, demand])

    truth = rng.uniform(0.5, 5.0, size=n_penalized)
    truth[rng.random(n_penalized) < 0.4] = 0.0
    y = on @ truth + 0.3 * demand[:, 0] + rng.normal(0.0, 1.0, size=n_rows)
    return DesignSystem.from_arrays(X, y)


def random_candidates(
    rng: np.random.Generator, n: int
) -> List[anticipate.ActionCandidate]:
    cands = []
    for j in range(n):
        start = bool(rng.random() < 0.4)
        cands.append(
            anticipate.ActionCandidate(
                plant=f"T_RND-{j + 1:02d}",
                kind="start" if start else "keep_running",
                w=float(rng.integers(1, 12)),
                cost=float(rng.integers(1, 100)),
                notice_minutes=float(rng.integers(0, 120)),
                ramp_mw_per_min=float(rng.uniform(2.0, 20.0)),
                stable_export_mw=float(rng.uniform(50.0, 400.0)),
                currently_on=not start,
            )
        )
    return cands


def check_estimator(seed: int = 0, instances: int = 20) -> Dict:
    rng = np.random.default_rng(seed)
    exact_ok, heuristic_ok, kkt_ok = 0, 0, 0
    worst_gap = 0.0

    for i in range(instances):
        sys = random_design(
            rng, int(rng.integers(10, 51)), int(rng.integers(1, 11))
        )
        lam = LAMBDAS[i % len(LAMBDAS)]

        nnls = solve_nnls(sys)
        kkt_ok += kkt_violation(sys.X, sys.y, nnls.coef) <= KKT_TOL

        oracle = brute_force_oracle(sys, lam).objective
        exact = solve_l0(sys, lam, mode="exact").objective
        heuristic = solve_l0(sys, lam, mode="heuristic").objective

        exact_ok += utils.relative_gap(exact, oracle) <= 1e-6
        gap = (heuristic - oracle) / max(abs(oracle), 1e-12)
        worst_gap = max(worst_gap, gap)
        heuristic_ok += gap <= HEURISTIC_SLACK

    return {
        "instances": instances,
        "kkt_ok": int(kkt_ok),
        "exact_ok": int(exact_ok),
        "heuristic_within_5pct": int(heuristic_ok),
        "heuristic_worst_gap": worst_gap,
        "passed": bool(
            kkt_ok == instances
            and exact_ok == instances
            and heuristic_ok >= HEURISTIC_PASS_SHARE * instances
        ),
    }


def check_anticipate(seed: int = 0, instances: int = 20, max_candidates: int = 12):
    rng = np.random.default_rng(seed)
    matched = 0

    for _ in range(instances):
        cands = random_candidates(rng, int(rng.integers(1, max_candidates + 1)))
        baseline = float(rng.uniform(100.0, 130.0))
        lead = float(rng.choice([0.0, 60.0, 240.0]))

        fast = anticipate.plan(cands, baseline, 140.0, lead)
        slow = anticipate.enumerate_plans(cands, baseline, 140.0, lead)
        matched += (
            fast.feasible == slow.feasible
            and abs(fast.total_cost - slow.total_cost) <= 1e-9
        )

    return {"instances": instances, "matched": matched, "passed": matched == instances}


@utils.timed
def oracle_check(seed: int = 0, instances: int = 20) -> Dict:
    report = {
        "seed": seed,
        "estimator": check_estimator(seed, instances),
        "anticipate": check_anticipate(seed, instances),
    }
    report["passed"] = report["estimator"]["passed"] and report["anticipate"]["passed"]
    logger.info(json.dumps({"type": "OracleCheck", **report}))
    return report


__all__ = [
    "check_anticipate",
    "check_estimator",
    "oracle_check",
    "random_candidates",
    "random_design",
]
