"""
=====================
 inertia.anticipate
=====================

Single-period choice of TSO actions: keep running plants that would come
off, or start plants that are off, so that aggregate inertia reaches the
trigger at minimum total cost. Start candidates must be able to reach their
stable export within the lead time (notice plus ramp).

"""

import enum
import heapq
import itertools
import json
import logging
import math
import pathlib
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pydantic

from inertia import utils
from inertia.domain import PlantId
from inertia.exceptions import InvalidArgumentError, ParseError, SizeError
from inertia.schema import read_csv, tables
from inertia.transform.validator import LINE_OFFSET

logger = logging.getLogger(__name__)

DEFAULT_TRIGGER_GVAS = 140.0
ENUMERATION_LIMIT = 20
FEASIBILITY_TOL = 1e-9
PathLike = Union[str, pathlib.Path]


class ActionKind(enum.StrEnum):
    KEEP_RUNNING = "keep_running"
    START = "start"


class ActionCandidate(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True, allow_inf_nan=False)

    plant: PlantId
    kind: ActionKind
    w: pydantic.NonNegativeFloat = pydantic.Field(..., description="GVAs")
    cost: pydantic.NonNegativeFloat
    notice_minutes: pydantic.NonNegativeFloat = 0.0
    ramp_mw_per_min: pydantic.PositiveFloat = 1.0
    stable_export_mw: pydantic.PositiveFloat = 1.0
    currently_on: bool

    @pydantic.model_validator(mode="after")
    def check_state(self) -> "ActionCandidate":
        if self.kind is ActionKind.KEEP_RUNNING and not self.currently_on:
            raise ValueError("keep_running requires a plant that is currently on")
        if self.kind is ActionKind.START and self.currently_on:
            raise ValueError("start requires a plant that is currently off")
        return self

    @property
    def key(self) -> Tuple[str, str]:
        return (self.plant, self.kind.value)

    @property
    def minutes_to_stable(self) -> float:
        return self.notice_minutes + self.stable_export_mw / self.ramp_mw_per_min


class Selection(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True)

    plant_id: str
    kind: ActionKind


class ActionPlan(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True)

    baseline_gvas: float
    trigger_gvas: float
    selected: List[Selection]
    achieved_gvas: float
    total_cost: float
    feasible: bool

    @property
    def achieved(self) -> float:
        return self.achieved_gvas

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2) + "\n"


def filter_feasible(
    cands: Sequence[ActionCandidate], lead_time_minutes: Optional[float]
) -> List[ActionCandidate]:
    """
    Keep-running candidates always pass. Start candidates pass when notice
    plus ramp to stable export fits in the lead time. ``None`` disables the
    check.
    """
    if lead_time_minutes is None:
        return list(cands)
    if not lead_time_minutes >= 0:
        raise InvalidArgumentError(
            f"lead time must be >= 0 minutes, got {lead_time_minutes!r}"
        )
    return [
        c
        for c in cands
        if c.kind is ActionKind.KEEP_RUNNING
        or c.minutes_to_stable <= lead_time_minutes + FEASIBILITY_TOL
    ]


def _make_plan(
    chosen: Sequence[ActionCandidate], baseline: float, trigger: float
) -> ActionPlan:
    chosen = sorted(chosen, key=lambda c: c.key)
    achieved = baseline + math.fsum(c.w for c in chosen)
    return ActionPlan(
        baseline_gvas=baseline,
        trigger_gvas=trigger,
        selected=[Selection(plant_id=c.plant, kind=c.kind) for c in chosen],
        achieved_gvas=achieved,
        total_cost=math.fsum(c.cost for c in chosen),
        feasible=achieved >= trigger - FEASIBILITY_TOL,
    )


def _tie_key(chosen: Sequence[ActionCandidate]) -> Tuple[Tuple[str, str], ...]:
    return tuple(sorted(c.key for c in chosen))


def _better(cost, key, best_cost, best_key) -> bool:
    if best_cost is None:
        return True
    tol = FEASIBILITY_TOL * max(1.0, abs(best_cost))
    return cost < best_cost - tol or (abs(cost - best_cost) <= tol and key < best_key)


def _prepare(
    cands: Sequence[ActionCandidate],
    baseline: float,
    trigger: float,
    lead_time: Optional[float],
) -> List[ActionCandidate]:
    if not (math.isfinite(baseline) and math.isfinite(trigger)):
        raise InvalidArgumentError("baseline and trigger must be finite")
    # Candidates adding no inertia never help reach the trigger.
    return [c for c in filter_feasible(cands, lead_time) if c.w > 0]


@utils.timed
def plan(
    cands: Sequence[ActionCandidate],
    baseline: float,
    trigger: float = DEFAULT_TRIGGER_GVAS,
    lead_time: Optional[float] = None,
) -> ActionPlan:
    """
    Minimum-cost set of feasible candidates lifting ``baseline`` to
    ``trigger``; equal costs go to the lexicographically smallest set of
    plant ids. When no set reaches the trigger every useful feasible
    candidate is selected and the plan is flagged infeasible.
    """
    items = _prepare(cands, baseline, trigger, lead_time)
    need = trigger - baseline
    if need <= 0:
        return _make_plan([], baseline, trigger)

    if math.fsum(c.w for c in items) < need - FEASIBILITY_TOL:
        logger.warning(f"Trigger {trigger} unreachable from baseline {baseline}")
        return _make_plan(items, baseline, trigger)

    items = sorted(items, key=lambda c: (c.cost / c.w, c.key))
    n = len(items)

    def bound(level: int, cost: float, covered: float) -> float:
        # Fractional covering over the remaining items in ratio order.
        remaining = need - covered
        for c in items[level:]:
            if remaining <= FEASIBILITY_TOL:
                break
            if c.w >= remaining:
                return cost + c.cost * remaining / c.w
            cost += c.cost
            remaining -= c.w
        return cost if remaining <= FEASIBILITY_TOL else math.inf

    best_cost: Optional[float] = None
    best_key: Tuple = ()
    best: List[ActionCandidate] = []

    counter = itertools.count()
    heap = [(bound(0, 0.0, 0.0), next(counter), 0, (), 0.0, 0.0)]
    nodes = 0

    while heap:
        node_bound, _, level, chosen, cost, covered = heapq.heappop(heap)
        if best_cost is not None and node_bound > best_cost + FEASIBILITY_TOL * max(
            1.0, abs(best_cost)
        ):
            break
        nodes += 1

        if covered >= need - FEASIBILITY_TOL:
            selection = [items[i] for i in chosen]
            key = _tie_key(selection)
            if _better(cost, key, best_cost, best_key):
                best_cost, best_key, best = cost, key, selection

        if level == n:
            continue

        c = items[level]
        for child in (
            (level + 1, chosen + (level,), cost + c.cost, covered + c.w),
            (level + 1, chosen, cost, covered),
        ):
            child_bound = bound(child[0], child[2], child[3])
            if math.isinf(child_bound):
                continue
            if best_cost is not None and child_bound > best_cost + (
                FEASIBILITY_TOL * max(1.0, abs(best_cost))
            ):
                continue
            heapq.heappush(heap, (child_bound, next(counter), *child))

    logger.info(json.dumps({"type": "PlanSearch", "nodes": nodes, "cost": best_cost}))
    return _make_plan(best, baseline, trigger)


def enumerate_plans(
    cands: Sequence[ActionCandidate],
    baseline: float,
    trigger: float = DEFAULT_TRIGGER_GVAS,
    lead_time: Optional[float] = None,
) -> ActionPlan:
    """Optimal plan by checking all ``2^n`` subsets (``n <= 20``)."""
    items = _prepare(cands, baseline, trigger, lead_time)
    if len(items) > ENUMERATION_LIMIT:
        raise SizeError(
            f"enumeration handles at most {ENUMERATION_LIMIT} candidates, "
            f"got {len(items)}"
        )

    need = trigger - baseline
    if need <= 0:
        return _make_plan([], baseline, trigger)

    n = len(items)
    w = np.array([c.w for c in items])
    cost = np.array([c.cost for c in items])
    bits = 1 << np.arange(n)

    best_cost: Optional[float] = None
    best_key: Tuple = ()
    best: List[ActionCandidate] = []

    chunk = 1 << 16
    for start in range(0, 1 << n, chunk):
        masks = np.arange(start, min(start + chunk, 1 << n))
        chosen = (masks[:, None] & bits[None, :]) > 0
        covered = chosen @ w
        totals = chosen @ cost
        feasible = covered >= need - FEASIBILITY_TOL
        if not feasible.any():
            continue

        low = totals[feasible].min()
        if best_cost is not None and low > best_cost + 1e-6 * max(1.0, best_cost):
            continue
        for row in np.flatnonzero(feasible & (totals <= low + 1e-6 * max(1.0, low))):
            selection = [items[i] for i in np.flatnonzero(chosen[row])]
            total = math.fsum(c.cost for c in selection)
            key = _tie_key(selection)
            if _better(total, key, best_cost, best_key):
                best_cost, best_key, best = total, key, selection

    if best_cost is None:
        return _make_plan(items, baseline, trigger)
    return _make_plan(best, baseline, trigger)


def verify_plan(
    p: ActionPlan,
    cands: Sequence[ActionCandidate],
    baseline: float,
    trigger: float,
) -> bool:
    """Recompute achieved inertia and cost from the candidates."""
    index = {c.key: c for c in cands}
    keys = [(s.plant_id, s.kind.value) for s in p.selected]
    if len(set(keys)) != len(keys) or any(k not in index for k in keys):
        return False

    chosen = [index[k] for k in keys]
    achieved = baseline + math.fsum(c.w for c in chosen)
    cost = math.fsum(c.cost for c in chosen)
    tol = FEASIBILITY_TOL * max(1.0, abs(achieved))

    return (
        math.isclose(p.baseline_gvas, baseline, rel_tol=0, abs_tol=tol)
        and math.isclose(p.trigger_gvas, trigger, rel_tol=0, abs_tol=tol)
        and math.isclose(p.achieved_gvas, achieved, rel_tol=0, abs_tol=tol)
        and math.isclose(p.total_cost, cost, rel_tol=1e-12, abs_tol=1e-9)
        and p.feasible == (achieved >= trigger - FEASIBILITY_TOL)
    )


def audit_minimality(
    p: ActionPlan,
    cands: Sequence[ActionCandidate],
    baseline: float,
    trigger: float,
) -> List[Selection]:
    """Selections that could be dropped while still reaching the trigger."""
    index = {c.key: c for c in cands}
    w = [index[(s.plant_id, s.kind.value)].w for s in p.selected]
    total = baseline + math.fsum(w)
    return [
        s
        for s, added in zip(p.selected, w)
        if total - added >= trigger - FEASIBILITY_TOL
    ]


def load_candidates(path: PathLike) -> List[ActionCandidate]:
    frame = read_csv(path, tables.candidates_schema(), "candidates")

    cands, failures = [], []
    for index, row in zip(frame.index, frame.to_dict(orient="records")):
        try:
            cands.append(
                ActionCandidate(
                    plant=row["plant_id"],
                    kind=row["kind"],
                    w=row["w_gvas"],
                    cost=row["cost"],
                    notice_minutes=row["notice_minutes"],
                    ramp_mw_per_min=row["ramp_mw_per_min"],
                    stable_export_mw=row["stable_export_mw"],
                    currently_on=bool(row["currently_on"]),
                )
            )
        except pydantic.ValidationError as e:
            for error in e.errors():
                loc = ".".join(str(x) for x in error["loc"])
                failures.append(
                    {
                        "line": int(index) + LINE_OFFSET,
                        "column": loc or "currently_on",
                        "check": error["type"],
                        "failure_case": error["msg"],
                    }
                )

    if failures:
        raise ParseError(str(path), failures)
    return cands


def write_plan(path: PathLike, p: ActionPlan) -> None:
    pathlib.Path(path).write_text(p.to_json(), encoding="utf-8")


__all__ = [
    "ActionCandidate",
    "ActionKind",
    "ActionPlan",
    "Selection",
    "audit_minimality",
    "enumerate_plans",
    "filter_feasible",
    "load_candidates",
    "plan",
    "verify_plan",
    "write_plan",
]
