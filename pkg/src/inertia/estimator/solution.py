from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
import pydantic

from inertia.estimator.design import DesignSystem


class Diagnostics(pydantic.BaseModel):
    """
    In-sample fit diagnostics. ``rmse`` and ``mae`` are over market rows.
    ``n_nonzero`` counts the nonzero penalized columns (the l0 term) while
    ``n_nonzero_plants`` counts plants once groups are expanded.
    """

    model_config = pydantic.ConfigDict(frozen=True)

    rmse: float
    mae: float
    n_nonzero: int
    exact: bool
    n_nonzero_plants: int = 0
    degenerate: List[str] = []
    colinear: List[Tuple[str, str]] = []
    trace: Dict[str, float] = {}
    nodes: int = 0
    kkt: Optional[float] = None


@dataclass(frozen=True)
class InertiaSolution:
    w: Dict[str, float]
    w_dem: float
    support: Tuple[int, ...]
    lam: float
    objective: float
    diagnostics: Diagnostics
    coef: np.ndarray
    col_map: List[List[str]]

    @property
    def support_plants(self) -> List[str]:
        return [pid for g in self.support for pid in self.col_map[g]]

    def weights(self, plants: List[str]) -> np.ndarray:
        """w for ``plants`` in order; plants unknown to the fit get 0."""
        return np.array([self.w.get(pid, 0.0) for pid in plants], dtype=float)


def objective_value(sys: DesignSystem, coef: np.ndarray, lam: float) -> float:
    """``||y - X coef||^2 + lam * |nonzero penalized coef|``."""
    residual = sys.y - sys.X @ coef
    return float(residual @ residual) + lam * int((coef[sys.penalized] > 0).sum())


def degenerate_columns(sys: DesignSystem) -> List[int]:
    """Penalized columns with no nonzero entry (plants never ON)."""
    cols = np.flatnonzero(sys.penalized)
    empty = ~np.abs(sys.X[:, cols]).any(axis=0)
    return [int(k) for k in np.flatnonzero(empty)]


def identical_columns(sys: DesignSystem) -> List[Tuple[int, int]]:
    """Pairs of identical nonzero penalized columns, lowest index first."""
    cols = np.flatnonzero(sys.penalized)
    seen: Dict[bytes, int] = {}
    pairs = []
    for g, k in enumerate(cols):
        column = sys.X[:, k]
        if not column.any():
            continue
        key = np.ascontiguousarray(column).tobytes()
        if key in seen:
            pairs.append((seen[key], g))
        else:
            seen[key] = g
    return pairs


def make_solution(
    sys: DesignSystem,
    coef: np.ndarray,
    lam: float,
    exact: bool,
    trace: Optional[Dict[str, float]] = None,
    nodes: int = 0,
    kkt: Optional[float] = None,
) -> InertiaSolution:
    coef = np.maximum(np.asarray(coef, dtype=float), 0.0)
    cols = np.flatnonzero(sys.penalized)
    free = np.flatnonzero(~sys.penalized)

    residual = sys.y - sys.X @ coef
    market = sys.market_rows if sys.market_rows.any() else np.ones(sys.n_rows, bool)
    rmse = float(np.sqrt(np.mean(residual[market] ** 2)))
    mae = float(np.mean(np.abs(residual[market])))

    group_coef = coef[cols]
    w = {
        pid: float(group_coef[g])
        for g, members in enumerate(sys.col_map)
        for pid in members
    }
    support = tuple(int(g) for g in np.flatnonzero(group_coef > 0))

    name = [members[0] for members in sys.col_map]
    diagnostics = Diagnostics(
        rmse=rmse,
        mae=mae,
        n_nonzero=len(support),
        exact=exact,
        n_nonzero_plants=sum(len(sys.col_map[g]) for g in support),
        degenerate=[pid for g in degenerate_columns(sys) for pid in sys.col_map[g]],
        colinear=[(name[a], name[b]) for a, b in identical_columns(sys)],
        trace=trace or {},
        nodes=nodes,
        kkt=kkt,
    )

    return InertiaSolution(
        w=w,
        w_dem=float(coef[free[0]]) if free.size else 0.0,
        support=support,
        lam=float(lam),
        objective=objective_value(sys, coef, lam),
        diagnostics=diagnostics,
        coef=coef,
        col_map=sys.col_map,
    )


__all__ = ["Diagnostics", "InertiaSolution", "make_solution", "objective_value"]
