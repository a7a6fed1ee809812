import json
import logging
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from inertia.exceptions import InvalidArgumentError
from inertia.ingest.tables import IndicatorMatrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ColinearityGroups:
    """
    A partition of plant columns. Groups are ordered by their smallest
    member and the smallest member is the representative.
    """

    members: List[List[int]]

    def __post_init__(self):
        seen = sorted(i for group in self.members for i in group)
        if seen != list(range(len(seen))):
            raise InvalidArgumentError("groups must partition the plant columns")
        if any(not group for group in self.members):
            raise InvalidArgumentError("groups must not be empty")

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "ColinearityGroups":
        by_label: dict = {}
        for i, label in enumerate(labels):
            by_label.setdefault(int(label), []).append(i)
        return cls(sorted(by_label.values(), key=lambda g: g[0]))

    @classmethod
    def singletons(cls, n: int) -> "ColinearityGroups":
        return cls([[i] for i in range(n)])

    @classmethod
    def from_plant_ids(
        cls, plants: Sequence[str], tied: Sequence[Sequence[str]]
    ) -> "ColinearityGroups":
        """Explicit ties, e.g. units known to share a site."""
        labels = list(range(len(plants)))
        index = {pid: j for j, pid in enumerate(plants)}
        for group in tied:
            cols = [index[pid] for pid in group if pid in index]
            for j in cols:
                labels[j] = min(cols)
        return cls.from_labels(labels)

    @property
    def n_plants(self) -> int:
        return sum(len(g) for g in self.members)

    @property
    def n_groups(self) -> int:
        return len(self.members)

    @property
    def representatives(self) -> List[int]:
        return [group[0] for group in self.members]

    @property
    def labels(self) -> np.ndarray:
        labels = np.empty(self.n_plants, dtype=np.int64)
        for g, group in enumerate(self.members):
            labels[group] = g
        return labels

    @property
    def tied(self) -> List[List[int]]:
        return [group for group in self.members if len(group) > 1]


def agreement_matrix(market: sparse.csr_matrix) -> np.ndarray:
    """Fraction of periods on which each pair of columns agrees."""
    n_periods = market.shape[0]
    if n_periods == 0:
        return np.ones((market.shape[1], market.shape[1]))

    M = sparse.csc_matrix(market, dtype=np.int64)
    both_on = (M.T @ M).toarray()
    on = np.asarray(M.sum(axis=0)).ravel()
    both_off = n_periods - on[:, None] - on[None, :] + both_on
    return (both_on + both_off) / n_periods


def group_colinear(ind: IndicatorMatrix, agreement: float = 0.995) -> ColinearityGroups:
    """
    Plants whose market columns agree on at least ``agreement`` of the periods
    and that share a fuel type end up in one group (transitive closure).

    Periods where both plants are OFF count as agreement, so two rarely
    running plants of one fuel are grouped even if they are never ON
    together. Their columns are nearly zero and carry almost no information
    on either weight; pass explicit ties through
    ``ColinearityGroups.from_plant_ids`` when that matters.
    """
    if not 0.5 < agreement <= 1.0:
        raise InvalidArgumentError(f"agreement must be in (0.5, 1], got {agreement!r}")

    n = ind.n_plants
    if n == 0:
        return ColinearityGroups([])

    fuels = np.array([str(f) for f in ind.fuels])
    same_fuel = fuels[:, None] == fuels[None, :]

    # Counts are exact integers divided by the period count.
    adjacency = (agreement_matrix(ind.market) >= agreement - 1e-12) & same_fuel
    np.fill_diagonal(adjacency, False)

    _, labels = csgraph.connected_components(
        sparse.csr_matrix(adjacency), directed=False
    )
    groups = ColinearityGroups.from_labels(labels)

    if groups.tied:
        logger.info(
            json.dumps(
                {
                    "type": "ColinearityGroups",
                    "groups": [[ind.plants[i] for i in g] for g in groups.tied],
                }
            )
        )
    return groups


__all__ = ["ColinearityGroups", "agreement_matrix", "group_colinear"]
