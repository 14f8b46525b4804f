# src/core/oracle.py
"""Brute-force ground truth on multiplication tables: right congruences, minimal congruences, degrc."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import List, Optional, Set, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from src.config.settings import settings
from src.core.actions import EquivRelation
from src.core.diagram import format_diagram, star
from src.core.errors import BudgetExceeded
from src.core.families import EnumeratedMonoid
from src.utils.logger import logger


@dataclass(frozen=True, eq=False)
class TableMonoid:
    table: np.ndarray
    identity: int
    star: Optional[np.ndarray] = None
    names: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        m = self.size
        if self.table.shape != (m, m):
            raise ValueError(f"Table must be square, got shape {self.table.shape}")
        if not 0 <= self.identity < m:
            raise ValueError(f"Identity index {self.identity} out of range")
        ident = np.arange(m)
        if not (np.array_equal(self.table[self.identity], ident) and np.array_equal(self.table[:, self.identity], ident)):
            raise ValueError("Identity laws fail")
        for a in range(m):
            # (ab)c against a(bc) for every b, c
            if not np.array_equal(self.table[self.table[a]], self.table[a][self.table]):
                raise ValueError(f"Table is not associative at a={a}")

    @property
    def size(self) -> int:
        return int(self.table.shape[0])

    @classmethod
    def from_monoid(cls, m: EnumeratedMonoid, budget: Optional[int] = None) -> "TableMonoid":
        table = m.table(budget)
        stars = np.array([m.index_of(star(d)) for d in m], dtype=np.int64)
        return cls(table, m.identity_index, stars, tuple(format_diagram(d) for d in m))

    def to_json(self) -> str:
        return json.dumps({"size": self.size, "identity": self.identity, "table": self.table.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "TableMonoid":
        raw = json.loads(text)
        table = np.asarray(raw["table"], dtype=np.int64)
        if table.shape[0] != raw["size"]:
            raise ValueError(f"Declared size {raw['size']} does not match table")
        return cls(table, int(raw["identity"]))


def _check_cap(t: TableMonoid, cap: Optional[int]) -> None:
    cap = settings.oracle_cap if cap is None else cap
    if t.size > cap:
        raise BudgetExceeded(f"Monoid of size {t.size} exceeds oracle cap {cap}")


def _close(table: np.ndarray, labels: np.ndarray, two_sided: bool) -> EquivRelation:
    """Smallest right (or two-sided) congruence containing the partition given by labels."""
    m = len(labels)
    count = len(np.unique(labels))
    everything = np.arange(m)
    while True:
        _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
        reps = first[inverse.ravel()]
        src = [everything, table.ravel()]
        dst = [reps, table[reps].ravel()]
        if two_sided:
            src.append(table.ravel())
            dst.append(table[:, reps].ravel())
        rows, cols = np.concatenate(src), np.concatenate(dst)
        graph = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(m, m))
        merged, labels = connected_components(graph, directed=False)
        if merged == count:
            break
        count = merged
    return EquivRelation.from_labels(labels.tolist())


def _pair_labels(m: int, a: int, b: int) -> np.ndarray:
    labels = np.arange(m)
    labels[b] = labels[a]
    return labels


def principal_right_congruence(t: TableMonoid, a: int, b: int) -> EquivRelation:
    return _close(t.table, _pair_labels(t.size, a, b), two_sided=False)


def principal_congruence(t: TableMonoid, a: int, b: int) -> EquivRelation:
    return _close(t.table, _pair_labels(t.size, a, b), two_sided=True)


def _principal_right(t: TableMonoid) -> List[EquivRelation]:
    found = {principal_right_congruence(t, a, b) for a in range(t.size) for b in range(a + 1, t.size)}
    return sorted(found, key=lambda r: r.labels)


def all_right_congruences(t: TableMonoid, cap: Optional[int] = None) -> List[EquivRelation]:
    """Join closure of the principal right congruences, starting from the trivial one."""
    _check_cap(t, cap)
    principals = _principal_right(t)
    delta = EquivRelation.discrete(t.size)
    lattice: Set[EquivRelation] = {delta}
    frontier = [delta]
    while frontier:
        nxt = []
        for c in frontier:
            for p in principals:
                j = c.join(p)
                if j not in lattice:
                    lattice.add(j)
                    nxt.append(j)
        frontier = nxt
    logger.info(f"{len(lattice)} right congruences on a monoid of size {t.size}")
    return sorted(lattice, key=lambda r: (-r.num_classes, r.labels))


def largest_congruence_within(t: TableMonoid, sigma: EquivRelation) -> EquivRelation:
    """(a, b) with xa sigma xb for every x."""
    labels = np.asarray(sigma.labels)
    signatures = labels[t.table].T
    _, inverse = np.unique(signatures, axis=0, return_inverse=True)
    return EquivRelation.from_labels(inverse.ravel().tolist())


def is_faithful(t: TableMonoid, sigma: EquivRelation) -> bool:
    return largest_congruence_within(t, sigma).is_trivial()


def minimal_congruences(t: TableMonoid, cap: Optional[int] = None) -> List[EquivRelation]:
    _check_cap(t, cap)
    found = {principal_congruence(t, a, b) for a in range(t.size) for b in range(a + 1, t.size)}
    minimal = [c for c in found if not any(d != c and d.issubset(c) for d in found)]
    logger.info(f"{len(found)} principal congruences, {len(minimal)} minimal")
    return sorted(minimal, key=lambda r: r.labels)


def degrc_bruteforce(t: TableMonoid, cap: Optional[int] = None) -> int:
    """Fewest classes of a right congruence containing no non-trivial congruence."""
    _check_cap(t, cap)
    principals = _principal_right(t)
    delta = EquivRelation.discrete(t.size)
    best = delta.num_classes
    faithful: Set[EquivRelation] = {delta}
    rejected: Set[EquivRelation] = set()
    frontier = [delta]
    # faithful right congruences are closed downwards, so only faithful ones are extended
    while frontier:
        nxt = []
        for c in frontier:
            for p in principals:
                j = c.join(p)
                if j in faithful or j in rejected:
                    continue
                if is_faithful(t, j):
                    faithful.add(j)
                    nxt.append(j)
                    best = min(best, j.num_classes)
                else:
                    rejected.add(j)
        frontier = nxt
    logger.info(f"degrc search visited {len(faithful)} faithful right congruences")
    return best
