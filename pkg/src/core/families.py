# src/core/families.py
"""Enumeration of diagram families, their projections, Green's relations and the Brauer structural sets."""
from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.config.settings import settings
from src.core.degrees import family_size
from src.core.diagram import (
    Block,
    Diagram,
    Family,
    SetPartitionOfN,
    _make,
    identity,
    in_family,
    is_planar,
    multiply,
    permutation_diagram,
    special,
    star,
    tl_to_model,
)
from src.core.errors import BudgetExceeded, DiagramError, FamilyError
from src.utils.logger import logger

Partition = List[Tuple[int, ...]]


def _set_partitions(points: Sequence[int], sizes: Optional[frozenset] = None) -> Iterator[Partition]:
    """Set partitions of points with block sizes in sizes; the first point's block is chosen first."""
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    top = len(rest) if sizes is None else min(len(rest), max(sizes) - 1)
    for k in range(top + 1):
        if sizes is not None and k + 1 not in sizes:
            continue
        for mates in combinations(range(len(rest)), k):
            chosen = set(mates)
            block = (first,) + tuple(rest[i] for i in mates)
            remaining = [p for i, p in enumerate(rest) if i not in chosen]
            for tail in _set_partitions(remaining, sizes):
                yield [block] + tail


def _noncrossing(points: Sequence[int], sizes: Optional[frozenset] = None) -> Iterator[Partition]:
    """Non-crossing set partitions of points taken in their listed cyclic order."""
    if not points:
        yield []
        return
    yield from _grow(points, sizes, (points[0],), 1)


def _grow(points: Sequence[int], sizes: Optional[frozenset], block: Tuple[int, ...], start: int) -> Iterator[Partition]:
    if sizes is None or len(block) in sizes:
        for tail in _noncrossing(points[start:], sizes):
            yield [block] + tail
    if sizes is not None and len(block) >= max(sizes):
        return
    for nxt in range(start, len(points)):
        for inner in _noncrossing(points[start:nxt], sizes):
            for rest in _grow(points, sizes, block + (points[nxt],), nxt + 1):
                yield inner + rest


UP_TO_TWO = frozenset({1, 2})
EXACTLY_TWO = frozenset({2})


class EnumeratedMonoid:
    """All elements of a family at degree n, indexed in diagram order, with cached products."""

    def __init__(self, family: Family, n: int, elements: Sequence[Diagram]):
        self.family = family
        self.n = n
        self.elements: Tuple[Diagram, ...] = tuple(sorted(set(elements)))
        self._index: Dict[Diagram, int] = {d: i for i, d in enumerate(self.elements)}
        self._products: Dict[Tuple[int, int], int] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i: int) -> Diagram:
        return self.elements[i]

    def __contains__(self, d: Diagram) -> bool:
        return d in self._index

    def index_of(self, d: Diagram) -> int:
        try:
            return self._index[d]
        except KeyError:
            raise DiagramError(f"{d} is not an element of {self.family.value}_{self.n}")

    @property
    def identity_index(self) -> int:
        return self._index[identity(self.n)]

    def product(self, i: int, j: int) -> int:
        key = (i, j)
        with self._lock:
            cached = self._products.get(key)
        if cached is not None:
            return cached
        k = self.index_of(multiply(self.elements[i], self.elements[j]))
        with self._lock:
            self._products[key] = k
        return k

    def table(self, budget: Optional[int] = None) -> np.ndarray:
        """Dense multiplication table; refused when |M|^2 exceeds the budget."""
        budget = settings.budget if budget is None else budget
        m = len(self)
        if m * m > budget:
            raise BudgetExceeded(f"Multiplication table of size {m}x{m} exceeds budget {budget}")
        out = np.empty((m, m), dtype=np.int64)
        for i in range(m):
            for j in range(m):
                out[i, j] = self.product(i, j)
        return out


def _cyclic_vertices(n: int) -> List[int]:
    return list(range(1, n + 1)) + list(range(-n, 0))


def _generate(f: Family, n: int) -> Iterator[Diagram]:
    signed = list(range(1, n + 1)) + list(range(-1, -n - 1, -1))
    if f is Family.P:
        parts = _set_partitions(signed)
    elif f is Family.PB:
        parts = _set_partitions(signed, UP_TO_TWO)
    elif f is Family.B:
        parts = _set_partitions(signed, EXACTLY_TWO)
    elif f in (Family.PP, Family.TLM):
        parts = _noncrossing(_cyclic_vertices(n))
    elif f is Family.M:
        parts = _noncrossing(_cyclic_vertices(n), UP_TO_TWO)
    elif f is Family.TL:
        parts = _noncrossing(_cyclic_vertices(n), EXACTLY_TWO)
    elif f is Family.S:
        for images in permutations(range(1, n + 1)):
            yield permutation_diagram(images)
        return
    else:
        raise FamilyError(f"Cannot enumerate family {f}")
    for part in parts:
        d = _make(n, part)
        if f is not Family.TLM or in_family(d, Family.TLM):
            yield d


def enumerate_family(f: Family, n: int, budget: Optional[int] = None) -> EnumeratedMonoid:
    budget = settings.budget if budget is None else budget
    if n < 0 or (f is Family.TLM and n < 1):
        raise FamilyError(f"Degree {n} out of range for {f.value}")
    expected = family_size(f, n)
    if expected > budget:
        raise BudgetExceeded(f"|{f.value}_{n}| = {expected} exceeds budget {budget}")
    logger.info(f"Enumerating {f.value}_{n} ({expected} elements)")
    m = EnumeratedMonoid(f, n, list(_generate(f, n)))
    if len(m) != expected:
        raise RuntimeError(f"Enumerated {len(m)} elements of {f.value}_{n}, expected {expected}")
    return m


def _upper_partitions(f: Family, n: int) -> Iterator[Partition]:
    points = list(range(1, n + 1))
    if f in (Family.P,):
        return _set_partitions(points)
    if f in (Family.PB, Family.B):
        return _set_partitions(points, UP_TO_TWO)
    if f in (Family.PP, Family.TLM):
        return _noncrossing(points)
    if f in (Family.M, Family.TL):
        return _noncrossing(points, UP_TO_TWO)
    raise FamilyError(f"No projection generator for family {f.value}")


def projections(f: Family, n: int, r: int) -> List[Diagram]:
    """Rank-r projections: r marked blocks A become A u A', the others C and C'."""
    if not 0 <= r <= n:
        raise FamilyError(f"Rank {r} out of range 0..{n}")
    if f is Family.S:
        return [identity(n)] if r == n else []
    single_marks = f in (Family.PB, Family.B, Family.M, Family.TL)
    pairs_only = f in (Family.B, Family.TL)
    planar = f in (Family.PP, Family.M, Family.TL, Family.TLM)
    out = set()
    for part in _upper_partitions(f, n):
        if len(part) < r:
            continue
        for marked in combinations(range(len(part)), r):
            chosen = set(marked)
            if single_marks and any(len(part[i]) != 1 for i in marked):
                continue
            if pairs_only and any(len(b) != 2 for i, b in enumerate(part) if i not in chosen):
                continue
            blocks: List[Block] = []
            for i, b in enumerate(part):
                mirror = tuple(-v for v in b)
                blocks += [b + mirror] if i in chosen else [b, mirror]
            d = _make(n, blocks)
            if planar and not is_planar(d):
                continue
            if f is Family.TLM and not in_family(d, Family.TLM):
                continue
            out.add(d)
    return sorted(out)


def green_related(a: Diagram, b: Diagram, rel: str) -> bool:
    if a.n != b.n:
        raise DiagramError(f"Degree mismatch: {a.n} vs {b.n}")
    rel = rel.upper()
    if rel == "L":
        return multiply(star(a), a) == multiply(star(b), b)
    if rel == "R":
        return multiply(a, star(a)) == multiply(b, star(b))
    if rel == "H":
        return green_related(a, b, "L") and green_related(a, b, "R")
    if rel in ("D", "J"):
        return a.rank == b.rank
    raise ValueError(f"Unknown Green's relation {rel!r}")


def z_blocks(n: int) -> List[Block]:
    """The fixed arcs: {2i, 2i+1} for odd n, {2i-1, 2i} for even n."""
    start = 2 if n % 2 else 1
    return [(i, i + 1) for i in range(start, n, 2)]


def _compose(p: Tuple[int, ...], q: Tuple[int, ...]) -> Tuple[int, ...]:
    """Apply p, then q."""
    return tuple(q[x - 1] for x in p)


def wreath_permutations(n: int) -> List[Tuple[int, ...]]:
    """The stabiliser of the arcs z_blocks(n) in S_n, as image tuples."""
    base = tuple(range(1, n + 1))
    zs = z_blocks(n)
    gens = []
    for a, b in zs:
        g = list(base)
        g[a - 1], g[b - 1] = b, a
        gens.append(tuple(g))
    for (a, b), (c, d) in zip(zs, zs[1:]):
        g = list(base)
        g[a - 1], g[b - 1], g[c - 1], g[d - 1] = c, d, a, b
        gens.append(tuple(g))
    group = {base}
    frontier = [base]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = _compose(p, g)
                if q not in group:
                    group.add(q)
                    nxt.append(q)
        frontier = nxt
    return sorted(group)


@dataclass(frozen=True)
class BrauerContext:
    n: int
    k: int
    zeta: Diagram
    kappa: SetPartitionOfN
    Z: Tuple[Block, ...]

    @cached_property
    def U(self) -> Tuple[Diagram, ...]:
        return tuple(permutation_diagram(p) for p in wreath_permutations(self.n))


def brauer_context(n: int) -> BrauerContext:
    if n < 3:
        raise FamilyError(f"Brauer context needs n >= 3, got {n}")
    zeta = special(Family.B, n, "zeta")
    return BrauerContext(n, n // 2, zeta, zeta.ker, tuple(z_blocks(n)))


@dataclass(frozen=True)
class TKIJ:
    in_t: bool
    in_k: bool
    in_i: bool
    in_j: bool


def in_k(a: Diagram, ctx: BrauerContext) -> bool:
    return a.ker.refines(ctx.kappa)


def classify_TKIJ(a: Diagram, ctx: BrauerContext) -> TKIJ:
    if a.n != ctx.n or not in_family(a, Family.B):
        raise DiagramError(f"{a} is not in B_{ctx.n}")
    k = in_k(a, ctx)
    return TKIJ(
        in_t=multiply(a, ctx.zeta) == ctx.zeta,
        in_k=k,
        in_i=not k,
        in_j=k and a.rank <= 2,
    )


def _partial(n: int, upper: Dict[int, int], lower: Dict[int, int]) -> Diagram:
    """Identity of degree n with some strands rewired."""
    blocks: Dict[int, List[int]] = {}
    for i in range(1, n + 1):
        blocks.setdefault(upper.get(i, i), []).append(i)
        blocks.setdefault(lower.get(i, i), []).append(-i)
    return _make(n, blocks.values())


def standard_generators(f: Family, n: int) -> List[Diagram]:
    """A generating set of the family (the identity is left implicit)."""
    if f is Family.TLM:
        return sorted({tl_to_model(g) for g in standard_generators(Family.TL, 2 * n - 1)})
    swaps = [permutation_diagram([i + 1 if j == i else i if j == i + 1 else j for j in range(1, n + 1)])
             for i in range(1, n)]
    # p_i splits strand i; p_{i+1/2} merges strands i and i+1; e_i caps them
    p = [_make(n, [(j, -j) for j in range(1, n + 1) if j != i] + [(i,), (-i,)]) for i in range(1, n + 1)]
    p_half = [_partial(n, {i + 1: i}, {i + 1: i}) for i in range(1, n)]
    e = [_make(n, [(j, -j) for j in range(1, n + 1) if j not in (i, i + 1)] + [(i, i + 1), (-i, -i - 1)])
         for i in range(1, n)]
    left = [_make(n, [(j, -j) for j in range(1, n + 1) if j not in (i, i + 1)] + [(i + 1, -i), (i,), (-i - 1,)])
            for i in range(1, n)]
    right = [star(x) for x in left]
    if f is Family.P:
        return swaps + p[:1] + p_half[:1]
    if f is Family.PB:
        return swaps + p[:1] + e[:1]
    if f is Family.B:
        return swaps + e[:1]
    if f is Family.S:
        return swaps
    if f is Family.PP:
        return p + p_half
    if f is Family.M:
        return e + left + right + p
    if f is Family.TL:
        return e
    raise FamilyError(f"No generators for family {f}")
