# src/core/diagram.py
"""Diagram values: set partitions of {1..n, 1'..n'} with composition, involution and the structural maps."""
from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple

from src.core.errors import DiagramError, FamilyError
from src.utils.union_find import UnionFind
from src.utils.validation import sanitize_diagram_text

Block = Tuple[int, ...]


class Family(str, Enum):
    P = "P"
    PB = "PB"
    B = "B"
    PP = "PP"
    M = "M"
    TL = "TL"
    S = "S"
    # planar partitions with 1 and 1' in one block; isomorphic to TL_{2n-1}
    TLM = "TLM"


P_TYPE = (Family.P, Family.PB, Family.PP, Family.M)


class BlockKind(str, Enum):
    UPPER = "upper"
    LOWER = "lower"
    TRANSVERSAL = "transversal"


def _vertex_key(v: int) -> Tuple[bool, int]:
    return (v < 0, abs(v))


def _canonical(n: int, blocks: Iterable[Iterable[int]]) -> Tuple[Block, ...]:
    normed = [tuple(sorted(b, key=_vertex_key)) for b in blocks]
    normed.sort(key=lambda b: b[0] if b[0] > 0 else n - b[0])
    return tuple(normed)


def block_kind(block: Sequence[int]) -> BlockKind:
    has_upper = any(v > 0 for v in block)
    has_lower = any(v < 0 for v in block)
    if has_upper and has_lower:
        return BlockKind.TRANSVERSAL
    return BlockKind.UPPER if has_upper else BlockKind.LOWER


@dataclass(frozen=True, order=True)
class SetPartitionOfN:
    """A partition of {1..n}; kernels and cokernels of diagrams."""
    n: int
    blocks: Tuple[Block, ...]

    @classmethod
    def discrete(cls, n: int) -> "SetPartitionOfN":
        return cls(n, tuple((i,) for i in range(1, n + 1)))

    def class_of(self) -> Dict[int, int]:
        return {v: idx for idx, b in enumerate(self.blocks) for v in b}

    def refines(self, other: "SetPartitionOfN") -> bool:
        """True iff every block of self lies inside a block of other."""
        where = other.class_of()
        return all(len({where[v] for v in b}) == 1 for b in self.blocks)

    def __str__(self) -> str:
        return "(" + "|".join(",".join(map(str, b)) for b in self.blocks) + ")"


@dataclass(frozen=True, order=True)
class Diagram:
    """Canonical block form: positives ascending then negatives by |v|; blocks by least vertex."""
    n: int
    blocks: Tuple[Block, ...]

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Diagram":
        if n < 0:
            raise DiagramError(f"Degree must be non-negative, got {n}")
        blocks = [list(b) for b in blocks]
        seen = set()
        for b in blocks:
            if not b:
                raise DiagramError("Empty block")
            for v in b:
                if isinstance(v, bool) or not isinstance(v, int):
                    raise DiagramError(f"Vertex {v!r} is not an integer")
                if v == 0 or abs(v) > n:
                    raise DiagramError(f"Vertex {v} out of range for degree {n}")
                if v in seen:
                    raise DiagramError(f"Vertex {v} appears twice")
                seen.add(v)
        if len(seen) != 2 * n:
            missing = sorted(set(range(-n, n + 1)) - {0} - seen, key=_vertex_key)
            raise DiagramError(f"Missing vertices {missing}")
        return cls(n, _canonical(n, blocks))

    @cached_property
    def transversals(self) -> List[Tuple[Block, Block]]:
        """(upper part, lower part) pairs, ordered by least upper vertex."""
        out = []
        for b in self.blocks:
            ups = tuple(v for v in b if v > 0)
            downs = tuple(v for v in b if v < 0)
            if ups and downs:
                out.append((ups, downs))
        return out

    @cached_property
    def rank(self) -> int:
        return len(self.transversals)

    @cached_property
    def ker(self) -> SetPartitionOfN:
        parts = [tuple(v for v in b if v > 0) for b in self.blocks]
        return SetPartitionOfN(self.n, tuple(sorted(p for p in parts if p)))

    @cached_property
    def coker(self) -> SetPartitionOfN:
        parts = [tuple(-v for v in b if v < 0) for b in self.blocks]
        return SetPartitionOfN(self.n, tuple(sorted(p for p in parts if p)))

    def non_transversals(self) -> List[Block]:
        return [b for b in self.blocks if block_kind(b) is not BlockKind.TRANSVERSAL]

    def __str__(self) -> str:
        return format_diagram(self)


@dataclass(frozen=True)
class DiagramStats:
    rank: int
    dom: Tuple[int, ...]
    codom: Tuple[int, ...]
    ker: SetPartitionOfN
    coker: SetPartitionOfN


def _make(n: int, blocks: Iterable[Iterable[int]]) -> Diagram:
    return Diagram(n, _canonical(n, blocks))


def identity(n: int) -> Diagram:
    return Diagram(n, tuple((i, -i) for i in range(1, n + 1)))


def permutation_diagram(images: Sequence[int]) -> Diagram:
    """images[i-1] is the image of i."""
    n = len(images)
    if sorted(images) != list(range(1, n + 1)):
        raise DiagramError(f"{list(images)} is not a permutation")
    return _make(n, [(i, -images[i - 1]) for i in range(1, n + 1)])


def parse_diagram(text: str, n: int) -> Diagram:
    text = sanitize_diagram_text(text)
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise DiagramError(f"Malformed diagram text: {e.msg}")
    except RecursionError:
        raise DiagramError("Malformed diagram text: brackets nested too deeply")
    if not isinstance(raw, list) or not all(isinstance(b, list) for b in raw):
        raise DiagramError("Diagram text must be a list of blocks")
    return Diagram.from_blocks(n, raw)


def format_diagram(a: Diagram) -> str:
    return "[" + ",".join("[" + ",".join(map(str, b)) + "]" for b in a.blocks) + "]"


def multiply(a: Diagram, b: Diagram) -> Diagram:
    """Traces of the connected components of the product graph on 3n vertices."""
    if a.n != b.n:
        raise DiagramError(f"Degree mismatch: {a.n} vs {b.n}")
    n = a.n
    uf = UnionFind(3 * n)
    # a occupies rows 0 and 1, b occupies rows 1 and 2
    for block in a.blocks:
        slots = [v - 1 if v > 0 else n - v - 1 for v in block]
        for s in slots[1:]:
            uf.union(slots[0], s)
    for block in b.blocks:
        slots = [n + v - 1 if v > 0 else 2 * n - v - 1 for v in block]
        for s in slots[1:]:
            uf.union(slots[0], s)
    groups: Dict[int, List[int]] = {}
    for i in range(n):
        groups.setdefault(uf.find(i), []).append(i + 1)
    for j in range(n):
        groups.setdefault(uf.find(2 * n + j), []).append(-(j + 1))
    return Diagram(n, tuple(tuple(g) for g in groups.values()))


def star(a: Diagram) -> Diagram:
    return _make(a.n, [[-v for v in b] for b in a.blocks])


def stats(a: Diagram) -> DiagramStats:
    dom = tuple(sorted(v for up, _ in a.transversals for v in up))
    codom = tuple(sorted(-v for _, down in a.transversals for v in down))
    return DiagramStats(a.rank, dom, codom, a.ker, a.coker)


def is_planar(a: Diagram) -> bool:
    """No two blocks interleave in the cyclic order 1..n, n'..1'."""
    n = a.n
    owner = [0] * (2 * n)
    last: Dict[int, int] = {}
    for idx, block in enumerate(a.blocks):
        for v in block:
            pos = v - 1 if v > 0 else 2 * n + v
            owner[pos] = idx
            last[idx] = max(last.get(idx, -1), pos)
    stack: List[int] = []
    seen = set()
    for pos in range(2 * n):
        b = owner[pos]
        if b in seen:
            if stack[-1] != b:
                return False
            if last[b] == pos:
                stack.pop()
        else:
            seen.add(b)
            if last[b] != pos:
                stack.append(b)
    return True


def in_family(a: Diagram, f: Family) -> bool:
    if f is Family.P:
        return True
    if f is Family.PB:
        return all(len(b) <= 2 for b in a.blocks)
    if f is Family.B:
        return all(len(b) == 2 for b in a.blocks)
    if f is Family.PP:
        return is_planar(a)
    if f is Family.M:
        return all(len(b) <= 2 for b in a.blocks) and is_planar(a)
    if f is Family.TL:
        return all(len(b) == 2 for b in a.blocks) and is_planar(a)
    if f is Family.S:
        return all(len(b) == 2 and b[0] > 0 > b[1] for b in a.blocks)
    if f is Family.TLM:
        return a.n >= 1 and -1 in a.blocks[0] and is_planar(a)
    raise FamilyError(f"Unknown family {f}")


def families_of(a: Diagram) -> List[Family]:
    return [f for f in Family if in_family(a, f)]


def is_projection(a: Diagram) -> bool:
    """Fixed by star with every transversal of the form A u A'."""
    if star(a) != a:
        return False
    return all(tuple(-v for v in up) == down for up, down in a.transversals)


def hat_flatten(a: Diagram) -> Diagram:
    parts: List[Block] = []
    for b in a.blocks:
        ups = tuple(v for v in b if v > 0)
        downs = tuple(v for v in b if v < 0)
        parts.extend(p for p in (ups, downs) if p)
    return _make(a.n, parts)


def hat_pairup(a: Diagram) -> Diagram:
    """Brauer diagram of even rank to rank 0: consecutive transversals fuse into one upper and one lower arc."""
    if not in_family(a, Family.B):
        raise DiagramError(f"{format_diagram(a)} is not a Brauer diagram")
    if a.rank % 2:
        raise DiagramError(f"hat_pairup needs even rank, got {a.rank}")
    blocks = a.non_transversals()
    t = a.transversals
    for i in range(0, len(t), 2):
        blocks.append((t[i][0][0], t[i + 1][0][0]))
        blocks.append((t[i][1][0], t[i + 1][1][0]))
    return _make(a.n, blocks)


def bar(a: Diagram, f: Family) -> Diagram:
    """Transversal i becomes {i} joined to its lower part; lower non-transversals are kept."""
    n, r = a.n, a.rank
    blocks: List[Iterable[int]] = [(i + 1,) + down for i, (_, down) in enumerate(a.transversals)]
    blocks += [b for b in a.non_transversals() if b[0] < 0]
    if f is Family.B:
        if not in_family(a, Family.B):
            raise DiagramError(f"{format_diagram(a)} is not a Brauer diagram")
        blocks += [(c, c + 1) for c in range(r + 1, n + 1, 2)]
    else:
        if not is_projection(a):
            raise DiagramError(f"{format_diagram(a)} is not a projection")
        blocks += [(c,) for c in range(r + 1, n + 1)]
    return _make(n, blocks)


def plus(e: Diagram) -> Diagram:
    """Rank-r projection of degree n to a rank-0 projection of degree n+r; A_i gains n+r+1-i."""
    if not is_projection(e):
        raise DiagramError(f"{format_diagram(e)} is not a projection")
    n, r = e.n, e.rank
    blocks: List[Iterable[int]] = e.non_transversals()
    for i, (up, _) in enumerate(e.transversals):
        part = up + (n + r - i,)
        blocks.append(part)
        blocks.append(tuple(-v for v in part))
    return _make(n + r, blocks)


def _slots(v: int) -> Tuple[int, int]:
    """The two TL vertices of v, in cyclic traversal order."""
    if v > 0:
        return 2 * v - 1, 2 * v
    return 2 * v, 2 * v + 1


def tilde_pp_to_tl(a: Diagram) -> Diagram:
    """The isomorphism PP_n -> TL_{2n}."""
    if not is_planar(a):
        raise DiagramError(f"{format_diagram(a)} is not planar")
    edges = []
    for block in a.blocks:
        cyc = [v for v in block if v > 0] + [v for v in reversed(block) if v < 0]
        for j, u in enumerate(cyc):
            w = cyc[(j + 1) % len(cyc)]
            edges.append((_slots(u)[1], _slots(w)[0]))
    return _make(2 * a.n, edges)


def untilde_tl_to_pp(t: Diagram) -> Diagram:
    if t.n % 2 or not in_family(t, Family.TL):
        raise DiagramError(f"{format_diagram(t)} is not in an even Temperley-Lieb monoid")
    m = t.n // 2
    uf = UnionFind(2 * m)

    def owner(s: int) -> int:
        return (s + 1) // 2 - 1 if s > 0 else m + (-s + 1) // 2 - 1

    for x, y in t.blocks:
        uf.union(owner(x), owner(y))
    blocks = [[p + 1 if p < m else -(p - m + 1) for p in g] for g in uf.groups()]
    a = _make(m, blocks)
    if tilde_pp_to_tl(a) != t:
        raise DiagramError(f"{format_diagram(t)} is not in the image of the PP_{m} isomorphism")
    return a


@lru_cache(maxsize=1 << 16)
def tl_to_model(a: Diagram) -> Diagram:
    """TL_{2k} -> PP_k, and TL_{2k-1} -> TLM_k through the padded TL_{2k}."""
    if a.n % 2 == 0:
        return untilde_tl_to_pp(a)
    shifted = [(1, -1)] + [tuple(v + 1 if v > 0 else v - 1 for v in b) for b in a.blocks]
    return untilde_tl_to_pp(_make(a.n + 1, shifted))


@lru_cache(maxsize=1 << 16)
def model_to_tl(d: Diagram, n: int) -> Diagram:
    """Inverse of tl_to_model for target degree n (2k or 2k-1)."""
    t = tilde_pp_to_tl(d)
    if n == t.n:
        return t
    if n != t.n - 1 or t.blocks[0] != (1, -1):
        raise DiagramError(f"{format_diagram(d)} does not model an element of TL_{n}")
    return _make(n, [tuple(v - 1 if v > 0 else v + 1 for v in b) for b in t.blocks[1:]])


def relabel_upper(a: Diagram, images: Dict[int, int]) -> Diagram:
    """Rename upper vertices by images (identity where absent)."""
    return _make(a.n, [[images.get(v, v) if v > 0 else v for v in b] for b in a.blocks])


def _singletons(n: int, used: Iterable[int]) -> List[Block]:
    used = set(used)
    return [(v,) for v in list(range(1, n + 1)) + list(range(-1, -n - 1, -1)) if v not in used]


def _padded(n: int, blocks: List[Block]) -> Diagram:
    return _make(n, blocks + _singletons(n, [v for b in blocks for v in b]))


def _arcs(n: int, start: int) -> List[Block]:
    out: List[Block] = []
    for i in range(start, n, 2):
        out += [(i, i + 1), (-i, -i - 1)]
    return out


SPECIAL_NAMES = ("zeta", "alpha", "beta", "gamma", "delta", "pi")


def special(f: Family, n: int, name: str) -> Diagram:
    """The distinguished elements generating the minimal congruences, and the seed pi."""
    if name not in SPECIAL_NAMES:
        raise FamilyError(f"Unknown special element {name!r}")
    if f in P_TYPE:
        if n < 2:
            raise FamilyError(f"special elements of {f.value}_n need n >= 2, got {n}")
        table = {
            "zeta": [],
            "alpha": [(1, 2)],
            "beta": [(-1, -2)],
            "gamma": [(1, -1)],
            "pi": [(1, -1), (2, -2)],
        }
    elif f is Family.TLM:
        if n < 2:
            raise FamilyError(f"special elements of TLM_n need n >= 2, got {n}")
        table = {
            "zeta": [(1, -1)],
            "alpha": [(1, 2, -1)],
            "beta": [(1, -1, -2)],
            "pi": [(1, -1), (2, -2)],
        }
    elif f is Family.TL:
        if n < 3:
            raise FamilyError(f"special elements of TL_n need n >= 3, got {n}")
        model = Family.PP if n % 2 == 0 else Family.TLM
        return model_to_tl(special(model, (n + 1) // 2, name), n)
    elif f is Family.B:
        return _special_brauer(n, name)
    else:
        raise FamilyError(f"No special elements for family {f.value}")
    if name not in table:
        raise FamilyError(f"{name} is not defined for {f.value}")
    return _padded(n, table[name])


def _special_brauer(n: int, name: str) -> Diagram:
    if n % 2:
        if n < 3:
            raise FamilyError(f"special elements of B_n (n odd) need n >= 3, got {n}")
        table = {
            "zeta": [(1, -1)] + _arcs(n, 2),
            "alpha": [(1, 2), (3, -1), (-2, -3)] + _arcs(n, 4),
            "pi": [(1, -1), (2, -2), (3, -3)] + _arcs(n, 4),
        }
    else:
        if n < 4:
            raise FamilyError(f"special elements of B_n (n even) need n >= 4, got {n}")
        lower = [b for b in _arcs(n, 1) if b[0] < 0]
        upper_rest = [b for b in _arcs(n, 5) if b[0] > 0]
        table = {
            "zeta": _arcs(n, 1),
            "alpha": [(1, 4), (2, 3)] + upper_rest + lower,
            "gamma": [(1, -1), (2, -2)] + _arcs(n, 3),
            "delta": [(1, -2), (2, -1)] + _arcs(n, 3),
            "pi": [(1, -1), (2, -2), (3, -3), (4, -4)] + _arcs(n, 5),
        }
    if name == "beta":
        return star(_special_brauer(n, "alpha"))
    if name not in table:
        raise FamilyError(f"{name} is not defined for B_{n}")
    return _make(n, table[name])


def minimal_pairs(f: Family, n: int) -> List[Tuple[Diagram, Diagram]]:
    """Generating pairs of the minimal non-trivial congruences."""
    if f in P_TYPE:
        names = [("zeta", "alpha"), ("zeta", "beta"), ("zeta", "gamma")]
    elif f in (Family.TLM, Family.TL):
        if f is Family.TL and n % 2 == 0:
            names = [("zeta", "alpha"), ("zeta", "beta"), ("zeta", "gamma")]
        else:
            names = [("zeta", "alpha"), ("zeta", "beta")]
    elif f is Family.B:
        names = [("zeta", "alpha"), ("zeta", "beta")]
        if n % 2 == 0:
            names.append(("gamma", "delta"))
    else:
        raise FamilyError(f"No minimal pair list for family {f.value}")
    return [(special(f, n, x), special(f, n, y)) for x, y in names]
