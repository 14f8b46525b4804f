# src/core/actions.py
"""Right actions of diagram monoids: projection actions, Brauer class actions, quotients and their checks."""
from __future__ import annotations

import json
import random
import threading
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import permutations
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.config.settings import settings
from src.core.degrees import B, brauer_linear, q_ranks, q_size
from src.core.diagram import (
    Diagram,
    Family,
    P_TYPE,
    _make,
    bar,
    format_diagram,
    hat_pairup,
    is_projection,
    model_to_tl,
    multiply,
    relabel_upper,
    special,
    star,
    tl_to_model,
)
from src.core.errors import BudgetExceeded, FamilyError
from src.core.families import (
    BrauerContext,
    EnumeratedMonoid,
    brauer_context,
    green_related,
    in_k,
    projections,
    standard_generators,
    wreath_permutations,
)
from src.utils.logger import logger
from src.utils.union_find import UnionFind


class StateKind(str, Enum):
    SINK = "sink"
    PROJ = "proj"
    SIGMA = "sigma"
    OMEGA1 = "omega1"
    CHI = "chi"
    LU = "lu"
    CLASS = "class"


@dataclass(frozen=True, order=True)
class ActionState:
    kind: StateKind
    diagram: Optional[Diagram] = None

    def label(self) -> str:
        if self.kind is StateKind.SINK:
            return "-"
        return f"{self.kind.value}:{format_diagram(self.diagram)}"


SINK = ActionState(StateKind.SINK)


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    mode: str
    witness: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class EquivRelation:
    """A partition of 0..size-1 as first-appearance labels."""
    labels: Tuple[int, ...]

    @classmethod
    def from_labels(cls, labels: Iterable[int]) -> "EquivRelation":
        index: Dict[int, int] = {}
        return cls(tuple(index.setdefault(x, len(index)) for x in labels))

    @classmethod
    def discrete(cls, size: int) -> "EquivRelation":
        return cls(tuple(range(size)))

    @classmethod
    def universal(cls, size: int) -> "EquivRelation":
        return cls((0,) * size)

    @classmethod
    def from_pairs(cls, size: int, pairs: Iterable[Tuple[int, int]]) -> "EquivRelation":
        uf = UnionFind(size)
        for a, b in pairs:
            uf.union(a, b)
        return cls(tuple(uf.labels()))

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def num_classes(self) -> int:
        return max(self.labels) + 1 if self.labels else 0

    def classes(self) -> List[List[int]]:
        out: List[List[int]] = [[] for _ in range(self.num_classes)]
        for i, c in enumerate(self.labels):
            out[c].append(i)
        return out

    def related(self, i: int, j: int) -> bool:
        return self.labels[i] == self.labels[j]

    def is_trivial(self) -> bool:
        return self.num_classes == self.size

    def issubset(self, other: "EquivRelation") -> bool:
        return len(set(zip(self.labels, other.labels))) == self.num_classes

    def join(self, other: "EquivRelation") -> "EquivRelation":
        uf = UnionFind(self.size)
        for rel in (self, other):
            first: Dict[int, int] = {}
            for i, c in enumerate(rel.labels):
                uf.union(first.setdefault(c, i), i)
        return EquivRelation(tuple(uf.labels()))

    def representatives(self) -> np.ndarray:
        """Least member of each element's class."""
        labels = np.asarray(self.labels)
        _, first = np.unique(labels, return_index=True)
        return first[labels]

    def is_right_congruence(self, table: np.ndarray) -> bool:
        labels = np.asarray(self.labels)
        return bool(np.array_equal(labels[table], labels[table[self.representatives()]]))

    def is_congruence(self, table: np.ndarray) -> bool:
        labels = np.asarray(self.labels)
        left_ok = np.array_equal(labels[table], labels[table[:, self.representatives()]])
        return self.is_right_congruence(table) and bool(left_ok)


@dataclass(frozen=True)
class ActionTable:
    family: Family
    n: int
    construction: str
    states: Tuple[ActionState, ...]
    evaluator: Callable[[ActionState, Diagram], ActionState] = field(repr=False, compare=False)
    sink: Optional[ActionState] = None
    seed: Optional[ActionState] = None

    @cached_property
    def index(self) -> Dict[ActionState, int]:
        return {s: i for i, s in enumerate(self.states)}

    @property
    def degree(self) -> int:
        return len(self.states)

    @property
    def deg_prime(self) -> int:
        """Partial degree: the sink is a global fixed point and can be dropped."""
        return self.degree - 1 if self.sink is not None else self.degree

    def act(self, state: ActionState, a: Diagram) -> ActionState:
        if state not in self.index:
            raise ValueError(f"{state.label()} is not a state of this action")
        return self.evaluator(state, a)

    def transformation(self, a: Diagram) -> Tuple[int, ...]:
        out = []
        for s in self.states:
            image = self.evaluator(s, a)
            if image not in self.index:
                raise ValueError(f"{s.label()} . {format_diagram(a)} = {image.label()} left the state set")
            out.append(self.index[image])
        return tuple(out)

    def dense(self, generators: Sequence[Diagram]) -> List[List[int]]:
        columns = [self.transformation(g) for g in generators]
        return [[col[i] for col in columns] for i in range(self.degree)]

    def to_json(self, generators: Sequence[Diagram]) -> str:
        return json.dumps({
            "family": self.family.value,
            "n": self.n,
            "construction": self.construction,
            "states": [s.label() for s in self.states],
            "generators": [format_diagram(g) for g in generators],
            "transitions": self.dense(generators),
            "sink_index": self.index[self.sink] if self.sink is not None else None,
        })


def act_projection(f: Family, n: int, state: ActionState, a: Diagram) -> ActionState:
    """eps . a = a* eps a when ker(eps) = ker(eps a), otherwise the sink."""
    if state.kind is StateKind.SINK:
        return state
    e = state.diagram
    if state.kind is not StateKind.PROJ or e.n != n or e.rank not in q_ranks(f, n) or not is_projection(e):
        raise FamilyError(f"{state.label()} is not a state of the {f.value}_{n} projection action")
    ea = multiply(e, a)
    if ea.ker != e.ker:
        return SINK
    return ActionState(StateKind.PROJ, multiply(star(ea), ea))


def _check_budget(label: str, states: int, budget: Optional[int]) -> None:
    budget = settings.budget if budget is None else budget
    if states > budget:
        raise BudgetExceeded(f"{label} needs {states} states, over budget {budget}")


def _projection_states(f: Family, n: int) -> List[ActionState]:
    states = [ActionState(StateKind.PROJ, e) for r in q_ranks(f, n) if r <= n for e in projections(f, n, r)]
    return [SINK] + sorted(states)


def build_projection_action(f: Family, n: int, budget: Optional[int] = None) -> ActionTable:
    if f is Family.TL:
        if n < 3:
            raise FamilyError(f"TL_n projection action needs n >= 3, got {n}")
        _check_budget(f"TL_{n} projection action", q_size(f, n) + 1, budget)
        model = Family.PP if n % 2 == 0 else Family.TLM
        k = (n + 1) // 2

        def transported(state: ActionState, a: Diagram) -> ActionState:
            if state.kind is StateKind.SINK:
                return state
            image = act_projection(model, k, ActionState(StateKind.PROJ, tl_to_model(state.diagram)), tl_to_model(a))
            if image.kind is StateKind.SINK:
                return image
            return ActionState(StateKind.PROJ, model_to_tl(image.diagram, n))

        seed = ActionState(StateKind.PROJ, model_to_tl(special(model, k, "pi"), n))
        states = _projection_states(Family.TL, n)
        logger.info(f"TL_{n} action via {model.value}_{k}: {len(states)} states")
        return ActionTable(Family.TL, n, f"projection-via-{model.value}", tuple(states), transported, SINK, seed)
    if f not in P_TYPE and f is not Family.TLM:
        raise FamilyError(f"No projection action for family {f.value}")
    if n < 2:
        raise FamilyError(f"{f.value}_n projection action needs n >= 2, got {n}")
    _check_budget(f"{f.value}_{n} projection action", q_size(f, n) + 1, budget)
    states = _projection_states(f, n)
    logger.info(f"{f.value}_{n} projection action: {len(states)} states")
    seed = ActionState(StateKind.PROJ, special(f, n, "pi"))
    return ActionTable(f, n, "projection", tuple(states), lambda s, a: act_projection(f, n, s, a), SINK, seed)


def build_mu_prime(f: Family, n: int, budget: Optional[int] = None) -> ActionTable:
    """All projections as states; p . a = a* p a when p R pa."""
    if f not in P_TYPE:
        raise FamilyError(f"mu-prime is built for P, PB, PP and M, not {f.value}")
    if n < 2:
        raise FamilyError(f"mu-prime needs n >= 2, got {n}")
    # a projection is an upper partition with some blocks marked transversal
    _check_budget(f"{f.value}_{n} mu-prime action", B(n) * 2 ** n + 1, budget)

    def evaluate(state: ActionState, a: Diagram) -> ActionState:
        if state.kind is StateKind.SINK:
            return state
        pa = multiply(state.diagram, a)
        if not green_related(state.diagram, pa, "R"):
            return SINK
        return ActionState(StateKind.PROJ, multiply(star(pa), pa))

    states = [ActionState(StateKind.PROJ, e) for r in range(n + 1) for e in projections(f, n, r)]
    return ActionTable(f, n, "mu-prime", tuple([SINK] + sorted(states)), evaluate, SINK, None)


class SigmaClassifier:
    """Brauer elements to their class: the sink for I, else the least Gamma_r relabelling of the bar form."""

    def __init__(self, ctx: BrauerContext):
        self.ctx = ctx
        self._groups: Dict[int, List[Dict[int, int]]] = {}
        self._lock = threading.Lock()

    def _gamma(self, r: int) -> List[Dict[int, int]]:
        with self._lock:
            if r not in self._groups:
                self._groups[r] = [{i + 1: p[i] for i in range(r)} for p in wreath_permutations(r)]
            return self._groups[r]

    def representative(self, a: Diagram) -> Diagram:
        b = bar(a, Family.B)
        return min(relabel_upper(b, g) for g in self._gamma(a.rank))

    def __call__(self, a: Diagram) -> ActionState:
        if not in_k(a, self.ctx):
            return SINK
        return ActionState(StateKind.SIGMA, self.representative(a))


def sigma_brauer(ctx: BrauerContext) -> SigmaClassifier:
    return SigmaClassifier(ctx)


def bar_forms(n: int, r: int) -> List[Diagram]:
    """Rank-r Brauer diagrams with transversals from 1..r and upper arcs {r+1,r+2},..."""
    out = []
    upper = [(c, c + 1) for c in range(r + 1, n + 1, 2)]
    for e in projections(Family.B, n, r):
        codomain = [down[0] for _, down in e.transversals]
        lower = [b for b in e.non_transversals() if b[0] < 0]
        for images in permutations(codomain):
            out.append(_make(n, [(i + 1, v) for i, v in enumerate(images)] + upper + lower))
    return out


def build_brauer_action_odd(n: int, budget: Optional[int] = None) -> ActionTable:
    if n < 3 or n % 2 == 0:
        raise FamilyError(f"odd Brauer action needs odd n >= 3, got {n}")
    _check_budget(f"B_{n} class action", brauer_linear(n) + 1, budget)
    ctx = brauer_context(n)
    classify = sigma_brauer(ctx)
    reps = {classify.representative(d) for r in (1, 3) for d in bar_forms(n, r)}
    states = [SINK] + sorted(ActionState(StateKind.SIGMA, d) for d in reps)

    def evaluate(state: ActionState, a: Diagram) -> ActionState:
        if state.kind is StateKind.SINK:
            return state
        return classify(multiply(state.diagram, a))

    logger.info(f"B_{n} class action: {len(states)} states")
    seed = classify(special(Family.B, n, "pi"))
    return ActionTable(Family.B, n, "brauer-odd", tuple(states), evaluate, SINK, seed)


def build_brauer_action_even(n: int, budget: Optional[int] = None) -> ActionTable:
    """Right multiplication on the rank-2 and rank-0 R-classes, glued to the class action of rank 4."""
    if n < 4 or n % 2:
        raise FamilyError(f"even Brauer action needs even n >= 4, got {n}")
    _check_budget(f"B_{n} push-out action", brauer_linear(n) + 1, budget)
    ctx = brauer_context(n)
    classify = sigma_brauer(ctx)
    upper_rest = [(c, c + 1) for c in range(3, n + 1, 2)]
    omega1 = []
    for e in projections(Family.B, n, 2):
        codomain = [down[0] for _, down in e.transversals]
        lower = [b for b in e.non_transversals() if b[0] < 0]
        for x, y in permutations(codomain):
            omega1.append(_make(n, [(1, x), (2, y)] + upper_rest + lower))
    chi = [_make(n, list(ctx.Z) + [b for b in e.blocks if b[0] < 0]) for e in projections(Family.B, n, 0)]
    lu = {classify.representative(d) for d in bar_forms(n, 4)}
    states = (
        [SINK]
        + sorted(ActionState(StateKind.OMEGA1, d) for d in omega1)
        + sorted(ActionState(StateKind.CHI, d) for d in chi)
        + sorted(ActionState(StateKind.LU, d) for d in lu)
    )

    def evaluate(state: ActionState, a: Diagram) -> ActionState:
        if state.kind is StateKind.SINK:
            return state
        x = multiply(state.diagram, a)
        if state.kind is StateKind.OMEGA1:
            return ActionState(StateKind.OMEGA1 if x.rank == 2 else StateKind.CHI, x)
        if state.kind is StateKind.CHI:
            return ActionState(StateKind.CHI, x)
        if not in_k(x, ctx):
            return SINK
        if x.rank >= 4:
            return ActionState(StateKind.LU, classify.representative(x))
        return ActionState(StateKind.CHI, hat_pairup(x))

    logger.info(f"B_{n} push-out action: {len(states)} states")
    seed = ActionState(StateKind.LU, classify.representative(special(Family.B, n, "pi")))
    return ActionTable(Family.B, n, "brauer-even", tuple(states), evaluate, SINK, seed)


def build_action(f: Family, n: int, budget: Optional[int] = None) -> ActionTable:
    """The minimum-degree construction for the family; BudgetExceeded before building too many states."""
    if f is Family.B:
        return build_brauer_action_odd(n, budget) if n % 2 else build_brauer_action_even(n, budget)
    return build_projection_action(f, n, budget)


DIRECT_LIMIT = 200_000


def induced_transformations(t: ActionTable, m: EnumeratedMonoid, mode: str = "auto") -> Tuple[List[Tuple[int, ...]], str]:
    """Transformation of every element of m, directly or along a Cayley spanning tree of generators."""
    if mode == "auto":
        mode = "direct" if len(m) * t.degree <= DIRECT_LIMIT else "cayley"
    if mode == "direct":
        return [t.transformation(d) for d in m], mode
    gens = [m.index_of(g) for g in standard_generators(m.family, m.n)]
    gen_maps = [t.transformation(m[g]) for g in gens]
    found: Dict[int, Tuple[int, ...]] = {m.identity_index: t.transformation(m[m.identity_index])}
    frontier = [m.identity_index]
    while frontier:
        nxt = []
        for i in frontier:
            for g, tg in zip(gens, gen_maps):
                j = m.product(i, g)
                if j not in found:
                    found[j] = tuple(tg[x] for x in found[i])
                    nxt.append(j)
        frontier = nxt
    if len(found) < len(m):
        logger.warning(f"Generators reached {len(found)} of {len(m)} elements; evaluating the rest directly")
        for i in range(len(m)):
            if i not in found:
                found[i] = t.transformation(m[i])
    return [found[i] for i in range(len(m))], mode


def check_action_law(t: ActionTable, m: EnumeratedMonoid, sample: Optional[int] = None, seed: int = 0) -> CheckResult:
    mode = "full" if sample is None else f"sampled-{sample}"
    try:
        maps = [t.transformation(d) for d in m]
    except ValueError as e:
        return CheckResult(False, mode, str(e))
    ident = maps[m.identity_index]
    if ident != tuple(range(t.degree)):
        moved = next(i for i, x in enumerate(ident) if x != i)
        return CheckResult(False, mode, f"identity moves {t.states[moved].label()}")
    if sample is None:
        pairs: Iterable[Tuple[int, int]] = ((i, j) for i in range(len(m)) for j in range(len(m)))
    else:
        rng = random.Random(seed)
        pairs = [(rng.randrange(len(m)), rng.randrange(len(m))) for _ in range(sample)]
    for i, j in pairs:
        k = m.product(i, j)
        composed = tuple(maps[j][x] for x in maps[i])
        if composed != maps[k]:
            x = next(x for x in range(t.degree) if composed[x] != maps[k][x])
            return CheckResult(False, mode, f"state {t.states[x].label()}, a={m[i]}, b={m[j]}")
    return CheckResult(True, mode)


def check_faithful_full(t: ActionTable, m: EnumeratedMonoid, mode: str = "auto") -> CheckResult:
    maps, used = induced_transformations(t, m, mode)
    seen: Dict[Tuple[int, ...], int] = {}
    for i, tr in enumerate(maps):
        if tr in seen:
            return CheckResult(False, f"full-kernel/{used}", f"{m[seen[tr]]} and {m[i]} act identically")
        seen[tr] = i
    logger.info(f"{t.family.value}_{t.n}: {len(m)} distinct transformations on {t.degree} states")
    return CheckResult(True, f"full-kernel/{used}")


def check_faithful_minpairs(t: ActionTable, pairs: Sequence[Tuple[Diagram, Diagram]]) -> CheckResult:
    for a, b in pairs:
        if not any(t.act(s, a) != t.act(s, b) for s in t.states):
            return CheckResult(False, "minpairs", f"({a}, {b}) not separated")
    return CheckResult(True, "minpairs")


def check_monogenic(t: ActionTable, seed: ActionState, generators: Sequence[Diagram]) -> CheckResult:
    orbit = {seed}
    frontier = [seed]
    while frontier:
        nxt = []
        for s in frontier:
            for g in generators:
                image = t.act(s, g)
                if image not in orbit:
                    orbit.add(image)
                    nxt.append(image)
        frontier = nxt
    if len(orbit) == t.degree and orbit == set(t.states):
        return CheckResult(True, "monogenic")
    return CheckResult(False, "monogenic", f"orbit of {seed.label()} has {len(orbit)} of {t.degree} states")


def action_kernel(t: ActionTable, m: EnumeratedMonoid) -> EquivRelation:
    maps, _ = induced_transformations(t, m)
    return EquivRelation.from_labels(maps)


def orbit_congruence(t: ActionTable, m: EnumeratedMonoid, x: ActionState) -> EquivRelation:
    """a ~ b iff x.a = x.b."""
    return EquivRelation.from_labels(t.act(x, a) for a in m)


def quotient_action(m: EnumeratedMonoid, sigma: EquivRelation) -> ActionTable:
    """Action of m on the classes of a right congruence: [x] . a = [xa]."""
    if sigma.size != len(m):
        raise ValueError(f"Relation on {sigma.size} points does not match |M| = {len(m)}")
    reps = sigma.representatives()
    for i in range(len(m)):
        r = int(reps[i])
        for j in range(len(m)):
            if sigma.labels[m.product(i, j)] != sigma.labels[m.product(r, j)]:
                raise ValueError(f"Not a right congruence: ({m[i]}, {m[r]}) fails on {m[j]}")
    class_rep = [m[c[0]] for c in sigma.classes()]
    states = tuple(ActionState(StateKind.CLASS, d) for d in class_rep)

    def evaluate(state: ActionState, a: Diagram) -> ActionState:
        k = m.product(m.index_of(state.diagram), m.index_of(a))
        return states[sigma.labels[k]]

    return ActionTable(m.family, m.n, "quotient", states, evaluate, None, None)
