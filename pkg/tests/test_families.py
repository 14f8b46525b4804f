import numpy as np
import pytest

from src.core.degrees import brauer_p, family_size, projection_count
from src.core.diagram import Family, identity, in_family, is_projection, multiply, permutation_diagram, special, star
from src.core.errors import BudgetExceeded, FamilyError
from src.core.families import (
    brauer_context,
    classify_TKIJ,
    enumerate_family,
    green_related,
    projections,
    standard_generators,
    wreath_permutations,
    z_blocks,
)


@pytest.mark.parametrize("f,n,size", [
    (Family.P, 0, 1),
    (Family.P, 2, 15),
    (Family.P, 3, 203),
    (Family.PB, 2, 10),
    (Family.B, 3, 15),
    (Family.TL, 4, 14),
    (Family.M, 2, 9),
    (Family.S, 4, 24),
    (Family.TLM, 3, 42),
])
def test_enumeration_sizes(monoid, f, n, size):
    assert len(monoid(f.value, n)) == size == family_size(f, n)


@pytest.mark.parametrize("f,top", [(Family.B, 6), (Family.TL, 8), (Family.PP, 4)])
def test_enumeration_matches_closed_forms(f, top):
    for n in range(1, top + 1):
        m = enumerate_family(f, n)
        assert len(m) == family_size(f, n)
        assert all(in_family(d, f) for d in m)


def test_enumeration_respects_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_family(Family.P, 4, budget=1000)


def test_elements_are_sorted_and_indexed(monoid):
    m = monoid("PB", 2)
    assert list(m) == sorted(m)
    for i, d in enumerate(m):
        assert m.index_of(d) == i
    assert m[m.identity_index] == identity(2)


def test_multiplication_table(monoid):
    m = monoid("P", 2)
    table = m.table()
    assert table.shape == (15, 15)
    e = m.identity_index
    assert np.array_equal(table[e], np.arange(15))
    assert np.array_equal(table[:, e], np.arange(15))
    with pytest.raises(BudgetExceeded):
        m.table(budget=100)


def test_projection_counts_from_enumeration():
    assert len(projections(Family.P, 3, 0)) == 5
    assert len(projections(Family.B, 5, 1)) == 15
    assert len(projections(Family.B, 5, 3)) == 10
    assert projections(Family.P, 3, 3) == [identity(3)]


@pytest.mark.parametrize("f", [Family.P, Family.PB, Family.PP, Family.M])
def test_projection_closed_forms_p_type(f):
    for n in range(2, 6):
        for r in (0, 1, 2):
            found = projections(f, n, r)
            assert len(found) == projection_count(f, n, r)
            assert all(is_projection(e) and in_family(e, f) and e.rank == r for e in found)


def test_projection_closed_forms_temperley_lieb():
    for n in range(3, 9):
        ranks = (1, 3) if n % 2 else (0, 2, 4)
        for r in ranks:
            if r <= n:
                assert len(projections(Family.TL, n, r)) == projection_count(Family.TL, n, r)
    for n in range(2, 5):
        for r in (0, 1, 2):
            assert len(projections(Family.TLM, n, r)) == projection_count(Family.TLM, n, r)


def test_projection_closed_forms_brauer():
    for n in range(3, 7):
        for r in range(n % 2, n + 1, 2):
            assert len(projections(Family.B, n, r)) == brauer_p(n, r)


def test_projection_rank_out_of_range():
    with pytest.raises(FamilyError):
        projections(Family.P, 2, 3)


def test_right_related_to_a_projection(monoid, rng):
    m = monoid("P", 3)
    for _ in range(200):
        a = rng.choice(m.elements)
        assert green_related(a, multiply(a, star(a)), "R")
    e = identity(3)
    assert all(green_related(e, e, rel) for rel in "LRHDJ")


def test_brauer_green_relations_by_kernels(monoid):
    m = monoid("B", 4)
    for a in m:
        for b in m:
            assert green_related(a, b, "R") == (a.ker == b.ker)
            assert green_related(a, b, "L") == (a.coker == b.coker)


def test_green_related_rejects_unknown():
    with pytest.raises(ValueError):
        green_related(identity(2), identity(2), "X")


def test_wreath_groups():
    assert len(wreath_permutations(4)) == 8
    assert len(wreath_permutations(6)) == 48
    assert len(wreath_permutations(5)) == 8
    assert z_blocks(5) == [(2, 3), (4, 5)]
    assert z_blocks(4) == [(1, 2), (3, 4)]


def test_brauer_context():
    ctx = brauer_context(3)
    assert ctx.Z == ((2, 3),)
    assert set(ctx.U) == {identity(3), permutation_diagram([1, 3, 2])}
    assert len(brauer_context(4).U) == 8
    ctx5 = brauer_context(5)
    assert all(multiply(u, ctx5.zeta) == ctx5.zeta for u in ctx5.U)
    with pytest.raises(FamilyError):
        brauer_context(2)


def test_tkij_classification(monoid):
    ctx = brauer_context(4)
    z = classify_TKIJ(ctx.zeta, ctx)
    assert z.in_k and z.in_t and not z.in_i
    assert classify_TKIJ(special(Family.B, 4, "alpha"), ctx).in_i
    m = monoid("B", 4)
    ideal_i = [a for a in m if classify_TKIJ(a, ctx).in_i]
    ideal_j = [a for a in m if classify_TKIJ(a, ctx).in_j]
    for a in ideal_i:
        assert all(classify_TKIJ(multiply(a, b), ctx).in_i for b in m)
    for a in ideal_j:
        assert all(classify_TKIJ(multiply(a, b), ctx).in_j for b in m)


def _generated(gens, n):
    seen = {identity(n)}
    frontier = [identity(n)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = multiply(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


@pytest.mark.parametrize("f,n", [
    (Family.P, 2), (Family.P, 3), (Family.PB, 3), (Family.B, 3), (Family.B, 4), (Family.S, 4),
    (Family.PP, 3), (Family.M, 3), (Family.TL, 4), (Family.TL, 5), (Family.TLM, 3),
])
def test_standard_generators_generate(monoid, f, n):
    gens = standard_generators(f, n)
    assert all(in_family(g, f) for g in gens)
    assert _generated(gens, n) == set(monoid(f.value, n))


@pytest.mark.parametrize("name,n", [("P", 2), ("PB", 3), ("PP", 3), ("M", 3), ("TL", 5), ("B", 4)])
def test_d_relation_is_rank(monoid, name, n):
    m = monoid(name, n)
    lkey = {a: multiply(star(a), a) for a in m}
    rkey = {a: multiply(a, star(a)) for a in m}
    linked = {(lkey[c], rkey[c]) for c in m}
    for a in m:
        for b in m:
            assert ((lkey[a], rkey[b]) in linked) == green_related(a, b, "D")
