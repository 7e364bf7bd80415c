from __future__ import annotations

import math
import random

import pytest

from generators import random_group, transitive_corpus
from oracles import all_perms, closure, finest_system_joining
from trianglecomp.errors import DegreeMismatch, NotABlockSystem, NotTransitive
from trianglecomp.group import (
    BlockSystem,
    PermGroup,
    block_action,
    build_bsgs,
    contains,
    group_order,
    is_alternating,
    is_block,
    is_elementary_abelian,
    is_primitive,
    is_symmetric,
    is_transitive,
    minimal_block,
    orbit,
    orbit_transversal,
    verify_blocks,
)
from trianglecomp.perm import Perm

P = Perm.parse
KLEIN = PermGroup.of(P("(1,3)(2,4)"), P("(1,2)(3,4)"))
A5 = PermGroup.of(P("(1,2,3,4,5)"), P("(3,4,5)", 5))


def tuples(G: PermGroup):
    return [tuple(v - 1 for v in g.images) for g in G.generators]


def test_orbits():
    assert orbit(PermGroup(1, []), 1) == {1}
    assert orbit(KLEIN, 1) == {1, 2, 3, 4}
    assert orbit(PermGroup.of(P("(1,2)", 3)), 3) == {3}
    t = orbit_transversal(KLEIN, 1)
    assert all(u(1) == w for w, u in t.items())


def test_transitivity():
    assert is_transitive(PermGroup.of(P("(1,2,3)")))
    assert not is_transitive(PermGroup.of(P("(1,2)", 3)))
    assert is_transitive(KLEIN)


def test_bsgs_examples():
    assert PermGroup.of(P("(1,2)", 3), P("(1,2,3)")).order() == 6
    assert PermGroup(4, []).order() == 1
    b = build_bsgs(A5)
    assert group_order(b) == 60
    assert not contains(b, P("(1,2)", 5))
    assert contains(b, Perm.identity(5))
    assert contains(KLEIN, P("(1,4)(2,3)"))
    with pytest.raises(DegreeMismatch):
        contains(b, Perm.identity(4))


def test_bsgs_chain_property():
    G = PermGroup.of(P("(1,2,3,4,5,6,7)"), P("(1,2)", 7))
    b = build_bsgs(G)
    assert b.order() == math.factorial(7)
    for level in range(len(b.base)):
        for g in b.stabilizer_generators(level):
            assert all(g(pt) == pt for pt in b.base[:level])
    assert math.prod(b.basic_orbit_lengths()) == b.order()


def test_bsgs_against_closure():
    rng = random.Random(11)
    checked = 0
    while checked < 25:
        n = rng.randint(3, 8)
        G = random_group(rng, n)
        try:
            elems = closure(tuples(G), n, limit=10**5)
        except OverflowError:
            continue
        assert G.order() == len(elems)
        for img in rng.sample(all_perms(n), min(40, math.factorial(n))):
            assert (Perm([v + 1 for v in img]) in G) == (img in elems)
        checked += 1


def test_block_system_validation():
    with pytest.raises(NotABlockSystem):
        BlockSystem(4, [[1, 2], [3]])
    with pytest.raises(NotABlockSystem):
        BlockSystem(4, [[1, 2, 3], [4]])
    S = BlockSystem(4, [[3, 1], [2, 4]])
    assert S.blocks == ((1, 3), (2, 4))
    assert S.block_of[4] == 2
    assert S.induced(P("(1,2)(3,4)")) == P("(1,2)")


def test_minimal_block_examples():
    assert minimal_block(KLEIN, 1, 3).blocks == ((1, 3), (2, 4))
    assert minimal_block(PermGroup.of(P("(1,2,3,4)")), 1, 3).blocks == ((1, 3), (2, 4))
    A4 = PermGroup.of(P("(1,2,3)", 4), P("(2,3,4)"))
    assert minimal_block(A4, 1, 2).blocks == ((1, 2, 3, 4),)
    with pytest.raises(NotTransitive):
        minimal_block(PermGroup.of(P("(1,2)", 3)), 1, 2)


@pytest.mark.parametrize("G", transitive_corpus(), ids=lambda G: f"deg{G.degree}")
def test_minimal_block_against_exhaustive_search(G):
    gens = tuples(G)
    for b in range(2, G.degree + 1):
        expected = finest_system_joining(gens, G.degree, 0, b - 1)
        got = {frozenset(v - 1 for v in c) for c in minimal_block(G, 1, b).blocks}
        assert got == expected


def test_primitivity_and_blocks():
    assert is_primitive(A5)
    assert not is_primitive(PermGroup.of(P("(1,2,3,4)")))
    assert is_primitive(PermGroup(1, []))
    assert is_block(KLEIN, [1, 3])
    assert not is_block(PermGroup.of(P("(1,2,3,4)")), [1, 2])
    assert verify_blocks(KLEIN, BlockSystem(4, [[1, 3], [2, 4]]))
    assert verify_blocks(KLEIN, BlockSystem(4, [[1, 2], [3, 4]]))
    assert verify_blocks(KLEIN, BlockSystem(4, [[1], [2], [3], [4]]))


def test_block_action_klein():
    data = block_action(KLEIN, BlockSystem(4, [[1, 3], [2, 4]]))
    assert data.quotient_order == 2
    assert data.kernel_order == 2
    assert set(data.kernel.generators) == {P("(1,3)(2,4)")}
    assert data.group_order == 4


def test_block_action_trivial_systems():
    data = block_action(A5, BlockSystem(5, [[i] for i in range(1, 6)]))
    assert data.quotient_order == 60 and data.kernel_order == 1
    data = block_action(A5, BlockSystem(5, [range(1, 6)]))
    assert data.quotient_order == 1 and data.kernel_order == 60
    with pytest.raises(NotABlockSystem):
        block_action(PermGroup.of(P("(1,2,3,4)")), BlockSystem(4, [[1, 2], [3, 4]]))


def test_block_action_against_enumeration():
    # S_2 wr S_3 on 6 points and S_3 wr S_2: kernel and stabilizers by brute force
    cases = [
        (PermGroup.of(P("(1,2)", 6), P("(1,3,5)(2,4,6)"), P("(1,3)(2,4)", 6)), [[1, 2], [3, 4], [5, 6]]),
        (PermGroup.of(P("(1,2,3)", 6), P("(1,2)", 6), P("(1,4)(2,5)(3,6)")), [[1, 2, 3], [4, 5, 6]]),
        (PermGroup.of(P("(1,2,3,4,5,6,7,8)"), P("(1,8)(2,7)(3,6)(4,5)")), [[1, 5], [2, 6], [3, 7], [4, 8]]),
    ]
    for G, cells in cases:
        S = BlockSystem(G.degree, cells)
        data = block_action(G, S)
        elems = closure(tuples(G), G.degree)
        cellsets = [frozenset(c - 1 for c in cell) for cell in S.blocks]
        kernel = {e for e in elems if all(frozenset(e[v] for v in c) == c for c in cellsets)}
        assert data.kernel_order == len(kernel)
        assert data.group_order == len(elems)
        assert data.group_order == data.quotient_order * data.kernel_order
        for g in data.kernel.generators:
            assert tuple(v - 1 for v in g.images) in kernel
        for i, c in enumerate(cellsets):
            stab = {e for e in elems if frozenset(e[v] for v in c) == c}
            J = PermGroup(G.degree, data.block_stabilizer_schreier_gens[i])
            assert J.order() == len(stab)
            assert len(elems) // len(stab) == len(cellsets)


def test_recognition():
    assert is_alternating(PermGroup.of(P("(1,2,3)", 4), P("(2,3,4)")))
    assert not is_alternating(PermGroup.of(P("(1,2)")))
    assert not is_alternating(PermGroup(5, []))
    assert is_symmetric(PermGroup.of(P("(1,2,3,4,5)"), P("(1,2)", 5)))
    assert is_elementary_abelian(PermGroup.of(P("(1,3)(2,4)")), 2)
    assert not is_elementary_abelian(PermGroup.of(P("(1,2,3)")), 2)
    assert is_elementary_abelian(PermGroup.of(P("(1,2)(3,4)"), P("(1,3)(2,4)")), 2)


def test_identity_generators_are_dropped():
    G = PermGroup(3, [Perm.identity(3), P("(1,2)", 3), P("(1,2)", 3)])
    assert G.generators == (P("(1,2)", 3),)
