from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import mul, order_of
from trianglecomp.errors import DegreeMismatch, PointOutOfRange, RepeatedPoint
from trianglecomp.perm import Perm, compose, cycle_decomposition, format_cycles, parity


def perms(n_min=1, n_max=9):
    return st.integers(n_min, n_max).flatmap(
        lambda n: st.permutations(list(range(1, n + 1))).map(Perm)
    )


def same_degree_pair(n_max=9):
    return st.integers(1, n_max).flatmap(
        lambda n: st.tuples(
            st.permutations(list(range(1, n + 1))).map(Perm),
            st.permutations(list(range(1, n + 1))).map(Perm),
        )
    )


def test_right_action_convention():
    g = Perm.parse("(1,2)", 3)
    h = Perm.parse("(2,3)", 3)
    # 1 -> 2 under g, then 2 -> 3 under h
    assert (g * h)(1) == 3
    assert compose(g, h) == Perm.parse("(1,3,2)", 3)


def test_parse_and_format():
    g = Perm.parse("(4,5)(1,2,3)")
    assert g.degree == 5
    assert str(g) == "(1,2,3)(4,5)"
    assert str(Perm.identity(4)) == "()"
    assert Perm.parse("()", 3) == Perm.identity(3)
    assert Perm.parse("(3 1 2)", 3) == Perm.parse("(1,2,3)", 3)
    assert format_cycles([]) == "()"
    assert eval(repr(g)) == g


def test_cycles_are_canonical():
    g = Perm.parse("(5,3)(4,2,6)", 6)
    assert cycle_decomposition(g) == [(2, 6, 4), (3, 5)]
    assert g.cycle_of(4) == (4, 2, 6)
    assert g.cycle_of(1) == (1,)
    assert g.cycle_type() == (3, 2, 1)


def test_orders_and_parity():
    assert Perm.parse("(1,2,3)(4,5)", 5).order() == 6
    assert Perm.identity(3).order() == 1
    assert parity(Perm.parse("(1,2)", 2)) == "odd"
    assert Perm.parse("(1,2,3)", 3).is_even()


def test_errors():
    with pytest.raises(RepeatedPoint):
        Perm([1, 1, 2])
    with pytest.raises(PointOutOfRange):
        Perm([1, 4, 2])
    with pytest.raises(RepeatedPoint):
        Perm.parse("(1,2)(2,3)")
    with pytest.raises(PointOutOfRange):
        Perm.parse("(1,5)", 3)
    with pytest.raises(DegreeMismatch):
        Perm.identity(2) * Perm.identity(3)
    with pytest.raises(PointOutOfRange):
        Perm.identity(3)(0)
    with pytest.raises(ValueError):
        Perm.parse("1,2")


def test_relabelling():
    g = Perm.parse("(1,2)", 2)
    assert g.shift(2) == Perm.parse("(3,4)", 4)
    assert g.extend(4).fixed_points() == {3, 4}
    h = Perm.parse("(3,4)(1,2)", 4)
    assert h.restrict([4, 3]) == Perm.parse("(1,2)", 2)
    with pytest.raises(ValueError):
        h.restrict([2, 3])


@given(same_degree_pair())
def test_product_matches_tuple_oracle(pair):
    g, h = pair
    expected = mul(tuple(v - 1 for v in g.images), tuple(v - 1 for v in h.images))
    assert (g * h).images == tuple(v + 1 for v in expected)
    assert ~(g * h) == ~h * ~g


@given(perms())
def test_order_matches_repeated_product(g):
    assert g.order() == order_of(tuple(v - 1 for v in g.images))
    assert (g ** g.order()).is_identity()
    assert g ** -1 == ~g
    assert math.lcm(1, *(len(c) for c in g.cycles())) == g.order()


@given(same_degree_pair())
def test_sign_is_multiplicative(pair):
    g, h = pair
    assert (g * h).sign() == g.sign() * h.sign()


@given(perms())
def test_cycle_text_round_trip(g):
    assert Perm.parse(str(g), g.degree) == g
    assert Perm.from_cycles(g.cycles(), g.degree) == g


@given(same_degree_pair(6), perms(6, 6))
def test_associative_and_conjugation(pair, k):
    g, h = pair
    if k.degree != g.degree:
        return
    assert (g * h) * k == g * (h * k)
    assert g ** h == ~h * g * h
