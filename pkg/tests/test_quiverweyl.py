import math

import pytest
from hypothesis import given, strategies as st

from quiverhecke.scalars import FieldCtx, Params
from quiverhecke.quiverweyl import (WeylGroup, alpha, gen_act_lattice,
                                    word_act_lattice, enumerate_orbit,
                                    orbit_rep, dimension_vector,
                                    dimvec_height, vertex_window,
                                    quiver_window, check_disjoint_lines,
                                    arrow_class, p_class)


def test_group_orders():
    for n in (1, 2, 3):
        assert len(WeylGroup("A", n).elements) == math.factorial(n)
        assert len(WeylGroup("B", n).elements) == 2 ** n * math.factorial(n)


def test_word_length_consistency():
    w = WeylGroup("B", 2)
    for el in w.elements:
        word = w.word(el)
        assert w.from_word(word) == el
        assert w.length(el) == len(word)
    assert w.longest_length() == 4


@given(st.lists(st.integers(0, 2), max_size=8))
def test_from_word_reduces(word):
    w = WeylGroup("B", 3)
    el = w.from_word(word)
    assert w.length(el) <= len(word)
    assert (w.length(el) - len(word)) % 2 == 0


def test_all_reduced_words():
    w = WeylGroup("A", 3)
    longest = max(w.elements, key=w.length)
    words = w.all_reduced_words(longest)
    assert all(w.from_word(word) == longest for word in words)
    assert len(set(words)) == len(words) >= 2


def test_lattice_action():
    assert alpha(0, 2) == (2, 0)
    assert alpha(1, 2) == (-1, 1)
    assert gen_act_lattice(0, (3, 5)) == (-3, 5)
    assert gen_act_lattice(1, (3, 5)) == (5, 3)
    assert word_act_lattice((0, 1), (3, 5)) == (-5, 3)


def test_enumerate_orbit_sizes():
    f = FieldCtx(13)
    assert enumerate_orbit(f, (1, 1), "A") == ((f.of(1), f.of(1)),)
    assert len(enumerate_orbit(f, (1, 4), "A")) == 2
    # type B closes under entrywise inversion: 4^{-1} = 10
    orbB = enumerate_orbit(f, (1, 4), "B")
    assert len(orbB) == 4
    assert (f.of(1), f.of(10)) in orbB
    assert orbit_rep(orbB) == min(orbB)


def test_dimension_vector():
    f = FieldCtx(13)
    d = dimension_vector(f, (5, 5))
    assert d == {f.of(5): 2, f.of(8): 2}
    assert dimvec_height(f, d) == 2
    d1 = dimension_vector(f, (1, 1))      # 1 is self-inverse
    assert d1 == {f.of(1): 2}
    assert dimvec_height(f, d1) == 2


def test_vertex_window_six_cycle():
    # q² = 4 has order 6 in F13*: the component of 1 is a 6-cycle
    f = FieldCtx(13)
    pr = Params(f, 5, 2)
    verts, arrows = quiver_window(f, pr, [f.of(1)], 6)
    assert len(verts) == 6
    assert len(arrows) == 6
    targets = {a: b for a, b in arrows}
    assert all(targets[v] == f.mul(v, f.of(4)) for v in verts)


def test_disjoint_lines():
    f = FieldCtx(13)
    pr = Params(f, 5, 2)
    check_disjoint_lines(f, pr, [f.of(1), f.of(2)])
    with pytest.raises(ValueError):
        check_disjoint_lines(f, pr, [f.of(1), f.of(4)])   # 4 = 1·q²


def test_arrow_class():
    f = FieldCtx(13)
    pr = Params(f, 5, 2)
    assert arrow_class(f, pr, f.of(1), f.of(4)) == "to"
    assert arrow_class(f, pr, f.of(4), f.of(1)) == "from"
    assert arrow_class(f, pr, f.of(1), f.of(2)) == "perp"
    f5 = FieldCtx(5)
    pr5 = Params(f5, 2, 2)
    # in F5 with q² = 4 = -1: i and -i point at each other
    assert arrow_class(f5, pr5, f5.of(1), f5.of(4)) == "both"


def test_p_class():
    f = FieldCtx(13)
    pr = Params(f, 5, 2)
    assert p_class(f, pr, f.of(1)) == "fixed"      # 1 = 1^{-1}, not ±p
    # p = 5 has p² = -1, hence {±p} = {±p^{-1}} = {5, 8}
    assert p_class(f, pr, f.of(5)) == "pboth"
    assert p_class(f, pr, f.of(8)) == "pboth"
    assert p_class(f, pr, f.of(2)) == "pperp"
    f5 = FieldCtx(5)
    pr5 = Params(f5, 3, 2)
    assert p_class(f5, pr5, f5.of(3)) == "pboth"   # 3² = 4 = -1 in F5
