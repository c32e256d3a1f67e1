from fractions import Fraction
from random import Random

import pytest
from hypothesis import given, settings, strategies as st

from tmoments import builtins
from tmoments.jet import (
    Jet2,
    det,
    identity_jet_matrix,
    jet_det,
    jet_from_edge,
    jet_mul,
    leibniz_det,
)
from tmoments.model import final_component
from tmoments.moments import characteristic_matrix

from helpers import random_machine, sympy_partials

u = Jet2.from_terms(cu=1)
v = Jet2.from_terms(cv=1)
w = Jet2.from_terms(cw=1)
ONE = Jet2.constant(1)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
jets = st.lists(rationals, min_size=10, max_size=10).map(Jet2)


def test_edge_jet_integer_labels():
    half = Fraction(1, 2)
    assert jet_from_edge(1, 1, 2) == Jet2.from_terms(c0=half, cu=half, cv=half, cw=half,
                                                     cuv=half, cuw=half, cvw=half)
    assert jet_from_edge(0, 0, 2) == Jet2.from_terms(c0=half, cw=half)


def test_edge_jet_fractional_exponent():
    # (1+u)^(1/2) = 1 + u/2 - u^2/8 + ..., times (1+w)/2
    expected = Jet2.from_terms(c0=Fraction(1, 2), cu=Fraction(1, 4), cw=Fraction(1, 2),
                               cuu=Fraction(-1, 16), cuw=Fraction(1, 4))
    assert jet_from_edge(Fraction(1, 2), 0, 2) == expected


def test_ring_examples():
    assert (ONE + u) * (ONE + v) == ONE + u + v + u * v
    assert u * (u * v) == Jet2()
    sq = (ONE + u + v) * (ONE + u + v)
    assert sq == Jet2.from_terms(c0=1, cu=2, cv=2, cuu=1, cuv=2, cvv=1)


@settings(max_examples=80, deadline=None)
@given(jets, jets, jets)
def test_multiplication_commutes_and_associates(a, b, c):
    assert jet_mul(a, b) == jet_mul(b, a)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


def test_identity_and_two_by_two():
    for n in range(1, 5):
        assert jet_det(identity_jet_matrix(n)) == ONE
    assert jet_det([[ONE + u, v], [w, ONE]]) == ONE + u - v * w


def _random_jet_matrix(rng, n):
    pool = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(40)]
    return [[Jet2(rng.choice(pool) for _ in range(10)) for _ in range(n)] for _ in range(n)]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_division_free_det_matches_leibniz(n):
    rng = Random(n)
    for _ in range(6):
        m = _random_jet_matrix(rng, n)
        assert jet_det(m) == leibniz_det(m, ONE, Jet2())


@settings(max_examples=40, deadline=None)
@given(st.lists(rationals, min_size=25, max_size=25), st.integers(1, 5))
def test_rational_det_matches_leibniz(entries, n):
    m = [entries[i * n:(i + 1) * n] for i in range(n)]
    assert det(m) == leibniz_det(m)


def test_det_multiplicative_on_block_diagonal():
    rng = Random(11)
    a, b = _random_jet_matrix(rng, 2), _random_jet_matrix(rng, 2)
    zero = Jet2()
    block = [a[0] + [zero, zero], a[1] + [zero, zero], [zero, zero] + b[0], [zero, zero] + b[1]]
    assert jet_det(block) == jet_det(a) * jet_det(b)


def test_naf_characteristic_slice():
    # at x=y=1 the determinant is (1 - z/2)(1 - z/2 - z^2/2); expanding around
    # z = 1 by hand gives value 0, slope -3/4 and second derivative 1
    jet = jet_det(characteristic_matrix(final_component(builtins.naf())))
    assert jet.c0 == 0
    assert jet.cw == Fraction(-3, 4)
    assert jet.cww == Fraction(1, 2)


@pytest.mark.parametrize("seed", range(8))
def test_jet_partials_match_symbolic_differentiation(seed):
    t = random_machine(Random(seed), max_states=3)
    fc = final_component(t)
    jet = jet_det(characteristic_matrix(fc))
    assert jet.partials() == sympy_partials(fc)


def test_builtin_partials_match_symbolic_differentiation():
    for t in (builtins.naf(), builtins.block11(), builtins.gray(), builtins.wnaf(3)):
        fc = final_component(t)
        assert jet_det(characteristic_matrix(fc)).partials() == sympy_partials(fc)
