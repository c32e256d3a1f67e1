from fractions import Fraction
from random import Random

import pytest

from tmoments import builtins
from tmoments.errors import BudgetExceeded
from tmoments.model import Transducer, final_component
from tmoments.moments import moments_of
from tmoments.oracle import (
    exact_moments_dp,
    exact_moments_enumeration,
    exact_moments_series,
    quasi_det_bound,
    slope_report,
)

from helpers import random_machine

F = Fraction


@pytest.mark.parametrize("name", ["naf", "gray", "block01", "block11", "block10m01"])
def test_dp_equals_enumeration_on_builtins(name):
    t = builtins.builtin_generators(name)
    for n in range(0, 9):
        assert exact_moments_dp(t, n) == exact_moments_enumeration(t, n)


def test_dp_equals_enumeration_on_random_machines():
    rng = Random(17)
    for _ in range(15):
        t = random_machine(rng)
        for n in (0, 1, 3, 5):
            assert exact_moments_dp(t, n) == exact_moments_enumeration(t, n)


def test_series_matches_pointwise():
    t = builtins.wnaf(3)
    series = exact_moments_series(t, 10)
    assert series == [exact_moments_dp(t, n) for n in range(11)]


def test_binary_input_moments():
    for m in exact_moments_series(builtins.naf(), 30)[1:]:
        assert m.E_in == F(m.n, 2) and m.V_in == F(m.n, 4)


def test_zero_outputs_give_zero_moments():
    for m in exact_moments_series(builtins.simple(), 12):
        assert m.E_out == m.V_out == m.Cov == 0


def test_length_zero_is_the_initial_final_output():
    t = Transducer.from_edges(1, [(1, 1, 0, 0), (1, 1, 1, 0)], {1: F(5, 2)})
    m = exact_moments_dp(t, 0)
    assert m.E_out == F(5, 2) and m.V_out == 0 and m.E_in == 0


def test_enumeration_budget():
    with pytest.raises(BudgetExceeded):
        exact_moments_enumeration(builtins.naf(), 10, budget=1000)


def test_covariance_slope_of_simple_machine():
    t = builtins.simple(1, 0, 0, 0)
    rows = slope_report(t, range(30, 40), moments_of(final_component(t)))
    assert all(abs(r["dCov"] - F(-1, 4)) < F(1, 10**6) for r in rows)


def test_slopes_approach_constants():
    t = builtins.block01()
    rows = slope_report(t, range(1, 40), moments_of(final_component(t)))
    assert abs(rows[-1]["dV_out"] - F(1, 16)) < F(1, 10**8)
    t = builtins.naf()
    rows = slope_report(t, range(1, 40), moments_of(final_component(t)))
    assert abs(rows[-1]["dE_out"] - F(1, 3)) < F(1, 10**8)


def test_slope_report_empty_range():
    assert slope_report(builtins.naf(), [], moments_of(final_component(builtins.naf()))) == []


def test_quasi_det_band_is_bounded_for_bounded_variance():
    t = builtins.block10m01()
    widths = [quasi_det_bound(t, 0, n) for n in range(1, 30)]
    assert widths[-1] == widths[5] == (F(-1), F(1))


def test_quasi_det_band_grows_otherwise():
    t = builtins.naf()
    highs = [quasi_det_bound(t, F(1, 3), n)[1] for n in (10, 40, 160)]
    assert highs[0] < highs[1] < highs[2]


def test_quasi_det_band_matches_enumeration():
    from itertools import product
    from tmoments.model import run

    t = builtins.gray()
    n = 7
    vals = [run(t, w)[0] - F(1, 4) * n for w in product(t.input_alphabet, repeat=n)]
    assert quasi_det_bound(t, F(1, 4), n) == (min(vals), max(vals))


def test_constant_machine_band():
    t = builtins.simple(2, 2, 2, 2)
    assert all(quasi_det_bound(t, 2, n) == (0, 0) for n in range(10))


def test_running_deviation_stays_tiny_after_forty():
    # the centred deviations of NAF keep creeping up by geometric increments
    t = builtins.naf()
    m = moments_of(final_component(t))
    series = exact_moments_series(t, 50)[1:]
    dev = [abs(s.E_out - m.e2 * s.n) for s in series]
    assert max(dev) - max(dev[:40]) < F(1, 10**9)
    cov = [abs(s.Cov - m.c * s.n) for s in series]
    assert max(cov) - max(cov[:40]) < F(1, 10**9)
