from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from weillab.errors import NonPositiveInput
from weillab.ffield import PrimePower
from weillab.polynomial import pmul, series_mul, series_pow
from weillab.positivity import (LocalFactor, closed_point_counts, closed_point_factors, dominance_check,
                                power_sums, tensor_local_factor_series, tensor_logderiv_series)
from weillab.zetarec import ZetaFunction

from oracles import monic_irreducible_count


def test_power_sums_two_roots():
    assert power_sums(LocalFactor.parse([1, -3, 2]), 6) == [2 ** n + 1 for n in range(1, 7)]


def test_parse_fraction_strings():
    f = LocalFactor.parse(["1", "-1/2", "3/4"])
    assert f.poly == (1, Fraction(-1, 2), Fraction(3, 4))
    assert f.to_json() == ["1/1", "-1/2", "3/4"]


def test_constant_term_must_be_one():
    with pytest.raises(NonPositiveInput):
        LocalFactor.parse([2, 1])


def test_elliptic_factor_k2():
    f = LocalFactor.parse([1, 2, 5], q_x=5)
    sums = tensor_logderiv_series(f, 2, 20)
    assert len(sums) == 20 and all(s >= 0 for s in sums)
    # s_1 = -2, so s_1^4 = 16
    assert sums[0] == 16
    series = tensor_local_factor_series(f, 2, 20)
    assert len(series) == 21 and series[0] == 1 and all(c >= 0 for c in series)
    assert series[1] == 16 and all(c.denominator == 1 for c in series)


def test_k_must_be_positive():
    with pytest.raises(ValueError):
        tensor_logderiv_series(LocalFactor.parse([1, 1]), 0, 5)


def test_dominance_p1():
    z = ZetaFunction((1,), (1, -4, 3), PrimePower(3, 1))
    factors, b = closed_point_factors(z, 12)
    assert dominance_check(factors, 12, b)
    # and the product of the closed-point factors is Z itself
    prod = [1] + [0] * 12
    for f, e in zip(factors, b):
        prod = series_mul(prod, series_pow(f, e, 13), 13)
    assert prod == z.series(12)


def test_dominance_rejects_negative():
    with pytest.raises(NonPositiveInput):
        dominance_check([[1, -1]], 3)
    with pytest.raises(ValueError):
        dominance_check([[1, 1]], 3, [1, 2])


def test_closed_points_of_p1_f3():
    b = closed_point_counts([3 ** r + 1 for r in range(1, 6)])
    # degree one: the 3 affine points and infinity
    assert b[0] == 4
    assert b[1:] == [monic_irreducible_count(3, r) for r in range(2, 6)]


def test_closed_points_reject_bad_counts():
    with pytest.raises(NonPositiveInput):
        closed_point_counts([1, 2])


small_factor = st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4), min_size=1, max_size=4)


@settings(max_examples=60, deadline=None)
@given(small_factor, st.integers(1, 3), st.integers(1, 12))
def test_random_factors_stay_nonnegative(tail, k, T):
    f = LocalFactor.parse([1] + tail)
    series = tensor_local_factor_series(f, k, T)
    assert all(c >= 0 for c in series)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(0, 5), min_size=1, max_size=5), min_size=1, max_size=4),
       st.integers(1, 10))
def test_dominance_for_random_nonnegative(tails, T):
    factors = [[1] + t for t in tails]
    assert dominance_check(factors, T)
    whole = [1]
    for f in factors:
        whole = pmul(whole, f)
    assert dominance_check(factors + [whole], T, [1] * len(factors) + [0])
