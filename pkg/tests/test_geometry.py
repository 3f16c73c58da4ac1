import pytest
from hypothesis import given, settings, strategies as st

from weillab.errors import BudgetExceeded, NonHomogeneous
from weillab.geometry import (VarietySpec, affine_cone, count_points, count_series, product_spec,
                              projective_space_count, smoothness_probe)

from oracles import naive_count

E_F5 = [[1, 0, 2, 1], [-1, 3, 0, 0], [1, 1, 0, 2]]  # y^2 z = x^3 - x z^2
NODAL_F5 = [[1, 0, 2, 1], [-1, 3, 0, 0], [-1, 2, 0, 1]]  # y^2 z = x^3 + x^2 z
CI_F3 = [[[1, 3, 0, 0, 0], [1, 0, 3, 0, 0], [1, 0, 0, 3, 0], [1, 0, 0, 0, 3], [1, 1, 1, 0, 1]],
         [[1, 2, 0, 0, 0], [2, 0, 1, 0, 1]]]


def plane(p, terms, a=1):
    return VarietySpec.build(p, a, "projective", ["x", "y", "z"], [terms])


def test_affine_line_whole():
    assert count_points(VarietySpec.build(5, 1, "affine", ["x"], []), 2) == 25


def test_p1_zero_polynomial():
    assert count_points(VarietySpec.build(3, 1, "projective", ["x", "y"], [[]]), 1) == 4


def test_elliptic_f5_m1_against_oracle():
    assert count_points(plane(5, E_F5), 1) == naive_count([E_F5], 5, 1, 3) == 8


def test_p1_f2_series():
    assert count_series(VarietySpec.build(2, 1, "projective", ["x", "y"], []), 3).counts == (3, 5, 9)


def test_affine_line_series():
    assert count_series(VarietySpec.build(3, 1, "affine", ["x"], []), 2).counts == (3, 9)


def test_elliptic_f5_series():
    got = count_series(plane(5, E_F5), 4).counts
    assert list(got[:3]) == [naive_count([E_F5], 5, k, 3) for k in (1, 2, 3)]
    # N_4 from P_1 = 1 + 2t + 5t^2, itself fixed by the oracle's N_1
    assert got == (8, 32, 104, 640)


def test_projective_space_count():
    assert projective_space_count(0, 7, 3) == 1
    assert projective_space_count(2, 5, 1) == 31


@pytest.mark.parametrize("n", [0, 1, 2])
@pytest.mark.parametrize("q", [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1)])
def test_projective_space_enumeration(n, q):
    p, a = q
    spec = VarietySpec.build(p, a, "projective", [f"x{i}" for i in range(n + 1)], [])
    for m in (1, 2):
        assert count_points(spec, m) == projective_space_count(n, p ** a, m)


def test_fermat_quartic_f5():
    spec = plane(5, [[1, 4, 0, 0], [1, 0, 4, 0], [1, 0, 0, 4]])
    assert count_series(spec, 3).counts == (0, 44, 192)
    assert naive_count([[[1, 4, 0, 0], [1, 0, 4, 0], [1, 0, 0, 4]]], 5, 2, 3) == 44


def test_complete_intersection_f3():
    spec = VarietySpec.build(3, 1, "projective", ["x", "y", "z", "w"], CI_F3)
    assert [count_points(spec, m) for m in (1, 2)] == [naive_count(CI_F3, 3, m, 4) for m in (1, 2)]


def test_characteristic_two_cubic():
    terms = [[1, 0, 2, 1], [1, 0, 1, 2], [1, 3, 0, 0]]  # y^2 z + y z^2 = x^3
    spec = plane(2, terms)
    assert [count_points(spec, m) for m in (1, 2, 3)] == [naive_count([terms], 2, m, 3) for m in (1, 2, 3)]


def test_partitioning_does_not_change_counts():
    spec = VarietySpec.build(7, 1, "affine", ["x", "y"], [[[1, 0, 2], [-1, 3, 0], [-1, 0, 0]]])
    base = count_points(spec, 2)
    assert count_points(spec, 2, threads=3, chunk=5) == base
    assert count_points(spec, 2, threads=2, chunk=17) == base
    assert base == naive_count([[[1, 0, 2], [-1, 3, 0], [-1, 0, 0]]], 7, 2, 2, "affine")


@pytest.mark.parametrize("p,k", [(3, 1), (3, 2), (3, 3), (5, 2), (7, 2)])
def test_quadratic_kernel_small_characteristic(p, k):
    # the constant 4 must be read in F_p, not as a field index
    terms = [[1, 0, 0, 2], [1, 0, 2, 0]]
    assert count_points(plane(p, terms), k) == naive_count([terms], p, k, 3)


def test_affine_cone_relation():
    spec = plane(5, E_F5)
    for m in (1, 2):
        q = 5 ** m
        assert count_points(affine_cone(spec), m) - 1 == (q - 1) * count_points(spec, m)


def test_product_counts_multiply():
    x = VarietySpec.build(5, 1, "affine", ["x", "y"], [[[1, 0, 2], [-1, 3, 0], [1, 1, 0]]])
    y = VarietySpec.build(5, 1, "affine", ["u"], [[[1, 2], [-2, 0]]])
    for m in (1, 2):
        assert count_points(product_spec(x, y), m) == count_points(x, m) * count_points(y, m)


def test_non_homogeneous_rejected():
    with pytest.raises(NonHomogeneous):
        count_points(plane(5, [[1, 2, 0, 0], [1, 0, 0, 1]]), 1)


def test_over_budget():
    with pytest.raises(BudgetExceeded):
        count_points(plane(5, [[1, 1, 1, 1], [1, 3, 0, 0], [1, 0, 3, 0], [1, 0, 0, 3]]), 6, budget=1000)


def test_smooth_conic_probe():
    spec = plane(7, [[1, 2, 0, 0], [1, 0, 2, 0], [-1, 0, 0, 2]])
    v = smoothness_probe(spec, 2)
    assert v["verdict"] == "no_singular_point_found" and v["heuristic"]


def test_nodal_cubic_witness():
    v = smoothness_probe(plane(5, NODAL_F5), 1)
    assert v["verdict"] == "singular_point" and not v["heuristic"]
    assert v["witness"] == [[0], [0], [1]]


def test_probe_budget():
    with pytest.raises(BudgetExceeded):
        smoothness_probe(plane(5, E_F5), 3, budget=10)


plane_terms = st.lists(
    st.tuples(st.integers(-3, 3), st.integers(0, 3), st.integers(0, 3)).filter(lambda t: t[1] + t[2] <= 3),
    min_size=1, max_size=5)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 5]), plane_terms, st.integers(1, 3))
def test_random_plane_curves_against_oracle(p, raw, d):
    d = max(d, max(i + j for _, i, j in raw))
    terms = [[c, i, j, d - i - j] for c, i, j in raw]
    spec = plane(p, terms)
    for m in (1, 2):
        assert count_points(spec, m) == naive_count([terms], p, m, 3)
