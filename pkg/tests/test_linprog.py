"""Exact LP feasibility: majorization and convex membership."""

from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from bgrowth.linprog import (
    check_majorization,
    combination_weights,
    majorization_weights,
)


def test_majorized_by_scaling_down():
    w = majorization_weights((1, 1), [(2, 2)])
    assert w is not None and check_majorization((1, 1), [(2, 2)], w)


def test_not_majorized_when_coordinate_unreachable():
    assert majorization_weights((3, 0), [(2, 2)]) is None


def test_majorized_by_proper_combination():
    basis = [(4, 0), (0, 4)]
    w = majorization_weights((2, 2), basis)
    assert w is not None and check_majorization((2, 2), basis, w)


def test_majorized_needs_weight_budget():
    # (3,3) <= mu*(2,2) forces mu=3/2 > 1
    assert majorization_weights((3, 3), [(2, 2)]) is None


def test_empty_basis_only_majorizes_zero():
    assert majorization_weights((0, 0), []) == []
    assert majorization_weights((0, 1), []) is None


def test_combination_weights_membership():
    w = combination_weights((1, 1), [(0, 0), (2, 2)])
    assert w is not None
    assert sum(w) == 1
    assert all(x >= 0 for x in w)


def test_combination_weights_rejects_outside_point():
    assert combination_weights((3, 3), [(0, 0), (2, 2)]) is None
    assert combination_weights((1, 2), [(0, 0), (2, 2)]) is None


def test_exact_fractions_no_drift():
    basis = [(Fraction(1, 3), Fraction(2, 7)), (Fraction(5, 3), Fraction(1, 7))]
    target = (Fraction(1, 3), Fraction(2, 7))
    w = majorization_weights(target, basis)
    assert w is not None and check_majorization(target, basis, w)


vec2 = st.tuples(
    st.builds(Fraction, st.integers(0, 8), st.integers(1, 4)),
    st.builds(Fraction, st.integers(0, 8), st.integers(1, 4)),
)


@given(v=vec2, basis=st.lists(vec2, min_size=0, max_size=5))
def test_returned_weights_always_check_out(v, basis):
    w = majorization_weights(v, basis)
    if w is not None:
        assert check_majorization(v, basis, w)


@given(v=vec2, basis=st.lists(vec2, min_size=1, max_size=5), scale=st.integers(2, 5))
def test_majorization_invariant_under_common_scaling(v, basis, scale):
    w = majorization_weights(v, basis)
    scaled_v = tuple(x * scale for x in v)
    scaled_basis = [tuple(x * scale for x in b) for b in basis]
    w2 = majorization_weights(scaled_v, scaled_basis)
    assert (w is None) == (w2 is None)
