from __future__ import annotations

import pytest

from feynmint.errors import InputError
from feynmint.graph import FeynmanGraph, catalog_graph
from feynmint.integral import feynman_integral_branchtype, feynman_integral_degree
from feynmint.oracle import (
    TruncationSpec,
    naive_integral,
    naive_integral_ordered,
    oracle_context,
    truncated_propagator,
)

THETA = FeynmanGraph(2, ((1, 2), (1, 2), (1, 2)))
DUMBBELL = FeynmanGraph(2, ((1, 1), (1, 2), (2, 2)))


def ratio_coefficients(poly, n, x_order, q_exponents):
    """Coefficients by signed ratio exponent, for a 2-vertex 1-edge factor."""
    out = {}
    for m, c in poly.terms.items():
        if m[n:] == q_exponents:
            out[m[0] - x_order] = c
    return out


def test_propagator_constant_part():
    ctx = oracle_context(2, 1, 0)
    f = truncated_propagator(ctx, 2, 1, 2, 0, TruncationSpec(0, 3))
    assert ratio_coefficients(f, 2, 3, (0,)) == {1: 1, 2: 2, 3: 3}


def test_propagator_edge_degree_parts():
    ctx = oracle_context(2, 1, 2)
    f = truncated_propagator(ctx, 2, 1, 2, 0, TruncationSpec(2, 3))
    assert ratio_coefficients(f, 2, 3, (1,)) == {1: 1, -1: 1}
    assert ratio_coefficients(f, 2, 3, (2,)) == {1: 1, -1: 1, 2: 2, -2: 2}


def test_propagator_rejects_loop():
    ctx = oracle_context(2, 1, 2)
    with pytest.raises(InputError):
        truncated_propagator(ctx, 2, 1, 1, 0, TruncationSpec(2, 2))


def test_ordered_integral_theta():
    t = TruncationSpec(2, 2)
    for omega in ((1, 2), (2, 1)):
        series = naive_integral_ordered(THETA, omega, t)
        assert series.multivariate[(0, 0, 2)] == 2


def test_ordered_integral_dumbbell():
    series = naive_integral_ordered(DUMBBELL, (1, 2), TruncationSpec(2, 2))
    assert series.multivariate.get((1, 0, 1), 0) == 0


def test_ordered_integral_requires_total_order():
    with pytest.raises(InputError):
        naive_integral_ordered(THETA, (1,), TruncationSpec(1, 1))


def test_naive_integral_fixture_values():
    series = naive_integral(THETA, TruncationSpec(3, 3))
    assert series.multivariate[(0, 0, 2)] == 4
    assert series.multivariate.get((1, 1, 1), 0) == 0


def test_naive_matches_branchtype_sums():
    series = naive_integral(THETA, TruncationSpec(3, 3))
    for a, coeff in series.multivariate.items():
        assert feynman_integral_branchtype(THETA, a) == coeff


def test_order_changes_outside_zero_edges_are_irrelevant():
    g = catalog_graph("star")
    # branch type with zero degree only on the edges at vertex 2:
    # vertices 3 and 4 are not incident to any zero-degree edge
    a = (0, 0, 1, 1, 1, 1)
    t = TruncationSpec(4, 4)
    base = naive_integral_ordered(g, (1, 2, 3, 4), t).multivariate.get(a, 0)
    swapped = naive_integral_ordered(g, (1, 2, 4, 3), t).multivariate.get(a, 0)
    assert base == swapped


def test_enlarging_x_order_is_sound():
    for g in (THETA, DUMBBELL):
        base = naive_integral(g, TruncationSpec(3, 3)).multivariate
        wider = naive_integral(g, TruncationSpec(3, 5)).multivariate
        assert base == wider


def test_naive_equals_flip_on_caterpillar2():
    g = catalog_graph("caterpillar2")
    assert (
        naive_integral(g, TruncationSpec(3, 3)).multivariate
        == feynman_integral_degree(g, 3).multivariate
    )
