"""Naive reference path: full truncated series expansion per vertex order.

For every total vertex order, every non-loop edge contributes the truncated
two-sided propagator (geometric part plus divisor-sum part in the edge
variable) and every loop the divisor-sum series; the product is expanded in
full and the coefficient of the x-constant term is read off per edge-degree
monomial.  Negative ratio exponents are avoided by shifting each edge factor
by x_order on both endpoints, so the constant term sits at
prod_i x_i^(x_order * v_i).

This path is deliberately unoptimized (no signature grouping, no pruning);
it validates the signature pipeline and serves as the benchmark baseline,
sharing nothing with it except the polynomial substrate.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

from .errors import InputError
from .graph import FeynmanGraph, nonloop_valence, validate
from .integral import DegreeSeries
from .polyarith import Coeff, SparsePoly, VarContext, poly_mul
from .propagator import divisor_sum, divisors, x_slot


@dataclass(frozen=True)
class TruncationSpec:
    """q_order bounds the total edge degree, x_order the per-factor weights.

    x_order >= q_order suffices for exact coefficients up to q_order (no
    weight above the total degree can reach the constant term).
    """

    q_order: int
    x_order: int

    def __post_init__(self) -> None:
        if self.q_order < 0 or self.x_order < 0:
            raise InputError("truncation orders must be nonnegative")


def oracle_context(n_vertices: int, n_edges: int, q_order: int) -> VarContext:
    names = tuple(f"x{i}" for i in range(1, n_vertices + 1)) + tuple(
        f"q{k}" for k in range(1, n_edges + 1)
    )
    return VarContext(
        names, group_caps=((n_vertices, n_vertices + n_edges, q_order),)
    )


def _q_slot(n_vertices: int, k: int) -> int:
    return n_vertices + k


def truncated_propagator(
    ctx: VarContext,
    n_vertices: int,
    hi: int,
    lo: int,
    k: int,
    t: TruncationSpec,
) -> SparsePoly:
    """Two-sided edge factor, shifted by x_order on both endpoints.

    hi is the vertex whose ratio is expanded as small (the earlier one in the
    ambient vertex order): the edge-degree-zero part is
    sum_{w=1..x_order} w (x_hi/x_lo)^w, and the degree-a part is the
    symmetric divisor sum, for a = 1..q_order.
    """
    if hi == lo:
        raise InputError("loops have no two-sided factor; use the loop series")
    shift = t.x_order
    terms: dict = {}
    for w in range(1, t.x_order + 1):
        exps = ctx.exponents({x_slot(hi): shift + w, x_slot(lo): shift - w})
        terms[exps] = w
    for a in range(1, t.q_order + 1):
        for w in divisors(a):
            if w > shift:
                continue  # beyond the declared x-truncation
            for up, down in ((hi, lo), (lo, hi)):
                exps = ctx.exponents(
                    {
                        x_slot(up): shift + w,
                        x_slot(down): shift - w,
                        _q_slot(n_vertices, k): a,
                    }
                )
                terms[exps] = terms.get(exps, 0) + w
    return SparsePoly(ctx, terms, validate=False)


def _loop_series(
    ctx: VarContext, n_vertices: int, k: int, q_order: int
) -> SparsePoly:
    terms = {
        ctx.exponents({_q_slot(n_vertices, k): a}): divisor_sum(a)
        for a in range(1, q_order + 1)
    }
    return SparsePoly(ctx, terms, validate=False)


def naive_integral_ordered(
    g: FeynmanGraph, omega: Sequence[int], t: TruncationSpec
) -> DegreeSeries:
    """Branch-type coefficients for one total vertex order."""
    validate(g)
    omega = tuple(omega)
    if sorted(omega) != list(range(1, g.vertex_count + 1)):
        raise InputError("omega must be a total order on all vertices")
    position = {v: p for p, v in enumerate(omega)}
    n = g.vertex_count
    ctx = oracle_context(n, g.edge_count, t.q_order)

    poly = SparsePoly.one(ctx)
    for k, (u, v) in enumerate(g.edges):
        if u == v:
            factor = _loop_series(ctx, n, k, t.q_order)
        else:
            hi, lo = (u, v) if position[u] < position[v] else (v, u)
            factor = truncated_propagator(ctx, n, hi, lo, k, t)
        poly = poly_mul(poly, factor)

    x_target = tuple(t.x_order * m for m in nonloop_valence(g))
    terms: dict[tuple[int, ...], Coeff] = {}
    for exps, coeff in poly.terms.items():
        if exps[:n] == x_target:
            terms[exps[n:]] = coeff
    return DegreeSeries(
        mode="hurwitz",
        edge_count=g.edge_count,
        max_degree=t.q_order,
        multivariate=terms,
    )


def naive_integral(g: FeynmanGraph, t: TruncationSpec) -> DegreeSeries:
    """Sum of the per-order series over all n! total vertex orders."""
    validate(g)
    total: dict[tuple[int, ...], Coeff] = {}
    for omega in permutations(range(1, g.vertex_count + 1)):
        part = naive_integral_ordered(g, omega, t)
        for a, c in part.multivariate.items():
            total[a] = total.get(a, 0) + c
    total = {a: c for a, c in total.items() if c != 0}
    return DegreeSeries(
        mode="hurwitz",
        edge_count=g.edge_count,
        max_degree=t.q_order,
        multivariate=total,
    )
