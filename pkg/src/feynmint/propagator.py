"""Edge factors for the integral pipeline.

Every non-loop edge of weight w contributes the ratio term (x_hi/x_lo)^w;
multiplying through by x_hi^N x_lo^N (N = total branch degree) clears all
negative exponents, so the factors below are plain polynomials:

* zero-degree edge, orientation hi before lo:
      sum_{w=1..N} w * x_hi^(N+w) * x_lo^(N-w)
  (weights above N cannot reach the extraction target, so the geometric
  series is truncated there);
* edge of positive degree d:
      sum_{w | d} w * (x_hi^(N+w) x_lo^(N-w) + x_hi^(N-w) x_lo^(N+w)),
  symmetric in the two vertices, recorded at branch degree d on the edge
  variable when the context carries one;
* loop of degree a: the scalar sigma(a) = sum of divisors, zero for a = 0.

The genus-weighted variants multiply each weight-w summand by truncations of
S(w z) at the per-vertex orders, where S(z) = sinh(z/2)/(z/2), and loops
become divisor sums of S(w z)^2.

Internally all x-exponents are unsquared (w, not 2w) and edge degrees are
stored as the branch degree a; output layers double exponents where the
generating-series convention calls for q^(2a).
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .errors import InputError
from .polyarith import SparsePoly, TruncatedSeries, VarContext, series_mul


def divisors(n: int) -> tuple[int, ...]:
    if n <= 0:
        return ()
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    large = [n // d for d in reversed(small) if d * d != n]
    return tuple(small + large)


def divisor_sum(n: int, power: int = 1) -> int:
    """sigma_power(n); zero for n <= 0."""
    return sum(d**power for d in divisors(n))


# -- variable contexts --------------------------------------------------------


def hurwitz_context(n_vertices: int) -> VarContext:
    """One x-variable per vertex (slot i-1 for vertex i)."""
    return VarContext(tuple(f"x{i}" for i in range(1, n_vertices + 1)))


def descendant_context(n_vertices: int, z_orders: tuple[int, ...]) -> VarContext:
    """x-variable per vertex plus a z-variable capped at its even order."""
    if len(z_orders) != n_vertices:
        raise InputError("one z-order per vertex required")
    names = tuple(f"x{i}" for i in range(1, n_vertices + 1)) + tuple(
        f"z{i}" for i in range(1, n_vertices + 1)
    )
    caps = (None,) * n_vertices + tuple(z_orders)
    return VarContext(names, caps)


def x_slot(vertex: int) -> int:
    return vertex - 1


def z_slot(n_vertices: int, vertex: int) -> int:
    return n_vertices + vertex - 1


# -- Hurwitz-mode edge factors -------------------------------------------------


def const_term(ctx: VarContext, i: int, j: int, shift: int) -> SparsePoly:
    """Zero-degree edge numerator, vertex i in the expanded (earlier) role."""
    if i == j:
        raise InputError("loop edges have no constant-term factor")
    terms = {}
    for w in range(1, shift + 1):
        terms[ctx.exponents({x_slot(i): shift + w, x_slot(j): shift - w})] = w
    return SparsePoly(ctx, terms, validate=False)


def non_const_term(
    ctx: VarContext,
    i: int,
    j: int,
    edge_slot: int | None,
    degree: int,
    shift: int,
) -> SparsePoly:
    """Positive-degree edge numerator; symmetric in i and j.

    ``edge_slot`` names the context slot of the edge variable, or None when
    the context does not carry edge variables (the degree is then implied by
    the ambient branch type).
    """
    if i == j:
        raise InputError("loop edges use loop_coefficient")
    if degree < 1:
        raise InputError("use const_term for degree-zero edges")
    if degree > shift:
        raise InputError("edge degree cannot exceed the total branch degree")
    terms: dict = {}
    extra = {} if edge_slot is None else {edge_slot: degree}
    for w in divisors(degree):
        for hi, lo in ((i, j), (j, i)):
            exps = ctx.exponents(
                {x_slot(hi): shift + w, x_slot(lo): shift - w, **extra}
            )
            terms[exps] = terms.get(exps, 0) + w
    return SparsePoly(ctx, terms, validate=False)


def loop_coefficient(degree: int) -> int:
    """Divisor sum sigma(degree); the loop series has no constant term."""
    if degree < 0:
        raise InputError("branch degrees must be nonnegative")
    return divisor_sum(degree)


# -- genus-weighted (descendant) factors ---------------------------------------


def s_series(scale: int, order: int) -> TruncatedSeries:
    """Truncation of S(scale*z) = sum_m (scale*z)^(2m) / (4^m (2m+1)!)."""
    if scale < 1:
        raise InputError("scale must be a positive integer")
    if order < 0:
        raise InputError("order must be nonnegative")
    coeffs = [Fraction(0)] * (order + 1)
    for m in range(order // 2 + 1):
        coeffs[2 * m] = Fraction(scale ** (2 * m), 4**m * factorial(2 * m + 1))
    return TruncatedSeries("z", tuple(coeffs))


def _s_pair_poly(
    ctx: VarContext,
    n_vertices: int,
    w: int,
    i: int,
    order_i: int,
    j: int,
    order_j: int,
) -> SparsePoly:
    """S(w z_i) * S(w z_j) as a polynomial in the two z-variables."""
    si = s_series(w, order_i).coeffs
    sj = s_series(w, order_j).coeffs
    terms = {}
    for a in range(0, order_i + 1, 2):
        for b in range(0, order_j + 1, 2):
            c = si[a] * sj[b]
            if c:
                terms[
                    ctx.exponents({z_slot(n_vertices, i): a, z_slot(n_vertices, j): b})
                ] = c
    return SparsePoly(ctx, terms, validate=False)


def descendant_edge_term(
    ctx: VarContext,
    n_vertices: int,
    i: int,
    j: int,
    degree: int,
    shift: int,
    order_i: int,
    order_j: int,
) -> SparsePoly:
    """Edge numerator with each weight-w summand carrying S(w z_i) S(w z_j).

    degree 0 gives the oriented zero-degree factor (i in the earlier role);
    positive degrees give the symmetric divisor sum.
    """
    if i == j:
        raise InputError("loop edges use descendant_loop_coefficient")
    if degree == 0:
        weights = range(1, shift + 1)
        parts = {
            w: SparsePoly(
                ctx,
                {
                    ctx.exponents(
                        {x_slot(i): shift + w, x_slot(j): shift - w}
                    ): w
                },
                validate=False,
            )
            for w in weights
        }
    else:
        if degree > shift:
            raise InputError("edge degree cannot exceed the total branch degree")
        parts = {}
        for w in divisors(degree):
            terms: dict = {}
            for hi, lo in ((i, j), (j, i)):
                exps = ctx.exponents({x_slot(hi): shift + w, x_slot(lo): shift - w})
                terms[exps] = terms.get(exps, 0) + w
            parts[w] = SparsePoly(ctx, terms, validate=False)
    result = SparsePoly.zero(ctx)
    for w, xpart in parts.items():
        result = result + xpart * _s_pair_poly(
            ctx, n_vertices, w, i, order_i, j, order_j
        )
    return result


def descendant_loop_coefficient(degree: int, order: int) -> TruncatedSeries:
    """sum_{w | degree} w * S(w z)^2, truncated; the zero series for degree 0."""
    if degree < 0:
        raise InputError("branch degrees must be nonnegative")
    total = [Fraction(0)] * (order + 1)
    for w in divisors(degree):
        sw = s_series(w, order)
        sq = series_mul(sw, sw)
        for k, c in enumerate(sq.coeffs):
            total[k] += w * c
    return TruncatedSeries("z", tuple(total))
