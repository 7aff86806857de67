"""Feynman-integral pipeline: per-branch-type coefficients, degree-bounded
multivariate series, univariate collapse, generating-series assembly, and the
genus-weighted (descendant) generalization.

For a fixed branch type a with total N, the coefficient is computed per flip
signature: the product of edge factors (zero-degree factors oriented by the
signature entry, positive-degree factors symmetric, loops scalar divisor
sums) is assembled edge by edge, and the coefficient of
prod_i x_i^(N * v_i) is extracted, where v_i is the non-loop valence of
vertex i: that monomial is where the per-edge shift x^N x^N sends the
x-constant term.  Edges are multiplied in a greedy order that finishes
vertices as early as possible so their variables can be pruned to the target
exponent immediately, keeping intermediate products small.

Branch types are independent work items evaluated by pure functions; the
degree sweeps optionally fan out over a thread pool and reduce in a fixed
order, so results are identical for any thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .errors import InputError, InternalError
from .graph import (
    FeynmanGraph,
    check_branch_type,
    check_genus_function,
    first_betti,
    nonloop_valence,
    validate,
)
from .polyarith import Coeff, SparsePoly, coeff_str, parse_coeff, poly_mul, series_invert
from .propagator import (
    const_term,
    descendant_context,
    descendant_edge_term,
    descendant_loop_coefficient,
    hurwitz_context,
    loop_coefficient,
    non_const_term,
    s_series,
    x_slot,
    z_slot,
)
from .signature import signature_and_multiplicities

BranchType = tuple[int, ...]


# -- series payload ------------------------------------------------------------


@dataclass
class DegreeSeries:
    """Generating-series payload: branch-type and/or total-degree coefficients.

    Hurwitz-mode series render the edge variables with doubled exponents
    (q^(2a)); descendant-mode series render them as stored.
    """

    mode: str
    edge_count: int | None = None
    max_degree: int | None = None
    multivariate: dict[BranchType, Coeff] | None = None
    collapsed: dict[int, Coeff] | None = None

    def __post_init__(self) -> None:
        if self.mode not in ("hurwitz", "descendant"):
            raise InputError(f"unknown series mode {self.mode!r}")

    @property
    def exponent_convention(self) -> str:
        return "q^(2d)" if self.mode == "hurwitz" else "q^d"

    def to_obj(self) -> dict:
        obj: dict = {
            "mode": self.mode,
            "exponent_convention": self.exponent_convention,
        }
        if self.max_degree is not None:
            obj["max_degree"] = self.max_degree
        if self.multivariate is not None:
            obj["multivariate"] = [
                {"a": list(a), "coeff": coeff_str(c)}
                for a, c in sorted(self.multivariate.items())
            ]
        if self.collapsed is not None:
            obj["collapsed"] = [
                {"degree": d, "coeff": coeff_str(c)}
                for d, c in sorted(self.collapsed.items())
            ]
        return obj

    @classmethod
    def from_obj(cls, obj: dict) -> DegreeSeries:
        try:
            series = cls(mode=obj["mode"], max_degree=obj.get("max_degree"))
            if "multivariate" in obj:
                series.multivariate = {
                    tuple(item["a"]): parse_coeff(item["coeff"])
                    for item in obj["multivariate"]
                }
                if series.multivariate:
                    series.edge_count = len(next(iter(series.multivariate)))
            if "collapsed" in obj:
                series.collapsed = {
                    int(item["degree"]): parse_coeff(item["coeff"])
                    for item in obj["collapsed"]
                }
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed series object: {exc}") from None
        return series


def collapse_to_univariate(series: DegreeSeries) -> DegreeSeries:
    """Sum branch-type coefficients of equal total degree."""
    if series.multivariate is None:
        raise InputError("no multivariate terms to collapse")
    collapsed: dict[int, Coeff] = {}
    if series.max_degree is not None:
        collapsed = {d: 0 for d in range(1, series.max_degree + 1)}
    for a, c in series.multivariate.items():
        total = sum(a)
        collapsed[total] = collapsed.get(total, 0) + c
    return DegreeSeries(
        mode=series.mode,
        edge_count=series.edge_count,
        max_degree=series.max_degree,
        multivariate=series.multivariate,
        collapsed=collapsed,
    )


# -- evaluation plan -----------------------------------------------------------


def _edge_plan(
    g: FeynmanGraph,
) -> tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]:
    """Greedy multiplication order for non-loop edges plus prune schedule.

    Picks next the edge sharing the most already-visited vertices (ties to
    the smallest index); records which vertices see their last non-loop edge
    at each step, so their x-variables can be pinned to the extraction target
    from that multiplication on.
    """
    remaining = list(nonloop_valence(g))
    pending = list(g.nonloop_indices())
    seen: set[int] = set()
    order: list[int] = []
    finalized: list[tuple[int, ...]] = []
    while pending:
        k = max(pending, key=lambda e: (len(set(g.edges[e]) & seen), -e))
        pending.remove(k)
        u, v = g.edges[k]
        remaining[u - 1] -= 1
        remaining[v - 1] -= 1
        seen.update((u, v))
        order.append(k)
        finalized.append(
            tuple(sorted(w for w in {u, v} if remaining[w - 1] == 0))
        )
    return tuple(order), tuple(finalized)


def _zero_on_loop(g: FeynmanGraph, a: BranchType) -> bool:
    return any(a[k] == 0 for k in g.loop_indices())


# -- Hurwitz mode ----------------------------------------------------------------


def feynman_integral_branchtype(g: FeynmanGraph, a: Sequence[int]) -> int:
    """Coefficient of the branch-type monomial q^(2a) in the graph's series."""
    validate(g)
    a = check_branch_type(g, a)
    if _zero_on_loop(g, a):
        return 0
    n = g.vertex_count
    total_shift = sum(a)
    loops_scalar = 1
    for k in g.loop_indices():
        loops_scalar *= loop_coefficient(a[k])

    ctx = hurwitz_context(n)
    valences = nonloop_valence(g)
    target = ctx.exponents(
        {x_slot(i): total_shift * valences[i - 1] for i in range(1, n + 1)}
    )
    order, finalized = _edge_plan(g)
    table = signature_and_multiplicities(g, a)

    factor_cache: dict[tuple[int, int], SparsePoly] = {}

    def factor(k: int, entry: int) -> SparsePoly:
        key = (k, entry)
        cached = factor_cache.get(key)
        if cached is None:
            u, v = g.edges[k]
            if entry == -1:
                cached = const_term(ctx, u, v, total_shift)
            elif entry == 0:
                cached = const_term(ctx, v, u, total_shift)
            else:
                cached = non_const_term(ctx, u, v, None, entry, total_shift)
            factor_cache[key] = cached
        return cached

    acc = 0
    for sig, mult in table.items():
        poly = SparsePoly.one(ctx)
        pruned: dict[int, int] = {}
        for pos, k in enumerate(order):
            for w in finalized[pos]:
                pruned[x_slot(w)] = total_shift * valences[w - 1]
            poly = poly_mul(poly, factor(k, sig[k]), prune=pruned)
            if poly.is_zero():
                break
        acc += mult * poly.coefficient(target)
    return loops_scalar * acc


def _weak_compositions(total: int, parts: int) -> Iterator[BranchType]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _weak_compositions(total - head, parts - 1):
            yield (head,) + tail


def _degree_sweep(
    g: FeynmanGraph,
    max_degree: int,
    evaluate: Callable[[BranchType], Coeff],
    threads: int,
) -> dict[BranchType, Coeff]:
    work = [
        a
        for j in range(1, max_degree + 1)
        for a in _weak_compositions(j, g.edge_count)
        if not _zero_on_loop(g, a)
    ]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(evaluate, work))
    else:
        values = [evaluate(a) for a in work]
    return {a: c for a, c in zip(work, values) if c != 0}


def feynman_integral_degree(
    g: FeynmanGraph, max_degree: int, threads: int = 1
) -> DegreeSeries:
    """Multivariate series over all branch types of total degree 1..max_degree."""
    validate(g)
    terms = _degree_sweep(
        g, max_degree, lambda a: feynman_integral_branchtype(g, a), threads
    )
    return DegreeSeries(
        mode="hurwitz",
        edge_count=g.edge_count,
        max_degree=max_degree,
        multivariate=terms,
    )


def assemble_generating_series(
    catalog: Sequence[tuple[FeynmanGraph, int]],
    max_degree: int,
    threads: int = 1,
) -> DegreeSeries:
    """Sum of collapsed per-graph series weighted by 1/|Aut|."""
    genera = set()
    for g, aut in catalog:
        validate(g)
        if aut <= 0:
            raise InputError("automorphism orders must be positive")
        genera.add(first_betti(g))
    if len(genera) > 1:
        raise InputError(f"catalog mixes genera {sorted(genera)}")
    collapsed: dict[int, Coeff] = {d: Fraction(0) for d in range(1, max_degree + 1)}
    for g, aut in catalog:
        per_graph = collapse_to_univariate(
            feynman_integral_degree(g, max_degree, threads=threads)
        )
        for d, c in per_graph.collapsed.items():
            collapsed[d] += Fraction(c, aut)
    return DegreeSeries(
        mode="hurwitz", max_degree=max_degree, collapsed=collapsed
    )


# -- descendant mode ---------------------------------------------------------------


@dataclass(frozen=True)
class PsiData:
    """Vertex genera with the induced psi powers k_i = valence + 2g_i - 2."""

    genus: tuple[int, ...]
    psi_powers: tuple[int, ...]


def psi_data(g: FeynmanGraph, gf: Sequence[int]) -> PsiData:
    gf = check_genus_function(g, gf)
    powers = tuple(
        g.valence(i) + 2 * gf[i - 1] - 2 for i in range(1, g.vertex_count + 1)
    )
    if any(k < 0 for k in powers):
        bad = next(i for i, k in enumerate(powers, start=1) if k < 0)
        raise InputError(
            f"vertex {bad} has negative psi power (valence + 2g - 2 < 0)"
        )
    span = 2 * (first_betti(g) + sum(gf)) - 2
    if sum(powers) != span:
        raise InternalError("psi powers do not sum to 2*genus - 2")
    return PsiData(gf, powers)


def descendant_integral_branchtype(
    g: FeynmanGraph, gf: Sequence[int], a: Sequence[int]
) -> Fraction:
    """Branch-type coefficient with vertex-genus contributions.

    Same signature-grouped pipeline as the Hurwitz case, with every weight-w
    edge summand carrying S(w z)-factors for its endpoints, loop factors
    sum_{w|a} w S(w z)^2, a prefactor 1/S(z_i) per vertex, and a final
    extraction of z_i^(2 g_i).
    """
    validate(g)
    gf = check_genus_function(g, gf)
    psi_data(g, gf)
    a = check_branch_type(g, a)
    if _zero_on_loop(g, a):
        return Fraction(0)
    n = g.vertex_count
    total_shift = sum(a)
    z_orders = tuple(2 * gi for gi in gf)
    ctx = descendant_context(n, z_orders)

    base = SparsePoly.one(ctx)
    for i in range(1, n + 1):
        if gf[i - 1] > 0:
            inv = series_invert(s_series(1, z_orders[i - 1]))
            base = poly_mul(
                base,
                SparsePoly(
                    ctx,
                    {
                        ctx.exponents({z_slot(n, i): m}): c
                        for m, c in enumerate(inv.coeffs)
                        if c
                    },
                    validate=False,
                ),
            )
    for k in g.loop_indices():
        vertex = g.edges[k][0]
        series = descendant_loop_coefficient(a[k], z_orders[vertex - 1])
        base = poly_mul(
            base,
            SparsePoly(
                ctx,
                {
                    ctx.exponents({z_slot(n, vertex): m}): c
                    for m, c in enumerate(series.coeffs)
                    if c
                },
                validate=False,
            ),
        )

    valences = nonloop_valence(g)
    target = ctx.exponents(
        {
            **{x_slot(i): total_shift * valences[i - 1] for i in range(1, n + 1)},
            **{z_slot(n, i): z_orders[i - 1] for i in range(1, n + 1)},
        }
    )
    order, finalized = _edge_plan(g)
    table = signature_and_multiplicities(g, a)

    factor_cache: dict[tuple[int, int], SparsePoly] = {}

    def factor(k: int, entry: int) -> SparsePoly:
        key = (k, entry)
        cached = factor_cache.get(key)
        if cached is None:
            u, v = g.edges[k]
            ou, ov = z_orders[u - 1], z_orders[v - 1]
            if entry == -1:
                cached = descendant_edge_term(ctx, n, u, v, 0, total_shift, ou, ov)
            elif entry == 0:
                cached = descendant_edge_term(ctx, n, v, u, 0, total_shift, ov, ou)
            else:
                cached = descendant_edge_term(
                    ctx, n, u, v, entry, total_shift, ou, ov
                )
            factor_cache[key] = cached
        return cached

    acc = Fraction(0)
    for sig, mult in table.items():
        poly = base
        pruned: dict[int, int] = {}
        for pos, k in enumerate(order):
            for w in finalized[pos]:
                pruned[x_slot(w)] = total_shift * valences[w - 1]
            poly = poly_mul(poly, factor(k, sig[k]), prune=pruned)
            if poly.is_zero():
                break
        acc += mult * Fraction(poly.coefficient(target))
    return acc


def descendant_integral_degree(
    g: FeynmanGraph, gf: Sequence[int], max_degree: int, threads: int = 1
) -> DegreeSeries:
    """Composition sweep as in the Hurwitz case, with vertex contributions."""
    validate(g)
    gf = check_genus_function(g, gf)
    terms = _degree_sweep(
        g,
        max_degree,
        lambda a: descendant_integral_branchtype(g, gf, a),
        threads,
    )
    return DegreeSeries(
        mode="descendant",
        edge_count=g.edge_count,
        max_degree=max_degree,
        multivariate=terms,
    )
