"""Exact sparse multivariate polynomials and truncated univariate power series.

A polynomial is a dictionary mapping exponent tuples to exact coefficients
(Python ``int`` or ``fractions.Fraction``), so all arithmetic is exact at any
magnitude and equal polynomials have identical term maps.  A
:class:`VarContext` fixes the variable slots shared by a family of
polynomials; combining polynomials over different contexts is an error.

Two truncation mechanisms live on the context because they describe the ring,
not an individual operation:

* per-variable caps: any term whose exponent in a capped variable exceeds the
  cap is discarded (used for the per-vertex genus variables, which are only
  ever needed up to a fixed even order);
* group caps: the total degree over a contiguous slot range is bounded (used
  to truncate products of edge series at a maximum total degree).

:func:`poly_mul` additionally takes a *prune* set of (variable, target
exponent) pairs: product terms whose exponent in a pruned variable differs
from the target are dropped.  This is sound only when no later factor
involves that variable, which the caller must guarantee.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import ContextMismatchError, InputError

Coeff = Union[int, Fraction]
Exponents = tuple[int, ...]


def coeff_str(value: Coeff) -> str:
    """Exact string form: plain digits for integers, ``p/q`` otherwise."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return str(value)


def parse_coeff(text: str) -> Coeff:
    """Inverse of :func:`coeff_str`; returns int when the value is integral."""
    frac = Fraction(text)
    if frac.denominator == 1:
        return int(frac)
    return frac


@dataclass(frozen=True)
class VarContext:
    """Variable slots (by name) plus optional truncation caps.

    ``caps[i]`` bounds the exponent of slot ``i`` (``None`` = unbounded).
    Each ``(start, stop, cap)`` in ``group_caps`` bounds the total degree of
    slots ``start:stop``.
    """

    names: tuple[str, ...]
    caps: tuple[int | None, ...] | None = None
    group_caps: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.caps is not None and len(self.caps) != len(self.names):
            raise InputError("caps length must match variable count")
        for start, stop, cap in self.group_caps:
            if not (0 <= start <= stop <= len(self.names)) or cap < 0:
                raise InputError(f"bad group cap ({start}, {stop}, {cap})")
        cap_items = ()
        if self.caps is not None:
            cap_items = tuple(
                (i, c) for i, c in enumerate(self.caps) if c is not None
            )
        object.__setattr__(self, "_cap_items", cap_items)

    @property
    def nvars(self) -> int:
        return len(self.names)

    def exponents(self, assignments: Mapping[int, int]) -> Exponents:
        """Build an exponent tuple from a slot -> exponent mapping."""
        exps = [0] * len(self.names)
        for slot, exp in assignments.items():
            if not 0 <= slot < len(self.names):
                raise InputError(f"variable slot {slot} out of range")
            if exp < 0:
                raise InputError("exponents must be nonnegative")
            exps[slot] = exp
        return tuple(exps)

    def _admits(self, exps: Exponents) -> bool:
        for i, cap in self._cap_items:  # type: ignore[attr-defined]
            if exps[i] > cap:
                return False
        for start, stop, cap in self.group_caps:
            if sum(exps[start:stop]) > cap:
                return False
        return True


class SparsePoly:
    """Immutable sparse polynomial in canonical form (no zero terms)."""

    __slots__ = ("ctx", "terms")

    def __init__(
        self,
        ctx: VarContext,
        terms: Mapping[Exponents, Coeff] | None = None,
        *,
        validate: bool = True,
    ) -> None:
        self.ctx = ctx
        if terms is None:
            self.terms: dict[Exponents, Coeff] = {}
        elif validate:
            nvars = ctx.nvars
            clean: dict[Exponents, Coeff] = {}
            for exps, coeff in terms.items():
                exps = tuple(exps)
                if len(exps) != nvars:
                    raise InputError(
                        f"monomial has {len(exps)} slots, context has {nvars}"
                    )
                if any(e < 0 for e in exps):
                    raise InputError("exponents must be nonnegative")
                if coeff != 0 and ctx._admits(exps):  # type: ignore[attr-defined]
                    clean[exps] = clean.get(exps, 0) + coeff
            self.terms = {m: c for m, c in clean.items() if c != 0}
        else:
            self.terms = dict(terms)

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, ctx: VarContext) -> SparsePoly:
        return cls(ctx, None)

    @classmethod
    def constant(cls, ctx: VarContext, value: Coeff) -> SparsePoly:
        if value == 0:
            return cls(ctx, None)
        return cls(ctx, {(0,) * ctx.nvars: value}, validate=False)

    @classmethod
    def one(cls, ctx: VarContext) -> SparsePoly:
        return cls.constant(ctx, 1)

    @classmethod
    def from_monomial(
        cls, ctx: VarContext, assignments: Mapping[int, int], coeff: Coeff
    ) -> SparsePoly:
        return cls(ctx, {ctx.exponents(assignments): coeff})

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exps: Sequence[int]) -> Coeff:
        exps = tuple(exps)
        if len(exps) != self.ctx.nvars:
            raise ContextMismatchError(
                f"monomial has {len(exps)} slots, context has {self.ctx.nvars}"
            )
        return self.terms.get(exps, 0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __len__(self) -> int:
        return len(self.terms)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: SparsePoly) -> SparsePoly:
        _require_same_ctx(self, other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s == 0:
                out.pop(m, None)
            else:
                out[m] = s
        return SparsePoly(self.ctx, out, validate=False)

    def __neg__(self) -> SparsePoly:
        return SparsePoly(
            self.ctx, {m: -c for m, c in self.terms.items()}, validate=False
        )

    def __sub__(self, other: SparsePoly) -> SparsePoly:
        return self + (-other)

    def __mul__(self, other: object) -> SparsePoly:
        if isinstance(other, SparsePoly):
            return poly_mul(self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def scale(self, factor: Coeff) -> SparsePoly:
        if factor == 0:
            return SparsePoly.zero(self.ctx)
        return SparsePoly(
            self.ctx, {m: c * factor for m, c in self.terms.items()}, validate=False
        )

    # -- presentation --------------------------------------------------------

    def to_obj(self) -> list[dict]:
        """Deterministic serialization: lexicographic by exponents."""
        return [
            {"exponents": list(m), "coeff": coeff_str(c)}
            for m, c in sorted(self.terms.items())
        ]

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            factors = [coeff_str(c)]
            factors += [
                f"{self.ctx.names[i]}^{e}" if e > 1 else self.ctx.names[i]
                for i, e in enumerate(m)
                if e > 0
            ]
            parts.append("*".join(factors))
        return " + ".join(parts)


def _require_same_ctx(f: SparsePoly, g: SparsePoly) -> None:
    if f.ctx != g.ctx:
        raise ContextMismatchError("polynomials built over different contexts")


_PACK_BITS = 16
_PACK_MASK = (1 << _PACK_BITS) - 1
_PACK_LIMIT = 1 << (_PACK_BITS - 1)


def _pack_terms(
    terms: Mapping[Exponents, Coeff],
    ctx: VarContext,
) -> list[tuple[int, Coeff]]:
    """Encode each exponent tuple as one integer, 16 bits per slot.

    Group-capped slot ranges get an extra virtual slot holding their total
    degree; packing is linear, so packed monomials multiply by integer
    addition and every slot (real or virtual) can be read back with a shift
    and mask.  Factor exponents stay below 2^15, so fields cannot carry.
    """
    nvars = ctx.nvars
    groups = ctx.group_caps
    packed = []
    for m, c in terms.items():
        acc = 0
        for i, e in enumerate(m):
            if e >= _PACK_LIMIT:
                raise InputError(f"exponent {e} exceeds the packing limit")
            acc |= e << (_PACK_BITS * i)
        for gi, (start, stop, _) in enumerate(groups):
            acc |= sum(m[start:stop]) << (_PACK_BITS * (nvars + gi))
        packed.append((acc, c))
    return packed


def poly_mul(
    f: SparsePoly,
    g: SparsePoly,
    prune: Iterable[tuple[int, int]] | Mapping[int, int] | None = None,
) -> SparsePoly:
    """Product f*g, honoring context caps and the optional prune targets.

    Pruning drops any product term whose exponent in a pruned variable
    differs from its target; sound only when no later factor involves that
    variable.
    """
    _require_same_ctx(f, g)
    ctx = f.ctx
    nvars = ctx.nvars
    if isinstance(prune, Mapping):
        prune_pairs: tuple[tuple[int, int], ...] = tuple(prune.items())
    elif prune is not None:
        prune_pairs = tuple(prune)
    else:
        prune_pairs = ()
    for i, t in prune_pairs:
        if not 0 <= i < nvars or t < 0:
            raise InputError(f"bad prune target ({i}, {t})")

    prune_checks = tuple((_PACK_BITS * i, t) for i, t in prune_pairs)
    cap_checks = tuple(
        (_PACK_BITS * i, c)
        for i, c in ctx._cap_items  # type: ignore[attr-defined]
    )
    group_checks = tuple(
        (_PACK_BITS * (nvars + gi), cap)
        for gi, (_, _, cap) in enumerate(ctx.group_caps)
    )
    checks = [("eq", s, v) for s, v in prune_checks]
    checks += [("le", s, v) for s, v in cap_checks + group_checks]

    a = _pack_terms(f.terms, ctx)
    b = _pack_terms(g.terms, ctx)
    if len(a) < len(b):
        a, b = b, a
    mask = _PACK_MASK
    out: dict[int, Coeff] = {}
    get = out.get
    for pb, cb in b:
        if checks:
            for pa, ca in a:
                p = pa + pb
                ok = True
                for kind, shift, bound in checks:
                    field = (p >> shift) & mask
                    if field != bound if kind == "eq" else field > bound:
                        ok = False
                        break
                if not ok:
                    continue
                prev = get(p)
                out[p] = ca * cb if prev is None else prev + ca * cb
        else:
            for pa, ca in a:
                p = pa + pb
                prev = get(p)
                out[p] = ca * cb if prev is None else prev + ca * cb

    result: dict[Exponents, Coeff] = {}
    for p, c in out.items():
        if c == 0:
            continue
        result[
            tuple((p >> (_PACK_BITS * i)) & mask for i in range(nvars))
        ] = c
    return SparsePoly(ctx, result, validate=False)


def coefficient_of_term(f: SparsePoly, exps: Sequence[int]) -> Coeff:
    """Coefficient of the given monomial in f (zero if absent)."""
    return f.coefficient(exps)


# -- truncated univariate power series -------------------------------------


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series in one tagged variable, truncated at a fixed order.

    ``coeffs[k]`` is the exact rational coefficient of the k-th power;
    arithmetic discards all terms of degree above the order.
    """

    tag: str
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise InputError("a truncated series needs at least the constant term")
        object.__setattr__(
            self, "coeffs", tuple(Fraction(c) for c in self.coeffs)
        )

    @classmethod
    def from_coeffs(cls, tag: str, coeffs: Sequence[Coeff]) -> TruncatedSeries:
        return cls(tag, tuple(Fraction(c) for c in coeffs))

    @classmethod
    def constant(cls, tag: str, value: Coeff, order: int) -> TruncatedSeries:
        coeffs = [Fraction(0)] * (order + 1)
        coeffs[0] = Fraction(value)
        return cls(tag, tuple(coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        _require_same_tag(self, other)
        order = min(self.order, other.order)
        return TruncatedSeries(
            self.tag,
            tuple(self.coeffs[k] + other.coeffs[k] for k in range(order + 1)),
        )

    def __repr__(self) -> str:
        parts = [
            f"{coeff_str(c)}*{self.tag}^{k}" for k, c in enumerate(self.coeffs) if c
        ]
        return " + ".join(parts) if parts else "0"


def _require_same_tag(a: TruncatedSeries, b: TruncatedSeries) -> None:
    if a.tag != b.tag:
        raise ContextMismatchError(
            f"series tags differ: {a.tag!r} vs {b.tag!r}"
        )


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at min(a.order, b.order)."""
    _require_same_tag(a, b)
    order = min(a.order, b.order)
    coeffs = [Fraction(0)] * (order + 1)
    for i, ca in enumerate(a.coeffs[: order + 1]):
        if not ca:
            continue
        for j in range(order + 1 - i):
            cb = b.coeffs[j]
            if cb:
                coeffs[i + j] += ca * cb
    return TruncatedSeries(a.tag, tuple(coeffs))


def series_invert(a: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse up to the truncation order.

    Requires a nonzero constant coefficient.
    """
    if a.coeffs[0] == 0:
        raise InputError("cannot invert a series with zero constant term")
    inv0 = Fraction(1) / a.coeffs[0]
    out = [inv0]
    for k in range(1, a.order + 1):
        acc = Fraction(0)
        for i in range(1, k + 1):
            if a.coeffs[i]:
                acc += a.coeffs[i] * out[k - i]
        out.append(-inv0 * acc)
    return TruncatedSeries(a.tag, tuple(out))
