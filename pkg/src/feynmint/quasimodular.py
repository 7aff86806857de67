"""Express a generating series as a fixed-weight polynomial in Eisenstein
series.

The ring of quasimodular forms is generated by E2, E4, E6 with weights 2, 4,
6; a weight-W fit solves exactly for the coefficients of all monomials
E2^a E4^b E6^c with 2a + 4b + 6c = W against the first |basis| series
coefficients and then verifies every remaining coefficient.  No tolerances:
residuals are exact equalities or exact failures.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from .errors import InputError
from .integral import DegreeSeries
from .polyarith import TruncatedSeries, coeff_str, series_mul
from .propagator import divisor_sum

Q_TAG = "Q"

_EISENSTEIN = {2: (1, -24), 4: (3, 240), 6: (5, -504)}


def eisenstein(k: int, order: int) -> TruncatedSeries:
    """E_k truncated at the given order (k in {2, 4, 6})."""
    if k not in _EISENSTEIN:
        raise InputError(f"unsupported Eisenstein weight {k}; use 2, 4 or 6")
    if order < 0:
        raise InputError("order must be nonnegative")
    power, scale = _EISENSTEIN[k]
    coeffs = [Fraction(1)] + [
        Fraction(scale * divisor_sum(n, power)) for n in range(1, order + 1)
    ]
    return TruncatedSeries(Q_TAG, tuple(coeffs))


def monomial_basis(weight: int) -> list[tuple[int, int, int]]:
    """All (a, b, c) with 2a + 4b + 6c = weight, lexicographically ordered."""
    if weight < 2 or weight % 2 != 0:
        raise InputError("weight must be a positive even integer")
    basis = []
    for a in range(weight // 2 + 1):
        for b in range((weight - 2 * a) // 4 + 1):
            rest = weight - 2 * a - 4 * b
            if rest % 6 == 0:
                basis.append((a, b, rest // 6))
    basis.sort()
    return basis


def basis_series(triple: tuple[int, int, int], order: int) -> TruncatedSeries:
    """E2^a E4^b E6^c truncated at the given order."""
    result = TruncatedSeries.constant(Q_TAG, 1, order)
    for k, exponent in zip((2, 4, 6), triple):
        if exponent:
            e = eisenstein(k, order)
            for _ in range(exponent):
                result = series_mul(result, e)
    return result


@dataclass(frozen=True)
class QuasimodularFit:
    weight: int
    basis: tuple[tuple[int, int, int], ...]
    coefficients: tuple[Fraction, ...]
    verified_through: int
    residual_ok: bool

    def to_obj(self) -> dict:
        return {
            "weight": self.weight,
            "basis": [list(t) for t in self.basis],
            "lambda": [coeff_str(c) for c in self.coefficients],
            "verified_through": self.verified_through,
            "residual_ok": self.residual_ok,
        }


def solve_exact(
    rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> list[Fraction]:
    """Solve a square system exactly via fraction-free (Bareiss) elimination."""
    m = len(rows)
    if any(len(row) != m for row in rows) or len(rhs) != m:
        raise InputError("system must be square")
    aug: list[list[int]] = []
    for row, b in zip(rows, rhs):
        entries = [Fraction(x) for x in row] + [Fraction(b)]
        denom = lcm(*(e.denominator for e in entries))
        aug.append([int(e * denom) for e in entries])

    prev = 1
    for col in range(m):
        pivot = next((r for r in range(col, m) if aug[r][col] != 0), None)
        if pivot is None:
            raise InputError("singular fit system: basis rows are dependent")
        if pivot != col:
            aug[col], aug[pivot] = aug[pivot], aug[col]
        for r in range(col + 1, m):
            for c in range(col + 1, m + 1):
                aug[r][c] = (aug[r][c] * aug[col][col] - aug[r][col] * aug[col][c]) // prev
            aug[r][col] = 0
        prev = aug[col][col]

    solution = [Fraction(0)] * m
    for i in range(m - 1, -1, -1):
        acc = Fraction(aug[i][m])
        for j in range(i + 1, m):
            acc -= aug[i][j] * solution[j]
        solution[i] = acc / aug[i][i]
    return solution


def exact_column_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Column rank by exact Gaussian elimination."""
    work = [[Fraction(x) for x in row] for row in rows]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    row = 0
    for col in range(ncols):
        pivot = next((r for r in range(row, len(work)) if work[r][col] != 0), None)
        if pivot is None:
            continue
        work[row], work[pivot] = work[pivot], work[row]
        inv = 1 / work[row][col]
        for r in range(row + 1, len(work)):
            if work[r][col]:
                factor = work[r][col] * inv
                for c in range(col, ncols):
                    work[r][c] -= factor * work[row][c]
        rank += 1
        row += 1
        if row == len(work):
            break
    return rank


def fit_quasimodular(series: TruncatedSeries, weight: int) -> QuasimodularFit:
    """Solve on the first |basis| coefficients, verify all remaining ones.

    residual_ok is True iff every held-out coefficient matches exactly.
    """
    if series.tag != Q_TAG:
        raise InputError(f"fit expects a series in {Q_TAG!r}, got {series.tag!r}")
    basis = monomial_basis(weight)
    m = len(basis)
    if series.order + 1 < m + 1:
        raise InputError(
            f"need at least {m + 1} coefficients for a weight-{weight} fit, "
            f"got {series.order + 1}"
        )
    columns = [basis_series(t, series.order) for t in basis]
    rows = [[columns[j].coeffs[i] for j in range(m)] for i in range(m)]
    lam = solve_exact(rows, series.coeffs[:m])
    residual_ok = True
    for i in range(m, series.order + 1):
        predicted = sum(
            (lam[j] * columns[j].coeffs[i] for j in range(m)), Fraction(0)
        )
        if predicted != series.coeffs[i]:
            residual_ok = False
            break
    return QuasimodularFit(
        weight=weight,
        basis=tuple(basis),
        coefficients=tuple(lam),
        verified_through=series.order,
        residual_ok=residual_ok,
    )


def qseries_from_collapsed(series: DegreeSeries) -> TruncatedSeries:
    """Collapsed generating series as a series in Q (= q^2 in Hurwitz mode)."""
    if series.collapsed is None:
        raise InputError("series has no collapsed part; collapse it first")
    order = series.max_degree
    if order is None:
        if not series.collapsed:
            raise InputError("empty series with unknown degree bound")
        order = max(series.collapsed)
    coeffs = [Fraction(series.collapsed.get(d, 0)) for d in range(order + 1)]
    return TruncatedSeries(Q_TAG, tuple(coeffs))
