from __future__ import annotations

from fractions import Fraction

import pytest
import sympy

from feynmint.errors import InputError
from feynmint.polyarith import TruncatedSeries
from feynmint.quasimodular import (
    basis_series,
    eisenstein,
    exact_column_rank,
    fit_quasimodular,
    monomial_basis,
    qseries_from_collapsed,
    solve_exact,
)
from feynmint.integral import DegreeSeries


def test_eisenstein_fixtures():
    assert eisenstein(2, 3).coeffs == (1, -24, -72, -96)
    assert eisenstein(4, 1).coeffs == (1, 240)
    assert eisenstein(6, 1).coeffs == (1, -504)


def test_eisenstein_against_divisor_sums():
    q = sympy.symbols("q")
    for k, scale, power in ((2, -24, 1), (4, 240, 3), (6, -504, 5)):
        ours = eisenstein(k, 8)
        for n in range(1, 9):
            sigma = sum(d**power for d in sympy.divisors(n))
            assert ours.coeffs[n] == scale * sigma


def test_eisenstein_rejects_other_weights():
    with pytest.raises(InputError):
        eisenstein(8, 4)


def test_monomial_basis():
    assert monomial_basis(2) == [(1, 0, 0)]
    assert monomial_basis(4) == [(0, 1, 0), (2, 0, 0)]
    assert monomial_basis(6) == [(0, 0, 1), (1, 1, 0), (3, 0, 0)]
    with pytest.raises(InputError):
        monomial_basis(5)
    with pytest.raises(InputError):
        monomial_basis(0)


def test_fit_recovers_basis_elements():
    fit = fit_quasimodular(eisenstein(2, 10), 2)
    assert fit.coefficients == (Fraction(1),)
    assert fit.residual_ok

    fit = fit_quasimodular(eisenstein(4, 10), 4)
    assert fit.basis == ((0, 1, 0), (2, 0, 0))
    assert fit.coefficients == (Fraction(1), Fraction(0))
    assert fit.residual_ok


def test_fit_unit_vectors_for_all_monomials_up_to_weight_8():
    for weight in (2, 4, 6, 8):
        basis = monomial_basis(weight)
        for idx, triple in enumerate(basis):
            fit = fit_quasimodular(basis_series(triple, len(basis) + 6), weight)
            expected = tuple(
                Fraction(1 if j == idx else 0) for j in range(len(basis))
            )
            assert fit.coefficients == expected
            assert fit.residual_ok


def test_basis_has_full_column_rank_through_weight_12():
    for weight in range(2, 13, 2):
        basis = monomial_basis(weight)
        order = len(basis) + 8
        columns = [basis_series(t, order) for t in basis]
        rows = [
            [columns[j].coeffs[i] for j in range(len(basis))]
            for i in range(order + 1)
        ]
        assert exact_column_rank(rows) == len(basis)


def test_extra_coefficients_do_not_change_lambda():
    series = basis_series((1, 1, 0), 14)
    short = TruncatedSeries("Q", series.coeffs[:8])
    fit_short = fit_quasimodular(short, 6)
    fit_long = fit_quasimodular(series, 6)
    assert fit_short.coefficients == fit_long.coefficients
    assert fit_short.residual_ok and fit_long.residual_ok


def test_failed_fit_reports_exact_mismatch():
    coeffs = list(basis_series((3, 0, 0), 10).coeffs)
    coeffs[-1] += 1
    fit = fit_quasimodular(TruncatedSeries("Q", tuple(coeffs)), 6)
    assert not fit.residual_ok


def test_fit_requires_enough_coefficients():
    with pytest.raises(InputError):
        fit_quasimodular(TruncatedSeries("Q", (Fraction(1), Fraction(2), Fraction(3))), 6)


def test_solver_rejects_singular_systems():
    rows = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
    with pytest.raises(InputError):
        solve_exact(rows, [Fraction(1), Fraction(2)])


def test_solver_exactness():
    rows = [
        [Fraction(1, 2), Fraction(1, 3)],
        [Fraction(1, 5), Fraction(1, 7)],
    ]
    rhs = [Fraction(13, 6), Fraction(1)]
    x = solve_exact(rows, rhs)
    for row, b in zip(rows, rhs):
        assert sum(c * v for c, v in zip(row, x)) == b


def test_qseries_from_collapsed():
    series = DegreeSeries(
        mode="hurwitz", max_degree=4, collapsed={1: 0, 2: 2, 3: 16, 4: 60}
    )
    q = qseries_from_collapsed(series)
    assert q.coeffs == (0, 0, 2, 16, 60)
    with pytest.raises(InputError):
        qseries_from_collapsed(DegreeSeries(mode="hurwitz", multivariate={}))
