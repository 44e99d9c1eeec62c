from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from eulertop.picardfuchs import (
    assemble_beta_actions,
    build_action_series,
    derive_pf_coefficients,
    frobenius_a,
    frobenius_a_at,
    frobenius_b,
    frobenius_b_at,
    harmonic_numbers,
    odd_harmonic_numbers,
    pf_residual,
)
from eulertop.series import (
    KP_ONE,
    KP_ZERO,
    KappaPoly,
    LogSeries,
    PowerSeries,
    SeriesUsageError,
)

from expected_tables import A_TABLE, B_TABLE

K = KappaPoly.of(0, 1)


# ---------------------------------------------------------------------------
# the ODE coefficients
# ---------------------------------------------------------------------------


def test_pf_coefficients_match_known_forms():
    pf = derive_pf_coefficients()
    assert pf.c0.is_zero()
    assert pf.c1 == PowerSeries.from_coeffs("h", (K * Fraction(1, 2), 3))
    assert pf.c2 == PowerSeries.from_coeffs("h", (-1, K * 4, 12))
    assert pf.c3 == PowerSeries.from_coeffs("h", (0, -1, K * 2, 4))


def test_c3_is_half_w_squared_at_2h():
    # w(z)^2 = z^3 + kappa z^2 - z evaluated at z = 2h, halved
    w2 = [KP_ZERO, -KP_ONE, K, KP_ONE]
    coeffs = [c * Fraction(2**n, 2) for n, c in enumerate(w2)]
    assert derive_pf_coefficients().c3 == PowerSeries.from_coeffs("h", coeffs)


# ---------------------------------------------------------------------------
# Frobenius tables
# ---------------------------------------------------------------------------


def test_a_table_matches_known_values():
    a = frobenius_a(5)
    assert a[0] == KP_ONE
    for n, expected in A_TABLE.items():
        assert a[n] == expected, f"a_{n}"


def test_b_table_matches_known_values():
    b = frobenius_b(5)
    assert b[0] == KP_ZERO
    for n, expected in B_TABLE.items():
        assert b[n] == expected, f"b_{n}"


def test_a3_vanishes_at_symmetric_top():
    assert frobenius_a(3)[3](Fraction(0)) == 0


def test_recursion_equals_closed_form():
    assert frobenius_a(25, "recursion") == frobenius_a(25, "closed_form")
    assert frobenius_b(25, "recursion") == frobenius_b(25, "closed_form")


def test_numeric_tables_match_symbolic():
    kappa = Fraction(3, 7)
    assert [p(kappa) for p in frobenius_a(12)] == frobenius_a_at(kappa, 12)
    assert [p(kappa) for p in frobenius_b(12)] == frobenius_b_at(kappa, 12)


def test_first_log_coefficient_comes_from_harmonic_factor():
    # f_{1,0} = 2 O_1 + 2 O_1 - 2 H_1 = 2, so b_1 = a_1 * 2 = kappa
    H, O = harmonic_numbers(1), odd_harmonic_numbers(1)
    f10 = 2 * O[1] + 2 * O[1] - 2 * H[1]
    assert f10 == 2
    assert frobenius_b(1)[1] == frobenius_a(1)[1] * f10


def test_negative_order_rejected():
    with pytest.raises(SeriesUsageError):
        frobenius_a(-1)
    with pytest.raises(SeriesUsageError):
        frobenius_b(-2)


def test_degree_and_parity():
    a, b = frobenius_a(30), frobenius_b(30)
    for n in range(1, 31):
        assert a[n].degree == n
        assert b[n].degree == n
        assert a[n].flip_kappa() == (a[n] if n % 2 == 0 else -a[n])
        assert b[n].flip_kappa() == (b[n] if n % 2 == 0 else -b[n])


def test_a_coefficients_positive():
    for n, poly in enumerate(frobenius_a(60)):
        for m, c in enumerate(poly.coeffs):
            if (n - m) % 2 == 0:
                assert c > 0, f"a_{n} coefficient of kappa^{m}"
            else:
                assert c == 0


# ---------------------------------------------------------------------------
# action series
# ---------------------------------------------------------------------------


def test_action_series_normalizations():
    bundle = build_action_series(8)
    assert bundle.period_regular.coefficient(0) == KP_ONE
    act = bundle.action_regular
    assert act.coefficient(0) == KP_ZERO
    assert act.coefficient(1) == KP_ONE
    assert act.coefficient(2) == K * Fraction(1, 4)
    assert act.coefficient(3) == (K * K * 3 + 4) * Fraction(1, 16)


def test_singular_log_part_equals_regular_solution():
    bundle = build_action_series(8)
    assert bundle.period_singular.log_part == bundle.period_regular
    assert bundle.action_singular.log_part == bundle.action_regular


def test_singular_action_first_regular_coefficient():
    # (b_0 - a_0) h = -h in the 2 pi scaled channel
    bundle = build_action_series(8)
    assert bundle.action_singular.regular_part.coefficient(1) == -KP_ONE


def test_period_is_derivative_of_action():
    bundle = build_action_series(10)
    assert bundle.action_regular.differentiate() == bundle.period_regular


# ---------------------------------------------------------------------------
# residuals
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "attr,which",
    [
        ("period_regular", "period"),
        ("period_singular", "period"),
        ("action_regular", "action"),
        ("action_singular", "action"),
    ],
)
def test_basis_solutions_satisfy_the_equation(attr, which):
    bundle = build_action_series(14)
    residual = pf_residual(getattr(bundle, attr), which)
    assert residual.cutoff >= 10
    assert residual.is_zero


def test_constant_solves_action_equation():
    const = PowerSeries.from_coeffs("h", (7,)).pad(8)
    assert pf_residual(const, "action").is_zero


def test_unknown_equation_rejected():
    with pytest.raises(SeriesUsageError):
        pf_residual(build_action_series(6).period_regular, "poincare")


@given(
    st.fractions(min_value=-3, max_value=3, max_denominator=6),
    st.fractions(min_value=-3, max_value=3, max_denominator=6),
    st.fractions(min_value=-3, max_value=3, max_denominator=6),
)
def test_residual_is_linear(k1, k2, k3):
    bundle = build_action_series(10)
    combo = LogSeries(
        bundle.action_regular * k2,
        bundle.action_regular * k1
        + bundle.action_singular.regular_part * k2
        + PowerSeries.from_coeffs("h", (k3,)).pad(bundle.action_regular.order),
    )
    assert pf_residual(combo, "action").is_zero


# ---------------------------------------------------------------------------
# separatrix-side combinations
# ---------------------------------------------------------------------------


def test_beta_action_structure():
    plus, minus = assemble_beta_actions(6)
    assert (plus.k2, minus.k2) == (1, -1)
    assert plus.k1.factor == Fraction(-1, 2)
    assert minus.k1.factor == Fraction(1, 2)
    assert plus.k1.kind == minus.k1.kind
    assert plus.k3.kind != minus.k3.kind
    assert plus.area.factor == minus.area.factor == 2
