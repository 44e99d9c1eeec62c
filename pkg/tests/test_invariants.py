import math
import random
from fractions import Fraction

import pytest
from mpmath import mp

from eulertop.invariants import (
    MARGIN_FLOOR,
    PENDULUM_LEADING,
    alpha_action,
    bnf_via_reversion,
    extract_sigma,
    log64_ratio_log2_exact,
    pendulum_compare,
    radius_analysis,
    rho_from_kappa,
)
from eulertop.normalform import euler_normal_form
from eulertop.oracle import constant_value
from eulertop.picardfuchs import LOG64_RATIO
from eulertop.series import KappaPoly, SeriesUsageError

from expected_tables import BNF_TABLE, SIGMA_TABLE

K = KappaPoly.of(0, 1)


def test_alpha_action_head():
    alpha = alpha_action(3)
    assert alpha.coefficient(1) == KappaPoly.constant(1)
    assert alpha.coefficient(2) == K * Fraction(1, 4)
    assert alpha.coefficient(3) == (K * K * 3 + 4) * Fraction(1, 16)


def test_reversion_equals_lie_normal_form():
    assert bnf_via_reversion(7) == euler_normal_form(7)


def test_reversion_fifth_coefficient():
    series = bnf_via_reversion(5)
    assert series.coefficient(5) == BNF_TABLE[5]


def test_reversion_even_coefficients_vanish_at_symmetric_top():
    series = bnf_via_reversion(7)
    assert series.coefficient(6)(Fraction(0)) == 0


def test_alpha_composed_with_normal_form_is_identity():
    from eulertop.series import PowerSeries

    alpha = alpha_action(7)
    assert alpha.compose(bnf_via_reversion(7)) == PowerSeries.identity("J", 7)


def test_singular_action_log_channel_composes_to_identity():
    from eulertop.picardfuchs import build_action_series
    from eulertop.series import PowerSeries

    composed = build_action_series(8).action_singular.compose_with_log(
        bnf_via_reversion(8)
    )
    assert composed.log_part == PowerSeries.identity("J", 7)


# ---------------------------------------------------------------------------
# the invariant
# ---------------------------------------------------------------------------


def test_sigma_matches_table():
    report = extract_sigma(7)
    for n, expected in SIGMA_TABLE.items():
        assert report.tail.coefficient(n) == expected, f"J^{n}"


def test_sigma_linear_channel():
    report = extract_sigma(3)
    assert report.linear_log.kind == LOG64_RATIO
    assert report.linear_log.factor == Fraction(1, 2)
    assert not report.tail.coefficient(0)
    assert not report.tail.coefficient(1)


def test_sigma_branches_agree():
    assert extract_sigma(7).branch_consistent


def test_sigma_order_precondition():
    with pytest.raises(SeriesUsageError):
        extract_sigma(1)


def test_sigma_parity():
    tail = extract_sigma(7).tail
    assert tail.flip_kappa() == -tail.reflect()


@pytest.mark.parametrize("kappa", [Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)])
def test_sigma_tail_negative_for_positive_kappa(kappa):
    tail = extract_sigma(7).tail
    for n in range(2, 8):
        assert tail.coefficient(n)(kappa) < 0


def test_areas_sum_to_pi():
    report = extract_sigma(2)
    rng = random.Random(20260810)
    with mp.workdps(30):
        for _ in range(20):
            rho = rng.uniform(0.1, 10.0)
            kappa = rho - 1.0 / rho
            total = constant_value(report.area_plus, kappa, 30) + constant_value(
                report.area_minus, kappa, 30
            )
            assert abs(total - mp.pi) < mp.mpf("1e-12")


# ---------------------------------------------------------------------------
# convergence experiments
# ---------------------------------------------------------------------------


def test_a_sequence_ratio_approaches_known_radius():
    report = radius_analysis(Fraction(1, 2), 60, targets=("a",))[0]
    assert abs(report.extrapolated - report.theoretical) < 5e-3
    assert not report.skipped
    assert all(r > 0 and math.isfinite(r) for r in report.ratios)


def test_symmetric_top_skips_odd_coefficients():
    report = radius_analysis(Fraction(0), 40, targets=("a",))[0]
    assert report.skipped  # odd coefficients vanish at kappa = 0
    assert report.theoretical == 0.5
    assert abs(report.extrapolated - 0.5) < 2e-2


def test_radius_rejects_small_nmax():
    with pytest.raises(SeriesUsageError):
        radius_analysis(Fraction(1, 2), 10)


def test_bnf_and_sigma_radii_exceed_action_radius():
    reports = {r.name: r for r in radius_analysis(Fraction(1, 2), 32, targets=("a", "bnf", "sigma"))}
    a_known = reports["a"].theoretical
    assert reports["bnf"].extrapolated > 1.1 * a_known
    assert reports["sigma"].extrapolated > 1.1 * a_known


def test_rho_from_kappa_inverts():
    for kappa in (-2.0, -0.5, 0.0, 0.7, 3.0):
        rho = rho_from_kappa(kappa)
        assert rho > 0
        assert abs((rho - 1 / rho) - kappa) < 1e-12


# ---------------------------------------------------------------------------
# pendulum comparison
# ---------------------------------------------------------------------------


def test_pendulum_margin_at_symmetric_top():
    row = pendulum_compare([0.0])[0]
    assert abs(row.euler_leading - math.log(4.0)) < 1e-15
    assert abs(row.margin - math.log(8.0)) < 1e-15


def test_pendulum_margin_at_kappa_two():
    row = pendulum_compare([2.0])[0]
    assert abs(row.euler_leading - 1.5 * math.log(2.0)) < 1e-15
    assert abs(row.margin - 3.5 * math.log(2.0)) < 1e-15


def test_pendulum_margin_positive_everywhere():
    grid = [-5.0 + i * 0.1 for i in range(101)]
    for row in pendulum_compare(grid):
        assert row.margin >= MARGIN_FLOOR - 1e-12
    assert PENDULUM_LEADING > max(r.euler_leading for r in pendulum_compare(grid))


def test_symmetric_top_leading_term_is_exactly_log4():
    # 64/(0+4) = 16 = 2^4, so the linear term is exactly 2 log 2 = log 4
    assert log64_ratio_log2_exact(Fraction(0)) == Fraction(2)
    assert log64_ratio_log2_exact(Fraction(1, 2)) is None
