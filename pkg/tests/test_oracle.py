import math
import random

import pytest
from mpmath import mp

from eulertop import oracle
from eulertop.oracle import (
    DomainError,
    ParameterError,
    QuadratureError,
    action_quadrature,
    action_unscaled_quadrature,
    kappa_for_rho,
    params_from_inertia,
    period_quadrature,
    rho_for_kappa,
    separatrix_action,
    verify_series_numerics,
)

from expected_tables import (
    ORACLE_ACTION_MINUS_002,
    ORACLE_ACTION_PLUS_002,
    ORACLE_PERIOD_MINUS_002,
    ORACLE_PERIOD_PLUS_002,
    VERIFY_REGRESSION_BOUND,
)


# ---------------------------------------------------------------------------
# parameters
# ---------------------------------------------------------------------------


def test_params_from_ordered_triple():
    p = params_from_inertia(1.0, 2.0, 3.0, 1.0)
    assert abs(p.rho - 1 / math.sqrt(3.0)) < 1e-15
    assert abs(p.kappa + 2 / math.sqrt(3.0)) < 1e-15
    assert abs(p.lam - math.sqrt(1.0 / 12.0)) < 1e-15


def test_params_rejects_degenerate_and_disordered():
    with pytest.raises(ParameterError, match="ordering"):
        params_from_inertia(1.0, 1.0, 2.0, 1.0)
    with pytest.raises(ParameterError, match="ordering"):
        params_from_inertia(2.0, 1.0, 3.0, 1.0)
    with pytest.raises(ParameterError, match="triangle"):
        params_from_inertia(1.0, 2.0, 3.5, 1.0)
    with pytest.raises(ParameterError, match="positive"):
        params_from_inertia(-1.0, 2.0, 2.5, 1.0)


def test_rho_kappa_maps_invert():
    assert rho_for_kappa(0.0) == 1.0
    assert kappa_for_rho(1.0) == 0.0
    assert abs(kappa_for_rho(rho_for_kappa(0.37)) - 0.37) < 1e-14


# ---------------------------------------------------------------------------
# quadrature cross-checks (values frozen from a 75-digit two-scheme run)
# ---------------------------------------------------------------------------


def _close(value, frozen, bound="1e-45"):
    return abs(value - mp.mpf(frozen)) < mp.mpf(bound)


def test_action_quadrature_two_schemes_agree_with_frozen_values():
    for h, frozen in ((0.02, ORACLE_ACTION_PLUS_002), (-0.02, ORACLE_ACTION_MINUS_002)):
        gauss = action_quadrature(0.5, h, tol=1e-40, dps=60, scheme="gauss")
        ts = action_quadrature(0.5, h, tol=1e-40, dps=60, scheme="tanh-sinh")
        with mp.workdps(60):
            assert _close(gauss.value, frozen)
            assert _close(ts.value, frozen)
            assert abs(gauss.value - ts.value) < mp.mpf("1e-55")
        assert gauss.evaluations > 0 and ts.evaluations > 0


def test_period_quadrature_two_schemes_agree_with_frozen_values():
    for h, frozen in ((0.02, ORACLE_PERIOD_PLUS_002), (-0.02, ORACLE_PERIOD_MINUS_002)):
        ts = period_quadrature(0.5, h, tol=1e-40, dps=60, scheme="tanh-sinh")
        gauss = period_quadrature(0.5, h, tol=1e-40, dps=60, scheme="gauss")
        with mp.workdps(60):
            assert _close(ts.value, frozen)
            assert _close(gauss.value, frozen)


def test_action_approaches_separatrix_limit():
    with mp.workdps(50):
        limit = separatrix_action(0.5, "plus", 50)
        near = action_quadrature(0.5, 1e-12, tol=1e-20, dps=50).value
        assert abs(near - limit) < mp.mpf("1e-10")  # O(h log h) gap


def test_symmetric_top_side_symmetry():
    with mp.workdps(40):
        plus = action_quadrature(0.0, 1e-6, tol=1e-20, dps=40).value
        minus = action_quadrature(0.0, -1e-6, tol=1e-20, dps=40).value
        assert abs(plus - minus) < mp.mpf("1e-25")
        assert abs(plus + minus - mp.mpf(1) / 2) < mp.mpf("1e-4")  # O(h log h)


def test_period_asymptotic_constant():
    with mp.workdps(50):
        const = mp.log(64 / (mp.mpf(1) / 4 + 4)) / 2
        tp = period_quadrature(0.5, 1e-5, tol=1e-12, dps=50).value
        tm = period_quadrature(0.5, -1e-5, tol=1e-12, dps=50).value
        assert abs(tp - mp.log(mp.mpf("1e-5")) + const) < 1e-3
        assert abs(tm + mp.log(mp.mpf("1e-5")) - const) < 1e-3


@pytest.mark.parametrize("h", [0.02, -0.02])
def test_period_is_derivative_of_action(h):
    with mp.workdps(50):
        step = mp.mpf("1e-5")
        hq = mp.mpf(h)
        up = action_quadrature(0.5, hq + step, tol=1e-20, dps=50).value
        down = action_quadrature(0.5, hq - step, tol=1e-20, dps=50).value
        period = period_quadrature(0.5, h, tol=1e-20, dps=50).value
        assert abs(2 * mp.pi * (up - down) / (2 * step) - period) < 1e-6


def test_error_estimates_are_honest():
    # tightening the tolerance (and giving the precision to honour it) must
    # never move the value by more than the earlier estimate
    for scheme in ("gauss", "tanh-sinh"):
        for h in (0.01, -0.01):
            first = action_quadrature(0.5, h, tol=1e-8, dps=15, scheme=scheme)
            second = action_quadrature(0.5, h, tol=5e-9, dps=21, scheme=scheme)
            assert abs(first.value - second.value) <= first.error_estimate


def test_unreachable_tolerance_raises():
    with pytest.raises(QuadratureError) as info:
        action_quadrature(0.5, 0.01, tol=1e-60, dps=20)
    assert info.value.estimate > 0


def test_domain_errors():
    with pytest.raises(DomainError):
        action_quadrature(0.5, 0.0)
    with pytest.raises(DomainError):
        action_quadrature(0.5, 5.0)
    with pytest.raises(DomainError):
        period_quadrature(0.5, -5.0)


# ---------------------------------------------------------------------------
# scaling coherence with the dimension-carrying form
# ---------------------------------------------------------------------------


def _random_params(rng):
    t1 = rng.uniform(0.5, 2.0)
    t2 = t1 + rng.uniform(0.1, 1.0)
    t3 = t2 + rng.uniform(0.1, min(1.0, t1 - 0.05))  # keeps t3 < t1 + t2
    return params_from_inertia(t1, t2, t3, rng.uniform(0.5, 2.0))


def test_unscaled_action_matches_scaled():
    rng = random.Random(1729)
    with mp.workdps(40):
        for _ in range(10):
            p = _random_params(rng)
            h_max = 0.4 * min(p.rho, 1 / p.rho) / 2
            for h in (0.6 * h_max, -0.6 * h_max):
                h_sans = h * p.lam * p.ell + 0.5 * p.ell**2 / p.theta2
                unscaled = action_unscaled_quadrature(p, h_sans, tol=1e-20, dps=40)
                scaled = action_quadrature(p.kappa, h, tol=1e-20, dps=40)
                assert abs(unscaled.value - 2 * p.ell * scaled.value) < mp.mpf("1e-10")


def test_root_correspondence():
    # the affine map z -> theta2^{-1} + (lam/ell) z sends (-rho, 0, 1/rho)
    # to the inverse moments (theta3^{-1}, theta2^{-1}, theta1^{-1})
    p = params_from_inertia(1.0, 1.7, 2.2, 1.3)
    scale = p.lam / p.ell
    assert abs(1 / p.theta2 + scale * (-p.rho) - 1 / p.theta3) < 1e-14
    assert abs(1 / p.theta2 + scale * (1 / p.rho) - 1 / p.theta1) < 1e-14


# ---------------------------------------------------------------------------
# series against quadrature
# ---------------------------------------------------------------------------


def test_verify_series_against_quadrature():
    report = verify_series_numerics(
        0.5, [0.005, -0.005, 0.02, -0.02, 0.0], order=30, tol=1e-9, dps=50
    )
    assert report.passed
    assert report.max_deviation < mp.mpf(str(VERIFY_REGRESSION_BOUND))
    assert report.area_sum_deviation < mp.mpf("1e-12")
    assert report.side_sum_deviation < mp.mpf("1e-12")
    zero_rows = [r for r in report.rows if r.h == 0.0]
    assert {r.side for r in zero_rows} == {"plus", "minus"}
    with mp.workdps(50):
        for r in zero_rows:
            assert abs(r.quadrature_value - separatrix_action(0.5, r.side, 50)) < mp.mpf("1e-45")


def test_verify_deviation_shrinks_with_order():
    lo = verify_series_numerics(0.5, [0.02], order=18, tol=1.0, dps=50)
    hi = verify_series_numerics(0.5, [0.02], order=28, tol=1.0, dps=50)
    assert hi.max_deviation <= lo.max_deviation


def test_verify_rejects_samples_outside_disc():
    with pytest.raises(DomainError, match="radius"):
        verify_series_numerics(0.5, [0.5], order=10)
