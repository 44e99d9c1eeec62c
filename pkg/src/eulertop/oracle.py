"""Independent numeric evaluation of the action and period integrals.

Everything symbolic elsewhere in the package is cross-checked here by direct
high-precision quadrature of the defining integrals.  Two schemes are kept
deliberately distinct:

* "gauss": the real-angle form of the integral, with the square-root
  endpoint behaviour removed by a sine substitution, then Gauss-Legendre;
* "tanh-sinh": the algebraic form on the cut of the energy curve, with both
  endpoint singularities handled by double-exponential quadrature.

Floats live only in this module; callers hand in exact series and get mpmath
numbers back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from mpmath import mp

from .picardfuchs import (
    ATAN_INV_RHO,
    ATAN_INV_RHO_OVER_PI,
    ATAN_RHO,
    ATAN_RHO_OVER_PI,
    BetaAction,
    LOG64_RATIO,
    SymbolicConstant,
    assemble_beta_actions,
)
from .series import KappaPoly, PowerSeries

__all__ = [
    "ParameterError",
    "DomainError",
    "QuadratureError",
    "TopParams",
    "QuadratureResult",
    "VerifyReport",
    "params_from_inertia",
    "rho_for_kappa",
    "kappa_for_rho",
    "action_quadrature",
    "period_quadrature",
    "separatrix_action",
    "action_unscaled_quadrature",
    "scaled_energy",
    "constant_value",
    "kappa_poly_value",
    "power_series_value",
    "beta_action_value",
    "verify_series_numerics",
]


class ParameterError(ValueError):
    """Physical parameters violate positivity, ordering, or a triangle inequality."""


class DomainError(ValueError):
    """Requested energy lies outside the valid range of the integral or series."""


class QuadratureError(RuntimeError):
    """Quadrature finished without meeting the requested tolerance."""

    def __init__(self, message, value, estimate):
        super().__init__(message)
        self.value = value
        self.estimate = estimate


# ---------------------------------------------------------------------------
# physical parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TopParams:
    """Moments of inertia, angular momentum, and the derived shape quantities."""

    theta1: float
    theta2: float
    theta3: float
    ell: float
    rho: float
    kappa: float
    lam: float


def params_from_inertia(theta1: float, theta2: float, theta3: float, ell: float) -> TopParams:
    """Validate the inertia triple and derive rho, kappa and the saddle rate."""
    for name, value in (("theta1", theta1), ("theta2", theta2), ("theta3", theta3), ("ell", ell)):
        if not value > 0:
            raise ParameterError(f"{name} must be positive, got {value}")
    if not theta1 < theta2 < theta3:
        raise ParameterError(
            "need strict ordering theta1 < theta2 < theta3 "
            f"(got {theta1}, {theta2}, {theta3}); equal neighbours have no saddle"
        )
    if theta3 > theta1 + theta2:
        raise ParameterError(
            f"triangle inequality theta3 <= theta1 + theta2 violated: {theta3} > {theta1 + theta2}"
        )
    rho = math.sqrt(theta1 * (theta3 - theta2) / (theta3 * (theta2 - theta1)))
    kappa = rho - 1.0 / rho
    lam = (ell / theta2) * math.sqrt(
        (theta2 - theta1) * (theta3 - theta2) / (theta1 * theta3)
    )
    return TopParams(theta1, theta2, theta3, ell, rho, kappa, lam)


def rho_for_kappa(kappa: float) -> float:
    """The unique rho > 0 with kappa = rho - 1/rho."""
    return (kappa + math.sqrt(kappa * kappa + 4.0)) / 2.0


def kappa_for_rho(rho: float) -> float:
    if not rho > 0:
        raise ParameterError(f"rho must be positive, got {rho}")
    return rho - 1.0 / rho


def scaled_energy(params: TopParams, h_sans: float) -> float:
    """Dimensionless saddle energy from the original Hamiltonian value."""
    return (h_sans - 0.5 * params.ell**2 / params.theta2) / (params.lam * params.ell)


# ---------------------------------------------------------------------------
# mpmath plumbing
# ---------------------------------------------------------------------------


def _to_mp(x):
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


def _working_dps(tol: float, dps: int) -> int:
    # dps is authoritative: a tolerance finer than the precision allows is
    # reported as a quadrature failure, not silently upgraded
    return max(15, dps)


def _rho_mp(kappa):
    return (kappa + mp.sqrt(kappa * kappa + 4)) / 2


def _quad(integrand, interval, method, wdps):
    count = 0

    def counted(*args):
        nonlocal count
        count += 1
        return integrand(*args)

    value, err = mp.quad(counted, interval, method=method, error=True, maxdegree=10)
    floor = (abs(value) + 1) * mp.mpf(10) ** (-(wdps - 5))
    return value, max(err, floor), count


def _quad_endpoint_split(g, lo, hi, wdps):
    """Tanh-sinh over (lo, hi) for an integrand with square-root endpoint
    behaviour (a root or an inverse square root on each side).

    ``g(x, d_lo, d_hi)`` receives the distances to the endpoints exactly.
    Each half-interval is integrated in the local variable u = t^2 measured
    from its endpoint, which makes the integrand analytic and keeps the
    distance factors free of cancellation when the nodes cluster.
    """
    span = hi - lo
    root_half = mp.sqrt(span / 2)
    left = lambda t: 2 * t * g(lo + t * t, t * t, span - t * t)
    right = lambda t: 2 * t * g(hi - t * t, span - t * t, t * t)
    v1, e1, c1 = _quad(left, [0, root_half], "tanh-sinh", wdps)
    v2, e2, c2 = _quad(right, [0, root_half], "tanh-sinh", wdps)
    return v1 + v2, e1 + e2, c1 + c2


def _result(value, estimate, count, tol) -> "QuadratureResult":
    if estimate > tol:
        raise QuadratureError(
            f"quadrature error estimate {mp.nstr(estimate, 5)} exceeds tolerance {tol}",
            value,
            estimate,
        )
    return QuadratureResult(value, estimate, count)


@dataclass(frozen=True)
class QuadratureResult:
    value: object
    error_estimate: object
    evaluations: int


def _sqrt_clamped(t):
    return mp.sqrt(t) if t > 0 else mp.mpf(0)


# ---------------------------------------------------------------------------
# action and period integrals
# ---------------------------------------------------------------------------


def _check_energy_range(h, rho) -> str:
    if h == 0:
        raise DomainError("h = 0 is the separatrix; use separatrix_action")
    if h > 0:
        if not h < 1 / (2 * rho):
            raise DomainError(f"need 0 < h < 1/(2 rho) = {mp.nstr(1/(2*rho), 8)}")
        return "plus"
    if not h > -rho / 2:
        raise DomainError(f"need -rho/2 = {mp.nstr(-rho/2, 8)} < h < 0")
    return "minus"


def action_quadrature(kappa, h, tol: float = 1e-12, dps: int = 50, scheme: str = "gauss") -> QuadratureResult:
    """Separatrix-side action I_beta(h) by direct quadrature.

    Positive h integrates the momentum branch between the turning angles,
    negative h the complementary area (1 - p) over the full half period.
    """
    wdps = _working_dps(tol, dps)
    with mp.workdps(wdps):
        kq, hq = _to_mp(kappa), _to_mp(h)
        rho = _rho_mp(kq)
        side = _check_energy_range(hq, rho)
        two_pi = 2 * mp.pi
        if scheme == "gauss":
            if side == "plus":
                q0 = mp.acos(mp.sqrt(2 * hq * rho))

                def integrand(theta):
                    q = mp.pi / 2 + q0 * mp.sin(theta)
                    s2 = mp.sin(q) ** 2
                    val = (s2 / rho - 2 * hq) / (rho + s2 / rho)
                    return _sqrt_clamped(val) * q0 * mp.cos(theta)

                value, err, count = _quad(
                    integrand, [-mp.pi / 2, mp.pi / 2], "gauss-legendre", wdps
                )
                return _result(value / two_pi, err / two_pi, count, tol)

            def integrand(q):
                s2 = mp.sin(q) ** 2
                return 1 - mp.sqrt((s2 / rho - 2 * hq) / (rho + s2 / rho))

            value, err, count = _quad(integrand, [0, mp.pi], "gauss-legendre", wdps)
            return _result(value / two_pi, err / two_pi, count, tol)

        if scheme == "tanh-sinh":
            if side == "plus":
                # integrand sqrt((z - 2h) / (z (z + rho) (1/rho - z))) on (2h, 1/rho)
                lo, hi = 2 * hq, 1 / rho
                g = lambda z, dlo, dhi: mp.sqrt(dlo / (z * (z + rho) * dhi))
            else:
                # integrand sqrt((2h - z) / (z (z + rho) (z - 1/rho))) on (-rho, 2h)
                lo, hi = -rho, 2 * hq
                g = lambda z, dlo, dhi: mp.sqrt(dhi / (dlo * (-z) * (1 / rho - z)))
            value, err, count = _quad_endpoint_split(g, lo, hi, wdps)
            return _result(value / two_pi, err / two_pi, count, tol)

    raise ValueError(f"unknown scheme {scheme!r}")


def period_quadrature(kappa, h, tol: float = 1e-12, dps: int = 50, scheme: str = "tanh-sinh") -> QuadratureResult:
    """Separatrix-side period T_beta(h) = 2 pi I_beta'(h) by direct quadrature.

    The integrand 1/(sqrt(x (x - 2h)) sqrt(1 - kappa x - x^2)) has inverse
    square-root singularities at both interval endpoints.  The loop
    orientation makes T the negative of the (positive) real integral on the
    positive-energy side: the area enclosed under the separatrix shrinks as
    h grows, so I' < 0 there.
    """
    wdps = _working_dps(tol, dps)
    with mp.workdps(wdps):
        kq, hq = _to_mp(kappa), _to_mp(h)
        rho = _rho_mp(kq)
        side = _check_energy_range(hq, rho)
        if side == "plus":
            lo, hi = 2 * hq, 1 / rho
            smooth = lambda x: x * (x + rho)
            orientation = -1
        else:
            lo, hi = -rho, 2 * hq
            smooth = lambda x: (-x) * (1 / rho - x)
            orientation = 1

        if scheme == "tanh-sinh":
            g = lambda x, dlo, dhi: 1 / mp.sqrt(dlo * dhi * smooth(x))
            value, err, count = _quad_endpoint_split(g, lo, hi, wdps)
            return _result(orientation * value, err, count, tol)

        if scheme == "gauss":
            # x = lo + (hi - lo) sin(theta)^2 absorbs both 1/sqrt endpoints
            span = hi - lo

            def integrand(theta):
                x = lo + span * mp.sin(theta) ** 2
                return 2 / mp.sqrt(smooth(x))

            value, err, count = _quad(integrand, [0, mp.pi / 2], "gauss-legendre", wdps)
            return _result(orientation * value, err, count, tol)

    raise ValueError(f"unknown scheme {scheme!r}")


def separatrix_action(kappa, side: str, dps: int = 50):
    """Closed-form limit I_beta(0) = atan(rho^{-+1}) / pi."""
    with mp.workdps(dps):
        rho = _rho_mp(_to_mp(kappa))
        arg = 1 / rho if side == "plus" else rho
        return mp.atan(arg) / mp.pi


def action_unscaled_quadrature(params: TopParams, h_sans: float, tol: float = 1e-12, dps: int = 50) -> QuadratureResult:
    """Action of the original (dimension-carrying) system in the inertia variable.

    The cubic under the root has roots at the inverse moments of inertia; the
    integration interval is bounded by 2 h / ell^2 and the inverse moment the
    orbit side touches.  Equals 2 ell I_beta(h) after the energy scaling.
    """
    wdps = _working_dps(tol, dps)
    with mp.workdps(wdps):
        t1, t2, t3 = mp.mpf(params.theta1), mp.mpf(params.theta2), mp.mpf(params.theta3)
        ell = mp.mpf(params.ell)
        hs = mp.mpf(h_sans)
        r1, r2, r3 = 1 / t1, 1 / t2, 1 / t3
        z_star = 2 * hs / ell**2
        if z_star == r2:
            raise DomainError("h = 0 is the separatrix; use separatrix_action")
        if z_star > r2:
            if not z_star < r1:
                raise DomainError("energy above the upper elliptic equilibrium")
            lo, hi = z_star, r1
            g = lambda z, dlo, dhi: ell * mp.sqrt(dlo / (dhi * (z - r2) * (z - r3)))
        else:
            if not z_star > r3:
                raise DomainError("energy below the lower elliptic equilibrium")
            lo, hi = r3, z_star
            g = lambda z, dlo, dhi: ell * mp.sqrt(dhi / (dlo * (r1 - z) * (r2 - z)))

        value, err, count = _quad_endpoint_split(g, lo, hi, wdps)
        return _result(value / mp.pi, err / mp.pi, count, tol)


# ---------------------------------------------------------------------------
# numeric evaluation of the exact series channel
# ---------------------------------------------------------------------------

_CONSTANT_FORMS = {
    LOG64_RATIO: lambda rho, kq: mp.log(64 / (kq * kq + 4)),
    ATAN_RHO: lambda rho, kq: mp.atan(rho),
    ATAN_INV_RHO: lambda rho, kq: mp.atan(1 / rho),
    ATAN_RHO_OVER_PI: lambda rho, kq: mp.atan(rho) / mp.pi,
    ATAN_INV_RHO_OVER_PI: lambda rho, kq: mp.atan(1 / rho) / mp.pi,
}


def constant_value(const: SymbolicConstant, kappa, dps: int = 50):
    with mp.workdps(dps):
        kq = _to_mp(kappa)
        rho = _rho_mp(kq)
        return _to_mp(const.factor) * _CONSTANT_FORMS[const.kind](rho, kq)


def kappa_poly_value(poly: KappaPoly, kappa):
    acc = mp.mpf(0)
    for c in reversed(poly.coeffs):
        acc = acc * kappa + _to_mp(c)
    return acc


def power_series_value(series: PowerSeries, kappa, x):
    acc = mp.mpf(0)
    for c in reversed(series.coeffs):
        acc = acc * x + kappa_poly_value(c, kappa)
    return acc


def beta_action_value(beta: BetaAction, kappa, h, dps: int = 50):
    """I_beta(h) from the exact series channel plus the symbolic constants."""
    with mp.workdps(dps):
        kq, hq = _to_mp(kappa), _to_mp(h)
        if beta.sign * hq <= 0:
            raise DomainError(f"side {beta.side!r} needs {beta.sign:+d}h > 0")
        p_val = power_series_value(beta.series.action_regular, kq, hq)
        q_val = power_series_value(beta.series.action_singular.regular_part, kq, hq)
        k1 = constant_value(beta.k1, kq, dps)
        k3 = constant_value(beta.k3, kq, dps)
        singular = p_val * mp.log(beta.sign * hq) + q_val
        return (k1 * p_val + beta.k2 * singular) / (2 * mp.pi) + k3


# ---------------------------------------------------------------------------
# series versus quadrature
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VerifyRow:
    h: float
    side: str
    series_value: object
    quadrature_value: object
    deviation: object
    cross_scheme_delta: object
    evaluations: int


@dataclass(frozen=True)
class VerifyReport:
    kappa: float
    order: int
    rows: tuple[VerifyRow, ...]
    max_deviation: object
    area_sum_deviation: object
    side_sum_deviation: object
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tol


def verify_series_numerics(
    kappa,
    h_samples: Iterable[float],
    order: int = 30,
    tol: float = 1e-9,
    dps: int = 50,
) -> VerifyReport:
    """Evaluate the separatrix-side action series and compare with quadrature.

    Samples must lie inside the proven convergence disc |h| < min(rho, 1/rho)/2.
    h = 0 rows compare the closed-form limit constants on both sides.
    """
    plus, minus = assemble_beta_actions(order)
    with mp.workdps(dps):
        kq = _to_mp(kappa)
        rho = _rho_mp(kq)
        disc = min(rho, 1 / rho) / 2
        rows = []
        max_dev = mp.mpf(0)
        for h in h_samples:
            hq = _to_mp(h)
            if abs(hq) >= disc:
                raise DomainError(
                    f"sample h = {h} is outside the convergence disc of radius {mp.nstr(disc, 8)}"
                )
            if hq == 0:
                for beta in (plus, minus):
                    limit = constant_value(beta.k3, kq, dps)
                    exact = separatrix_action(kq, beta.side, dps)
                    rows.append(
                        VerifyRow(0.0, beta.side, limit, exact, abs(limit - exact), mp.mpf(0), 0)
                    )
                continue
            beta = plus if hq > 0 else minus
            series_val = beta_action_value(beta, kq, hq, dps)
            quad_tol = max(tol * 1e-3, mp.mpf(10) ** (-(dps - 8)))
            main = action_quadrature(kq, hq, tol=quad_tol, dps=dps, scheme="gauss")
            other = action_quadrature(kq, hq, tol=quad_tol, dps=dps, scheme="tanh-sinh")
            dev = abs(series_val - main.value)
            max_dev = max(max_dev, dev)
            rows.append(
                VerifyRow(
                    float(h),
                    beta.side,
                    series_val,
                    main.value,
                    dev,
                    abs(main.value - other.value),
                    main.evaluations + other.evaluations,
                )
            )
        area_sum = constant_value(plus.area, kq, dps) + constant_value(minus.area, kq, dps)
        side_sum = constant_value(plus.k3, kq, dps) + constant_value(minus.k3, kq, dps)
        return VerifyReport(
            kappa=float(kq),
            order=order,
            rows=tuple(rows),
            max_deviation=max_dev,
            area_sum_deviation=abs(area_sum - mp.pi),
            side_sum_deviation=abs(side_sum - mp.mpf(1) / 2),
            tol=tol,
        )
