"""Normal form by series reversion, the symplectic invariant, and convergence.

The J-defining series is the regular action I_alpha(h) = 2 pi I_r(h); its
compositional inverse is the Birkhoff normal form h = B(J).  Composing the
separatrix-side actions with B and stripping the universal singular part

    2 pi (I_beta(+-) o I_alpha^{-1})(J) = A(+-) +- J log(+-J) -+ J -+ sigma(J)

leaves the invariant sigma.  Its linear coefficient is the symbolic constant
(1/2) log(64/(kappa^2+4)); the higher coefficients are exact polynomials in
kappa.

Sign bookkeeping on the negative-energy side: with J = -J' (J' > 0 formally)
the inner series becomes C(J') = -B(-J') and log(-h) = log J' + log(C/J'),
so the extraction runs entirely in J' and maps back by J' -> -J.  Side by
side:

    quantity          positive side            negative side (in J')
    inner series      B(J)                     C(J') = -B(-J')
    log channel       +[P o B] log J           -[P o B(-J')] log J' = +J' log J'
    singular weight   k2 = +1                  k2 = -1
    defining split    A+ + J log J - J - s     A- + J' log J' - J' + s(-J')

Both branches must produce the same sigma; the report carries that check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .picardfuchs import (
    BetaAction,
    SymbolicConstant,
    assemble_beta_actions,
    build_action_series,
    frobenius_a_at,
    frobenius_b_at,
)
from .series import (
    InternalConsistencyError,
    PowerSeries,
    SeriesUsageError,
    compose_trunc,
    log_unit_trunc,
    revert_trunc,
)

__all__ = [
    "InvariantReport",
    "RadiusReport",
    "PendulumRow",
    "alpha_action",
    "bnf_via_reversion",
    "extract_sigma",
    "radius_analysis",
    "pendulum_compare",
    "log64_ratio_log2_exact",
    "PENDULUM_LEADING",
    "MARGIN_FLOOR",
]


def alpha_action(order: int) -> PowerSeries:
    """The vanishing-cycle action 2 pi I_r(h) = h + O(h^2), through h^order."""
    if order < 1:
        raise SeriesUsageError("need order >= 1")
    return build_action_series(order).action_regular.truncate(order)


def bnf_via_reversion(order: int) -> PowerSeries:
    """Normal form B(J) as the compositional inverse of the regular action."""
    return alpha_action(order).revert()


@dataclass(frozen=True)
class InvariantReport:
    """sigma(J) = linear_log * J + tail(J), with the separatrix areas attached."""

    order: int
    linear_log: SymbolicConstant
    tail: PowerSeries
    area_plus: SymbolicConstant
    area_minus: SymbolicConstant
    branch_consistent: bool


def _extract_plus(beta: BetaAction, bnf: PowerSeries, order: int):
    composed = beta.series.action_singular.compose_with_log(bnf)
    ident = PowerSeries.identity("J", order)
    if composed.log_part != ident:
        raise InternalConsistencyError("regular action did not invert to J")
    tail = -ident - composed.regular_part.truncate(order)
    return -beta.k1, tail


def _extract_minus(beta: BetaAction, bnf: PowerSeries, order: int):
    bundle = beta.series
    inner = -bnf.reflect()  # J' -> -B(-J'), the positive formal variable
    outer_log = -bundle.action_regular.reflect()
    outer_reg = -bundle.action_singular.regular_part.reflect()
    composed = type(bundle.action_singular)(outer_log, outer_reg).compose_with_log(inner)
    ident = PowerSeries.identity("J", order)
    if composed.log_part != ident:
        raise InternalConsistencyError("regular action did not invert to J")
    sigma_at_minus = ident + composed.regular_part.truncate(order)
    # the symbolic channel rides on -k1 * J' which reflects back to +k1 * J
    return beta.k1, sigma_at_minus.reflect()


def extract_sigma(order: int) -> InvariantReport:
    """Invariant through J^order, extracted on both sides of the separatrix.

    The positive-side result is the canonical output; the negative side is a
    mandatory consistency assertion.
    """
    if order < 2:
        raise SeriesUsageError("need order >= 2")
    plus, minus = assemble_beta_actions(order + 1)
    bnf = bnf_via_reversion(order + 1)
    lin_plus, tail_plus = _extract_plus(plus, bnf, order)
    lin_minus, tail_minus = _extract_minus(minus, bnf, order)
    consistent = (tail_plus == tail_minus) and (lin_plus == lin_minus)
    if not consistent:
        raise InternalConsistencyError(
            "separatrix-side extractions produced different invariants"
        )
    if tail_plus.coefficient(0) or tail_plus.coefficient(1):
        raise InternalConsistencyError("invariant tail leaked into J^0 or J^1")
    return InvariantReport(
        order=order,
        linear_log=lin_plus,
        tail=tail_plus,
        area_plus=plus.area,
        area_minus=minus.area,
        branch_consistent=consistent,
    )


# ---------------------------------------------------------------------------
# convergence experiments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RadiusReport:
    """Ratio-test radius estimates for one coefficient sequence."""

    name: str
    kappa: float
    ns: tuple[int, ...]
    ratios: tuple[float, ...]
    extrapolated: float
    theoretical: float | None
    skipped: tuple[int, ...]


def _bnf_coefficients_at(kappa: Fraction, nmax: int) -> list[Fraction]:
    a = frobenius_a_at(kappa, nmax)
    alpha = [Fraction(0)] + [a[n] * Fraction(1, n + 1) for n in range(nmax)]
    return revert_trunc(alpha, nmax, Fraction(0))


def _sigma_tail_at(kappa: Fraction, nmax: int) -> list[Fraction]:
    zero = Fraction(0)
    a = frobenius_a_at(kappa, nmax)
    b = frobenius_b_at(kappa, nmax)
    alpha = [zero] + [a[n] * Fraction(1, n + 1) for n in range(nmax)]
    q = [zero] + [
        (b[n] - a[n] * Fraction(1, n + 1)) * Fraction(1, n + 1) for n in range(nmax)
    ]
    bnf = revert_trunc(alpha, nmax, zero)
    log_unit = log_unit_trunc(bnf[1:], nmax - 1, zero)
    j_log_unit = [zero] + log_unit
    q_of_bnf = compose_trunc(q, bnf, nmax, zero)
    tail = [-(j_log_unit[n] + q_of_bnf[n]) for n in range(nmax + 1)]
    tail[1] -= 1
    return tail


_SEQUENCES = {
    "a": lambda kappa, nmax: frobenius_a_at(kappa, nmax),
    "b": lambda kappa, nmax: frobenius_b_at(kappa, nmax),
    "bnf": _bnf_coefficients_at,
    "sigma": _sigma_tail_at,
}


def _ratio_estimates(coeffs: Sequence[Fraction]):
    nonzero = [n for n, c in enumerate(coeffs) if c]
    skipped = tuple(
        n
        for n in range(nonzero[0], nonzero[-1] + 1)
        if not coeffs[n]
    ) if nonzero else ()
    ns, ratios = [], []
    for n1, n2 in zip(nonzero, nonzero[1:]):
        gap = n2 - n1
        est = float(abs(Fraction(coeffs[n1], 1) / coeffs[n2])) ** (1.0 / gap)
        ns.append(n1)
        ratios.append(est)
    return tuple(ns), tuple(ratios), skipped


def _aitken(xs: Sequence[float]) -> list[float]:
    out = []
    for i in range(len(xs) - 2):
        d1 = xs[i + 1] - xs[i]
        d2 = xs[i + 2] - 2 * xs[i + 1] + xs[i]
        if d2 != 0.0:
            out.append(xs[i] - d1 * d1 / d2)
    return out


def rho_from_kappa(kappa: float) -> float:
    return (kappa + math.sqrt(kappa * kappa + 4.0)) / 2.0


def radius_analysis(
    kappa: Fraction,
    nmax: int,
    targets: Iterable[str] = ("a", "b", "bnf", "sigma"),
) -> list[RadiusReport]:
    """Ratio-test radius estimates at an exact rational kappa.

    Coefficient sequences are computed exactly, converted to floats, and the
    consecutive-ratio estimates |c_n / c_{n+1}| are accelerated by a single
    Aitken delta-squared step.  The a and b sequences carry the known radius
    min(rho, 1/rho) / 2 for comparison.
    """
    kappa = Fraction(kappa)
    if nmax < 20:
        raise SeriesUsageError("need nmax >= 20 for a stable estimate")
    rho = rho_from_kappa(float(kappa))
    known = 0.5 * min(rho, 1.0 / rho)
    reports = []
    for name in targets:
        if name not in _SEQUENCES:
            raise SeriesUsageError(f"unknown sequence {name!r}")
        coeffs = _SEQUENCES[name](kappa, nmax)
        ns, ratios, skipped = _ratio_estimates(coeffs)
        accelerated = _aitken(ratios)
        extrapolated = accelerated[-1] if accelerated else (ratios[-1] if ratios else float("nan"))
        reports.append(
            RadiusReport(
                name=name,
                kappa=float(kappa),
                ns=ns,
                ratios=ratios,
                extrapolated=extrapolated,
                theoretical=known if name in ("a", "b") else None,
                skipped=skipped,
            )
        )
    return reports


# ---------------------------------------------------------------------------
# comparison with the pendulum separatrix invariant
# ---------------------------------------------------------------------------

PENDULUM_LEADING = math.log(32.0)
MARGIN_FLOOR = math.log(8.0)


@dataclass(frozen=True)
class PendulumRow:
    kappa: float
    euler_leading: float
    margin: float


def pendulum_compare(kappa_grid: Iterable[float]) -> list[PendulumRow]:
    """Leading invariant term of the top against the pendulum value log 32.

    The top's leading term (1/2) log(64/(kappa^2+4)) peaks at log 4 for
    kappa = 0, so the margin log 32 - leading is at least log 8 everywhere.
    """
    rows = []
    for kappa in kappa_grid:
        leading = 0.5 * math.log(64.0 / (kappa * kappa + 4.0))
        rows.append(PendulumRow(float(kappa), leading, PENDULUM_LEADING - leading))
    return rows


def log64_ratio_log2_exact(kappa: Fraction) -> Fraction | None:
    """Exact value of (1/2) log2(64/(kappa^2+4)) when the ratio is a power of two.

    Returns None when 64/(kappa^2+4) is not an exact power of two; at
    kappa = 0 the ratio is 16 and the result is the exact exponent 2
    (the leading invariant term log 4, in units of log 2).
    """
    ratio = Fraction(64) / (Fraction(kappa) ** 2 + 4)
    num, den = ratio.numerator, ratio.denominator
    if num & (num - 1) or den & (den - 1):
        return None
    return Fraction(num.bit_length() - den.bit_length(), 2)
