"""Saddle expansion of the reduced Hamiltonian and its Birkhoff normal form.

The non-dimensional Hamiltonian of the free rigid body near steady rotation
about the middle axis is

    H(q, p) = (1/2) * (-p^2 (rho + sin(q)^2 / rho) + sin(q)^2 / rho)

with rho the shape parameter.  Taylor expansion at the saddle, a linear
symplectic reduction to quadratic part q*p (Williamson form), and a sequence
of Lie transforms that remove every monomial q^a p^b with a != b produce the
normal form H*(J) as a series in the action J = q*p.

All intermediate coefficients live in Laurent polynomials in rho; the final
series converts to polynomials in kappa = rho - 1/rho.  The linear map
scales by sqrt(rho), but every monomial in the pipeline has a - b even,
so rho exponents stay integral throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .series import (
    InternalConsistencyError,
    KP_ZERO,
    KP_ONE,
    PowerSeries,
    RepresentationError,
    RhoLaurent,
)

__all__ = [
    "PreconditionError",
    "PolyHamiltonian",
    "NormalFormResult",
    "expand_hamiltonian",
    "williamson_reduce",
    "birkhoff_normalize",
    "normal_form_steps",
    "euler_normal_form",
]


class PreconditionError(ValueError):
    """Input Hamiltonian does not have the shape the operation requires."""


Terms = dict[tuple[int, int], RhoLaurent]


@dataclass(frozen=True)
class PolyHamiltonian:
    """Polynomial Hamiltonian: monomial (a, b) -> coefficient of q^a p^b."""

    terms: Mapping[tuple[int, int], RhoLaurent]
    degree: int

    def __post_init__(self):
        cleaned = {k: v for k, v in self.terms.items() if v}
        for (a, b) in cleaned:
            if a + b > self.degree:
                raise PreconditionError(
                    f"monomial q^{a} p^{b} exceeds the stated degree {self.degree}"
                )
        object.__setattr__(self, "terms", cleaned)

    def coefficient(self, a: int, b: int) -> RhoLaurent:
        return self.terms.get((a, b), RhoLaurent.zero())

    def quadratic_part(self) -> Terms:
        return {k: v for k, v in self.terms.items() if k[0] + k[1] == 2}


def _sin_sq_coefficients(max_degree: int) -> dict[int, Fraction]:
    # sin(q)^2 = sum_{m>=1} (-1)^(m+1) 2^(2m-1) / (2m)! q^(2m)
    return {
        2 * m: Fraction((-1) ** (m + 1) * 2 ** (2 * m - 1), math.factorial(2 * m))
        for m in range(1, max_degree // 2 + 1)
    }


def expand_hamiltonian(max_degree: int) -> PolyHamiltonian:
    """Taylor coefficients of the saddle Hamiltonian through total degree max_degree.

    The quadratic part is (1/2)(q^2/rho - rho p^2); all monomials are even in
    q and in p separately.
    """
    if max_degree < 2 or max_degree % 2:
        raise PreconditionError("expansion degree must be an even integer >= 2")
    sin_sq = _sin_sq_coefficients(max_degree)
    terms: Terms = {(0, 2): RhoLaurent.power(1, Fraction(-1, 2))}
    for deg, c in sin_sq.items():
        terms[(deg, 0)] = RhoLaurent.power(-1, c / 2)
        if deg + 2 <= max_degree:
            terms[(deg, 2)] = RhoLaurent.power(-1, -c / 2)
    return PolyHamiltonian(terms, max_degree)


def williamson_reduce(ham: PolyHamiltonian) -> PolyHamiltonian:
    """Apply the linear symplectic map that turns the quadratic part into q*p.

    The map is the scaling q -> sqrt(rho) q, p -> p / sqrt(rho) followed by a
    rotation by -pi/4; on a monomial q^a p^b it acts as

        q^a p^b -> rho^((a-b)/2) 2^(-(a+b)/2) (q + p)^a (p - q)^b.
    """
    expected_quadratic = {
        (2, 0): RhoLaurent.power(-1, Fraction(1, 2)),
        (0, 2): RhoLaurent.power(1, Fraction(-1, 2)),
    }
    if ham.quadratic_part() != expected_quadratic:
        raise PreconditionError(
            "quadratic part is not (1/2)(q^2/rho - rho p^2)"
        )
    out: Terms = {}
    for (a, b), c in ham.terms.items():
        if (a - b) % 2 or (a + b) % 2:
            raise PreconditionError(
                f"monomial q^{a} p^{b} has odd parity; the map would need sqrt factors"
            )
        base = c * RhoLaurent.power((a - b) // 2, Fraction(1, 2 ** ((a + b) // 2)))
        for i in range(a + 1):
            ca = math.comb(a, i)
            for j in range(b + 1):
                coeff = base * Fraction(ca * math.comb(b, j) * (-1) ** (b - j))
                key = (i + b - j, a - i + j)
                acc = out.get(key, RhoLaurent.zero()) + coeff
                if acc:
                    out[key] = acc
                elif key in out:
                    del out[key]
    return PolyHamiltonian(out, ham.degree)


def _poisson(f: Terms, g: Terms, max_degree: int) -> Terms:
    # {q^a p^b, q^c p^d} = (a d - b c) q^(a+c-1) p^(b+d-1)
    out: Terms = {}
    for (a, b), cf in f.items():
        for (c, d), cg in g.items():
            factor = a * d - b * c
            if not factor:
                continue
            key = (a + c - 1, b + d - 1)
            if key[0] + key[1] > max_degree:
                continue
            acc = out.get(key, RhoLaurent.zero()) + cf * cg * Fraction(factor)
            if acc:
                out[key] = acc
            elif key in out:
                del out[key]
    return out


def _lie_transform(terms: Terms, generator: Terms, max_degree: int) -> Terms:
    """Time-1 flow of the generator: sum_k ad_W^k(H) / k! truncated in degree."""
    out = dict(terms)
    current = terms
    k = 0
    while current:
        k += 1
        current = _poisson(current, generator, max_degree)
        for key, c in current.items():
            scaled = c * Fraction(1, math.factorial(k))
            acc = out.get(key, RhoLaurent.zero()) + scaled
            if acc:
                out[key] = acc
            elif key in out:
                del out[key]
        # generators start at degree >= 3, so each bracket raises the degree
        if k > max_degree:
            raise InternalConsistencyError("Lie transform failed to terminate")
    return out


@dataclass(frozen=True)
class NormalFormResult:
    """Normal form series plus the per-degree generators and stage snapshots."""

    series: PowerSeries
    generators: tuple[Terms, ...]
    stages: tuple[tuple[int, Terms], ...]


def normal_form_steps(ham: PolyHamiltonian, order: int) -> NormalFormResult:
    """Normalize degree by degree up to polynomial degree 2*order.

    At each degree d the generator carries one term -c/(b-a) q^a p^b for every
    non-resonant monomial c q^a p^b present (minimal generator, no resonant
    part), since {qp, q^a p^b} = (b - a) q^a p^b.  Resonant monomials (qp)^k
    accumulate into the output series H*(J).
    """
    if order < 1:
        raise PreconditionError("normal form order must be >= 1")
    if ham.quadratic_part() != {(1, 1): RhoLaurent.one()}:
        raise PreconditionError("quadratic part must be exactly q*p")
    max_degree = 2 * order
    if ham.degree < max_degree:
        raise PreconditionError(
            f"need the expansion through degree {max_degree}, got {ham.degree}"
        )
    terms: Terms = {
        k: v for k, v in ham.terms.items() if k[0] + k[1] <= max_degree
    }
    generators: list[Terms] = []
    stages: list[tuple[int, Terms]] = []
    for d in range(3, max_degree + 1):
        generator: Terms = {}
        for (a, b), c in terms.items():
            if a + b == d and a != b:
                generator[(a, b)] = c * Fraction(-1, b - a)
        if generator:
            terms = _lie_transform(terms, generator, max_degree)
        generators.append(generator)
        stages.append((d, dict(terms)))
    leftover = [k for k in terms if k[0] != k[1]]
    if leftover:
        raise InternalConsistencyError(
            f"non-resonant monomials survived normalization: {sorted(leftover)}"
        )
    coeffs = [KP_ZERO] * (order + 1)
    for (a, b), c in terms.items():
        try:
            coeffs[a] = c.to_kappa()
        except RepresentationError as exc:
            raise InternalConsistencyError(
                f"J^{a} coefficient has residual rho dependence"
            ) from exc
    if coeffs[1] != KP_ONE:
        raise InternalConsistencyError("normal form is not J + O(J^2)")
    series = PowerSeries("J", tuple(coeffs))
    return NormalFormResult(series, tuple(generators), tuple(stages))


def birkhoff_normalize(ham: PolyHamiltonian, order: int) -> PowerSeries:
    """Normal form series H*(J) through J^order for a Hamiltonian with H2 = q*p."""
    return normal_form_steps(ham, order).series


def euler_normal_form(order: int) -> PowerSeries:
    """Full pipeline: expand at the saddle, reduce, normalize, through J^order."""
    ham = williamson_reduce(expand_hamiltonian(2 * order))
    return birkhoff_normalize(ham, order)
