"""Exact series kernel.

Rationals, polynomials in the shape parameter kappa, Laurent polynomials in
rho, truncated power series, and log-augmented series, together with the
calculus / composition / reversion operations the rest of the package builds
on.  Every coefficient is a ``fractions.Fraction``; no floating point enters
this module.  Truncation order is explicit state and binary operations
truncate to the minimum order of their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

__all__ = [
    "SeriesUsageError",
    "SingularReversionError",
    "RepresentationError",
    "InternalConsistencyError",
    "KappaPoly",
    "RhoLaurent",
    "PowerSeries",
    "LogSeries",
    "KP_ZERO",
    "KP_ONE",
    "KP_KAPPA",
    "mul_trunc",
    "compose_trunc",
    "recip_trunc",
    "log_unit_trunc",
    "revert_trunc",
]


class SeriesUsageError(ValueError):
    """An operation was called outside its contract (mixed variables, bad constant term)."""


class SingularReversionError(SeriesUsageError):
    """The series has no compositional inverse at the requested truncation."""


class RepresentationError(ValueError):
    """A Laurent polynomial in rho has no rewrite as a polynomial in kappa."""


class InternalConsistencyError(RuntimeError):
    """Two routes that must agree by construction failed to do so."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


# ---------------------------------------------------------------------------
# polynomials in kappa
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class KappaPoly:
    """Polynomial in kappa with exact rational coefficients, lowest power first.

    The zero polynomial stores an empty tuple and reports degree -inf.
    """

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        cs = tuple(_frac(c) for c in self.coeffs)
        while cs and cs[-1] == 0:
            cs = cs[:-1]
        object.__setattr__(self, "coeffs", cs)

    @staticmethod
    def of(*coeffs) -> "KappaPoly":
        return KappaPoly(tuple(coeffs))

    @staticmethod
    def constant(c) -> "KappaPoly":
        return KappaPoly((_frac(c),))

    @property
    def degree(self) -> float:
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def coefficient(self, n: int) -> Fraction:
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = KappaPoly.constant(other)
        if not isinstance(other, KappaPoly):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return KappaPoly(
            tuple(self.coefficient(i) + other.coefficient(i) for i in range(n))
        )

    __radd__ = __add__

    def __neg__(self):
        return KappaPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other if isinstance(other, KappaPoly) else KappaPoly.constant(-_frac(other)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = _frac(other)
            return KappaPoly(tuple(c * f for c in self.coeffs))
        if not isinstance(other, KappaPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return KP_ZERO
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return KappaPoly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = KP_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def flip_kappa(self) -> "KappaPoly":
        """The polynomial with kappa replaced by -kappa."""
        return KappaPoly(
            tuple(-c if i % 2 else c for i, c in enumerate(self.coeffs))
        )

    def __call__(self, kappa):
        """Horner evaluation; exact when ``kappa`` is a Fraction."""
        acc = kappa * 0
        for c in reversed(self.coeffs):
            acc = acc * kappa + c
        return acc

    def to_rho(self) -> "RhoLaurent":
        """Substitute kappa = rho - 1/rho."""
        out = RhoLaurent.zero()
        kap = RhoLaurent.kappa()
        power = RhoLaurent.one()
        for c in self.coeffs:
            if c:
                out = out + power * c
            power = power * kap
        return out

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append(f"{c}*k^{i}" if i else f"{c}")
        return " + ".join(parts)


KP_ZERO = KappaPoly()
KP_ONE = KappaPoly.constant(1)
KP_KAPPA = KappaPoly.of(0, 1)


# ---------------------------------------------------------------------------
# Laurent polynomials in rho
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class RhoLaurent:
    """Laurent polynomial in rho: finitely many integer powers, exact coefficients."""

    terms: tuple[tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        merged: dict[int, Fraction] = {}
        for e, c in self.terms:
            c = _frac(c)
            if c:
                merged[e] = merged.get(e, Fraction(0)) + c
        cleaned = tuple(sorted((e, c) for e, c in merged.items() if c))
        object.__setattr__(self, "terms", cleaned)

    @staticmethod
    def from_dict(d: Mapping[int, Fraction]) -> "RhoLaurent":
        return RhoLaurent(tuple(d.items()))

    @staticmethod
    def zero() -> "RhoLaurent":
        return RhoLaurent(())

    @staticmethod
    def one() -> "RhoLaurent":
        return RhoLaurent(((0, Fraction(1)),))

    @staticmethod
    def power(e: int, c=1) -> "RhoLaurent":
        return RhoLaurent(((e, _frac(c)),))

    @staticmethod
    def kappa() -> "RhoLaurent":
        return RhoLaurent(((1, Fraction(1)), (-1, Fraction(-1))))

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if not isinstance(other, RhoLaurent):
            return NotImplemented
        return RhoLaurent(self.terms + other.terms)

    def __neg__(self):
        return RhoLaurent(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = _frac(other)
            return RhoLaurent(tuple((e, c * f) for e, c in self.terms))
        if not isinstance(other, RhoLaurent):
            return NotImplemented
        out: dict[int, Fraction] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                out[e1 + e2] = out.get(e1 + e2, Fraction(0)) + c1 * c2
        return RhoLaurent(tuple(out.items()))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a Laurent polynomial")
        out = RhoLaurent.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __call__(self, rho):
        return sum((c * rho**e for e, c in self.terms), start=rho * 0)

    def to_kappa(self) -> KappaPoly:
        """Rewrite as a polynomial in kappa = rho - 1/rho.

        Greedy elimination of the top rho power; anything symmetric under
        rho -> -1/rho reduces to a constant remainder, anything else leaves
        negative powers behind and raises RepresentationError.
        """
        rest = self.as_dict()
        if not rest:
            return KP_ZERO
        top = max(rest)
        powers = [RhoLaurent.one()]
        kap = RhoLaurent.kappa()
        for _ in range(max(top, 0)):
            powers.append(powers[-1] * kap)
        out: dict[int, Fraction] = {}
        while rest:
            e = max(rest)
            c = rest.pop(e)
            if e < 0:
                raise RepresentationError(
                    "not a polynomial in kappa: leftover rho power %d" % e
                )
            out[e] = c
            if e > 0:
                for ee, cc in powers[e].terms:
                    if ee != e:
                        rest[ee] = rest.get(ee, Fraction(0)) - c * cc
                        if not rest[ee]:
                            del rest[ee]
        coeffs = [Fraction(0)] * (max(out) + 1)
        for e, c in out.items():
            coeffs[e] = c
        return KappaPoly(tuple(coeffs))


# ---------------------------------------------------------------------------
# generic truncated-series helpers on plain coefficient lists
#
# These work over any exact coefficient ring with +, -, * and a falsy zero;
# in practice: KappaPoly for the symbolic pipeline and Fraction for series
# evaluated at a fixed rational kappa.
# ---------------------------------------------------------------------------


def _unit_inverse(c):
    if isinstance(c, Fraction):
        if not c:
            raise SingularReversionError("zero is not invertible")
        return 1 / c
    if isinstance(c, KappaPoly):
        if c.degree != 0:
            raise SingularReversionError(
                "coefficient is not an invertible constant: %s" % c
            )
        return KappaPoly.constant(1 / c.coeffs[0])
    raise TypeError(f"cannot invert {type(c).__name__}")


def _at(a: Sequence, n: int, zero):
    return a[n] if n < len(a) else zero


def mul_trunc(a: Sequence, b: Sequence, order: int, zero) -> list:
    """Cauchy product of coefficient lists, truncated at ``order``."""
    out = [zero] * (order + 1)
    for i, ai in enumerate(a):
        if i > order:
            break
        if ai:
            top = min(len(b) - 1, order - i)
            for j in range(top + 1):
                if b[j]:
                    out[i + j] = out[i + j] + ai * b[j]
    return out


def compose_trunc(outer: Sequence, inner: Sequence, order: int, zero) -> list:
    """Horner composition outer(inner(x)); inner must have zero constant term."""
    if inner and inner[0]:
        raise SeriesUsageError("inner series must vanish at 0")
    res = [zero] * (order + 1)
    if not outer:
        return res
    res[0] = outer[-1]
    for k in range(len(outer) - 2, -1, -1):
        res = mul_trunc(res, inner, order, zero)
        res[0] = res[0] + outer[k]
    return res


def recip_trunc(a: Sequence, order: int, zero) -> list:
    """Multiplicative inverse of a series with invertible constant term."""
    inv0 = _unit_inverse(a[0])
    out = [zero] * (order + 1)
    out[0] = inv0
    for n in range(1, order + 1):
        acc = zero
        for k in range(1, n + 1):
            ak = _at(a, k, zero)
            if ak:
                acc = acc + ak * out[n - k]
        out[n] = -(inv0 * acc)
    return out


def deriv_list(a: Sequence) -> list:
    return [a[n] * n for n in range(1, len(a))]


def integrate_list(a: Sequence, zero) -> list:
    return [zero] + [a[n] * Fraction(1, n + 1) for n in range(len(a))]


def log_unit_trunc(a: Sequence, order: int, zero) -> list:
    """log of a series with constant term 1, via integrating a'/a."""
    if not a[0] or a[0] * a[0] != a[0]:
        raise SeriesUsageError("log needs a series with constant term 1")
    q = mul_trunc(deriv_list(a), recip_trunc(a, order, zero), max(order - 1, 0), zero)
    out = [zero] * (order + 1)
    for n in range(1, order + 1):
        out[n] = q[n - 1] * Fraction(1, n)
    return out


def revert_trunc(a: Sequence, order: int, zero) -> list:
    """Compositional inverse by Newton iteration.

    Requires a[0] = 0 and an invertible linear coefficient; the iteration
    doubles the number of correct orders per step, so convergence is exact.
    """
    if a[0]:
        raise SingularReversionError("series must vanish at 0 to be reverted")
    if len(a) < 2 or not a[1]:
        raise SingularReversionError("zero linear coefficient")
    ident = [zero] * (order + 1)
    ident[1] = _unit_inverse(a[1]) * a[1]
    g = [zero] * (order + 1)
    g[1] = _unit_inverse(a[1])
    ap = deriv_list(a)
    for _ in range(order.bit_length() + 2):
        fg = compose_trunc(a, g, order, zero)
        err = [fg[n] - ident[n] for n in range(order + 1)]
        if not any(err):
            return g
        corr = mul_trunc(err, recip_trunc(compose_trunc(ap, g, order, zero), order, zero), order, zero)
        g = [g[n] - corr[n] for n in range(order + 1)]
    raise InternalConsistencyError("series reversion did not converge")


# ---------------------------------------------------------------------------
# power series over KappaPoly
# ---------------------------------------------------------------------------

_VARS = ("h", "J")
_OTHER_VAR = {"h": "J", "J": "h"}


def _coerce_kp(c) -> KappaPoly:
    if isinstance(c, KappaPoly):
        return c
    if isinstance(c, (int, Fraction)):
        return KappaPoly.constant(c)
    raise TypeError(f"cannot use {type(c).__name__} as a series coefficient")


@dataclass(frozen=True, slots=True)
class PowerSeries:
    """Power series in one formal variable ('h' or 'J'), truncated at a fixed order.

    ``coeffs`` has length order + 1; arithmetic between series requires equal
    variable tags and truncates to the minimum order.
    """

    var: str
    coeffs: tuple[KappaPoly, ...]

    def __post_init__(self):
        if self.var not in _VARS:
            raise SeriesUsageError(f"unknown series variable {self.var!r}")
        cs = tuple(_coerce_kp(c) for c in self.coeffs)
        if not cs:
            raise SeriesUsageError("a series needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", cs)

    @staticmethod
    def from_coeffs(var: str, coeffs: Iterable) -> "PowerSeries":
        return PowerSeries(var, tuple(coeffs))

    @staticmethod
    def zero(var: str, order: int) -> "PowerSeries":
        return PowerSeries(var, (KP_ZERO,) * (order + 1))

    @staticmethod
    def identity(var: str, order: int) -> "PowerSeries":
        if order < 1:
            raise SeriesUsageError("identity needs order >= 1")
        return PowerSeries(var, (KP_ZERO, KP_ONE) + (KP_ZERO,) * (order - 1))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, n: int) -> KappaPoly:
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else KP_ZERO

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def truncate(self, order: int) -> "PowerSeries":
        if order >= self.order:
            return self
        return PowerSeries(self.var, self.coeffs[: order + 1])

    def pad(self, order: int) -> "PowerSeries":
        """Extend with zero coefficients; the caller vouches the tail vanishes."""
        if order <= self.order:
            return self.truncate(order)
        return PowerSeries(self.var, self.coeffs + (KP_ZERO,) * (order - self.order))

    def _check_var(self, other: "PowerSeries"):
        if self.var != other.var:
            raise SeriesUsageError(
                f"variable mismatch: {self.var!r} vs {other.var!r}"
            )

    def __add__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        self._check_var(other)
        n = min(self.order, other.order)
        return PowerSeries(
            self.var, tuple(self.coeffs[i] + other.coeffs[i] for i in range(n + 1))
        )

    def __neg__(self):
        return PowerSeries(self.var, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, KappaPoly)):
            return PowerSeries(self.var, tuple(c * other for c in self.coeffs))
        if not isinstance(other, PowerSeries):
            return NotImplemented
        self._check_var(other)
        n = min(self.order, other.order)
        return PowerSeries(
            self.var, tuple(mul_trunc(self.coeffs, other.coeffs, n, KP_ZERO))
        )

    __rmul__ = __mul__

    def compose(self, inner: "PowerSeries") -> "PowerSeries":
        """self(inner(.)), truncated at the minimum of the two orders."""
        if inner.coefficient(0):
            raise SeriesUsageError("inner series must have zero constant term")
        n = min(self.order, inner.order)
        return PowerSeries(
            inner.var, tuple(compose_trunc(self.coeffs, inner.coeffs, n, KP_ZERO))
        )

    def revert(self) -> "PowerSeries":
        """Compositional inverse, returned in the complementary variable."""
        g = revert_trunc(list(self.coeffs), self.order, KP_ZERO)
        return PowerSeries(_OTHER_VAR[self.var], tuple(g))

    def differentiate(self) -> "PowerSeries":
        if self.order == 0:
            return PowerSeries.zero(self.var, 0)
        return PowerSeries(self.var, tuple(deriv_list(self.coeffs)))

    def integrate(self) -> "PowerSeries":
        """Termwise antiderivative with zero constant; order increases by one."""
        return PowerSeries(self.var, tuple(integrate_list(self.coeffs, KP_ZERO)))

    def reflect(self) -> "PowerSeries":
        """The series of x -> f(-x)."""
        return PowerSeries(
            self.var, tuple(-c if n % 2 else c for n, c in enumerate(self.coeffs))
        )

    def flip_kappa(self) -> "PowerSeries":
        return PowerSeries(self.var, tuple(c.flip_kappa() for c in self.coeffs))

    def __str__(self):
        parts = [f"({c})*{self.var}^{n}" for n, c in enumerate(self.coeffs) if c]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True, slots=True)
class LogSeries:
    """A pair (L, R) representing L(x)*log(x) + R(x).

    Both parts share the variable tag and the truncation order.
    """

    log_part: PowerSeries
    regular_part: PowerSeries

    def __post_init__(self):
        if self.log_part.var != self.regular_part.var:
            raise SeriesUsageError("log and regular parts must share a variable")
        if self.log_part.order != self.regular_part.order:
            raise SeriesUsageError("log and regular parts must share an order")

    @property
    def var(self) -> str:
        return self.log_part.var

    @property
    def order(self) -> int:
        return self.log_part.order

    def __neg__(self):
        return LogSeries(-self.log_part, -self.regular_part)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, KappaPoly)):
            return LogSeries(self.log_part * other, self.regular_part * other)
        return NotImplemented

    __rmul__ = __mul__

    def integrate(self) -> "LogSeries":
        """Termwise antiderivative, constants fixed so the value tends to 0 at 0.

        With L = sum l_n x^n the log channel integrates by parts:
        int L log x dx = (sum l_n x^{n+1}/(n+1)) log x - sum l_n x^{n+1}/(n+1)^2.
        """
        l_int = self.log_part.integrate()
        correction = PowerSeries(
            self.var,
            tuple(
                c * Fraction(1, max(n, 1))
                for n, c in enumerate(l_int.coeffs)
            ),
        )
        return LogSeries(l_int, self.regular_part.integrate() - correction)

    def compose_with_log(self, inner: PowerSeries) -> "LogSeries":
        """Substitute x = inner(y) where inner = y + O(y^2).

        log(inner) splits as log y + log(inner/y); the second factor is a
        regular series, so the result is again an L*log + R pair in y:

            (L o inner) * log y + [(L o inner) * log(inner/y) + R o inner]
        """
        if inner.coefficient(0):
            raise SeriesUsageError("inner series must have zero constant term")
        if inner.coefficient(1) != KP_ONE:
            raise SeriesUsageError(
                "compose_with_log needs a unit inner series (linear coefficient 1)"
            )
        n = min(self.order, inner.order - 1)
        unit = PowerSeries(inner.var, inner.coeffs[1:]).pad(n)
        log_unit = PowerSeries(
            inner.var, tuple(log_unit_trunc(unit.coeffs, n, KP_ZERO))
        )
        l_comp = self.log_part.truncate(n).compose(inner.truncate(n))
        r_comp = self.regular_part.truncate(n).compose(inner.truncate(n))
        return LogSeries(l_comp, l_comp * log_unit + r_comp)
