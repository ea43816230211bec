"""Exact scalars: rationals, signed infinities, p-adic valuations and Laurent polynomials."""
from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Mapping, Union


@total_ordering
class _Infinity:
    """Signed infinity that compares and adds against rationals."""

    __slots__ = ("sign",)

    def __init__(self, sign: int):
        self.sign = sign

    def __repr__(self):
        return "INF" if self.sign > 0 else "NEG_INF"

    def __str__(self):
        return "inf" if self.sign > 0 else "-inf"

    def __eq__(self, other):
        return isinstance(other, _Infinity) and other.sign == self.sign

    def __hash__(self):
        return hash(("inf", self.sign))

    def __lt__(self, other):
        if isinstance(other, _Infinity):
            return self.sign < other.sign
        return self.sign < 0

    def __gt__(self, other):
        if isinstance(other, _Infinity):
            return self.sign > other.sign
        return self.sign > 0

    def __neg__(self):
        return NEG_INF if self.sign > 0 else INF

    def __add__(self, other):
        if isinstance(other, _Infinity) and other.sign != self.sign:
            raise ArithmeticError("cannot add +inf and -inf")
        return self

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other


INF = _Infinity(1)
NEG_INF = _Infinity(-1)

Extended = Union[Fraction, _Infinity]


def is_inf(x) -> bool:
    return isinstance(x, _Infinity)


def frac(x) -> Fraction:
    """Coerce ints, Fractions and 'p/q' strings to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"not an exact rational: {x!r}")


def parse_extended(x) -> Extended:
    if isinstance(x, _Infinity):
        return x
    if isinstance(x, str) and x.strip() in ("inf", "+inf", "∞"):
        return INF
    if isinstance(x, str) and x.strip() in ("-inf", "-∞"):
        return NEG_INF
    return frac(x)


def fmt(x) -> str:
    """Exact 'p/q' rendering; infinities as 'inf' / '-inf'."""
    if isinstance(x, _Infinity):
        return str(x)
    x = frac(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _vp_int(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def vp(x, p: int) -> Extended:
    """p-adic valuation of a rational; vp(0) = INF."""
    x = frac(x)
    if x == 0:
        return INF
    return Fraction(_vp_int(abs(x.numerator), p) - _vp_int(x.denominator, p))


def is_prime(p: int) -> bool:
    if not isinstance(p, int) or p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def ceil_to_lattice(x: Extended, m: int = 1) -> Extended:
    """Smallest element of (1/m)Z that is >= x."""
    if is_inf(x):
        return x
    x = frac(x)
    n = -((-x.numerator * m) // x.denominator)
    return Fraction(n, m)


class Laurent:
    """Laurent polynomial in t with rational coefficients, stored as {exponent: coeff}."""

    __slots__ = ("_c", "_h")

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        c = {}
        for e, v in (coeffs or {}).items():
            v = frac(v)
            if v != 0:
                c[int(e)] = v
        self._c = c
        self._h = None

    @classmethod
    def const(cls, x) -> "Laurent":
        return cls({0: x})

    @classmethod
    def monomial(cls, coeff, exp: int) -> "Laurent":
        return cls({exp: coeff})

    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    def items(self) -> Iterable:
        return sorted(self._c.items())

    def coeff(self, e: int) -> Fraction:
        return self._c.get(e, Fraction(0))

    def is_zero(self) -> bool:
        return not self._c

    def degrees(self):
        if not self._c:
            return None
        return min(self._c), max(self._c)

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def _coerce(self, other):
        if isinstance(other, Laurent):
            return other
        return Laurent.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        c = dict(self._c)
        for e, v in other._c.items():
            c[e] = c.get(e, 0) + v
        return Laurent(c)

    __radd__ = __add__

    def __neg__(self):
        return Laurent({e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        c: dict = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                c[e1 + e2] = c.get(e1 + e2, 0) + v1 * v2
        return Laurent(c)

    __rmul__ = __mul__

    def inverse(self) -> "Laurent":
        # only monomials are units
        if not self.is_monomial():
            raise ZeroDivisionError(f"{self} is not a unit of Q[t, 1/t]")
        (e, v), = self._c.items()
        return Laurent({-e: 1 / v})

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, Laurent):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == Laurent.const(other)._c
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash(tuple(sorted(self._c.items())))
        return self._h

    def __repr__(self):
        if not self._c:
            return "0"
        parts = []
        for e, v in sorted(self._c.items()):
            if e == 0:
                parts.append(fmt(v))
            else:
                parts.append(f"{fmt(v)}*t^{e}")
        return " + ".join(parts)
