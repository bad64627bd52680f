"""Exact arithmetic in Q(t) with t = q^(1/48).

Every exponent of q that the vertex formulas produce has a denominator
dividing 48, so a value is stored as ``t^shift * num(t) / den(t)`` with
ordinary polynomials ``num``, ``den`` (nonzero constant terms, ``den``
monic, coprime).  That form is unique, so ``==`` is field equality.

Polynomial gcds are delegated to FLINT (``python-flint``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Union

from flint import fmpq, fmpq_poly

LATTICE = 48
HALF = 24  # e48 step of q^(1/2)

Number = Union[int, Fraction]


class NonLatticeExponent(ValueError):
    pass


class NonHalfLattice(ValueError):
    pass


class DenominatorVanishes(ZeroDivisionError):
    pass


_ONE_POLY = fmpq_poly([1])
_ZERO_POLY = fmpq_poly([])


def _e48(e: Number) -> int:
    e = Fraction(e)
    scaled = e * LATTICE
    if scaled.denominator != 1:
        raise NonLatticeExponent(f"q^{e} is not on the 1/{LATTICE} lattice")
    return int(scaled)


def _valuation(p: fmpq_poly) -> int:
    if p[0] != 0:
        return 0
    for i in range(1, p.degree() + 1):
        if p[i] != 0:
            return i
    raise ValueError("valuation of zero polynomial")


_GEN = {}


def _compose_power(p: fmpq_poly, k: int) -> fmpq_poly:
    """p(x^k)."""
    if k == 1:
        return p
    if k not in _GEN:
        _GEN[k] = fmpq_poly([0] * k + [1])
    return p(_GEN[k])


def _monomial(k: int) -> fmpq_poly:
    return fmpq_poly([1]).left_shift(k)


def _to_fraction(c: fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


class QRat:
    """Canonical element of Q(t), t = q^(1/48)."""

    __slots__ = ("shift", "num", "den", "_hash")

    def __init__(self, shift: int, num: fmpq_poly, den: fmpq_poly, _canonical: bool = False):
        if not _canonical:
            shift, num, den = _canonicalize(shift, num, den)
        self.shift = shift
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def from_number(cls, c: Number) -> "QRat":
        c = Fraction(c)
        if c == 0:
            return ZERO
        return cls(0, fmpq_poly([fmpq(c.numerator, c.denominator)]), _ONE_POLY, _canonical=True)

    @classmethod
    def monomial(cls, e48: int, coeff: Number = 1) -> "QRat":
        c = Fraction(coeff)
        if c == 0:
            return ZERO
        return cls(e48, fmpq_poly([fmpq(c.numerator, c.denominator)]), _ONE_POLY, _canonical=True)

    @classmethod
    def from_terms(cls, num_terms: dict[int, Number], den_terms: dict[int, Number] | None = None) -> "QRat":
        """Build ``sum(c t^e) / sum(d t^f)`` from sparse Laurent term maps."""
        n_shift, n_poly = _laurent(num_terms)
        if den_terms is None:
            d_shift, d_poly = 0, _ONE_POLY
        else:
            d_shift, d_poly = _laurent(den_terms)
            if d_poly.is_zero():
                raise ZeroDivisionError("zero denominator")
        return cls(n_shift - d_shift, n_poly, d_poly)

    # -- predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.shift == 0 and self.num.is_one() and self.den.is_one()

    def __bool__(self) -> bool:
        return not self.is_zero()

    def num_terms(self) -> dict[int, Fraction]:
        return {self.shift + i: _to_fraction(c) for i, c in enumerate(self.num.coeffs()) if c != 0}

    def den_terms(self) -> dict[int, Fraction]:
        return {i: _to_fraction(c) for i, c in enumerate(self.den.coeffs()) if c != 0}

    def exponents(self) -> list[int]:
        return sorted(self.num_terms()) + sorted(self.den_terms())

    def min_exponent(self) -> Fraction:
        """Lowest q-exponent of the numerator (useful when ``den == 1``)."""
        return Fraction(min(self.num_terms()), LATTICE)

    # -- arithmetic ---------------------------------------------------
    def __neg__(self) -> "QRat":
        if self.is_zero():
            return self
        return QRat(self.shift, -self.num, self.den, _canonical=True)

    def __add__(self, other) -> "QRat":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        s = min(self.shift, other.shift)
        n1 = self.num.left_shift(self.shift - s)
        n2 = other.num.left_shift(other.shift - s)
        if self.den == other.den:
            return QRat(s, n1 + n2, self.den)
        if self.den.is_one():
            return QRat(s, n1 * other.den + n2, other.den)
        if other.den.is_one():
            return QRat(s, n1 + n2 * self.den, self.den)
        g = self.den.gcd(other.den)
        d1 = self.den // g
        d2 = other.den // g
        return QRat(s, n1 * d2 + n2 * d1, d1 * other.den)

    __radd__ = __add__

    def __sub__(self, other) -> "QRat":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "QRat":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other) -> "QRat":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return ZERO
        if self.den.is_one() and other.den.is_one():
            return QRat(self.shift + other.shift, self.num * other.num, _ONE_POLY, _canonical=True)
        # cross-cancel before multiplying keeps degrees small
        g1 = _reduced_gcd(self.num, other.den)
        g2 = _reduced_gcd(other.num, self.den)
        n = (self.num // g1) * (other.num // g2)
        d = (other.den // g1) * (self.den // g2)
        lc = d.leading_coefficient()
        if lc != 1:
            n = n / lc
            d = d / lc
        return QRat(self.shift + other.shift, n, d, _canonical=True)

    __rmul__ = __mul__

    def inverse(self) -> "QRat":
        if self.is_zero():
            raise ZeroDivisionError("division by zero QRat")
        return QRat(-self.shift, self.den, self.num)

    def __truediv__(self, other) -> "QRat":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other) -> "QRat":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int) -> "QRat":
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparison ---------------------------------------------------
    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.shift == other.shift and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.shift, tuple(self.num.coeffs()), tuple(self.den.coeffs())))
        return self._hash

    def __repr__(self) -> str:
        return f"QRat({self.pretty()})"

    def pretty(self) -> str:
        def fmt(terms: dict[int, Fraction]) -> str:
            parts = []
            for e, c in sorted(terms.items()):
                exp = Fraction(e, LATTICE)
                mono = "1" if e == 0 else f"q^({exp})"
                parts.append(f"{c}*{mono}")
            return " + ".join(parts) if parts else "0"

        n = fmt(self.num_terms())
        if self.den.is_one():
            return n
        return f"({n})/({fmt(self.den_terms())})"

    # -- serialization ------------------------------------------------
    def to_json_obj(self) -> dict:
        return {
            "num": [[e, str(c)] for e, c in sorted(self.num_terms().items())],
            "den": [[e, str(c)] for e, c in sorted(self.den_terms().items())],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: dict) -> "QRat":
        num = {int(e): Fraction(c) for e, c in obj["num"]}
        den = {int(e): Fraction(c) for e, c in obj["den"]}
        return cls.from_terms(num, den)

    @classmethod
    def from_json(cls, s: str) -> "QRat":
        return cls.from_json_obj(json.loads(s))

    def __reduce__(self):
        return (QRat.from_json, (self.to_json(),))


def _laurent(terms: dict[int, Number]) -> tuple[int, fmpq_poly]:
    terms = {int(e): Fraction(c) for e, c in terms.items() if c != 0}
    if not terms:
        return 0, _ZERO_POLY
    lo = min(terms)
    coeffs = [fmpq(0)] * (max(terms) - lo + 1)
    for e, c in terms.items():
        coeffs[e - lo] = fmpq(c.numerator, c.denominator)
    return lo, fmpq_poly(coeffs)


def _reduced_gcd(a: fmpq_poly, b: fmpq_poly) -> fmpq_poly:
    """gcd of two polynomials with nonzero constant terms.

    Both are first compressed by the common gcd g of their exponents
    (most values here are polynomials in t^24 or t^8), which keeps the
    Euclidean steps short; the result is re-expanded by x -> x^g.
    """
    if a.is_constant() or b.is_constant():
        return _ONE_POLY
    qa, na = a.deflation()
    qb, nb = b.deflation()
    g = gcd(na, nb)
    if g == 1:
        return a.gcd(b)
    return _compose_power(_compose_power(qa, na // g).gcd(_compose_power(qb, nb // g)), g)


def _canonicalize(shift: int, num: fmpq_poly, den: fmpq_poly) -> tuple[int, fmpq_poly, fmpq_poly]:
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return 0, _ZERO_POLY, _ONE_POLY
    v = _valuation(num)
    if v:
        num = num.right_shift(v)
        shift += v
    v = _valuation(den)
    if v:
        den = den.right_shift(v)
        shift -= v
    if not den.is_constant():
        g = _reduced_gcd(num, den)
        if not g.is_one():
            num = num // g
            den = den // g
    lc = den.leading_coefficient()
    if lc != 1:
        num = num / lc
        den = den / lc
    return shift, num, den


def _coerce(x) -> QRat:
    if isinstance(x, QRat):
        return x
    if isinstance(x, (int, Fraction)):
        return QRat.from_number(x)
    return NotImplemented


ZERO = QRat(0, _ZERO_POLY, _ONE_POLY, _canonical=True)
ONE = QRat(0, _ONE_POLY, _ONE_POLY, _canonical=True)


# ---------------------------------------------------------------------------
# q-number constructors (symbolic)
# ---------------------------------------------------------------------------

def qpow(e: Number) -> QRat:
    """The monomial q^e; ``48 e`` must be an integer."""
    return QRat.monomial(_e48(e))


def bracket(n: int) -> QRat:
    """Quantum integer [n] = q^(n/2) - q^(-n/2); [0] = 0."""
    if n < 0:
        raise ValueError("bracket expects n >= 0")
    if n == 0:
        return ZERO
    return QRat.from_terms({HALF * n: 1, -HALF * n: -1})


@lru_cache(maxsize=None)
def qfact(n: int) -> QRat:
    """Quantum factorial [n]! = [1][2]...[n], with [0]! = 1."""
    if n < 0:
        raise ValueError("qfact expects n >= 0")
    if n == 0:
        return ONE
    return qfact(n - 1) * bracket(n)


def half_lattice_check(x: QRat) -> bool:
    """True iff every exponent of x is a multiple of 1/2 in q."""
    return all(e % HALF == 0 for e in x.exponents())


def eval_numeric(x: QRat, u0: Number) -> Fraction:
    """Exact value of x at q^(1/2) = u0."""
    u0 = Fraction(u0)
    if not half_lattice_check(x):
        raise NonHalfLattice(f"{x!r} has exponents off the half-integer lattice")
    if x.is_zero():
        return Fraction(0)

    def ev(terms: dict[int, Fraction]) -> Fraction:
        return sum((c * u0 ** (e // HALF) for e, c in terms.items()), Fraction(0))

    d = ev(x.den_terms())
    if d == 0:
        raise DenominatorVanishes(f"denominator of {x!r} vanishes at u0={u0}")
    return ev(x.num_terms()) / d


# ---------------------------------------------------------------------------
# scalar modes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Symbolic:
    """Work in Q(t) with QRat values."""

    def qpow(self, e: Number) -> QRat:
        return qpow(e)

    def bracket(self, n: int) -> QRat:
        return bracket(n)

    def qfact(self, n: int) -> QRat:
        return qfact(n)

    def const(self, c: Number) -> QRat:
        return QRat.from_number(c)

    @property
    def zero(self) -> QRat:
        return ZERO

    @property
    def one(self) -> QRat:
        return ONE


@dataclass(frozen=True)
class NumericHalf:
    """Specialize q^(1/2) = u0; values are exact Fractions."""

    u0: Fraction

    def __post_init__(self):
        u0 = Fraction(self.u0)
        if u0 == 0 or abs(u0) == 1:
            raise ValueError("u0 must avoid 0 and +-1 so that [n] != 0")
        object.__setattr__(self, "u0", u0)

    def qpow(self, e: Number) -> Fraction:
        e48 = _e48(e)
        if e48 % HALF:
            raise NonHalfLattice(f"q^{Fraction(e)} is not a half-integer power")
        return self.u0 ** (e48 // HALF)

    def bracket(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("bracket expects n >= 0")
        return self.u0 ** n - self.u0 ** (-n)

    def qfact(self, n: int) -> Fraction:
        return _numeric_qfact(self.u0, n)

    def const(self, c: Number) -> Fraction:
        return Fraction(c)

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)


@lru_cache(maxsize=None)
def _numeric_qfact(u0: Fraction, n: int) -> Fraction:
    if n < 0:
        raise ValueError("qfact expects n >= 0")
    out = Fraction(1)
    for k in range(1, n + 1):
        out *= u0 ** k - u0 ** (-k)
    return out


SYMBOLIC = Symbolic()
ScalarMode = Union[Symbolic, NumericHalf]
