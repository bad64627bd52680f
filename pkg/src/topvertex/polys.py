"""Sparse multivariate polynomials with exact rational coefficients.

Used for Schur polynomials in Miwa times, tau series and formal (z, w)
series.  Variables carry integer weights so products can be truncated at a
weighted degree.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional

Expo = tuple[int, ...]


class MultiPoly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Optional[dict[Expo, Fraction]] = None):
        self.nvars = nvars
        self.terms: dict[Expo, Fraction] = {}
        if terms:
            for e, c in terms.items():
                if c != 0:
                    if len(e) != nvars:
                        raise ValueError("exponent length mismatch")
                    self.terms[tuple(e)] = Fraction(c)

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, nvars: int, c=1) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def var(cls, nvars: int, i: int, power: int = 1, c=1) -> "MultiPoly":
        e = [0] * nvars
        e[i] = power
        return cls(nvars, {tuple(e): Fraction(c)})

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls(nvars)

    def _new(self, terms: dict[Expo, Fraction]) -> "MultiPoly":
        out = MultiPoly(self.nvars)
        out.terms = terms
        return out

    # -- basic protocol -----------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(self.nvars, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "MultiPoly(0)"
        parts = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(f"x{i}^{p}" if p > 1 else f"x{i}" for i, p in enumerate(e) if p)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return "MultiPoly(" + " + ".join(parts) + ")"

    def coeff(self, e: Expo) -> Fraction:
        return self.terms.get(tuple(e), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coeff((0,) * self.nvars)

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return MultiPoly.const(self.nvars, other)

    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return self._new(out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._coerce(other) - self

    def scale(self, c) -> "MultiPoly":
        c = Fraction(c)
        if c == 0:
            return MultiPoly(self.nvars)
        return self._new({e: v * c for e, v in self.terms.items()})

    def mul(self, other, weights: Optional[Expo] = None, max_degree: Optional[int] = None) -> "MultiPoly":
        """Product, dropping monomials of weighted degree above ``max_degree``."""
        other = self._coerce(other)
        out: dict[Expo, Fraction] = {}
        if weights is not None and max_degree is not None:
            da = {e: _wdeg(e, weights) for e in self.terms}
            db = {e: _wdeg(e, weights) for e in other.terms}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                if weights is not None and max_degree is not None and da[e1] + db[e2] > max_degree:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return self._new(out)

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return self.mul(other)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "MultiPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int) -> "MultiPoly":
        out = MultiPoly.const(self.nvars)
        for _ in range(k):
            out = out * self
        return out

    # -- structure ----------------------------------------------------
    def truncate(self, weights: Expo, max_degree: int) -> "MultiPoly":
        return self._new({e: c for e, c in self.terms.items() if _wdeg(e, weights) <= max_degree})

    def homogeneous_part(self, weights: Expo, degree: int) -> "MultiPoly":
        return self._new({e: c for e, c in self.terms.items() if _wdeg(e, weights) == degree})

    def weighted_degrees(self, weights: Expo) -> set[int]:
        return {_wdeg(e, weights) for e in self.terms}

    def diff(self, i: int) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return self._new(out)

    def embed(self, nvars: int, positions: Iterable[int]) -> "MultiPoly":
        """Re-index variable i as variable positions[i] in an nvars-variable ring."""
        pos = list(positions)
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * nvars
            for i, p in enumerate(e):
                e2[pos[i]] += p
            out[tuple(e2)] = c
        return MultiPoly(nvars, out)

    def substitute(self, images: list["MultiPoly"], weights: Optional[Expo] = None,
                   max_degree: Optional[int] = None) -> "MultiPoly":
        """Replace variable i by images[i] (all in a common ring)."""
        target = images[0].nvars
        out = MultiPoly(target)
        cache: dict[tuple[int, int], MultiPoly] = {}

        def power(i: int, k: int) -> MultiPoly:
            if (i, k) not in cache:
                cache[(i, k)] = (MultiPoly.const(target) if k == 0
                                 else power(i, k - 1).mul(images[i], weights, max_degree))
            return cache[(i, k)]

        for e, c in self.terms.items():
            term = MultiPoly.const(target, c)
            for i, p in enumerate(e):
                if p:
                    term = term.mul(power(i, p), weights, max_degree)
            out = out + term
        return out

    # -- serialization ------------------------------------------------
    def to_json_obj(self) -> list[dict]:
        return [{"expo": list(e), "coeff": str(c)} for e, c in sorted(self.terms.items())]

    @classmethod
    def from_json_obj(cls, nvars: int, obj: list[dict]) -> "MultiPoly":
        return cls(nvars, {tuple(t["expo"]): Fraction(t["coeff"]) for t in obj})


def _wdeg(e: Expo, weights: Expo) -> int:
    return sum(a * w for a, w in zip(e, weights))
