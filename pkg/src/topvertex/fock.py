"""Charged free-fermion Fock space on partition-labelled basis states.

Wedge convention: the charge-c state with shape lam is the semi-infinite
wedge z^(a_1) ^ z^(a_2) ^ ... with a_i = i - 1/2 - c - lam_i (strictly
increasing).  psi_r wedges z^r on the left; psi*_r deletes z^(-r).  The
vacuum has a_i = i - 1/2, so psi_r|0> = 0 for r > 0.

Half-integer modes r are passed either as Fractions or as odd integers
``2r`` (functions with a ``2`` in the argument name take the latter).
Coefficients may live in any commutative ring (QRat, Fraction, MultiPoly).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable, Iterable, Optional, Sequence

from .linalg import det, det_cofactor
from .partitions import EMPTY, Partition, contains, enumerate_upto, kappa, partitions_of, subpartitions
from .polys import MultiPoly
from .qnum import ONE, SYMBOLIC, ScalarMode
from .symfunc import SpecPoint, skew_schur_spec


class MissingCutoff(ValueError):
    pass


class ShapeMismatch(ValueError):
    pass


def _is_zero(x) -> bool:
    return x.is_zero() if hasattr(x, "is_zero") else x == 0


def _two(r) -> int:
    """2r as an odd integer."""
    r2 = Fraction(r) * 2
    if r2.denominator != 1 or r2.numerator % 2 == 0:
        raise ValueError(f"fermion modes are half-odd integers, got {r}")
    return int(r2)


@dataclass(frozen=True, order=True)
class BasisState:
    charge: int
    shape: Partition

    def levels2(self, length: int) -> list[int]:
        """First ``length`` wedge entries (doubled); length >= len(shape)."""
        c, lam = self.charge, self.shape
        return [2 * i - 1 - 2 * c - 2 * lam[i - 1] for i in range(1, length + 1)]

    def tail_start2(self, length: int) -> int:
        """Doubled level of entry length+1; every level from there up is occupied."""
        return 2 * (length + 1) - 1 - 2 * self.charge

    def maya(self, length: int) -> list[Fraction]:
        return [Fraction(x, 2) for x in self.levels2(length)]

    def __str__(self) -> str:
        return f"|{self.charge};{self.shape}>"


VACUUM = BasisState(0, EMPTY)


def _state_from_levels2(levels: list[int], charge: int) -> BasisState:
    parts = []
    for i, x in enumerate(levels, start=1):
        p = (2 * i - 1 - 2 * charge - x) // 2
        if p < 0:
            raise AssertionError("wedge entries out of order")
        parts.append(p)
    while parts and parts[-1] == 0:
        parts.pop()
    return BasisState(charge, Partition(tuple(parts)))


def _length_for(state: BasisState, r2: int) -> int:
    # enough explicit entries that every level <= |r| + 1 is explicit
    need = (abs(r2) + 3 + 2 * state.charge) // 2 + 1
    return max(len(state.shape), need, 1)


def psi_basis(r2: int, state: BasisState) -> Optional[tuple[int, BasisState]]:
    """psi_r on a basis state: (sign, new state) or None."""
    L = _length_for(state, r2)
    levels = state.levels2(L)
    if r2 in levels:
        return None
    below = sum(1 for x in levels if x < r2)
    new = sorted(levels + [r2])
    return (-1) ** below, _state_from_levels2(new, state.charge + 1)


def psi_star_basis(r2: int, state: BasisState) -> Optional[tuple[int, BasisState]]:
    """psi*_r on a basis state: removes level -r with sign (-1)^(k-1)."""
    L = _length_for(state, r2)
    levels = state.levels2(L)
    target = -r2
    if target not in levels:
        return None
    k = levels.index(target) + 1
    new = levels[: k - 1] + levels[k:]
    return (-1) ** (k - 1), _state_from_levels2(new, state.charge - 1)


class FockVector:
    """Finite linear combination of basis states."""

    __slots__ = ("coeffs", "cutoff")

    def __init__(self, coeffs: Optional[dict[BasisState, Any]] = None, cutoff: Optional[int] = None):
        self.coeffs: dict[BasisState, Any] = {}
        self.cutoff = cutoff
        for s, c in (coeffs or {}).items():
            if cutoff is not None and s.shape.size > cutoff:
                continue
            if not _is_zero(c):
                self.coeffs[s] = c

    @classmethod
    def basis(cls, shape: Partition | Iterable[int] = EMPTY, charge: int = 0, coeff: Any = ONE) -> "FockVector":
        shape = shape if isinstance(shape, Partition) else Partition(tuple(shape))
        return cls({BasisState(charge, shape): coeff})

    @classmethod
    def vacuum(cls, coeff: Any = ONE) -> "FockVector":
        return cls({VACUUM: coeff})

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, state: BasisState | Partition, default: Any = 0) -> Any:
        if isinstance(state, Partition):
            state = BasisState(0, state)
        return self.coeffs.get(state, default)

    def items(self):
        return sorted(self.coeffs.items(), key=lambda kv: (kv[0].charge, kv[0].shape.size, kv[0].shape))

    def __add__(self, other: "FockVector") -> "FockVector":
        out = dict(self.coeffs)
        for s, c in other.coeffs.items():
            out[s] = out[s] + c if s in out else c
        cut = _min_cutoff(self.cutoff, other.cutoff)
        return FockVector(out, cut)

    def __neg__(self) -> "FockVector":
        return FockVector({s: -c for s, c in self.coeffs.items()}, self.cutoff)

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + (-other)

    def scale(self, x: Any) -> "FockVector":
        return FockVector({s: c * x for s, c in self.coeffs.items()}, self.cutoff)

    def map_basis(self, f: Callable[[BasisState], Iterable[tuple[Any, BasisState]]]) -> "FockVector":
        out: dict[BasisState, Any] = {}
        for s, c in self.coeffs.items():
            for w, t in f(s):
                v = c * w
                out[t] = out[t] + v if t in out else v
        return FockVector(out, self.cutoff)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FockVector):
            return NotImplemented
        return (self - other).is_zero()

    def __repr__(self) -> str:
        if not self.coeffs:
            return "FockVector(0)"
        return "FockVector(" + " + ".join(f"({c!r}){s}" for s, c in self.items()) + ")"


def _min_cutoff(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


# ---------------------------------------------------------------------------
# fermions, bosons, cut-and-join
# ---------------------------------------------------------------------------

def apply_psi(r, v: FockVector) -> FockVector:
    r2 = _two(r)

    def act(s: BasisState):
        res = psi_basis(r2, s)
        return [] if res is None else [res]

    return v.map_basis(act)


def apply_psi_star(r, v: FockVector) -> FockVector:
    r2 = _two(r)

    def act(s: BasisState):
        res = psi_star_basis(r2, s)
        return [] if res is None else [res]

    return v.map_basis(act)


def _alpha_basis(n: int, s: BasisState) -> list[tuple[int, BasisState]]:
    # alpha_n = sum_s psi_(-s) psi*_(s+n): move an occupied level x to x + n
    L = len(s.shape) + abs(n) + 2
    levels = s.levels2(L)
    top = s.tail_start2(L)
    out = []
    for x2 in levels:
        y2 = x2 + 2 * n
        if y2 >= top or y2 in levels:
            continue
        # psi*_(s+n) removes x, so s + n = -x; psi_(-s) inserts x + n
        first = psi_star_basis(-x2, s)
        assert first is not None
        sign1, mid = first
        second = psi_basis(y2, mid)
        if second is None:
            continue
        sign2, end = second
        out.append((sign1 * sign2, end))
    return out


def apply_alpha(n: int, v: FockVector) -> FockVector:
    if n == 0:
        raise ValueError("alpha_0 is not used; n must be nonzero")
    return v.map_basis(lambda s: _alpha_basis(n, s))


def k_normal_ordered(s: BasisState) -> Fraction:
    """sum_s s^2 :psi_s psi*_(-s): on a basis state, from its level set."""
    L = len(s.shape) + abs(s.charge) + 2
    levels = set(s.levels2(L))
    top = s.tail_start2(L)
    occupied_neg = sum(Fraction(x * x, 4) for x in levels if x < 0)
    empty_pos = sum(Fraction(x * x, 4) for x in range(1, top, 2) if x not in levels)
    return occupied_neg - empty_pos


def apply_K(v: FockVector) -> FockVector:
    """Cut-and-join: eigenvalue kappa on charge zero, normal-ordered sum otherwise."""
    def act(s: BasisState):
        ev = kappa(s.shape) if s.charge == 0 else k_normal_ordered(s)
        return [(ev, s)] if ev != 0 else []

    return v.map_basis(act)


def apply_q_K(a: Fraction, v: FockVector, mode: ScalarMode = SYMBOLIC) -> FockVector:
    """q^(a K / 2) acting diagonally."""
    def act(s: BasisState):
        ev = kappa(s.shape) if s.charge == 0 else k_normal_ordered(s)
        return [(mode.qpow(Fraction(a) * ev / 2), s)]

    return v.map_basis(act)


def apply_C(v: FockVector) -> FockVector:
    return v.map_basis(lambda s: [(s.charge, s)] if s.charge else [])


def apply_R(v: FockVector) -> FockVector:
    """Shift operator: (charge, shape) -> (charge - 1, shape)."""
    return v.map_basis(lambda s: [(1, BasisState(s.charge - 1, s.shape))])


# ---------------------------------------------------------------------------
# vertex operators
# ---------------------------------------------------------------------------

class Alphabet:
    """Source of h_k values for Gamma operators; subclasses fill ``h``."""

    one: Any

    def h(self, k: int) -> Any:
        raise NotImplementedError

    def skew(self, lam: Partition, eta: Partition) -> Any:
        if not contains(lam, eta):
            return self.one * 0
        n = len(lam)
        M = [[self.h(lam[i] - eta[j] - i + j) for j in range(n)] for i in range(n)]
        return det_cofactor(M, self.one)


class SpecAlphabet(Alphabet):
    def __init__(self, s: SpecPoint, mode: ScalarMode = SYMBOLIC):
        self.s, self.mode = s, mode
        self.one = mode.one

    def skew(self, lam: Partition, eta: Partition) -> Any:
        return skew_schur_spec(lam, eta, self.s, self.mode)


class MiwaAlphabet(Alphabet):
    """Explicit times t_1..t_K (ring elements); t_k = 0 for k > K."""

    def __init__(self, times: Sequence[Any], one: Any):
        self.times = list(times)
        self.one = one
        self._h = [one]

    def h(self, k: int) -> Any:
        if k < 0:
            return self.one * 0
        while len(self._h) <= k:
            j = len(self._h)
            total = self.one * 0
            for i in range(1, min(j, len(self.times)) + 1):
                total = total + self.times[i - 1] * self._h[j - i] * i
            self._h.append(total * Fraction(1, j))
        return self._h[k]


class VariableAlphabet(Alphabet):
    """The one-letter alphabet {x_i}: h_k = x_i^k."""

    def __init__(self, nvars: int, i: int):
        self.nvars, self.i = nvars, i
        self.one = MultiPoly.const(nvars)

    def h(self, k: int) -> MultiPoly:
        if k < 0:
            return MultiPoly.zero(self.nvars)
        return MultiPoly.var(self.nvars, self.i, k)

    def times(self, K: int) -> list[MultiPoly]:
        """Miwa times t_k = x^k / k of the same alphabet."""
        return [MultiPoly.var(self.nvars, self.i, k, Fraction(1, k)) for k in range(1, K + 1)]


def apply_gamma(sign: str, alphabet: Alphabet, v: FockVector, cutoff: Optional[int] = None) -> FockVector:
    """Gamma_-(t)|mu> = sum s_(lam/mu)|lam>, Gamma_+(t)|mu> = sum s_(mu/lam)|lam>."""
    if sign == "-":
        if cutoff is None:
            raise MissingCutoff("Gamma_- produces an infinite sum; pass a cutoff")

        def act(s: BasisState):
            out = []
            for n in range(s.shape.size, cutoff + 1):
                for lam in partitions_of(n):
                    c = alphabet.skew(lam, s.shape)
                    if not _is_zero(c):
                        out.append((c, BasisState(s.charge, lam)))
            return out

        res = v.map_basis(act)
        res.cutoff = _min_cutoff(v.cutoff, cutoff)
        return res
    if sign == "+":
        def act(s: BasisState):
            out = []
            for lam in subpartitions(s.shape):
                c = alphabet.skew(s.shape, lam)
                if not _is_zero(c):
                    out.append((c, BasisState(s.charge, lam)))
            return out

        return v.map_basis(act)
    raise ValueError("sign must be '+' or '-'")


def apply_gamma_bosonic(sign: str, times: Sequence[Any], v: FockVector, one: Any,
                        cutoff: Optional[int] = None) -> FockVector:
    """exp(sum_n t_n alpha_(-+n)) by direct exponentiation; oracle for apply_gamma."""
    if sign == "-" and cutoff is None:
        raise MissingCutoff("Gamma_- produces an infinite sum; pass a cutoff")
    step = -1 if sign == "-" else 1

    def generator(w: FockVector) -> FockVector:
        acc = FockVector({}, w.cutoff)
        for n, t in enumerate(times, start=1):
            if _is_zero(t):
                continue
            acc = acc + apply_alpha(step * n, w).scale(t)
        return acc

    start = FockVector(dict(v.coeffs), cutoff if sign == "-" else None)
    total = start
    term = start
    k = 1
    while True:
        term = generator(term).scale(Fraction(1, k))
        if sign == "-":
            term = FockVector(term.coeffs, cutoff)
        if term.is_zero():
            break
        total = total + term
        k += 1
    if sign == "-":
        total.cutoff = cutoff
    return total


# ---------------------------------------------------------------------------
# Wick's theorem
# ---------------------------------------------------------------------------

PSI = "psi"
PSI_STAR = "psi*"


@dataclass(frozen=True)
class LinearFermion:
    """sum of coeff * psi_r or coeff * psi*_r; keys are (flavor, 2r)."""

    terms: tuple[tuple[tuple[str, int], Any], ...]

    @classmethod
    def of(cls, mapping: dict[tuple[str, int], Any]) -> "LinearFermion":
        return cls(tuple(sorted(mapping.items())))

    @classmethod
    def psi(cls, r, c: Any = ONE) -> "LinearFermion":
        return cls((((PSI, _two(r)), c),))

    @classmethod
    def psi_star(cls, r, c: Any = ONE) -> "LinearFermion":
        return cls((((PSI_STAR, _two(r)), c),))

    def flavors(self) -> set[str]:
        return {f for (f, _), _ in self.terms}

    def apply(self, v: FockVector) -> FockVector:
        out = FockVector({}, v.cutoff)
        for (flavor, r2), c in self.terms:
            r = Fraction(r2, 2)
            w = apply_psi(r, v) if flavor == PSI else apply_psi_star(r, v)
            out = out + w.scale(c)
        return out


def _two_point_modes(f1: str, r1: int, f2: str, r2: int) -> int:
    # <psi_r psi*_s> = <psi*_r psi_s> = 1 iff r = -s > 0
    if f1 == f2:
        return 0
    return 1 if (r1 == -r2 and r1 > 0) else 0


def two_point(a: LinearFermion, b: LinearFermion, zero: Any = None) -> Any:
    total = zero
    for (f1, r1), c1 in a.terms:
        for (f2, r2), c2 in b.terms:
            if _two_point_modes(f1, r1, f2, r2):
                term = c1 * c2
                total = term if total is None else total + term
    if total is None:
        total = a.terms[0][1] * 0 if a.terms else 0
    return total


def wick_vev_bruteforce(ws: Sequence[LinearFermion]) -> Any:
    """Signed sum over pairings: <w1..wk> = sum_j (-1)^j <w1 wj><rest>."""
    ws = list(ws)
    if not ws:
        return ONE
    if len(ws) % 2:
        return ONE * 0
    first, rest = ws[0], ws[1:]
    total = ONE * 0
    for j, wj in enumerate(rest):
        pair = two_point(first, wj, ONE * 0)
        if _is_zero(pair):
            continue
        sub = wick_vev_bruteforce(rest[:j] + rest[j + 1:])
        term = pair * sub
        total = total - term if j % 2 else total + term
    return total


def wick_vev_det(ws: Sequence[LinearFermion]) -> Any:
    """Determinant form for alternating phi_1 phi*_1 ... phi_n phi*_n."""
    ws = list(ws)
    if len(ws) % 2:
        raise ShapeMismatch("determinant form needs an even number of factors")
    phis, stars = ws[0::2], ws[1::2]
    if any(p.flavors() - {PSI} for p in phis) or any(s.flavors() - {PSI_STAR} for s in stars):
        raise ShapeMismatch("expected psi-modes in odd slots and psi*-modes in even slots")
    n = len(phis)
    zero = ONE * 0
    M = [[two_point(phis[i], stars[j], zero) if j >= i else -two_point(stars[j], phis[i], zero)
          for j in range(n)] for i in range(n)]
    return det(M, ONE)


# ---------------------------------------------------------------------------
# direct evaluation
# ---------------------------------------------------------------------------

def pairing(bra: BasisState, v: FockVector, zero: Any = None) -> Any:
    if zero is None:
        zero = ONE * 0
    return v.coeffs.get(bra, zero)


def vev_direct(ops: Sequence[Any], state: Optional[FockVector] = None, bra: BasisState = VACUUM) -> Any:
    """<bra| op_1 ... op_k |state>, applying the operators right to left.

    Each op is one of: LinearFermion; ("psi", r); ("psi*", r); ("alpha", n);
    ("K",); ("qK", a); ("gamma", sign, Alphabet, cutoff).
    """
    v = state if state is not None else FockVector.vacuum()
    for op in reversed(list(ops)):
        v = _apply_op(op, v)
    return pairing(bra, v)


def _apply_op(op: Any, v: FockVector) -> FockVector:
    if isinstance(op, LinearFermion):
        return op.apply(v)
    kind = op[0]
    if kind == PSI:
        return apply_psi(op[1], v)
    if kind == PSI_STAR:
        return apply_psi_star(op[1], v)
    if kind == "alpha":
        return apply_alpha(op[1], v)
    if kind == "K":
        return apply_K(v)
    if kind == "qK":
        return apply_q_K(op[1], v)
    if kind == "gamma":
        sign, alphabet = op[1], op[2]
        cutoff = op[3] if len(op) > 3 else None
        if sign == "-" and cutoff is None:
            raise MissingCutoff("every Gamma_- in a sequence needs a cutoff")
        return apply_gamma(sign, alphabet, v, cutoff)
    raise ValueError(f"unknown operator {op!r}")


def truncated_basis(max_size: int, charges: Iterable[int] = (0,)) -> list[BasisState]:
    return [BasisState(c, lam) for c in charges for lam in enumerate_upto(max_size)]
