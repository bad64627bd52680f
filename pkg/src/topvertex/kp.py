"""Truncated tau series and exact Hirota bilinear checks.

Conventions.  A tau series in ``c`` components is

    tau(t^1, .., t^c) = sum_{mu^1..mu^c} W_{mu} prod_j s_{mu^j}(t^j),

with every |mu^j| <= N.  The Miwa shift t - [z^-1] replaces t_k by
t_k - z^-k / k.  Writing y = 1/z,

    s_mu(t - [y]) = sum_a (-y)^a s_{mu/(1^a)}(t),
    s_mu(t + [y]) = sum_b   y^b  s_{mu/(b)}(t),
    exp(xi(t - s, z)) = sum_k h_k(t - s) y^-k,

so the z^-1 coefficient of the bilinear expression is a finite sum.  Giving
y weight 1 makes every term homogeneous: tau components of sizes D1, D2
feed residue monomials of weighted degree D1 + D2 - 1.  Degrees <= d are
therefore exact as soon as N >= d + 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, Iterator, Optional, Sequence

from .linalg import solve
from .partitions import EMPTY, Partition, enumerate_upto, partitions_of
from .polys import MultiPoly
from .qnum import NumericHalf, eval_numeric
from .symfunc import h_miwa, schur_miwa, skew_schur_miwa
from .vertex import Framing, VertexKey, w_skew

Triple = tuple[Partition, ...]
CoeffFn = Callable[[Triple], Fraction]


@lru_cache(maxsize=None)
def vertex_coefficient(key: VertexKey, u0: Fraction, route: str = "symbolic") -> Fraction:
    """W(key) at q^(1/2) = u0, through the symbolic value or the numeric mode."""
    if route == "symbolic":
        return eval_numeric(w_skew(key), u0)
    if route == "numeric":
        return w_skew(key, NumericHalf(u0))
    raise ValueError(f"unknown route {route!r}")


@dataclass
class TauSeries:
    components: int
    N: int
    u0: Fraction = Fraction(2, 3)
    framing: Framing = Framing(0, 0, 0)
    route: str = "symbolic"
    coeff_fn: Optional[CoeffFn] = None
    overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.components not in (1, 3):
            raise ValueError("components must be 1 or 3")
        if self.N < 0:
            raise ValueError("N must be nonnegative")
        self.u0 = Fraction(self.u0)
        if self.u0 == 0 or abs(self.u0) == 1:
            raise ValueError("u0 must avoid 0 and +-1")

    def _pad(self, triple: Sequence[Partition]) -> tuple[Partition, Partition, Partition]:
        t = tuple(triple) + (EMPTY,) * (3 - len(triple))
        return t[0], t[1], t[2]

    def coeff(self, triple: Sequence[Partition]) -> Fraction:
        triple = tuple(triple)
        if len(triple) != self.components or any(mu.size > self.N for mu in triple):
            return Fraction(0)
        if triple in self.overrides:
            return self.overrides[triple]
        if self.coeff_fn is not None:
            return Fraction(self.coeff_fn(triple))
        key = VertexKey(*self._pad(triple), self.framing)
        return vertex_coefficient(key, self.u0, self.route)

    def triples(self, max_total: Optional[int] = None) -> Iterator[Triple]:
        """All included index tuples, optionally with total size <= max_total."""
        cap = self.N * self.components if max_total is None else max_total
        sizes = range(min(self.N, cap) + 1)
        for ns in product(sizes, repeat=self.components):
            if sum(ns) > cap:
                continue
            for combo in product(*(partitions_of(n) for n in ns)):
                yield combo

    def with_cutoff(self, N: int) -> "TauSeries":
        return TauSeries(self.components, N, self.u0, self.framing, self.route, self.coeff_fn, dict(self.overrides))

    def perturbed(self, triple: Sequence[Partition], delta: Fraction = Fraction(1)) -> "TauSeries":
        t = TauSeries(self.components, self.N, self.u0, self.framing, self.route, self.coeff_fn, dict(self.overrides))
        t.overrides[tuple(triple)] = self.coeff(triple) + Fraction(delta)
        return t

    def poly(self, max_total: Optional[int] = None) -> MultiPoly:
        """tau as a polynomial in t^j_k (variable (j-1)*N + k-1), k <= N."""
        K, c = max(self.N, 1), self.components
        nv = K * c
        out = MultiPoly.zero(nv)
        for triple in self.triples(max_total):
            w = self.coeff(triple)
            if w == 0:
                continue
            term = MultiPoly.const(nv, w)
            for j, mu in enumerate(triple):
                term = term * schur_miwa(mu, K).embed(nv, range(j * K, (j + 1) * K))
            out = out + term
        return out


def build_tau(components: int, framing: Framing | Sequence[int], N: int, u0=Fraction(2, 3),
              route: str = "symbolic") -> TauSeries:
    f = framing if isinstance(framing, Framing) else Framing(*framing)
    return TauSeries(components, N, Fraction(u0), f, route)


def bogoliubov_tau(A: Sequence[Sequence[Fraction]], N: int) -> TauSeries:
    """One-component tau of exp(sum A_mn psi_(-m-1/2) psi*_(-n-1/2))|0>.

    The coefficient of s_mu is det((-1)^(n_l) A_(m_k n_l)) over Frobenius
    coordinates; such series solve KP for any A.
    """
    from .linalg import det
    from .partitions import frobenius

    def entry(m: int, n: int) -> Fraction:
        # entries outside the given block are zero
        if m < len(A) and n < len(A[m]):
            return Fraction(A[m][n]) * (-1) ** n
        return Fraction(0)

    def fn(triple: Triple) -> Fraction:
        f = frobenius(triple[0])
        M = [[entry(m, n) for n in f.ns] for m in f.ms]
        return det(M, Fraction(1))

    return TauSeries(1, N, coeff_fn=fn)


def bogoliubov_tau_3(blocks: dict[tuple[int, int], Sequence[Sequence[Fraction]]], N: int) -> TauSeries:
    """Three-component charge-zero tau of a Bogoliubov transform with blocks A^{ij}.

    Coefficients use the same block determinant as the vertex:
    B_kl = (-1)^n A^{ij}_{m n} over the Frobenius coordinates of mu^1, mu^2, mu^3.
    Missing blocks or entries are zero.
    """
    from .linalg import det
    from .partitions import frobenius

    def entry(i: int, j: int, m: int, n: int) -> Fraction:
        A = blocks.get((i, j))
        if A is None or m >= len(A) or n >= len(A[m]):
            return Fraction(0)
        return Fraction(A[m][n]) * (-1) ** n

    def fn(triple: Triple) -> Fraction:
        rows = [(i + 1, f) for i, mu in enumerate(triple) for f in [frobenius(mu)]]
        ms = [(i, m) for i, f in rows for m in f.ms]
        ns = [(j, n) for j, f in rows for n in f.ns]
        return det([[entry(i, j, m, n) for (j, n) in ns] for (i, m) in ms], Fraction(1))

    return TauSeries(3, N, coeff_fn=fn)


def extract_schur_coefficients(tau: TauSeries, poly: Optional[MultiPoly] = None) -> dict[Triple, Fraction]:
    """Recover the Schur-basis coefficients of tau.poly() by exact linear solves."""
    K, c = max(tau.N, 1), tau.components
    nv = K * c
    poly = tau.poly() if poly is None else poly
    out: dict[Triple, Fraction] = {}
    for ns in product(range(tau.N + 1), repeat=c):
        basis = list(product(*(partitions_of(n) for n in ns)))
        polys = []
        for combo in basis:
            term = MultiPoly.const(nv)
            for j, mu in enumerate(combo):
                term = term * schur_miwa(mu, K).embed(nv, range(j * K, (j + 1) * K))
            polys.append(term)
        # monomials with component degrees ns are indexed by the same tuples of partitions
        monos = []
        for combo in basis:
            e = [0] * nv
            for j, mu in enumerate(combo):
                for part in mu.parts:
                    e[j * K + part - 1] += 1
            monos.append(tuple(e))
        M = [[p.coeff(m) for p in polys] for m in monos]
        b = [poly.coeff(m) for m in monos]
        for combo, x in zip(basis, solve(M, b)):
            out[combo] = x
    return out


# ---------------------------------------------------------------------------
# Hirota residues
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Entry:
    monomial: tuple[int, ...]
    value: Fraction
    cutoff_stable: bool


@dataclass
class BilinearReport:
    variables: list[str]
    entries: list[Entry]
    degree: int
    params: dict = field(default_factory=dict)

    @property
    def checked(self) -> int:
        return len(self.entries)

    @property
    def stable(self) -> int:
        return sum(1 for e in self.entries if e.cutoff_stable)

    @property
    def nonzero_stable(self) -> int:
        return sum(1 for e in self.entries if e.cutoff_stable and e.value != 0)

    @property
    def nonzero(self) -> int:
        return sum(1 for e in self.entries if e.value != 0)

    def ok(self) -> bool:
        return self.nonzero_stable == 0

    def to_json_obj(self) -> dict:
        return {
            "params": self.params,
            "checked": self.checked,
            "stable": self.stable,
            "nonzero_stable": self.nonzero_stable,
            "max_degree": self.degree,
        }

    def nonzero_entries(self, stable_only: bool = True) -> list[Entry]:
        return [e for e in self.entries if e.value != 0 and (e.cutoff_stable or not stable_only)]

    def describe(self, e: Entry) -> str:
        parts = [f"{v}^{p}" if p > 1 else v for v, p in zip(self.variables, e.monomial) if p]
        return "*".join(parts) or "1"


def _monomials(weights: Sequence[int], max_degree: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []

    def rec(i: int, left: int, acc: list[int]):
        if i == len(weights):
            out.append(tuple(acc))
            return
        for p in range(left // weights[i] + 1):
            acc.append(p)
            rec(i + 1, left - p * weights[i], acc)
            acc.pop()

    rec(0, max_degree, [])
    return sorted(out)


class _Layout:
    """Variables t^j_k then s^j_k for j <= c, k <= d; weight of t^j_k is k."""

    def __init__(self, components: int, d: int):
        self.c, self.d = components, max(d, 1)
        self.nv = 2 * self.c * self.d
        self.weights = tuple(k for _ in range(2 * self.c) for k in range(1, self.d + 1))

    def block(self, side: int, j: int) -> range:
        start = (side * self.c + j) * self.d
        return range(start, start + self.d)

    def names(self) -> list[str]:
        sym = "ts"
        if self.c == 1:
            return [f"{sym[side]}{k}" for side in range(2) for k in range(1, self.d + 1)]
        return [f"{sym[side]}{j + 1}_{k}" for side in range(2) for j in range(self.c) for k in range(1, self.d + 1)]


def _skew_into(layout: _Layout, lam: Partition, eta: Partition, side: int, j: int) -> MultiPoly:
    return skew_schur_miwa(lam, eta, layout.d).embed(layout.nv, layout.block(side, j))


def _shifted_tau(tau: TauSeries, layout: _Layout, side: int, j: int, d: int) -> dict[int, MultiPoly]:
    """Coefficients (in powers of y) of tau(x^j -+ [y]) on the given side."""
    out: dict[int, MultiPoly] = {}
    w = layout.weights
    for triple in tau.triples(max_total=d + 1):
        c = tau.coeff(triple)
        if c == 0:
            continue
        rest = MultiPoly.const(layout.nv, c)
        for i, mu in enumerate(triple):
            if i != j:
                rest = rest.mul(_skew_into(layout, mu, EMPTY, side, i), w, d + 1)
        mu = triple[j]
        for a in range(mu.size + 1):
            eta = Partition((1,) * a) if side == 0 else (Partition((a,)) if a else EMPTY)
            sk = _skew_into(layout, mu, eta, side, j)
            if sk.is_zero():
                continue
            if side == 0 and a % 2:
                sk = -sk
            term = rest.mul(sk, w, d + 1)
            out[a] = out[a] + term if a in out else term
    return out


def _exp_xi(layout: _Layout, j: int, kmax: int) -> list[MultiPoly]:
    """h_k(t^j - s^j) for k <= kmax."""
    nv, d = layout.nv, layout.d
    t, s = layout.block(0, j), layout.block(1, j)
    images = [MultiPoly.var(nv, t[k]) - MultiPoly.var(nv, s[k]) for k in range(d)]
    out = []
    for k in range(kmax + 1):
        out.append(h_miwa(k, d).substitute(images, layout.weights, d) if k else MultiPoly.const(nv))
    return out


def _residue(tau: TauSeries, d: int, Z: int, layout: _Layout) -> MultiPoly:
    total = MultiPoly.zero(layout.nv)
    w = layout.weights
    for j in range(tau.components):
        A = _shifted_tau(tau, layout, 0, j, d)
        B = _shifted_tau(tau, layout, 1, j, d)
        H = _exp_xi(layout, j, min(Z, 2 * d + 2))
        for a, pa in A.items():
            for b, pb in B.items():
                k = a + b - 1
                if k < 0 or k >= len(H):
                    continue
                total = total + H[k].mul(pa, w, d).mul(pb, w, d)
    return total.truncate(w, d)


def _report(tau: TauSeries, d: int, Z: int, kind: str) -> BilinearReport:
    if Z < d + 2:
        raise ValueError("z-order Z must be at least d + 2")
    layout = _Layout(tau.components, d)
    here = _residue(tau, d, Z, layout)
    there = _residue(tau.with_cutoff(tau.N + 1), d, Z, layout)
    entries = [Entry(m, here.coeff(m), here.coeff(m) == there.coeff(m))
               for m in _monomials(layout.weights, d)]
    params = {"kind": kind, "components": tau.components, "cutoff": tau.N, "degree": d, "Z": Z,
              "u0": str(tau.u0), "framing": list(tau.framing.as_tuple())}
    return BilinearReport(layout.names(), entries, d, params)


def hirota_residue_1kp(tau: TauSeries, d: int, Z: Optional[int] = None) -> BilinearReport:
    if tau.components != 1:
        raise ValueError("1-component check needs a 1-component tau")
    return _report(tau, d, d + 2 if Z is None else Z, "kp")


def hirota_residue_3kp(tau: TauSeries, d: int, Z: Optional[int] = None) -> BilinearReport:
    if tau.components != 3:
        raise ValueError("3-component check needs a 3-component tau")
    return _report(tau, d, d + 2 if Z is None else Z, "3kp")


def shift_miwa(poly: MultiPoly, block: Sequence[int], y_index: int, direction: int,
               weights: Sequence[int], max_degree: Optional[int] = None) -> MultiPoly:
    """Substitute t_k -> t_k + direction * y^k / k for the variables in ``block``.

    ``y_index`` is a variable of the same ring standing for 1/z.
    """
    nv = poly.nvars
    images = [MultiPoly.var(nv, i) for i in range(nv)]
    for k, i in enumerate(block, start=1):
        images[i] = images[i] + MultiPoly.var(nv, y_index, k, Fraction(direction, k))
    return poly.substitute(images, tuple(weights) if max_degree is not None else None, max_degree)


# ---------------------------------------------------------------------------
# KP equation
# ---------------------------------------------------------------------------

def log_series(poly: MultiPoly, weights: Sequence[int], D: int) -> MultiPoly:
    """log(poly) truncated at weighted degree D; poly must have constant term 1."""
    if poly.constant_term() != 1:
        raise ValueError("log needs constant term 1")
    x = poly - 1
    x = x.truncate(tuple(weights), D)
    out = MultiPoly.zero(poly.nvars)
    power = MultiPoly.const(poly.nvars)
    for k in range(1, D + 1):
        power = power.mul(x, tuple(weights), D)
        if power.is_zero():
            break
        out = out + power.scale(Fraction((-1) ** (k + 1), k))
    return out


def _kp_residual(tau: TauSeries, d: int) -> MultiPoly:
    D = d + 6
    nv = D
    w = tuple(range(1, D + 1))
    tau_poly = MultiPoly.zero(nv)
    for (mu,) in tau.triples(max_total=D):
        c = tau.coeff((mu,))
        if c:
            tau_poly = tau_poly + schur_miwa(mu, D).scale(c)
    F = log_series(tau_poly, w, D)
    u = F.diff(0).diff(0).scale(2)
    u1 = u.diff(0)
    lhs = u.diff(1).diff(1).scale(Fraction(3, 4))
    inner = u.diff(2) - u.mul(u1, w, D).scale(Fraction(3, 2)) - u1.diff(0).diff(0).scale(Fraction(1, 4))
    res = lhs - inner.diff(0)
    return res.truncate(w, d)


def kp_equation_check(tau: TauSeries, d: int) -> BilinearReport:
    """Residual of 3/4 u_22 - d_1(u_3 - 3/2 u u_1 - 1/4 u_111), u = 2 d_1^2 log tau."""
    if tau.components != 1:
        raise ValueError("KP equation check needs a 1-component tau")
    here = _kp_residual(tau, d)
    there = _kp_residual(tau.with_cutoff(tau.N + 1), d)
    D = d + 6
    w = tuple(range(1, D + 1))
    entries = [Entry(m, here.coeff(m), here.coeff(m) == there.coeff(m)) for m in _monomials(w, d)]
    params = {"kind": "kp-equation", "cutoff": tau.N, "degree": d, "u0": str(tau.u0),
              "framing": list(tau.framing.as_tuple())}
    return BilinearReport([f"t{k}" for k in range(1, D + 1)], entries, d, params)
