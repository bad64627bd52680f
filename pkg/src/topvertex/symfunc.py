"""Schur-type functions at the principal specializations q^rho, q^-rho and
q^(mu+rho), and Schur polynomials in Miwa times.

Every evaluation takes a scalar ``mode``: ``SYMBOLIC`` returns QRat values,
``NumericHalf(u0)`` returns exact Fractions at q^(1/2) = u0.  All exponents
met here are half-integers, so both modes run the same code.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .linalg import det, det_cofactor
from .partitions import (
    EMPTY,
    Partition,
    common_subpartitions,
    conjugate,
    contains,
    frobenius,
    hook_partition,
    hooks,
    kappa,
)
from .polys import MultiPoly
from .qnum import SYMBOLIC, ScalarMode


class CutoffTooSmall(ValueError):
    pass


RHO = "rho"
NEG_RHO = "negrho"
SHIFTED = "shifted"


@dataclass(frozen=True)
class SpecPoint:
    """The alphabet q^rho, q^-rho, or q^(mu+rho)."""

    tag: str
    mu: Partition = EMPTY

    def __post_init__(self):
        if self.tag not in (RHO, NEG_RHO, SHIFTED):
            raise ValueError(f"unknown specialization {self.tag!r}")
        if self.tag == SHIFTED and not self.mu:
            object.__setattr__(self, "tag", RHO)
        if self.tag != SHIFTED and self.mu:
            raise ValueError("only shifted specializations carry a partition")


Rho = SpecPoint(RHO)
NegRho = SpecPoint(NEG_RHO)


def Shifted(mu: Partition) -> SpecPoint:
    return SpecPoint(SHIFTED, mu)


def _shift_pairs(mu: Partition, mode: ScalarMode):
    """(a_i, b_i) = (q^(-i+1/2), q^(mu_i-i+1/2)) for the rows of mu."""
    half = Fraction(1, 2)
    return [(mode.qpow(-i + half), mode.qpow(p - i + half)) for i, p in enumerate(mu.parts, start=1)]


# ---------------------------------------------------------------------------
# power sums, complete and elementary symmetric functions
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def power_sum_spec(n: int, s: SpecPoint, mode: ScalarMode = SYMBOLIC):
    if n < 1:
        raise ValueError("power sums start at n = 1")
    base = 1 / mode.bracket(n)
    if s.tag == NEG_RHO:
        return -base
    if s.tag == RHO:
        return base
    half = Fraction(1, 2)
    for i, p in enumerate(s.mu.parts, start=1):
        base = base + mode.qpow(n * (p - i + half)) - mode.qpow(n * (-i + half))
    return base


def _h_rho(k: int, mode: ScalarMode):
    return mode.qpow(Fraction(k * (k - 1), 4)) / mode.qfact(k)


def _h_negrho(k: int, mode: ScalarMode):
    v = mode.qpow(Fraction(-k * (k - 1), 4)) / mode.qfact(k)
    return -v if k % 2 else v


def _e_rho(k: int, mode: ScalarMode):
    return mode.qpow(Fraction(-k * (k - 1), 4)) / mode.qfact(k)


def _e_negrho(k: int, mode: ScalarMode):
    v = mode.qpow(Fraction(k * (k - 1), 4)) / mode.qfact(k)
    return -v if k % 2 else v


def _series_mul(a: list, b: list, K: int, zero) -> list:
    out = [zero] * (K + 1)
    for i, x in enumerate(a[: K + 1]):
        if x == 0:
            continue
        for j, y in enumerate(b[: K + 1 - i]):
            if y != 0:
                out[i + j] = out[i + j] + x * y
    return out


@lru_cache(maxsize=None)
def _correction_series(mu: Partition, K: int, mode: ScalarMode, elementary: bool) -> tuple:
    """Coefficients of prod_i (1 - a_i z)/(1 - b_i z) (or the E-analogue) to z^K."""
    series = [mode.one] + [mode.zero] * K
    for a, b in _shift_pairs(mu, mode):
        factor = [mode.one]
        for n in range(1, K + 1):
            if elementary:
                # (1 + b z)/(1 + a z)
                c = (b - a) * (-a) ** (n - 1) if n > 1 else b - a
            else:
                # (1 - a z)/(1 - b z)
                c = b ** n - a * b ** (n - 1) if n > 1 else b - a
            factor.append(c)
        series = _series_mul(series, factor, K, mode.zero)
    return tuple(series)


@lru_cache(maxsize=None)
def h_spec(k: int, s: SpecPoint, mode: ScalarMode = SYMBOLIC):
    """h_k at the given specialization; h_k = 0 for k < 0."""
    if k < 0:
        return mode.zero
    if k == 0:
        return mode.one
    if s.tag == RHO:
        return _h_rho(k, mode)
    if s.tag == NEG_RHO:
        return _h_negrho(k, mode)
    corr = _correction_series(s.mu, k, mode, False)
    total = mode.zero
    for j in range(k + 1):
        if corr[k - j] != 0:
            total = total + _h_rho(j, mode) * corr[k - j]
    return total


@lru_cache(maxsize=None)
def e_spec(k: int, s: SpecPoint, mode: ScalarMode = SYMBOLIC):
    """e_k at the given specialization; e_k = 0 for k < 0."""
    if k < 0:
        return mode.zero
    if k == 0:
        return mode.one
    if s.tag == RHO:
        return _e_rho(k, mode)
    if s.tag == NEG_RHO:
        return _e_negrho(k, mode)
    corr = _correction_series(s.mu, k, mode, True)
    total = mode.zero
    for j in range(k + 1):
        if corr[k - j] != 0:
            total = total + _e_rho(j, mode) * corr[k - j]
    return total


@lru_cache(maxsize=None)
def h_spec_newton(k: int, s: SpecPoint, mode: ScalarMode = SYMBOLIC):
    """h_k from power sums via k h_k = sum_j p_j h_(k-j); independent oracle."""
    if k < 0:
        return mode.zero
    if k == 0:
        return mode.one
    total = mode.zero
    for j in range(1, k + 1):
        total = total + power_sum_spec(j, s, mode) * h_spec_newton(k - j, s, mode)
    return total / k


# ---------------------------------------------------------------------------
# Schur and skew Schur values
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def skew_schur_spec(lam: Partition, eta: Partition, s: SpecPoint, mode: ScalarMode = SYMBOLIC):
    """s_(lam/eta) by the Jacobi-Trudi determinant of size len(lam)."""
    if not contains(lam, eta):
        return mode.zero
    n = len(lam)
    M = [[h_spec(lam[i] - eta[j] - i + j, s, mode) for j in range(n)] for i in range(n)]
    return det(M, mode.one)


@lru_cache(maxsize=None)
def skew_schur_spec_dual(lam: Partition, eta: Partition, s: SpecPoint, mode: ScalarMode = SYMBOLIC):
    """s_(lam/eta) by the dual (elementary) Jacobi-Trudi determinant."""
    if not contains(lam, eta):
        return mode.zero
    lt, et = conjugate(lam), conjugate(eta)
    n = len(lt)
    M = [[e_spec(lt[i] - et[j] - i + j, s, mode) for j in range(n)] for i in range(n)]
    return det(M, mode.one)


def schur_spec(lam: Partition, s: SpecPoint, mode: ScalarMode = SYMBOLIC):
    return skew_schur_spec(lam, EMPTY, s, mode)


@lru_cache(maxsize=None)
def schur_rho_hook(mu: Partition, sign: str = "+", mode: ScalarMode = SYMBOLIC):
    """Hook-content closed form of s_mu(q^rho) (sign '+') or s_mu(q^-rho) (sign '-')."""
    denom = mode.one
    for h in hooks(mu):
        denom = denom * mode.bracket(h)
    if sign == "+":
        return mode.qpow(Fraction(kappa(mu), 4)) / denom
    if sign == "-":
        v = mode.qpow(Fraction(-kappa(mu), 4)) / denom
        return -v if mu.size % 2 else v
    raise ValueError("sign must be '+' or '-'")


@lru_cache(maxsize=None)
def schur_lower_spec(nu: Partition, mu: Partition, mode: ScalarMode = SYMBOLIC):
    """s_nu(q^(mu+rho)) through an eta-sum of values at q^-rho."""
    total = mode.zero
    for eta in common_subpartitions(mu, nu):
        total = total + skew_schur_spec(mu, eta, NegRho, mode) * skew_schur_spec(nu, eta, NegRho, mode)
    v = mode.qpow(Fraction(kappa(nu), 2)) * total / skew_schur_spec(mu, EMPTY, NegRho, mode)
    return -v if nu.size % 2 else v


def hook_sum_row(m: int, n: int, mode: ScalarMode = SYMBOLIC):
    """Closed sum equal to s_(m)(q^((n)+rho))."""
    total = mode.zero
    for k in range(min(m, n) + 1):
        e = Fraction(-k * k - k + k * m + k * n, 2) + Fraction(m * m - m, 4)
        total = total + mode.qpow(e) * mode.qfact(n) / (mode.qfact(n - k) * mode.qfact(m - k))
    return total


def hook_sum_col(m: int, n: int, mode: ScalarMode = SYMBOLIC):
    """Closed sum equal to s_(1^n)(q^((1^m)+rho))."""
    total = mode.zero
    for k in range(min(m, n) + 1):
        e = Fraction(k * k + k - k * m - k * n, 2) - Fraction(n * n - n, 4)
        total = total + mode.qpow(e) * mode.qfact(m) / (mode.qfact(n - k) * mode.qfact(m - k))
    return total


def giambelli_rho(mu: Partition, a: int, mode: ScalarMode = SYMBOLIC):
    """det of q^(a kappa/2) s_(m_i|n_j)(q^rho) over the Frobenius coordinates of mu."""
    f = frobenius(mu)
    M = []
    for m in f.ms:
        row = []
        for n in f.ns:
            hk = hook_partition(m, n)
            row.append(mode.qpow(Fraction(a * kappa(hk), 2)) * schur_spec(hk, Rho, mode))
        M.append(row)
    return det(M, mode.one)


# ---------------------------------------------------------------------------
# Schur polynomials in Miwa times t_1..t_K
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def h_miwa(k: int, K: int) -> MultiPoly:
    """Complete homogeneous h_k(t) from sum h_k z^k = exp(sum t_j z^j)."""
    if k < 0:
        return MultiPoly.zero(K)
    if k == 0:
        return MultiPoly.const(K)
    total = MultiPoly.zero(K)
    for j in range(1, min(k, K) + 1):
        total = total + MultiPoly.var(K, j - 1, c=j) * h_miwa(k - j, K)
    return total.scale(Fraction(1, k))


@lru_cache(maxsize=None)
def e_miwa(k: int, K: int) -> MultiPoly:
    """e_k(t) = (-1)^k h_k(-t)."""
    h = h_miwa(k, K)
    return MultiPoly(K, {e: c * (-1) ** (k - sum(e)) for e, c in h.terms.items()}) if k >= 0 else h


@lru_cache(maxsize=None)
def skew_schur_miwa(lam: Partition, eta: Partition, K: int) -> MultiPoly:
    """s_(lam/eta)(t) in K Miwa variables, via the smaller Jacobi-Trudi form."""
    if not contains(lam, eta):
        return MultiPoly.zero(K)
    lt, et = conjugate(lam), conjugate(eta)
    one = MultiPoly.const(K)
    if len(lam) <= len(lt):
        n = len(lam)
        M = [[h_miwa(lam[i] - eta[j] - i + j, K) for j in range(n)] for i in range(n)]
    else:
        n = len(lt)
        M = [[e_miwa(lt[i] - et[j] - i + j, K) for j in range(n)] for i in range(n)]
    return det_cofactor(M, one)


def schur_miwa(mu: Partition, K: int, D: Optional[int] = None) -> MultiPoly:
    """s_mu(t_1..t_K); zero if a degree bound D < |mu| is given."""
    if K < mu.size:
        raise CutoffTooSmall(f"K={K} < |mu|={mu.size}")
    if D is not None and mu.size > D:
        return MultiPoly.zero(K)
    return skew_schur_miwa(mu, EMPTY, K)
