"""The framed topological vertex by three routes.

* ``w_skew``: the skew-Schur sum over eta;
* ``w_det_f``: determinant of the fermionic F-entries;
* ``w_bogoliubov``: determinant of the Bogoliubov coefficients A(q; a).

All three return canonical QRat values and must agree exactly.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterable, Optional

from .linalg import det
from .partitions import (
    EMPTY,
    Partition,
    common_subpartitions,
    conjugate,
    frobenius,
    kappa,
)
from .qnum import ONE, SYMBOLIC, QRat, ScalarMode, half_lattice_check, qfact, qpow, bracket
from .symfunc import NegRho, Shifted, skew_schur_spec


@dataclass(frozen=True, order=True)
class Framing:
    a1: int = 0
    a2: int = 0
    a3: int = 0

    def __getitem__(self, i: int) -> int:
        """1-based access a_i."""
        return (self.a1, self.a2, self.a3)[i - 1]

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a1, self.a2, self.a3)


ZERO_FRAMING = Framing(0, 0, 0)


@dataclass(frozen=True, order=True)
class VertexKey:
    mu1: Partition = EMPTY
    mu2: Partition = EMPTY
    mu3: Partition = EMPTY
    framing: Framing = ZERO_FRAMING

    @classmethod
    def of(cls, mu1=(), mu2=(), mu3=(), framing=(0, 0, 0)) -> "VertexKey":
        def P(x):
            return x if isinstance(x, Partition) else Partition(tuple(x))

        f = framing if isinstance(framing, Framing) else Framing(*framing)
        return cls(P(mu1), P(mu2), P(mu3), f)

    def mu(self, i: int) -> Partition:
        return (self.mu1, self.mu2, self.mu3)[i - 1]

    def with_framing(self, framing: Framing) -> "VertexKey":
        return VertexKey(self.mu1, self.mu2, self.mu3, framing)

    def to_json_obj(self) -> dict:
        return {
            "mu1": self.mu1.to_json_obj(),
            "mu2": self.mu2.to_json_obj(),
            "mu3": self.mu3.to_json_obj(),
            "framing": list(self.framing.as_tuple()),
        }

    def canonical_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"), sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "VertexKey":
        return cls.of(obj["mu1"], obj["mu2"], obj["mu3"], tuple(obj["framing"]))


# ---------------------------------------------------------------------------
# skew-Schur route
# ---------------------------------------------------------------------------

def framing_factor(key: VertexKey, mode: ScalarMode = SYMBOLIC):
    a = key.framing
    e = Fraction(a.a1 * kappa(key.mu1) + a.a2 * kappa(key.mu2) + a.a3 * kappa(key.mu3), 2)
    return mode.qpow(e)


def w_skew(key: VertexKey, mode: ScalarMode = SYMBOLIC):
    """(-1)^|mu2| q^(...) s_(mu2^t)(q^-rho) sum_eta s_(mu1/eta)(q^(mu2^t+rho)) s_(mu3^t/eta)(q^(mu2+rho))."""
    mu1, mu2, mu3 = key.mu1, key.mu2, key.mu3
    a = key.framing
    mu2t, mu3t = conjugate(mu2), conjugate(mu3)
    total = mode.zero
    for eta in common_subpartitions(mu1, mu3t):
        left = skew_schur_spec(mu1, eta, Shifted(mu2t), mode)
        if left == 0:
            continue
        total = total + left * skew_schur_spec(mu3t, eta, Shifted(mu2), mode)
    e = Fraction(a.a1 * kappa(mu1) + a.a2 * kappa(mu2) + (a.a3 + 1) * kappa(mu3), 2)
    value = mode.qpow(e) * skew_schur_spec(mu2t, EMPTY, NegRho, mode) * total
    return -value if mu2.size % 2 else value


# ---------------------------------------------------------------------------
# coefficient formulas
# ---------------------------------------------------------------------------

def _cyc(i: int) -> int:
    return (i - 1) % 3 + 1


def _check_ij(i: int, j: int) -> None:
    if i not in (1, 2, 3) or j not in (1, 2, 3):
        raise ValueError(f"indices must lie in {{1,2,3}}, got ({i},{j})")


@lru_cache(maxsize=None)
def a_coeff(i: int, j: int, m: int, n: int) -> QRat:
    """Bogoliubov coefficient A^{ij}_{mn}(q) at zero framing."""
    _check_ij(i, j)
    if m < 0 or n < 0:
        raise ValueError("m, n must be nonnegative")
    base = Fraction(m * (m + 1) - n * (n + 1), 4)
    if i == j:
        v = qpow(base) / (bracket(m + n + 1) * qfact(m) * qfact(n))
        return -v if n % 2 else v
    if j == _cyc(i + 1):
        s = sum((qpow(Fraction((l + 1) * (m + n - l), 2)) / (qfact(m - l) * qfact(n - l))
                 for l in range(min(m, n) + 1)), QRat.from_number(0))
        v = qpow(base + Fraction(1, 6)) * s
        return -v if n % 2 else v
    # j == i - 1 cyclically
    s = sum((qpow(Fraction(-(l + 1) * (m + n - l), 2)) / (qfact(m - l) * qfact(n - l))
             for l in range(min(m, n) + 1)), QRat.from_number(0))
    v = qpow(base - Fraction(1, 6)) * s
    return v if n % 2 else -v


@lru_cache(maxsize=None)
def a_coeff_framed(i: int, j: int, m: int, n: int, framing: Framing) -> QRat:
    e = Fraction(framing[i] * m * (m + 1) - framing[j] * n * (n + 1), 2)
    return qpow(e) * a_coeff(i, j, m, n)


@lru_cache(maxsize=None)
def f_entry(i: int, j: int, m: int, n: int, framing: Framing) -> QRat:
    """Fermionic entry F^{ij}_{mn}(q; a), closed form."""
    _check_ij(i, j)
    if m < 0 or n < 0:
        raise ValueError("m, n must be nonnegative")
    ai, aj = framing[i], framing[j]
    if i == j:
        e = Fraction((2 * ai + 1) * (m * m + m - n * n - n), 4)
        return qpow(e) / (bracket(m + n + 1) * qfact(m) * qfact(n))
    half = Fraction(1, 2)
    pre = Fraction(2 * ai + 1, 4) * (m + half) ** 2 - Fraction(2 * aj + 1, 4) * (n + half) ** 2
    if (i, j) in ((1, 2), (2, 3), (3, 1)):
        extra = Fraction(1, 8) if (i, j) == (3, 1) else Fraction(3, 16)
        sgn = 1
    else:
        extra = -Fraction(1, 8) if (i, j) == (1, 3) else -Fraction(3, 16)
        sgn = -1
    s = QRat.from_number(0)
    for k in range(min(m, n) + 1):
        e = sgn * Fraction((k + 1) * (m + n - k), 2) + extra
        s = s + qpow(e) / (qfact(n - k) * qfact(m - k))
    v = qpow(pre) * s
    return v if sgn == 1 else -v


def entry_ratio(i: int, j: int, framing: Framing = ZERO_FRAMING) -> QRat:
    """f_ij with F^{ij}_{mn} = (-1)^n f_ij A^{ij}_{mn}(q; a)."""
    _check_ij(i, j)
    if i == j:
        return ONE
    d = Fraction(framing[i] - framing[j], 8)
    if (i, j) in ((1, 2), (2, 3)):
        return qpow(d + Fraction(1, 48))
    if (i, j) == (3, 1):
        return qpow(d - Fraction(1, 24))
    if (i, j) in ((2, 1), (3, 2)):
        return qpow(d - Fraction(1, 48))
    return qpow(d + Fraction(1, 24))  # (1, 3)


def cycle_product_check(cycle: Iterable[int], framing: Framing = ZERO_FRAMING) -> QRat:
    """Product of entry ratios around a closed cycle (wrapping); equals 1."""
    cyc = list(cycle)
    if not cyc:
        raise ValueError("cycle must be nonempty")
    out = ONE
    for s, i in enumerate(cyc):
        out = out * entry_ratio(i, cyc[(s + 1) % len(cyc)], framing)
    return out


# ---------------------------------------------------------------------------
# determinant routes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FIndex:
    """Block bookkeeping: global index k -> (block i, local index bar k)."""

    ranks: tuple[int, int, int]

    @property
    def size(self) -> int:
        return sum(self.ranks)

    def block(self, i: int) -> range:
        start = sum(self.ranks[: i - 1])
        return range(start + 1, start + self.ranks[i - 1] + 1)

    def locate(self, k: int) -> tuple[int, int]:
        for i in (1, 2, 3):
            r = self.block(i)
            if k in r:
                return i, k - r.start + 1
        raise IndexError(k)


def findex(key: VertexKey) -> FIndex:
    return FIndex(tuple(frobenius(key.mu(i)).rank for i in (1, 2, 3)))


def _build(key: VertexKey, entry: Callable[[int, int, int, int], QRat]) -> list[list[QRat]]:
    idx = findex(key)
    fr = {i: frobenius(key.mu(i)) for i in (1, 2, 3)}
    rows = [idx.locate(k) for k in range(1, idx.size + 1)]
    return [[entry(i, j, fr[i].ms[kb - 1], fr[j].ns[lb - 1]) for (j, lb) in rows] for (i, kb) in rows]


def build_f_matrix(key: VertexKey) -> list[list[QRat]]:
    return _build(key, lambda i, j, m, n: f_entry(i, j, m, n, key.framing))


def build_b_matrix(key: VertexKey) -> list[list[QRat]]:
    def entry(i, j, m, n):
        v = a_coeff_framed(i, j, m, n, key.framing)
        return -v if n % 2 else v

    return _build(key, entry)


def w_det_f(key: VertexKey) -> QRat:
    return det(build_f_matrix(key), ONE)


def w_bogoliubov(key: VertexKey) -> QRat:
    return det(build_b_matrix(key), ONE)


PIPELINES: dict[str, Callable[[VertexKey], QRat]] = {
    "skew": lambda k: w_skew(k),
    "detf": w_det_f,
    "bog": w_bogoliubov,
}


def cyclic_rotation(key: VertexKey) -> VertexKey:
    """(mu1, mu2, mu3) -> (mu2, mu3, mu1); diagnostic only."""
    f = key.framing
    return VertexKey(key.mu2, key.mu3, key.mu1, Framing(f.a2, f.a3, f.a1))


# ---------------------------------------------------------------------------
# records and the on-disk cache
# ---------------------------------------------------------------------------

class ResultCache:
    """One file per (key, pipeline) holding the QRat JSON; atomic replace on write."""

    def __init__(self, root: os.PathLike | str):
        self.root = Path(root)
        self.hits = 0
        self.misses = 0

    def _path(self, key: VertexKey, pipeline: str) -> Path:
        digest = hashlib.sha256(f"{pipeline}:{key.canonical_json()}".encode()).hexdigest()
        return self.root / digest[:2] / f"{digest}.json"

    def get(self, key: VertexKey, pipeline: str) -> Optional[QRat]:
        path = self._path(key, pipeline)
        try:
            with open(path, "r", encoding="utf-8") as fh:
                obj = json.load(fh)
        except (FileNotFoundError, json.JSONDecodeError):
            self.misses += 1
            return None
        if obj.get("key") != key.to_json_obj() or obj.get("pipeline") != pipeline:
            self.misses += 1
            return None
        self.hits += 1
        return QRat.from_json_obj(obj["w"])

    def put(self, key: VertexKey, pipeline: str, value: QRat) -> None:
        path = self._path(key, pipeline)
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = json.dumps({"key": key.to_json_obj(), "pipeline": pipeline, "w": value.to_json_obj()},
                             separators=(",", ":"), sort_keys=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(payload)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def clear(self) -> int:
        n = 0
        if self.root.exists():
            for p in self.root.glob("*/*.json"):
                p.unlink()
                n += 1
        return n

    def count(self) -> int:
        return sum(1 for _ in self.root.glob("*/*.json")) if self.root.exists() else 0


def compute_values(key: VertexKey, pipelines: Iterable[str] = ("skew", "detf", "bog"),
                   cache: Optional[ResultCache] = None) -> dict[str, QRat]:
    out = {}
    for name in pipelines:
        value = cache.get(key, name) if cache is not None else None
        if value is None:
            value = PIPELINES[name](key)
            if cache is not None:
                cache.put(key, name, value)
        out[name] = value
    return out


def make_record(key: VertexKey, values: dict[str, QRat]) -> dict:
    vals = list(values.values())
    return {
        "key": key.to_json_obj(),
        "w": vals[0].to_json_obj(),
        "pipelines_agree": all(v == vals[0] for v in vals),
        "half_lattice": all(half_lattice_check(v) for v in vals),
    }


def record_json(record: dict) -> str:
    return json.dumps(record, separators=(",", ":"))
