"""Integer partitions, Young diagrams and Frobenius coordinates."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator


class InvalidPartition(ValueError):
    pass


class InvalidFrobenius(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Partition:
    """A weakly decreasing tuple of positive integers."""

    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(self.parts)
        for p in parts:
            if not isinstance(p, int) or isinstance(p, bool):
                raise InvalidPartition(f"non-integer part {p!r}")
            if p <= 0:
                raise InvalidPartition(f"parts must be positive, got {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise InvalidPartition(f"parts must be weakly decreasing, got {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts: int) -> "Partition":
        return cls(tuple(parts))

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, i: int) -> int:
        """0-based row access; rows beyond the length read as 0."""
        return self.parts[i] if 0 <= i < len(self.parts) else 0

    def __bool__(self) -> bool:
        return bool(self.parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __repr__(self) -> str:
        return f"Partition{self.parts}" if len(self.parts) != 1 else f"Partition(({self.parts[0]},))"

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")" if self.parts else "∅"

    def to_json_obj(self) -> list[int]:
        return list(self.parts)

    @classmethod
    def from_json_obj(cls, obj) -> "Partition":
        if not isinstance(obj, list):
            raise InvalidPartition(f"expected a JSON array, got {obj!r}")
        return cls(tuple(obj))

    def conjugate(self) -> "Partition":
        return conjugate(self)

    def boxes(self) -> Iterator[tuple[int, int]]:
        for i, row in enumerate(self.parts):
            for j in range(row):
                yield i, j


EMPTY = Partition(())


@lru_cache(maxsize=None)
def conjugate(lam: Partition) -> Partition:
    if not lam:
        return EMPTY
    return Partition(tuple(sum(1 for p in lam.parts if p >= j) for j in range(1, lam.parts[0] + 1)))


@dataclass(frozen=True)
class Frobenius:
    """Frobenius coordinates (m_1 ... m_k | n_1 ... n_k)."""

    ms: tuple[int, ...]
    ns: tuple[int, ...]

    def __post_init__(self):
        ms, ns = tuple(self.ms), tuple(self.ns)
        if len(ms) != len(ns):
            raise InvalidFrobenius("arm and leg lists differ in length")
        for seq in (ms, ns):
            if any(x < 0 for x in seq):
                raise InvalidFrobenius(f"negative coordinate in {seq}")
            if any(seq[i] <= seq[i + 1] for i in range(len(seq) - 1)):
                raise InvalidFrobenius(f"coordinates must strictly decrease: {seq}")
        object.__setattr__(self, "ms", ms)
        object.__setattr__(self, "ns", ns)

    @property
    def rank(self) -> int:
        return len(self.ms)

    def to_json_obj(self) -> dict:
        return {"m": list(self.ms), "n": list(self.ns)}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Frobenius":
        return cls(tuple(obj["m"]), tuple(obj["n"]))


@lru_cache(maxsize=None)
def frobenius(lam: Partition) -> Frobenius:
    lt = conjugate(lam)
    k = sum(1 for i, p in enumerate(lam.parts) if p > i)
    return Frobenius(
        tuple(lam.parts[i] - i - 1 for i in range(k)),
        tuple(lt.parts[i] - i - 1 for i in range(k)),
    )


def from_frobenius(f: Frobenius) -> Partition:
    k = f.rank
    if k == 0:
        return EMPTY
    # the diagonal block plus arms gives the first k rows; legs fill the rest
    rows = [f.ms[i] + i + 1 for i in range(k)]
    cols = [f.ns[j] + j + 1 for j in range(k)]
    extra = []
    for r in range(k, cols[0]):
        extra.append(sum(1 for c in cols if c > r))
    lam = Partition(tuple(rows + extra))
    if frobenius(lam) != f:
        raise InvalidFrobenius(f"{f} does not describe a partition")
    return lam


def hook_partition(m: int, n: int) -> Partition:
    """The hook (m | n) = (m+1, 1^n)."""
    return Partition((m + 1,) + (1,) * n)


@lru_cache(maxsize=None)
def kappa(lam: Partition) -> int:
    return sum(p * (p - 2 * i + 1) for i, p in enumerate(lam.parts, start=1))


def kappa_frobenius(lam: Partition) -> int:
    f = frobenius(lam)
    half = Fraction(1, 2)
    val = sum((m + half) ** 2 for m in f.ms) - sum((n + half) ** 2 for n in f.ns)
    assert val.denominator == 1
    return int(val)


def hooks(lam: Partition) -> list[int]:
    lt = conjugate(lam)
    return [(lam[i] - j - 1) + (lt[j] - i - 1) + 1 for i, j in lam.boxes()]


def contains(lam: Partition, eta: Partition) -> bool:
    if len(eta) > len(lam):
        return False
    return all(e <= lam[i] for i, e in enumerate(eta.parts))


def _partitions_of(n: int, largest: int) -> Iterator[tuple[int, ...]]:
    # reverse-lexicographic: largest first part first
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions_of(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def partitions_of(n: int) -> tuple[Partition, ...]:
    return tuple(Partition(p) for p in _partitions_of(n, n))


@lru_cache(maxsize=None)
def enumerate_upto(N: int) -> tuple[Partition, ...]:
    if N < 0:
        raise ValueError("N must be nonnegative")
    return tuple(p for n in range(N + 1) for p in partitions_of(n))


@lru_cache(maxsize=None)
def subpartitions(lam: Partition) -> tuple[Partition, ...]:
    """All eta contained in lam, in enumeration order."""
    return tuple(p for p in enumerate_upto(lam.size) if contains(lam, p))


def common_subpartitions(a: Partition, b: Partition) -> tuple[Partition, ...]:
    small, big = (a, b) if a.size <= b.size else (b, a)
    return tuple(p for p in subpartitions(small) if contains(big, p))


def parse_partition(text: str) -> Partition:
    """Parse a JSON array such as ``[3,1]``."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidPartition(f"not JSON: {text!r}") from exc
    return Partition.from_json_obj(obj)


def as_partition(x: Partition | Iterable[int]) -> Partition:
    return x if isinstance(x, Partition) else Partition(tuple(x))
