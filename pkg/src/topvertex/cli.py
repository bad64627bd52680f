"""Command-line front end: compute, verify, kp-check, table, cache.

Exit codes: 0 success, 1 an identity failed, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Optional, Sequence

from .partitions import InvalidPartition, Partition, enumerate_upto, parse_partition
from .vertex import (
    PIPELINES,
    Framing,
    ResultCache,
    VertexKey,
    compute_values,
    make_record,
    record_json,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_HARD_LIMIT = 5


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    max_size: int = 2
    framings: list[Framing] = field(default_factory=lambda: [Framing()])
    pipelines: tuple[str, ...] = ("skew", "detf", "bog")
    u0: Fraction = Fraction(2, 3)
    degree: int = 2
    fmt: str = "json"
    cache_dir: Optional[str] = None
    jobs: int = 1

    def __post_init__(self):
        if self.max_size < 0:
            raise UsageError("--max-size must be nonnegative")
        if self.u0 == 0 or abs(self.u0) == 1:
            raise UsageError("--u0 must avoid 0 and +-1")
        if self.jobs < 1:
            raise UsageError("--jobs must be positive")
        for p in self.pipelines:
            if p not in PIPELINES:
                raise UsageError(f"unknown pipeline {p!r}; choose from {','.join(PIPELINES)}")


# ---------------------------------------------------------------------------
# argument parsing helpers
# ---------------------------------------------------------------------------

def _partition(text: str) -> Partition:
    try:
        return parse_partition(text)
    except InvalidPartition as exc:
        raise UsageError(str(exc)) from exc


def _framing(text: str) -> Framing:
    try:
        vals = [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"framing must be a1,a2,a3 integers, got {text!r}") from exc
    if len(vals) != 3:
        raise UsageError(f"framing needs three integers, got {text!r}")
    return Framing(*vals)


def _framing_range(text: str) -> list[Framing]:
    try:
        lo, hi = (int(x) for x in text.split(".."))
    except ValueError as exc:
        raise UsageError(f"--framings expects lo..hi, got {text!r}") from exc
    if lo > hi:
        raise UsageError("--framings needs lo <= hi")
    return [Framing(*a) for a in product(range(lo, hi + 1), repeat=3)]


def _pipelines(text: str) -> tuple[str, ...]:
    names = tuple(x.strip() for x in text.split(",") if x.strip())
    if not names:
        raise UsageError("--pipelines is empty")
    return names


def _u0(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--u0 must be a rational p/q, got {text!r}") from exc


def _cache(dir_arg: Optional[str]) -> Optional[ResultCache]:
    path = dir_arg or os.environ.get("VERTEX_CACHE_DIR")
    return ResultCache(path) if path else None


# ---------------------------------------------------------------------------
# batch evaluation
# ---------------------------------------------------------------------------

def _work(args: tuple[list[str], tuple[str, ...], Optional[str]]) -> tuple[list[tuple[str, str, dict]], int]:
    keys_json, pipelines, cache_dir = args
    cache = ResultCache(cache_dir) if cache_dir else None
    out = []
    for kj in keys_json:
        key = VertexKey.from_json_obj(json.loads(kj))
        values = compute_values(key, pipelines, cache)
        rec = make_record(key, values)
        vals = {name: v.to_json() for name, v in values.items()}
        out.append((kj, record_json(rec), vals))
    return out, cache.hits if cache else 0


def evaluate(keys: Sequence[VertexKey], pipelines: tuple[str, ...], cache_dir: Optional[str],
             jobs: int) -> tuple[list[tuple[str, str, dict]], int]:
    """Records in input order plus the number of cache hits."""
    payload = [k.canonical_json() for k in keys]
    if jobs <= 1 or len(payload) < 2:
        return _work((payload, pipelines, cache_dir))
    size = max(1, len(payload) // (jobs * 8))
    chunks = [payload[i:i + size] for i in range(0, len(payload), size)]
    results, hits = [], 0
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for recs, h in pool.map(_work, [(c, pipelines, cache_dir) for c in chunks]):
            results.extend(recs)
            hits += h
    return results, hits


def sweep_keys(max_size: int, framings: Iterable[Framing]) -> list[VertexKey]:
    ps = enumerate_upto(max_size)
    frs = sorted(framings)
    return [VertexKey(a, b, c, f) for a, b, c in product(ps, repeat=3) for f in frs]


def random_keys(n: int, max_size: int, lo: int, hi: int, seed: int) -> list[VertexKey]:
    rng = random.Random(seed)
    ps = enumerate_upto(max_size)
    out = []
    for _ in range(n):
        mus = [rng.choice(ps) for _ in range(3)]
        out.append(VertexKey(*mus, Framing(*(rng.randint(lo, hi) for _ in range(3)))))
    return out


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_compute(ns: argparse.Namespace) -> int:
    key = VertexKey(_partition(ns.mu1), _partition(ns.mu2), _partition(ns.mu3), _framing(ns.framing))
    pipelines = _pipelines(ns.pipelines)
    RunConfig("compute", pipelines=pipelines)
    cache = _cache(ns.cache_dir)
    recs, _ = evaluate([key], pipelines, cache.root if cache else None, 1)
    _, line, _ = recs[0]
    print(line)
    return EXIT_OK if json.loads(line)["pipelines_agree"] else EXIT_FAIL


def cmd_verify(ns: argparse.Namespace) -> int:
    cfg = RunConfig("verify", max_size=ns.max_size, framings=_framing_range(ns.framings),
                    pipelines=_pipelines(ns.pipelines), jobs=ns.jobs)
    if cfg.max_size > ns.hard_limit:
        raise UsageError(f"--max-size {cfg.max_size} exceeds the hard limit {ns.hard_limit}")
    if len(cfg.pipelines) < 2:
        raise UsageError("verify needs at least two pipelines to compare")
    keys = sweep_keys(cfg.max_size, cfg.framings)
    if ns.random:
        lo, hi = (int(x) for x in ns.random_framings.split(".."))
        keys += random_keys(ns.random, ns.random_max_size, lo, hi, ns.seed)
    cache = _cache(ns.cache_dir)
    recs, hits = evaluate(keys, cfg.pipelines, str(cache.root) if cache else None, cfg.jobs)
    bad = [(kj, vals) for kj, line, vals in recs if not json.loads(line)["pipelines_agree"]]
    off_lattice = sum(1 for _, line, _ in recs if not json.loads(line)["half_lattice"])
    summary = {"keys": len(recs), "pipelines": list(cfg.pipelines), "mismatches": len(bad),
               "off_half_lattice": off_lattice}
    print(json.dumps(summary, separators=(",", ":")))
    if cache:
        print(f"cache_hits={hits}", file=sys.stderr)
    if bad:
        kj, vals = bad[0]
        print(json.dumps({"first_mismatch": json.loads(kj),
                          "values": {k: json.loads(v) for k, v in vals.items()}},
                         separators=(",", ":")))
        return EXIT_FAIL
    return EXIT_OK if off_lattice == 0 else EXIT_FAIL


def cmd_kp_check(ns: argparse.Namespace) -> int:
    from .kp import build_tau, hirota_residue_1kp, hirota_residue_3kp

    if ns.components not in (1, 3):
        raise UsageError("--components must be 1 or 3")
    if ns.cutoff < 0 or ns.degree < 0:
        raise UsageError("--cutoff and --degree must be nonnegative")
    u0 = _u0(ns.u0)
    RunConfig("kp-check", u0=u0, degree=ns.degree)
    tau = build_tau(ns.components, _framing(ns.framing), ns.cutoff, u0)
    if ns.components == 1:
        report = hirota_residue_1kp(tau, ns.degree)
    else:
        report = hirota_residue_3kp(tau, ns.degree)
    print(json.dumps(report.to_json_obj(), separators=(",", ":")))
    return EXIT_OK if report.ok() else EXIT_FAIL


CSV_FIELDS = ["mu1", "mu2", "mu3", "a1", "a2", "a3", "w", "pipelines_agree", "half_lattice"]


def cmd_table(ns: argparse.Namespace) -> int:
    framings = _framing_range(ns.framings) if ns.framings else [_framing(ns.framing)]
    cfg = RunConfig("table", max_size=ns.max_size, framings=framings, pipelines=_pipelines(ns.pipelines),
                    fmt=ns.format, jobs=ns.jobs)
    if cfg.max_size > ns.hard_limit:
        raise UsageError(f"--max-size {cfg.max_size} exceeds the hard limit {ns.hard_limit}")
    keys = sweep_keys(cfg.max_size, cfg.framings)
    cache = _cache(ns.cache_dir)
    recs, hits = evaluate(keys, cfg.pipelines, str(cache.root) if cache else None, cfg.jobs)
    buf = io.StringIO()
    if cfg.fmt == "json":
        for _, line, _ in recs:
            buf.write(line + "\n")
    else:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for _, line, _ in recs:
            rec = json.loads(line)
            k = rec["key"]
            writer.writerow([json.dumps(k["mu1"], separators=(",", ":")),
                             json.dumps(k["mu2"], separators=(",", ":")),
                             json.dumps(k["mu3"], separators=(",", ":")),
                             *k["framing"],
                             json.dumps(rec["w"], separators=(",", ":")),
                             str(rec["pipelines_agree"]).lower(),
                             str(rec["half_lattice"]).lower()])
    text = buf.getvalue()
    if ns.output:
        with open(ns.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"cache_hits={hits}", file=sys.stderr)
    ok = all(json.loads(line)["pipelines_agree"] for _, line, _ in recs)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_cache(ns: argparse.Namespace) -> int:
    cache = _cache(ns.cache_dir)
    if cache is None:
        raise UsageError("no cache directory: pass --cache-dir or set VERTEX_CACHE_DIR")
    if ns.action == "stats":
        print(json.dumps({"dir": str(cache.root), "entries": cache.count()}, separators=(",", ":")))
    else:
        print(json.dumps({"dir": str(cache.root), "removed": cache.clear()}, separators=(",", ":")))
    return EXIT_OK


# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep argparse's exit status 2 but route through UsageError
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="topvertex", description="Exact framed topological vertex engine.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, cache=True, pipelines=True):
        if pipelines:
            sp.add_argument("--pipelines", default="skew,detf,bog", help="comma list of skew,detf,bog")
        if cache:
            sp.add_argument("--cache-dir", default=None, help="result cache (default $VERTEX_CACHE_DIR)")

    c = sub.add_parser("compute", help="one vertex value as a JSON record")
    c.add_argument("--mu1", default="[]")
    c.add_argument("--mu2", default="[]")
    c.add_argument("--mu3", default="[]")
    c.add_argument("--framing", default="0,0,0")
    common(c)
    c.set_defaults(func=cmd_compute)

    v = sub.add_parser("verify", help="cross-check pipelines over a sweep")
    v.add_argument("--max-size", type=int, default=2)
    v.add_argument("--framings", default="0..0")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--hard-limit", type=int, default=DEFAULT_HARD_LIMIT)
    v.add_argument("--random", type=int, default=0, help="extra pseudo-random keys")
    v.add_argument("--random-max-size", type=int, default=5)
    v.add_argument("--random-framings", default="-2..2")
    v.add_argument("--seed", type=int, default=0)
    common(v)
    v.set_defaults(func=cmd_verify)

    k = sub.add_parser("kp-check", help="Hirota bilinear check at q^(1/2) = u0")
    k.add_argument("--components", type=int, default=1)
    k.add_argument("--cutoff", type=int, default=6)
    k.add_argument("--degree", type=int, default=3)
    k.add_argument("--u0", default="2/3")
    k.add_argument("--framing", default="0,0,0")
    k.set_defaults(func=cmd_kp_check)

    t = sub.add_parser("table", help="tabulate vertex values")
    t.add_argument("--max-size", type=int, default=2)
    t.add_argument("--framing", default="0,0,0")
    t.add_argument("--framings", default=None, help="lo..hi, overrides --framing")
    t.add_argument("--format", choices=("json", "csv"), default="json")
    t.add_argument("--output", default=None)
    t.add_argument("--jobs", type=int, default=1)
    t.add_argument("--hard-limit", type=int, default=DEFAULT_HARD_LIMIT)
    common(t)
    t.set_defaults(func=cmd_table)

    s = sub.add_parser("cache", help="inspect or clear the result cache")
    s.add_argument("action", choices=("stats", "clear"))
    common(s, pipelines=False)
    s.set_defaults(func=cmd_cache)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        return ns.func(ns)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
