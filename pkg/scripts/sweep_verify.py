"""Full cross-pipeline sweep: |mu^i| <= 3, framings {-1,0,1}^3, plus random keys.

Usage: python3 scripts/sweep_verify.py [--jobs N] [--cache-dir DIR]
"""

import argparse
import json
import time

from topvertex.cli import evaluate, random_keys, sweep_keys
from topvertex.vertex import Framing


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-size", type=int, default=3)
    ap.add_argument("--random", type=int, default=200)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--cache-dir", default=None)
    args = ap.parse_args()

    framings = [Framing(a, b, c) for a in (-1, 0, 1) for b in (-1, 0, 1) for c in (-1, 0, 1)]
    keys = sweep_keys(args.max_size, framings) + random_keys(args.random, 5, -2, 2, args.seed)
    start = time.perf_counter()
    recs, hits = evaluate(keys, ("skew", "detf", "bog"), args.cache_dir, args.jobs)
    secs = time.perf_counter() - start
    parsed = [json.loads(line) for _, line, _ in recs]
    print(json.dumps({
        "keys": len(parsed),
        "mismatches": sum(not r["pipelines_agree"] for r in parsed),
        "off_half_lattice": sum(not r["half_lattice"] for r in parsed),
        "cache_hits": hits,
        "seconds": round(secs, 1),
    }))


if __name__ == "__main__":
    main()
