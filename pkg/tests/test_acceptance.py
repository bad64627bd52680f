"""Acceptance criteria 1-9, exact. Each test records one pass/fail line in the terminal summary."""

import json
import random
import time
from fractions import Fraction
from itertools import product

import pytest

from conftest import ACCEPTANCE
from topvertex import cli, vertex
from topvertex.fock import (
    FockVector,
    LinearFermion,
    SpecAlphabet,
    VariableAlphabet,
    apply_alpha,
    apply_gamma,
    apply_gamma_bosonic,
    apply_K,
    apply_psi,
    apply_psi_star,
    truncated_basis,
    vev_direct,
    wick_vev_bruteforce,
    wick_vev_det,
)
from topvertex.kp import build_tau, hirota_residue_1kp, hirota_residue_3kp
from topvertex.partitions import EMPTY, Partition, enumerate_upto, hooks, kappa, subpartitions
from topvertex.polys import MultiPoly
from topvertex.qnum import ONE, ZERO, bracket, half_lattice_check, qpow
from topvertex.symfunc import (
    NegRho,
    Rho,
    Shifted,
    giambelli_rho,
    h_spec,
    h_spec_newton,
    hook_sum_col,
    hook_sum_row,
    power_sum_spec,
    schur_spec,
    skew_schur_spec,
    skew_schur_spec_dual,
)
from topvertex.vertex import (
    PIPELINES,
    Framing,
    ResultCache,
    VertexKey,
    a_coeff_framed,
    compute_values,
    cycle_product_check,
    entry_ratio,
    f_entry,
    framing_factor,
    w_skew,
)

NAMES = ("skew", "detf", "bog")


def record(n: int, ok: bool, desc: str) -> None:
    ACCEPTANCE[n] = (ok, desc)


@pytest.fixture(scope="module")
def sweep():
    """All three pipelines on the 9261 grid keys plus 200 random keys."""
    start = time.perf_counter()
    grid = cli.sweep_keys(3, [Framing(*a) for a in product((-1, 0, 1), repeat=3)])
    extra = cli.random_keys(200, 5, -2, 2, seed=2024)
    values = {}
    for key in grid + extra:
        values[key] = {name: PIPELINES[name](key) for name in NAMES}
    return grid, extra, values, time.perf_counter() - start


def test_criterion_1_pipelines_agree(sweep):
    grid, extra, values, secs = sweep
    bad = [k for k, v in values.items() if not (v["skew"] == v["detf"] == v["bog"])]
    ok = len(grid) == 9261 and len(extra) == 200 and not bad
    record(1, ok, f"three pipelines equal on {len(grid)} grid + {len(extra)} random keys, "
                  f"{len(bad)} mismatches ({secs:.0f}s)")
    assert ok, bad[:3]


def test_criterion_2_hook_law():
    bad = []
    mus = enumerate_upto(8)
    for mu in mus:
        want = qpow(Fraction(kappa(mu), 4))
        for h in hooks(mu):
            want = want / bracket(h)
        if w_skew(VertexKey(mu)) != want:
            bad.append(mu)
    ok = len(mus) == 67 and not bad
    record(2, ok, f"one-leg hook law on {len(mus)} partitions, {len(bad)} failures")
    assert ok, bad


def test_criterion_3_framing_factorization(sweep):
    grid, _, values, _ = sweep
    bad = []
    for key in grid:
        base = values[key.with_framing(Framing())]
        f = framing_factor(key)
        for name in NAMES:
            if values[key][name] != f * base[name]:
                bad.append((key, name))
    record(3, not bad, f"framing factor on {len(grid)} keys x 3 pipelines, {len(bad)} failures")
    assert not bad, bad[:3]


def test_criterion_4_entry_matching():
    bad, n = [], 0
    for a in product((-1, 0, 1), repeat=3):
        fr = Framing(*a)
        for i, j, m, p in product((1, 2, 3), (1, 2, 3), range(5), range(5)):
            b = a_coeff_framed(i, j, m, p, fr)
            n += 1
            if f_entry(i, j, m, p, fr) != entry_ratio(i, j, fr) * (-b if p % 2 else b):
                bad.append((fr, i, j, m, p))
    cycles = 0
    for a in product((-1, 0, 1), repeat=3):
        for length in range(1, 5):
            for cyc in product((1, 2, 3), repeat=length):
                cycles += 1
                if cycle_product_check(cyc, Framing(*a)) != ONE:
                    bad.append(("cycle", a, cyc))
    record(4, not bad, f"{n} entries and {cycles} closed cycles, {len(bad)} failures")
    assert not bad, bad[:3]


def test_criterion_5_half_lattice(sweep):
    grid, extra, values, _ = sweep
    bad = [(k, name) for k in grid for name in NAMES if not half_lattice_check(values[k][name])]
    record(5, not bad, f"{3 * len(grid)} pipeline outputs on the half lattice, {len(bad)} off")
    assert not bad, bad[:3]


def _linear(rng, flavor):
    terms = {}
    for _ in range(rng.randint(1, 3)):
        terms[(flavor, rng.choice(range(-9, 10, 2)))] = ONE * Fraction(rng.randint(-3, 3), rng.randint(1, 2))
    return LinearFermion.of(terms)


def _fock_failures() -> list:
    bad = []
    half = lambda r2: Fraction(r2, 2)
    # Clifford relations and charge grading
    modes = range(-13, 14, 2)
    for s in truncated_basis(6, charges=(-1, 0, 1)):
        v = FockVector({s: ONE})
        for r2, s2 in product(modes, repeat=2):
            r, q = half(r2), half(s2)
            ac = apply_psi(r, apply_psi_star(q, v)) + apply_psi_star(q, apply_psi(r, v))
            if ac != (v if r2 + s2 == 0 else FockVector()):
                bad.append(("clifford", s, r, q))
            if not (apply_psi(r, apply_psi(q, v)) + apply_psi(q, apply_psi(r, v))).is_zero():
                bad.append(("psi-psi", s, r, q))
            if not (apply_psi_star(r, apply_psi_star(q, v)) + apply_psi_star(q, apply_psi_star(r, v))).is_zero():
                bad.append(("psi*-psi*", s, r, q))
        for r2 in modes:
            if any(t.charge != s.charge + 1 for t in apply_psi(half(r2), v).coeffs):
                bad.append(("charge+", s, r2))
            if any(t.charge != s.charge - 1 for t in apply_psi_star(half(r2), v).coeffs):
                bad.append(("charge-", s, r2))
        for n in (-3, -1, 1, 3):
            if any(t.charge != s.charge for t in apply_alpha(n, v).coeffs):
                bad.append(("charge0", s, n))
    # cut-and-join eigenvalues
    for lam in enumerate_upto(6):
        if apply_K(FockVector.basis(lam)) != FockVector.basis(lam).scale(kappa(lam)):
            bad.append(("K", lam))
    # Wick: brute force vs determinant, alternating products up to length 10
    rng = random.Random(17)
    for n in range(1, 6):
        for _ in range(20):
            ws = []
            for _ in range(n):
                ws += [_linear(rng, "psi"), _linear(rng, "psi*")]
            brute = wick_vev_bruteforce(ws)
            if brute != wick_vev_det(ws) or (n <= 3 and brute != vev_direct(ws)):
                bad.append(("wick", n))
    # Gamma commutation to total (z, w)-order 8 on |0> and |(1)>
    order, nv, w = 8, 2, (1, 1)
    z_alph, w_alph = VariableAlphabet(nv, 0), VariableAlphabet(nv, 1)
    geom = MultiPoly(nv, {(k, k): 1 for k in range(order // 2 + 1)})
    for start in (EMPTY, Partition.of(1)):
        v = FockVector.basis(start, coeff=MultiPoly.const(nv))
        cut = start.size + order
        lhs = apply_gamma("+", z_alph, apply_gamma("-", w_alph, v, cutoff=cut))
        rhs = apply_gamma("-", w_alph, apply_gamma("+", z_alph, v), cutoff=cut)
        for s in set(lhs.coeffs) | set(rhs.coeffs):
            a = lhs.coeffs.get(s, MultiPoly.zero(nv)).truncate(w, order)
            b = rhs.coeffs.get(s, MultiPoly.zero(nv)).mul(geom, w, order)
            if a != b:
                bad.append(("gamma-comm", start, s))
    # adjointness across the skew-Schur action and exponentiated bosons
    times = [power_sum_spec(n, Rho) / n for n in range(1, 5)]
    for mu in enumerate_upto(4):
        plus = apply_gamma("+", SpecAlphabet(Rho), FockVector.basis(mu))
        for nu in enumerate_upto(4):
            minus = apply_gamma_bosonic("-", times, FockVector.basis(nu), ONE, cutoff=4)
            if plus.coeff(nu, ZERO) != minus.coeff(mu, ZERO):
                bad.append(("adjoint", mu, nu))
    return bad


def test_criterion_6_fock_suite():
    start = time.perf_counter()
    bad = _fock_failures()
    record(6, not bad, f"Clifford, grading, K, Wick (length <= 10), Gamma commutation and adjointness, "
                       f"{len(bad)} failures ({time.perf_counter() - start:.0f}s)")
    assert not bad, bad[:3]


def test_criterion_7_hirota():
    u0 = Fraction(2, 3)
    one = hirota_residue_1kp(build_tau(1, (0, 0, 0), 6, u0), 3)
    mutated = hirota_residue_1kp(build_tau(1, (0, 0, 0), 6, u0).perturbed((Partition.of(2),)), 3)
    three = {a: hirota_residue_3kp(build_tau(3, a, 4, u0), 2) for a in ((0, 0, 0), (1, -1, 0))}
    parts = {
        "1-comp": one.ok() and one.stable > 0,
        "mutation": mutated.nonzero_stable > 0,
        **{f"3-comp {a}": r.ok() and r.stable > 0 for a, r in three.items()},
    }
    detail = [f"1-comp {one.nonzero_stable}/{one.stable} nonzero",
              f"mutation {mutated.nonzero_stable} nonzero"]
    detail += [f"3-comp {a} {r.nonzero_stable}/{r.stable} nonzero" for a, r in three.items()]
    ok = all(parts.values())
    record(7, ok, "; ".join(detail))
    assert ok, {k: v for k, v in parts.items() if not v}


def test_criterion_8_symfunc_oracles():
    bad = []
    for lam in enumerate_upto(6):
        for eta in subpartitions(lam):
            for s in (Rho, NegRho):
                if skew_schur_spec(lam, eta, s) != skew_schur_spec_dual(lam, eta, s):
                    bad.append(("jt", lam, eta, s))
    for mu in enumerate_upto(4):
        for k in range(9):
            if h_spec(k, Shifted(mu)) != h_spec_newton(k, Shifted(mu)):
                bad.append(("newton", mu, k))
    for m, n in product(range(6), repeat=2):
        row = Partition((m,)) if m else EMPTY
        col = Partition((1,) * n)
        if hook_sum_row(m, n) != schur_spec(row, Shifted(Partition((n,)) if n else EMPTY)):
            bad.append(("row", m, n))
        if hook_sum_col(m, n) != schur_spec(col, Shifted(Partition((1,) * m))):
            bad.append(("col", m, n))
    for mu in enumerate_upto(6):
        for a in (-1, 0, 1):
            if qpow(Fraction(a * kappa(mu), 2)) * schur_spec(mu, Rho) != giambelli_rho(mu, a):
                bad.append(("giambelli", mu, a))
    record(8, not bad, f"Jacobi-Trudi duality, Newton route, closed hook sums, Giambelli, {len(bad)} failures")
    assert not bad, bad[:3]


def _run(capsys, argv):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out


def test_criterion_9_cli_contract(capsys, monkeypatch, tmp_path):
    bad = []
    # determinism
    for argv in (["compute", "--mu1", "[2,1]", "--mu2", "[1]", "--mu3", "[2]", "--framing", "1,0,-1"],
                 ["table", "--max-size", "1", "--framings", "-1..0", "--format", "csv"],
                 ["verify", "--max-size", "1", "--framings", "-1..1"]):
        if _run(capsys, argv) != _run(capsys, argv):
            bad.append(("determinism", argv[0]))
    # exit codes
    if _run(capsys, ["compute", "--mu1", "[1]"])[0] != 0:
        bad.append(("exit0",))
    if _run(capsys, ["compute", "--mu1", "[2,0]"])[0] != 2:
        bad.append(("exit2",))
    if _run(capsys, ["verify", "--max-size", "9"])[0] != 2:
        bad.append(("exit2-limit",))
    original = vertex.f_entry
    with monkeypatch.context() as mp:
        mp.setattr(vertex, "f_entry",
                   lambda i, j, m, n, fr: original(i, j, m, n, fr) * (2 if (i, j, m, n) == (2, 3, 0, 0) else 1))
        if _run(capsys, ["verify", "--max-size", "1"])[0] != 1:
            bad.append(("exit1",))
    # cache round trip on 100 random keys
    keys = cli.random_keys(100, 4, -2, 2, seed=99)
    cache = ResultCache(tmp_path / "cache")
    fresh = [compute_values(k, NAMES, cache) for k in keys]
    reread = ResultCache(tmp_path / "cache")
    cached = [compute_values(k, NAMES, reread) for k in keys]
    if reread.misses or fresh != cached:
        bad.append(("cache", reread.hits, reread.misses))
    lines = [_run(capsys, ["compute", "--mu1", json.dumps(k.mu1.to_json_obj()),
                           "--mu2", json.dumps(k.mu2.to_json_obj()), "--mu3", json.dumps(k.mu3.to_json_obj()),
                           "--framing", ",".join(map(str, k.framing.as_tuple())),
                           "--cache-dir", str(tmp_path / "cache")])[1] for k in keys[:10]]
    plain = [_run(capsys, ["compute", "--mu1", json.dumps(k.mu1.to_json_obj()),
                           "--mu2", json.dumps(k.mu2.to_json_obj()), "--mu3", json.dumps(k.mu3.to_json_obj()),
                           "--framing", ",".join(map(str, k.framing.as_tuple()))])[1] for k in keys[:10]]
    if lines != plain:
        bad.append(("cached-output",))
    record(9, not bad, f"determinism, exit codes 0/1/2, cache round trip on {len(keys)} keys, {len(bad)} failures")
    assert not bad, bad
