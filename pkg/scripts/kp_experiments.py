"""Hirota residue experiments on the vertex tau and on control tau functions.

Prints one JSON line per run.  The controls separate the behaviour of the
charge-zero 3-component identity on decoupled and coupled tau functions.
"""

import json
import random
from fractions import Fraction

from topvertex.kp import (
    TauSeries,
    bogoliubov_tau,
    bogoliubov_tau_3,
    build_tau,
    hirota_residue_1kp,
    hirota_residue_3kp,
    kp_equation_check,
)
from topvertex.partitions import Partition


def show(label, rep):
    row = {"run": label, **rep.to_json_obj()}
    row["sample_nonzero"] = [f"{rep.describe(e)}: {e.value}" for e in rep.nonzero_entries()[:4]]
    print(json.dumps(row))


def rand_matrix(rng, n):
    return [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]


def main():
    u0 = Fraction(2, 3)
    rng = random.Random(1)

    show("vertex 1-comp N=6 d=3", hirota_residue_1kp(build_tau(1, (0, 0, 0), 6, u0), 3))
    show("vertex 1-comp mutated s_(2)",
         hirota_residue_1kp(build_tau(1, (0, 0, 0), 6, u0).perturbed((Partition.of(2),)), 3))
    show("vertex KP equation N=9 d=2", kp_equation_check(build_tau(1, (0, 0, 0), 9, u0), 2))
    show("bogoliubov 1-comp", hirota_residue_1kp(bogoliubov_tau(rand_matrix(rng, 4), 5), 3))

    for a in ((0, 0, 0), (1, -1, 0)):
        show(f"vertex 3-comp N=4 d=2 framing {a}", hirota_residue_3kp(build_tau(3, a, 4, u0), 2))

    one = build_tau(1, (0, 0, 0), 4, u0)
    prod = TauSeries(3, 4, coeff_fn=lambda t: one.coeff((t[0],)) * one.coeff((t[1],)) * one.coeff((t[2],)))
    show("control: product of 1-comp taus", hirota_residue_3kp(prod, 2))
    diag = {(i, i): rand_matrix(rng, 3) for i in (1, 2, 3)}
    show("control: bogoliubov diagonal blocks", hirota_residue_3kp(bogoliubov_tau_3(diag, 4), 2))
    full = {(i, j): rand_matrix(rng, 3) for i in (1, 2, 3) for j in (1, 2, 3)}
    show("control: bogoliubov with cross blocks", hirota_residue_3kp(bogoliubov_tau_3(full, 4), 2))


if __name__ == "__main__":
    main()
