#!/usr/bin/env python3
"""Run the standard demo sweeps (x = 100 model, model units) and write
CSV outputs under out/.  Equivalent CLI invocations are printed so the
files can be reproduced by hand."""

import pathlib
import sys

from khalfin.cli import main

OUT = pathlib.Path(__file__).resolve().parent.parent / "out"
CATALOG = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data" / "demo_catalog.csv"

RUNS = [
    ["amplitude", "--x", "100", "--out", str(OUT / "amplitude_demo.csv")],
    ["amplitude", "--x", "100", "--points", "40", "--t-stop", "100",
     "--routes", "closed_form,quadrature,asymptotic",
     "--out", str(OUT / "amplitude_routes.csv")],
    ["hamiltonian", "--x", "100", "--t-start", "0.1", "--t-stop", "3000",
     "--out", str(OUT / "hamiltonian_demo.csv")],
    ["crossover", "--x", "100", "--format", "json",
     "--out", str(OUT / "crossover_demo.json")],
    ["redshift", "--catalog", str(CATALOG), "--beta", "0.1",
     "--out", str(OUT / "redshift_demo.csv")],
]


def run() -> int:
    OUT.mkdir(exist_ok=True)
    for argv in RUNS:
        print("khalfin " + " ".join(argv))
        status = main(argv)
        if status != 0:
            print(f"  -> failed with exit status {status}", file=sys.stderr)
            return status
    print(f"outputs written to {OUT}")
    return 0


if __name__ == "__main__":
    sys.exit(run())
