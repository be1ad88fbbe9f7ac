#!/usr/bin/env python3
"""Render a ground-state-energy scan with its first and second differences.

Example documentation script, not product code.  Produce the data with

    iddm deriv --wrt delta --from 0 --to 1 --step 1e-3 --output scan.csv

then render it:

    python scripts/plot_energy_derivatives.py scan.csv --output derivatives.png

The discontinuity of d2 at the critical point is the second-order transition
signature; the edge rows carry no differences and are skipped.
"""

from __future__ import annotations

import argparse
import csv
import sys


def read_scan(path: str):
    values, e0, d1, d2 = [], [], [], []
    name = None
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            name = row["param"]
            values.append(float(row["value"]))
            e0.append(float(row["e0"]))
            d1.append(float(row["d1"]) if row["d1"] else None)
            d2.append(float(row["d2"]) if row["d2"] else None)
    return name, values, e0, d1, d2


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("csv_path", help="output of `iddm deriv`")
    parser.add_argument("--output", default="derivatives.png", help="figure path")
    args = parser.parse_args(argv)

    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib is required for plotting: pip install matplotlib", file=sys.stderr)
        return 1

    name, values, e0, d1, d2 = read_scan(args.csv_path)
    inner = [i for i, v in enumerate(d1) if v is not None]

    fig, axes = plt.subplots(3, 1, figsize=(6, 8), sharex=True)
    axes[0].plot(values, e0)
    axes[0].set_ylabel(r"$E_0$")
    axes[1].plot([values[i] for i in inner], [d1[i] for i in inner])
    axes[1].set_ylabel(r"$dE_0/d%s$" % name)
    axes[2].plot([values[i] for i in inner], [d2[i] for i in inner])
    axes[2].set_ylabel(r"$d^2E_0/d%s^2$" % name)
    axes[2].set_xlabel(name)
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)
    print(f"wrote {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
