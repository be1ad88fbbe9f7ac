#!/usr/bin/env python3
"""Render a (delta, lambda) phase diagram from a sweep CSV.

Example documentation script, not product code.  Produce the data with

    iddm sweep --output grid.csv

then render it:

    python scripts/plot_phase_diagram.py grid.csv --output phase_diagram.png

The left panel shows the phase label at every grid point (error-tagged rows
are drawn as gaps), the right panel the photon fraction I/N = alpha^2, and
both overlay the closed-form critical curve lambda_c(delta).
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from iddm import ModelParams, trace_critical_curve


def read_sweep(path: str):
    deltas, lams, phases, alpha2 = [], [], [], []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            deltas.append(float(row["delta"]))
            lams.append(float(row["lambda"]))
            phases.append(row["phase"])
            alpha2.append(float(row["alpha2"]))
    return np.array(deltas), np.array(lams), phases, np.array(alpha2)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("csv_path", help="output of `iddm sweep` in CSV format")
    parser.add_argument("--output", default="phase_diagram.png", help="figure path")
    parser.add_argument("--omega", type=float, default=400.0)
    parser.add_argument("--omega0", type=float, default=1.0)
    parser.add_argument("--kappa", type=float, default=-0.5)
    args = parser.parse_args(argv)

    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib is required for plotting: pip install matplotlib", file=sys.stderr)
        return 1

    deltas, lams, phases, alpha2 = read_sweep(args.csv_path)
    d_axis = np.unique(deltas)
    l_axis = np.unique(lams)
    shape = (d_axis.size, l_axis.size)
    code = {"normal": 0.0, "critical": 1.0, "superradiant": 2.0, "error": np.nan}
    label_grid = np.array([code[p] for p in phases]).reshape(shape)
    alpha_grid = alpha2.reshape(shape)

    params = ModelParams(omega=args.omega, lam=1.0, kappa=args.kappa, omega0=args.omega0)
    curve = [(d, lc) for d, lc in trace_critical_curve(params) if lc is not None]

    fig, (ax_phase, ax_photon) = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
    for ax, grid, title in (
        (ax_phase, label_grid, "phase"),
        (ax_photon, alpha_grid, r"$I/N = \alpha^2$"),
    ):
        mesh = ax.pcolormesh(d_axis, l_axis, grid.T, shading="nearest")
        ax.plot(*zip(*curve), "w--", linewidth=1.2, label=r"$\lambda_c(\delta)$")
        ax.set_xlabel(r"impurity population $\delta$")
        ax.set_title(title)
        fig.colorbar(mesh, ax=ax)
    ax_phase.set_ylabel(r"coupling $\lambda$")
    ax_phase.legend(loc="upper left")
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)
    print(f"wrote {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
