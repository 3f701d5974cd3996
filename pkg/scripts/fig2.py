"""Synchronization versus the static field for the bright and dark cavity modes.

Writes results/fig2.csv (+ .svg) and prints the peak positions and the field
where the two directions become reciprocal.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from nqsync.model import fig2_params
from nqsync.plotting import line_plot
from nqsync.sweep import Axis, SweepSpec, argmax_axis, isolation_crossings, run_sweep, write_csv


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results", help="output directory")
    ap.add_argument("--num", type=int, default=161, help="grid points over H/H_sp in [0, 0.4]")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    axis = Axis.linspace("h", 0.0, 0.4, args.num, "Hsp")
    rows = run_sweep(SweepSpec(fig2_params(), axis))
    write_csv(rows, out / "fig2.csv")
    x = list(axis.values)
    line_plot(out / "fig2.svg", x, [("S12", [r.s12 for r in rows]), ("S21", [r.s21 for r in rows])],
              xlabel="H/H_sp", ylabel="S", title="synchronization vs field")
    line_plot(out / "fig2_siso.svg", x, [("Siso (dB)", [r.s_iso for r in rows])],
              xlabel="H/H_sp", ylabel="dB", title="isolation ratio")

    print(f"argmax S12 at H/H_sp = {argmax_axis(rows, 's12'):.4f}")
    print(f"argmax S21 at H/H_sp = {argmax_axis(rows, 's21'):.4f}")
    print("S12 = S21 at H/H_sp =", ", ".join(f"{h:.5f}" for h in isolation_crossings(rows)))
    print(f"max Siso = {max(r.s_iso for r in rows):.2f} dB")


if __name__ == "__main__":
    main()
