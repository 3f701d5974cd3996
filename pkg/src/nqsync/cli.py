"""Command-line interface.

Exit codes: 0 success, 1 invalid input, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Sequence, TextIO

import numpy as np

from nqsync.bogoliubov import anticrossing, dispersion_sweep
from nqsync.config import PARAM_KEYS, PRESETS, RunConfig, load_config_file, resolve_config
from nqsync.errors import NumericalError, ParameterError
from nqsync.linalg import eigenvalues_general
from nqsync.model import CavityMode, build_drift_matrix
from nqsync.plotting import heatmaps, line_plot
from nqsync.sweep import (
    Axis, SweepRow, SweepSpec, argmax_axis, builtin_materials, fmt, isolation_crossings,
    run_material_suite, run_sweep, write_csv, write_dispersion_csv,
)
from nqsync.sync import nonreciprocal_pair


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with 2, which we reserve for numerics
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="YAML/JSON configuration file")
    common.add_argument("--preset", choices=PRESETS)
    common.add_argument("--out", help="output file (directory for the fig5 material suite)")
    common.add_argument("--plot", action="store_true", default=None, help="also write an SVG next to --out")
    common.add_argument("--axis1", help="name:start:stop:num[:unit]")
    common.add_argument("--axis2", help="name:start:stop:num[:unit]")
    common.add_argument("--materials", help="comma-separated material names")
    common.add_argument("--workers", type=int)
    common.add_argument("--metric", choices=("plain", "bosonic"))
    for key in PARAM_KEYS:
        common.add_argument(f"--{key}", f"--{key.replace('_', '-')}", dest=key, metavar="VALUE")

    parser = _Parser(prog="nqsync", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("sync", parents=[common], help="S12, S21 and the isolation ratio at one point")
    sub.add_parser("sweep", parents=[common], help="1-D or 2-D parameter sweep to CSV")
    sub.add_parser("dispersion", parents=[common], help="dressed dispersion and anticrossings")
    sub.add_parser("stability", parents=[common], help="drift-matrix stability for both cavity modes")
    sub.add_parser("materials", parents=[common], help="list the built-in material presets")
    return parser


def parse_config(argv: Sequence[str]) -> RunConfig:
    args = build_parser().parse_args(argv)
    file_values = load_config_file(args.config) if args.config else {}
    flags = {key: getattr(args, key) for key in PARAM_KEYS}
    for key in ("preset", "out", "plot", "axis1", "axis2", "materials", "workers", "metric"):
        flags[key] = getattr(args, key)
    return resolve_config(args.command, file_values=file_values, flag_values=flags)


def _out_path(cfg: RunConfig) -> Path | None:
    return Path(cfg.out) if cfg.out else None


def _svg_path(path: Path | None) -> Path:
    if path is None:
        raise ParameterError("--plot needs --out", key="plot")
    return path.with_suffix(".svg")


def _cmd_sync(cfg: RunConfig, stdout: TextIO, stderr: TextIO) -> int:
    params = cfg.system_params()
    res = nonreciprocal_pair(params)
    for label, value in (("S12", res.s12), ("S21", res.s21), ("Siso_dB", res.s_iso)):
        print(f"{label}: {fmt(value) or 'absent'}", file=stdout)
    print(f"stable_bright: {str(res.stable_bright).lower()}", file=stdout)
    print(f"stable_dark: {str(res.stable_dark).lower()}", file=stdout)
    out = _out_path(cfg)
    if out is not None:
        unit = cfg.params["h_unit"]
        row = SweepRow(f"h/{unit}", cfg.params["h"], None, None, res.s12, res.s21, res.s_iso,
                       res.stable_bright, res.stable_dark)
        write_csv([row], out)
    failed = [d for d in (res.bright, res.dark) if d.s is None]
    if failed:
        for d in failed:
            print(f"error: {d.mode.value} direction: {d.error}", file=stderr)
        return 2
    return 0


def _cmd_stability(cfg: RunConfig, stdout: TextIO, stderr: TextIO) -> int:
    params = cfg.system_params()
    for mode in CavityMode:
        spec = eigenvalues_general(build_drift_matrix(params.with_mode(mode)))
        verdict = "stable" if spec.max_real_part < -1e-9 else "unstable"
        print(f"{mode.value}: {verdict} (max Re(lambda) = {spec.max_real_part:.6e})", file=stdout)
    return 0


def _cmd_materials(cfg: RunConfig, stdout: TextIO, stderr: TextIO) -> int:
    header = ("material", "H_ex (T)", "H_an/H_ex", "g/H_ex", "kappa/H_ex", "kappa_c/H_ex")
    rows = [(m.name, f"{m.h_ex_tesla:g}", f"{m.h_an_ratio:.3g}", f"{m.g_ratio:.3g}",
             f"{m.kappa_ratio:.3g}", f"{m.kappa_c_ratio:.3g}") for m in builtin_materials()]
    widths = [max(len(r[i]) for r in (header, *rows)) for i in range(len(header))]
    for r in (header, *rows):
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip(), file=stdout)
    return 0


def _grid(rows: list[SweepRow], a1: Axis, a2: Axis, attr: str) -> np.ndarray:
    z = np.array([np.nan if getattr(r, attr) is None else getattr(r, attr) for r in rows], dtype=float)
    return z.reshape(len(a1.values), len(a2.values))


def _plot_rows(path: Path, rows: list[SweepRow], a1: Axis, a2: Axis | None, title: str = "") -> None:
    if a2 is None:
        x = list(a1.values)
        line_plot(path, x, [("S12", [r.s12 for r in rows]), ("S21", [r.s21 for r in rows])],
                  xlabel=a1.label, ylabel="S", title=title or "synchronization")
        line_plot(path.with_name(path.stem + "_siso.svg"), x, [("Siso (dB)", [r.s_iso for r in rows])],
                  xlabel=a1.label, ylabel="dB", title=title or "isolation ratio")
    else:
        panels = [(f"{title} S12".strip(), _grid(rows, a1, a2, "s12")),
                  (f"{title} S21".strip(), _grid(rows, a1, a2, "s21")),
                  (f"{title} Siso (dB)".strip(), _grid(rows, a1, a2, "s_iso"))]
        heatmaps(path, a1.values, a2.values, panels, xlabel=a1.label, ylabel=a2.label)


def _summarise(rows: list[SweepRow], a2: Axis | None, stdout: TextIO) -> None:
    stable = sum(r.stable_bright and r.stable_dark for r in rows)
    print(f"points: {len(rows)}  stable in both directions: {stable}", file=stdout)
    if a2 is None:
        print(f"argmax S12 at {fmt(argmax_axis(rows, 's12'))}", file=stdout)
        print(f"argmax S21 at {fmt(argmax_axis(rows, 's21'))}", file=stdout)
        crossings = ", ".join(fmt(x) for x in isolation_crossings(rows)) or "none"
        print(f"S12 = S21 at {crossings}", file=stdout)
    else:
        for attr, label in (("s12", "S12"), ("s21", "S21")):
            best = max((r for r in rows if getattr(r, attr) is not None),
                       key=lambda r: getattr(r, attr), default=None)
            if best is not None:
                print(f"max {label} = {fmt(getattr(best, attr))} at "
                      f"({best.axis1_name}={fmt(best.axis1)}, {best.axis2_name}={fmt(best.axis2)})",
                      file=stdout)


def _cmd_sweep(cfg: RunConfig, stdout: TextIO, stderr: TextIO) -> int:
    a1, a2 = cfg.axes()
    if a1 is None:
        raise ParameterError("sweep needs --axis1 or a preset", key="axis1")
    spec = SweepSpec(cfg.system_params(), a1, a2)
    out = _out_path(cfg)
    if cfg.materials:
        if out is None:
            raise ParameterError("a material suite needs --out <directory>", key="out")
        out.mkdir(parents=True, exist_ok=True)
        suite = run_material_suite(
            cfg.materials, spec,
            omega_c_over_hsp=cfg.params["omega_c_over_hsp"],
            delta_f_over_hsp=cfg.params["delta_f_over_hsp"],
            workers=cfg.workers,
        )
        for name, run in suite.items():
            if run.rows is None:
                print(f"error: {name}: {run.error}", file=stderr)
                continue
            write_csv(run.rows, out / f"{name}.csv")
            if cfg.plot:
                _plot_rows(out / f"{name}.svg", run.rows, a1, a2, title=name)
            print(f"[{name}]", file=stdout)
            _summarise(run.rows, a2, stdout)
        return 0 if all(run.rows is not None for run in suite.values()) else 1
    rows = run_sweep(spec, workers=cfg.workers)
    if out is None:
        write_csv(rows, stdout)
    else:
        write_csv(rows, out)
        _summarise(rows, a2, stdout)
    if cfg.plot:
        _plot_rows(_svg_path(out), rows, a1, a2)
    return 0


def _cmd_dispersion(cfg: RunConfig, stdout: TextIO, stderr: TextIO) -> int:
    a1, _ = cfg.axes()
    if a1 is None:
        a1 = Axis.linspace("h", 0.0, 0.4, 401, "Hsp")
    if a1.name != "h" or a1.unit != "Hsp":
        raise ParameterError("dispersion sweeps run over h in units of Hsp", key="axis1")
    params = cfg.system_params()
    points = dispersion_sweep(params, a1.values, metric=cfg.metric)
    out = _out_path(cfg)
    write_dispersion_csv(points, out if out is not None else stdout)
    summary = stdout if out is not None else stderr
    for mode in CavityMode:
        try:
            ac = anticrossing(params, mode, window=tuple(cfg.window), metric=cfg.metric)
        except NumericalError as exc:
            print(f"{mode.value}: {exc}", file=summary)
            continue
        print(f"{mode.value}: crossing H/H_sp = {fmt(ac.h_star)}, minimum gap {fmt(ac.gap)} "
              f"at H/H_sp = {fmt(ac.h_min_gap)} (2 g_beta_c = {fmt(ac.reduced_gap)})", file=summary)
    if cfg.plot:
        x = [p.h for p in points]
        series = [(f"omega_{i + 1}", [p.dressed[i] for p in points]) for i in range(3)]
        series += [(name, [p.bare[i] for p in points]) for i, name in enumerate(("omega_alpha", "omega_beta"))]
        line_plot(_svg_path(out), x, series, xlabel="H/H_sp", ylabel="frequency (H_ex)",
                  title=f"dispersion ({cfg.params['cavity_mode']} mode)")
    return 0


COMMANDS = {
    "sync": _cmd_sync,
    "sweep": _cmd_sweep,
    "dispersion": _cmd_dispersion,
    "stability": _cmd_stability,
    "materials": _cmd_materials,
}


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    if any(a in ("-h", "--help") for a in argv):
        build_parser().parse_args(argv)  # prints help and exits 0
    try:
        cfg = parse_config(argv)
        return COMMANDS[cfg.experiment](cfg, stdout, stderr)
    except _UsageError as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    except ParameterError as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    except NumericalError as exc:
        print(f"error: numerical failure: {exc}", file=stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
