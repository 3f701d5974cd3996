"""Parameter sweeps, material presets, and the tabular output format."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

from nqsync.errors import ParameterError, UnknownMaterial
from nqsync.model import PARAM_NAMES, SystemParams, spin_flop_field
from nqsync.sync import SyncResult, nonreciprocal_pair, signed_isolation

CSV_HEADER = ("axis1_name", "axis1", "axis2_name", "axis2", "S12", "S21", "Siso_dB", "stable_bright", "stable_dark")
DISPERSION_HEADER = ("h_over_hsp", "omega_alpha", "omega_beta", "omega_cavity", "omega_1", "omega_2", "omega_3")
OUTPUTS = frozenset({"S12", "S21", "Siso", "dispersion"})
AXIS_UNITS = ("Hex", "Hsp")


def fmt(x: float | None) -> str:
    """12 significant digits; ``None`` and NaN become an empty field."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return format(float(x), ".12g")


# --- materials -------------------------------------------------------------


@dataclass(frozen=True)
class MaterialPreset:
    name: str
    h_ex_tesla: float
    h_an_ratio: float
    g_ratio: float
    kappa_ratio: float
    kappa_c_ratio: float

    def params(
        self,
        *,
        g_ab: float = 1.0,
        h_over_hsp: float = 0.0,
        omega_c_over_hsp: float = 0.85,
        delta_f_over_hsp: float = 0.05,
    ) -> SystemParams:
        h_sp = spin_flop_field(self.h_an_ratio, 1.0)
        return SystemParams.symmetric(
            h_ex=1.0, h_an=self.h_an_ratio, h=h_over_hsp * h_sp, g_ab=g_ab, g=self.g_ratio,
            kappa=self.kappa_ratio, kappa_c=self.kappa_c_ratio,
            omega_c=omega_c_over_hsp * h_sp, delta_f=delta_f_over_hsp * h_sp,
        )


_MATERIALS = (
    MaterialPreset("DPPH", 1.73, 1.8e-2, 8e-4, 1.05e-5, 6.12e-4),
    MaterialPreset("MnF2", 51.5, 1.63e-2, 1e-3, 9.7e-6, 6e-4),
    MaterialPreset("NaNiO2", 4.8, 7.3e-2, 1.2e-2, 1e-3, 5e-3),
    MaterialPreset("NiO", 524.0, 2.8e-3, 3e-4, 5e-4, 1e-4),
)


def builtin_materials() -> list[MaterialPreset]:
    return list(_MATERIALS)


def material(name: str) -> MaterialPreset:
    key = name.replace("₂", "2").lower()
    for m in _MATERIALS:
        if m.name.lower() == key:
            return m
    raise UnknownMaterial(f"unknown material {name!r}; known: {', '.join(m.name for m in _MATERIALS)}",
                          key="material")


# --- sweep specification ---------------------------------------------------


@dataclass(frozen=True)
class Axis:
    """A swept parameter. ``h`` may be given in units of H_sp (``unit="Hsp"``)."""

    name: str
    values: tuple[float, ...]
    unit: str = "Hex"

    def __post_init__(self):
        if self.name not in PARAM_NAMES:
            raise ParameterError(f"unknown sweep parameter {self.name!r}", key="axis")
        if self.unit not in AXIS_UNITS:
            raise ParameterError(f"axis unit must be one of {AXIS_UNITS}, got {self.unit!r}", key="axis")
        if self.unit == "Hsp" and self.name != "h":
            raise ParameterError("only the field h can be swept in units of H_sp", key="axis")
        values = tuple(float(v) for v in self.values)
        if not values:
            raise ParameterError(f"axis {self.name!r} has an empty grid", key="axis")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ParameterError(f"axis {self.name!r} grid must be strictly ascending", key="axis")
        object.__setattr__(self, "values", values)

    @classmethod
    def linspace(cls, name: str, start: float, stop: float, num: int, unit: str = "Hex") -> "Axis":
        return cls(name, tuple(np.linspace(start, stop, int(num))), unit)

    @property
    def label(self) -> str:
        return f"{self.name}/{self.unit}"

    def apply(self, params: SystemParams, value: float) -> SystemParams:
        if self.unit == "Hsp":
            value = value * params.h_sp
        return replace(params, **{self.name: value})


@dataclass(frozen=True)
class SweepSpec:
    base: SystemParams
    axis1: Axis
    axis2: Axis | None = None
    outputs: frozenset[str] = field(default_factory=lambda: frozenset({"S12", "S21", "Siso"}))

    def __post_init__(self):
        outputs = frozenset(self.outputs)
        if not outputs or not outputs <= OUTPUTS:
            raise ParameterError(f"outputs must be a non-empty subset of {sorted(OUTPUTS)}", key="outputs")
        object.__setattr__(self, "outputs", outputs)

    def points(self) -> list[tuple[float, float | None]]:
        """Grid points in row-major order over (axis1, axis2)."""
        if self.axis2 is None:
            return [(x, None) for x in self.axis1.values]
        return [(x, y) for x in self.axis1.values for y in self.axis2.values]

    def params_at(self, x: float, y: float | None) -> SystemParams:
        p = self.axis1.apply(self.base, x)
        if self.axis2 is not None:
            p = self.axis2.apply(p, y)
        return p


@dataclass(frozen=True)
class SweepRow:
    axis1_name: str
    axis1: float
    axis2_name: str | None
    axis2: float | None
    s12: float | None
    s21: float | None
    s_iso: float | None
    stable_bright: bool
    stable_dark: bool
    error: str | None = None
    result: SyncResult | None = field(default=None, repr=False, compare=False)

    def csv_fields(self) -> list[str]:
        return [
            self.axis1_name, fmt(self.axis1), self.axis2_name or "", fmt(self.axis2),
            fmt(self.s12), fmt(self.s21), fmt(self.s_iso),
            str(self.stable_bright).lower(), str(self.stable_dark).lower(),
        ]


def _evaluate(spec: SweepSpec, x: float, y: float | None, keep_result: bool) -> SweepRow:
    a2 = spec.axis2.label if spec.axis2 is not None else None
    try:
        res = nonreciprocal_pair(spec.params_at(x, y))
    except ParameterError as exc:
        return SweepRow(spec.axis1.label, x, a2, y, None, None, None, False, False, error=str(exc))
    errors = "; ".join(e for e in (res.bright.error, res.dark.error) if e and e != "unstable drift matrix")
    out = spec.outputs
    return SweepRow(
        spec.axis1.label, x, a2, y,
        res.s12 if "S12" in out else None,
        res.s21 if "S21" in out else None,
        res.s_iso if "Siso" in out else None,
        res.stable_bright, res.stable_dark,
        error=errors or None,
        result=res if keep_result else None,
    )


def _evaluate_chunk(args) -> list[SweepRow]:
    spec, chunk = args
    return [_evaluate(spec, x, y, False) for x, y in chunk]


def run_sweep(spec: SweepSpec, workers: int = 1, keep_results: bool = False) -> list[SweepRow]:
    """Evaluate the bright/dark pair at every grid point, row-major.

    Per-point failures are recorded in the row and never abort the sweep.
    ``workers > 1`` fans the grid out over processes; row order and values
    do not depend on it. ``keep_results`` retains the full per-point
    :class:`SyncResult` (covariances included), serial runs only.
    """
    pts = spec.points()
    if workers <= 1 or len(pts) < 2 * workers:
        return [_evaluate(spec, x, y, keep_results) for x, y in pts]
    if keep_results:
        raise ValueError("keep_results requires workers=1")
    size = math.ceil(len(pts) / (4 * workers))
    chunks = [(spec, pts[i : i + size]) for i in range(0, len(pts), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return [row for rows in pool.map(_evaluate_chunk, chunks) for row in rows]


def write_csv(rows: Iterable[SweepRow], out: TextIO | str | Path) -> None:
    if isinstance(out, (str, Path)):
        with open(out, "w", newline="") as fh:
            write_csv(rows, fh)
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow(row.csv_fields())


def rows_to_csv(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


def write_dispersion_csv(points, out: TextIO | str | Path) -> None:
    if isinstance(out, (str, Path)):
        with open(out, "w", newline="") as fh:
            write_dispersion_csv(points, fh)
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(DISPERSION_HEADER)
    for p in points:
        w.writerow([fmt(p.h), *(fmt(x) for x in p.bare), *(fmt(x) for x in p.dressed)])


# --- materials suite ---------------------------------------------------------


@dataclass(frozen=True)
class MaterialRun:
    material: MaterialPreset
    rows: list[SweepRow] | None
    error: str | None = None


def run_material_suite(
    materials: Sequence[MaterialPreset | str],
    template: SweepSpec,
    *,
    omega_c_over_hsp: float = 0.85,
    delta_f_over_hsp: float = 0.05,
    workers: int = 1,
    keep_results: bool = False,
) -> dict[str, MaterialRun]:
    """Run ``template``'s grid once per material with its own ratios substituted.

    The cavity frequencies follow each material's own spin-flop field.
    """
    out: dict[str, MaterialRun] = {}
    for item in materials:
        mat = material(item) if isinstance(item, str) else item
        try:
            base = mat.params(
                g_ab=template.base.g_ab,
                h_over_hsp=template.base.h / template.base.h_sp,
                omega_c_over_hsp=omega_c_over_hsp,
                delta_f_over_hsp=delta_f_over_hsp,
            )
            spec = replace(template, base=base)
            out[mat.name] = MaterialRun(mat, run_sweep(spec, workers=workers, keep_results=keep_results))
        except ParameterError as exc:
            out[mat.name] = MaterialRun(mat, None, str(exc))
    return out


# --- feature detection --------------------------------------------------------


def argmax_axis(rows: Sequence[SweepRow], column: str) -> float:
    """Axis-1 value of the largest entry of ``column`` ('s12', 's21', 's_iso')."""
    best, where = -math.inf, math.nan
    for r in rows:
        v = getattr(r, column)
        if v is not None and v > best:
            best, where = v, r.axis1
    return where


def zero_crossings(x: Sequence[float], y: Sequence[float | None]) -> list[float]:
    """Sign changes of ``y`` located by linear interpolation; exact zeros included."""
    out = []
    pts = [(a, b) for a, b in zip(x, y) if b is not None and not math.isnan(b)]
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        if y0 == 0.0:
            out.append(x0)
        elif y0 * y1 < 0.0:
            out.append(x0 - y0 * (x1 - x0) / (y1 - y0))
    if pts and pts[-1][1] == 0.0:
        out.append(pts[-1][0])
    return out


def isolation_crossings(rows: Sequence[SweepRow]) -> list[float]:
    """Fields where S12 = S21, from the sign of ``20 log10(S12/S21)``."""
    x = [r.axis1 for r in rows]
    y = [signed_isolation(r.s12, r.s21) if r.s12 and r.s21 else None for r in rows]
    return zero_crossings(x, y)
