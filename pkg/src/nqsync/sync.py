"""Synchronization degree of the two magnon modes and its nonreciprocity."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from nqsync.errors import NumericalError, UnphysicalCovariance, ZeroSyncDegree
from nqsync.linalg import DEFAULT_MARGIN, eigenvalues_general, solve_lyapunov
from nqsync.model import CavityMode, SystemParams, build_drift_matrix, build_noise_matrix

SYNC_BOUND_TOL = 1e-8


def difference_variances(v: NDArray[np.float64]) -> tuple[float, float]:
    """``(<X_-^2>, <Y_-^2>)`` with ``X_- = (X_a - X_b)/sqrt(2)``."""
    v = np.asarray(v, dtype=float)
    var_x = 0.5 * (v[0, 0] + v[2, 2] - 2.0 * v[0, 2])
    var_y = 0.5 * (v[1, 1] + v[3, 3] - 2.0 * v[1, 3])
    return float(var_x), float(var_y)


def sync_degree(v: NDArray[np.float64], tol: float = SYNC_BOUND_TOL) -> float:
    """Inverse summed variance of the difference quadratures, bounded by 1."""
    var_x, var_y = difference_variances(v)
    total = var_x + var_y
    if not total > 0.0:
        raise UnphysicalCovariance(f"non-positive difference variance {total!r}")
    s = 1.0 / total
    if s > 1.0 + tol:
        raise UnphysicalCovariance(f"synchronization degree {s!r} exceeds the Heisenberg bound 1")
    return s


def sir(s12: float, s21: float) -> float:
    """Synchronization isolation ratio in dB; symmetric in its arguments."""
    if not (s12 > 0.0 and s21 > 0.0):
        raise ZeroSyncDegree(f"synchronization degrees must be > 0, got {s12!r}, {s21!r}")
    lo, hi = sorted((s12, s21))
    return 20.0 * math.log10(hi / lo)


def signed_isolation(s12: float, s21: float) -> float:
    """``20 log10(s12/s21)``: positive where the bright direction wins."""
    return 20.0 * math.log10(s12 / s21)


@dataclass(frozen=True)
class DirectionResult:
    mode: CavityMode
    stable: bool
    max_real_part: float
    s: float | None = None
    covariance: NDArray[np.float64] | None = field(default=None, repr=False)
    error: str | None = None


def solve_direction(params: SystemParams, margin: float = DEFAULT_MARGIN) -> DirectionResult:
    """Full pipeline for the cavity mode already selected in ``params``."""
    a = build_drift_matrix(params)
    spectrum = eigenvalues_general(a)
    stable = spectrum.max_real_part < -margin
    if not stable:
        return DirectionResult(params.cavity_mode, False, spectrum.max_real_part,
                               error="unstable drift matrix")
    try:
        v = solve_lyapunov(a, build_noise_matrix(params), check_stability=False)
        s = sync_degree(v)
    except NumericalError as exc:
        return DirectionResult(params.cavity_mode, True, spectrum.max_real_part, error=str(exc))
    return DirectionResult(params.cavity_mode, True, spectrum.max_real_part, s, v)


@dataclass(frozen=True)
class SyncResult:
    """Bright (S12) and dark (S21) synchronization with the isolation ratio.

    Absent values are ``None``; ``s_iso`` is absent unless both directions
    produced a synchronization degree.
    """

    s12: float | None
    s21: float | None
    s_iso: float | None
    stable_bright: bool
    stable_dark: bool
    bright: DirectionResult = field(repr=False)
    dark: DirectionResult = field(repr=False)


def nonreciprocal_pair(params: SystemParams, margin: float = DEFAULT_MARGIN) -> SyncResult:
    bright = solve_direction(params.with_mode(CavityMode.BRIGHT), margin)
    dark = solve_direction(params.with_mode(CavityMode.DARK), margin)
    s_iso = sir(bright.s, dark.s) if bright.s is not None and dark.s is not None else None
    return SyncResult(bright.s, dark.s, s_iso, bright.stable, dark.stable, bright, dark)
