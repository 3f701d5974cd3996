"""Dispersion of the Bogoliubov-frame Hamiltonian and its anticrossings.

In the Bogoliubov frame the magnon sector is diagonal, and the cavity couples
to α (parametrically) and β (beam-splitter). The 3×3 matrix

    [[ω_α, 0,   g_αc],
     [0,   ω_β, g_βc],
     [g_αc, g_βc, ω_±]]

is diagonalised as a plain real symmetric matrix by default. ``metric=
"bosonic"`` instead takes the eigenvalues of ``diag(1, -1, -1) @ M``, the
dynamical matrix of the mixed ``(α, β†, c†)`` basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import brentq, minimize_scalar

from nqsync.errors import NoCrossing
from nqsync.linalg import eigenvalues_general, eigh_jacobi
from nqsync.model import CavityMode, DerivedQuantities, SystemParams, derive

METRICS = ("plain", "bosonic")
ANTICROSSING_TOL = 1e-6  # in units of H_sp


def dispersion_matrix(dq: DerivedQuantities, cavity_mode: CavityMode | str | None = None) -> NDArray[np.float64]:
    mode = dq.cavity_mode if cavity_mode is None else CavityMode.parse(cavity_mode)
    w = dq.omega_plus if mode is CavityMode.BRIGHT else dq.omega_minus
    return np.array(
        [
            [dq.omega_alpha, 0.0, dq.g_alpha_c],
            [0.0, dq.omega_beta, dq.g_beta_c],
            [dq.g_alpha_c, dq.g_beta_c, w],
        ]
    )


@dataclass(frozen=True)
class DispersionPoint:
    """Bare and dressed frequencies at one field value.

    ``h`` is in units of H_sp. ``dressed`` is ascending; ``alpha_branch``
    indexes the dressed branch with the largest α weight, the other two
    being the β-cavity polaritons.
    """

    h: float
    bare: tuple[float, float, float]
    dressed: tuple[float, float, float]
    alpha_branch: int

    @property
    def polariton_gap(self) -> float:
        lo, hi = (w for i, w in enumerate(self.dressed) if i != self.alpha_branch)
        return hi - lo


def _dressed(m: NDArray[np.float64], metric: str) -> tuple[NDArray[np.float64], int]:
    if metric == "plain":
        w, vecs = eigh_jacobi(m)
        return w, int(np.argmax(np.abs(vecs[0])))
    if metric == "bosonic":
        eig = eigenvalues_general(np.diag([1.0, -1.0, -1.0]) @ m).eigenvalues
        w = np.sort(eig.real)
        # the α-like branch is the one nearest ω_α
        return w, int(np.argmin(np.abs(w - m[0, 0])))
    raise ValueError(f"metric must be one of {METRICS}, got {metric!r}")


def dispersion_point(params: SystemParams, metric: str = "plain") -> DispersionPoint:
    dq = derive(params)
    m = dispersion_matrix(dq)
    w, alpha = _dressed(m, metric)
    return DispersionPoint(
        h=params.h / dq.h_sp,
        bare=(dq.omega_alpha, dq.omega_beta, dq.omega_cavity),
        dressed=tuple(float(x) for x in w),
        alpha_branch=alpha,
    )


def _at_field(params: SystemParams, h_over_hsp: float) -> SystemParams:
    return replace(params, h=h_over_hsp * params.h_sp)


def dispersion_sweep(params: SystemParams, h_grid, metric: str = "plain") -> list[DispersionPoint]:
    """One :class:`DispersionPoint` per field value (``h_grid`` in units of H_sp)."""
    grid = np.asarray(h_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("h_grid must be a non-empty 1-D sequence")
    if np.any(np.diff(grid) <= 0.0):
        raise ValueError("h_grid must be strictly ascending")
    return [dispersion_point(_at_field(params, h), metric) for h in grid]


@dataclass(frozen=True)
class Anticrossing:
    """β-cavity anticrossing.

    ``h_star`` is the bare crossing ``ω_β(h) = ω_±`` and ``h_min_gap`` the
    field where the dressed polariton gap is smallest; both in units of H_sp.
    They differ by the level shift the α branch imprints on the cavity.
    """

    h_star: float
    gap: float
    h_min_gap: float
    reduced_gap: float
    correction_bound: float

    def __iter__(self):
        yield self.h_star
        yield self.gap


def anticrossing(
    params: SystemParams,
    cavity_mode: CavityMode | str | None = None,
    window: tuple[float, float] = (0.0, 1.0),
    coarse_points: int = 201,
    metric: str = "plain",
) -> Anticrossing:
    """Locate the anticrossing of the β branch with the selected cavity mode."""
    if cavity_mode is not None:
        params = params.with_mode(cavity_mode)
    lo, hi = window
    if not hi > lo:
        raise ValueError(f"empty search window {window!r}")

    def detuning(h: float) -> float:
        dq = derive(_at_field(params, h))
        return dq.omega_beta - dq.omega_cavity

    f_lo, f_hi = detuning(lo), detuning(hi)
    if f_lo == 0.0:
        h_star = lo
    elif f_hi == 0.0:
        h_star = hi
    elif math.copysign(1.0, f_lo) == math.copysign(1.0, f_hi):
        raise NoCrossing(
            f"omega_beta never meets the {params.cavity_mode.value} cavity frequency for H/H_sp in {window}"
        )
    else:
        h_star = brentq(detuning, lo, hi, xtol=1e-14, rtol=1e-14)

    def gap(h: float) -> float:
        return dispersion_point(_at_field(params, h), metric).polariton_gap

    grid = np.linspace(lo, hi, coarse_points)
    gaps = np.array([gap(h) for h in grid])
    i = int(np.argmin(gaps))
    if 0 < i < coarse_points - 1:
        res = minimize_scalar(gap, bracket=(grid[i - 1], grid[i], grid[i + 1]), method="golden",
                              tol=ANTICROSSING_TOL)
        h_min, g_min = float(res.x), float(res.fun)
    else:
        h_min, g_min = float(grid[i]), float(gaps[i])

    dq = derive(_at_field(params, h_star))
    alpha_detuning = abs(dq.omega_alpha - dq.omega_cavity)
    bound = dq.g_alpha_c**2 / alpha_detuning if alpha_detuning > 0 else math.inf
    return Anticrossing(h_star, g_min, h_min, 2.0 * abs(dq.g_beta_c), bound)
