"""Time-domain cross-check of the steady-state covariance.

Integrates the second-moment equation ``dV/dt = A V + V Aᵀ + D`` with
fixed-step classical RK4 until the rate vanishes. It shares nothing with
the vectorised Lyapunov solve except the inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from nqsync.errors import Diverged, NotConverged

DIVERGENCE_NORM = 1e12
DEFAULT_T_MAX = 1e6
DEFAULT_RATE_FACTOR = 1e-12


@dataclass(frozen=True)
class IntegrationReport:
    v_final: NDArray[np.float64]
    t_final: float
    converged: bool
    final_rate_norm: float
    steps: int


def default_step(a) -> float:
    return 0.05 / max(1.0, float(np.max(np.abs(a))))


def _rate(a: NDArray[np.float64], v: NDArray[np.float64], d: NDArray[np.float64]) -> NDArray[np.float64]:
    return a @ v + v @ a.T + d


def _probe_generator(a: NDArray[np.float64]) -> NDArray[np.float64]:
    """Columns are ``A E + E Aᵀ`` for each unit matrix ``E`` (row-major vec)."""
    n = a.shape[0]
    cols = np.empty((n * n, n * n))
    e = np.zeros((n, n))
    for idx in range(n * n):
        e.flat[idx] = 1.0
        cols[:, idx] = (a @ e + e @ a.T).ravel()
        e.flat[idx] = 0.0
    return cols


def rate_floor(a, v) -> float:
    """Smallest rate norm resolvable in double precision at state ``v``."""
    return 16.0 * np.finfo(float).eps * float(np.linalg.norm(a)) * float(np.linalg.norm(v))


def integrate_covariance(
    a,
    d,
    v0=None,
    dt: float | None = None,
    t_max: float = DEFAULT_T_MAX,
    rate_tol: float | None = None,
    *,
    raise_on_failure: bool = True,
) -> IntegrationReport:
    """RK4-integrate the covariance to its fixed point.

    Stops once ``||A V + V Aᵀ + D||_F`` drops below ``rate_tol`` (default
    ``1e-12 ||D||_F``) or at ``t_max``. The tolerance is never tighter than
    :func:`rate_floor`, below which the rate is pure rounding noise. With
    ``raise_on_failure`` unset, non-convergence is reported through
    ``converged=False`` instead of :class:`NotConverged`; divergence always
    raises.

    The right-hand side is linear in V, so one classical RK4 step equals
    ``V + dt P(dt L)(L V + D)`` with ``P(x) = 1 + x/2 + x²/6 + x³/24``; the
    step is applied in that form with the generator ``L`` probed from the
    matrix equation. The state is accumulated with Kahan compensation so
    that increments far below ``eps ||V||`` still register.
    """
    a = np.asarray(a, dtype=float)
    d = np.asarray(d, dtype=float)
    n = a.shape[0]
    v = np.zeros((n, n)) if v0 is None else np.array(v0, dtype=float)
    if not np.allclose(v, v.T, rtol=0.0, atol=1e-12):
        raise ValueError("v0 must be symmetric")
    v = 0.5 * (v + v.T)
    if dt is None:
        dt = default_step(a)
    if not dt > 0.0:
        raise ValueError(f"dt must be > 0, got {dt!r}")
    if not t_max > dt:
        raise ValueError(f"t_max must exceed dt, got t_max={t_max!r}, dt={dt!r}")
    if rate_tol is None:
        rate_tol = DEFAULT_RATE_FACTOR * float(np.linalg.norm(d))

    gen = _probe_generator(a)
    eye = np.eye(n * n)
    hl = dt * gen
    poly = eye + hl @ (eye / 2.0 + hl @ (eye / 6.0 + hl / 24.0))
    step_op = dt * poly
    transpose = np.arange(n * n).reshape(n, n).T.ravel()
    dvec = d.ravel()
    a_norm = float(np.linalg.norm(a))
    floor_factor = 16.0 * np.finfo(float).eps * a_norm

    y = v.ravel().copy()
    comp = np.zeros_like(y)
    max_steps = int(np.ceil(t_max / dt))
    steps = 0
    r = gen @ y + dvec
    rate = float(np.linalg.norm(r))
    while rate > 0.0 and rate >= max(rate_tol, floor_factor * float(np.linalg.norm(y))) and steps < max_steps:
        inc = step_op @ r - comp
        new = y + inc
        comp = (new - y) - inc
        y = 0.5 * (new + new[transpose])
        comp = 0.5 * (comp + comp[transpose])
        steps += 1
        norm = float(np.linalg.norm(y))
        if not norm <= DIVERGENCE_NORM:
            raise Diverged(f"||V||_F = {norm:.3e} after t = {steps * dt:.6g}; drift matrix is unstable")
        r = gen @ y + dvec
        rate = float(np.linalg.norm(r))

    v = y.reshape(n, n).copy()
    rate = float(np.linalg.norm(_rate(a, v, d)))
    effective_tol = max(rate_tol, rate_floor(a, v))
    converged = rate == 0.0 or rate < effective_tol
    t_final = steps * dt
    if not converged and raise_on_failure:
        raise NotConverged(f"rate norm {rate:.3e} still above {effective_tol:.3e} at t = {t_final:.6g}")
    return IntegrationReport(v, t_final, converged, rate, steps)
