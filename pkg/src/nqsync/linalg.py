"""Small dense real linear algebra.

Nonsymmetric eigenvalues use Householder reduction to Hessenberg form
followed by Francis double-shift QR; symmetric eigenproblems use cyclic
Jacobi rotations. The steady-state Lyapunov equation is solved by
vectorisation, which at 6×6 is a 36×36 LU solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from nqsync.errors import ConvergenceFailure, SingularSolve, UnstableSystem

MAX_DIMENSION = 64
DEFAULT_MARGIN = 1e-9
EPS = float(np.finfo(float).eps)
LYAPUNOV_RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: NDArray[np.complex128]
    max_real_part: float


def _as_square(m) -> NDArray[np.float64]:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def hessenberg(m) -> NDArray[np.float64]:
    """Upper Hessenberg matrix similar to ``m`` (Householder reflections)."""
    h = _as_square(m).copy()
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1 :, k].copy()
        top = float(np.max(np.abs(x)))
        if top == 0.0:
            continue
        x /= top  # the reflector only depends on the direction; avoids underflow in the norm
        alpha = np.linalg.norm(x)
        v = x
        v[0] += math.copysign(alpha, x[0])
        v /= np.linalg.norm(v)
        h[k + 1 :, k:] -= 2.0 * np.outer(v, v @ h[k + 1 :, k:])
        h[:, k + 1 :] -= 2.0 * np.outer(h[:, k + 1 :] @ v, v)
        h[k + 2 :, k] = 0.0
    return h


def _hqr(a: list[list[float]], max_iter: int) -> tuple[list[float], list[float]]:
    """Francis double-shift QR on an upper Hessenberg matrix (modified in place).

    Works on nested lists: element access is far cheaper than on ndarrays.
    """
    n = len(a)
    wr = [0.0] * n
    wi = [0.0] * n
    anorm = sum(abs(a[i][j]) for i in range(n) for j in range(max(i - 1, 0), n))
    # absolute deflation floor: also splits off blocks so small that the
    # shift arithmetic inside them would underflow
    negligible = EPS * anorm
    nn = n - 1
    t = 0.0
    total = 0
    while nn >= 0:
        its = 0
        while True:
            l = nn
            while l >= 1:
                s = abs(a[l - 1][l - 1]) + abs(a[l][l])
                if s == 0.0:
                    s = anorm
                if abs(a[l][l - 1]) + s == s or abs(a[l][l - 1]) <= negligible:
                    a[l][l - 1] = 0.0
                    break
                l -= 1
            x = a[nn][nn]
            if l == nn:
                wr[nn] = x + t
                nn -= 1
                break
            y = a[nn - 1][nn - 1]
            w = a[nn][nn - 1] * a[nn - 1][nn]
            if l == nn - 1:
                p = 0.5 * (y - x)
                q = p * p + w
                z = math.sqrt(abs(q))
                x += t
                if q >= 0.0:
                    z = p + math.copysign(z, p)
                    wr[nn - 1] = wr[nn] = x + z
                    if z:
                        wr[nn] = x - w / z
                else:
                    wr[nn - 1] = wr[nn] = x + p
                    wi[nn - 1] = -z
                    wi[nn] = z
                nn -= 2
                break
            if total >= max_iter:
                raise ConvergenceFailure(f"QR iteration did not converge within {max_iter} sweeps")
            if its in (10, 20):
                # exceptional shift
                t += x
                for i in range(nn + 1):
                    a[i][i] -= x
                s = abs(a[nn][nn - 1]) + abs(a[nn - 1][nn - 2])
                y = x = 0.75 * s
                w = -0.4375 * s * s
            its += 1
            total += 1
            m = nn - 2
            while m >= l:
                z = a[m][m]
                r = x - z
                s = y - z
                p = (r * s - w) / a[m + 1][m] + a[m][m + 1]
                q = a[m + 1][m + 1] - z - r - s
                r = a[m + 2][m + 1]
                s = abs(p) + abs(q) + abs(r)
                p /= s
                q /= s
                r /= s
                if m == l:
                    break
                u = abs(a[m][m - 1]) * (abs(q) + abs(r))
                v = abs(p) * (abs(a[m - 1][m - 1]) + abs(z) + abs(a[m + 1][m + 1]))
                if u + v == v:
                    break
                m -= 1
            for i in range(m + 2, nn + 1):
                a[i][i - 2] = 0.0
                if i != m + 2:
                    a[i][i - 3] = 0.0
            for k in range(m, nn):
                if k != m:
                    p = a[k][k - 1]
                    q = a[k + 1][k - 1]
                    r = a[k + 2][k - 1] if k != nn - 1 else 0.0
                    x = abs(p) + abs(q) + abs(r)
                    if x != 0.0:
                        p /= x
                        q /= x
                        r /= x
                s = math.copysign(math.sqrt(p * p + q * q + r * r), p)
                if s == 0.0:
                    continue
                if k == m:
                    if l != m:
                        a[k][k - 1] = -a[k][k - 1]
                else:
                    a[k][k - 1] = -s * x
                p += s
                x = p / s
                y = q / s
                z = r / s
                q /= p
                r /= p
                last = k != nn - 1
                row_k, row_k1 = a[k], a[k + 1]
                row_k2 = a[k + 2] if last else None
                for j in range(k, nn + 1):
                    p = row_k[j] + q * row_k1[j]
                    if last:
                        p += r * row_k2[j]
                        row_k2[j] -= p * z
                    row_k1[j] -= p * y
                    row_k[j] -= p * x
                for i in range(l, min(nn, k + 3) + 1):
                    row = a[i]
                    p = x * row[k] + y * row[k + 1]
                    if last:
                        p += z * row[k + 2]
                        row[k + 2] -= p * r
                    row[k + 1] -= p * q
                    row[k] -= p
    return wr, wi


def eigenvalues_general(m) -> Spectrum:
    """All eigenvalues of a real square matrix (n <= 64)."""
    m = _as_square(m)
    n = m.shape[0]
    if n > MAX_DIMENSION:
        raise ValueError(f"matrix dimension {n} exceeds {MAX_DIMENSION}")
    if n == 0:
        return Spectrum(np.zeros(0, dtype=complex), -math.inf)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    scale = float(np.max(np.abs(m)))
    if scale == 0.0:
        return Spectrum(np.zeros(n, dtype=complex), 0.0)
    wr, wi = _hqr(hessenberg(m / scale).tolist(), max_iter=100 * n)
    eig = scale * (np.array(wr) + 1j * np.array(wi))
    return Spectrum(eig, float(eig.real.max()))


def is_stable(a, margin: float = DEFAULT_MARGIN) -> bool:
    """True iff every eigenvalue of ``a`` has real part below ``-margin``."""
    return eigenvalues_general(a).max_real_part < -margin


def _jacobi(m: NDArray[np.float64], tol: float = 0.0, max_sweeps: int = 50):
    a = m.copy()
    n = a.shape[0]
    v = np.eye(n)
    for _ in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.tril(a, -1) ** 2)))
        if off <= tol or off == 0.0:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                rot = np.array([[c, s], [-s, c]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ rot
    else:
        raise ConvergenceFailure("Jacobi sweeps did not converge")
    return np.diag(a).copy(), v


def eigh_jacobi(m) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Ascending eigenvalues and orthonormal eigenvectors (columns) of a symmetric matrix."""
    m = _as_square(m)
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    if not np.allclose(m, m.T, rtol=0.0, atol=1e-12 * scale):
        raise ValueError("matrix is not symmetric")
    sym = 0.5 * (m + m.T)
    w, v = _jacobi(sym, tol=1e-18 * float(np.linalg.norm(sym)))
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def eigenvalues_symmetric(m) -> NDArray[np.float64]:
    return eigh_jacobi(m)[0]


def lyapunov_operator(a) -> NDArray[np.float64]:
    """Matrix K with ``K @ V.ravel() == (A V + V Aᵀ).ravel()`` (row-major vec)."""
    a = _as_square(a)
    eye = np.eye(a.shape[0])
    return np.kron(a, eye) + np.kron(eye, a)


def lyapunov_residual(a, v, d) -> float:
    """Relative residual ``||A V + V Aᵀ + D||_F / ||D||_F``."""
    a, v, d = (np.asarray(x, dtype=float) for x in (a, v, d))
    r = a @ v + v @ a.T + d
    dn = np.linalg.norm(d)
    return float(np.linalg.norm(r) / dn) if dn > 0 else float(np.linalg.norm(r))


def solve_lyapunov(a, d, *, check_stability: bool = True) -> NDArray[np.float64]:
    """Steady-state covariance V solving ``A V + V Aᵀ = -D``.

    Raises :class:`UnstableSystem` unless every eigenvalue of ``a`` has a
    negative real part. Callers that already checked stability may skip the
    eigenvalue computation with ``check_stability=False``.
    """
    a = _as_square(a)
    d = _as_square(d)
    n = a.shape[0]
    if d.shape != a.shape:
        raise ValueError(f"shape mismatch: A {a.shape}, D {d.shape}")
    if check_stability:
        spec = eigenvalues_general(a)
        if not spec.max_real_part < 0.0:
            raise UnstableSystem(f"drift matrix is not stable (max Re = {spec.max_real_part:.3e})")
    try:
        vec = np.linalg.solve(lyapunov_operator(a), -d.ravel())
    except np.linalg.LinAlgError as exc:
        raise SingularSolve(f"vectorised Lyapunov system is singular: {exc}") from None
    v = vec.reshape(n, n)
    v = 0.5 * (v + v.T)
    res = lyapunov_residual(a, v, d)
    if not res < LYAPUNOV_RESIDUAL_TOL:
        raise SingularSolve(f"Lyapunov residual {res:.3e} exceeds {LYAPUNOV_RESIDUAL_TOL:.0e}")
    return v


def symplectic_form(n_modes: int) -> NDArray[np.float64]:
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def symplectic_eigenvalues(v) -> NDArray[np.float64]:
    """Symplectic eigenvalues of a covariance matrix, ascending, one per mode."""
    v = _as_square(v)
    n_modes = v.shape[0] // 2
    # iΩV is Hermitian-similar for positive V: its spectrum is ±ν_k on the imaginary axis of ΩV
    eig = eigenvalues_general(symplectic_form(n_modes) @ v).eigenvalues
    nu = np.sort(np.abs(eig))
    return nu[::2].copy()


def is_physical(v, tol: float = 1e-8) -> bool:
    v = _as_square(v)
    if not np.allclose(v, v.T, rtol=0.0, atol=1e-10):
        return False
    if np.any(np.diag(v) <= 0.0):
        return False
    return bool(np.all(symplectic_eigenvalues(v) >= 0.5 - tol))
