"""Three-mode antiferromagnet/cavity model.

Every frequency and rate is expressed in units of the exchange field H_ex
(so ``h_ex_a = h_ex_b = 1`` by default). Quadratures
are always ordered ``(X_a, Y_a, X_b, Y_b, X_c, Y_c)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, fields, replace

import numpy as np
from numpy.typing import NDArray
from scipy.constants import mu_0

from nqsync.errors import BogoliubovDivergence, NonPositiveGeometry, ParameterError

QUADRATURES = ("X_a", "Y_a", "X_b", "Y_b", "X_c", "Y_c")


class CavityMode(str, enum.Enum):
    """Reentrant-cavity resonance. Bright sits at ω_c + Δ_F, dark at ω_c − Δ_F."""

    BRIGHT = "bright"
    DARK = "dark"

    @classmethod
    def parse(cls, value: "CavityMode | str") -> "CavityMode":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ParameterError(
                f"cavity_mode must be 'bright' or 'dark', got {value!r}", key="cavity_mode"
            ) from None

    @property
    def sign(self) -> int:
        return 1 if self is CavityMode.BRIGHT else -1


@dataclass(frozen=True)
class SystemParams:
    """Physical inputs of the model, all in units of H_ex."""

    h_ex_a: float = 1.0
    h_ex_b: float = 1.0
    h_an_a: float = 0.0163
    h_an_b: float = 0.0163
    h: float = 0.0
    g_ab: float = 1.0
    g_ac: float = 0.01
    g_bc: float = 0.01
    kappa_a: float = 0.001
    kappa_b: float = 0.001
    kappa_c: float = 0.003
    omega_c: float = 0.0
    delta_f: float = 0.0
    cavity_mode: CavityMode = CavityMode.BRIGHT

    def __post_init__(self):
        object.__setattr__(self, "cavity_mode", CavityMode.parse(self.cavity_mode))
        for f in fields(self):
            if f.name == "cavity_mode":
                continue
            value = getattr(self, f.name)
            if not isinstance(value, (int, float, np.floating, np.integer)) or not math.isfinite(value):
                raise ParameterError(f"{f.name} must be a finite number, got {value!r}", key=f.name)
            object.__setattr__(self, f.name, float(value))
        for name in ("kappa_a", "kappa_b", "kappa_c"):
            if getattr(self, name) <= 0.0:
                raise ParameterError(f"{name} must be > 0, got {getattr(self, name)!r}", key=name)
        for name in ("g_ab", "g_ac", "g_bc", "h_ex_a", "h_ex_b", "h_an_a", "h_an_b"):
            if getattr(self, name) < 0.0:
                raise ParameterError(f"{name} must be >= 0, got {getattr(self, name)!r}", key=name)
        half_sum = 0.5 * (self.h_ex_a + self.h_ex_b + self.h_an_a + self.h_an_b)
        if self.g_ab >= half_sum:
            raise BogoliubovDivergence(
                f"g_ab={self.g_ab!r} must stay below (omega_a + omega_b)/2 = {half_sum!r}",
                key="g_ab",
            )

    @classmethod
    def symmetric(
        cls,
        *,
        h_ex: float = 1.0,
        h_an: float = 0.0163,
        h: float = 0.0,
        g_ab: float = 1.0,
        g: float = 0.01,
        kappa: float = 0.001,
        kappa_c: float = 0.003,
        omega_c: float = 0.0,
        delta_f: float = 0.0,
        cavity_mode: CavityMode | str = CavityMode.BRIGHT,
    ) -> "SystemParams":
        """Sublattice-symmetric parameters with ``g_ac = g_bc = g``."""
        return cls(
            h_ex_a=h_ex, h_ex_b=h_ex, h_an_a=h_an, h_an_b=h_an, h=h,
            g_ab=g_ab, g_ac=g, g_bc=g, kappa_a=kappa, kappa_b=kappa, kappa_c=kappa_c,
            omega_c=omega_c, delta_f=delta_f, cavity_mode=cavity_mode,
        )

    @property
    def h_sp(self) -> float:
        return spin_flop_field(0.5 * (self.h_an_a + self.h_an_b), 0.5 * (self.h_ex_a + self.h_ex_b))

    @property
    def cavity_frequency(self) -> float:
        return self.omega_c + self.cavity_mode.sign * self.delta_f

    def with_mode(self, mode: CavityMode | str) -> "SystemParams":
        return replace(self, cavity_mode=CavityMode.parse(mode))


PARAM_NAMES = tuple(f.name for f in fields(SystemParams) if f.name != "cavity_mode")


def spin_flop_field(h_an: float, h_ex: float) -> float:
    return math.sqrt(h_an * (h_an + 2.0 * h_ex))


def fig2_params(h_over_hsp: float = 0.0, cavity_mode: CavityMode | str = CavityMode.BRIGHT) -> SystemParams:
    """The reference parameter set of the fig2/fig3 presets, with H given in units of H_sp."""
    h_an = 0.0163
    h_sp = spin_flop_field(h_an, 1.0)
    return SystemParams.symmetric(
        h_ex=1.0, h_an=h_an, h=h_over_hsp * h_sp, g_ab=1.0, g=0.01,
        kappa=0.001, kappa_c=0.003, omega_c=0.85 * h_sp, delta_f=0.05 * h_sp,
        cavity_mode=cavity_mode,
    )


@dataclass(frozen=True)
class DerivedQuantities:
    omega_a: float
    omega_b: float
    omega_plus: float
    omega_minus: float
    h_sp: float
    theta: float
    omega_alpha: float
    omega_beta: float
    g_alpha_c: float
    g_beta_c: float
    cavity_mode: CavityMode = CavityMode.BRIGHT

    @property
    def omega_cavity(self) -> float:
        return self.omega_plus if self.cavity_mode is CavityMode.BRIGHT else self.omega_minus


def magnon_frequencies(params: SystemParams) -> tuple[float, float]:
    omega_a = params.h_ex_b + params.h_an_a + params.h
    omega_b = params.h_ex_a + params.h_an_b - params.h
    return omega_a, omega_b


def derive(params: SystemParams) -> DerivedQuantities:
    """Frequencies, spin-flop field and Bogoliubov-frame couplings.

    The Bogoliubov angle obeys ``tanh(2θ) = -2 g_ab / (ω_a + ω_b)``; it is
    negative for positive ``g_ab``.
    """
    omega_a, omega_b = magnon_frequencies(params)
    mean = 0.5 * (omega_a + omega_b)
    half_split = 0.5 * (omega_a - omega_b)
    ratio = params.g_ab / mean
    if ratio >= 1.0:
        raise BogoliubovDivergence(
            f"g_ab={params.g_ab!r} >= (omega_a + omega_b)/2 = {mean!r}", key="g_ab"
        )
    theta = 0.5 * math.atanh(-ratio)
    gap = math.sqrt((mean - params.g_ab) * (mean + params.g_ab))
    ch, sh = math.cosh(theta), math.sinh(theta)
    return DerivedQuantities(
        omega_a=omega_a,
        omega_b=omega_b,
        omega_plus=params.omega_c + params.delta_f,
        omega_minus=params.omega_c - params.delta_f,
        h_sp=params.h_sp,
        theta=theta,
        omega_alpha=gap + half_split,
        omega_beta=gap - half_split,
        g_alpha_c=params.g_ac * ch + params.g_bc * sh,
        g_beta_c=params.g_ac * sh + params.g_bc * ch,
        cavity_mode=params.cavity_mode,
    )


def inverse_bogoliubov(dq: DerivedQuantities) -> tuple[float, float, float, float, float]:
    """Undo :func:`derive` on the magnon sector.

    Returns ``(omega_a, omega_b, g_ab, g_ac, g_bc)``.
    """
    gap = 0.5 * (dq.omega_alpha + dq.omega_beta)
    half_split = 0.5 * (dq.omega_alpha - dq.omega_beta)
    mean = gap * math.cosh(2.0 * dq.theta)
    g_ab = -gap * math.sinh(2.0 * dq.theta)
    ch, sh = math.cosh(dq.theta), math.sinh(dq.theta)
    # [[ch, sh], [sh, ch]] has unit determinant
    g_ac = ch * dq.g_alpha_c - sh * dq.g_beta_c
    g_bc = -sh * dq.g_alpha_c + ch * dq.g_beta_c
    return mean + half_split, mean - half_split, g_ab, g_ac, g_bc


def build_drift_matrix(params: SystemParams) -> NDArray[np.float64]:
    """6×6 drift matrix of the linearised quadrature dynamics."""
    omega_a, omega_b = magnon_frequencies(params)
    w = params.cavity_frequency
    ka, kb, kc = params.kappa_a, params.kappa_b, params.kappa_c
    gab, gac, gbc = params.g_ab, params.g_ac, params.g_bc
    return np.array(
        [
            [-ka, omega_a, 0.0, -gab, 0.0, -gac],
            [-omega_a, -ka, -gab, 0.0, -gac, 0.0],
            [0.0, -gab, -kb, omega_b, 0.0, gbc],
            [-gab, 0.0, -omega_b, -kb, -gbc, 0.0],
            [0.0, -gac, 0.0, gbc, -kc, w],
            [-gac, 0.0, -gbc, 0.0, -w, -kc],
        ]
    )


def build_noise_matrix(params: SystemParams) -> NDArray[np.float64]:
    """Vacuum input-noise diffusion matrix ``diag(κ_a, κ_a, κ_b, κ_b, κ_c, κ_c)``."""
    return np.diag([params.kappa_a, params.kappa_a, params.kappa_b, params.kappa_b, params.kappa_c, params.kappa_c])


def coupling_from_geometry(spin_magnitude: float, n_spins: float, volume: float, omega: float) -> float:
    """Magnon-photon coupling ``sqrt(mu_0 * omega * S * N / (2 V))`` in SI units."""
    args = {"spin_magnitude": spin_magnitude, "n_spins": n_spins, "volume": volume, "omega": omega}
    for name, value in args.items():
        if not value > 0:
            raise NonPositiveGeometry(f"{name} must be > 0, got {value!r}", key=name)
    return math.sqrt(mu_0 * omega * spin_magnitude * n_spins / (2.0 * volume))
