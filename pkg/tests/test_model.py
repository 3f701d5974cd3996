import math
from dataclasses import replace

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import system_params
from nqsync.errors import BogoliubovDivergence, NonPositiveGeometry, ParameterError
from nqsync.model import (
    CavityMode, SystemParams, build_drift_matrix, build_noise_matrix, coupling_from_geometry, derive,
    fig2_params, inverse_bogoliubov, spin_flop_field,
)

H_SP = spin_flop_field(0.0163, 1.0)


# hand transcription of the drift matrix; names resolved against a parameter dict
DRIFT_TABLE = [
    ["-ka", "wa", "0", "-gab", "0", "-gac"],
    ["-wa", "-ka", "-gab", "0", "-gac", "0"],
    ["0", "-gab", "-kb", "wb", "0", "gbc"],
    ["-gab", "0", "-wb", "-kb", "-gbc", "0"],
    ["0", "-gac", "0", "gbc", "-kc", "wc"],
    ["-gac", "0", "-gbc", "0", "-wc", "-kc"],
]


def _table_matrix(p: SystemParams) -> np.ndarray:
    env = {
        "ka": p.kappa_a, "kb": p.kappa_b, "kc": p.kappa_c,
        "wa": p.h_ex_b + p.h_an_a + p.h, "wb": p.h_ex_a + p.h_an_b - p.h,
        "gab": p.g_ab, "gac": p.g_ac, "gbc": p.g_bc,
        "wc": p.omega_c + (p.delta_f if p.cavity_mode is CavityMode.BRIGHT else -p.delta_f),
        "0": 0.0,
    }
    return np.array([[-env[e[1:]] if e.startswith("-") else env[e] for e in row] for row in DRIFT_TABLE])


def _langevin_drift(p: SystemParams) -> np.ndarray:
    """Quadrature drift derived numerically from the operator Langevin equations.

    Operators ordered (a, a†, b, b†, c, c†); X = (o + o†)/√2, Y = (o − o†)/(√2 i).
    """
    wa = p.h_ex_b + p.h_an_a + p.h
    wb = p.h_ex_a + p.h_an_b - p.h
    wc = p.cavity_frequency
    m = np.zeros((6, 6), dtype=complex)
    # d a/dt = -(i wa + ka) a - i gab b† - i gac c†
    m[0, 0] = -(1j * wa + p.kappa_a); m[0, 3] = -1j * p.g_ab; m[0, 5] = -1j * p.g_ac
    # d b/dt = -(i wb + kb) b - i gab a† - i gbc c
    m[2, 2] = -(1j * wb + p.kappa_b); m[2, 1] = -1j * p.g_ab; m[2, 4] = -1j * p.g_bc
    # d c/dt = -(i wc + kc) c - i gac a† - i gbc b
    m[4, 4] = -(1j * wc + p.kappa_c); m[4, 1] = -1j * p.g_ac; m[4, 2] = -1j * p.g_bc
    for k in (0, 2, 4):  # hermitian-conjugate rows
        m[k + 1] = np.conj(m[k][[1, 0, 3, 2, 5, 4]])
    t = np.zeros((6, 6), dtype=complex)
    for k in (0, 2, 4):
        t[k, k] = t[k, k + 1] = 1 / math.sqrt(2)
        t[k + 1, k] = 1 / (math.sqrt(2) * 1j)
        t[k + 1, k + 1] = -1 / (math.sqrt(2) * 1j)
    a = t @ m @ np.linalg.inv(t)
    assert np.allclose(a.imag, 0.0, atol=1e-14)
    return a.real


class TestDerive:
    @pytest.mark.parametrize("h_over_hsp", [0.0, 0.1, 0.15, 0.2, 0.4])
    def test_symmetric_bogoliubov_frequencies(self, h_over_hsp):
        p = SystemParams.symmetric(h_an=0.0163, g_ab=1.0, h=h_over_hsp * H_SP)
        dq = derive(p)
        assert dq.h_sp == pytest.approx(H_SP, rel=1e-15)
        assert dq.omega_alpha == pytest.approx(H_SP + p.h, abs=1e-14)
        assert dq.omega_beta == pytest.approx(H_SP - p.h, abs=1e-14)

    def test_no_magnon_coupling_is_identity(self):
        p = SystemParams(h=0.03, g_ab=0.0, g_ac=0.02, g_bc=0.005)
        dq = derive(p)
        assert dq.theta == 0.0
        assert dq.omega_alpha == dq.omega_a and dq.omega_beta == dq.omega_b
        assert dq.g_alpha_c == p.g_ac and dq.g_beta_c == p.g_bc

    @given(system_params())
    def test_defining_relations(self, p):
        dq = derive(p)
        assert math.tanh(2 * dq.theta) == pytest.approx(-2 * p.g_ab / (dq.omega_a + dq.omega_b), abs=1e-12)
        assert dq.omega_alpha - dq.omega_beta == pytest.approx(dq.omega_a - dq.omega_b, abs=1e-12)
        assert dq.omega_plus - dq.omega_minus == pytest.approx(2 * p.delta_f, abs=1e-15)

    @given(system_params())
    def test_frequencies_match_bosonic_dynamical_matrix(self, p):
        # eigenvalues of the (a, b†) dynamical matrix are ω_α and −ω_β
        dq = derive(p)
        dyn = np.array([[dq.omega_a, p.g_ab], [-p.g_ab, -dq.omega_b]])
        lam = np.sort(np.linalg.eigvals(dyn).real)
        assert lam[1] == pytest.approx(dq.omega_alpha, abs=1e-10)
        assert -lam[0] == pytest.approx(dq.omega_beta, abs=1e-10)

    @given(system_params())
    def test_inverse_transform_round_trip(self, p):
        dq = derive(p)
        wa, wb, gab, gac, gbc = inverse_bogoliubov(dq)
        np.testing.assert_allclose([wa, wb, gab, gac, gbc], [dq.omega_a, dq.omega_b, p.g_ab, p.g_ac, p.g_bc],
                                   rtol=0, atol=1e-10)

    @given(st.floats(0.0, 0.1), st.floats(0.0, 0.99))
    def test_equal_drives_give_equal_effective_couplings(self, g, frac):
        p = SystemParams.symmetric(g=g, g_ab=frac * 1.0163)
        dq = derive(p)
        assert dq.g_alpha_c == dq.g_beta_c
        assert dq.g_alpha_c == pytest.approx(g * math.exp(dq.theta), rel=1e-12, abs=1e-300)

    def test_effective_coupling_decreases_with_magnon_coupling(self):
        grid = np.linspace(0.0, 1.0, 200, endpoint=False)
        g = [derive(SystemParams.symmetric(g_ab=x, h=0.3)).g_alpha_c for x in grid]
        assert np.all(np.diff(g) < 0)

    def test_cavity_frequency_follows_mode(self):
        p = fig2_params(0.0)
        assert derive(p.with_mode("bright")).omega_cavity == pytest.approx(0.9 * H_SP)
        assert derive(p.with_mode("dark")).omega_cavity == pytest.approx(0.8 * H_SP)


class TestValidation:
    def test_divergent_bogoliubov_angle(self):
        with pytest.raises(BogoliubovDivergence):
            SystemParams.symmetric(h_an=0.0163, g_ab=1.02)
        with pytest.raises(BogoliubovDivergence):
            SystemParams(h_ex_a=1.0, h_ex_b=1.0, h_an_a=0.5, h_an_b=0.5, g_ab=1.5)

    @pytest.mark.parametrize("key", ["kappa_a", "kappa_b", "kappa_c"])
    def test_damping_must_be_positive(self, key):
        with pytest.raises(ParameterError) as err:
            replace(SystemParams(), **{key: 0.0})
        assert err.value.key == key

    @pytest.mark.parametrize("key", ["g_ab", "g_ac", "g_bc", "h_ex_a", "h_an_b"])
    def test_nonnegative_fields(self, key):
        with pytest.raises(ParameterError) as err:
            replace(SystemParams(), **{key: -0.1})
        assert err.value.key == key

    def test_bad_cavity_mode(self):
        with pytest.raises(ParameterError):
            SystemParams(cavity_mode="sideways")

    def test_non_finite(self):
        with pytest.raises(ParameterError):
            SystemParams(h=float("nan"))


class TestDriftMatrix:
    def test_decoupled_is_block_diagonal(self):
        p = SystemParams(g_ab=0.0, g_ac=0.0, g_bc=0.0, h=0.02, omega_c=0.3, delta_f=0.01)
        a = build_drift_matrix(p)
        wa, wb = 1.0163 + 0.02, 1.0163 - 0.02
        expected = np.zeros((6, 6))
        for k, (kap, w) in enumerate([(p.kappa_a, wa), (p.kappa_b, wb), (p.kappa_c, 0.31)]):
            expected[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = [[-kap, w], [-w, -kap]]
        np.testing.assert_allclose(a, expected, rtol=0, atol=1e-15)

    def test_fig2_bright_cavity_entry(self):
        a = build_drift_matrix(fig2_params(0.0, "bright"))
        assert a[4, 5] == pytest.approx(0.9 * H_SP, rel=1e-14)
        assert a[5, 4] == pytest.approx(-0.9 * H_SP, rel=1e-14)

    @given(system_params())
    def test_matches_transcribed_table(self, p):
        np.testing.assert_array_equal(build_drift_matrix(p), _table_matrix(p))

    @given(system_params())
    def test_matches_langevin_equations(self, p):
        np.testing.assert_allclose(build_drift_matrix(p), _langevin_drift(p), rtol=0, atol=1e-13)

    @given(system_params())
    def test_trace(self, p):
        assert np.trace(build_drift_matrix(p)) == pytest.approx(-2 * (p.kappa_a + p.kappa_b + p.kappa_c), abs=1e-12)

    @given(system_params())
    def test_bright_and_dark_differ_only_in_cavity_frequency(self, p):
        diff = build_drift_matrix(p.with_mode("bright")) - build_drift_matrix(p.with_mode("dark"))
        mask = np.zeros((6, 6), dtype=bool)
        mask[4, 5] = mask[5, 4] = True
        assert np.all(diff[~mask] == 0.0)
        assert diff[4, 5] == pytest.approx(2 * p.delta_f, abs=1e-15)
        assert diff[5, 4] == pytest.approx(-2 * p.delta_f, abs=1e-15)


class TestNoiseMatrix:
    def test_reference_damping(self):
        d = build_noise_matrix(fig2_params())
        np.testing.assert_array_equal(d, np.diag([0.001, 0.001, 0.001, 0.001, 0.003, 0.003]))

    def test_uniform_damping(self):
        d = build_noise_matrix(SystemParams(kappa_a=0.02, kappa_b=0.02, kappa_c=0.02))
        np.testing.assert_array_equal(d, 0.02 * np.eye(6))

    @given(system_params())
    def test_diagonal_positive_definite(self, p):
        d = build_noise_matrix(p)
        assert np.all(d == np.diag(np.diag(d)))
        assert np.all(np.diag(d) > 0)


class TestCouplingFromGeometry:
    def test_scaling(self):
        ref = coupling_from_geometry(2.5, 1e18, 1e-9, 2 * math.pi * 1e10)
        assert coupling_from_geometry(2.5, 4e18, 1e-9, 2 * math.pi * 1e10) == pytest.approx(2 * ref, rel=1e-14)
        assert coupling_from_geometry(2.5, 1e18, 4e-9, 2 * math.pi * 1e10) == pytest.approx(ref / 2, rel=1e-14)

    def test_high_precision_recomputation(self):
        with mpmath.workdps(50):
            mu0 = mpmath.mpf("1.25663706212e-6")
            exact = mpmath.sqrt(mu0 * mpmath.mpf(2 * math.pi * 1e10) * mpmath.mpf(2.5) * mpmath.mpf(1e18)
                                / (2 * mpmath.mpf(1e-9)))
        assert coupling_from_geometry(2.5, 1e18, 1e-9, 2 * math.pi * 1e10) == pytest.approx(float(exact), rel=1e-9)

    @pytest.mark.parametrize("bad", ["spin_magnitude", "n_spins", "volume", "omega"])
    def test_non_positive(self, bad):
        kwargs = {"spin_magnitude": 1.0, "n_spins": 1.0, "volume": 1.0, "omega": 1.0, bad: 0.0}
        with pytest.raises(NonPositiveGeometry) as err:
            coupling_from_geometry(**kwargs)
        assert err.value.key == bad
