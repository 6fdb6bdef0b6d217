import mpmath
import numpy as np
import pytest

from cdd_swap.bath import (
    AMPLITUDE_DAMPING,
    DEPHASING,
    CouplingTopology,
    NoiseChannel,
    OhmicSpectralDensity,
    ThermalBath,
    build_kernel_table,
    gamma,
    kernel_oracle,
    kernel_T1,
    kernel_T2,
    spectral_density,
    standard_channels,
    vacuum_kernel,
)
from cdd_swap.operators import pauli

from conftest import FIG1_BATH, FIG1_SD

GRID = np.linspace(0.0, 2.0, 20)


def trigamma_T1(sd, bath, t):
    """Third route: the Bose series summed in closed form, eta/beta^2 psi1(1 + a/beta)."""
    beta = bath.beta
    a = 1 / sd.omega_c + 1j * t
    return complex(sd.eta / beta**2 * mpmath.psi(1, 1 + a / beta))


class TestSpectralDensity:
    def test_zero(self):
        assert spectral_density(FIG1_SD, 0.0) == 0.0

    def test_at_cutoff(self):
        assert spectral_density(FIG1_SD, FIG1_SD.omega_c) == pytest.approx(
            FIG1_SD.eta * FIG1_SD.omega_c / np.e, rel=1e-15
        )

    def test_maximum_at_cutoff(self):
        w = np.linspace(0, 10 * FIG1_SD.omega_c, 100001)
        assert w[np.argmax(spectral_density(FIG1_SD, w))] == pytest.approx(FIG1_SD.omega_c, rel=1e-3)

    def test_negative_frequency(self):
        with pytest.raises(ValueError):
            spectral_density(FIG1_SD, -1.0)

    @pytest.mark.parametrize("eta,wc", [(-0.1, 1.0), (0.1, 0.0)])
    def test_invalid_parameters(self, eta, wc):
        with pytest.raises(ValueError):
            OhmicSpectralDensity(eta, wc)


class TestThermalBath:
    def test_reference_temperature(self):
        # k_B * 0.2 K * 1 ns / hbar
        assert FIG1_BATH.theta == pytest.approx(26.184, abs=1e-3)
        assert FIG1_BATH.beta == pytest.approx(0.03819, abs=1e-5)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            ThermalBath(-1.0)


class TestKernelT1:
    def test_zero_time_real_positive(self):
        v = kernel_T1(FIG1_SD, FIG1_BATH, 0.0)
        assert v.real > 0 and v.imag == 0

    @pytest.mark.parametrize("t", [0.1, 0.7, 1.9])
    def test_conjugate_symmetry(self, t):
        assert abs(kernel_T1(FIG1_SD, FIG1_BATH, -t) - np.conj(kernel_T1(FIG1_SD, FIG1_BATH, t))) < 1e-10
        assert abs(kernel_T2(FIG1_SD, FIG1_BATH, -t) - np.conj(kernel_T2(FIG1_SD, FIG1_BATH, t))) < 1e-10

    @pytest.mark.parametrize("t", [0.0, 0.1, 1.0])
    def test_matches_oracle(self, t):
        o = kernel_oracle(FIG1_SD, FIG1_BATH, t, "T1")
        assert abs(kernel_T1(FIG1_SD, FIG1_BATH, t) - o) / abs(o) < 1e-8

    def test_series_vs_quadrature_grid(self):
        for t in GRID:
            o = kernel_oracle(FIG1_SD, FIG1_BATH, t, "T1")
            assert abs(kernel_T1(FIG1_SD, FIG1_BATH, t) - o) / abs(o) < 1e-8

    @pytest.mark.parametrize("theta", [0.5, 5.0, 26.0, 300.0])
    @pytest.mark.parametrize("t", [0.0, 0.4, 3.0])
    def test_matches_trigamma(self, theta, t):
        bath = ThermalBath(theta)
        ref = trigamma_T1(FIG1_SD, bath, t)
        assert abs(kernel_T1(FIG1_SD, bath, t) - ref) / abs(ref) < 1e-11

    def test_array_input(self):
        t = np.array([0.0, 0.5, 1.0])
        v = kernel_T1(FIG1_SD, FIG1_BATH, t)
        assert v.shape == (3,)
        assert v[1] == pytest.approx(kernel_T1(FIG1_SD, FIG1_BATH, 0.5), rel=1e-14)

    def test_high_temperature_slope(self):
        # classical limit: T1(0) -> eta * omega_c * theta
        for theta in (100.0, 200.0):
            v = kernel_T1(FIG1_SD, ThermalBath(theta), 0.0).real
            slope = FIG1_SD.eta * FIG1_SD.omega_c * theta
            assert abs(v / slope - 1) < 0.05

    def test_eta_linearity(self):
        sd2 = OhmicSpectralDensity(3 * FIG1_SD.eta, FIG1_SD.omega_c)
        for t in (0.0, 0.3):
            assert kernel_T1(sd2, FIG1_BATH, t) == pytest.approx(3 * kernel_T1(FIG1_SD, FIG1_BATH, t), rel=1e-14)
            assert kernel_T2(sd2, FIG1_BATH, t) == pytest.approx(3 * kernel_T2(FIG1_SD, FIG1_BATH, t), rel=1e-14)

    def test_zero_temperature(self):
        cold = ThermalBath(0.0)
        assert kernel_T1(FIG1_SD, cold, 0.3) == 0
        assert kernel_T2(FIG1_SD, cold, 0.3) == vacuum_kernel(FIG1_SD, 0.3)


class TestKernelT2:
    def test_vacuum_part_at_zero(self):
        v = kernel_T2(FIG1_SD, FIG1_BATH, 0.0) - np.conj(kernel_T1(FIG1_SD, FIG1_BATH, 0.0))
        assert v == pytest.approx(np.pi**2 / 5, rel=1e-14)
        assert abs(np.pi**2 / 5 - 1.9739) < 1e-4

    def test_vacuum_part_decays(self):
        assert abs(vacuum_kernel(FIG1_SD, 1e4)) < 1e-7

    def test_matches_oracle_grid(self):
        for t in GRID:
            o = kernel_oracle(FIG1_SD, FIG1_BATH, t, "T2")
            assert abs(kernel_T2(FIG1_SD, FIG1_BATH, t) - o) / abs(o) < 1e-8


class TestOracle:
    def test_vacuum_closed_form(self):
        o = kernel_oracle(FIG1_SD, ThermalBath(0.0), 0.3, "T2")
        assert abs(o - vacuum_kernel(FIG1_SD, 0.3)) < 1e-9

    def test_zero_coupling(self):
        sd = OhmicSpectralDensity(0.0, 2 * np.pi)
        assert kernel_oracle(sd, FIG1_BATH, 0.5, "T1") == 0
        assert kernel_oracle(sd, FIG1_BATH, 0.5, "T2") == 0

    def test_bad_kind(self):
        with pytest.raises(ValueError):
            kernel_oracle(FIG1_SD, FIG1_BATH, 0.0, "T3")


class TestGamma:
    def test_common(self):
        assert gamma(CouplingTopology.COMMON, 1, 2) == 1

    def test_independent_off_diagonal(self):
        assert gamma(CouplingTopology.INDEPENDENT, 1, 2) == 0

    def test_independent_diagonal(self):
        assert gamma(CouplingTopology.INDEPENDENT, 2, 2) == 1

    def test_bad_index(self):
        with pytest.raises(ValueError):
            gamma(CouplingTopology.COMMON, 0, 1)


class TestChannels:
    def test_amplitude_damping_raises(self):
        op = AMPLITUDE_DAMPING.single_qubit_operator()
        np.testing.assert_allclose(op, (pauli(1) + 1j * pauli(2)) / 2)
        np.testing.assert_allclose(op @ [0, 1], [1, 0])  # |down> -> |up>

    def test_dephasing(self):
        np.testing.assert_allclose(DEPHASING.single_qubit_operator(), pauli(3) / 2)

    def test_distinct_non_parallel(self):
        a, d = (c.vector for c in standard_channels())
        assert np.linalg.matrix_rank(np.vstack([a, d])) == 2

    def test_zero_lambda_rejected(self):
        with pytest.raises(ValueError):
            NoiseChannel((0, 0, 0))


class TestKernelTable:
    def test_samples(self):
        tab = build_kernel_table(FIG1_SD, FIG1_BATH, 0.01, 300)
        assert len(tab) == 301
        assert tab.T1[0] == pytest.approx(kernel_T1(FIG1_SD, FIG1_BATH, 0.0), rel=1e-14)
        assert tab.T2[0] == pytest.approx(kernel_T2(FIG1_SD, FIG1_BATH, 0.0), rel=1e-14)
        assert tab.T1[123] == pytest.approx(kernel_T1(FIG1_SD, FIG1_BATH, 1.23), rel=1e-14)

    def test_vacuum_difference_decays_monotonically(self):
        tab = build_kernel_table(FIG1_SD, FIG1_BATH, 0.01, 300)
        t = 0.01 * np.arange(301)
        diff = np.abs(tab.T2 - np.conj(tab.T1))[t > 1 / FIG1_SD.omega_c]
        assert np.all(np.diff(diff) < 0)

    def test_read_only(self):
        tab = build_kernel_table(FIG1_SD, FIG1_BATH, 0.01, 10)
        with pytest.raises(ValueError):
            tab.T1[0] = 0

    @pytest.mark.parametrize("dt,n", [(0.0, 10), (0.1, 0)])
    def test_invalid(self, dt, n):
        with pytest.raises(ValueError):
            build_kernel_table(FIG1_SD, FIG1_BATH, dt, n)
