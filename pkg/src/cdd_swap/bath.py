"""Ohmic thermal baths: spectral density, correlation kernels, noise channels.

The two memory kernels are

    T1(t) = int_0^inf J(w) exp(-i w t) / (exp(beta w) - 1) dw
    T2(t) = conj(T1(t)) + int_0^inf J(w) exp(+i w t) dw

with J(w) = eta * w * exp(-w / omega_c). Expanding the Bose factor as a
geometric series gives T1(t) = eta * sum_{k>=1} (1/omega_c + k beta + i t)^-2,
and the vacuum part of T2 is eta * omega_c^2 / (1 - i omega_c t)^2.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy import constants, integrate

from .operators import NumericalError, pauli

SERIES_RTOL = 1e-12
SERIES_MAX_TERMS = 1_000_000
# explicit terms summed before the Euler-Maclaurin tail takes over
SERIES_HEAD_TERMS = 64


@dataclass(frozen=True)
class OhmicSpectralDensity:
    eta: float
    omega_c: float

    def __post_init__(self):
        if self.eta < 0:
            raise ValueError(f"eta must be non-negative, got {self.eta}")
        if self.omega_c <= 0:
            raise ValueError(f"omega_c must be positive, got {self.omega_c}")

    def __call__(self, omega):
        return spectral_density(self, omega)


@dataclass(frozen=True)
class ThermalBath:
    """Bath temperature as theta = k_B T tau / hbar (dimensionless).

    ``theta = 0`` selects the vacuum kernels only. When built from kelvin the
    physical inputs are kept so configurations serialize back unchanged.
    """

    theta: float
    T_kelvin: float | None = None
    tau_seconds: float | None = None

    def __post_init__(self):
        if not self.theta >= 0:
            raise ValueError(f"theta must be non-negative, got {self.theta}")

    @classmethod
    def from_kelvin(cls, T_kelvin: float, tau_seconds: float = 1e-9) -> "ThermalBath":
        if T_kelvin < 0 or tau_seconds <= 0:
            raise ValueError("need T_kelvin >= 0 and tau_seconds > 0")
        theta = constants.k * T_kelvin * tau_seconds / constants.hbar
        return cls(theta, T_kelvin, tau_seconds)

    @property
    def beta(self) -> float:
        return np.inf if self.theta == 0 else 1.0 / self.theta


class ChannelKind(enum.Enum):
    AMPLITUDE_DAMPING = "amplitude_damping"
    DEPHASING = "dephasing"
    CUSTOM = "custom"


@dataclass(frozen=True)
class NoiseChannel:
    """One error class: the qubit couples through sigma . lambda to a bath."""

    lam: tuple
    kind: ChannelKind = ChannelKind.CUSTOM

    def __post_init__(self):
        lam = tuple(complex(x) for x in self.lam)
        if len(lam) != 3:
            raise ValueError("lambda must have three components")
        if all(x == 0 for x in lam):
            raise ValueError("lambda must be non-zero")
        object.__setattr__(self, "lam", lam)

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.lam, dtype=complex)

    def single_qubit_operator(self) -> np.ndarray:
        return sum(self.lam[m] * pauli(m + 1) for m in range(3))

    def scaled(self, g: float) -> "NoiseChannel":
        return NoiseChannel(tuple(g * x for x in self.lam), self.kind)


AMPLITUDE_DAMPING = NoiseChannel((0.5, 0.5j, 0.0), ChannelKind.AMPLITUDE_DAMPING)
DEPHASING = NoiseChannel((0.0, 0.0, 0.5), ChannelKind.DEPHASING)


def standard_channels() -> list[NoiseChannel]:
    return [AMPLITUDE_DAMPING, DEPHASING]


class CouplingTopology(enum.Enum):
    COMMON = "common"
    INDEPENDENT = "independent"


def gamma(top: CouplingTopology, s: int, s_prime: int) -> float:
    if s not in (1, 2) or s_prime not in (1, 2):
        raise ValueError(f"qubit indices must be 1 or 2, got ({s!r}, {s_prime!r})")
    if top is CouplingTopology.COMMON:
        return 1.0
    return 1.0 if s == s_prime else 0.0


def spectral_density(sd: OhmicSpectralDensity, omega):
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise ValueError("spectral density is defined for omega >= 0")
    out = sd.eta * omega * np.exp(-omega / sd.omega_c)
    return out if out.ndim else float(out)


def _bose_series(a, beta: float):
    """sum_{k>=1} (a + k beta)^-2 for Re(a) > 0, elementwise over ``a``.

    A head of explicit terms plus an Euler-Maclaurin tail. The tail's
    remainder after the third derivative term is bounded by
    |f^(5)(N)| / 30240 = beta^5 |a + N beta|^-7 / 42, checked against
    SERIES_RTOL; the head grows (up to SERIES_MAX_TERMS) until that holds.
    """
    a = np.asarray(a, dtype=complex)
    n = SERIES_HEAD_TERMS
    while True:
        k = np.arange(1, n, dtype=float).reshape((-1,) + (1,) * a.ndim)
        head = np.sum(1.0 / (a + k * beta) ** 2, axis=0)
        z = a + n * beta
        tail = (
            1.0 / (beta * z)  # integral from N to infinity
            + 0.5 / z**2  # f(N)/2
            + beta / (6 * z**3)  # -f'(N)/12
            - beta**3 / (30 * z**5)  # f'''(N)/720
        )
        total = head + tail
        remainder = beta**5 / (42 * np.abs(z) ** 7)
        if np.all(remainder <= SERIES_RTOL * np.abs(total)) or n >= SERIES_MAX_TERMS:
            return total
        n = min(4 * n, SERIES_MAX_TERMS)


def kernel_T1(sd: OhmicSpectralDensity, bath: ThermalBath, t):
    """Thermal kernel T1(t) for Gamma = 1; ``t`` may be an array."""
    t = np.asarray(t, dtype=float)
    if sd.eta == 0 or bath.theta == 0:
        out = np.zeros(t.shape, dtype=complex)
    else:
        out = sd.eta * _bose_series(1.0 / sd.omega_c + 1j * t, bath.beta)
    return out if out.ndim else complex(out)


def vacuum_kernel(sd: OhmicSpectralDensity, t):
    """int_0^inf J(w) exp(i w t) dw in closed form."""
    out = sd.eta * sd.omega_c**2 / (1 - 1j * sd.omega_c * np.asarray(t, dtype=float)) ** 2
    return out if out.ndim else complex(out)


def kernel_T2(sd: OhmicSpectralDensity, bath: ThermalBath, t):
    return np.conj(kernel_T1(sd, bath, t)) + vacuum_kernel(sd, t)


def kernel_oracle(
    sd: OhmicSpectralDensity, bath: ThermalBath, t: float, which: str
) -> complex:
    """Adaptive quadrature of the defining frequency integral on [0, 40 omega_c].

    Independent of the series used by ``kernel_T1``; for checking only.
    """
    if which not in ("T1", "T2"):
        raise ValueError(f"which must be 'T1' or 'T2', got {which!r}")
    if sd.eta == 0:
        return 0j
    beta = bath.beta

    def occupation(w):
        if not np.isfinite(beta):
            return 0.0
        # w / (exp(beta w) - 1) is finite at w = 0
        return 1.0 / beta if w == 0 else w / np.expm1(beta * w)

    if which == "T1":
        def weight(w):
            return sd.eta * np.exp(-w / sd.omega_c) * occupation(w)
        sign = -1.0
    else:
        def weight(w):
            return sd.eta * np.exp(-w / sd.omega_c) * (occupation(w) + w)
        sign = 1.0

    upper = 40 * sd.omega_c
    parts = []
    for trig in (np.cos, np.sin):
        val, err = integrate.quad(
            lambda w: weight(w) * trig(w * t), 0.0, upper,
            epsabs=1e-10, epsrel=1e-13, limit=2000,
        )
        if not np.isfinite(val) or err > 1e-8:
            raise NumericalError(f"kernel quadrature did not converge (error estimate {err:.2e})")
        parts.append(val)
    return complex(parts[0], sign * parts[1])


@dataclass(frozen=True)
class KernelTable:
    dt: float
    T1: np.ndarray = field(repr=False)
    T2: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.T1)


def build_kernel_table(
    sd: OhmicSpectralDensity, bath: ThermalBath, dt: float, n_steps: int
) -> KernelTable:
    if dt <= 0:
        raise ValueError("dt must be positive")
    if n_steps < 1:
        raise ValueError("n_steps must be at least 1")
    t = dt * np.arange(n_steps + 1)
    t1 = kernel_T1(sd, bath, t)
    t2 = np.conj(t1) + vacuum_kernel(sd, t)
    if not (np.all(np.isfinite(t1)) and np.all(np.isfinite(t2))):
        raise NumericalError("non-finite kernel sample")
    t1.setflags(write=False)
    t2.setflags(write=False)
    return KernelTable(dt=dt, T1=t1, T2=t2)
