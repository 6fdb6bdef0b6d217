"""Exchange Hamiltonian, decoupling control field and the frames they define.

Times are in units of the gate time tau and frequencies in 1/tau.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .operators import I4, SWAP, dagger, embed, exp_su2, pauli, sigma

_XHAT = np.array([1.0, 0.0, 0.0])
_ZHAT = np.array([0.0, 0.0, 1.0])

# Levi-Civita over axes 1..3 stored 0-based
_EPS = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    _EPS[_i, _j, _k] = 1.0
    _EPS[_i, _k, _j] = -1.0

P_SINGLET = (I4 - SWAP) / 2
P_TRIPLET = (I4 + SWAP) / 2


@dataclass(frozen=True)
class ExchangeCoupling:
    J: float

    def __post_init__(self):
        if not np.isfinite(self.J):
            raise ValueError("exchange constant J must be finite")


@dataclass(frozen=True)
class ControlField:
    """Static x-field of strength Nx plus a yz-field of amplitude Nz.

    Both frequencies must complete an integer number of windings over the
    cycle time ``t_c``. ``Nx = Nz = 0`` encodes a switched-off field.
    ``validate=False`` skips the winding checks, for probing arbitrary
    field strengths.
    """

    Nx: float
    Nz: float
    t_c: float = 1.0
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        if self.t_c <= 0:
            raise ValueError(f"cycle time t_c must be positive, got {self.t_c}")
        if not self.validate or (self.Nx == 0 and self.Nz == 0):
            return
        nx, nz = self.windings
        for name, val in (("Nx", self.Nx), ("Nz", self.Nz)):
            n = val * self.t_c / (2 * np.pi)
            if abs(n - round(n)) > 1e-9 or round(n) == 0:
                raise ValueError(
                    f"{name}*t_c/(2 pi) must be a non-zero integer, got {n:.12g}"
                )
        if nx == nz:
            raise ValueError(f"n_x and n_z must differ, both are {nx}")

    @classmethod
    def from_integers(cls, n_x: int, n_z: int, t_c: float = 1.0) -> "ControlField":
        omega = 2 * np.pi / t_c
        return cls(n_x * omega, n_z * omega, t_c)

    @classmethod
    def disabled(cls, t_c: float = 1.0) -> "ControlField":
        return cls(0.0, 0.0, t_c)

    @property
    def enabled(self) -> bool:
        return not (self.Nx == 0 and self.Nz == 0)

    @property
    def omega(self) -> float:
        return 2 * np.pi / self.t_c

    @property
    def windings(self) -> tuple[int, int]:
        return (
            int(round(self.Nx * self.t_c / (2 * np.pi))),
            int(round(self.Nz * self.t_c / (2 * np.pi))),
        )


@dataclass(frozen=True)
class HeisenbergCoefficients:
    a: float
    b: float
    c: float


def h0(ex: ExchangeCoupling) -> np.ndarray:
    return ex.J * sum(sigma(m, 1) @ sigma(m, 2) for m in (1, 2, 3))


def u0(ex: ExchangeCoupling, t: float) -> np.ndarray:
    """exp(-i H0 t) from the singlet/triplet spectral decomposition."""
    return np.exp(-1j * ex.J * t) * P_TRIPLET + np.exp(3j * ex.J * t) * P_SINGLET


def single_qubit_control(cf: ControlField, t: float) -> np.ndarray:
    return exp_su2(_XHAT, cf.Nx * t) @ exp_su2(_ZHAT, cf.Nz * t)


def uc(cf: ControlField, t: float) -> np.ndarray:
    u = single_qubit_control(cf, t)
    return embed(u, 2) @ embed(u, 1)


def rotation_matrix(cf: ControlField, t: float) -> np.ndarray:
    """R[m, n] with U^dag sigma_m U = sum_n R[m, n] sigma_n (0-based axes)."""
    u = single_qubit_control(cf, t)
    ud = dagger(u)
    r = np.empty((3, 3))
    for m in range(3):
        conj = ud @ pauli(m + 1) @ u
        for n in range(3):
            r[m, n] = 0.5 * np.trace(pauli(n + 1) @ conj).real
    return r


def field_vector(cf: ControlField, t: float) -> np.ndarray:
    """Omega(t) of the field whose propagator is ``uc``.

    The yz-component rotates at 2*Nx: with Pauli matrices the static field
    Nx*sigma_x precesses spin components at twice its strength.
    """
    phase = 2 * cf.Nx * t
    return cf.Nx * _XHAT + cf.Nz * np.array([0.0, -np.sin(phase), np.cos(phase)])


def control_hamiltonian(cf: ControlField, t: float) -> np.ndarray:
    om = field_vector(cf, t)
    return sum(om[m] * (sigma(m + 1, 1) + sigma(m + 1, 2)) for m in range(3))


def heisenberg_coeffs(ex: ExchangeCoupling, t: float) -> HeisenbergCoefficients:
    phase = 4 * ex.J * t
    a = (1 + np.cos(phase)) / 2
    return HeisenbergCoefficients(a=a, b=1 - a, c=np.sin(phase) / 2)


def heisenberg_sigma(ex: ExchangeCoupling, s: int, n: int, t: float) -> np.ndarray:
    """U0^dag sigma_n^(s) U0 assembled from the closed-form a, b, c."""
    if s not in (1, 2):
        raise ValueError(f"qubit index must be 1 or 2, got {s!r}")
    if n not in (1, 2, 3):
        raise ValueError(f"axis must be 1, 2 or 3, got {n!r}")
    k = heisenberg_coeffs(ex, t)
    other = 3 - s
    cross = np.zeros((4, 4), dtype=complex)
    for j in range(3):
        for l in range(3):
            e = _EPS[n - 1, j, l]
            if e:
                cross += e * sigma(j + 1, s) @ sigma(l + 1, other)
    return k.a * sigma(n, s) + k.b * sigma(n, other) - k.c * cross


def rotation_matrices(cf: ControlField, t) -> np.ndarray:
    """``rotation_matrix`` over an array of times, shape (K, 3, 3)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    a = cf.Nx * t
    b = cf.Nz * t
    ca, sa = np.cos(a), np.sin(a)
    eb = np.exp(-1j * b)
    # exp(-i a sx) exp(-i b sz) written out entrywise
    u = np.empty(t.shape + (2, 2), dtype=complex)
    u[:, 0, 0] = ca * eb
    u[:, 0, 1] = -1j * sa * eb.conj()
    u[:, 1, 0] = -1j * sa * eb
    u[:, 1, 1] = ca * eb.conj()
    paulis = np.stack([pauli(n) for n in (1, 2, 3)])
    conj = np.einsum("kji,mjl,kln->kmin", u.conj(), paulis, u)
    return 0.5 * np.einsum("nij,kmji->kmn", paulis, conj).real


def decoupling_residual(cf: ControlField, nodes: int = 4001) -> float:
    """Frobenius norm of the cycle integral of R(t), by composite Simpson.

    Zero for a field satisfying the first-order decoupling condition.
    """
    if not cf.enabled:
        raise ValueError("decoupling check needs an active control field")
    if nodes < 3 or nodes % 2 == 0:
        raise ValueError(f"Simpson's rule needs an odd node count >= 3, got {nodes}")
    t = np.linspace(0.0, cf.t_c, nodes)
    integral = integrate.simpson(rotation_matrices(cf, t), x=t, axis=0)
    return float(np.linalg.norm(integral))
