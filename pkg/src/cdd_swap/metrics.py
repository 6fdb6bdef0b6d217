"""Fidelity, Wootters concurrence, purity and the lab-frame transform."""

from __future__ import annotations

import numpy as np

from .control import ControlField, ExchangeCoupling, u0, uc
from .operators import NumericalError, dagger, eig4, pauli

_YY = np.kron(pauli(2), pauli(2))

# eigenvalues of the spin-flipped matrix below this (relative) are rounding noise;
# left in, their square roots would add ~1e-8 to the concurrence
_DUST = 64 * np.finfo(float).eps

# computational basis states in |uu>, |ud>, |du>, |dd> order
UP_UP, UP_DOWN, DOWN_UP, DOWN_DOWN = np.eye(4, dtype=complex)


def _matrix(rho) -> np.ndarray:
    return np.asarray(getattr(rho, "matrix", rho), dtype=complex)


def pure_state(amplitudes) -> np.ndarray:
    psi = np.asarray(amplitudes, dtype=complex)
    if psi.shape != (4,):
        raise ValueError(f"two-qubit state needs 4 amplitudes, got shape {psi.shape}")
    if abs(np.linalg.norm(psi) - 1.0) > 1e-12:
        raise ValueError("pure state must have unit norm")
    return psi


def fidelity(rho, target) -> float:
    """<target|rho|target>, clamped to [0, 1]."""
    psi = np.asarray(target, dtype=complex)
    f = np.vdot(psi, _matrix(rho) @ psi).real
    return float(min(1.0, max(0.0, f)))


def purity(rho) -> float:
    m = _matrix(rho)
    return float(np.trace(m @ m).real)


def concurrence(rho) -> float:
    """Wootters concurrence from the spectrum of rho (Y x Y) rho* (Y x Y)."""
    m = _matrix(rho)
    flipped = m @ _YY @ m.conj() @ _YY
    ev = eig4(flipped)
    if abs(ev.sum() - np.trace(flipped)) > 1e-8 * max(1.0, np.linalg.norm(flipped)):
        raise NumericalError("eigenvalues of the spin-flipped matrix do not reproduce its trace")
    mu = ev.real.copy()
    mu[mu < _DUST * max(1.0, np.linalg.norm(flipped))] = 0.0
    lam = np.sort(np.sqrt(mu))[::-1]
    return float(min(1.0, max(0.0, lam[0] - lam[1] - lam[2] - lam[3])))


def pure_state_concurrence(psi) -> float:
    psi = np.asarray(psi, dtype=complex)
    return float(abs(np.vdot(psi, _YY @ psi.conj())))


def to_lab_frame(rho_I, ex: ExchangeCoupling, cf: ControlField, t: float) -> np.ndarray:
    u = uc(cf, t) @ u0(ex, t)
    return u @ _matrix(rho_I) @ dagger(u)


def trajectory_metrics(states, ex: ExchangeCoupling, times, initial) -> dict:
    """Per-time fidelity, lab-frame concurrence and purity.

    In the interaction picture the ideal gate leaves the state at its initial
    value, so fidelity is Tr(rho rho_0) (= <psi0|rho|psi0> for a pure start).
    The control unitary is local and drops out of the concurrence, so only
    the exchange propagator is applied.
    """
    rho0 = _matrix(initial)
    fid = np.empty(len(times))
    conc = np.empty(len(times))
    pur = np.empty(len(times))
    for i, (t, rho) in enumerate(zip(times, states)):
        u = u0(ex, t)
        fid[i] = min(1.0, max(0.0, np.trace(rho @ rho0).real))
        conc[i] = concurrence(u @ rho @ dagger(u))
        pur[i] = purity(rho)
    return {"fidelity": fid, "concurrence": conc, "purity": pur}
