"""Small dense complex matrices for one and two qubits.

Two-qubit basis order is |uu>, |ud>, |du>, |dd> with "up" the first basis
vector of each qubit, so qubit 1 is the left tensor factor.
"""

from __future__ import annotations

import numpy as np

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)

_PAULI = {
    1: np.array([[0, 1], [1, 0]], dtype=complex),
    2: np.array([[0, -1j], [1j, 0]], dtype=complex),
    3: np.array([[1, 0], [0, -1]], dtype=complex),
}

SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)

EIG4_MAX_SWEEPS = 200


class NumericalError(RuntimeError):
    """Raised when an iterative routine fails to reach its tolerance."""


def pauli(axis: int) -> np.ndarray:
    """Pauli matrix for axis 1 (x), 2 (y) or 3 (z)."""
    try:
        return _PAULI[axis].copy()
    except (KeyError, TypeError):
        raise ValueError(f"Pauli axis must be 1, 2 or 3, got {axis!r}") from None


def embed(op: np.ndarray, qubit: int) -> np.ndarray:
    """Lift a single-qubit operator onto qubit 1 or 2 of the pair."""
    op = np.asarray(op, dtype=complex)
    if op.shape != (2, 2):
        raise ValueError(f"expected a 2x2 operator, got shape {op.shape}")
    if qubit == 1:
        return np.kron(op, I2)
    if qubit == 2:
        return np.kron(I2, op)
    raise ValueError(f"qubit index must be 1 or 2, got {qubit!r}")


def sigma(axis: int, qubit: int) -> np.ndarray:
    return embed(pauli(axis), qubit)


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def is_hermitian(m: np.ndarray, tol: float = 1e-10) -> bool:
    return bool(np.linalg.norm(m - dagger(m)) <= tol)


def is_unitary(m: np.ndarray, tol: float = 1e-10) -> bool:
    m = np.asarray(m)
    return bool(np.linalg.norm(dagger(m) @ m - np.eye(m.shape[0])) <= tol)


def exp_su2(n, theta: float) -> np.ndarray:
    """exp(-i theta n.sigma) for a unit vector n, in closed form."""
    n = np.asarray(n, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1.0) > 1e-12:
        raise ValueError(f"rotation axis must be a real unit 3-vector, got {n!r}")
    n_sigma = n[0] * _PAULI[1] + n[1] * _PAULI[2] + n[2] * _PAULI[3]
    return np.cos(theta) * I2 - 1j * np.sin(theta) * n_sigma


def _pow2_normalize(x: np.ndarray) -> tuple[np.ndarray, int]:
    """Scale by an exact power of two so the largest entry lies in [0.5, 1)."""
    e = int(np.frexp(np.abs(x).max())[1])
    return np.ldexp(x.real, -e) + 1j * np.ldexp(x.imag, -e), e


def _householder_hessenberg(a: np.ndarray) -> np.ndarray:
    h = a.copy()
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1 :, k]
        if not x.any():
            continue
        # rescale first: squaring tiny entries underflows and the reflector stops being unitary
        v, _ = _pow2_normalize(x)
        alpha = np.linalg.norm(v)
        phase = v[0] / abs(v[0]) if v[0] != 0 else 1.0
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        h[k + 1 :, :] -= 2.0 * np.outer(v, v.conj() @ h[k + 1 :, :])
        h[:, k + 1 :] -= 2.0 * np.outer(h[:, k + 1 :] @ v, v.conj())
    return h


def _wilkinson_shift(h: np.ndarray, m: int) -> complex:
    a, b = h[m - 1, m - 1], h[m - 1, m]
    c, d = h[m, m - 1], h[m, m]
    tr = a + d
    disc = np.sqrt((a - d) ** 2 / 4.0 + b * c)
    mu1 = tr / 2.0 + disc
    mu2 = tr / 2.0 - disc
    return mu1 if abs(mu1 - d) < abs(mu2 - d) else mu2


def eig4(m: np.ndarray) -> np.ndarray:
    """Eigenvalues of a square complex matrix (used for n <= 4).

    Householder reduction to Hessenberg form followed by Wilkinson-shifted
    QR sweeps with deflation from the bottom. Raises NumericalError with the
    residual of the stuck subdiagonal if the sweep cap is exhausted.
    """
    m = np.array(m, dtype=complex)
    if not m.any():
        return np.zeros(m.shape[0], dtype=complex)
    m, exponent = _pow2_normalize(m)
    h = _householder_hessenberg(m)
    n = h.shape[0]
    scale = max(np.linalg.norm(h), np.finfo(float).tiny)
    eps = np.finfo(float).eps
    eigs = np.empty(n, dtype=complex)
    hi = n - 1
    sweeps = 0
    while hi >= 0:
        if hi == 0:
            eigs[0] = h[0, 0]
            break
        if abs(h[hi, hi - 1]) <= eps * (abs(h[hi, hi]) + abs(h[hi - 1, hi - 1]) + eps * scale):
            eigs[hi] = h[hi, hi]
            hi -= 1
            continue
        if sweeps >= EIG4_MAX_SWEEPS:
            raise NumericalError(
                f"eig4 did not converge in {EIG4_MAX_SWEEPS} sweeps; "
                f"residual subdiagonal {abs(h[hi, hi - 1]):.3e}"
            )
        sweeps += 1
        # exceptional shift breaks rare cycles
        mu = _wilkinson_shift(h, hi) if sweeps % 11 else h[hi, hi] + abs(h[hi, hi - 1])
        block = h[: hi + 1, : hi + 1] - mu * np.eye(hi + 1)
        q, r = np.linalg.qr(block)
        h[: hi + 1, : hi + 1] = r @ q + mu * np.eye(hi + 1)
    return np.ldexp(eigs.real, exponent) + 1j * np.ldexp(eigs.imag, exponent)


class DensityMatrix4:
    """Validated two-qubit density matrix (Hermitian, unit trace, PSD)."""

    __slots__ = ("matrix",)

    def __init__(self, matrix, tol: float = 1e-10):
        m = np.array(matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"density matrix must be 4x4, got shape {m.shape}")
        if np.linalg.norm(m - dagger(m)) > tol:
            raise ValueError("density matrix must be Hermitian")
        if abs(np.trace(m) - 1.0) > tol:
            raise ValueError(f"density matrix must have unit trace, got {np.trace(m)}")
        if np.linalg.eigvalsh(m)[0] < -1e-8:
            raise ValueError("density matrix must be positive semidefinite")
        m.setflags(write=False)
        self.matrix = m

    @classmethod
    def from_pure(cls, psi) -> "DensityMatrix4":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    def __eq__(self, other):
        if not isinstance(other, DensityMatrix4):
            return NotImplemented
        return bool(np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash(self.matrix.tobytes())

    def __repr__(self):
        return f"DensityMatrix4({self.matrix.tolist()!r})"
