"""Born master equation for the two-qubit state in the interaction picture.

The generator is time-local in rho; memory enters only through operator
valued integrals over the dressed couplings

    Q1^(s)(t) = int_0^t T1(t - t') R^(s)(t')^dag dt'
    Q2^(s)(t) = int_0^t T2(t - t') R^(s)(t') dt'

which do not depend on rho and are therefore computed once for the whole
grid before stepping. With S_i^(s) = sum_s' Gamma(s, s') Qi^(s'), one
channel contributes

    [R, rho S1] + [R^dag, rho S2] + [S1^dag rho, R^dag] + [S2^dag rho, R]

per qubit s, all operators taken at the current time.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .bath import (
    CouplingTopology,
    KernelTable,
    NoiseChannel,
    OhmicSpectralDensity,
    ThermalBath,
    build_kernel_table,
    gamma,
)
from .control import (
    ControlField,
    ExchangeCoupling,
    _EPS,
    heisenberg_coeffs,
    heisenberg_sigma,
    rotation_matrix,
    rotation_matrices,
)
from .operators import DensityMatrix4, dagger, sigma

log = logging.getLogger(__name__)

MAX_TRACE_DRIFT = 1e-4
MAX_HERMITICITY_ERROR = 1e-6
# dt * (fastest angular frequency) must stay below this
RESOLUTION_LIMIT = 0.1
MIN_STEPS = 100


class SolverError(RuntimeError):
    """Integration aborted because an invariant of rho was violated."""


@dataclass(frozen=True)
class SimulationConfig:
    exchange: ExchangeCoupling
    field: ControlField
    channels: tuple[NoiseChannel, ...]
    topology: CouplingTopology
    spectral: OhmicSpectralDensity
    bath: ThermalBath
    t_final: float
    n_steps: int
    initial_state: DensityMatrix4

    def __post_init__(self):
        object.__setattr__(self, "channels", tuple(self.channels))
        if not self.t_final > 0:
            raise ValueError(f"t_final must be positive, got {self.t_final}")
        if int(self.n_steps) != self.n_steps or self.n_steps < MIN_STEPS:
            raise ValueError(f"n_steps must be an integer >= {MIN_STEPS}, got {self.n_steps}")
        fastest = max(abs(self.field.Nx) + abs(self.field.Nz), 4 * abs(self.exchange.J))
        if self.dt * fastest >= RESOLUTION_LIMIT:
            raise ValueError(
                f"time step {self.dt:.3g} does not resolve the fastest frequency "
                f"{fastest:.4g}: dt * max(Nx + Nz, 4J) = {self.dt * fastest:.3g} "
                f">= {RESOLUTION_LIMIT}"
            )

    @property
    def dt(self) -> float:
        return self.t_final / self.n_steps

    def replace(self, **changes) -> "SimulationConfig":
        from dataclasses import replace

        return replace(self, **changes)


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (n, 4, 4), interaction picture
    trace_error: np.ndarray
    hermiticity_error: np.ndarray
    min_eigenvalue: np.ndarray


@dataclass(frozen=True)
class DressedHistory:
    """Dressed couplings R^(s)(t_i) for every channel on a uniform grid.

    ``ops`` has shape (n_channels, 2, n_points, 4, 4); axis 1 is the qubit.
    """

    dt: float
    ops: np.ndarray = field(repr=False)

    @property
    def n_points(self) -> int:
        return self.ops.shape[2]


def dressed_coupling(
    cfg: SimulationConfig, channel: NoiseChannel, s: int, t: float
) -> np.ndarray:
    """R^(s)(t) = sum_{m,n} lambda_m R_mn(t) sigma~_n^(s)(t) at one time."""
    lam = channel.vector
    rot = rotation_matrix(cfg.field, t)
    mu = lam @ rot
    return sum(mu[n] * heisenberg_sigma(cfg.exchange, s, n + 1, t) for n in range(3))


def build_history(cfg: SimulationConfig, dt: float, n_points: int) -> DressedHistory:
    """Samples of every channel's dressed coupling at t_i = i * dt."""
    t = dt * np.arange(n_points)
    rot = rotation_matrices(cfg.field, t)
    k = heisenberg_coeffs(cfg.exchange, t)
    # sigma~_n^(s)(t) = a sigma_n^(s) + b sigma_n^(s') - c (sigma^(s) x sigma^(s'))_n
    sig = np.array([[sigma(n, s) for n in (1, 2, 3)] for s in (1, 2)])
    cross = np.einsum("njl,sjab,slbc->snac", _EPS, sig, sig[::-1])
    tilde = (
        k.a[:, None, None, None, None] * sig[None]
        + k.b[:, None, None, None, None] * sig[None, ::-1]
        - k.c[:, None, None, None, None] * cross[None]
    )  # (K, s, n, 4, 4)
    lam = np.array([ch.vector for ch in cfg.channels])  # (C, 3)
    mu = np.einsum("cm,kmn->ckn", lam, rot)
    ops = np.einsum("ckn,ksnab->cskab", mu, tilde)
    ops.setflags(write=False)
    return DressedHistory(dt=dt, ops=ops)


def _check_grids(tables: KernelTable, history: DressedHistory):
    if not np.isclose(tables.dt, history.dt, rtol=1e-12, atol=0):
        raise ValueError(f"kernel table spacing {tables.dt} != history spacing {history.dt}")


def history_integrals(
    tables: KernelTable, history: DressedHistory, j: int
) -> tuple[np.ndarray, np.ndarray]:
    """Trapezoidal Q1, Q2 at grid index ``j`` for every (channel, qubit).

    Returns two arrays of shape (n_channels, 2, 4, 4). Direct O(j) sum; the
    integrator uses the batched convolution instead.
    """
    _check_grids(tables, history)
    if j < 0:
        raise ValueError(f"grid index must be non-negative, got {j}")
    if j >= history.n_points or j >= len(tables):
        raise IndexError(f"history holds {history.n_points} samples, index {j} requested")
    ops = history.ops[:, :, : j + 1]
    if j == 0:
        zero = np.zeros(ops.shape[:2] + (4, 4), dtype=complex)
        return zero, zero.copy()
    w = np.full(j + 1, history.dt)
    w[0] = w[-1] = 0.5 * history.dt
    t1 = w * tables.T1[j::-1]
    t2 = w * tables.T2[j::-1]
    q1 = np.einsum("i,csiab->csab", t1, dagger(ops))
    q2 = np.einsum("i,csiab->csab", t2, ops)
    return q1, q2


def _gamma_matrix(top: CouplingTopology) -> np.ndarray:
    return np.array([[gamma(top, s, sp) for sp in (1, 2)] for s in (1, 2)])


def _apply(r: np.ndarray, s1: np.ndarray, s2: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Four-term generator for stacked (R, S1, S2) of shape (..., 4, 4)."""
    r = r.reshape(-1, 4, 4)
    s1 = s1.reshape(-1, 4, 4)
    s2 = s2.reshape(-1, 4, 4)
    rd = dagger(r)
    rho_s1 = rho @ s1
    rho_s2 = rho @ s2
    x = r @ rho_s1 - rho_s1 @ r + rd @ rho_s2 - rho_s2 @ rd
    s1d_rho = dagger(s1) @ rho
    s2d_rho = dagger(s2) @ rho
    x = x + s1d_rho @ rd - rd @ s1d_rho + s2d_rho @ r - r @ s2d_rho
    return x.sum(axis=0)


def rhs(
    cfg: SimulationConfig,
    tables: KernelTable,
    history: DressedHistory,
    j: int,
    rho: np.ndarray,
) -> np.ndarray:
    """d rho_I / dt at grid index ``j`` of ``history``."""
    rho = np.asarray(rho, dtype=complex)
    q1, q2 = history_integrals(tables, history, j)
    g = _gamma_matrix(cfg.topology)
    s1 = np.einsum("st,ctab->csab", g, q1)
    s2 = np.einsum("st,ctab->csab", g, q2)
    return _apply(history.ops[:, :, j], s1, s2, rho)


def _superoperators(r: np.ndarray, s1: np.ndarray, s2: np.ndarray) -> np.ndarray:
    """Row-major 16x16 matrices L with vec(rhs) = L vec(rho), for each time.

    Inputs have shape (K, P, 4, 4) with P the stacked (channel, qubit) pairs.
    vec(A rho B) has matrix elements L[(i,l), (j,m)] = A[i,j] B[m,l].
    """
    eye = np.eye(4)
    rd = dagger(r)
    s1d = dagger(s1)
    s2d = dagger(s2)

    def sandwich(a, b):
        return np.einsum("kpij,kpml->kiljm", a, b).reshape(a.shape[0], 16, 16)

    lsup = sandwich(r, s1) + sandwich(rd, s2) + sandwich(s1d, rd) + sandwich(s2d, r)
    # - rho (S1 R + S2 R^dag) - (R^dag S1^dag + R S2^dag) rho
    right = np.einsum("kpij,kpjl->kil", s1, r) + np.einsum("kpij,kpjl->kil", s2, rd)
    left = np.einsum("kpij,kpjl->kil", rd, s1d) + np.einsum("kpij,kpjl->kil", r, s2d)
    lsup -= np.einsum("ij,kml->kiljm", eye, right).reshape(-1, 16, 16)
    lsup -= np.einsum("kij,lm->kiljm", left, eye).reshape(-1, 16, 16)
    return lsup


def generator_grid(cfg: SimulationConfig, refine: int = 2) -> np.ndarray:
    """Superoperators on the grid of spacing dt / refine used by the stepper."""
    h = cfg.dt / refine
    n_points = refine * cfg.n_steps + 1
    tables = build_kernel_table(cfg.spectral, cfg.bath, h, n_points - 1)
    history = build_history(cfg, h, n_points)
    r = np.moveaxis(history.ops, 2, 0)  # (K, C, 2, 4, 4)
    shape = r.shape
    q1 = _backend.history_convolution(tables.T1, dagger(r).reshape(n_points, -1), h)
    q2 = _backend.history_convolution(tables.T2, r.reshape(n_points, -1), h)
    g = _gamma_matrix(cfg.topology)
    s1 = np.einsum("st,kctab->kcsab", g, q1.reshape(shape))
    s2 = np.einsum("st,kctab->kcsab", g, q2.reshape(shape))
    flat = (n_points, -1, 4, 4)
    return _superoperators(r.reshape(flat), s1.reshape(flat), s2.reshape(flat))


def integrate(cfg: SimulationConfig) -> Trajectory:
    """Fixed-step RK4 over [0, t_final]; half-step stages use exact midpoint samples."""
    n = cfg.n_steps
    dt = cfg.dt
    lsup = generator_grid(cfg, refine=2)
    y = cfg.initial_state.matrix.reshape(16).copy()
    states = np.empty((n + 1, 4, 4), dtype=complex)
    states[0] = cfg.initial_state.matrix
    trace_err = np.empty(n + 1)
    herm_err = np.empty(n + 1)
    min_eig = np.empty(n + 1)

    def record(j, rho):
        trace_err[j] = abs(np.trace(rho) - 1.0)
        herm_err[j] = np.linalg.norm(rho - rho.conj().T)
        min_eig[j] = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
        if trace_err[j] > MAX_TRACE_DRIFT or herm_err[j] > MAX_HERMITICITY_ERROR:
            raise SolverError(
                f"invariant violated at t={j * dt:.6g}: |Tr rho - 1| = {trace_err[j]:.3e}, "
                f"||rho - rho^dag|| = {herm_err[j]:.3e}"
            )

    record(0, states[0])
    for j in range(n):
        l0, lm, l1 = lsup[2 * j], lsup[2 * j + 1], lsup[2 * j + 2]
        k1 = l0 @ y
        k2 = lm @ (y + 0.5 * dt * k1)
        k3 = lm @ (y + 0.5 * dt * k2)
        k4 = l1 @ (y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        states[j + 1] = y.reshape(4, 4)
        record(j + 1, states[j + 1])
    log.debug("integrated %d steps, backend=%s, min eigenvalue %.3e",
              n, _backend.BACKEND, min_eig.min())
    return Trajectory(
        times=dt * np.arange(n + 1),
        states=states,
        trace_error=trace_err,
        hermiticity_error=herm_err,
        min_eigenvalue=min_eig,
    )
