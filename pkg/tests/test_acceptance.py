"""End-to-end acceptance checks.

Each test records PASS/FAIL with its measured value into
``conftest.ACCEPTANCE_RESULTS``; the table is printed after the run.
Thresholds are fixed here and are not tuned to the results.
"""

import numpy as np
import pytest

from cdd_swap.bath import kernel_oracle, kernel_T1, kernel_T2
from cdd_swap.config import preset
from cdd_swap.control import ControlField, decoupling_residual, heisenberg_sigma, u0
from cdd_swap.metrics import UP_DOWN, concurrence, pure_state_concurrence
from cdd_swap.operators import SWAP, dagger, sigma
from cdd_swap.solver import integrate

from conftest import ACCEPTANCE_RESULTS, FIG1_BATH, FIG1_J, FIG1_SD, fig1_run

pytestmark = pytest.mark.slow

PANELS = ("fig1a", "fig1b", "fig1c", "fig1d")


def record(key, ok, detail):
    ACCEPTANCE_RESULTS[key] = (bool(ok), detail)
    assert ok, detail


@pytest.mark.parametrize("name, topology", [("fig1a", "independent"), ("fig1c", "common")])
@pytest.mark.parametrize("quantity", ["fidelity", "concurrence"])
def test_c1_endpoint(name, topology, quantity):
    _, m = fig1_run(name, True)
    value = m[quantity][-1]
    record(f"C1.{quantity}-{topology}", value >= 0.995, f"final {quantity} {value:.5f} (need >= 0.995)")


@pytest.mark.parametrize("name", PANELS)
def test_c2_protection_ordering(name):
    _, on = fig1_run(name, True)
    _, off = fig1_run(name, False)
    df = on["fidelity"][-1] - off["fidelity"][-1]
    dc = on["concurrence"][-1] - off["concurrence"][-1]
    record(f"C2.{name}", df >= 0.01 and dc > 0,
           f"fidelity margin {df:.4f} (need >= 0.01), concurrence margin {dc:.4f} (need > 0)")


def test_c3_sqrt_swap():
    u = u0(FIG1_J, 1.0)
    sq = u @ u
    phase = np.trace(dagger(SWAP) @ sq) / 4
    phase /= abs(phase)
    err = np.linalg.norm(sq - phase * SWAP)
    c = concurrence(np.outer(u @ UP_DOWN, (u @ UP_DOWN).conj()))
    record("C3.sqrt-swap", err < 1e-12 and abs(c - 1) < 1e-10,
           f"||U^2 - e^(i phi) SWAP|| = {err:.2e}, output concurrence 1 - {1 - c:.2e}")


@pytest.mark.parametrize("nx, nz", [(14, 7), (1, 2), (3, 1)])
def test_c4_decoupling(nx, nz):
    r = decoupling_residual(ControlField.from_integers(nx, nz), 4001)
    record(f"C4.decoupling-{nx}-{nz}", r < 1e-9, f"cycle integral norm {r:.2e} (need < 1e-9)")


def test_c5_kernel_oracle():
    worst = 0.0
    for t in np.linspace(0.0, 2.0, 20):
        for which, fn in (("T1", kernel_T1), ("T2", kernel_T2)):
            ref = kernel_oracle(FIG1_SD, FIG1_BATH, t, which)
            worst = max(worst, abs(fn(FIG1_SD, FIG1_BATH, t) - ref) / abs(ref))
    record("C5.kernel-oracle", worst < 1e-8, f"max relative deviation {worst:.2e} (need < 1e-8)")


def test_c6_heisenberg_picture():
    rng = np.random.default_rng(6)
    worst = 0.0
    for t in rng.uniform(0.0, 10.0, 50):
        u = u0(FIG1_J, t)
        for s in (1, 2):
            for n in (1, 2, 3):
                direct = dagger(u) @ sigma(n, s) @ u
                worst = max(worst, np.abs(heisenberg_sigma(FIG1_J, s, n, t) - direct).max())
    record("C6.heisenberg", worst < 1e-12, f"max deviation {worst:.2e} (need < 1e-12)")


def test_c7_conservation():
    trace = herm = 0.0
    for name in PANELS:
        for protected in (True, False):
            traj, _ = fig1_run(name, protected)
            trace = max(trace, traj.trace_error.max())
            herm = max(herm, traj.hermiticity_error.max())
    free = integrate(preset("fig1a", True, eta=0.0).config)
    drift = np.abs(free.states - free.states[0]).max()
    record("C7.conservation", trace < 1e-6 and herm < 1e-8 and drift < 1e-12,
           f"trace error {trace:.1e}, hermiticity {herm:.1e}, eta=0 drift {drift:.1e}")


def test_c8_convergence():
    _, coarse = fig1_run("fig1a", True, 2000)
    _, fine = fig1_run("fig1a", True, 4000)
    d = abs(fine["fidelity"][-1] - coarse["fidelity"][-1])
    record("C8.convergence", d < 1e-4, f"|F(4000) - F(2000)| = {d:.2e} (need < 1e-4)")


def test_c9_concurrence_oracle():
    rng = np.random.default_rng(9)
    pure = 0.0
    for _ in range(100):
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi /= np.linalg.norm(psi)
        pure = max(pure, abs(concurrence(np.outer(psi, psi.conj())) - pure_state_concurrence(psi)))
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    werner = 0.0
    for p in (0.2, 0.5, 0.9):
        rho = p * np.outer(phi, phi) + (1 - p) * np.eye(4) / 4
        werner = max(werner, abs(concurrence(rho) - max(0.0, (3 * p - 1) / 2)))
    record("C9.concurrence-oracle", pure < 1e-9 and werner < 1e-9,
           f"pure-state deviation {pure:.1e}, Werner deviation {werner:.1e} (need < 1e-9)")
