import functools

import numpy as np
import pytest

from cdd_swap.bath import (
    CouplingTopology,
    OhmicSpectralDensity,
    ThermalBath,
    standard_channels,
)
from cdd_swap.config import preset
from cdd_swap.control import ControlField, ExchangeCoupling
from cdd_swap.metrics import UP_DOWN, trajectory_metrics
from cdd_swap.operators import DensityMatrix4
from cdd_swap.solver import SimulationConfig, integrate

# criterion id -> (passed, detail), filled by test_acceptance
ACCEPTANCE_RESULTS = {}

FIG1_SD = OhmicSpectralDensity(eta=1 / 20, omega_c=2 * np.pi)
FIG1_BATH = ThermalBath.from_kelvin(0.2, 1e-9)
FIG1_J = ExchangeCoupling(np.pi / 8)


def make_config(
    *,
    J=np.pi / 8,
    field=None,
    channels=None,
    topology=CouplingTopology.INDEPENDENT,
    eta=1 / 20,
    t_final=1.0,
    n_steps=2000,
    psi=UP_DOWN,
):
    return SimulationConfig(
        exchange=ExchangeCoupling(J),
        field=field if field is not None else ControlField.disabled(),
        channels=tuple(channels) if channels is not None else tuple(standard_channels()),
        topology=topology,
        spectral=OhmicSpectralDensity(eta, 2 * np.pi),
        bath=FIG1_BATH,
        t_final=t_final,
        n_steps=n_steps,
        initial_state=DensityMatrix4.from_pure(psi),
    )


@functools.lru_cache(maxsize=None)
def fig1_run(name, protected, n_steps=2000):
    """Cached full run of a preset: (trajectory, metrics dict)."""
    cfg = preset(name, protected, n_steps=n_steps).config
    traj = integrate(cfg)
    return traj, trajectory_metrics(traj.states, cfg.exchange, traj.times, cfg.initial_state)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: (int(k.split(".")[0][1:]), k)):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {key}: {detail}")
