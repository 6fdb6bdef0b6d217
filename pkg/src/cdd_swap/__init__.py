"""Continuous dynamical decoupling of an exchange-driven sqrt(SWAP) gate.

Simulates two qubits coupled by a Heisenberg exchange interaction while a
static-plus-rotating control field decouples them from thermal ohmic baths,
using the Born master equation in the interaction picture.
"""

from ._backend import BACKEND
from .bath import (
    AMPLITUDE_DAMPING,
    DEPHASING,
    CouplingTopology,
    KernelTable,
    NoiseChannel,
    OhmicSpectralDensity,
    ThermalBath,
    build_kernel_table,
    kernel_T1,
    kernel_T2,
    standard_channels,
)
from .config import Scenario, format_config, parse_config, preset, presets
from .control import ControlField, ExchangeCoupling, h0, u0, uc
from .metrics import concurrence, fidelity, purity, to_lab_frame
from .operators import DensityMatrix4
from .solver import SimulationConfig, Trajectory, integrate

__all__ = [
    "AMPLITUDE_DAMPING", "BACKEND", "DEPHASING", "ControlField", "CouplingTopology",
    "DensityMatrix4", "ExchangeCoupling", "KernelTable", "NoiseChannel",
    "OhmicSpectralDensity", "Scenario", "SimulationConfig", "ThermalBath", "Trajectory",
    "build_kernel_table", "concurrence", "fidelity", "format_config", "h0", "integrate",
    "kernel_T1", "kernel_T2", "parse_config", "preset", "presets", "purity",
    "standard_channels", "to_lab_frame", "u0", "uc",
]
