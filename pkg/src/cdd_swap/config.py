"""Plain-text run configuration and the reference scenario presets.

A config file is a list of ``key = value`` lines, optionally grouped under
``[section]`` headers. Blank lines and ``#`` comments are ignored. Numeric
values may be arithmetic expressions in ``pi`` (``28*pi``, ``pi/8``). Every
key not given takes its default, so an empty file is the reference setup:

    [exchange]
    J = pi/8
    [field]
    field_enabled = true
    Nx = 28*pi
    Nz = 14*pi
    t_c = 1
    [bath]
    eta = 1/20
    omega_c = 2*pi
    T_kelvin = 0.2
    tau_seconds = 1e-9
    topology = independent
    channels = amplitude_damping, dephasing
    [run]
    t_final = 1
    n_steps = 2000
    initial_state = updown

Frequencies are in 1/tau and times in tau; T_kelvin and tau_seconds only
set the dimensionless temperature.
"""

from __future__ import annotations

import ast
import math
import operator
from dataclasses import dataclass

import numpy as np

from .bath import (
    AMPLITUDE_DAMPING,
    DEPHASING,
    CouplingTopology,
    OhmicSpectralDensity,
    ThermalBath,
)
from .control import ControlField, ExchangeCoupling
from .operators import DensityMatrix4
from .solver import SimulationConfig


class ConfigError(ValueError):
    """Malformed or invalid configuration text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


SECTIONS = {
    "exchange": ("J",),
    "field": ("field_enabled", "Nx", "Nz", "t_c"),
    "bath": ("eta", "omega_c", "T_kelvin", "tau_seconds", "topology", "channels"),
    "run": ("t_final", "n_steps", "initial_state"),
}
KEY_SECTION = {k: sec for sec, keys in SECTIONS.items() for k in keys}

DEFAULTS = {
    "J": math.pi / 8,
    "field_enabled": True,
    "Nx": 28 * math.pi,
    "Nz": 14 * math.pi,
    "t_c": 1.0,
    "eta": 1 / 20,
    "omega_c": 2 * math.pi,
    "T_kelvin": 0.2,
    "tau_seconds": 1e-9,
    "topology": "independent",
    "channels": ("amplitude_damping", "dephasing"),
    "t_final": 1.0,
    "n_steps": 2000,
    "initial_state": "updown",
}

CHANNELS = {"amplitude_damping": AMPLITUDE_DAMPING, "dephasing": DEPHASING}

_S2 = 1 / math.sqrt(2)
NAMED_STATES = {
    "upup": (1, 0, 0, 0),
    "updown": (0, 1, 0, 0),
    "downup": (0, 0, 1, 0),
    "downdown": (0, 0, 0, 1),
    "singlet": (0, _S2, -_S2, 0),
    "triplet0": (0, _S2, _S2, 0),
}


def named_state(name: str) -> DensityMatrix4:
    return DensityMatrix4.from_pure(np.array(NAMED_STATES[name], dtype=complex))


_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}


def _eval_number(text: str) -> float:
    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        raise ValueError(f"unsupported expression {text!r}")

    try:
        return ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot evaluate {text!r}: {exc}") from None


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"expected true/false, got {text!r}")


def _parse_value(key: str, text: str):
    if key == "field_enabled":
        return _parse_bool(text)
    if key == "n_steps":
        v = _eval_number(text)
        if v != int(v):
            raise ValueError(f"n_steps must be an integer, got {text!r}")
        return int(v)
    if key == "topology":
        v = text.strip().lower()
        if v not in ("independent", "common"):
            raise ValueError(f"topology must be 'independent' or 'common', got {text!r}")
        return v
    if key == "channels":
        names = tuple(x.strip().lower() for x in text.split(",") if x.strip())
        if not names:
            raise ValueError("at least one channel is required")
        for n in names:
            if n not in CHANNELS:
                raise ValueError(f"unknown channel {n!r}; known: {', '.join(CHANNELS)}")
        if len(set(names)) != len(names):
            raise ValueError("duplicate channel")
        return names
    if key == "initial_state":
        v = text.strip().lower()
        if v not in NAMED_STATES:
            raise ValueError(f"unknown initial state {v!r}; known: {', '.join(NAMED_STATES)}")
        return v
    return _eval_number(text)


def parse_values(text: str) -> dict:
    """Parse config text into a complete raw key -> value mapping."""
    values = dict(DEFAULTS)
    seen: dict[str, int] = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"malformed section header {raw.strip()!r}", lineno)
            section = line[1:-1].strip().lower()
            if section not in SECTIONS:
                raise ConfigError(f"unknown section [{section}]", lineno)
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in KEY_SECTION:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if section is not None and KEY_SECTION[key] != section:
            raise ConfigError(f"key {key!r} belongs in [{KEY_SECTION[key]}], not [{section}]", lineno)
        if key in seen:
            raise ConfigError(f"duplicate key {key!r} (first set on line {seen[key]})", lineno)
        seen[key] = lineno
        try:
            values[key] = _parse_value(key, val)
        except ValueError as exc:
            raise ConfigError(str(exc), lineno) from None
    return values


def build_config(values: dict) -> SimulationConfig:
    try:
        field = (
            ControlField(values["Nx"], values["Nz"], values["t_c"])
            if values["field_enabled"]
            else ControlField.disabled(values["t_c"])
        )
        return SimulationConfig(
            exchange=ExchangeCoupling(values["J"]),
            field=field,
            channels=tuple(CHANNELS[c] for c in values["channels"]),
            topology=CouplingTopology(values["topology"]),
            spectral=OhmicSpectralDensity(values["eta"], values["omega_c"]),
            bath=ThermalBath.from_kelvin(values["T_kelvin"], values["tau_seconds"]),
            t_final=values["t_final"],
            n_steps=values["n_steps"],
            initial_state=named_state(values["initial_state"]),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid configuration: {exc}") from None


def parse_config(text: str) -> SimulationConfig:
    return build_config(parse_values(text))


def format_config(cfg: SimulationConfig) -> str:
    """Serialize to config text that parses back to an equal config."""
    if cfg.bath.T_kelvin is None:
        raise ConfigError("bath temperature was not given in kelvin; cannot serialize")
    channel_names = []
    for ch in cfg.channels:
        name = next((n for n, c in CHANNELS.items() if c == ch), None)
        if name is None:
            raise ConfigError(f"channel {ch} has no config name")
        channel_names.append(name)
    state = next(
        (n for n in NAMED_STATES if named_state(n) == cfg.initial_state), None
    )
    if state is None:
        raise ConfigError("initial state is not one of the named states")
    f = cfg.field
    lines = [
        "[exchange]",
        f"J = {cfg.exchange.J!r}",
        "[field]",
        f"field_enabled = {'true' if f.enabled else 'false'}",
    ]
    if f.enabled:
        lines += [f"Nx = {f.Nx!r}", f"Nz = {f.Nz!r}"]
    lines += [
        f"t_c = {f.t_c!r}",
        "[bath]",
        f"eta = {cfg.spectral.eta!r}",
        f"omega_c = {cfg.spectral.omega_c!r}",
        f"T_kelvin = {cfg.bath.T_kelvin!r}",
        f"tau_seconds = {cfg.bath.tau_seconds!r}",
        f"topology = {cfg.topology.value}",
        f"channels = {', '.join(channel_names)}",
        "[run]",
        f"t_final = {cfg.t_final!r}",
        f"n_steps = {cfg.n_steps}",
        f"initial_state = {state}",
    ]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Scenario:
    name: str
    config: SimulationConfig
    protected: bool

    @property
    def label(self) -> str:
        return f"{self.name}-{'protected' if self.protected else 'unprotected'}"


# panel -> topology; (a, b) and (c, d) show concurrence and fidelity of the same run
PRESET_TOPOLOGY = {
    "fig1a": "independent",
    "fig1b": "independent",
    "fig1c": "common",
    "fig1d": "common",
}


def preset(name: str, protected: bool = True, **overrides) -> Scenario:
    if name not in PRESET_TOPOLOGY:
        raise ConfigError(f"unknown preset {name!r}; known: {', '.join(PRESET_TOPOLOGY)}")
    values = dict(DEFAULTS, topology=PRESET_TOPOLOGY[name], field_enabled=protected)
    values.update(overrides)
    return Scenario(name, build_config(values), protected)


def presets() -> list[Scenario]:
    return [preset(n, p) for n in PRESET_TOPOLOGY for p in (True, False)]
