"""JSON run configuration.

Files use cyclic units (Hz) and nanoseconds; qubits are labelled from 1. This
module is the only place where the factor 2 pi and the label offset appear.

Example::

    {
      "schema_version": 1,
      "system": {"qubit_detunings_hz": [0, 6e9], "cavity_detuning_hz": 250e9,
                 "coupling_g_hz": 5e9, "cavity_decay_hz": 25e9,
                 "qubit_decay_hz": 5e6, "qubit_dephasing_hz": 0},
      "drive": {"frequency_hz": 6e9, "ratios": [0.92, 0.92],
                "phases_rad": [0, 3.141592653589793]},
      "sweep": {"m_min_hz": 2e9, "m_max_hz": 9e9, "steps": 141},
      "evolution": {"t_end_ns": 20, "samples": 400, "excited_qubits": [1]},
      "model": "full"
    }
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import jsonschema
import numpy as np

from .hamiltonian import DriveParams
from .integrate import Tolerances
from .quantum_core import SystemSpec
from .sweep import MODELS, SweepConfig

SCHEMA_VERSION = 1
TWO_PI = 2 * math.pi

_number = {"type": "number"}
_rate = {"type": "number", "minimum": 0}
_rate_or_list = {"oneOf": [_rate, {"type": "array", "items": _rate, "minItems": 1}]}

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "system"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "system": {
            "type": "object",
            "required": ["qubit_detunings_hz", "cavity_detuning_hz", "coupling_g_hz"],
            "additionalProperties": False,
            "properties": {
                "qubit_detunings_hz": {"type": "array", "items": _number, "minItems": 1},
                "cavity_detuning_hz": _number,
                "coupling_g_hz": _rate,
                "cavity_decay_hz": _rate,
                "qubit_decay_hz": _rate_or_list,
                "qubit_dephasing_hz": _rate_or_list,
                "fock_truncation": {"type": "integer", "minimum": 1},
            },
        },
        "drive": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "frequency_hz": {"type": "number", "exclusiveMinimum": 0},
                "ratios": {"type": "array", "items": _rate, "minItems": 1},
                "phases_rad": {"type": "array", "items": _number, "minItems": 1},
            },
        },
        "sweep": {
            "type": "object",
            "required": ["m_min_hz", "m_max_hz", "steps"],
            "additionalProperties": False,
            "properties": {
                "m_min_hz": {"type": "number", "exclusiveMinimum": 0},
                "m_max_hz": {"type": "number", "exclusiveMinimum": 0},
                "steps": {"type": "integer", "minimum": 1},
            },
        },
        "evolution": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "t_end_ns": {"type": "number", "exclusiveMinimum": 0},
                "samples": {"type": "integer", "minimum": 2},
                "excited_qubits": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                "rtol": {"type": "number", "exclusiveMinimum": 0},
                "atol": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "model": {"enum": list(MODELS)},
    },
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    raw: dict
    system: SystemSpec
    ratios: tuple[float, ...]
    phases: tuple[float, ...]
    drive_frequency: float | None  # rad/s
    m_grid: np.ndarray | None  # rad/s
    t_end: float  # s
    sample_count: int
    excited_qubits: tuple[int, ...]  # zero-based
    model: str
    tolerances: Tolerances

    def drive(self, M: float | None = None) -> DriveParams:
        M = self.drive_frequency if M is None else M
        if M is None:
            raise ConfigError("field drive.frequency_hz: required for this command")
        return DriveParams.from_ratios(M, self.ratios, self.phases)

    def sweep_config(self, model: str | None = None) -> SweepConfig:
        if self.m_grid is None:
            raise ConfigError("field sweep: required for the sweep command")
        return SweepConfig(
            system=self.system,
            ratios=self.ratios,
            phases=self.phases,
            m_values=self.m_grid,
            t_end=self.t_end,
            sample_count=self.sample_count,
            excited_qubits=self.excited_qubits,
            model=model or self.model,
            tolerances=self.tolerances,
        )


def _field_path(error: jsonschema.ValidationError) -> str:
    return ".".join(str(p) for p in error.absolute_path) or "<root>"


def parse_config(raw: dict) -> RunConfig:
    """Validate and convert a decoded config document."""
    errors = sorted(jsonschema.Draft202012Validator(CONFIG_SCHEMA).iter_errors(raw), key=str)
    if errors:
        e = errors[0]
        raise ConfigError(f"field {_field_path(e)}: {e.message}")

    sysd = raw["system"]
    n = len(sysd["qubit_detunings_hz"])

    def rates(key):
        v = sysd.get(key, 0.0)
        if isinstance(v, list) and len(v) != n:
            raise ConfigError(f"field system.{key}: expected {n} entries, got {len(v)}")
        return TWO_PI * np.asarray(v, dtype=float)

    try:
        system = SystemSpec(
            qubit_detunings=TWO_PI * np.asarray(sysd["qubit_detunings_hz"], dtype=float),
            cavity_detuning=TWO_PI * sysd["cavity_detuning_hz"],
            coupling_g=TWO_PI * sysd["coupling_g_hz"],
            cavity_decay=TWO_PI * sysd.get("cavity_decay_hz", 0.0),
            qubit_decay=rates("qubit_decay_hz"),
            qubit_dephasing=rates("qubit_dephasing_hz"),
            fock_truncation=sysd.get("fock_truncation", 3),
        )
    except ValueError as exc:
        raise ConfigError(f"field system: {exc}") from exc

    drive = raw.get("drive", {})
    ratios = tuple(drive.get("ratios", [0.0] * n))
    phases = tuple(drive.get("phases_rad", [0.0] * n))
    for key, vals in (("ratios", ratios), ("phases_rad", phases)):
        if len(vals) != n:
            raise ConfigError(f"field drive.{key}: expected {n} entries, got {len(vals)}")
    freq = drive.get("frequency_hz")

    m_grid = None
    if "sweep" in raw:
        sw = raw["sweep"]
        if sw["m_max_hz"] < sw["m_min_hz"] or (sw["steps"] > 1 and sw["m_max_hz"] == sw["m_min_hz"]):
            raise ConfigError("field sweep.m_max_hz: must exceed sweep.m_min_hz")
        m_grid = TWO_PI * np.linspace(sw["m_min_hz"], sw["m_max_hz"], sw["steps"])

    ev = raw.get("evolution", {})
    excited = tuple(q - 1 for q in ev.get("excited_qubits", [1]))
    if any(q >= n for q in excited):
        raise ConfigError(f"field evolution.excited_qubits: labels must be in 1..{n}")
    defaults = Tolerances()
    return RunConfig(
        raw=raw,
        system=system,
        ratios=ratios,
        phases=phases,
        drive_frequency=None if freq is None else TWO_PI * freq,
        m_grid=m_grid,
        t_end=ev.get("t_end_ns", 20.0) * 1e-9,
        sample_count=ev.get("samples", 400),
        excited_qubits=excited,
        model=raw.get("model", "full"),
        tolerances=Tolerances(rtol=ev.get("rtol", defaults.rtol), atol=ev.get("atol", defaults.atol)),
    )


def load_config(path) -> RunConfig:
    """Read a config file, or the config echoed inside a run manifest."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config ({exc.strerror})") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if isinstance(raw, dict) and "subcommand" in raw and "config" in raw:
        raw = raw["config"]
    try:
        return parse_config(raw)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
