"""Static Jaynes-Cummings Hamiltonian and its acoustically modulated form.

Everything lives in the frame rotating at the common qubit frequency omega_0:
qubit i carries delta_i, the cavity carries -Delta.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .quantum_core import (
    OperatorMatrix,
    SpaceLayout,
    SystemSpec,
    build_space,
    lowering_operator,
)


@dataclass(frozen=True)
class DriveParams:
    """Classical acoustic drive: frequency M, amplitudes D_i, phases phi_i."""

    drive_frequency: float
    amplitudes: Sequence[float]
    phases: Sequence[float] | None = None

    def __post_init__(self):
        amps = tuple(float(a) for a in self.amplitudes)
        phases = (0.0,) * len(amps) if self.phases is None else tuple(float(p) for p in self.phases)
        if len(phases) != len(amps):
            raise ValueError("amplitudes and phases must have the same length")
        if any(a < 0 for a in amps):
            raise ValueError("drive amplitudes must be >= 0")
        if any(a > 0 for a in amps) and not self.drive_frequency > 0:
            raise ValueError("drive_frequency must be > 0 when any amplitude is nonzero")
        if self.drive_frequency < 0:
            raise ValueError("drive_frequency must be >= 0")
        object.__setattr__(self, "drive_frequency", float(self.drive_frequency))
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "phases", phases)

    @classmethod
    def from_ratios(cls, drive_frequency, ratios, phases=None) -> "DriveParams":
        """Amplitudes D_i = ratio_i * M."""
        return cls(drive_frequency, [r * drive_frequency for r in ratios], phases)

    @classmethod
    def off(cls, n_qubits: int) -> "DriveParams":
        return cls(0.0, (0.0,) * n_qubits)

    @property
    def n_qubits(self) -> int:
        return len(self.amplitudes)

    @property
    def ratios(self) -> tuple[float, ...]:
        if self.drive_frequency == 0:
            return (0.0,) * self.n_qubits
        return tuple(a / self.drive_frequency for a in self.amplitudes)

    def relative_phase(self, i: int = 0, j: int = 1) -> float:
        return self.phases[i] - self.phases[j]

    def offsets(self, t: float) -> np.ndarray:
        """D_i cos(M t + phi_i) for every qubit."""
        return np.asarray(self.amplitudes) * np.cos(
            self.drive_frequency * t + np.asarray(self.phases)
        )


def _check_drive(spec: SystemSpec, drive: DriveParams):
    if drive.n_qubits != spec.n_qubits:
        raise ValueError(
            f"drive has {drive.n_qubits} amplitudes but the system has {spec.n_qubits} qubits"
        )


def modulated_frequency(spec: SystemSpec, drive: DriveParams, qubit_index: int, t: float) -> float:
    _check_drive(spec, drive)
    if not 0 <= qubit_index < spec.n_qubits:
        raise IndexError(f"qubit index {qubit_index} outside 0..{spec.n_qubits - 1}")
    return spec.qubit_detunings[qubit_index] + drive.amplitudes[qubit_index] * np.cos(
        drive.drive_frequency * t + drive.phases[qubit_index]
    )


def qubit_occupation_diagonals(layout: SpaceLayout) -> np.ndarray:
    """Rows are the diagonals of sigma_i^dag sigma_i, shape (N, d)."""
    grids = np.indices(layout.dims).reshape(len(layout.dims), -1)
    return grids[: layout.n_qubits].astype(float)


def h_static(spec: SystemSpec, layout: SpaceLayout | None = None) -> OperatorMatrix:
    """sum_i delta_i n_i - Delta a^dag a + g sum_i (sigma_i a^dag + h.c.)."""
    layout = layout or build_space(spec)
    a = lowering_operator(layout, layout.cavity_index).data
    H = -spec.cavity_detuning * (a.conj().T @ a)
    occ = qubit_occupation_diagonals(layout)
    H += np.diag(np.asarray(spec.qubit_detunings) @ occ)
    for i in range(spec.n_qubits):
        s = lowering_operator(layout, i).data
        H += spec.coupling_g * (s @ a.conj().T + s.conj().T @ a)
    return OperatorMatrix(H, hermitian=True)


def h_at(
    spec: SystemSpec, drive: DriveParams, layout: SpaceLayout | None = None, t: float = 0.0
) -> OperatorMatrix:
    _check_drive(spec, drive)
    layout = layout or build_space(spec)
    H = h_static(spec, layout).data.copy()
    H[np.diag_indices_from(H)] += drive.offsets(t) @ qubit_occupation_diagonals(layout)
    return OperatorMatrix(H, hermitian=True)
