"""Parameter sets for the diamond-emitter scenarios (two- and three-qubit runs)."""
from __future__ import annotations

import math

from .hamiltonian import DriveParams
from .quantum_core import SystemSpec

TWO_PI = 2 * math.pi
GHZ = TWO_PI * 1e9
MHZ = TWO_PI * 1e6
NS = 1e-9

# D/M used for every reproduced map; close to the first maximum of J_1(2 D/M)
DRIVE_RATIO = 0.92

QUBIT_DETUNINGS = (0.0, 6 * GHZ, 8 * GHZ)
CAVITY_DETUNING = 250 * GHZ
COUPLING_G = 5 * GHZ
CAVITY_DECAY = 25 * GHZ
QUBIT_DECAY = 5 * MHZ


def diamond_spec(
    n_qubits: int = 2,
    third_qubit_detuning: float | None = None,
    qubit_decay: float = QUBIT_DECAY,
    qubit_dephasing: float = 0.0,
    fock_truncation: int = 3,
) -> SystemSpec:
    """Qubits at 0, 6, 8 GHz (2 pi x), Delta = 2 pi x 250 GHz, g = 2 pi x 5 GHz."""
    if not 1 <= n_qubits <= 3:
        raise ValueError("the preset defines up to three qubits")
    deltas = list(QUBIT_DETUNINGS[:n_qubits])
    if third_qubit_detuning is not None:
        if n_qubits < 3:
            raise ValueError("third_qubit_detuning needs n_qubits = 3")
        deltas[2] = third_qubit_detuning
    return SystemSpec(
        qubit_detunings=deltas,
        cavity_detuning=CAVITY_DETUNING,
        coupling_g=COUPLING_G,
        cavity_decay=CAVITY_DECAY,
        qubit_decay=qubit_decay,
        qubit_dephasing=qubit_dephasing,
        fock_truncation=fock_truncation,
    )


def opposite_phase_phases(n_qubits: int) -> tuple[float, ...]:
    """phi_1 = 0 and every other qubit driven at phi_1 + pi."""
    return (0.0,) + (math.pi,) * (n_qubits - 1)


def opposite_phase_drive(n_qubits: int, M: float, ratio: float = DRIVE_RATIO) -> DriveParams:
    return DriveParams.from_ratios(M, [ratio] * n_qubits, opposite_phase_phases(n_qubits))
