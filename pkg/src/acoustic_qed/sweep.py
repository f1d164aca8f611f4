"""Drive-frequency sweeps: population maps, resonances and selectivity."""
from __future__ import annotations

import csv
import hashlib
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .effective import dispersive_couplings, evolve_effective
from .hamiltonian import DriveParams
from .integrate import IntegrationError, Tolerances
from .lindblad import evolve
from .quantum_core import SystemSpec, build_space, initial_state, qubit_register_state

MODELS = ("full", "effective_timedep", "effective_secular")
RESONANCE_THRESHOLD = 0.5
DECOUPLED_THRESHOLD = 0.1


class SweepError(RuntimeError):
    def __init__(self, message, drive_frequency):
        super().__init__(message)
        self.drive_frequency = drive_frequency


@dataclass(frozen=True)
class SweepConfig:
    """One population map: M runs over ``m_values`` with D_i = ratio_i * M."""

    system: SystemSpec
    ratios: Sequence[float]
    phases: Sequence[float]
    m_values: Sequence[float]
    t_end: float = 20e-9
    sample_count: int = 400
    excited_qubits: Sequence[int] = (0,)
    model: str = "full"
    tolerances: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        n = self.system.n_qubits
        for name in ("ratios", "phases", "m_values", "excited_qubits"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        object.__setattr__(self, "ratios", tuple(float(r) for r in self.ratios))
        object.__setattr__(self, "phases", tuple(float(p) for p in self.phases))
        object.__setattr__(self, "m_values", tuple(float(m) for m in self.m_values))
        object.__setattr__(self, "excited_qubits", tuple(int(q) for q in self.excited_qubits))
        if len(self.ratios) != n or len(self.phases) != n:
            raise ValueError(f"need {n} ratios and phases")
        if any(r < 0 for r in self.ratios):
            raise ValueError("drive ratios must be >= 0")
        m = np.asarray(self.m_values)
        if len(m) < 1 or np.any(m <= 0) or np.any(np.diff(m) <= 0):
            raise ValueError("M grid must be positive and strictly increasing")
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.t_end <= 0 or self.sample_count < 2:
            raise ValueError("need t_end > 0 and sample_count >= 2")
        if any(not 0 <= q < n for q in self.excited_qubits):
            raise ValueError("excited qubit index out of range")

    @staticmethod
    def linear_grid(m_min: float, m_max: float, steps: int) -> np.ndarray:
        return np.linspace(m_min, m_max, steps)

    def drive_at(self, M: float) -> DriveParams:
        return DriveParams.from_ratios(M, self.ratios, self.phases)

    def as_dict(self) -> dict:
        s = self.system
        return {
            "system": {
                "qubit_detunings": list(s.qubit_detunings),
                "cavity_detuning": s.cavity_detuning,
                "coupling_g": s.coupling_g,
                "cavity_decay": s.cavity_decay,
                "qubit_decay": list(s.qubit_decay),
                "qubit_dephasing": list(s.qubit_dephasing),
                "fock_truncation": s.fock_truncation,
            },
            "ratios": list(self.ratios),
            "phases": list(self.phases),
            "m_values": list(self.m_values),
            "t_end": self.t_end,
            "sample_count": self.sample_count,
            "excited_qubits": list(self.excited_qubits),
            "model": self.model,
            "tolerances": {
                "rtol": self.tolerances.rtol,
                "atol": self.tolerances.atol,
                "method": self.tolerances.method,
                "rk4_step": self.tolerances.rk4_step,
            },
        }

    def config_hash(self) -> str:
        blob = json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


@dataclass
class PopulationMap:
    """``populations[q, m, t]`` for qubit q at grid point m and sample t."""

    m_values: np.ndarray
    times: np.ndarray
    populations: np.ndarray
    config_hash: str
    model: str
    stats: list = field(default_factory=list)

    @property
    def n_qubits(self) -> int:
        return self.populations.shape[0]

    def qubit(self, q: int) -> np.ndarray:
        return self.populations[q]

    def max_over_time(self, q: int) -> np.ndarray:
        return self.populations[q].max(axis=1)

    def grid_index(self, M: float) -> int:
        m = self.m_values
        step = np.min(np.diff(m)) if len(m) > 1 else abs(m[0])
        k = int(np.argmin(np.abs(m - M)))
        if abs(m[k] - M) > 1e-6 * step:
            raise ValueError(f"M = {M:.6g} rad/s is not on the sweep grid")
        return k

    def write_csv(self, outdir) -> list[Path]:
        """qubit<i>_population.csv: header row = times in ns, first column = M in GHz."""
        outdir = Path(outdir)
        paths = []
        header = ["M_GHz"] + [repr(float(t * 1e9)) for t in self.times]
        for q in range(self.n_qubits):
            path = outdir / f"qubit{q + 1}_population.csv"
            with path.open("w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(header)
                for M, row in zip(self.m_values, self.populations[q]):
                    writer.writerow([repr(float(M / (2 * math.pi) / 1e9))] + [repr(float(v)) for v in row])
            paths.append(path)
        return paths


def simulate_point(config: SweepConfig, M: float):
    """Populations (N, T) and integrator stats at one drive frequency."""
    drive = config.drive_at(M)
    spec = config.system
    if config.model == "full":
        rho0 = initial_state(build_space(spec), config.excited_qubits)
        traj = evolve(spec, drive, rho0, config.t_end, config.sample_count, config.tolerances)
    else:
        rho0 = qubit_register_state(spec.n_qubits, config.excited_qubits)
        mode = "timedep" if config.model == "effective_timedep" else "secular"
        traj = evolve_effective(
            dispersive_couplings(spec), drive, rho0, config.t_end, config.sample_count, mode,
            config.tolerances,
        )
    return traj.qubit_populations, traj.times, traj.stats


def _point_job(args):
    config, M = args
    try:
        return simulate_point(config, M)
    except IntegrationError as exc:
        raise SweepError(f"integration failed at M = {M:.6g} rad/s: {exc}", M) from exc


def run_sweep(config: SweepConfig, workers: int | None = None) -> PopulationMap:
    workers = workers or os.cpu_count() or 1
    jobs = [(config, M) for M in config.m_values]
    if workers == 1 or len(jobs) == 1:
        results = [_point_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_point_job, jobs))
    pops = np.stack([r[0] for r in results], axis=1)
    times = results[0][1]
    stats = [dict(r[2], drive_frequency=M) for r, M in zip(results, config.m_values)]
    return PopulationMap(
        np.asarray(config.m_values), times, pops, config.config_hash(), config.model, stats
    )


def find_resonances(
    pmap: PopulationMap, source_qubit: int, target_qubit: int, threshold: float = RESONANCE_THRESHOLD
) -> list[float]:
    """Grid values of M where the target's peak population is a local maximum above threshold.

    ``source_qubit`` only has to differ from the target; the initially excited
    qubit is fixed by the sweep configuration.
    """
    if pmap.populations.size == 0:
        raise ValueError("empty population map")
    if source_qubit == target_qubit:
        raise ValueError("source and target qubit must differ")
    peak = pmap.max_over_time(target_qubit)
    found = []
    for k, value in enumerate(peak):
        if value <= threshold:
            continue
        left = peak[k - 1] if k > 0 else -np.inf
        right = peak[k + 1] if k + 1 < len(peak) else -np.inf
        if value >= right and value > left:
            found.append(float(pmap.m_values[k]))
    return found


def selectivity_metric(
    pmap: PopulationMap, M_star: float, pair: tuple[int, int], bystander: int
) -> tuple[float, float]:
    """(peak population of pair[1], peak population of the bystander) at M_star."""
    k = pmap.grid_index(M_star)
    transfer = float(pmap.populations[pair[1], k].max())
    leakage = float(pmap.populations[bystander, k].max())
    return transfer, leakage
