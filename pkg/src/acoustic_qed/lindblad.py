"""Time-dependent Lindblad master equation for the driven qubit-cavity system."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import find_peaks

from .hamiltonian import DriveParams, h_static, qubit_occupation_diagonals
from .integrate import IntegrationError, Tolerances, integrate
from .quantum_core import (
    DensityMatrix,
    OperatorMatrix,
    SpaceLayout,
    SystemSpec,
    build_space,
    lowering_operator,
    number_operator,
)

TRACE_TOLERANCE = 1e-6
# superoperator matvec beats the matrix form up to about this dimension
_SUPEROPERATOR_MAX_DIM = 16


@dataclass(frozen=True)
class CollapseChannel:
    operator: OperatorMatrix
    rate: float
    label: str = ""

    def __post_init__(self):
        if not self.rate >= 0:
            raise ValueError(f"collapse rate must be >= 0, got {self.rate}")


@dataclass
class Trajectory:
    """Sampled observables of one evolution.

    ``qubit_populations`` has shape (N, T). ``cavity_population`` is None for
    qubit-only (effective) models. ``states`` is filled only on request.
    """

    times: np.ndarray
    qubit_populations: np.ndarray
    cavity_population: np.ndarray | None
    trace: np.ndarray
    purity: np.ndarray
    min_eigenvalue: np.ndarray
    hermiticity_error: np.ndarray
    states: np.ndarray | None = None
    stats: dict = field(default_factory=dict)

    def population(self, qubit: int) -> np.ndarray:
        return self.qubit_populations[qubit]

    def first_maximum(self, qubit: int, prominence: float = 0.05) -> tuple[float, float]:
        """Time and value of the first prominent local maximum of a population.

        Falls back to the global maximum when no interior peak exists.
        """
        p = self.qubit_populations[qubit]
        peaks, _ = find_peaks(p, prominence=prominence)
        k = int(peaks[0]) if len(peaks) else int(np.argmax(p))
        return float(self.times[k]), float(p[k])

    def max_trace_error(self) -> float:
        return float(np.abs(self.trace - 1).max())


def channels_from_spec(spec: SystemSpec, layout: SpaceLayout | None = None) -> list[CollapseChannel]:
    layout = layout or build_space(spec)
    channels = []
    if spec.cavity_decay > 0:
        channels.append(
            CollapseChannel(lowering_operator(layout, layout.cavity_index), spec.cavity_decay, "a")
        )
    for i, rate in enumerate(spec.qubit_decay):
        if rate > 0:
            channels.append(CollapseChannel(lowering_operator(layout, i), rate, f"sigma_{i}"))
    for i, rate in enumerate(spec.qubit_dephasing):
        if rate > 0:
            channels.append(CollapseChannel(number_operator(layout, i), rate, f"n_{i}"))
    return channels


def _data(x) -> np.ndarray:
    return np.asarray(x.data if hasattr(x, "data") else x)


def liouvillian_apply(H, channels, rho) -> np.ndarray:
    """-i[H, rho] + sum_c (gamma/2)(2 c rho c^dag - {c^dag c, rho})."""
    H, r = _data(H), _data(rho)
    if H.shape != r.shape:
        raise ValueError(f"dimension mismatch: H {H.shape} vs rho {r.shape}")
    out = -1j * (H @ r - r @ H)
    for ch in channels:
        c = _data(ch.operator)
        if c.shape != r.shape:
            raise ValueError(f"channel {ch.label!r} has shape {c.shape}, rho has {r.shape}")
        cdc = c.conj().T @ c
        out += ch.rate / 2 * (2 * c @ r @ c.conj().T - cdc @ r - r @ cdc)
    return out


class _Generator:
    """dρ/dt for H(t) = H0 + sum_i D_i cos(M t + phi_i) n_i on a (sub)basis.

    ``occupations`` holds the diagonals of the modulated n_i on that basis.
    """

    def __init__(self, H0, occupations, drive: DriveParams, jumps, rates):
        k = H0.shape[0]
        self.dim = k
        self.M = drive.drive_frequency
        self.amps = np.asarray(drive.amplitudes)
        self.phases = np.asarray(drive.phases)
        self.active = self.amps > 0
        rates = np.asarray(rates, dtype=float)
        jumps = np.asarray(jumps, dtype=complex).reshape(len(rates), k, k)
        damping = np.einsum("c,cji,cjk->ik", rates, jumps.conj(), jumps)
        self.h_nh = H0 - 0.5j * damping
        self.jumps = jumps
        self.jumps_dag = jumps.conj().transpose(0, 2, 1)
        self.rates = rates
        # commutator with a diagonal operator acts elementwise on rho
        self.occ_diff = occupations[:, :, None] - occupations[:, None, :]
        self.superop = None
        if k <= _SUPEROPERATOR_MAX_DIM:
            eye = np.eye(k)
            L = -1j * (np.kron(self.h_nh, eye) - np.kron(eye, self.h_nh.conj()))
            for g, c in zip(rates, jumps):
                L += g * np.kron(c, c.conj())
            self.superop = L
            self.occ_diff_flat = self.occ_diff.reshape(len(occupations), -1)

    def drive_weights(self, t):
        return self.amps * np.cos(self.M * t + self.phases)

    def __call__(self, t, y):
        w = self.drive_weights(t)
        if self.superop is not None:
            out = self.superop @ y
            if self.active.any():
                out += -1j * (w @ self.occ_diff_flat) * y
            return out
        r = y.reshape(self.dim, self.dim)
        out = -1j * (self.h_nh @ r - r @ self.h_nh.conj().T)
        if len(self.rates):
            out += np.einsum("c,cij->ij", self.rates, self.jumps @ r @ self.jumps_dag)
        if self.active.any():
            out += -1j * np.tensordot(w, self.occ_diff, axes=1) * r
        return out.ravel()

    @property
    def fastest_rate(self) -> float:
        # Liouvillian frequencies are differences of eigenvalues of h_nh
        eig = np.linalg.eigvals(self.h_nh)
        return float(np.ptp(eig.real) + np.abs(eig.imag).max() + self.amps.sum())


def _observables(samples, k, populations, cavity):
    rhos = samples.reshape(-1, k, k)
    pops = np.real(np.einsum("tii,qi->qt", rhos, populations))
    cav = None if cavity is None else np.real(np.einsum("tii,i->t", rhos, cavity))
    trace = np.real(np.einsum("tii->t", rhos))
    purity = np.real(np.einsum("tij,tji->t", rhos, rhos))
    herm = np.abs(rhos - rhos.conj().transpose(0, 2, 1)).max(axis=(1, 2))
    mins = np.linalg.eigvalsh(0.5 * (rhos + rhos.conj().transpose(0, 2, 1))).min(axis=1)
    return rhos, pops, cav, trace, purity, mins, herm


def _check_trace(trace, times):
    err = np.abs(trace - 1)
    if err.max() > TRACE_TOLERANCE:
        k = int(np.argmax(err))
        raise IntegrationError(
            f"trace drifted by {err[k]:.3g} at t={times[k]:.6g} s (limit {TRACE_TOLERANCE})"
        )


def evolve(
    spec: SystemSpec,
    drive: DriveParams,
    rho0,
    t_end: float,
    sample_count: int,
    tolerances: Tolerances | None = None,
    *,
    subspace: str = "auto",
    store_states: bool = False,
) -> Trajectory:
    """Integrate the master equation with H(t) from ``h_at`` on a uniform grid.

    With ``subspace="auto"`` the integration runs on the basis states whose
    total excitation number does not exceed the largest one present in
    ``rho0``. The Hamiltonian conserves excitation number and every collapse
    channel lowers or keeps it, so this block is invariant and the result is
    identical to the full-space run. ``subspace="full"`` forces the full space.
    """
    if t_end <= 0:
        raise ValueError("t_end must be > 0")
    if sample_count < 2:
        raise ValueError("sample_count must be >= 2")
    if subspace not in ("auto", "full"):
        raise ValueError(f"subspace must be 'auto' or 'full', got {subspace!r}")
    if drive.n_qubits != spec.n_qubits:
        raise ValueError("drive and system have different qubit counts")
    tolerances = tolerances or Tolerances()
    layout = build_space(spec)
    rho0 = rho0 if isinstance(rho0, DensityMatrix) else DensityMatrix(rho0)
    if rho0.dim != layout.dim:
        raise ValueError(f"rho0 has dimension {rho0.dim}, layout needs {layout.dim}")

    keep = np.arange(layout.dim)
    if subspace == "auto":
        exc = layout.excitation_numbers()
        support = np.abs(np.diag(rho0.data)) > 0
        keep = np.flatnonzero(exc <= exc[support].max())
    sub = np.ix_(keep, keep)
    k = len(keep)

    channels = channels_from_spec(spec, layout)
    occ = qubit_occupation_diagonals(layout)[:, keep]
    gen = _Generator(
        h_static(spec, layout).data[sub],
        occ,
        drive,
        [ch.operator.data[sub] for ch in channels],
        [ch.rate for ch in channels],
    )
    times = np.linspace(0.0, t_end, sample_count)
    samples, stats = integrate(
        gen, rho0.data[sub].ravel(), times, tolerances, fastest_rate=gen.fastest_rate
    )
    cavity = np.real(np.diag(number_operator(layout, layout.cavity_index).data))[keep]
    rhos, pops, cav, trace, purity, mins, herm = _observables(samples, k, occ, cavity)
    _check_trace(trace, times)

    states = None
    if store_states:
        states = np.zeros((len(times), layout.dim, layout.dim), dtype=complex)
        states[:, keep[:, None], keep[None, :]] = rhos
    stats.update(subspace_dim=k, full_dim=layout.dim, channels=[ch.label for ch in channels])
    return Trajectory(times, pops, cav, trace, purity, mins, herm, states, stats)
