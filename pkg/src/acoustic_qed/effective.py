"""Dispersive qubit-qubit couplings and the drive-induced secular coupling.

Eliminating the cavity gives a qubit-only Hamiltonian with exchange rates
J_ij = g^2 (Delta_i + Delta_j) / (2 Delta_i Delta_j). Frequency modulation at M
splits every qubit into sidebands; when N*M matches a pair detuning the pair
couples at

    G^N = J_12 e^{i N phi_1} sum_n J_{n+N}(D_1/M) J_n(D_2/M) e^{i n dphi}
        = J_12 e^{i N phi_1} e^{i N psi} J_N(z)          (Graf addition)
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize_scalar

from .bessel import MAX_ORDER, bessel_j, bessel_j_range
from .hamiltonian import DriveParams, h_static
from .integrate import Tolerances, integrate
from .lindblad import Trajectory, _check_trace, _observables
from .quantum_core import (
    DensityMatrix,
    OperatorMatrix,
    SpaceLayout,
    SystemSpec,
    build_space,
    lowering_operator,
    qubit_register_lowering,
)

SERIES_MARGIN = 40


class TruncationError(ValueError):
    pass


@dataclass(frozen=True)
class DispersiveCouplings:
    J: np.ndarray
    qubit_detunings: tuple[float, ...]

    def __post_init__(self):
        J = np.array(self.J, dtype=float)
        J.setflags(write=False)
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "qubit_detunings", tuple(float(d) for d in self.qubit_detunings))

    @property
    def n_qubits(self) -> int:
        return len(self.qubit_detunings)

    @property
    def lamb_shifts(self) -> np.ndarray:
        return np.diag(self.J).copy()

    def effective_detuning(self, i: int, j: int) -> float:
        """delta_ij = delta_j - delta_i + J_jj - J_ii."""
        d, J = self.qubit_detunings, self.J
        return d[j] - d[i] + J[j, j] - J[i, i]

    @property
    def effective_detunings(self) -> np.ndarray:
        shifted = np.asarray(self.qubit_detunings) + self.lamb_shifts
        return shifted[None, :] - shifted[:, None]


@dataclass(frozen=True)
class SecularCoupling:
    order: int
    G: complex
    z: float
    psi: float
    delta_phi: float
    J12: float
    mode: str

    @property
    def magnitude(self) -> float:
        return abs(self.G)

    @property
    def rabi_half_period(self) -> float:
        """Time of full transfer, pi / (2|G|), for a resonant pair."""
        return math.pi / (2 * abs(self.G))


def dispersive_couplings(spec: SystemSpec) -> DispersiveCouplings:
    Di = spec.qubit_cavity_detunings
    if np.any(Di == 0):
        raise ValueError("a qubit is resonant with the cavity (Delta_i = 0); no dispersive model")
    g2 = spec.coupling_g**2
    J = g2 * (Di[:, None] + Di[None, :]) / (2 * Di[:, None] * Di[None, :])
    return DispersiveCouplings(J, spec.qubit_detunings)


def _qubit_ops(n):
    return [qubit_register_lowering(n, i).data for i in range(n)]


def effective_hamiltonian(couplings: DispersiveCouplings, spec: SystemSpec | None = None) -> OperatorMatrix:
    """sum_i delta_i n_i + sum_ij J_ij sigma_i^dag sigma_j on the 2^N qubit register.

    ``spec`` only cross-checks the qubit count.
    """
    n = couplings.n_qubits
    if spec is not None and spec.n_qubits != n:
        raise ValueError("couplings and spec disagree on the qubit count")
    s = _qubit_ops(n)
    H = np.zeros((2**n, 2**n), dtype=complex)
    for i in range(n):
        H += couplings.qubit_detunings[i] * s[i].conj().T @ s[i]
        for j in range(n):
            H += couplings.J[i, j] * s[i].conj().T @ s[j]
    return OperatorMatrix(H, hermitian=True)


def zero_photon_block(layout: SpaceLayout) -> np.ndarray:
    """Flat indices of the states with the cavity in |0>, in qubit-register order."""
    return np.arange(0, layout.dim, layout.fock_truncation + 1)


def dispersive_transform_residual(spec: SystemSpec, layout: SpaceLayout | None = None) -> float:
    """max|P0 U^dag H U P0 - H_eff| with U = exp(sum_i (g/Delta_i)(a^dag s_i - a s_i^dag)).

    Returned in rad/s. The cavity term -Delta a^dag a vanishes on the
    zero-photon block, so H_eff is compared without it.
    """
    layout = layout or build_space(spec)
    H = h_static(spec, layout).data
    a = lowering_operator(layout, layout.cavity_index).data
    X = np.zeros_like(H)
    for i, Di in enumerate(spec.qubit_cavity_detunings):
        s = lowering_operator(layout, i).data
        X += spec.coupling_g / Di * (a.conj().T @ s - a @ s.conj().T)
    U = expm(X)
    transformed = U.conj().T @ H @ U
    idx = zero_photon_block(layout)
    block = transformed[np.ix_(idx, idx)]
    H_eff = effective_hamiltonian(dispersive_couplings(spec)).data
    return float(np.abs(block - H_eff).max())


def graf_params(D1: float, D2: float, M: float, delta_phi: float) -> tuple[float, float]:
    """Argument z and angle psi of the Graf-collapsed sideband sum.

    psi is fixed by both w cos(psi) = u - v cos(dphi) and w sin(psi) =
    v sin(dphi) (u = D1/M, v = D2/M, w = z), which picks the branch for any
    dphi.
    """
    if not M > 0:
        raise ValueError("drive frequency M must be > 0")
    u, v = D1 / M, D2 / M
    x = u - v * math.cos(delta_phi)
    y = v * math.sin(delta_phi)
    z = math.hypot(x, y)
    if z == 0.0:
        return 0.0, 0.0
    return z, math.atan2(y, x)


def series_cutoff(drive: DriveParams) -> int:
    return math.ceil(max(drive.ratios, default=0.0)) + SERIES_MARGIN


def secular_coupling(
    J12: float,
    drive: DriveParams,
    pair: tuple[int, int] = (0, 1),
    order: int = 1,
    mode: str = "series",
) -> SecularCoupling:
    """Resonant coupling G^N of the qubit pair when N*M matches their detuning."""
    if order < 1:
        raise ValueError("order must be >= 1")
    if mode not in ("series", "closed_form"):
        raise ValueError(f"mode must be 'series' or 'closed_form', got {mode!r}")
    i, j = pair
    M = drive.drive_frequency
    if not M > 0:
        raise ValueError("secular coupling needs a drive frequency M > 0")
    D1, D2 = drive.amplitudes[i], drive.amplitudes[j]
    phi1 = drive.phases[i]
    dphi = drive.phases[i] - drive.phases[j]
    z, psi = graf_params(D1, D2, M, dphi)

    if mode == "series":
        n_cut = series_cutoff(drive)
        if n_cut + order > MAX_ORDER:
            raise TruncationError(
                f"series needs Bessel orders up to {n_cut + order} > {MAX_ORDER}"
            )
        n = np.arange(-n_cut, n_cut + 1)
        first = bessel_j_range(D1 / M, -n_cut + order, n_cut + order)
        second = bessel_j_range(D2 / M, -n_cut, n_cut)
        total = np.sum(first * second * np.exp(1j * n * dphi))
    else:
        total = np.exp(1j * order * psi) * bessel_j(order, z)
    G = J12 * np.exp(1j * order * phi1) * total
    return SecularCoupling(order, complex(G), z, psi, dphi, J12, mode)


def optimal_drive_amplitude(order: int = 1) -> float:
    """D/M maximising |J_N(2 D/M)| (equal amplitudes, opposite phases)."""
    if order < 1:
        raise ValueError("order must be >= 1")
    grid = np.linspace(1e-3, 5.0, 2001)
    vals = np.array([abs(bessel_j(order, 2 * r)) for r in grid])
    k = int(np.argmax(vals))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    res = minimize_scalar(
        lambda r: -abs(bessel_j(order, 2 * r)),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-9},
    )
    return float(res.x)


def nearest_sideband_orders(couplings: DispersiveCouplings, M: float) -> np.ndarray:
    """N_ij = round(delta_ij / M) for every ordered pair."""
    return np.rint(couplings.effective_detunings / M).astype(int)


class _Unitary:
    """dρ/dt = -i[H(t), ρ] for a callable H(t) on a small register."""

    def __init__(self, hamiltonian, dim):
        self.hamiltonian = hamiltonian
        self.dim = dim

    def __call__(self, t, y):
        r = y.reshape(self.dim, self.dim)
        H = self.hamiltonian(t)
        return (-1j * (H @ r - r @ H)).ravel()


def _secular_hamiltonian(couplings: DispersiveCouplings, drive: DriveParams):
    """Interaction-picture H(t) keeping, for every pair, only the nearest sideband.

    For a resonant pair this is exactly G^N sigma_i^dag sigma_j + h.c.; off
    resonance the residual detuning delta_ij - N M survives as a phase.
    """
    n = couplings.n_qubits
    M = drive.drive_frequency
    s = _qubit_ops(n)
    orders = nearest_sideband_orders(couplings, M) if M > 0 else np.zeros((n, n), int)
    terms = []
    for i in range(n):
        for j in range(i + 1, n):
            N = int(orders[i, j])
            if M > 0 and N != 0:
                G = secular_coupling(couplings.J[i, j], drive, (i, j), abs(N)).G
                if N < 0:
                    # G^{-|N|}_ij from the same series with the roles swapped
                    G = np.conj(secular_coupling(couplings.J[i, j], drive, (j, i), abs(N)).G)
            else:
                G = _zero_order_coupling(couplings.J[i, j], drive, i, j)
            residual = couplings.effective_detunings[i, j] - N * M
            terms.append((G, residual, s[i].conj().T @ s[j]))

    def H(t):
        out = np.zeros((2**n, 2**n), dtype=complex)
        for G, residual, op in terms:
            c = G * np.exp(-1j * residual * t)
            out += c * op + np.conj(c) * op.conj().T
        return out

    return H


def _zero_order_coupling(J, drive: DriveParams, i, j):
    if drive.drive_frequency == 0:
        return complex(J)
    M = drive.drive_frequency
    n_cut = series_cutoff(drive)
    n = np.arange(-n_cut, n_cut + 1)
    a = bessel_j_range(drive.amplitudes[i] / M, -n_cut, n_cut)
    b = bessel_j_range(drive.amplitudes[j] / M, -n_cut, n_cut)
    return complex(J * np.sum(a * b * np.exp(1j * n * (drive.phases[i] - drive.phases[j]))))


def _timedep_hamiltonian(couplings: DispersiveCouplings, drive: DriveParams):
    n = couplings.n_qubits
    s = _qubit_ops(n)
    static = effective_hamiltonian(couplings).data
    occ = np.array([np.real(np.diag(x.conj().T @ x)) for x in s])

    def H(t):
        out = static.copy()
        out[np.diag_indices_from(out)] += drive.offsets(t) @ occ
        return out

    return H


def evolve_effective(
    couplings: DispersiveCouplings,
    drive: DriveParams,
    rho0,
    t_end: float,
    sample_count: int,
    mode: str = "timedep",
    tolerances: Tolerances | None = None,
) -> Trajectory:
    """Closed-system evolution of the qubit register under an effective model.

    ``mode="timedep"`` uses sum_i omega_i(t) n_i + sum_ij J_ij s_i^dag s_j;
    ``mode="secular"`` uses the nearest-sideband couplings G (see
    ``_secular_hamiltonian``).
    """
    if t_end <= 0:
        raise ValueError("t_end must be > 0")
    if sample_count < 2:
        raise ValueError("sample_count must be >= 2")
    if drive.n_qubits != couplings.n_qubits:
        raise ValueError("drive and couplings have different qubit counts")
    tolerances = tolerances or Tolerances()
    rho0 = rho0 if isinstance(rho0, DensityMatrix) else DensityMatrix(rho0)
    dim = 2**couplings.n_qubits
    if rho0.dim != dim:
        raise ValueError(f"rho0 has dimension {rho0.dim}, the qubit register needs {dim}")
    if mode == "timedep":
        H = _timedep_hamiltonian(couplings, drive)
        fastest = np.ptp(np.linalg.eigvalsh(H(0.0))) + 2 * sum(drive.amplitudes)
    elif mode == "secular":
        H = _secular_hamiltonian(couplings, drive)
        fastest = 2 * np.abs(H(0.0)).sum() + drive.drive_frequency
    else:
        raise ValueError(f"mode must be 'timedep' or 'secular', got {mode!r}")

    times = np.linspace(0.0, t_end, sample_count)
    samples, stats = integrate(_Unitary(H, dim), rho0.data.ravel(), times, tolerances, fastest)
    s = _qubit_ops(couplings.n_qubits)
    occ = np.array([np.real(np.diag(x.conj().T @ x)) for x in s])
    rhos, pops, _, trace, purity, mins, herm = _observables(samples, dim, occ, None)
    _check_trace(trace, times)
    stats.update(model=mode)
    return Trajectory(times, pops, None, trace, purity, mins, herm, None, stats)
