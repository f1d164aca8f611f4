"""Hilbert-space layout and operator/state construction.

The register is ``qubit 0 (x) qubit 1 (x) ... (x) qubit N-1 (x) cavity``. Each
qubit uses the basis ``(|g>, |e>)`` so that the lowering operator is
``|g><e| = [[0, 1], [0, 0]]``; the cavity is a Fock ladder ``|0> .. |n_max>``.

All frequencies are angular (rad/s) with hbar = 1. Indices are zero-based.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

DISPERSIVE_RATIO_LIMIT = 0.1


class DispersiveRegimeWarning(UserWarning):
    """Emitted when g / |Delta_i| is not small for some qubit."""


def _rate_tuple(value, n: int, name: str) -> tuple[float, ...]:
    if np.ndim(value) == 0:
        return (float(value),) * n
    out = tuple(float(v) for v in value)
    if len(out) != n:
        raise ValueError(f"{name} has length {len(out)}, expected {n}")
    return out


@dataclass(frozen=True)
class SystemSpec:
    """Static physical parameters, all in rad/s.

    ``qubit_decay`` and ``qubit_dephasing`` accept either one value shared by
    every qubit or a per-qubit sequence.
    """

    qubit_detunings: Sequence[float]
    cavity_detuning: float
    coupling_g: float
    cavity_decay: float = 0.0
    qubit_decay: Sequence[float] | float = 0.0
    qubit_dephasing: Sequence[float] | float = 0.0
    fock_truncation: int = 3

    def __post_init__(self):
        deltas = tuple(float(d) for d in self.qubit_detunings)
        if not deltas:
            raise ValueError("at least one qubit is required")
        n = len(deltas)
        object.__setattr__(self, "qubit_detunings", deltas)
        object.__setattr__(self, "cavity_detuning", float(self.cavity_detuning))
        object.__setattr__(self, "coupling_g", float(self.coupling_g))
        object.__setattr__(self, "cavity_decay", float(self.cavity_decay))
        object.__setattr__(self, "qubit_decay", _rate_tuple(self.qubit_decay, n, "qubit_decay"))
        object.__setattr__(
            self, "qubit_dephasing", _rate_tuple(self.qubit_dephasing, n, "qubit_dephasing")
        )
        if int(self.fock_truncation) != self.fock_truncation or self.fock_truncation < 1:
            raise ValueError("fock_truncation must be an integer >= 1")
        object.__setattr__(self, "fock_truncation", int(self.fock_truncation))

        if self.coupling_g < 0:
            raise ValueError("coupling_g must be >= 0")
        rates = (self.cavity_decay, *self.qubit_decay, *self.qubit_dephasing)
        if any(r < 0 for r in rates) or not all(np.isfinite(rates)):
            raise ValueError("loss rates must be finite and >= 0")
        if not self.is_dispersive:
            warnings.warn(
                f"g/|Delta_i| = {self.dispersive_ratios.max():.3g} exceeds "
                f"{DISPERSIVE_RATIO_LIMIT}; the dispersive picture may not hold",
                DispersiveRegimeWarning,
                stacklevel=3,
            )

    @property
    def n_qubits(self) -> int:
        return len(self.qubit_detunings)

    @property
    def qubit_cavity_detunings(self) -> np.ndarray:
        """Delta_i = Delta + delta_i for every qubit."""
        return self.cavity_detuning + np.asarray(self.qubit_detunings)

    @property
    def dispersive_ratios(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return self.coupling_g / np.abs(self.qubit_cavity_detunings)

    @property
    def is_dispersive(self) -> bool:
        return bool(np.all(self.dispersive_ratios < DISPERSIVE_RATIO_LIMIT))

    def replace(self, **changes) -> "SystemSpec":
        """Return a copy with some fields changed (validation re-runs)."""
        fields = {
            "qubit_detunings": self.qubit_detunings,
            "cavity_detuning": self.cavity_detuning,
            "coupling_g": self.coupling_g,
            "cavity_decay": self.cavity_decay,
            "qubit_decay": self.qubit_decay,
            "qubit_dephasing": self.qubit_dephasing,
            "fock_truncation": self.fock_truncation,
        }
        fields.update(changes)
        return SystemSpec(**fields)


@dataclass(frozen=True)
class SpaceLayout:
    n_qubits: int
    fock_truncation: int
    dims: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if self.n_qubits < 1 or self.fock_truncation < 1:
            raise ValueError("need n_qubits >= 1 and fock_truncation >= 1")
        object.__setattr__(self, "dims", (2,) * self.n_qubits + (self.fock_truncation + 1,))

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    @property
    def cavity_index(self) -> int:
        return self.n_qubits

    def basis_index(self, qubit_bits: Sequence[int], photons: int = 0) -> int:
        """Flat index of ``|b_0 ... b_{N-1}, n>`` with b = 1 for excited."""
        if len(qubit_bits) != self.n_qubits:
            raise ValueError("one bit per qubit is required")
        if not 0 <= photons <= self.fock_truncation:
            raise ValueError("photon number outside the truncated ladder")
        return int(np.ravel_multi_index((*qubit_bits, photons), self.dims))

    def excitation_numbers(self) -> np.ndarray:
        """Total excitation (qubits excited + photons) of every basis state."""
        grids = np.indices(self.dims).reshape(len(self.dims), -1)
        return grids.sum(axis=0)


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense complex operator with a hermiticity tag.

    Hermitian-tagged matrices are checked against
    ``max|A - A^dag| < 1e-12 * max|A|`` on construction.
    """

    data: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        data = np.array(self.data, dtype=complex)
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise ValueError(f"operator must be square, got shape {data.shape}")
        if self.hermitian:
            scale = np.abs(data).max()
            if np.abs(data - data.conj().T).max() > 1e-12 * scale:
                raise ValueError("matrix tagged hermitian is not hermitian")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def dag(self) -> "OperatorMatrix":
        return OperatorMatrix(self.data.conj().T, self.hermitian)

    def __array__(self, dtype=None, copy=None):
        return self.data if dtype is None else self.data.astype(dtype)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated density matrix (hermitian, unit trace, positive)."""

    data: np.ndarray

    def __post_init__(self):
        rho = np.array(self.data, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {rho.shape}")
        tr = np.trace(rho)
        if abs(tr - 1) > 1e-10:
            raise ValueError(f"trace is {tr}, expected 1")
        if np.abs(rho - rho.conj().T).max() / abs(tr) > 1e-10:
            raise ValueError("density matrix is not hermitian")
        if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min() < -1e-10:
            raise ValueError("density matrix has negative eigenvalues")
        rho.setflags(write=False)
        object.__setattr__(self, "data", rho)

    @classmethod
    def from_pure(cls, psi) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def purity(self) -> float:
        return float(np.real(np.einsum("ij,ji->", self.data, self.data)))

    def __array__(self, dtype=None, copy=None):
        return self.data if dtype is None else self.data.astype(dtype)


def _embed(local: np.ndarray, position: int, dims: Sequence[int]) -> np.ndarray:
    factors = [np.eye(d, dtype=complex) for d in dims]
    factors[position] = local
    return reduce(np.kron, factors)


def _qubit_lowering() -> np.ndarray:
    return np.array([[0, 1], [0, 0]], dtype=complex)


def _cavity_lowering(n_max: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_max + 1)), k=1).astype(complex)


def build_space(spec: SystemSpec) -> SpaceLayout:
    return SpaceLayout(spec.n_qubits, spec.fock_truncation)


def lowering_operator(layout: SpaceLayout, subsystem_index: int) -> OperatorMatrix:
    """sigma_i embedded for a qubit index, or the cavity ``a`` for the last index."""
    if not 0 <= subsystem_index <= layout.cavity_index:
        raise IndexError(
            f"subsystem index {subsystem_index} outside 0..{layout.cavity_index}"
        )
    if subsystem_index == layout.cavity_index:
        local = _cavity_lowering(layout.fock_truncation)
    else:
        local = _qubit_lowering()
    return OperatorMatrix(_embed(local, subsystem_index, layout.dims))


def number_operator(layout: SpaceLayout, subsystem_index: int) -> OperatorMatrix:
    low = lowering_operator(layout, subsystem_index).data
    return OperatorMatrix(low.conj().T @ low, hermitian=True)


def identity(layout: SpaceLayout) -> OperatorMatrix:
    return OperatorMatrix(np.eye(layout.dim, dtype=complex), hermitian=True)


def qubit_register_lowering(n_qubits: int, index: int) -> OperatorMatrix:
    """sigma_i on the qubit-only register (no cavity), dimension 2**n_qubits."""
    if not 0 <= index < n_qubits:
        raise IndexError(f"qubit index {index} outside 0..{n_qubits - 1}")
    return OperatorMatrix(_embed(_qubit_lowering(), index, (2,) * n_qubits))


def initial_state(layout: SpaceLayout, excited_qubits: Iterable[int] = ()) -> DensityMatrix:
    excited = set(excited_qubits)
    if any(not 0 <= q < layout.n_qubits for q in excited):
        raise IndexError(f"excited qubit indices {sorted(excited)} out of range")
    bits = [1 if q in excited else 0 for q in range(layout.n_qubits)]
    psi = np.zeros(layout.dim, dtype=complex)
    psi[layout.basis_index(bits, 0)] = 1.0
    return DensityMatrix.from_pure(psi)


def qubit_register_state(n_qubits: int, excited_qubits: Iterable[int] = ()) -> DensityMatrix:
    """Product state on the qubit-only register."""
    excited = set(excited_qubits)
    if any(not 0 <= q < n_qubits for q in excited):
        raise IndexError(f"excited qubit indices {sorted(excited)} out of range")
    bits = [1 if q in excited else 0 for q in range(n_qubits)]
    psi = np.zeros(2**n_qubits, dtype=complex)
    psi[np.ravel_multi_index(bits, (2,) * n_qubits)] = 1.0
    return DensityMatrix.from_pure(psi)


def expectation(rho, op):
    """tr(rho op); returns a float for hermitian-tagged operators."""
    r = np.asarray(rho.data if isinstance(rho, DensityMatrix) else rho)
    o = np.asarray(op.data if isinstance(op, OperatorMatrix) else op)
    if r.shape != o.shape:
        raise ValueError(f"dimension mismatch: rho {r.shape} vs operator {o.shape}")
    value = np.einsum("ij,ji->", r, o)
    if isinstance(op, OperatorMatrix) and op.hermitian:
        if abs(value.imag) > 1e-10:
            raise ValueError(f"hermitian expectation has imaginary part {value.imag:.3g}")
        return float(value.real)
    return complex(value)
