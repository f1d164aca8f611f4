"""Emission sidebands of a single frequency-modulated qubit.

The modulated emitter radiates a comb of lines at omega_0 + n M with weights
[J_n(D/M)]^2. The omega^4 prefactor is left out, so only relative weights are
meaningful.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bessel import bessel_j_range

TAIL_TOLERANCE = 1e-10


@dataclass(frozen=True)
class SidebandComb:
    orders: np.ndarray
    offsets: np.ndarray  # rad/s relative to omega_0
    weights: np.ndarray
    drive_frequency: float
    linewidth: float = 0.0

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    def weight(self, n: int) -> float:
        idx = np.flatnonzero(self.orders == n)
        return float(self.weights[idx[0]]) if len(idx) else 0.0


def default_sideband_cutoff(D: float, M: float) -> int:
    return math.ceil(D / M) + 20


def sideband_comb(D: float, M: float, n_max: int | None = None) -> SidebandComb:
    if not M > 0:
        raise ValueError("drive frequency M must be > 0")
    if D < 0:
        raise ValueError("modulation amplitude must be >= 0")
    if n_max is None:
        n_max = default_sideband_cutoff(D, M)
    orders = np.arange(-n_max, n_max + 1)
    weights = bessel_j_range(D / M, -n_max, n_max) ** 2
    tail = 1.0 - weights.sum()
    if tail > TAIL_TOLERANCE:
        raise ValueError(
            f"n_max={n_max} leaves tail mass {tail:.3g}; use at least "
            f"{default_sideband_cutoff(D, M)}"
        )
    return SidebandComb(orders, orders * M, weights, M)


def lorentzian(omega, center, linewidth):
    """Unit-area Lorentzian with full width at half maximum ``linewidth``."""
    half = linewidth / 2
    return (half / math.pi) / ((omega - center) ** 2 + half**2)


def render_spectrum(comb: SidebandComb, linewidth: float, grid) -> np.ndarray:
    """Spectral density of the comb on ``grid`` (rad/s offsets).

    Zero linewidth deposits each weight on the nearest grid point (a stick
    spectrum); otherwise every line is a normalised Lorentzian.
    """
    if linewidth < 0:
        raise ValueError("linewidth must be >= 0")
    grid = np.asarray(grid, dtype=float)
    out = np.zeros_like(grid)
    if linewidth == 0:
        for offset, w in zip(comb.offsets, comb.weights):
            out[np.argmin(np.abs(grid - offset))] += w
        return out
    for offset, w in zip(comb.offsets, comb.weights):
        out += w * lorentzian(grid, offset, linewidth)
    return out


def write_comb_csv(comb: SidebandComb, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["offset_hz", "weight"])
        for offset, w in zip(comb.offsets, comb.weights):
            writer.writerow([repr(float(offset / (2 * math.pi))), repr(float(w))])
    return path
