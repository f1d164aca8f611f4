"""Translate a target modulation ratio D/M into acoustic-wave requirements.

A plane wave u = A_0 exp(i k_m x) strains the host by eps ~ k_m A_0, which
shifts the qubit by D = eps * (deformation potential).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass

TWO_PI = 2 * math.pi
WAVELENGTH_SANITY_RANGE = (0.1e-6, 100e-6)


@dataclass(frozen=True)
class MaterialParams:
    """Strain response of the host.

    ``deformation_potential`` is stored as an angular rate per unit strain.
    Pass ``unit="cyclic"`` to give it in Hz per unit strain instead.
    """

    deformation_potential: float
    sound_speed: float
    unit: str = "angular"

    def __post_init__(self):
        if self.unit not in ("angular", "cyclic"):
            raise ValueError("unit must be 'angular' or 'cyclic'")
        if not (self.deformation_potential > 0 and self.sound_speed > 0):
            raise ValueError("deformation potential and sound speed must be > 0")
        if self.unit == "cyclic":
            object.__setattr__(self, "deformation_potential", TWO_PI * self.deformation_potential)
            object.__setattr__(self, "unit", "angular")


# c_m = 7e3 m/s; the ~1 PHz/strain deformation potential read as an angular rate
DIAMOND = MaterialParams(deformation_potential=1e15, sound_speed=7e3)


@dataclass(frozen=True)
class AcousticRequirement:
    wavenumber: float  # rad/m, k_m = M / c_m
    wavelength: float  # m
    displacement_amplitude: float  # m
    strain_amplitude: float
    modulation_amplitude: float  # rad/s
    spatial_frequency: float  # 1/m, the cyclic wavenumber 1/lambda

    def as_dict(self) -> dict:
        return asdict(self)


def acoustic_wave_requirements(material: MaterialParams, M: float, target_ratio: float) -> AcousticRequirement:
    if not M > 0:
        raise ValueError("drive frequency must be > 0")
    if not target_ratio > 0:
        raise ValueError("target ratio must be > 0")
    k = M / material.sound_speed
    wavelength = TWO_PI / k
    strain = target_ratio * M / material.deformation_potential
    amplitude = strain / k
    lo, hi = WAVELENGTH_SANITY_RANGE
    if not lo <= wavelength <= hi:
        warnings.warn(
            f"acoustic wavelength {wavelength:.3g} m is outside {lo:g}-{hi:g} m", stacklevel=2
        )
    return AcousticRequirement(
        wavenumber=k,
        wavelength=wavelength,
        displacement_amplitude=amplitude,
        strain_amplitude=strain,
        modulation_amplitude=strain * material.deformation_potential,
        spatial_frequency=1 / wavelength,
    )


def format_report(req: AcousticRequirement, M: float, target_ratio: float) -> str:
    lines = [
        f"drive frequency       M/2pi = {M / TWO_PI / 1e9:.4g} GHz",
        f"target ratio          D/M   = {target_ratio:.4g}",
        f"wavenumber (angular)  k_m   = {req.wavenumber * 1e-6:.4g} rad/um",
        f"wavenumber (cyclic)   1/lam = {req.spatial_frequency * 1e-6:.4g} 1/um",
        f"wavelength            lam   = {req.wavelength * 1e6:.4g} um",
        f"displacement          A_0   = {req.displacement_amplitude * 1e12:.4g} pm",
        f"strain amplitude      eps   = {req.strain_amplitude:.3e}",
        f"modulation amplitude  D/2pi = {req.modulation_amplitude / TWO_PI / 1e9:.4g} GHz",
    ]
    return "\n".join(lines)
