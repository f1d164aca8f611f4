"""Simulation and analysis of acoustically switched, cavity-mediated qubit coupling."""

__version__ = "0.1.0"

from .drive_design import AcousticRequirement, MaterialParams, acoustic_wave_requirements
from .effective import (
    DispersiveCouplings,
    SecularCoupling,
    dispersive_couplings,
    dispersive_transform_residual,
    effective_hamiltonian,
    evolve_effective,
    graf_params,
    optimal_drive_amplitude,
    secular_coupling,
)
from .bessel import bessel_j
from .hamiltonian import DriveParams, h_at, h_static, modulated_frequency
from .integrate import IntegrationError, Tolerances
from .lindblad import CollapseChannel, Trajectory, channels_from_spec, evolve, liouvillian_apply
from .quantum_core import (
    DensityMatrix,
    OperatorMatrix,
    SpaceLayout,
    SystemSpec,
    build_space,
    expectation,
    initial_state,
    lowering_operator,
)
from .spectrum import SidebandComb, render_spectrum, sideband_comb
from .sweep import PopulationMap, SweepConfig, find_resonances, run_sweep, selectivity_metric
