import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from acoustic_qed.effective import (
    DispersiveCouplings,
    TruncationError,
    dispersive_couplings,
    dispersive_transform_residual,
    effective_hamiltonian,
    evolve_effective,
    graf_params,
    optimal_drive_amplitude,
    secular_coupling,
)
from acoustic_qed.hamiltonian import DriveParams, h_static
from acoustic_qed.presets import diamond_spec, opposite_phase_drive
from acoustic_qed.quantum_core import SystemSpec, build_space, qubit_register_state

from conftest import GHZ, MHZ, TWO_PI
from oracles import bessel_quadrature

J1_AT_MAX = 0.5818652242276431  # J_1(1.8412), quadrature oracle
J12_DIAMOND = TWO_PI * 98.828125e6  # 25 * 506 / (2 * 250 * 256) GHz


def test_dispersive_values(two_qubit_spec):
    c = dispersive_couplings(two_qubit_spec)
    assert c.J[0, 0] == pytest.approx(TWO_PI * 100e6, rel=1e-12)
    assert c.J[0, 1] == pytest.approx(J12_DIAMOND, rel=1e-12)
    assert c.J[1, 1] == pytest.approx(TWO_PI * 97.65625e6, rel=1e-12)
    assert c.J[0, 1] == c.J[1, 0]


def test_degenerate_qubits_share_one_coupling():
    s = SystemSpec([0.0, 0.0, 0.0], 100.0, 1.0)
    c = dispersive_couplings(s)
    assert np.all(c.J == 0.01)


@pytest.mark.filterwarnings("ignore::acoustic_qed.quantum_core.DispersiveRegimeWarning")
def test_vanishing_detuning_rejected():
    s = SystemSpec([5.0], -5.0, 0.01)
    with pytest.raises(ValueError):
        dispersive_couplings(s)


def test_effective_detunings(two_qubit_spec):
    c = dispersive_couplings(two_qubit_spec)
    expected = 6 * GHZ + c.J[1, 1] - c.J[0, 0]
    assert c.effective_detuning(0, 1) == pytest.approx(expected)
    assert c.effective_detunings[1, 0] == pytest.approx(-expected)


def test_effective_hamiltonian_block(two_qubit_spec):
    c = dispersive_couplings(two_qubit_spec)
    H = effective_hamiltonian(c, two_qubit_spec).data
    # register order (q0, q1): |e g> = index 2, |g e> = index 1
    block = H[np.ix_([2, 1], [2, 1])]
    expected = [[c.J[0, 0], c.J[0, 1]], [c.J[0, 1], 6 * GHZ + c.J[1, 1]]]
    assert np.allclose(block, expected, rtol=1e-14)
    _, vecs = np.linalg.eigh(block)
    assert np.abs(vecs[0, 0]) ** 2 > 0.999


def test_degenerate_splitting_is_twice_J():
    c = DispersiveCouplings(np.array([[1.0, 0.3], [0.3, 1.0]]), np.zeros(2))
    H = effective_hamiltonian(c).data
    ev = np.linalg.eigvalsh(H[np.ix_([2, 1], [2, 1])])
    assert ev[1] - ev[0] == pytest.approx(0.6)


def test_dispersive_consistency_with_full_hamiltonian(two_qubit_spec):
    s = two_qubit_spec
    layout = build_space(s)
    H = h_static(s, layout).data
    one = np.flatnonzero(layout.excitation_numbers() == 1)
    full = np.linalg.eigvalsh(H[np.ix_(one, one)])
    qubit_like = np.sort(full)[-2:]  # the cavity-like level sits near -Delta
    c = dispersive_couplings(s)
    Heff = effective_hamiltonian(c, s).data
    eff = np.linalg.eigvalsh(Heff[np.ix_([2, 1], [2, 1])])
    bound = (s.coupling_g / s.cavity_detuning) ** 2 * s.coupling_g
    assert np.abs(qubit_like - eff).max() < bound


def test_transform_residual_zero_without_coupling():
    s = SystemSpec([0.0, 6 * GHZ], 250 * GHZ, 0.0)
    assert dispersive_transform_residual(s) == 0.0


def test_transform_residual_small(two_qubit_spec):
    r = dispersive_transform_residual(two_qubit_spec)
    g = two_qubit_spec.coupling_g
    assert r < 1e-3 * g


def test_transform_residual_is_fourth_order(two_qubit_spec):
    r1 = dispersive_transform_residual(two_qubit_spec)
    r2 = dispersive_transform_residual(two_qubit_spec.replace(coupling_g=two_qubit_spec.coupling_g / 2))
    # the odd-order terms of the expansion leave the zero-photon block, so the
    # leading surviving error is g^4 / Delta^3
    assert r1 / r2 == pytest.approx(16, rel=0.05)


def test_graf_params_examples():
    assert graf_params(2.0, 2.0, 1.0, math.pi) == pytest.approx((4.0, 0.0), abs=1e-12)
    assert graf_params(2.0, 2.0, 1.0, 0.0) == (0.0, 0.0)
    assert graf_params(1.5, 0.0, 1.0, 0.7) == pytest.approx((1.5, 0.0))


def test_graf_identity_random_tuples():
    rng = np.random.default_rng(2024)
    M = 6 * GHZ
    for _ in range(200):
        D1, D2 = rng.uniform(0, 3, 2) * M
        dphi = rng.uniform(0, math.pi)
        N = int(rng.integers(1, 6))
        drive = DriveParams(M, [D1, D2], [rng.uniform(-math.pi, math.pi), 0.0])
        drive = DriveParams(M, [D1, D2], [drive.phases[0], drive.phases[0] - dphi])
        a = secular_coupling(J12_DIAMOND, drive, order=N).G
        b = secular_coupling(J12_DIAMOND, drive, order=N, mode="closed_form").G
        assert abs(a - b) < 1e-10 * J12_DIAMOND


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 3), st.floats(0, 3), st.floats(math.pi, 2 * math.pi), st.integers(1, 5))
def test_graf_identity_beyond_pi(r1, r2, dphi, N):
    drive = DriveParams(1.0, [r1, r2], [dphi, 0.0])
    a = secular_coupling(1.0, drive, order=N).G
    b = secular_coupling(1.0, drive, order=N, mode="closed_form").G
    assert abs(a - b) < 1e-10


def test_secular_examples():
    M = 6 * GHZ
    same = DriveParams.from_ratios(M, [0.92, 0.92], [0.4, 0.4])
    for N in (1, 2, 3):
        assert abs(secular_coupling(J12_DIAMOND, same, order=N).G) < 1e-14 * J12_DIAMOND
    opt = DriveParams.from_ratios(M, [0.9206, 0.9206], [0.0, math.pi])
    G = secular_coupling(J12_DIAMOND, opt).G
    assert abs(G) == pytest.approx(J1_AT_MAX * J12_DIAMOND, rel=1e-5)
    single = DriveParams.from_ratios(M, [1.3, 0.0], [0.25, 0.0])
    G = secular_coupling(J12_DIAMOND, single).G
    expected = J12_DIAMOND * np.exp(0.25j) * bessel_quadrature(1, 1.3)
    assert G == pytest.approx(expected, rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(0, 3), st.floats(0, 3), st.floats(-3, 3), st.floats(-3, 3), st.integers(1, 3))
def test_global_phase_invariance_and_bound(r1, r2, p, c, N):
    a = DriveParams(1.0, [r1, r2], [p, 0.0])
    b = DriveParams(1.0, [r1, r2], [p + c, c])
    Ga = secular_coupling(1.0, a, order=N)
    Gb = secular_coupling(1.0, b, order=N)
    assert Gb.magnitude == pytest.approx(Ga.magnitude, abs=1e-12)
    assert Ga.magnitude <= 1 + 1e-12


def test_optimum_is_most_efficient():
    def G(r):
        return secular_coupling(1.0, DriveParams.from_ratios(1.0, [r, r], [0, math.pi])).magnitude

    assert G(0.92) > G(0.3) and G(0.92) > G(2.0)


def test_secular_argument_checks():
    d = DriveParams.from_ratios(1.0, [1.0, 1.0], [0, 1.0])
    with pytest.raises(ValueError):
        secular_coupling(1.0, d, order=0)
    with pytest.raises(ValueError):
        secular_coupling(1.0, d, mode="other")
    with pytest.raises(TruncationError):
        secular_coupling(1.0, DriveParams.from_ratios(1.0, [170.0, 0.0]), order=1)


@pytest.mark.parametrize("N, expected", [(1, 0.9205919), (2, 1.5271185), (3, 2.1005945)])
def test_optimal_drive_amplitude(N, expected):
    assert optimal_drive_amplitude(N) == pytest.approx(expected, abs=1e-6)


def test_secular_rabi_is_analytic(two_qubit_spec):
    c = dispersive_couplings(two_qubit_spec)
    M = c.effective_detuning(0, 1)
    drive = opposite_phase_drive(2, M)
    G = secular_coupling(c.J[0, 1], drive).magnitude
    traj = evolve_effective(c, drive, qubit_register_state(2, {0}), 10e-9, 201, mode="secular")
    assert np.allclose(traj.population(1), np.sin(G * traj.times) ** 2, atol=1e-7)
    t_max, _ = traj.first_maximum(1)
    assert t_max == pytest.approx(math.pi / (2 * G), abs=traj.times[1])
    assert math.pi / (2 * G) == pytest.approx(4.3475e-9, rel=1e-3)


def test_timedep_and_secular_agree(two_qubit_spec):
    c = dispersive_couplings(two_qubit_spec)
    M = c.effective_detuning(0, 1)
    drive = opposite_phase_drive(2, M)
    rho0 = qubit_register_state(2, {0})
    sec = evolve_effective(c, drive, rho0, 20e-9, 401, mode="secular")
    td = evolve_effective(c, drive, rho0, 20e-9, 401, mode="timedep")
    assert np.abs(sec.population(1) - td.population(1)).max() < 0.05
    assert td.max_trace_error() < 1e-8


def test_secular_three_qubit_bystander(three_qubit_spec):
    c = dispersive_couplings(three_qubit_spec)
    drive = opposite_phase_drive(3, c.effective_detuning(0, 1))
    traj = evolve_effective(c, drive, qubit_register_state(3, {0}), 20e-9, 201, mode="secular")
    assert traj.population(2).max() < 0.1
    assert traj.population(1).max() > 0.9
