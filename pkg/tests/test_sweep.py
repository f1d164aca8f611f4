import csv

import numpy as np
import pytest

from acoustic_qed.effective import dispersive_couplings
from acoustic_qed.presets import opposite_phase_phases
from acoustic_qed.sweep import SweepConfig, find_resonances, run_sweep, selectivity_metric

from conftest import GHZ


def config(spec, m_values, model="full", ratios=(0.92, 0.92), **kw):
    return SweepConfig(
        system=spec,
        ratios=ratios,
        phases=opposite_phase_phases(len(ratios)),
        m_values=m_values,
        t_end=kw.pop("t_end", 10e-9),
        sample_count=kw.pop("sample_count", 101),
        model=model,
        **kw,
    )


@pytest.fixture(scope="module")
def resonant_grid():
    from acoustic_qed.presets import diamond_spec

    spec = diamond_spec(2)
    M0 = dispersive_couplings(spec).effective_detuning(0, 1)
    return spec, M0 + np.arange(-3, 4) * 0.25 * GHZ


def test_config_validation(two_qubit_spec):
    with pytest.raises(ValueError):
        config(two_qubit_spec, [2 * GHZ, 1 * GHZ])
    with pytest.raises(ValueError):
        config(two_qubit_spec, [0.0, 1 * GHZ])
    with pytest.raises(ValueError):
        config(two_qubit_spec, [1 * GHZ], model="magic")
    with pytest.raises(ValueError):
        config(two_qubit_spec, [1 * GHZ], ratios=(0.9,))
    with pytest.raises(ValueError):
        config(two_qubit_spec, [1 * GHZ], excited_qubits=(2,))


def test_config_hash_is_stable(two_qubit_spec):
    a = config(two_qubit_spec, [1 * GHZ, 2 * GHZ])
    b = config(two_qubit_spec, [1 * GHZ, 2 * GHZ])
    c = config(two_qubit_spec, [1 * GHZ, 2.5 * GHZ])
    assert a.config_hash() == b.config_hash() != c.config_hash()


@pytest.mark.parametrize("model", ["full", "effective_secular"])
def test_resonance_found_at_detuning(resonant_grid, model):
    spec, grid = resonant_grid
    pmap = run_sweep(config(spec, grid, model), workers=1)
    assert pmap.populations.shape == (2, 7, 101)
    found = find_resonances(pmap, 0, 1)
    assert found == [pytest.approx(grid[3])]


def test_zero_drive_rows_identical(two_qubit_spec):
    pmap = run_sweep(config(two_qubit_spec, [2 * GHZ, 5 * GHZ, 9 * GHZ], ratios=(0.0, 0.0)), workers=1)
    for q in range(2):
        rows = pmap.qubit(q)
        assert np.abs(rows - rows[0]).max() < 1e-8
    assert pmap.max_over_time(1).max() < 0.01


def test_parallel_matches_serial_and_is_deterministic(resonant_grid):
    spec, grid = resonant_grid
    cfg = config(spec, grid[::2], "effective_timedep")
    serial = run_sweep(cfg, workers=1)
    parallel = run_sweep(cfg, workers=2)
    again = run_sweep(cfg, workers=1)
    assert np.array_equal(serial.populations, parallel.populations)
    assert serial.populations.tobytes() == again.populations.tobytes()
    assert serial.config_hash == parallel.config_hash


def test_secular_and_full_agree_on_resonance_location(three_qubit_spec):
    c = dispersive_couplings(three_qubit_spec)
    M13 = c.effective_detuning(0, 2)
    grid = M13 + np.arange(-2, 3) * 0.25 * GHZ
    found = {}
    for model in ("full", "effective_secular"):
        cfg = config(three_qubit_spec, grid, model, ratios=(0.92,) * 3)
        found[model] = find_resonances(run_sweep(cfg, workers=1), 0, 2)
    assert found["full"] == found["effective_secular"] == [pytest.approx(M13)]


def test_selectivity_metric_and_grid_lookup(three_qubit_spec):
    c = dispersive_couplings(three_qubit_spec)
    M12 = c.effective_detuning(0, 1)
    pmap = run_sweep(config(three_qubit_spec, [M12, 1.5 * M12], ratios=(0.92,) * 3, t_end=20e-9), workers=1)
    transfer, leakage = selectivity_metric(pmap, M12, (0, 1), 2)
    assert transfer > 0.5 and leakage < 0.1
    with pytest.raises(ValueError):
        pmap.grid_index(1.2 * M12)


def test_find_resonances_checks():
    from acoustic_qed.sweep import PopulationMap

    pmap = PopulationMap(np.array([1.0, 2.0, 3.0]), np.array([0.0, 1.0]),
                         np.array([[[1, 1]] * 3, [[0, 0.2], [0, 0.9], [0, 0.6]]]), "h", "full")
    assert find_resonances(pmap, 0, 1) == [2.0]
    assert find_resonances(pmap, 0, 1, threshold=0.95) == []
    with pytest.raises(ValueError):
        find_resonances(pmap, 1, 1)


def test_csv_layout(tmp_path, two_qubit_spec):
    pmap = run_sweep(config(two_qubit_spec, [2 * GHZ, 3 * GHZ], sample_count=5), workers=1)
    paths = pmap.write_csv(tmp_path)
    assert [p.name for p in paths] == ["qubit1_population.csv", "qubit2_population.csv"]
    rows = list(csv.reader(paths[0].open()))
    assert rows[0][0] == "M_GHz" and len(rows[0]) == 6
    assert float(rows[0][-1]) == pytest.approx(10.0)
    assert float(rows[2][0]) == pytest.approx(3.0)
    assert float(rows[1][1]) == pytest.approx(1.0)
