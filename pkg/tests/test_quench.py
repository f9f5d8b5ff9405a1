import numpy as np
import pytest

from pairquench import (
    IncompleteBandError,
    ModelParams,
    QuenchWorkspace,
    WavePacketSpec,
    band_scan,
    bound_state_realspace,
    energy_distribution,
    estimate_period,
    evolve,
    expectation,
    mean_distance,
    prepare_wavepacket,
    run_quench,
    solve_bound_states,
    sweep_transfer,
    transfer_rate,
)



@pytest.fixture(scope="module")
def small_workspace():
    params = ModelParams(15, kappa=1.0, u=-6.24, v=-6.24)
    packet = WavePacketSpec(center_momentum=-0.9 * np.pi, width=0.35, center_site=8)
    return QuenchWorkspace.prepare(params, packet)


def test_packet_is_normalized_bound_superposition(ref_psi0, ref_band, ref_basis):
    assert np.linalg.norm(ref_psi0) == pytest.approx(1.0, abs=1e-12)
    assert transfer_rate(ref_psi0, ref_band, ref_basis) == pytest.approx(1.0, abs=1e-6)


def test_packet_is_tightly_bound(ref_basis, ref_psi0):
    assert mean_distance(ref_basis, ref_psi0) < 1.0


def test_packet_sits_at_requested_site(ref_basis, ref_psi0):
    centers = np.array([(i + j) / 2 for (i, j) in ref_basis.pairs])
    weight = np.abs(ref_psi0) ** 2
    assert weight[np.abs(centers - 36) <= 12].sum() > 0.99


def test_packet_requires_complete_branch():
    band = band_scan(1.0, -5.0, 41)
    spec = WavePacketSpec(center_momentum=0.0, width=0.2, center_site=21)
    with pytest.raises(IncompleteBandError):
        prepare_wavepacket(spec, band)


def test_packet_spec_validation():
    with pytest.raises(ValueError):
        WavePacketSpec(center_momentum=4.0, width=0.2, center_site=5)
    with pytest.raises(ValueError):
        WavePacketSpec(center_momentum=0.0, width=-0.1, center_site=5)
    with pytest.raises(ValueError):
        WavePacketSpec(center_momentum=0.0, width=0.2, center_site=5, branch="top")


def test_workspace_requires_equal_interactions():
    with pytest.raises(ValueError):
        QuenchWorkspace.prepare(
            ModelParams(15, kappa=1.0, u=-6.24, v=-3.0),
            WavePacketSpec(center_momentum=0.0, width=0.2, center_site=8),
        )


def test_transfer_rate_of_single_bound_state(ref_band, ref_basis):
    state = solve_bound_states(2 * np.pi * 17 / 111, 1.0, -6.24)[1]
    psi = bound_state_realspace(state, 111, ref_basis)
    assert transfer_rate(psi, ref_band, ref_basis) == pytest.approx(1.0, abs=1e-6)


def test_transfer_rate_of_distant_unpaired_state(ref_band, ref_basis):
    psi = ref_basis.unit_state(1, 56)
    assert transfer_rate(psi, ref_band, ref_basis) < 1e-3


def test_trajectory_invariants(small_workspace):
    times = np.arange(0.0, 40.5, 0.5)
    traj = run_quench(small_workspace, -0.21, times, method="spectral")
    assert np.max(np.abs(traj.norm - 1.0)) < 1e-8
    assert np.max(np.abs(traj.total_energy - traj.total_energy[0])) < 1e-8
    assert np.all(traj.transfer >= 0.0) and np.all(traj.transfer <= 1.0 + 1e-8)
    assert np.all(traj.distance >= 0.0) and np.all(traj.distance <= 14.0)
    # the first sample reproduces the initial observables exactly
    ws = small_workspace
    assert traj.transfer[0] == pytest.approx(transfer_rate(ws.psi0, ws.band, ws.basis), abs=1e-12)
    assert traj.distance[0] == pytest.approx(mean_distance(ws.basis, ws.psi0), abs=1e-12)
    assert traj.energy[0] == pytest.approx(expectation(ws.h0, ws.psi0), abs=1e-10)


def test_backends_agree_on_small_quench(small_workspace):
    times = np.array([0.0, 7.0, 19.0])
    a = run_quench(small_workspace, -0.21, times, method="spectral")
    b = run_quench(small_workspace, -0.21, times, method="chebyshev")
    assert np.linalg.norm(a.final_state - b.final_state) < 1e-9


def test_energy_constant_after_field_release(small_workspace):
    times = np.arange(0.0, 30.0, 1.0)
    traj = run_quench(small_workspace, -0.21, times, method="spectral")
    released = evolve(
        small_workspace.h0,
        traj.final_state,
        np.arange(0.0, 20.0, 1.0),
        h0=small_workspace.h0,
        band=small_workspace.band,
        basis=small_workspace.basis,
        method="spectral",
    )
    assert np.max(np.abs(released.energy - released.energy[0])) < 1e-8


def test_evolve_validates_time_grid(small_workspace):
    ws = small_workspace
    h = ws.hamiltonian(-0.2)
    for bad in ([], [1.0, 2.0], [0.0, 2.0, 1.0]):
        with pytest.raises(ValueError):
            evolve(h, ws.psi0, bad, h0=ws.h0, band=ws.band, basis=ws.basis)


def test_energy_distribution_completeness(small_workspace):
    ws = small_workspace
    h = ws.hamiltonian(-0.2)
    energies, weights = energy_distribution(ws.psi0, h, mass=1.0)
    assert weights.sum() == pytest.approx(1.0, abs=1e-8)
    assert np.all(np.diff(energies) > 0)


def test_energy_distribution_minimal_set(small_workspace):
    ws = small_workspace
    h = ws.hamiltonian(-0.2)
    _, weights = energy_distribution(ws.psi0, h, mass=0.5)
    assert weights.sum() >= 0.5
    assert weights.sum() - weights.min() < 0.5
    with pytest.raises(ValueError):
        energy_distribution(ws.psi0, h, mass=0.0)


def test_estimate_period_synthetic_signal():
    step = 7.5e-5
    f_grid = -0.0995 + step * np.arange(61)
    series = np.sin(np.pi * f_grid / 0.0015) ** 2
    est = estimate_period(series, step)
    assert est.period == pytest.approx(0.0015, abs=step)
    assert est.uncertainty == step


def test_estimate_period_flat_series():
    est = estimate_period(np.ones(50), 0.1)
    assert est.period is None
    with pytest.raises(ValueError):
        estimate_period([1.0, 2.0], 0.1)


def test_small_sweep_is_deterministic_and_bounded(small_workspace):
    f_values = -0.20 + 0.01 * np.arange(5)
    serial = sweep_transfer(small_workspace, f_values, t_final=50.0, workers=1)
    parallel = sweep_transfer(small_workspace, f_values, t_final=50.0, workers=2)
    assert serial.failures == [] and parallel.failures == []
    assert np.array_equal(serial.transfer, parallel.transfer)
    assert np.all((serial.transfer >= 0.0) & (serial.transfer <= 1.0))
    assert serial.period.period is None  # five samples cannot support a peak
    with pytest.raises(ValueError):
        sweep_transfer(small_workspace, [0.0, -0.1], t_final=50.0)
    with pytest.raises(ValueError):
        sweep_transfer(small_workspace, f_values, t_final=-1.0)
