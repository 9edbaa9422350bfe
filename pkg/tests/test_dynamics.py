"""Evolution, dephasing, time averages, speeds and rates."""

import numpy as np
import pytest

from purestat import (
    DensityMatrix,
    Hamiltonian,
    PureState,
    Trajectory,
    compose_hamiltonian,
    dagger,
    default_horizon,
    dephase,
    empirical_time_average,
    evolve,
    finite_difference_purity_rate,
    finite_difference_speed,
    mutual_information,
    pointer_hamiltonian,
    purity,
    purity_rate,
    sample_haar_state,
    sample_product_state,
    sample_random_hamiltonian,
    subsystem_speed,
    trace_distance,
    trial_stream,
    von_neumann_entropy,
)


def _rand_herm(d, rng):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (z + dagger(z)) / 2


@pytest.fixture(scope="module")
def h8():
    return sample_random_hamiltonian(None, (8, 1), trial_stream(100, 0))


def test_evolve_at_zero_is_identity(h8):
    psi = sample_haar_state(np.eye(8), trial_stream(100, 1))
    out = evolve(psi, h8, 0.0)
    assert np.abs(out.vector - psi.vector).max() < 1e-12


def test_evolve_eigenstate_stationary(h8):
    ek = PureState(h8.eigenbasis[:, 3])
    out = evolve(ek, h8, 7.7)
    assert np.abs(np.outer(out.vector, out.vector.conj())
                  - np.outer(ek.vector, ek.vector.conj())).max() < 1e-10


def test_evolve_two_level_hand_case():
    h = Hamiltonian(np.array([0.0, 1.0]), np.eye(2, dtype=complex))
    plus = PureState(np.array([1.0, 1.0]) / np.sqrt(2))
    out = evolve(plus, h, np.pi)
    minus = np.array([1.0, -1.0]) / np.sqrt(2)
    assert np.abs(np.outer(out.vector, out.vector.conj())
                  - np.outer(minus, minus)).max() < 1e-12


def test_evolve_conserves_energy_and_purity(h8):
    rng = trial_stream(100, 2)
    g = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    rho = DensityMatrix((g @ dagger(g)) / np.trace(g @ dagger(g)).real)
    hm = h8.matrix()
    e0, p0 = np.trace(hm @ rho.matrix).real, purity(rho)
    for t in np.linspace(0.0, 30.0, 7)[1:]:
        rt = evolve(rho, h8, t)
        assert np.trace(hm @ rt.matrix).real == pytest.approx(e0, abs=1e-9)
        assert purity(rt) == pytest.approx(p0, abs=1e-9)


def test_evolve_dimension_mismatch(h8):
    with pytest.raises(ValueError):
        evolve(PureState(np.array([1.0, 0.0])), h8, 1.0)


def test_dephase_diagonal_unchanged(h8):
    w = np.linspace(0.05, 0.3, 8); w /= w.sum()
    rho = DensityMatrix((h8.eigenbasis * w) @ dagger(h8.eigenbasis))
    out = dephase(rho, h8)
    assert np.abs(out.matrix - rho.matrix).max() < 1e-12


def test_dephase_two_superposition(h8):
    psi = PureState((h8.eigenbasis[:, 0] + h8.eigenbasis[:, 5]) / np.sqrt(2))
    out = dephase(psi.density(), h8)
    expected = 0.5 * (np.outer(h8.eigenbasis[:, 0], h8.eigenbasis[:, 0].conj())
                      + np.outer(h8.eigenbasis[:, 5], h8.eigenbasis[:, 5].conj()))
    assert np.abs(out.matrix - expected).max() < 1e-12


def test_dephase_idempotent_trace_preserving_commutes(h8):
    psi = sample_haar_state(np.eye(8), trial_stream(100, 3))
    om = dephase(psi.density(), h8)
    assert abs(np.trace(om.matrix).real - 1.0) < 1e-12
    again = dephase(om, h8)
    assert np.abs(again.matrix - om.matrix).max() < 1e-12
    hm = h8.matrix()
    assert np.abs(om.matrix @ hm - hm @ om.matrix).max() < 1e-10


def test_dephase_observable_norm_contraction(h8):
    rng = trial_stream(100, 4)
    b = _rand_herm(8, rng)
    db = dephase(b, h8)
    assert np.abs(np.linalg.eigvalsh(db)).max() <= np.abs(np.linalg.eigvalsh(b)).max() + 1e-12


def test_dephase_resonant_requires_cluster_mode():
    h = Hamiltonian(np.array([0.0, 1.0, 2.0]), np.eye(3, dtype=complex))
    rho = DensityMatrix(np.ones((3, 3)) / 3)
    with pytest.raises(ValueError):
        dephase(rho, h)
    out = dephase(rho, h, mode="clusters")  # non-degenerate spectrum: same as strict
    assert np.abs(out.matrix - np.eye(3) / 3).max() < 1e-12


def test_dephase_degenerate_clusters():
    h = Hamiltonian(np.array([0.0, 0.0, 1.0]), np.eye(3, dtype=complex))
    rho = DensityMatrix(np.ones((3, 3)) / 3)
    out = dephase(rho, h, mode="clusters")
    expected = np.array([[1, 1, 0], [1, 1, 0], [0, 0, 1]]) / 3.0
    assert np.abs(out.matrix - expected).max() < 1e-12


def test_dephase_matches_long_time_average():
    # time-integration oracle: sampled average approaches the dephased state
    # (at n = 1e4 samples the Monte Carlo noise floor sits just below 0.02)
    rng = trial_stream(102, 0)
    h = sample_random_hamiltonian(None, (32, 1), rng)
    psi = sample_haar_state(np.eye(32), rng)
    report = empirical_time_average(h, psi, default_horizon(h), 10_000, rng)
    assert report.discrepancy <= 0.02


def test_dephase_matches_exact_time_integral():
    # quadrature oracle: (1/T) int_0^T rho_t dt in closed form per matrix entry
    rng = trial_stream(101, 0)
    h = sample_random_hamiltonian(None, (32, 1), rng)
    psi = sample_haar_state(np.eye(32), rng)
    c = h.to_eigenbasis(psi.vector)
    horizon = default_horizon(h)
    om = h.eigenvalues[:, None] - h.eigenvalues[None, :]
    kernel = np.ones_like(om, dtype=complex)
    off = om != 0
    kernel[off] = (np.exp(-1j * om[off] * horizon) - 1) / (-1j * om[off] * horizon)
    avg_eig = np.outer(c, c.conj()) * kernel
    avg = h.from_eigenbasis(avg_eig)
    omega = dephase(psi.density(), h)
    assert trace_distance(avg, omega.matrix) <= 1e-3


def test_time_average_discrepancy_shrinks_with_horizon():
    rng = trial_stream(101, 1)
    h = sample_random_hamiltonian(None, (16, 1), rng)
    psi = sample_haar_state(np.eye(16), rng)
    short = empirical_time_average(h, psi, 5.0, 4000, trial_stream(101, 2))
    longr = empirical_time_average(h, psi, default_horizon(h), 4000, trial_stream(101, 3))
    assert longr.discrepancy < short.discrepancy


def test_time_average_stationary_state():
    rng = trial_stream(101, 4)
    h = sample_random_hamiltonian(None, (8, 1), rng)
    ek = PureState(h.eigenbasis[:, 2])
    report = empirical_time_average(h, ek, 100.0, 64, rng)
    assert report.discrepancy <= 1e-9


def test_time_average_identity_functional():
    rng = trial_stream(101, 5)
    h = sample_random_hamiltonian(None, (8, 1), rng)
    psi = sample_haar_state(np.eye(8), rng)
    stats = empirical_time_average(h, psi, 50.0, 128, rng,
                                   functional=lambda s: float(np.vdot(
                                       s.vector, s.vector).real))
    assert stats.mean == pytest.approx(1.0, abs=1e-10)
    assert stats.variance == pytest.approx(0.0, abs=1e-12)


def test_time_average_reduced_report():
    rng = trial_stream(101, 6)
    h = sample_random_hamiltonian(None, (2, 8), rng)
    psi = sample_haar_state(np.eye(16), rng, dims=(2, 8))
    report = empirical_time_average(h, psi, default_horizon(h), 3000, rng, reduce="S")
    assert report.dephased.dim == 2
    assert report.discrepancy < 0.1


def test_trajectory_type():
    times = np.array([0.0, 1.0, 2.0])
    states = [DensityMatrix(np.eye(2) / 2) for _ in times]
    tr = Trajectory(times, states)
    vals = tr.functional_values(purity)
    assert np.allclose(vals, 0.5)
    with pytest.raises(ValueError):
        Trajectory(np.array([0.0, 0.0, 1.0]), states)


def test_subsystem_speed_stationary_is_zero():
    rng = trial_stream(102, 0)
    h_s, h_b = _rand_herm(2, rng), _rand_herm(8, rng)
    parts = compose_hamiltonian(h_s, h_b, _rand_herm(16, rng) * 0.3)
    h = parts.assembled
    w = np.linspace(0.01, 0.1, 16); w /= w.sum()
    stationary = DensityMatrix((h.eigenbasis * w) @ dagger(h.eigenbasis), dims=(2, 8))
    assert subsystem_speed(stationary, parts) == pytest.approx(0.0, abs=1e-10)


def test_subsystem_speed_no_interaction():
    rng = trial_stream(102, 1)
    h_s, h_b = _rand_herm(2, rng), _rand_herm(8, rng)
    parts = compose_hamiltonian(h_s, h_b)
    psi = sample_haar_state(np.eye(16), rng, dims=(2, 8))
    rho_s = psi.reduced("S").matrix
    expected = 0.5 * np.abs(np.linalg.eigvalsh(
        1j * (rho_s @ parts.h_s - parts.h_s @ rho_s))).sum()
    assert subsystem_speed(psi.density(), parts) == pytest.approx(expected, abs=1e-12)


def test_subsystem_speed_matches_finite_difference():
    rng = trial_stream(102, 2)
    parts = compose_hamiltonian(_rand_herm(2, rng), _rand_herm(8, rng),
                                _rand_herm(16, rng) * 0.4)
    h = parts.assembled
    psi = sample_product_state(np.eye(2), np.eye(8), rng)
    for t in (0.4, 1.9, 6.3):
        state = evolve(psi, h, t).density()
        state.dims = (2, 8)
        analytic = subsystem_speed(state, parts)
        fd = finite_difference_speed(h, psi, t)
        assert abs(fd - analytic) / analytic < 1e-4


def test_purity_rate_product_state_is_zero():
    rng = trial_stream(102, 3)
    parts = compose_hamiltonian(_rand_herm(2, rng), _rand_herm(8, rng),
                                _rand_herm(16, rng) * 0.4)
    psi = sample_product_state(np.eye(2), np.eye(8), rng)
    assert purity_rate(psi.density(), parts) == pytest.approx(0.0, abs=1e-10)


def test_purity_rate_no_interaction_is_zero():
    rng = trial_stream(102, 4)
    parts = compose_hamiltonian(_rand_herm(2, rng), _rand_herm(8, rng))
    psi = sample_haar_state(np.eye(16), rng, dims=(2, 8))
    assert purity_rate(psi.density(), parts) == pytest.approx(0.0, abs=1e-12)


def test_purity_rate_matches_finite_difference():
    rng = trial_stream(102, 5)
    parts = compose_hamiltonian(_rand_herm(2, rng), _rand_herm(8, rng),
                                _rand_herm(16, rng) * 0.4)
    h = parts.assembled
    psi = sample_product_state(np.eye(2), np.eye(8), rng)
    scale = 2 * np.abs(np.linalg.eigvalsh(parts.h_sb)).max()
    for t in (0.4, 1.9, 6.3):
        state = evolve(psi, h, t).density()
        state.dims = (2, 8)
        analytic = purity_rate(state, parts)
        fd = finite_difference_purity_rate(h, psi, t)
        assert abs(fd - analytic) / max(abs(analytic), 1e-3 * scale) < 1e-4


def test_global_speed_bounded_in_energy_window():
    # v(t) <= Delta_E for states populating a window of width Delta_E
    rng = trial_stream(102, 6)
    h = sample_random_hamiltonian(None, (16, 1), rng)
    band = np.arange(4, 12)
    delta_e = h.eigenvalues[11] - h.eigenvalues[4]
    a = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    a /= np.linalg.norm(a)
    e_band = h.eigenvalues[band]
    for t in np.linspace(0, 40, 9):
        ct = a * np.exp(-1j * e_band * t)
        m = 1j * (e_band[:, None] - e_band[None, :]) * np.outer(ct, ct.conj())
        v = 0.5 * np.abs(np.linalg.eigvalsh(m)).sum()
        assert v <= delta_e + 1e-12


def test_pointer_hamiltonian_evolution():
    rng = trial_stream(103, 0)
    blocks = [_rand_herm(16, rng) for _ in range(2)]
    parts = pointer_hamiltonian(2, blocks)
    h = parts.assembled
    psi_s = np.array([1.0, 1.0]) / np.sqrt(2)
    psi_b = sample_haar_state(np.eye(16), rng).vector
    psi0 = PureState(np.kron(psi_s, psi_b), dims=(2, 16))
    rho0_s = psi0.reduced("S").matrix
    for t in np.linspace(0.0, 50.0, 11)[1:]:
        out = evolve(psi0, h, t)
        rho_s = out.reduced("S").matrix
        assert np.abs(np.diag(rho_s) - np.diag(rho0_s)).max() <= 1e-10
        # off-diagonal equals the bath-overlap suppression factor
        e0, v0 = np.linalg.eigh(blocks[0])
        e1, v1 = np.linalg.eigh(blocks[1])
        u0 = (v0 * np.exp(-1j * e0 * t)) @ dagger(v0)
        u1 = (v1 * np.exp(-1j * e1 * t)) @ dagger(v1)
        factor = psi_b.conj() @ (dagger(u1) @ u0 @ psi_b)
        assert abs(rho_s[0, 1] - rho0_s[0, 1] * factor) < 1e-9


def test_pointer_equal_blocks_freeze_state():
    rng = trial_stream(103, 1)
    block = _rand_herm(8, rng)
    parts = pointer_hamiltonian(2, [block, block])
    h = parts.assembled
    psi0 = sample_product_state(np.eye(2), np.eye(8), rng)
    rho0_s = psi0.reduced("S").matrix
    for t in (3.0, 11.0):
        rho_s = evolve(psi0, h, t).reduced("S").matrix
        assert np.abs(rho_s - rho0_s).max() < 1e-10


def test_purity_rate_instant_bound_pointwise():
    # |dp/dt| <= 2 p sqrt(2 I_SB) |H_SB| along a generic trajectory
    rng = trial_stream(103, 2)
    parts = compose_hamiltonian(_rand_herm(2, rng), _rand_herm(16, rng),
                                _rand_herm(32, rng) * 0.5)
    h = parts.assembled
    norm_hsb = np.abs(np.linalg.eigvalsh(parts.h_sb)).max()
    psi0 = sample_product_state(np.eye(2), np.eye(16), rng)
    for t in np.linspace(0.2, 30.0, 25):
        state = evolve(psi0, h, t).density()
        state.dims = (2, 16)
        rate = purity_rate(state, parts)
        p_s = purity(state.reduced("S"))
        i_sb = mutual_information(state)
        assert abs(rate) <= 2 * p_s * np.sqrt(2 * i_sb) * norm_hsb + 1e-9
        # pure global state: the entropy form coincides
        s_s = von_neumann_entropy(state.reduced("S"))
        assert abs(rate) <= 4 * p_s * np.sqrt(s_s) * norm_hsb + 1e-9
