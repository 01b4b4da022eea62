"""Spectral propagation, the series oracle, observables, and trajectory output."""

import math

import numpy as np
import pytest

from blochqst.analytic import free_propagator_element, tilt_parameters
from blochqst.bessel import bessel_jn
from blochqst.chain import ChainSpec, LatticeState, build_free_hamiltonian, build_tilted_hamiltonian
from blochqst.evolution import (
    Trajectory,
    eigendecompose,
    energy_expectation,
    evolve,
    evolve_oracle,
    mean_position,
    position_variance,
    probability_profile,
    trajectory,
    write_mean_position_csv,
    write_trajectory_csv,
)
from blochqst.transfer import (
    TruncatedGaussianSpec,
    gaussian_state,
    sharp_state,
    truncated_gaussian,
)


def _sharp(chain: ChainSpec, site: int) -> LatticeState:
    amps = np.zeros(chain.n_sites, dtype=complex)
    amps[site - chain.left] = 1.0
    return LatticeState(amps, chain.left)


def test_eigendecompose_two_site_chain():
    chain = ChainSpec(coupling=1.0, force=0.0, left=0, right=1, target=0)
    decomp = eigendecompose(build_free_hamiltonian(chain))
    np.testing.assert_allclose(decomp.eigenvalues, [-0.25, 0.25], atol=1e-15)
    # symmetric/antisymmetric combinations
    np.testing.assert_allclose(np.abs(decomp.eigenvectors), 1 / math.sqrt(2), atol=1e-14)


def test_eigendecompose_open_chain_closed_form():
    # untilted open chain: eigenvalues -(coupling/2) cos(k pi / (c + 1))
    chain = ChainSpec(coupling=2.0, force=0.0, left=0, right=8, target=0)
    decomp = eigendecompose(build_free_hamiltonian(chain))
    c = chain.n_sites
    expected = np.sort(-1.0 * np.cos(np.arange(1, c + 1) * math.pi / (c + 1)))
    np.testing.assert_allclose(decomp.eigenvalues, expected, atol=1e-12)


def test_eigendecompose_strong_tilt_is_stark_ladder():
    # weak hopping against a strong tilt: spectrum collapses onto F*d*n
    chain = ChainSpec(coupling=0.01, force=1.0, left=-8, right=8, target=0)
    decomp = eigendecompose(build_tilted_hamiltonian(chain))
    np.testing.assert_allclose(decomp.eigenvalues, np.arange(-8, 9, dtype=float), atol=1e-4)


def test_eigendecompose_reconstructs_hamiltonian():
    chain = ChainSpec(coupling=1.3, force=0.02, left=-10, right=10, target=0)
    h = build_tilted_hamiltonian(chain)
    decomp = eigendecompose(h)
    v = decomp.eigenvectors
    np.testing.assert_allclose(v.T @ v, np.eye(chain.n_sites), atol=1e-10)
    np.testing.assert_allclose(v @ np.diag(decomp.eigenvalues) @ v.T, h.dense(), atol=1e-10)


def test_eigendecompose_sign_convention_deterministic():
    chain = ChainSpec(coupling=1.0, force=-0.05, left=-12, right=12, target=0)
    h = build_tilted_hamiltonian(chain)
    a = eigendecompose(h).eigenvectors
    b = eigendecompose(h).eigenvectors
    np.testing.assert_array_equal(a, b)
    for col in a.T:
        assert col[np.argmax(np.abs(col))] > 0


def test_evolve_identity_at_t_zero():
    chain = ChainSpec(coupling=1.0, force=0.0, left=-5, right=5, target=0)
    state = _sharp(chain, 0)
    out = evolve(state, build_free_hamiltonian(chain), 0.0)
    # V exp(0) V^T is the identity only up to eigensolver round-off
    np.testing.assert_allclose(out.amplitudes, state.amplitudes, atol=1e-12)
    assert out.site_offset == state.site_offset


def test_evolve_eigenvector_acquires_only_phase():
    chain = ChainSpec(coupling=1.0, force=-0.1, left=-6, right=6, target=0)
    h = build_tilted_hamiltonian(chain)
    decomp = eigendecompose(h)
    k = 4
    state = LatticeState(decomp.eigenvectors[:, k].astype(complex), chain.left)
    out = evolve(state, h, 3.7)
    expected = state.amplitudes * np.exp(-1j * decomp.eigenvalues[k] * 3.7)
    np.testing.assert_allclose(out.amplitudes, expected, atol=1e-12)


def test_evolve_preserves_norm():
    chain = ChainSpec(coupling=1.0, force=-0.025, left=-20, right=60, target=40)
    state = truncated_gaussian(TruncatedGaussianSpec(beta=0.01, delta=16), chain)
    h = build_tilted_hamiltonian(chain)
    for t in (0.1, 17.0, 40 * math.pi, 160 * math.pi):
        out = evolve(state, h, t)
        assert np.linalg.norm(out.amplitudes) == pytest.approx(1.0, abs=1e-12)


def test_evolve_rejects_bad_inputs():
    chain = ChainSpec(coupling=1.0, force=0.0, left=-5, right=5, target=0)
    other = ChainSpec(coupling=1.0, force=0.0, left=-3, right=3, target=0)
    state = _sharp(chain, 0)
    with pytest.raises(ValueError):
        evolve(state, build_free_hamiltonian(other), 1.0)
    with pytest.raises(ValueError):
        evolve(state, build_free_hamiltonian(chain), -1.0)


def test_evolve_matches_free_propagator():
    chain = ChainSpec(coupling=1.0, force=0.0, left=-80, right=80, target=0)
    state = _sharp(chain, 0)
    out = evolve(state, build_free_hamiltonian(chain), 20.0)
    for n in range(-25, 26):
        expected = free_propagator_element(n, 0, 20.0, 1.0)
        assert out.amplitudes[n - chain.left] == pytest.approx(expected, abs=1e-8)


def test_oracle_identity_and_norm():
    chain = ChainSpec(coupling=1.0, force=-0.05, left=-30, right=30, target=0)
    h = build_tilted_hamiltonian(chain)
    state = _sharp(chain, 0)
    out0 = evolve_oracle(state, h, 0.0)
    np.testing.assert_allclose(out0.amplitudes, state.amplitudes, atol=1e-15)
    period = tilt_parameters(chain).bloch_period
    out = evolve_oracle(state, h, period)
    assert np.linalg.norm(out.amplitudes) == pytest.approx(1.0, abs=1e-12)


def test_oracle_agrees_with_spectral_route():
    # independent scaled series vs eigenbasis exponential on random tilted chains
    rng = np.random.default_rng(20240307)
    for _ in range(5):
        half = int(rng.integers(16, 33))
        chain = ChainSpec(
            coupling=1.0,
            force=float(rng.choice([-1, 1]) / rng.integers(16, 65)),
            left=-half,
            right=half,
            target=0,
        )
        h = build_tilted_hamiltonian(chain)
        amps = rng.normal(size=chain.n_sites) + 1j * rng.normal(size=chain.n_sites)
        state = LatticeState(amps / np.linalg.norm(amps), chain.left)
        t = float(rng.uniform(0.0, 2.0)) * tilt_parameters(chain).bloch_period
        a = evolve(state, h, t)
        b = evolve_oracle(state, h, t)
        assert np.max(np.abs(a.amplitudes - b.amplitudes)) < 1e-9


def test_energy_is_conserved():
    chain = ChainSpec(coupling=1.0, force=-0.025, left=-20, right=60, target=40)
    h = build_tilted_hamiltonian(chain)
    state = truncated_gaussian(TruncatedGaussianSpec(beta=0.01, delta=10), chain)
    e0 = energy_expectation(state, h)
    for t in (1.0, 30.0, 40 * math.pi):
        assert energy_expectation(evolve(state, h, t), h) == pytest.approx(e0, abs=1e-10)


def test_probability_profile_and_moments():
    chain = ChainSpec(coupling=1.0, force=0.0, left=-2, right=2, target=0)
    amps = np.zeros(5, dtype=complex)
    amps[1] = amps[3] = 1 / math.sqrt(2)  # sites -1 and +1
    state = LatticeState(amps, chain.left)
    profile = probability_profile(state)
    np.testing.assert_allclose(profile, [0, 0.5, 0, 0.5, 0], atol=1e-15)
    assert mean_position(state) == pytest.approx(0.0, abs=1e-15)
    assert position_variance(state) == pytest.approx(1.0, abs=1e-14)


def test_trajectory_matches_pointwise_evolution():
    chain = ChainSpec(coupling=1.0, force=-0.05, left=-15, right=25, target=10)
    h = build_tilted_hamiltonian(chain)
    state = truncated_gaussian(TruncatedGaussianSpec(beta=0.05, delta=4), chain)
    times = np.linspace(0.0, 30.0, 7)
    traj = trajectory(state, h, times)
    assert traj.profiles.shape == (7, chain.n_sites)
    np.testing.assert_array_equal(traj.sites, chain.sites)
    for i, t in enumerate(times):
        out = evolve(state, h, float(t))
        np.testing.assert_allclose(traj.profiles[i], probability_profile(out), atol=1e-12)
        assert traj.mean_positions[i] == pytest.approx(mean_position(out), abs=1e-12)


def test_trajectory_input_guards():
    chain = ChainSpec(coupling=1.0, force=0.0, left=-5, right=5, target=0)
    h = build_free_hamiltonian(chain)
    state = _sharp(chain, 0)
    traj = trajectory(state, h, np.array([2.5]))
    assert traj.times.shape == (1,)
    with pytest.raises(ValueError):
        trajectory(state, h, np.array([], dtype=float))
    with pytest.raises(ValueError):
        trajectory(state, h, np.array([0.0, 2.0, 1.0]))
    with pytest.raises(ValueError):
        trajectory(state, h, np.array([-1.0, 0.0]))
    with pytest.raises(ValueError):
        trajectory(state, h, np.zeros((2, 2)))


def test_free_wavepacket_spreads_monotonically():
    chain = ChainSpec(coupling=1.0, force=0.0, left=-60, right=60, target=0)
    h = build_free_hamiltonian(chain)
    state = gaussian_state(TruncatedGaussianSpec(beta=0.1, delta=5), chain)
    variances = [
        position_variance(evolve(state, h, t)) for t in np.linspace(0.0, 40.0, 9)
    ]
    assert all(b > a for a, b in zip(variances, variances[1:]))


def test_tilted_sharp_state_stays_confined():
    # amplitude 2|gamma| = 40 plus the evanescent edge: nothing past +/-44
    chain = ChainSpec(coupling=1.0, force=-0.025, left=-60, right=60, target=0)
    h = build_tilted_hamiltonian(chain)
    state = sharp_state(ChainSpec(coupling=1.0, force=-0.025, left=-60, right=60, target=0))
    period = tilt_parameters(chain).bloch_period
    worst = 0.0
    for t in np.linspace(0.0, period, 33):
        profile = probability_profile(evolve(state, h, float(t)))
        outside = np.abs(chain.sites) > 44
        worst = max(worst, float(profile[outside].sum()))
    assert worst < 1e-3


def test_tilted_sharp_state_breathing_envelope():
    # |c_n(t)| = |J_n(2 gamma sin(omega_B t / 2))| for a sharp start
    chain = ChainSpec(coupling=1.0, force=-0.025, left=-80, right=80, target=0)
    h = build_tilted_hamiltonian(chain)
    state = sharp_state(chain)
    tilt = tilt_parameters(chain)
    t = tilt.bloch_period / 4
    out = evolve(state, h, t)
    argument = abs(2 * tilt.gamma * math.sin(tilt.bloch_frequency * t / 2))
    for n in range(-35, 36):
        expected = abs(bessel_jn(n, argument))
        assert abs(out.amplitudes[n - chain.left]) == pytest.approx(expected, abs=1e-10)


def test_tilted_packet_revives_after_full_period():
    chain = ChainSpec(coupling=1.0, force=-0.025, left=-40, right=80, target=40)
    h = build_tilted_hamiltonian(chain)
    state = truncated_gaussian(TruncatedGaussianSpec(beta=0.01, delta=10), chain)
    period = tilt_parameters(chain).bloch_period
    out = evolve(state, h, period)
    fidelity = abs(np.vdot(state.amplitudes, out.amplitudes)) ** 2
    # delta=10 cuts the envelope at e^-1; its quasimomentum ringing can swing
    # up to 4|gamma| sites and grazes the boundary, costing ~2e-3 of fidelity
    assert fidelity > 0.995


def test_trajectory_csv_writers_are_deterministic(tmp_path):
    chain = ChainSpec(coupling=1.0, force=-0.1, left=-8, right=8, target=0)
    h = build_tilted_hamiltonian(chain)
    state = _sharp(chain, 0)
    traj = trajectory(state, h, np.linspace(0.0, 5.0, 4))

    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_trajectory_csv(traj, p1)
    write_trajectory_csv(traj, p2)
    assert p1.read_bytes() == p2.read_bytes()
    lines = p1.read_text().splitlines()
    assert lines[0] == "t,n,P"
    assert len(lines) == 1 + 4 * chain.n_sites

    m1, m2 = tmp_path / "m1.csv", tmp_path / "m2.csv"
    write_mean_position_csv(traj, m1)
    write_mean_position_csv(traj, m2)
    assert m1.read_bytes() == m2.read_bytes()
    mlines = m1.read_text().splitlines()
    assert mlines[0] == "t,mean_position"
    assert len(mlines) == 5


def test_trajectory_csv_round_trips_at_full_precision(tmp_path):
    chain = ChainSpec(coupling=1.0, force=-0.025, left=-10, right=10, target=0)
    h = build_tilted_hamiltonian(chain)
    state = _sharp(chain, 0)
    traj = trajectory(state, h, np.array([0.0, math.pi, 11.7]))
    path = tmp_path / "traj.csv"
    write_trajectory_csv(traj, path)
    rows = [line.split(",") for line in path.read_text().splitlines()[1:]]
    values = np.array([float(r[2]) for r in rows]).reshape(3, chain.n_sites)
    np.testing.assert_array_equal(values, traj.profiles)  # 17 significant digits
    times = np.array([float(r[0]) for r in rows]).reshape(3, chain.n_sites)
    np.testing.assert_array_equal(times[:, 0], traj.times)


def test_trajectory_record_is_frozen():
    chain = ChainSpec(coupling=1.0, force=0.0, left=-3, right=3, target=0)
    traj = trajectory(_sharp(chain, 0), build_free_hamiltonian(chain), np.array([0.0]))
    assert isinstance(traj, Trajectory)
    with pytest.raises(AttributeError):
        traj.times = np.array([1.0])
