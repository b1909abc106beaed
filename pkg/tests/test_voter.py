import numpy as np
import pytest

from netcontest.contest import expected_payoff, win_shares
from netcontest.graphs import build_graph, network_values
from netcontest.voter import PreferenceState, sample_initial, simulate_payoff, step


def triangle_with_loops():
    return build_graph(3, [(0, 1), (1, 2), (0, 2)], add_self_loops=True)


def test_sample_initial_sure_winner():
    rng = np.random.default_rng(0)
    for _ in range(50):
        state = sample_initial([1.0, 1.0], [0.0, 0.0], rng)
        assert state.prefers_d.all()
        assert state.time == 0


def test_sample_initial_tie_is_fair_coin():
    rng = np.random.default_rng(1)
    n = 20000
    state = sample_initial(np.zeros(n), np.zeros(n), rng)
    freq = state.prefers_d.mean()
    assert abs(freq - 0.5) < 4 * 0.5 / np.sqrt(n)


def test_sample_initial_per_node_probabilities():
    rng = np.random.default_rng(2)
    hits = np.zeros(2)
    reps = 20000
    for _ in range(reps):
        hits += sample_initial([3.0, 0.0], [1.0, 0.0], rng).prefers_d
    freq = hits / reps
    assert abs(freq[0] - 0.75) < 4 * np.sqrt(0.75 * 0.25 / reps)
    assert abs(freq[1] - 0.5) < 4 * np.sqrt(0.25 / reps)


def test_step_unanimous_state_is_absorbing():
    g = triangle_with_loops()
    rng = np.random.default_rng(3)
    state = PreferenceState(np.array([True, True, True]))
    for _ in range(10):
        state = step(g, state, rng)
        assert state.prefers_d.all()
    assert state.time == 10


def test_step_single_self_loop_node_fixed():
    g = build_graph(1, [(0, 0)])
    rng = np.random.default_rng(4)
    state = PreferenceState(np.array([False]))
    state = step(g, state, rng)
    assert not state.prefers_d[0]


def test_step_two_node_path_swaps_deterministically():
    # each node's only neighbor is the other one, so opinions swap every step
    g = build_graph(2, [(0, 1)], add_self_loops=False)
    rng = np.random.default_rng(5)
    state = PreferenceState(np.array([True, False]))
    state = step(g, state, rng)
    assert state.prefers_d.tolist() == [False, True]
    state = step(g, state, rng)
    assert state.prefers_d.tolist() == [True, False]


def test_step_dimension_check():
    g = triangle_with_loops()
    with pytest.raises(ValueError):
        step(g, PreferenceState(np.array([True])), np.random.default_rng(0))


def test_simulate_tau_zero_matches_share_mean():
    g = triangle_with_loops()
    w = np.array([1.0, 2.0, 0.5])
    x_d = np.array([3.0, 1.0, 0.0])
    x_a = np.array([1.0, 1.0, 0.0])
    est = simulate_payoff(g, w, x_d, x_a, "D", tau=0, runs=60000, seed=9)
    analytic = float(w @ win_shares(x_d, x_a))
    assert abs(est.mean - analytic) <= 4 * est.stderr


def test_simulate_forced_unanimity_has_zero_stderr():
    g = build_graph(1, [(0, 0)])
    est = simulate_payoff(g, [1.0], [1.0], [0.0], "D", tau=3, runs=50, seed=0)
    assert est.mean == 1.0
    assert est.stderr == 0.0


def test_simulate_single_run_stderr_is_zero_placeholder():
    g = triangle_with_loops()
    est = simulate_payoff(g, [1.0, 1.0, 1.0], [1.0] * 3, [1.0] * 3, "D", 1, runs=1, seed=2)
    assert est.runs == 1
    assert est.stderr == 0.0


def test_simulate_deterministic_per_seed():
    g = triangle_with_loops()
    args = (g, [1.0, 0.7, 0.3], [1.0] * 3, [1.0] * 3, "D", 2)
    a = simulate_payoff(*args, runs=500, seed=42)
    b = simulate_payoff(*args, runs=500, seed=42)
    assert a == b
    c = simulate_payoff(*args, runs=500, seed=43)
    assert (c.mean, c.stderr) != (a.mean, a.stderr)


def test_simulate_conservation_between_players():
    g = triangle_with_loops()
    w = np.array([1.0, 2.0, 4.0])
    x_d = np.array([1.0, 0.5, 2.0])
    x_a = np.array([0.5, 1.5, 1.0])
    d = simulate_payoff(g, w, x_d, x_a, "D", tau=3, runs=400, seed=7)
    a = simulate_payoff(g, w, x_d, x_a, "A", tau=3, runs=400, seed=7)
    assert d.mean + a.mean == pytest.approx(w.sum(), rel=1e-12)


def test_simulate_statistical_agreement_with_network_values():
    g = triangle_with_loops()
    w = np.array([1.0, 0.0, 0.0])
    x = np.array([1.0, 1.0, 1.0])
    est = simulate_payoff(g, w, x, x, "D", tau=1, runs=100000, seed=11)
    v = network_values(g, w, 1).values
    analytic = expected_payoff(x, x, v)
    assert analytic == pytest.approx(0.5, rel=1e-12)
    assert abs(est.mean - analytic) <= 4 * est.stderr


def test_simulate_validates_inputs():
    g = triangle_with_loops()
    with pytest.raises(ValueError):
        simulate_payoff(g, [1.0] * 3, [1.0] * 3, [1.0] * 3, "X", 1, 10, 0)
    with pytest.raises(ValueError):
        simulate_payoff(g, [1.0] * 3, [1.0] * 3, [1.0] * 3, "D", -1, 10, 0)
    with pytest.raises(ValueError):
        simulate_payoff(g, [1.0] * 3, [1.0] * 3, [1.0] * 3, "D", 1, 0, 0)
    with pytest.raises(ValueError):
        simulate_payoff(g, [1.0] * 2, [1.0] * 3, [1.0] * 3, "D", 1, 10, 0)
