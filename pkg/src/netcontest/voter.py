"""Monte Carlo voter-model simulator.

Initial preferences are sampled per customer from the spend shares, then every
node synchronously adopts the opinion of a uniformly chosen neighbor each
step. The simulated payoff at a horizon is an independent statistical check on
the network-value computation: its expectation equals the analytic
sum_j v_t[j] * csf(x_own[j], x_opp[j]).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contest import win_shares
from .graphs import Graph

_UINT64 = 1 << 64


@dataclass
class PreferenceState:
    """Which player each node currently prefers (True = defender)."""

    prefers_d: np.ndarray
    time: int = 0


@dataclass
class SimEstimate:
    mean: float
    stderr: float
    runs: int
    seed: int


def _run_rng(seed: int, run_index: int) -> np.random.Generator:
    # Fixed splitting function: substream depends only on (seed, run_index),
    # so any execution order or worker layout reproduces the same runs.
    return np.random.default_rng(np.random.SeedSequence((seed % _UINT64, run_index)))


def sample_initial(x_d, x_a, rng: np.random.Generator) -> PreferenceState:
    """Draw initial preferences: node j prefers D with probability csf(x_d[j], x_a[j])."""
    p_defender = win_shares(x_d, x_a)
    prefers_d = rng.random(p_defender.size) < p_defender
    return PreferenceState(prefers_d=prefers_d, time=0)


def step(graph: Graph, state: PreferenceState, rng: np.random.Generator) -> PreferenceState:
    """Synchronous voter update: every node copies a uniformly chosen neighbor.

    All nodes read the time-t assignment; one vector of neighbor picks is
    drawn in node order.
    """
    if state.prefers_d.size != graph.n:
        raise ValueError(
            f"state has {state.prefers_d.size} nodes, graph has {graph.n}"
        )
    picks = rng.integers(0, graph.degrees)
    chosen = graph.flat_neighbors[graph.offsets[:-1] + picks]
    return PreferenceState(prefers_d=state.prefers_d[chosen], time=state.time + 1)


def simulate_payoff(
    graph: Graph,
    weights,
    x_d,
    x_a,
    player: str,
    tau: int,
    runs: int,
    seed: int,
) -> SimEstimate:
    """Estimate the expected payoff sum_j w[j] * [node j prefers `player` at time tau].

    Bit-reproducible for a given (seed, runs): run k uses an RNG substream
    derived from (seed, k) and results are reduced in run order. The player
    tag only selects which side is scored, so both players score identical
    trajectories under the same seed.
    """
    if player not in ("D", "A"):
        raise ValueError(f"player must be 'D' or 'A', got {player!r}")
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    w = np.asarray(getattr(weights, "values", weights), dtype=float)
    if w.size != graph.n:
        raise ValueError(f"weights length {w.size} != node count {graph.n}")
    x_d = np.asarray(getattr(x_d, "spend", x_d), dtype=float)
    x_a = np.asarray(getattr(x_a, "spend", x_a), dtype=float)
    payoffs = np.empty(runs, dtype=float)
    for k in range(runs):
        rng = _run_rng(seed, k)
        state = sample_initial(x_d, x_a, rng)
        for _ in range(tau):
            state = step(graph, state, rng)
        scored = state.prefers_d if player == "D" else ~state.prefers_d
        payoffs[k] = w @ scored
    mean = float(payoffs.mean())
    stderr = float(payoffs.std(ddof=1) / np.sqrt(runs)) if runs > 1 else 0.0
    return SimEstimate(mean=mean, stderr=stderr, runs=runs, seed=seed)
