"""Nash equilibrium solvers for two-player budgeted proportional contests.

Closed forms exist for two structured families:
  * proportional valuations (v_d = alpha * v_a): each player spreads its
    budget proportionally to its own valuations;
  * two equal-size communities where the attacker values every contest at v
    and the defender values them at alpha*v / beta*v: the attacker's
    per-contest spend on the first community solves a scalar equation with a
    unique interior root.

A damped best-response iteration covers general strictly positive valuations,
and a discretized exhaustive search provides an independent oracle on tiny
instances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .contest import (
    GameSpec,
    SolverError,
    _values,
    equilibrium_result,
    EquilibriumResult,
    win_shares,
)

# ---------------------------------------------------------------------------
# Best responses
# ---------------------------------------------------------------------------


@dataclass
class BestResponse:
    """Raw interior best response; infeasible when any component is negative."""

    spend: np.ndarray
    feasible: bool


def best_response(values, opponent_spend, budget: float, opponent_budget: float) -> BestResponse:
    """Interior best response against a strictly positive opponent allocation.

    x*[j] = -y[j] + (B_own + B_opp) * sqrt(v[j] y[j]) / sum_k sqrt(v[k] y[k])

    The components always sum to B_own (the -y terms telescope against the
    opponent budget), but individual components can go negative, in which case
    the result is flagged infeasible rather than clamped. A zero opponent
    component is a domain error: the interior optimality condition does not
    hold there.
    """
    v = _values(values)
    y = _values(opponent_spend)
    if v.size != y.size:
        raise ValueError(f"length mismatch: values {v.size}, opponent {y.size}")
    if (v <= 0).any():
        raise ValueError("best response requires strictly positive valuations")
    if (y <= 0).any():
        raise ValueError(
            "best response undefined against zero opponent spend on a contest"
        )
    root = np.sqrt(v * y)
    spend = -y + (budget + opponent_budget) * root / root.sum()
    return BestResponse(spend=spend, feasible=bool((spend >= 0).all()))


def constrained_best_response(values, opponent_spend, budget: float) -> np.ndarray:
    """Exact best response on the budget simplex (support-restriction loop).

    Contests whose interior formula component goes negative are dropped from
    the support and the formula is re-solved on the survivors; the dropped
    set only grows (the water level rises), so the loop terminates at the
    KKT-optimal support. Contests where the opponent spends nothing get zero
    spend: any positive spend there already wins, so in the limit none is
    needed (the payoff there is settled by the tie rule).
    """
    v = _values(values)
    y = _values(opponent_spend)
    if v.size != y.size:
        raise ValueError(f"length mismatch: values {v.size}, opponent {y.size}")
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    if (v <= 0).any():
        raise ValueError("best response requires strictly positive valuations")
    if (y < 0).any():
        raise ValueError("opponent spend must be nonnegative")
    x = np.zeros_like(y)
    if budget == 0:
        return x
    active = y > 0
    if not active.any():
        return budget * v / v.sum()
    while True:
        root = np.sqrt(v[active] * y[active])
        scale = (budget + y[active].sum()) / root.sum()
        cand = -y[active] + scale * root
        if (cand >= 0).all():
            x[active] = cand
            return x
        idx = np.flatnonzero(active)
        active[idx[cand < 0]] = False
        if not active.any():  # unreachable: the candidates sum to budget > 0
            raise SolverError("support restriction emptied the support")


def mutual_br_residual(game: GameSpec, spend_d, spend_a) -> float:
    """Sup-norm best-response gap for both players, relative to the budget scale.

    NaN when either allocation has a zero component (the interior formula
    does not apply there).
    """
    spend_d = _values(spend_d)
    spend_a = _values(spend_a)
    if (spend_d <= 0).any() or (spend_a <= 0).any():
        return float("nan")
    br_d = best_response(game.v_d, spend_a, game.budget_d, game.budget_a).spend
    br_a = best_response(game.v_a, spend_d, game.budget_a, game.budget_d).spend
    gap = max(
        float(np.abs(br_d - spend_d).max()),
        float(np.abs(br_a - spend_a).max()),
    )
    return gap / max(game.budget_d, game.budget_a, 1.0)


# ---------------------------------------------------------------------------
# Structure detection
# ---------------------------------------------------------------------------


def proportionality_factor(v_d, v_a, rel_tol: float = 1e-9) -> float | None:
    """Return alpha with v_d ~= alpha * v_a componentwise, or None."""
    v_d = _values(v_d)
    v_a = _values(v_a)
    if v_d.size != v_a.size or (v_d <= 0).any() or (v_a <= 0).any():
        return None
    alpha = v_d.sum() / v_a.sum()
    if np.abs(v_d / (alpha * v_a) - 1.0).max() <= rel_tol:
        return float(alpha)
    return None


@dataclass
class TwoCommunitySpec:
    """n = 2m contests; attacker values all at v, defender at alpha*v / beta*v."""

    m: int
    v: float
    alpha: float
    beta: float
    budget_d: float
    budget_a: float

    def __post_init__(self):
        self.m = int(self.m)
        if self.m < 1:
            raise ValueError(f"community size must be >= 1, got {self.m}")
        for name in ("v", "alpha", "beta", "budget_d", "budget_a"):
            val = float(getattr(self, name))
            setattr(self, name, val)
            if val <= 0:
                raise ValueError(f"{name} must be > 0, got {val}")

    @property
    def n(self) -> int:
        return 2 * self.m

    def game(self) -> GameSpec:
        v_a = np.full(self.n, self.v)
        v_d = np.concatenate(
            [np.full(self.m, self.alpha * self.v), np.full(self.m, self.beta * self.v)]
        )
        return GameSpec(v_d=v_d, v_a=v_a, budget_d=self.budget_d, budget_a=self.budget_a)


def detect_two_community(game: GameSpec, rel_tol: float = 1e-9) -> TwoCommunitySpec | None:
    """Recognize the two-community structure in a generic GameSpec."""
    n = game.n
    if n % 2 or (game.v_a <= 0).any() or (game.v_d <= 0).any():
        return None
    if game.budget_d <= 0 or game.budget_a <= 0:
        return None
    m = n // 2
    v = game.v_a.mean()
    if np.abs(game.v_a / v - 1.0).max() > rel_tol:
        return None
    first, second = game.v_d[:m], game.v_d[m:]
    a_val, b_val = first.mean(), second.mean()
    if np.abs(first / a_val - 1.0).max() > rel_tol:
        return None
    if np.abs(second / b_val - 1.0).max() > rel_tol:
        return None
    return TwoCommunitySpec(
        m=m,
        v=float(v),
        alpha=float(a_val / v),
        beta=float(b_val / v),
        budget_d=game.budget_d,
        budget_a=game.budget_a,
    )


# ---------------------------------------------------------------------------
# Closed-form solvers
# ---------------------------------------------------------------------------


def nash_proportional(game: GameSpec, alpha_check: float = 1e-9) -> EquilibriumResult:
    """Nash equilibrium when v_d = alpha * v_a: x_i = B_i * v_i / sum(v_i).

    The equilibrium strategies are unchanged by rescaling either player's
    valuations. Raises if the valuations are not proportional; use
    nash_br_dynamics for general instances.
    """
    alpha = proportionality_factor(game.v_d, game.v_a, alpha_check)
    if alpha is None:
        raise ValueError(
            "valuations are not proportional within tolerance; "
            "use nash_br_dynamics for general instances"
        )
    spend_d = game.budget_d * game.v_d / game.v_d.sum()
    spend_a = game.budget_a * game.v_a / game.v_a.sum()
    residual = mutual_br_residual(game, spend_d, spend_a)
    return equilibrium_result(
        game, spend_d, spend_a, "closed-form-proportional", residual, iterations=0
    )


def _community_gap(x, spec: TwoCommunitySpec):
    """Fixed-point gap for the attacker's first-community spend x in (0, B_A/m)."""
    cap = spec.budget_a / spec.m
    y = cap - x
    own = -(spec.budget_d / spec.m) * spec.alpha * x / (spec.alpha * x + spec.beta * y)
    sa = np.sqrt(spec.alpha * x)
    sb = np.sqrt(spec.beta * y)
    pull = (spec.budget_a + spec.budget_d) / spec.m * sa / (sa + sb)
    return own + pull - x


def nash_two_community(spec: TwoCommunitySpec) -> EquilibriumResult:
    """Nash equilibrium of the two-community game via the scalar fixed point.

    The attacker spreads x on each first-community contest and B_A/m - x on
    each second-community contest; the defender splits its per-pair budget in
    the ratio alpha*x : beta*y. x is the unique interior root of the
    fixed-point gap, found by bracketing.
    """
    cap = spec.budget_a / spec.m
    # The gap vanishes at both endpoints; scan strictly inside for the sign change.
    grid = cap * np.linspace(0.0, 1.0, 1026)[1:-1]
    vals = np.array([_community_gap(x, spec) for x in grid])
    hits = np.flatnonzero(vals == 0.0)
    roots = [float(grid[i]) for i in hits]
    iterations = 0
    sign_flips = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
    for i in sign_flips:
        root, info = brentq(
            _community_gap,
            grid[i],
            grid[i + 1],
            args=(spec,),
            xtol=1e-15 * max(cap, 1.0),
            rtol=1e-12,
            full_output=True,
        )
        roots.append(float(root))
        iterations += info.iterations
    if not roots:
        raise SolverError(
            "no interior sign change for the two-community fixed point "
            f"(alpha={spec.alpha}, beta={spec.beta}, B_D={spec.budget_d}, "
            f"B_A={spec.budget_a}, m={spec.m})"
        )
    game = spec.game()
    best = None
    for x in roots:
        y = cap - x
        denom = spec.alpha * x + spec.beta * y
        d_first = (spec.budget_d / spec.m) * spec.alpha * x / denom
        d_second = (spec.budget_d / spec.m) * spec.beta * y / denom
        spend_a = np.concatenate([np.full(spec.m, x), np.full(spec.m, y)])
        spend_d = np.concatenate([np.full(spec.m, d_first), np.full(spec.m, d_second)])
        residual = mutual_br_residual(game, spend_d, spend_a)
        if best is None or residual < best[0]:
            best = (residual, spend_d, spend_a)
    residual, spend_d, spend_a = best
    return equilibrium_result(
        game, spend_d, spend_a, "two-community", residual, iterations=iterations
    )


# ---------------------------------------------------------------------------
# General solver: damped best-response dynamics
# ---------------------------------------------------------------------------


@dataclass
class BrDynamicsReport:
    converged: bool
    iterations: int
    final_residual: float  # sup-norm change of the joint allocation, last sweep


def nash_br_dynamics(
    game: GameSpec,
    tol: float = 1e-10,
    max_iter: int = 5000,
    damping: float = 0.5,
) -> tuple[EquilibriumResult, BrDynamicsReport]:
    """Damped alternating best responses from a proportional interior start.

    Each sweep replaces a fraction `damping` of a player's allocation with its
    exact simplex-constrained best response (undamped alternation can cycle).
    Stops when the joint sup-norm change is at most tol (absolute, spend
    units). Non-convergence still returns the final iterate, flagged.
    """
    if (game.v_d <= 0).any() or (game.v_a <= 0).any():
        raise ValueError("best-response dynamics needs strictly positive valuations")
    if game.budget_d <= 0 or game.budget_a <= 0:
        raise ValueError("best-response dynamics needs strictly positive budgets")
    if not 0 < damping <= 1:
        raise ValueError(f"damping must be in (0, 1], got {damping}")
    spend_d = game.budget_d * game.v_d / game.v_d.sum()
    spend_a = game.budget_a * game.v_a / game.v_a.sum()
    change = float("inf")
    sweeps = 0
    for sweeps in range(1, max_iter + 1):
        new_d = constrained_best_response(game.v_d, spend_a, game.budget_d)
        next_d = (1 - damping) * spend_d + damping * new_d
        delta = float(np.abs(next_d - spend_d).max())
        spend_d = next_d
        new_a = constrained_best_response(game.v_a, spend_d, game.budget_a)
        next_a = (1 - damping) * spend_a + damping * new_a
        delta = max(delta, float(np.abs(next_a - spend_a).max()))
        spend_a = next_a
        change = delta
        if change <= tol:
            break
    converged = change <= tol
    report = BrDynamicsReport(converged=converged, iterations=sweeps, final_residual=change)
    residual = mutual_br_residual(game, spend_d, spend_a)
    result = equilibrium_result(
        game, spend_d, spend_a, "br-dynamics", residual, sweeps, converged=converged
    )
    return result, report


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------

_GRID_BLOCK = 64


def simplex_grid(total_steps: int, parts: int) -> np.ndarray:
    """Integer compositions of total_steps into `parts` parts, lexicographic."""
    if parts == 1:
        return np.array([[total_steps]], dtype=np.int64)
    blocks = []
    for first in range(total_steps + 1):
        rest = simplex_grid(total_steps - first, parts - 1)
        block = np.empty((rest.shape[0], parts), dtype=np.int64)
        block[:, 0] = first
        block[:, 1:] = rest
        blocks.append(block)
    return np.vstack(blocks)


def _check_grid_pre(game: GameSpec, grid_steps: int) -> None:
    if game.n > 3:
        raise ValueError(f"grid oracle supports n <= 3, got n={game.n}")
    if not 1 <= grid_steps <= 400:
        raise ValueError(f"grid_steps must be in [1, 400], got {grid_steps}")


def _grid_shares(block_d: np.ndarray, points_a: np.ndarray) -> np.ndarray:
    """Defender win shares for every (defender point, attacker point) pair."""
    total = block_d[:, None, :] + points_a[None, :, :]
    contested = total > 0
    return np.where(
        contested, block_d[:, None, :] / np.where(contested, total, 1.0), 0.5
    )


def grid_nash_oracle(game: GameSpec, grid_steps: int) -> EquilibriumResult:
    """Exhaustive approximate-equilibrium search on discretized simplices.

    Scores every allocation pair by its maximal unilateral grid improvement
    and returns the minimizer, breaking ties toward the lexicographically
    smallest pair. Streams over blocks so memory stays bounded.
    """
    _check_grid_pre(game, grid_steps)
    base = simplex_grid(grid_steps, game.n).astype(float) / grid_steps
    points_d = base * game.budget_d
    points_a = base * game.budget_a
    nd = points_d.shape[0]
    total_a = float(game.v_a.sum())
    # Pass 1: per-opponent-point best-response values for both players.
    best_vs_a = np.full(points_a.shape[0], -np.inf)  # max over defender points
    best_vs_d = np.full(nd, -np.inf)  # max over attacker points
    for lo in range(0, nd, _GRID_BLOCK):
        block = points_d[lo : lo + _GRID_BLOCK]
        shares = _grid_shares(block, points_a)
        pay_d = shares @ game.v_d
        pay_a = total_a - shares @ game.v_a
        np.maximum(best_vs_a, pay_d.max(axis=0), out=best_vs_a)
        best_vs_d[lo : lo + block.shape[0]] = pay_a.max(axis=1)
    # Pass 2: minimize the worst unilateral improvement, first hit wins ties.
    best_eps = np.inf
    best_pair = (0, 0)
    for lo in range(0, nd, _GRID_BLOCK):
        block = points_d[lo : lo + _GRID_BLOCK]
        shares = _grid_shares(block, points_a)
        pay_d = shares @ game.v_d
        pay_a = total_a - shares @ game.v_a
        eps = np.maximum(best_vs_a[None, :] - pay_d, best_vs_d[lo : lo + block.shape[0], None] - pay_a)
        flat = int(np.argmin(eps))
        if eps.flat[flat] < best_eps:
            best_eps = float(eps.flat[flat])
            best_pair = (lo + flat // eps.shape[1], flat % eps.shape[1])
    pitch = max(game.budget_d, game.budget_a) / grid_steps
    return equilibrium_result(
        game,
        points_d[best_pair[0]],
        points_a[best_pair[1]],
        "grid-oracle",
        residual=pitch,
        iterations=nd * points_a.shape[0],
    )
