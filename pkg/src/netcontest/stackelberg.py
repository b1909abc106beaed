"""Leader-follower solvers: the defender commits, the attacker best-responds.

Substituting the follower's interior best response into the defender's payoff
collapses the bilevel problem to maximizing

    (1 / (B_A + B_D)) * sum_l sqrt(v_a[l] x[l]) * sum_k v_d[k] sqrt(x[k]) / sqrt(v_a[k])

over the defender simplex. The substitution is only valid where the
follower's interior response is feasible; outside that region evaluation
falls back to composing the payoff with the follower's simplex-constrained
response.
"""

from __future__ import annotations

import numpy as np

from .contest import (
    GameSpec,
    SolverError,
    _values,
    equilibrium_result,
    EquilibriumResult,
    expected_payoff,
)
from .nash import (
    TwoCommunitySpec,
    best_response,
    constrained_best_response,
    nash_proportional,
    proportionality_factor,
    simplex_grid,
    _check_grid_pre,
    _grid_shares,
)

_INTERIOR_FLOOR = 1e-12  # times B_D: keeps iterates clear of the sqrt singularity


def leader_objective(x_d, game: GameSpec) -> float:
    """Defender payoff given that the attacker best-responds to x_d.

    Uses the substituted product form when x_d is strictly positive and the
    attacker's interior response is feasible; otherwise composes the payoff
    with the attacker's constrained response (zero components make the
    interior formula invalid).
    """
    x = _values(x_d)
    if x.size != game.n:
        raise ValueError(f"allocation length {x.size} != game size {game.n}")
    if (x < 0).any():
        raise ValueError("defender spend must be nonnegative")
    if (game.v_d <= 0).any() or (game.v_a <= 0).any():
        raise ValueError("leader objective requires strictly positive valuations")
    if (x > 0).all():
        follower = best_response(game.v_a, x, game.budget_a, game.budget_d)
        if follower.feasible:
            pull = np.sqrt(game.v_a * x).sum()
            weighted = (game.v_d * np.sqrt(x) / np.sqrt(game.v_a)).sum()
            return float(pull * weighted / (game.budget_a + game.budget_d))
    fallback = constrained_best_response(game.v_a, x, game.budget_a)
    return expected_payoff(x, fallback, game.v_d)


def stationarity_residual(x_d, game: GameSpec, mu: float | None = None) -> np.ndarray:
    """Per-contest residual of the leader's first-order conditions.

    residual[k] = 2*mu*(B_A+B_D)
                  - sqrt(v_a[k]/x[k]) * sum_l v_d[l] sqrt(x[l]) / sqrt(v_a[l])
                  - v_d[k] / sqrt(v_a[k] x[k]) * sum_l sqrt(v_a[l] x[l])

    When mu is omitted, the least-squares multiplier (the mean of the bracket
    terms over 2*(B_A+B_D)) is used.
    """
    x = _values(x_d)
    if x.size != game.n:
        raise ValueError(f"allocation length {x.size} != game size {game.n}")
    if (x <= 0).any():
        raise ValueError("stationarity residual requires strictly positive spend")
    weighted = (game.v_d * np.sqrt(x) / np.sqrt(game.v_a)).sum()
    pull = np.sqrt(game.v_a * x).sum()
    bracket = np.sqrt(game.v_a / x) * weighted + game.v_d / np.sqrt(game.v_a * x) * pull
    scale = 2.0 * (game.budget_a + game.budget_d)
    if mu is None:
        mu = float(bracket.mean() / scale)
    return mu * scale - bracket


def _relative_stationarity(x_d, game: GameSpec) -> float:
    res = stationarity_residual(x_d, game)
    x = _values(x_d)
    weighted = (game.v_d * np.sqrt(x) / np.sqrt(game.v_a)).sum()
    pull = np.sqrt(game.v_a * x).sum()
    bracket = np.sqrt(game.v_a / x) * weighted + game.v_d / np.sqrt(game.v_a * x) * pull
    return float(np.abs(res).max() / max(np.abs(bracket).max(), 1e-300))


def stackelberg_proportional(game: GameSpec, alpha_check: float = 1e-9) -> EquilibriumResult:
    """Leader-follower equilibrium under proportional valuations.

    Coincides with the simultaneous-play equilibrium: proportional valuations
    make the game equivalent to a zero-sum contest, so commitment buys the
    leader nothing.
    """
    if proportionality_factor(game.v_d, game.v_a, alpha_check) is None:
        raise ValueError(
            "valuations are not proportional within tolerance; "
            "use stackelberg_numeric for general instances"
        )
    nash = nash_proportional(game, alpha_check)
    residual = _relative_stationarity(nash.x_d.spend, game)
    return equilibrium_result(
        game, nash.x_d.spend, nash.x_a.spend, "stackelberg-closed", residual, iterations=0
    )


def stackelberg_two_community(spec: TwoCommunitySpec) -> EquilibriumResult:
    """Closed-form leader allocation for the two-community game.

    The stationarity conditions give two candidate splits

        x = (B_D / 4m) * (2 +- sqrt(2)(beta - alpha) / sqrt(alpha^2 + beta^2))

    with y = B_D/m - x, mirrored across the communities. Both candidates are
    evaluated and the one with the larger leader payoff wins (ties go to the
    candidate spending more on the alpha community); the attacker's response
    must be feasible for a candidate to qualify.
    """
    game = spec.game()
    ratio = np.sqrt(2.0) * (spec.beta - spec.alpha) / np.hypot(spec.alpha, spec.beta)
    base = spec.budget_d / (4.0 * spec.m)
    pair_budget = spec.budget_d / spec.m
    # Build the larger split first: the subtraction is then exact (Sterbenz),
    # so the two community spends always sum to exactly B_D/m.
    big = base * (2.0 + abs(ratio))
    small = pair_budget - big
    candidates = []
    rejected = []
    for x, y in ((big, small), (small, big)):
        spend_d = np.concatenate([np.full(spec.m, x), np.full(spec.m, y)])
        follower = best_response(game.v_a, spend_d, game.budget_a, game.budget_d)
        if not follower.feasible:
            rejected.append((x, float(follower.spend.min())))
            continue
        candidates.append((leader_objective(spend_d, game), x, spend_d, follower.spend))
    if not candidates:
        detail = ", ".join(
            f"x={x:.6g} gives min attacker spend {worst:.6g}" for x, worst in rejected
        )
        raise SolverError(
            f"both leader splits induce infeasible attacker responses ({detail})"
        )
    candidates.sort(key=lambda c: (-c[0], -c[1]))
    _, _, spend_d, spend_a = candidates[0]
    residual = _relative_stationarity(spend_d, game)
    return equilibrium_result(
        game, spend_d, spend_a, "stackelberg-closed", residual, iterations=0
    )


def stackelberg_numeric(
    game: GameSpec, tol: float = 1e-12, max_iter: int = 10000
) -> EquilibriumResult:
    """Numeric leader optimizer over the defender simplex.

    In sqrt-spend coordinates the substituted objective is a rank-2 quadratic
    form with positive coefficients, so a normalized power-style fixed point
    converges to its global maximizer from any positive start while keeping
    every iterate strictly interior. If the attacker's interior response is
    infeasible at that point, a backtracking multiplicative ascent on the
    fallback-aware objective refines it.
    """
    if (game.v_d <= 0).any() or (game.v_a <= 0).any():
        raise ValueError("stackelberg_numeric requires strictly positive valuations")
    if game.budget_d <= 0 or game.budget_a <= 0:
        raise ValueError("stackelberg_numeric requires strictly positive budgets")
    a = np.sqrt(game.v_a)
    c = game.v_d / np.sqrt(game.v_a)
    z = np.sqrt(game.budget_d * game.v_d / game.v_d.sum())
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        pulled = (c @ z) * a + (a @ z) * c
        z_new = pulled * (np.sqrt(game.budget_d) / np.linalg.norm(pulled))
        change = float(np.abs(z_new**2 - z**2).max())
        z = z_new
        if change <= tol * max(game.budget_d, 1.0):
            converged = True
            break
    x = np.maximum(z**2, _INTERIOR_FLOOR * game.budget_d)
    x *= game.budget_d / x.sum()
    follower = best_response(game.v_a, x, game.budget_a, game.budget_d)
    if not follower.feasible:
        x, polish_converged = _ascend_fallback(x, game, tol, max_iter)
        converged = converged and polish_converged
    spend_a = constrained_best_response(game.v_a, x, game.budget_a)
    residual = _relative_stationarity(x, game)
    return equilibrium_result(
        game, x, spend_a, "stackelberg-numeric", residual, iterations, converged=converged
    )


def _ascend_fallback(x, game: GameSpec, tol: float, max_iter: int):
    """Backtracking multiplicative ascent on the fallback-aware objective.

    The substituted gradient is only a heuristic direction here (the true
    objective composes with the clamped follower response), so each step is
    accepted only if it actually improves the evaluated payoff.
    """
    value = leader_objective(x, game)
    step = 1.0
    floor = _INTERIOR_FLOOR * game.budget_d
    for _ in range(max_iter):
        weighted = (game.v_d * np.sqrt(x) / np.sqrt(game.v_a)).sum()
        pull = np.sqrt(game.v_a * x).sum()
        grad = (np.sqrt(game.v_a / x) * weighted + game.v_d / np.sqrt(game.v_a * x) * pull)
        direction = grad / np.abs(grad).max()
        previous = x
        improved = False
        while step > 1e-14:
            trial = previous * np.exp(step * (direction - direction @ previous / game.budget_d))
            trial = np.maximum(trial, floor)
            trial *= game.budget_d / trial.sum()
            trial_value = leader_objective(trial, game)
            if trial_value > value:
                x, value = trial, trial_value
                step = min(step * 1.5, 8.0)
                improved = True
                break
            step *= 0.5
        if not improved:
            return x, True
        if float(np.abs(x - previous).max()) <= tol * max(game.budget_d, 1.0):
            return x, True
    return x, False


def grid_stackelberg_oracle(game: GameSpec, grid_steps: int) -> EquilibriumResult:
    """Exhaustive leader search with an exact discretized follower.

    For every defender grid point the attacker plays its grid best response
    (first argmax in lexicographic order); the defender point with the best
    resulting payoff wins, ties resolved lexicographically.
    """
    _check_grid_pre(game, grid_steps)
    base = simplex_grid(grid_steps, game.n).astype(float) / grid_steps
    points_d = base * game.budget_d
    points_a = base * game.budget_a
    total_a = float(game.v_a.sum())
    best_value = -np.inf
    best_d = 0
    best_a = 0
    block_size = 64
    for lo in range(0, points_d.shape[0], block_size):
        block = points_d[lo : lo + block_size]
        shares = _grid_shares(block, points_a)
        pay_a = total_a - shares @ game.v_a
        responses = np.argmax(pay_a, axis=1)  # first maximum: lexicographic tie-break
        pay_d = shares @ game.v_d
        leader = pay_d[np.arange(block.shape[0]), responses]
        arg = int(np.argmax(leader))
        if leader[arg] > best_value:
            best_value = float(leader[arg])
            best_d = lo + arg
            best_a = int(responses[arg])
    pitch = max(game.budget_d, game.budget_a) / grid_steps
    return equilibrium_result(
        game,
        points_d[best_d],
        points_a[best_a],
        "grid-oracle",
        residual=pitch,
        iterations=points_d.shape[0] * points_a.shape[0],
    )
