"""Proportional contests: success function, budget-simplex allocations, payoffs.

Each customer is a separate contest. A player spending x against an opponent
spending y wins that contest with probability x/(x+y); an untouched contest
(x = y = 0) is a coin flip. A player's strategy is a spend vector on the
budget simplex {x >= 0, sum(x) = B}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Hybrid tolerance so zero-budget players validate cleanly.
SIMPLEX_REL_TOL = 1e-9


class SolverError(RuntimeError):
    """An equilibrium solver failed to produce a certified answer."""


def _values(x) -> np.ndarray:
    """Coerce an array, list, ValuationVector, or Allocation to a 1-D float array."""
    if hasattr(x, "spend"):
        x = x.spend
    elif hasattr(x, "values") and not isinstance(x, np.ndarray):
        x = x.values
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {arr.shape}")
    return arr


def csf(x: float, y: float) -> float:
    """Win probability for spending x against y on one contest.

    Returns x/(x+y) when x+y > 0 and 1/2 when both spends are zero.
    """
    if x < 0 or y < 0:
        raise ValueError(f"contest spends must be nonnegative, got ({x}, {y})")
    total = x + y
    if total > 0:
        return x / total
    return 0.5


def win_shares(own, other) -> np.ndarray:
    """Vectorized csf over paired per-contest spends."""
    own = _values(own)
    other = _values(other)
    if own.shape != other.shape:
        raise ValueError(f"spend vectors differ in length: {own.size} vs {other.size}")
    if (own < 0).any() or (other < 0).any():
        raise ValueError("contest spends must be nonnegative")
    total = own + other
    contested = total > 0
    return np.where(contested, own / np.where(contested, total, 1.0), 0.5)


@dataclass
class Allocation:
    """One player's spend across all contests.

    A valid allocation lies on the budget simplex; use validate_allocation to
    check. Construction does not validate so that diagnostics can be produced
    for bad inputs.
    """

    budget: float
    spend: np.ndarray

    def __post_init__(self):
        self.budget = float(self.budget)
        self.spend = np.asarray(self.spend, dtype=float)


@dataclass
class AllocationDiagnostic:
    ok: bool
    budget_gap: float  # sum(spend) - budget
    min_spend: float
    worst_violation: float


def validate_allocation(alloc: Allocation) -> AllocationDiagnostic:
    """Check the budget-simplex invariants and report the worst violation."""
    spend = np.asarray(alloc.spend, dtype=float)
    gap = float(spend.sum() - alloc.budget) if spend.size else -float(alloc.budget)
    min_spend = float(spend.min()) if spend.size else 0.0
    tol = SIMPLEX_REL_TOL * max(alloc.budget, 1.0)
    neg = max(0.0, -min_spend)
    ok = alloc.budget >= 0 and abs(gap) <= tol and neg == 0.0
    return AllocationDiagnostic(
        ok=ok,
        budget_gap=gap,
        min_spend=min_spend,
        worst_violation=max(abs(gap), neg),
    )


@dataclass
class GameSpec:
    """A two-player budgeted contest game: per-contest prize vectors and budgets."""

    v_d: np.ndarray
    v_a: np.ndarray
    budget_d: float
    budget_a: float

    def __post_init__(self):
        self.v_d = _values(self.v_d)
        self.v_a = _values(self.v_a)
        self.budget_d = float(self.budget_d)
        self.budget_a = float(self.budget_a)
        if self.v_d.size != self.v_a.size:
            raise ValueError(
                f"valuation lengths differ: {self.v_d.size} vs {self.v_a.size}"
            )
        if self.v_d.size == 0:
            raise ValueError("game needs at least one contest")
        if (self.v_d < 0).any() or (self.v_a < 0).any():
            raise ValueError("valuations must be nonnegative")
        if self.budget_d < 0 or self.budget_a < 0:
            raise ValueError("budgets must be nonnegative")

    @property
    def n(self) -> int:
        return self.v_d.size


def expected_payoff(own, other, values) -> float:
    """Expected prize haul: sum_j values_j * csf(own_j, other_j).

    Accepts Allocation objects or raw spend vectors.
    """
    own = _values(own)
    other = _values(other)
    vals = _values(values)
    if not (own.size == other.size == vals.size):
        raise ValueError(
            f"length mismatch: spends {own.size}/{other.size}, values {vals.size}"
        )
    return float(vals @ win_shares(own, other))


@dataclass
class EquilibriumResult:
    """A solved game: both allocations, payoffs, and solver diagnostics.

    residual semantics depend on the method:
      closed-form-proportional, two-community, br-dynamics:
        sup-norm mutual-best-response gap divided by max(budget_d, budget_a, 1).
      stackelberg-closed, stackelberg-numeric:
        sup-norm of the leader stationarity residual relative to its scale.
      grid-oracle:
        grid pitch (resolution bound), payoff units per coordinate.
    """

    x_d: Allocation
    x_a: Allocation
    payoff_d: float
    payoff_a: float
    method: str
    residual: float
    iterations: int
    converged: bool = True


def equilibrium_result(
    game: GameSpec,
    spend_d,
    spend_a,
    method: str,
    residual: float,
    iterations: int,
    converged: bool = True,
) -> EquilibriumResult:
    """Assemble an EquilibriumResult, recomputing payoffs from the allocations."""
    spend_d = _values(spend_d)
    spend_a = _values(spend_a)
    return EquilibriumResult(
        x_d=Allocation(game.budget_d, spend_d),
        x_a=Allocation(game.budget_a, spend_a),
        payoff_d=expected_payoff(spend_d, spend_a, game.v_d),
        payoff_a=expected_payoff(spend_a, spend_d, game.v_a),
        method=method,
        residual=float(residual),
        iterations=int(iterations),
        converged=converged,
    )
