"""Voter-model network values and budgeted two-player allocation contests."""

from .contest import (
    Allocation,
    AllocationDiagnostic,
    EquilibriumResult,
    GameSpec,
    SolverError,
    csf,
    expected_payoff,
    validate_allocation,
    win_shares,
)
from .graphs import (
    Graph,
    ValuationVector,
    build_graph,
    load_graph,
    network_values,
    read_edge_list,
    read_valuations,
    transition_matrix,
    walk_weight_propagation,
    write_valuations,
)
from .nash import (
    BestResponse,
    BrDynamicsReport,
    TwoCommunitySpec,
    best_response,
    constrained_best_response,
    detect_two_community,
    grid_nash_oracle,
    mutual_br_residual,
    nash_br_dynamics,
    nash_proportional,
    nash_two_community,
    proportionality_factor,
)
from .stackelberg import (
    grid_stackelberg_oracle,
    leader_objective,
    stackelberg_numeric,
    stackelberg_proportional,
    stackelberg_two_community,
    stationarity_residual,
)
from .sweep import SweepConfig, SweepRow, parse_sweep_config, run_sweep
from .voter import PreferenceState, SimEstimate, sample_initial, simulate_payoff, step

__version__ = "0.1.0"
