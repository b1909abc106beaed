"""Command-line front end: netvalue, solve, simulate, and sweep subcommands.

Exit codes: 0 on success, 1 on input errors, 2 when a solver fails to
converge (or any sweep row fails).
"""

from __future__ import annotations

import argparse
import sys


from . import graphs
from .contest import GameSpec, SolverError, expected_payoff
from .nash import (
    detect_two_community,
    grid_nash_oracle,
    nash_br_dynamics,
    nash_proportional,
    nash_two_community,
    proportionality_factor,
)
from .stackelberg import (
    grid_stackelberg_oracle,
    stackelberg_numeric,
    stackelberg_proportional,
    stackelberg_two_community,
)
from .sweep import parse_sweep_config, run_sweep, write_sweep_csv
from .voter import simulate_payoff

_INLINE_LIMIT = 16  # print allocation vectors inline up to this length


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _vector_text(values) -> str:
    return " ".join(_fmt(v) for v in values)


# ---------------------------------------------------------------------------
# netvalue
# ---------------------------------------------------------------------------


def _cmd_netvalue(args) -> int:
    graph = graphs.load_graph(args.graph, add_self_loops=args.add_self_loops)
    weights = graphs.read_valuations(args.values)
    if weights.size != graph.n:
        raise ValueError(
            f"valuation file has {weights.size} entries, graph has {graph.n} nodes"
        )
    result = graphs.network_values(graph, weights, args.t)
    graphs.write_valuations(args.out, result.values)
    print(f"sum_w = {_fmt(float(weights.sum()))}")
    print(f"sum_v = {_fmt(result.total)}")
    print(f"wrote {args.out} ({graph.n} values, horizon t={args.t})")
    return 0


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------


def _load_game(args) -> GameSpec:
    v_d = graphs.read_valuations(args.values_d)
    v_a = graphs.read_valuations(args.values_a)
    if args.graph is not None:
        if args.t is None:
            raise ValueError("--graph requires --t to propagate valuations")
        graph = graphs.load_graph(args.graph, add_self_loops=args.add_self_loops)
        v_d = graphs.network_values(graph, v_d, args.t).values
        v_a = graphs.network_values(graph, v_a, args.t).values
    return GameSpec(v_d=v_d, v_a=v_a, budget_d=args.budget_d, budget_a=args.budget_a)


def _solve_game(game: GameSpec, mode: str, method: str, args):
    if method == "oracle":
        if game.n > 3:
            raise ValueError(f"oracle method supports n <= 3, got n={game.n}")
        if mode == "nash":
            return grid_nash_oracle(game, args.grid_steps)
        return grid_stackelberg_oracle(game, args.grid_steps)
    if method in ("auto", "closed"):
        if proportionality_factor(game.v_d, game.v_a) is not None:
            if mode == "nash":
                return nash_proportional(game)
            return stackelberg_proportional(game)
        spec = detect_two_community(game)
        if spec is not None:
            if mode == "nash":
                return nash_two_community(spec)
            return stackelberg_two_community(spec)
        if method == "closed":
            raise ValueError(
                "no closed form applies: valuations are neither proportional "
                "nor two-community"
            )
    if mode == "nash":
        result, _ = nash_br_dynamics(game, tol=args.tol, max_iter=args.max_iter)
        return result
    return stackelberg_numeric(game, tol=args.tol, max_iter=args.max_iter)


def _cmd_solve(args) -> int:
    game = _load_game(args)
    result = _solve_game(game, args.mode, args.method, args)
    print(f"mode: {args.mode}")
    print(f"method: {result.method}")
    print(f"converged: {'yes' if result.converged else 'NO'}")
    print(f"iterations: {result.iterations}")
    print(f"residual: {_fmt(result.residual)}")
    print(f"payoff_D: {_fmt(result.payoff_d)}")
    print(f"payoff_A: {_fmt(result.payoff_a)}")
    if game.n <= _INLINE_LIMIT:
        print(f"x_D: {_vector_text(result.x_d.spend)}")
        print(f"x_A: {_vector_text(result.x_a.spend)}")
    else:
        print(f"x_D, x_A: {game.n} contests (pass --out PREFIX to write files)")
    if args.out is not None:
        graphs.write_valuations(f"{args.out}_xd.txt", result.x_d.spend)
        graphs.write_valuations(f"{args.out}_xa.txt", result.x_a.spend)
        print(f"wrote {args.out}_xd.txt and {args.out}_xa.txt")
    return 0 if result.converged else 2


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def _cmd_simulate(args) -> int:
    graph = graphs.load_graph(args.graph, add_self_loops=args.add_self_loops)
    weights = graphs.read_valuations(args.values)
    x_d = graphs.read_valuations(args.alloc_d)
    x_a = graphs.read_valuations(args.alloc_a)
    for name, vec in (("values", weights), ("alloc-d", x_d), ("alloc-a", x_a)):
        if vec.size != graph.n:
            raise ValueError(f"{name} file has {vec.size} entries, graph has {graph.n}")
    estimate = simulate_payoff(
        graph, weights, x_d, x_a, args.player, args.t, args.runs, args.seed
    )
    values = graphs.network_values(graph, weights, args.t).values
    own, opp = (x_d, x_a) if args.player == "D" else (x_a, x_d)
    analytic = expected_payoff(own, opp, values)
    print(f"player: {args.player}  tau: {args.t}  runs: {args.runs}  seed: {args.seed}")
    note = "  (insufficient runs for a standard error)" if args.runs < 2 else ""
    print(f"estimate: {_fmt(estimate.mean)} +- {_fmt(estimate.stderr)}{note}")
    print(f"analytic: {_fmt(analytic)}")
    diff = estimate.mean - analytic
    if estimate.stderr > 0:
        print(f"z: {_fmt(diff / estimate.stderr)}")
    else:
        print(f"z: {'0' if diff == 0 else 'undefined (zero standard error)'}")
    return 0


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def _cmd_sweep(args) -> int:
    cfg = parse_sweep_config(args.config)
    out = args.out if args.out is not None else cfg.out
    if out is None:
        raise ValueError("no output path: pass --out or set `out` in the config")
    rows = run_sweep(cfg, out_path=None)
    write_sweep_csv(rows, out)
    print(f"wrote {out} ({len(rows)} rows)")
    if not args.no_figures:
        from .figures import render_sweep_figures

        for path in render_sweep_figures(rows, out):
            print(f"wrote {path}")
    failures = [row for row in rows if row.error]
    for row in failures:
        print(
            f"row delta={_fmt(row.delta)} scenario={row.scenario}: {row.error}",
            file=sys.stderr,
        )
    return 2 if failures else 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netcontest",
        description=(
            "Voter-model network values and two-player budgeted allocation "
            "contests: equilibrium solvers, a Monte Carlo simulator, and an "
            "experiment sweep."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "netvalue", help="propagate customer values through the influence graph"
    )
    p.add_argument("--graph", required=True, help="edge-list file (first line: n)")
    p.add_argument("--values", required=True, help="valuation file, one decimal per line")
    p.add_argument("--t", type=int, required=True, help="walk horizon (>= 0)")
    p.add_argument("--out", required=True, help="output valuation file")
    p.add_argument(
        "--add-self-loops",
        action="store_true",
        help="give every node a self-loop before building the walk",
    )
    p.set_defaults(handler=_cmd_netvalue)

    p = sub.add_parser("solve", help="solve a contest game")
    p.add_argument("--mode", choices=("nash", "stackelberg"), required=True)
    p.add_argument(
        "--method",
        choices=("auto", "closed", "numeric", "oracle"),
        default="auto",
        help="auto picks a closed form when the structure matches, else numeric",
    )
    p.add_argument("--values-d", required=True, help="defender valuation file")
    p.add_argument("--values-a", required=True, help="attacker valuation file")
    p.add_argument("--budget-d", type=float, required=True)
    p.add_argument("--budget-a", type=float, required=True)
    p.add_argument("--graph", help="optional edge list; propagates both valuations")
    p.add_argument("--t", type=int, help="walk horizon when --graph is given")
    p.add_argument("--add-self-loops", action="store_true")
    p.add_argument("--grid-steps", type=int, default=100, help="oracle grid resolution")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=10000)
    p.add_argument("--out", help="prefix for writing the solved allocations")
    p.set_defaults(handler=_cmd_solve)

    p = sub.add_parser("simulate", help="Monte Carlo payoff vs the analytic value")
    p.add_argument("--graph", required=True)
    p.add_argument("--values", required=True, help="intrinsic customer values")
    p.add_argument("--alloc-d", required=True, help="defender spend file")
    p.add_argument("--alloc-a", required=True, help="attacker spend file")
    p.add_argument("--player", choices=("D", "A"), default="D")
    p.add_argument("--t", type=int, required=True, help="simulation horizon tau")
    p.add_argument("--runs", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--add-self-loops", action="store_true")
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("sweep", help="run the two-community NE vs SE sweep")
    p.add_argument("--config", required=True, help="flat `key = value` config file")
    p.add_argument("--out", help="CSV path (overrides `out` from the config)")
    p.add_argument("--no-figures", action="store_true", help="skip figure rendering")
    p.set_defaults(handler=_cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
