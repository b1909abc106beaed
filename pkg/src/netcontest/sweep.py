"""Two-community experiment sweep comparing simultaneous vs committed play.

For a split parameter delta the defender values the first community at
v*(1-delta) and the second at v*(1+delta) while the attacker values every
customer at v. Each (scenario budget, delta) cell is solved for both the Nash
and the Stackelberg equilibrium and the defender's percentage profit increase
100*(SE-NE)/NE is recorded. Output is a deterministic CSV, one row per cell.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .contest import SolverError
from .nash import TwoCommunitySpec, nash_two_community
from .stackelberg import stackelberg_two_community

CSV_HEADER = (
    "delta,scenario,B_D,ne_profit_D,se_profit_D,pct_increase_D,"
    "ne_profit_A,se_profit_A,ne_residual,se_residual"
)


@dataclass
class SweepConfig:
    m: int
    v: float
    budget_a: float
    budgets_d: list
    deltas: list
    out: str | None = None
    seed: int = 0

    def __post_init__(self):
        self.m = int(self.m)
        self.v = float(self.v)
        self.budget_a = float(self.budget_a)
        self.budgets_d = [float(b) for b in self.budgets_d]
        self.deltas = [float(d) for d in self.deltas]
        self.seed = int(self.seed)
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if self.v <= 0 or self.budget_a <= 0:
            raise ValueError("v and B_A must be > 0")
        if not self.budgets_d or not self.deltas:
            raise ValueError("B_D and delta grids must be nonempty")
        if any(b <= 0 for b in self.budgets_d):
            raise ValueError("every B_D must be > 0")
        if any(not 0 <= d < 1 for d in self.deltas):
            raise ValueError("every delta must lie in [0, 1)")


@dataclass
class SweepRow:
    delta: float
    scenario: str
    budget_d: float
    ne_profit_d: float
    se_profit_d: float
    pct_increase_d: float
    ne_profit_a: float
    se_profit_a: float
    ne_residual: float
    se_residual: float
    error: str = ""  # non-empty when a solver failed; numeric fields are NaN


_CONFIG_KEYS = {"m", "v", "B_A", "B_D", "delta", "seed", "out"}
_LIST_KEYS = {"B_D", "delta"}


def parse_sweep_config(path) -> SweepConfig:
    """Parse a flat `key = value` config; list values are comma-separated."""
    raw: dict = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            key, _, value = text.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in _CONFIG_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            if key in raw:
                raise ValueError(f"{path}:{lineno}: duplicate key {key!r}")
            raw[key] = (value, lineno)
    for required in ("m", "v", "B_A", "B_D", "delta"):
        if required not in raw:
            raise ValueError(f"{path}: missing required key {required!r}")

    def number(key):
        value, lineno = raw[key]
        try:
            return float(value)
        except ValueError:
            raise ValueError(f"{path}:{lineno}: bad number for {key}: {value!r}") from None

    def number_list(key):
        value, lineno = raw[key]
        try:
            return [float(part) for part in value.split(",") if part.strip()]
        except ValueError:
            raise ValueError(f"{path}:{lineno}: bad list for {key}: {value!r}") from None

    return SweepConfig(
        m=int(number("m")),
        v=number("v"),
        budget_a=number("B_A"),
        budgets_d=number_list("B_D"),
        deltas=number_list("delta"),
        out=raw["out"][0] if "out" in raw else None,
        seed=int(number("seed")) if "seed" in raw else 0,
    )


def _solve_cell(cfg: SweepConfig, budget_d: float, delta: float, scenario: str) -> SweepRow:
    spec = TwoCommunitySpec(
        m=cfg.m,
        v=cfg.v,
        alpha=1.0 - delta,
        beta=1.0 + delta,
        budget_d=budget_d,
        budget_a=cfg.budget_a,
    )
    try:
        ne = nash_two_community(spec)
        se = stackelberg_two_community(spec)
    except (SolverError, ValueError) as exc:
        nan = float("nan")
        return SweepRow(
            delta, scenario, budget_d, nan, nan, nan, nan, nan, nan, nan,
            error=f"{type(exc).__name__}: {exc}",
        )
    pct = (
        100.0 * (se.payoff_d - ne.payoff_d) / ne.payoff_d
        if ne.payoff_d > 0
        else float("nan")
    )
    return SweepRow(
        delta=delta,
        scenario=scenario,
        budget_d=budget_d,
        ne_profit_d=ne.payoff_d,
        se_profit_d=se.payoff_d,
        pct_increase_d=pct,
        ne_profit_a=ne.payoff_a,
        se_profit_a=se.payoff_a,
        ne_residual=ne.residual,
        se_residual=se.residual,
    )


def run_sweep(cfg: SweepConfig, out_path=None) -> list:
    """Solve every (scenario, delta) cell in config order; optionally write CSV.

    Solver failures are recorded on their row (error message, NaN numerics)
    and the sweep continues.
    """
    rows = []
    for index, budget_d in enumerate(cfg.budgets_d, start=1):
        scenario = f"s{index}"
        for delta in cfg.deltas:
            rows.append(_solve_cell(cfg, budget_d, delta, scenario))
    target = out_path if out_path is not None else cfg.out
    if target is not None:
        write_sweep_csv(rows, target)
    return rows


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def write_sweep_csv(rows, path) -> None:
    """Write rows with a fixed header and 12-significant-digit decimals."""
    path = Path(path)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for row in rows:
            fields = (
                _fmt(row.delta),
                row.scenario,
                _fmt(row.budget_d),
                _fmt(row.ne_profit_d),
                _fmt(row.se_profit_d),
                _fmt(row.pct_increase_d),
                _fmt(row.ne_profit_a),
                _fmt(row.se_profit_a),
                _fmt(row.ne_residual),
                _fmt(row.se_residual),
            )
            fh.write(",".join(fields) + "\n")
