import numpy as np
import pytest

from netcontest.figures import render_sweep_figures
from netcontest.nash import grid_nash_oracle
from netcontest.stackelberg import grid_stackelberg_oracle
from netcontest.sweep import (
    CSV_HEADER,
    SweepConfig,
    parse_sweep_config,
    run_sweep,
    write_sweep_csv,
)


def small_config(**overrides):
    kwargs = dict(
        m=1,
        v=1.0,
        budget_a=2.0,
        budgets_d=[1.0, 2.0],
        deltas=[0.0, 0.3, 0.6],
    )
    kwargs.update(overrides)
    return SweepConfig(**kwargs)


def test_config_validation():
    with pytest.raises(ValueError):
        small_config(deltas=[1.0])
    with pytest.raises(ValueError):
        small_config(deltas=[])
    with pytest.raises(ValueError):
        small_config(budgets_d=[0.0])
    with pytest.raises(ValueError):
        small_config(m=0)


def test_parse_config_round_trip(tmp_path):
    path = tmp_path / "sweep.cfg"
    path.write_text(
        "# comment\n"
        "m = 2\n"
        "v = 10\n"
        "B_A = 5\n"
        "B_D = 2.5, 5, 10\n"
        "delta = 0, 0.5\n"
        "seed = 7\n"
        "out = result.csv\n"
    )
    cfg = parse_sweep_config(path)
    assert cfg.m == 2
    assert cfg.v == 10.0
    assert cfg.budget_a == 5.0
    assert cfg.budgets_d == [2.5, 5.0, 10.0]
    assert cfg.deltas == [0.0, 0.5]
    assert cfg.seed == 7
    assert cfg.out == "result.csv"


def test_parse_config_errors_mention_lines(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("m = 1\nwhat\n")
    with pytest.raises(ValueError, match=":2:"):
        parse_sweep_config(path)
    path.write_text("m = 1\nbogus_key = 3\n")
    with pytest.raises(ValueError, match="unknown key"):
        parse_sweep_config(path)
    path.write_text("m = 1\nv = 1\nB_A = 1\nB_D = 1\n")
    with pytest.raises(ValueError, match="missing required"):
        parse_sweep_config(path)


def test_rows_cover_config_in_order():
    rows = run_sweep(small_config())
    assert len(rows) == 6
    assert [r.scenario for r in rows] == ["s1"] * 3 + ["s2"] * 3
    assert [r.delta for r in rows] == [0.0, 0.3, 0.6] * 2
    assert all(r.error == "" for r in rows)


def test_delta_zero_collapse():
    rows = run_sweep(small_config(deltas=[0.0]))
    for row in rows:
        assert abs(row.pct_increase_d) <= 1e-7


def test_leader_advantage_per_row():
    rows = run_sweep(small_config(deltas=[0.0, 0.2, 0.4, 0.8]))
    for row in rows:
        assert row.pct_increase_d >= -1e-6


def test_miniature_rows_match_grid_oracles():
    cfg = small_config(budgets_d=[2.0], deltas=[0.5])
    (row,) = run_sweep(cfg)
    from netcontest.nash import TwoCommunitySpec

    game = TwoCommunitySpec(
        m=1, v=1.0, alpha=0.5, beta=1.5, budget_d=2.0, budget_a=2.0
    ).game()
    ne_oracle = grid_nash_oracle(game, 200)
    se_oracle = grid_stackelberg_oracle(game, 200)
    assert row.ne_profit_d == pytest.approx(ne_oracle.payoff_d, rel=2e-3)
    assert row.se_profit_d == pytest.approx(se_oracle.payoff_d, rel=2e-3)


def test_row_payoffs_recompute_from_allocations():
    from netcontest.contest import expected_payoff
    from netcontest.nash import TwoCommunitySpec, nash_two_community
    from netcontest.stackelberg import stackelberg_two_community

    rows = run_sweep(small_config())
    for row in rows:
        spec = TwoCommunitySpec(
            m=1,
            v=1.0,
            alpha=1.0 - row.delta,
            beta=1.0 + row.delta,
            budget_d=row.budget_d,
            budget_a=2.0,
        )
        ne = nash_two_community(spec)
        se = stackelberg_two_community(spec)
        game = spec.game()
        assert row.ne_profit_d == pytest.approx(
            expected_payoff(ne.x_d.spend, ne.x_a.spend, game.v_d), rel=1e-9
        )
        assert row.se_profit_d == pytest.approx(
            expected_payoff(se.x_d.spend, se.x_a.spend, game.v_d), rel=1e-9
        )


def test_csv_deterministic_and_headed(tmp_path):
    cfg = small_config()
    p1 = tmp_path / "a.csv"
    p2 = tmp_path / "b.csv"
    write_sweep_csv(run_sweep(cfg), p1)
    write_sweep_csv(run_sweep(cfg), p2)
    b1 = p1.read_bytes()
    assert b1 == p2.read_bytes()
    lines = b1.decode().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 7
    assert lines[1].startswith("0,s1,1,")


def test_run_sweep_writes_configured_out(tmp_path):
    out = tmp_path / "auto.csv"
    cfg = small_config(out=str(out))
    run_sweep(cfg)
    assert out.exists()


def test_figures_render_next_to_csv(tmp_path):
    csv_path = tmp_path / "mini.csv"
    rows = run_sweep(small_config(), out_path=csv_path)
    written = render_sweep_figures(rows, csv_path)
    assert [p.name for p in written] == ["mini_profits.png", "mini_pct_increase.png"]
    for p in written:
        assert p.stat().st_size > 1000


def test_figures_skip_all_nan(tmp_path):
    from netcontest.sweep import SweepRow

    nan = float("nan")
    rows = [SweepRow(0.0, "s1", 1.0, nan, nan, nan, nan, nan, nan, nan, error="boom")]
    assert render_sweep_figures(rows, tmp_path / "x.csv") == []
