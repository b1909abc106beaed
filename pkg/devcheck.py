"""Scratch verification of solver numerics against independent oracles."""
import time

import numpy as np
from scipy.optimize import minimize_scalar

from netcontest import *
from netcontest.nash import mutual_br_residual
from netcontest.stackelberg import _relative_stationarity

print("== 1. Friedman BR vs 1-D numeric maximization ==")


def br_oracle_n2(v, y, B):
    # maximize v0*x/(x+y0) + v1*(B-x)/(B-x+y1) over x in [0, B]
    def neg(x):
        return -(v[0] * x / (x + y[0]) + v[1] * (B - x) / (B - x + y[1]))

    res = minimize_scalar(neg, bounds=(0.0, B), method="bounded",
                          options={"xatol": 1e-14})
    return np.array([res.x, B - res.x])


for v, y, Bi, Bo in [((4, 1), (1, 1), 2, 2), ((1, 1), (3, 1), 1, 4)]:
    br = best_response(np.array(v, float), np.array(y, float), Bi, Bo)
    oracle = br_oracle_n2(v, y, Bi)
    print(f"v={v} y={y}: formula={br.spend}, oracle={oracle}, "
          f"diff={np.abs(br.spend-oracle).max():.2e}, sum={br.spend.sum()}")

print()
print("== 2. two-community NE root, alpha=2 beta=1 m=1 B=1 ==")
spec = TwoCommunitySpec(m=1, v=1.0, alpha=2.0, beta=1.0, budget_d=1.0, budget_a=1.0)


def gap(x, s):
    cap = s.budget_a / s.m
    y = cap - x
    own = -(s.budget_d / s.m) * s.alpha * x / (s.alpha * x + s.beta * y)
    pull = (s.budget_a + s.budget_d) / s.m * np.sqrt(s.alpha * x) / (
        np.sqrt(s.alpha * x) + np.sqrt(s.beta * y))
    return own + pull - x


# independent bisection
lo, hi = 1e-9, 1.0 - 1e-9
assert gap(lo, spec) > 0 and gap(hi, spec) < 0
for _ in range(200):
    mid = 0.5 * (lo + hi)
    if gap(mid, spec) > 0:
        lo = mid
    else:
        hi = mid
x_bisect = 0.5 * (lo + hi)
ne = nash_two_community(spec)
print(f"bisection root = {x_bisect!r}")
print(f"solver x_A[0]  = {ne.x_a.spend[0]!r}")
print(f"ne residual    = {ne.residual:.3e}")
print(f"x_D = {ne.x_d.spend}, x_A = {ne.x_a.spend}")
game = spec.game()
ratio = ne.x_d.spend / (game.v_d * ne.x_a.spend)
print(f"ratio identity spread = {ratio.max()-ratio.min():.3e}")

print()
print("== 3. NE two-community vs grid oracle (n=2, 200 steps) ==")
oracle = grid_nash_oracle(game, 200)
print(f"grid x_D={oracle.x_d.spend} x_A={oracle.x_a.spend}")
print(f"closed x_D={ne.x_d.spend} x_A={ne.x_a.spend}")
print(f"alloc diff D={np.abs(oracle.x_d.spend-ne.x_d.spend).max():.4f} "
      f"A={np.abs(oracle.x_a.spend-ne.x_a.spend).max():.4f} (pitch={1/200})")
print(f"payoff rel diff D={(oracle.payoff_d-ne.payoff_d)/ne.payoff_d:.2e}")

print()
print("== 4. SE two-community alpha=3 beta=1 m=1 B_D=4 (B_A=2) ==")
spec2 = TwoCommunitySpec(m=1, v=1.0, alpha=3.0, beta=1.0, budget_d=4.0, budget_a=2.0)
game2 = spec2.game()
r = np.sqrt(2) * (spec2.beta - spec2.alpha) / np.hypot(spec2.alpha, spec2.beta)
for sign in (1.0, -1.0):
    x = spec2.budget_d / 4 * (2 + sign * r)
    xd = np.array([x, spec2.budget_d - x])
    print(f"candidate x={x:.6f}: leader_objective={leader_objective(xd, game2):.6f}")
se = stackelberg_two_community(spec2)
print(f"chosen x_D = {se.x_d.spend}, x_A = {se.x_a.spend}")
print(f"stationarity rel residual = {se.residual:.3e}")
print(f"raw stationarity = {stationarity_residual(se.x_d.spend, game2)}")
print(f"x+y == B_D/m exactly: {se.x_d.spend[0] + se.x_d.spend[1] == spec2.budget_d}")
og = grid_stackelberg_oracle(game2, 200)
print(f"grid oracle leader payoff={og.payoff_d:.6f} vs closed={se.payoff_d:.6f} "
      f"rel={(og.payoff_d-se.payoff_d)/se.payoff_d:.2e}")
ne2 = nash_two_community(spec2)
print(f"leader advantage: SE {se.payoff_d:.6f} >= NE {ne2.payoff_d:.6f}")

print()
print("== 5. stackelberg_numeric vs closed forms ==")
num = stackelberg_numeric(game2)
print(f"numeric payoff={num.payoff_d!r} closed={se.payoff_d!r} "
      f"rel diff={(num.payoff_d-se.payoff_d)/se.payoff_d:.2e} "
      f"iters={num.iterations} converged={num.converged}")
gp = GameSpec(v_d=np.array([2.0, 6.0, 4.0]), v_a=np.array([1.0, 3.0, 2.0]),
              budget_d=3.0, budget_a=5.0)
nump = stackelberg_numeric(gp)
closp = stackelberg_proportional(gp)
print(f"proportional: numeric={nump.payoff_d:.12f} closed={closp.payoff_d:.12f}")

print("fallback case: B_D=40 B_A=1 alpha=9 beta=1")
spec3 = TwoCommunitySpec(m=1, v=1.0, alpha=9.0, beta=1.0, budget_d=40.0, budget_a=1.0)
game3 = spec3.game()
try:
    se3 = stackelberg_two_community(spec3)
    print(f"closed-form two-community: x_D={se3.x_d.spend} payoff={se3.payoff_d:.6f}")
except SolverError as e:
    print(f"closed form failed: {e}")
num3 = stackelberg_numeric(game3)
og3 = grid_stackelberg_oracle(game3, 400)
print(f"numeric x_D={num3.x_d.spend} payoff={num3.payoff_d:.6f} conv={num3.converged}")
print(f"grid    x_D={og3.x_d.spend} payoff={og3.payoff_d:.6f}")

print()
print("== 6. paper-scale sweep ==")
cfg = SweepConfig(m=50000, v=10.0, budget_a=200000.0,
                  budgets_d=[100000.0, 200000.0, 400000.0],
                  deltas=[round(0.1 * k, 1) for k in range(10)])
t0 = time.monotonic()
rows = run_sweep(cfg)
dt = time.monotonic() - t0
print(f"sweep took {dt:.2f}s, {len(rows)} rows")
for row in rows:
    print(f"  B_D={row.budget_d:>8.0f} delta={row.delta:.1f} "
          f"ne_D={row.ne_profit_d:>12.2f} se_D={row.se_profit_d:>12.2f} "
          f"pct={row.pct_increase_d:>10.6f} ne_res={row.ne_residual:.1e} "
          f"se_res={row.se_residual:.1e} err={row.error}")

print()
print("== 7. voter sim quick checks ==")
g = build_graph(3, [(0, 1), (1, 2), (0, 2)], add_self_loops=True)
w = np.array([1.0, 0.0, 0.0])
xd = np.array([1.0, 1.0, 1.0])
xa = np.array([1.0, 1.0, 1.0])
est = simulate_payoff(g, w, xd, xa, "D", 1, 100000, seed=7)
print(f"triangle tau=1 equal: {est.mean:.5f} +- {est.stderr:.5f} (expect 0.5)")
est2 = simulate_payoff(g, w, xd, xa, "D", 1, 100000, seed=7)
print(f"deterministic repeat: {est.mean == est2.mean}")
est_a = simulate_payoff(g, w, xd, xa, "A", 1, 100000, seed=7)
print(f"conservation: D+A = {est.mean + est_a.mean} (expect exactly 1.0)")

print()
print("== 8. x+y exactness across acceptance-5 style instances ==")
ok = True
for alpha in (0.2, 0.5, 1.0, 1.5, 3.0):
    for m in (1, 10):
        for bd in (1.0, 2.0, 4.0, 100000.0):
            s = TwoCommunitySpec(m=m, v=1.0, alpha=alpha, beta=2.0 - alpha if alpha < 2 else 1.0,
                                 budget_d=bd, budget_a=2.0 * bd)
            try:
                res = stackelberg_two_community(s)
            except SolverError:
                continue
            lhs = res.x_d.spend[0] + res.x_d.spend[m]
            if lhs != bd / m:
                ok = False
                print(f"  NOT exact: alpha={alpha} m={m} bd={bd}: {lhs!r} vs {bd/m!r}")
print(f"x+y exact everywhere: {ok}")
