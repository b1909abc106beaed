"""Probe SE root choice near the dip and time the Monte Carlo loop."""
import time

import numpy as np

from netcontest import *
from netcontest.stackelberg import leader_objective

print("== SE vs grid oracle, m=1 scaled version of B_D=2*B_A rows ==")
for delta in (0.5, 0.6, 0.7, 0.75, 0.8):
    spec = TwoCommunitySpec(m=1, v=10.0, alpha=1 - delta, beta=1 + delta,
                            budget_d=8.0, budget_a=4.0)
    game = spec.game()
    se = stackelberg_two_community(spec)
    ne = nash_two_community(spec)
    og = grid_stackelberg_oracle(game, 400)
    r = np.sqrt(2) * (spec.beta - spec.alpha) / np.hypot(spec.alpha, spec.beta)
    objs = []
    for sign in (1.0, -1.0):
        x = spec.budget_d / 4 * (2 + sign * r)
        xd = np.array([x, spec.budget_d - x])
        fr = best_response(game.v_a, xd, game.budget_a, game.budget_d)
        objs.append((x, leader_objective(xd, game), fr.feasible))
    print(f"delta={delta}: SE={se.payoff_d:.6f} NE={ne.payoff_d:.6f} "
          f"grid={og.payoff_d:.6f} grid_xd={og.x_d.spend}")
    for x, o, feas in objs:
        print(f"    cand x={x:.4f} obj={o:.6f} follower_feasible={feas}")
    print(f"    chosen x_D={se.x_d.spend} x_A={se.x_a.spend}")

print()
print("== timing: 1e5 voter runs on n=8, tau=4 ==")
g = build_graph(8, [(i, (i + 1) % 8) for i in range(8)], add_self_loops=True)
w = np.arange(1.0, 9.0)
xd = np.linspace(0.5, 2.0, 8)
xa = np.linspace(2.0, 0.5, 8)
t0 = time.monotonic()
est = simulate_payoff(g, w, xd, xa, "D", 4, 100000, seed=3)
dt = time.monotonic() - t0
print(f"1e5 runs took {dt:.2f}s -> mean {est.mean:.4f} +- {est.stderr:.4f}")
v = network_values(g, w, 4).values
analytic = expected_payoff(xd, xa, v)
print(f"analytic {analytic:.4f}, z = {(est.mean - analytic)/est.stderr:.3f}")
