"""Criterion-4 style grid: NE certificates + br_dynamics agreement."""
import time

import numpy as np

from netcontest import *

t0 = time.monotonic()
worst_res = 0.0
worst_ratio = 0.0
worst_brdx = 0.0
for alpha in (0.2, 0.5, 1.0):
    beta = 2.0 - alpha
    for m in (1, 10):
        for ratio in (0.5, 1.0, 2.0):
            budget_a = 2.0
            budget_d = ratio * budget_a
            spec = TwoCommunitySpec(m=m, v=1.0, alpha=alpha, beta=beta,
                                    budget_d=budget_d, budget_a=budget_a)
            game = spec.game()
            ne = nash_two_community(spec)
            worst_res = max(worst_res, ne.residual)
            rat = ne.x_d.spend / (game.v_d * ne.x_a.spend)
            spread = (rat.max() - rat.min()) / rat.max()
            worst_ratio = max(worst_ratio, spread)
            dyn, rep = nash_br_dynamics(game)
            dx = max(np.abs(dyn.x_d.spend - ne.x_d.spend).max(),
                     np.abs(dyn.x_a.spend - ne.x_a.spend).max())
            worst_brdx = max(worst_brdx, dx)
            print(f"a={alpha} m={m:>2} r={ratio}: res={ne.residual:.2e} "
                  f"ratio_spread={spread:.2e} brdyn_dx={dx:.2e} "
                  f"iters={rep.iterations} conv={rep.converged}")
print(f"\nworst: residual={worst_res:.3e} ratio={worst_ratio:.3e} brdyn={worst_brdx:.3e}")
print(f"elapsed {time.monotonic()-t0:.2f}s")

print("\n== proportional + symmetry invariances ==")
rng = np.random.default_rng(11)
for trial in range(5):
    n = 5
    v_a = np.full(n, 1.0)
    v_d = rng.uniform(0.5, 3.0, n)
    v_d[3] = v_d[1]  # planted equal pair
    game = GameSpec(v_d=v_d, v_a=v_a, budget_d=2.0, budget_a=3.0)
    res, rep = nash_br_dynamics(game, tol=1e-12)
    pair_gap = max(abs(res.x_a.spend[1] - res.x_a.spend[3]),
                   abs(res.x_d.spend[1] - res.x_d.spend[3]))
    scaled, _ = nash_br_dynamics(GameSpec(v_d=7.0 * v_d, v_a=v_a,
                                          budget_d=2.0, budget_a=3.0), tol=1e-12)
    scale_gap = max(np.abs(scaled.x_d.spend - res.x_d.spend).max(),
                    np.abs(scaled.x_a.spend - res.x_a.spend).max())
    print(f"trial {trial}: planted-pair gap={pair_gap:.2e} scale gap={scale_gap:.2e} "
          f"iters={rep.iterations} conv={rep.converged} residual={res.residual:.2e}")
