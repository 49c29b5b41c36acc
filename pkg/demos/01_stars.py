"""Star graphs: where per-edge angles visibly beat shared ones.

A star S_n is one center adjacent to n - 1 leaves. It is bipartite, so
the whole edge set can be cut at once (C_max = n - 1). Plain one-layer
QAOA cannot get there: its best per-edge value slides down to 3/4 as
the star grows. Give every edge and vertex its own angle and a single
layer cuts everything.

Run: python3 demos/01_stars.py
"""

import numpy as np

from maqaoa import (OptimizerConfig, optimize_ma_qaoa, optimize_qaoa,
                    star_graph, star_qaoa1_limit)

cfg = OptimizerConfig(seeds=20, max_iterations=300)

print("n    shared-angle per-edge   closed-form limit   multi-angle AR")
for n in (3, 4, 5, 8, 12, 20):
    g = star_graph(n)
    plain = optimize_qaoa(g, 1, cfg, backend="analytic", seed=n)
    ma = optimize_ma_qaoa(g, cfg, seed=n)
    print(f"{n:<4d} {plain.best_value / g.m:<23.6f} "
          f"{star_qaoa1_limit(n):<19.6f} {ma.approximation_ratio:.9f}")

print()
print("The shared-angle column flattens at 0.75 from n = 5 on; the")
print("closed-form column is the same number computed without any")
print("optimizer, by maximizing the single-edge expression directly.")
print(f"Far out on the tail: star_qaoa1_limit(10**4) = "
      f"{star_qaoa1_limit(10**4):.12f}")

# what the optimizer actually found for one small star
g = star_graph(5)
res = optimize_ma_qaoa(g, cfg, seed=5)
beta = np.round(res.best_angles.beta[0], 4)
gamma = np.round(res.best_angles.gamma[0], 4)
print()
print(f"S_5 multi-angle solution (one layer): value {res.best_value:.9f} "
      f"of C_max {res.c_max}")
print(f"  per-vertex beta:  {beta.tolist()}")
print(f"  per-edge gamma:   {gamma.tolist()}")
