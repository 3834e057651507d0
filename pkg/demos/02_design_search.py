"""
Finding good designs: construction and search
=============================================

Two ways to pick which routes to observe. When the size works out to a
recursive half-fraction, an exact construction is available; for arbitrary
sizes, seeded heuristic search gets close to the benchmark.
"""

import numpy as np

from routedesign import (
    PriorSpec,
    SearchConfig,
    base_design,
    construct_design,
    multi_start,
    relative_d_efficiency,
)

# The m = 5 base: six routes as informative per run as all twelve.
base = base_design(5)
for c in base.circuits:
    print(c)
prior5 = PriorSpec.isotropic(5, 1e-6)
print("base efficiency:", relative_d_efficiency(base, prior5))

# Each expansion step lifts the design one vertex up while preserving
# full efficiency: 6 rows at m=5, 30 at m=6, 180 at m=7.
for m in (6, 7):
    d = construct_design(m)
    eff = relative_d_efficiency(d, PriorSpec.isotropic(m, 1e-6))
    print(f"m={m}: {d.n} rows, efficiency {eff:.9f}")

# In between those sizes, search. Two local-move heuristics are provided;
# the exchange ("bubble") variant is the stronger default, the annealer
# explores more at small sizes. Both are deterministic per seed.
prior = PriorSpec.isotropic(8, 0.01)
for algo in ("bubble", "anneal"):
    cfg = SearchConfig(max_iter=2000, restarts=4, seed=0)
    d = multi_start(8, 29, prior, algo, cfg)
    print(f"{algo:6s} m=8 n=29 efficiency:",
          round(relative_d_efficiency(d, prior), 4))

# More restarts and iterations buy quality; the package's benchmark grid
# (routedesign table2 on the command line) quantifies the trade at scale.
cfg = SearchConfig(max_iter=4000, restarts=8, seed=1)
d = multi_start(8, 29, prior, "bubble", cfg)
print("longer bubble search:   ",
      round(relative_d_efficiency(d, prior), 4))
