"""
Circuits, designs, and the information criterion
================================================

A route over m delivery zones is a Hamiltonian circuit. This walk-through
builds a few, shows the canonical labelling, and scores subsets of circuits
by how much they would tell us about per-edge travel costs.
"""

import numpy as np

from routedesign import (
    Design,
    PriorSpec,
    bayes_d_criterion,
    canonicalize,
    circuit_cost,
    encode,
    enumerate_circuits,
    full_moment_matrix,
    model_matrix,
    relative_d_efficiency,
)

# Any rotation or reversal of a vertex sequence is the same physical route.
# The canonical form starts at 1 and fixes the direction of travel.
print(canonicalize([3, 2, 1, 4, 5]))
print(canonicalize([1, 5, 4, 2, 3]))

# With m = 5 zones there are (5-1)!/2 = 12 distinct circuits.
circuits = enumerate_circuits(5)
print(len(circuits), "circuits on 5 vertices")

# A circuit's encoding marks which of the C(5,2) = 10 edges it uses;
# a route total is the dot product of the encoding with the edge costs.
c = circuits[0]
rng = np.random.default_rng(0)
beta = rng.uniform(0.5, 2.0, 10)
print("encoding:", encode(c).astype(int))
print("total cost:", circuit_cost(c, beta))

# Observing totals for a subset of circuits gives a linear model whose
# information is summarised by X'X plus the prior precision R.
design = Design(5, circuits[:6])
prior = PriorSpec.isotropic(5, 0.01)
print("model matrix shape:", model_matrix(design).shape)
print("log det criterion:", bayes_d_criterion(design, prior))

# Relative efficiency compares a design against the equal-weight benchmark
# over all circuits; 1.0 means nothing is lost by running fewer routes.
print("efficiency of 6 arbitrary rows:", relative_d_efficiency(design, prior))
print("efficiency of all 12 rows:   ",
      relative_d_efficiency(Design(5, circuits), prior))

# The benchmark itself has a closed form; no enumeration is needed at
# sizes where enumeration would be hopeless.
print("benchmark moment matrix, m=30, corner:")
print(full_moment_matrix(30)[:3, :3])
