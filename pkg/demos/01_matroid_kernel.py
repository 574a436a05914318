"""
Matroids as rank oracles
========================

A tour of the kernel: concrete families, views, and the brute-force checks
used throughout the tests.
"""
import numpy as np

from msl import UniformMatroid, complete_graph, dual, r10, simplify, truncate
from msl.enumeration import density, enumerate_bases, enumerate_circuits, is_paving, opt

# the cycle matroid of K4: six edges, rank 3, Cayley says 16 spanning trees
K4 = complete_graph(4)
print(K4, "bases:", len(enumerate_bases(K4)))

# closures and minors
print("cl({1,2}) =", sorted(K4.closure({1, 2})))
print("K4 / 1 has rank", K4.contract({1}).full_rank)

# duality is an involution; the dual of U_{2,5} is U_{3,5}
print("dual(U2,5) rank:", dual(UniformMatroid(2, 5)).full_rank)

# R10 from its GF(2) matrix, verified rather than trusted
R = r10()
print("R10: rank", R.full_rank, "bases", len(enumerate_bases(R)),
      "smallest circuit", min(map(len, enumerate_circuits(R))), "density", density(R))

# paving matroids have uniform truncations
print("K4 paving?", is_paving(K4), " T(K4) rank", truncate(K4).full_rank)

S, reps = simplify(UniformMatroid(1, 3))
print("si(U1,3) has", len(S), "element(s); class map", reps)

rng = np.random.default_rng(0)
w = rng.random(6)
print("opt(K4, w) =", round(opt(K4, w.tolist()), 4))
