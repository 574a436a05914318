"""
Secretaries, exactly and by sampling
====================================

The harness averages over every arrival order (and every coin outcome) for
small instances, and samples otherwise.
"""
from msl import (
    ClassicalSecretary,
    KleinbergUNI,
    RandomBasis,
    UniformMatroid,
    complete_graph,
    evaluate_exact,
    evaluate_monte_carlo,
)
from msl.algorithms import classical_success_probability
from msl.enumeration import basis_membership

# Dynkin's rule: skip the first t, then hire the first one better than all of them
for n, t in [(3, 1), (5, 1), (8, 2), (10, 3)]:
    p = classical_success_probability(n, t)
    print(f"n={n:2d} t={t}: P(best) = {p} ~ {float(p):.4f}")

U = UniformMatroid(1, 3)
rep = evaluate_exact(ClassicalSecretary(3, 1), U, [1.0, 0.0, 0.0])
print("exhaustive n=3:", rep.mean, "over", rep.trials, "orders")

# RB ignores weights; its value is sum_e w(e) P(e in a random basis)
K4 = complete_graph(4)
w = [0.9, 0.4, 0.1, 0.7, 0.3, 0.5]
memb = basis_membership(K4)
print("P(e in B):", {e: str(p) for e, p in memb.items()})
formula = sum(wi * float(memb[e]) for e, wi in zip(sorted(K4.ground), w))
print("RB exact", evaluate_exact(RandomBasis(K4), K4, w).mean, "formula", formula)

mc = evaluate_monte_carlo(RandomBasis(K4), K4, w, trials=10_000, seed=1)
print(f"RB sampled {mc.mean:.4f} +- {mc.se:.4f}, ratio {mc.ratio:.3f}")

# UNI on a uniform matroid: multiple-choice secretary by recursive halving
U = UniformMatroid(40, 200)
rep = evaluate_monte_carlo(KleinbergUNI(40, 200), U, [1 / (i + 1) for i in range(200)],
                           trials=2000, seed=2)
print(f"UNI[40] on U40,200: ratio {rep.ratio:.3f}")
