"""
Lifts, projections and tree compositions
========================================

Each wrapper turns an algorithm for one matroid into an algorithm for a
nearby one.  We measure the inner ratio c, the wrapped ratio, and the bound
the wrapper promises in terms of c.
"""
import math

from msl import (
    ThresholdGreedy,
    evaluate_exact,
    lemma_lambda_witness,
    lift_wrap,
    multi_project_wrap,
    project_wrap,
    tree_compose,
)
from msl.combinators import E_PLUS_1
from msl.fixtures import k4_triangle_star, triple_parallel_graph

# lift: L has a 3-element parallel class containing x = 1
L = triple_parallel_graph()
M = L.contract({1})
w = [0.9, 0.2, 0.5, 0.7]
c = evaluate_exact(ThresholdGreedy(M), M, w).ratio
lifted = evaluate_exact(lift_wrap(L, 1, ThresholdGreedy(M)), L.delete({1}), w)
print(f"lift: c={c:.3f}  wrapped={lifted.ratio:.3f}  bound max(e, 2c)={max(math.e, 2 * c):.3f}")

# projection: N = P / x; the coin picks secretary or pretend-hiring
P, x = L, 4
N = P.contract({x})
ground = P.delete({x}).ground - N.loops()
inner_M = P.delete({x}).restrict(ground)
c = evaluate_exact(ThresholdGreedy(inner_M), inner_M, [0.9, 0.2, 0.5, 0.7]).ratio
proj = evaluate_exact(project_wrap(P, x, ThresholdGreedy(inner_M)), N.restrict(ground),
                      [0.9, 0.2, 0.5, 0.7])
print(f"project: c={c:.3f}  wrapped={proj.ratio:.3f}  bound (e+1)c={E_PLUS_1 * c:.3f}")

# M(K4) split into a star and a triangle has thickness 2
K4, td = k4_triangle_star()
wit = lemma_lambda_witness(K4, td.parts["star"])
print("star needs", wit.t, "projections to reach K4 / triangle")
alg = multi_project_wrap(wit, ThresholdGreedy(K4.restrict(td.parts["star"])))
print("multi-projected algorithm works on", sorted(alg.ground))

alg, plan = tree_compose(K4, td, lambda N, v, label: ThresholdGreedy(N), leaf_constant=2.5)
rep = evaluate_exact(alg, K4, [0.5, 0.9, 0.1, 0.7, 0.3, 0.6], strict=True)
print(f"tree: ratio {rep.ratio:.3f}, violations {rep.violations}, claim {plan.root_claim:.1f}")
print(plan.to_json())
