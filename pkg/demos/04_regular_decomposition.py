"""
Composing along a supplied decomposition
========================================

Reads a matroid and a labelled tree-decomposition from a text file, checks
thickness and fullness, and assembles the composed algorithm.
"""
from pathlib import Path

from msl import ThresholdGreedy, evaluate_monte_carlo, regular_compose
from msl.fileformat import load_decomposition

dec = load_decomposition(Path(__file__).parent / "data" / "two_sum.dec")
print("matroid", dec.matroid, "edge thickness", dec.edge_thickness)

alg, plan = regular_compose(dec)
target = dec.matroid.restrict(dec.target)
w = [0.9, 0.1, 0.5, 0.3, 0.8, 0.6]
rep = evaluate_monte_carlo(alg, target, w, trials=10_000, seed=0)
print(f"composed: mean {rep.mean:.4f} +- {rep.se:.4f}, ratio {rep.ratio:.3f}, "
      f"violations {rep.violations}")

greedy = evaluate_monte_carlo(ThresholdGreedy(target), target, w, trials=10_000, seed=0)
print(f"threshold greedy directly: ratio {greedy.ratio:.3f}")
print("peels:", [(p["leaf"], p["moved"], p["t"]) for p in plan.peels])
