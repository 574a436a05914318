"""
Random sparse paving matroids
=============================

RB against 2 + gamma/sqrt(n), PAV against (1 - 6/sqrt(r))^-1 and UNI against
(1 - 5/sqrt(r))^-1.  Set TRIALS higher for tighter error bars.
"""
from msl.experiments import pav_sweep, rb_sweep, uni_sweep

TRIALS = 2000

for row in rb_sweep((20, 40, 80), seed=0, trials=TRIALS):
    print(f"RB  n={row.n:3d} r={row.r:2d} ratio={row.ratio:.3f} (exact {row.extra['exact_ratio']:.3f})"
          f" bound={row.bound:.3f} ok={row.satisfied}")

for row in pav_sweep((37, 49, 64), seed=0, trials=TRIALS):
    print(f"PAV r={row.r} n={row.n} ratio={row.ratio:.3f} bound={row.bound:.3f} ok={row.satisfied}")

for row in uni_sweep((36, 48, 63), seed=0, trials=TRIALS):
    print(f"UNI r={row.r} n={row.n} ratio={row.ratio:.3f} bound={row.bound:.3f} ok={row.satisfied}")
