"""Why the Poisson kernel is extremal: rearrangement in three steps.

1. Swapping entries within a row towards columns that already exceed the
   threshold never lowers the deficiency D.
2. Hence sorting rows maximizes D, which says ||P * f - mean||_1 is largest
   when P is replaced by its decreasing rearrangement.
3. For signed f the comparison function is Q = a P* - b P*(reflected), and
   ||Q - mean Q||_1 <= ||P - 1||_1 whenever the crossing hypothesis holds,
   as it does for every Poisson profile.
"""

import numpy as np

from shiftnorm.circlefn import CircleFn
from shiftnorm.rearrange import (
    DeficiencyMatrix,
    conv_rearrangement_check,
    deficiency,
    exchange_step,
    matrix_route,
    poisson_step_profile,
    pq_comparison_check,
    sort_rows_descending,
)

a = DeficiencyMatrix([[0, 2], [1, 0]], 1)
b = exchange_step(a, 1, 1, 0)
print(f"exchange: D = {deficiency(a)} -> {deficiency(b)}; entries now {b.entries.tolist()}")
print(f"sorted rows: D = {deficiency(sort_rows_descending(a))}")

rng = np.random.default_rng(4)
p, f = CircleFn(rng.random(256)), CircleFn(rng.normal(size=256))
d, d_sorted = matrix_route(p, f)
c = conv_rearrangement_check(p, f)
print(f"\nrandom P, signed f: ||P*f - mean||_1 = {c.lhs:.6f} <= {c.rhs:.6f}")
print(f"  via matrices: 2D/N^2 = {2 * d / 256**2:.6f}, sorted {2 * d_sorted / 256**2:.6f}")

print("\nPoisson profiles on [0, π]:")
for r in (0.3, 0.5, 0.8):
    prof = poisson_step_profile(r, 2048)
    for share in (0.1, 0.3, 0.5):
        c = pq_comparison_check(prof, 1 - share, share)
        print(f"  r = {r}, a = {1 - share:.1f}: c = {c.params['c']:.4f}, "
              f"hypothesis {'holds' if c.params['hypothesis'] else 'fails'}, "
              f"{c.lhs:.5f} <= {c.rhs:.5f}")
