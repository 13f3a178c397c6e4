"""Lower bounds for ||f - f(0)|| / ||f|| from explicit families.

On H^∞ the Möbius maps (a - z)/(1 - a z) give 1 + a, so the norm is 2.  On
h^1 the normalized cutoffs f_n give 2 - 2/(π n).  On H^2 subtracting the
constant is an orthogonal projection and nothing beats 1.
"""

import numpy as np

from shiftnorm import ExtremalFamily, MobiusFn, Space, ratio, search_lower_bound
from shiftnorm.operators import cutoff, sign_alternating

print("Möbius maps on H^∞")
for a in (0.5, 0.9, 0.99, 0.999):
    print(f"  a = {a:<6} ratio = {ratio('S', MobiusFn(a), Space.hardy(np.inf)):.6f}   1 + a = {1 + a}")

print("\ncutoffs on h^1")
for n in (1, 2, 4, 16, 64):
    r = ratio("S", cutoff(n), Space.h1())
    print(f"  n = {n:<3} ratio = {r:.8f}   2 - 2/(πn) = {2 - 2 / (np.pi * n):.8f}")
print(f"  sign-alternating g_4 ratio = {ratio('S', sign_alternating(4), Space.h1()):.12f}")

print("\nsearches (seeded, so reruns agree)")
for op, space, fam, budget in (
    ("S", Space.hardy(np.inf), ExtremalFamily.mobius(), 200),
    ("S", Space.hardy(2), ExtremalFamily.poly(4), 400),
    ("S", Space.hardy(1), ExtremalFamily.poly(4), 400),
    ("B", Space.hardy(3), ExtremalFamily.poly(4), 400),
):
    rep = search_lower_bound(op, space, fam, budget, seed=0, grid=1024)
    print(f"  {op} on {space.label():<5} {fam.kind:<7} best {rep.best_ratio:.6f}")
