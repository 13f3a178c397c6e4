"""How far can u(r e^{iθ}) stray from u(0)?

For a real harmonic u with ||u||_{h^1} = 1, the averaged deviation
M_1(r, u - u(0)) is at most 2 - (4/π) arccos r, and the Poisson kernel attains
it.  This script checks the formula against quadrature, tries a few other
test functions, and integrates the constant against area measure.
"""

import numpy as np
from scipy import integrate

from shiftnorm import HarmonicFn, bounds
from shiftnorm.circlefn import CircleFn, lp_norm
from shiftnorm.operators import szop_r_apply
from shiftnorm.spaces import h1_norm

N = 2**16

print("r     closed form    Poisson atom    |diff|")
atom = HarmonicFn.atom(1.0, 0.0, N)
for r in (0.1, 0.25, 0.5, 0.75, 0.9, 0.99):
    exact = bounds.sharp_szr_constant(r)
    quad = lp_norm(szop_r_apply(atom, r), 1)
    print(f"{r:<5} {exact:.10f}   {quad:.10f}   {abs(exact - quad):.1e}")

# Spreading the mass out can only lower the ratio.
rng = np.random.default_rng(0)
print("\nother test functions at r = 1/2 (bound 2/3):")
candidates = {
    "cutoff n=8": HarmonicFn(CircleFn.from_function(lambda t: 8 * np.pi * (np.abs(np.angle(np.exp(1j * t))) < 1 / 8),
                                                    4096)),
    "two atoms": HarmonicFn(CircleFn.constant(0.0, 4096), ((1.0, 0.0), (-0.5, 2.0))),
    "noise": HarmonicFn(CircleFn(rng.normal(size=4096))),
}
for name, u in candidates.items():
    print(f"  {name:<12} {lp_norm(szop_r_apply(u, 0.5), 1) / h1_norm(u):.6f}")

# Averaging over the disc with the area measure 2r dr gives exactly one.
val, err = integrate.quad(lambda r: bounds.sharp_szr_constant(r) * 2 * r, 0, 1)
print(f"\n∫_0^1 (2 - (4/π) arccos r) 2r dr = {val:.12f}  (quad error estimate {err:.0e})")
