"""Recover 1.952396, 1.7047 and 1.835 from their contradiction inequalities.

Each bound 2 - α comes from an inequality in auxiliary constants (α, β[, γ])
that rules out unit-norm functions with ||f - f(0)|| > 2 - α.  The largest
admissible α is found by bisecting the pass/fail boundary for each β and
then maximizing over β.
"""

from shiftnorm import bounds

rows = (
    ("S on H^1", bounds.optimize_h1_szop, bounds.verify_h1_szop_witness, bounds.PUBLISHED_H1_SZOP,
     bounds.PUBLISHED_SZOP_WITNESS),
    ("B on H^1", bounds.optimize_h1_bshift, bounds.verify_h1_bshift_witness, bounds.PUBLISHED_H1_BSHIFT,
     bounds.PUBLISHED_BSHIFT_WITNESS),
    ("S on a^1", bounds.optimize_a1, bounds.verify_a1_witness, bounds.PUBLISHED_A1, bounds.PUBLISHED_A1_WITNESS),
)

for label, opt, verifier, published, witness in rows:
    res = opt()
    extra = () if res.gamma is None else (res.gamma,)
    inside, outside = bounds.boundary_perturbation(res, verifier)
    print(f"{label}: bound {res.bound:.7f} (published {published})")
    print(f"  optimum α = {res.alpha:.7f}, β = {res.beta:.6f}" + (f", γ = {res.gamma:.6f}" if extra else ""))
    print(f"  boundary check: step inside passes = {inside}, step outside passes = {outside}")
    c = verifier(*witness)
    flags = {k: v for k, v in c.params.items() if k in ("boundary", "range_violation") and v}
    print(f"  published witness {witness}: lhs {c.lhs:.9f} {c.relation} rhs {c.rhs:.9f}, "
          f"margin {c.margin:+.2e}, pass = {c.passed} {flags or ''}")

# the ratio γ -> [log(γ + ε) - log(1 - 2ε)] / log γ bounds the measure of
# any set carrying 1 - ε of Re f
print("\nmeasure lower bound for concentrated Re f")
for eps in (0.01, 0.05, 0.1, 0.2, 0.24):
    gamma, value = bounds.thm1_argmax(eps)
    print(f"  ε = {eps:<5} m(A) ≥ {value:.6f}  (γ = {gamma:.4f})")
