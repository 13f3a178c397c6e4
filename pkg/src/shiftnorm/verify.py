"""Randomized property sweeps, one suite per module.

Every sweep returns :class:`BoundCertificate` objects summarizing the worst
case it saw.  Instance ``i`` of a sweep tagged ``tag`` draws from
``default_rng([seed, crc32(tag), i])``, so suites and single instances can be
re-run in isolation and give the same numbers for any worker count.
"""

from __future__ import annotations

import zlib
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy import integrate

from . import bounds, operators, rearrange
from .bounds import BoundCertificate
from .circlefn import (
    BoundarySet,
    CircleFn,
    convolve,
    decreasing_rearrangement,
    integrate_over,
    lp_norm,
    mean,
    step_function,
)
from .operators import ExtremalFamily, Space
from .spaces import (
    HarmonicFn,
    RadialWeight,
    TaylorFn,
    bergman_norm,
    h1_norm,
    harmonic_measure_arc,
    integral_mean,
    outer_function,
    outer_on_circle,
    poisson_extend,
    poisson_kernel,
)

SUITES = ("circlefn", "spaces", "operators", "bounds", "rearrange")


def instance_rng(seed: int, tag: str, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(tag.encode()), index])


def sweep(tag, seed, count, fn, jobs=1):
    """Run ``fn(rng)`` for ``count`` instances in a fixed order."""

    def one(i):
        return fn(instance_rng(seed, tag, i))

    if jobs <= 1:
        return [one(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(one, range(count)))


def summarize(name, values, tol, **params):
    """Certificate that every value in ``values`` is ``<= 0`` up to ``tol``.

    ``lhs`` is the worst value seen, so the margin reads as headroom.
    """
    values = np.asarray(values, dtype=float)
    worst = float(values.max()) if values.size else 0.0
    params = {"instances": values.size, "failures": int(np.sum(values > tol)), "tol": tol, **params}
    return BoundCertificate(name, worst, 0.0, "<=", params)


def random_taylor(rng, max_degree=8) -> TaylorFn:
    d = int(rng.integers(0, max_degree + 1))
    return TaylorFn(rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1))


def random_harmonic(rng, n=1024, max_atoms=3) -> HarmonicFn:
    boundary = CircleFn(rng.normal(size=n) * rng.uniform(0.1, 2.0) + rng.normal())
    k = int(rng.integers(0, max_atoms + 1))
    atoms = [(rng.normal() * 3, rng.uniform(0, 2 * np.pi)) for _ in range(k)]
    return HarmonicFn(boundary, atoms)


# --- circlefn ----------------------------------------------------------------


def suite_circlefn(seed=0, jobs=1):
    def one(rng):
        n = 256
        f, g = CircleFn(rng.normal(size=n)), CircleFn(rng.normal(size=n))
        fg = convolve(f, g)
        young = lp_norm(fg, 1) - lp_norm(f, 1) * lp_norm(g, 1) * (1 + 1e-12)
        mult = abs(mean(fg) - mean(f) * mean(g))
        fs = decreasing_rearrangement(f)
        idem = np.max(np.abs(decreasing_rearrangement(fs).samples - fs.samples))
        norms = max(abs(lp_norm(f, p) - lp_norm(fs, p)) for p in (1, 2, np.inf))
        s = BoundarySet(rng.random(n) < 0.5)
        split = abs(integrate_over(f, s) + integrate_over(f, s.complement()) - mean(f))
        return young, mult, max(idem, norms), split

    rows = np.array(sweep("circlefn", seed, 200, one, jobs))
    return [
        summarize("young_l1", rows[:, 0], 0.0),
        summarize("mean_of_convolution", rows[:, 1], 1e-12),
        summarize("rearrangement_idempotent_norms", rows[:, 2], 1e-12),
        summarize("set_complement_split", rows[:, 3], 1e-12),
    ]


# --- spaces --------------------------------------------------------------------


def suite_spaces(seed=0, jobs=1):
    radii = (0.2, 0.5, 0.8, 0.95)

    def monotone(rng):
        f = random_taylor(rng)
        worst = 0.0
        for p in (1, 2, np.inf):
            m = [integral_mean(f, r, p, 512) for r in radii + (1.0,)]
            worst = max(worst, float(np.max(-np.diff(m))))
        u = random_harmonic(rng)
        m = [integral_mean(u, r, 1) for r in radii]
        worst = max(worst, float(np.max(-np.diff(m))))
        mv = max(abs(mean(poisson_extend(u, r)) - u.value_at_zero()) for r in radii)
        psi = CircleFn(np.exp(rng.normal(size=512) * 0.5))
        outer = abs(outer_function(psi, 0) - np.exp(np.mean(np.log(psi.samples))))
        return worst, mv, outer

    rows = np.array(sweep("spaces", seed, 50, monotone, jobs))

    def arcs(rng):
        start = rng.uniform(0, 2 * np.pi)
        stop = start + rng.uniform(0, 2 * np.pi)
        s = step_function([start, stop], [1.0, 0.0], 2**16)
        out = []
        for r in (0.3, 0.7):
            quad = np.dot(s.weights, s.samples * poisson_kernel(r, s.angles))
            out.append(abs(quad - harmonic_measure_arc(r, start, stop)))
        return max(out)

    arc_err = sweep("spaces/arc", seed, 100, arcs, jobs)
    return [
        summarize("integral_means_monotone", rows[:, 0], 1e-10),
        summarize("mean_value_property", rows[:, 1], 1e-9),
        summarize("outer_value_at_zero", rows[:, 2], 1e-12),
        summarize("harmonic_measure_vs_quadrature", arc_err, 1e-8),
    ]


# --- operators -------------------------------------------------------------------


def suite_operators(seed=0, jobs=1):
    w2 = RadialWeight.power(2, 48)

    def one(rng):
        f = random_taylor(rng)
        if lp_norm(f.on_circle(1.0, 256), 1) == 0:
            return 0.0, 0.0, 0.0
        eq = 0.0
        doubling = []
        for p in (1, 4 / 3, 2, 3, np.inf):
            sp = Space.hardy(p)
            rb, rs = operators.ratio("B", f, sp, n=256), operators.ratio("S", f, sp, n=256)
            eq = max(eq, abs(rb - rs))
            doubling.append(rs - 2)
        doubling.append(operators.ratio("S", f, Space.bergman(1, w2), n=256) - 2)
        u = random_harmonic(rng, 256)
        if h1_norm(u) > 0:
            doubling.append(operators.ratio("S", u, Space.h1()) - 2)
        ss = operators.subtract_value(operators.subtract_value(f)).coeffs
        idem = float(np.max(np.abs(ss - operators.subtract_value(f).coeffs)))
        return eq, max(doubling), idem

    rows = np.array(sweep("operators", seed, 100, one, jobs))
    certs = [
        summarize("hardy_B_equals_S", rows[:, 0], 1e-12),
        summarize("S_at_most_two", rows[:, 1], 1e-9),
        summarize("S_idempotent", rows[:, 2], 0.0),
    ]
    certs += interpolation_sweep(seed, jobs) + bergman_sweep(seed, jobs) + sharp_h1_sweep(seed, jobs)
    searches = [
        ("S", Space.hardy(np.inf), ExtremalFamily.mobius(), 200, None),
        ("S", Space.h1(), ExtremalFamily.cutoff(64), 64, None),
        ("S", Space.hardy(2), ExtremalFamily.poly(4), 300, None),
        ("S", Space.hardy(1), ExtremalFamily.poly(4), 300, None),
        ("S_r", Space.h1(), ExtremalFamily.poisson(), 60, 0.5),
    ]
    for op, sp, fam, budget, r in searches:
        rep = operators.search_lower_bound(op, sp, fam, budget, seed, r=r, grid=1024, jobs=jobs)
        ub = bounds.proven_upper_bound(op, sp.kind, sp.p, r)
        certs.append(BoundCertificate(f"search_{op}_{sp.label()}_{fam.kind}", rep.best_ratio, ub, "<=",
                                      {"tol": 1e-6, "evaluations": rep.evaluations}))
    return certs


HARDY_EXPONENTS = (1.0, 4 / 3, 2.0, 3.0, np.inf)


def interpolation_sweep(seed=0, jobs=1, count=500):
    def one(rng):
        f = random_taylor(rng)
        out = []
        for p in HARDY_EXPONENTS:
            out.append(operators.ratio("B", f, Space.hardy(p), n=512) - bounds.interpolation_bound(p))
        out.append(operators.ratio("B", f, Space.hardy(2), n=512) - 1.0)
        return out

    rows = np.array(sweep("operators/interp", seed, count, one, jobs))
    certs = [summarize(f"B_interpolation_H{p:.4g}", rows[:, i], 1e-6) for i, p in enumerate(HARDY_EXPONENTS)]
    certs.append(summarize("B_contraction_H2", rows[:, -1], 1e-12))
    return certs


def bergman_sweep(seed=0, jobs=1, count=200, n=512):
    weights = {k: RadialWeight.power(k, 64) for k in (0, 2, 4)}

    def one(rng):
        f = random_taylor(rng)
        transfer = []
        for k in (0, 2):
            for p in (1.0, 4 / 3, 2.0, 3.0):
                for c in bounds.bergman_transfer_check(f, p, weights[k], bounds.interpolation_bound(p), n):
                    transfer.append(-c.margin)
        zf = [0.5 * bergman_norm(f, 1, w, n) - bergman_norm(operators.multiply_by_z(f), 1, w, n)
              for w in weights.values()]
        shift = [-c.margin for w in weights.values()
                 for c in bounds.bergman_transfer_check(f, 1, w, bounds.PUBLISHED_H1_SZOP, n)]
        return max(transfer), max(zf), max(shift)

    rows = np.array(sweep("operators/bergman", seed, count, one, jobs))
    return [
        summarize("bergman_S_transfer", rows[:, 0], 1e-12),
        summarize("bergman_z_lemma", rows[:, 1], 1e-12),
        summarize("bergman_B_transfer", rows[:, 2], 1e-12),
    ]


def sharp_h1_sweep(seed=0, jobs=1, count=200):
    radii = (0.25, 0.5, 0.75)

    def one(rng):
        u = random_harmonic(rng)
        norm = h1_norm(u)
        return max(lp_norm(operators.szop_r_apply(u, r), 1) - norm * bounds.sharp_szr_constant(r) for r in radii)

    return [summarize("h1_sharp_Sr", sweep("operators/sharp", seed, count, one, jobs), 1e-6)]


# --- bounds ----------------------------------------------------------------------


def thm2_instance(rng, n=1024):
    """Positive ``psi`` of unit mean concentrated on an arc; returns the check value."""
    delta_target = rng.uniform(0.02, 0.4)
    eps_target = rng.uniform(0.01, 0.4)
    start = rng.uniform(0, 2 * np.pi)
    e = BoundarySet.arc(start, start + 2 * np.pi * delta_target, n)
    delta = e.measure
    noise = np.exp(rng.normal(size=n) * rng.uniform(0, 1))
    inside = noise * e.mask
    outside = noise * ~e.mask
    psi = (1 - eps_target) * inside / inside.mean() + eps_target * outside / outside.mean()
    psi = CircleFn(psi / psi.mean())
    eps = 1 - integrate_over(psi, e)
    f0 = float(np.exp(np.mean(np.log(psi.samples))))
    return f0 - bounds.thm2_f0_upper_bound(eps, delta), eps, delta


def thm1_instance(rng, n=4096, max_tries=100):
    """Two-valued outer function; returns ``bound - m(A)`` for one concentrated set."""
    for _ in range(max_tries):
        s = rng.uniform(0.05, 0.95)
        g0 = rng.uniform(0.2, 0.95)
        start = rng.uniform(0, 2 * np.pi)
        arc = BoundarySet.arc(start, start + 2 * np.pi * s, n)
        psi = CircleFn(np.where(arc.mask, 1.0, g0))
        big_f = outer_on_circle(psi, 1 - 32 / n)
        f = big_f / lp_norm(big_f, 1)
        re = f.real.samples
        a = BoundarySet.where(f, re > np.quantile(re, rng.uniform(0, 0.3)))
        eps = 1 - integrate_over(f.real, a)
        if 0 < eps < 0.25:
            return bounds.thm1_measure_lower_bound(eps) - a.measure
    raise RuntimeError("no concentrated instance found")


def suite_bounds(seed=0, jobs=1):
    eps_grid = np.linspace(0.005, 0.245, 50)
    thm1 = np.array([bounds.thm1_measure_lower_bound(e) for e in eps_grid])
    in_range = float(np.all((thm1 > 0) & (thm1 < 1)))
    grid = np.linspace(0.01, 0.49, 50)
    thm2 = max(bounds.thm2_f0_upper_bound(e, d) for e in grid for d in grid)
    certs = [
        BoundCertificate("thm1_in_unit_interval", in_range, 1.0, "==", {}),
        summarize("thm1_nonincreasing", np.diff(thm1), 1e-12),
        BoundCertificate("thm2_below_one", thm2, 1.0, "<", {}),
    ]
    t2 = [row[0] for row in sweep("bounds/thm2", seed, 200, thm2_instance, jobs)]
    certs.append(summarize("thm2_outer_realization", t2, 1e-9))
    t1 = sweep("bounds/thm1", seed, 200, thm1_instance, jobs)
    certs.append(summarize("thm1_outer_realization", t1, 1e-6))
    for name, fn, ver in (
        ("h1_szop", bounds.optimize_h1_szop, bounds.verify_h1_szop_witness),
        ("h1_bshift", bounds.optimize_h1_bshift, bounds.verify_h1_bshift_witness),
        ("a1", bounds.optimize_a1, bounds.verify_a1_witness),
    ):
        res = fn()
        inside, outside = bounds.boundary_perturbation(res, ver)
        certs.append(BoundCertificate(f"{name}_genuine_boundary", float(inside and not outside), 1.0, "==",
                                      {"alpha": res.alpha, "beta": res.beta}))
    errs = [abs(sharp_quadrature(r) - bounds.sharp_szr_constant(r)) for r in np.arange(1, 10) / 10]
    certs.append(summarize("sharp_constant_quadrature", errs, 1e-6, grid=2**16))
    return certs


def sharp_quadrature(r, n=2**16):
    u = HarmonicFn.atom(1.0, 0.0, n)
    return lp_norm(operators.szop_r_apply(u, r), 1)


def corollary_integral():
    val, _ = integrate.quad(lambda r: bounds.sharp_szr_constant(r) * 2 * r, 0, 1, epsabs=1e-13, epsrel=1e-13)
    return val


# --- rearrange ----------------------------------------------------------------------


def exchange_trial(rng):
    """One admissible swap on a random signed matrix; returns ``D - D'``."""
    m, n = int(rng.integers(1, 6)), int(rng.integers(2, 6))
    a = rearrange.DeficiencyMatrix(rng.uniform(-10, 10, (m, n)), rng.uniform(-10 * m, 10 * m))
    d = a.column_deficiencies
    x = a.entries
    for _ in range(50):
        j = int(rng.integers(n))
        k = (j + 1 + int(rng.integers(n - 1))) % n
        if d[j] < d[k]:
            j, k = k, j
        rows = np.flatnonzero(x[:, j] <= x[:, k])
        if rows.size == 0 and d[j] == d[k]:
            j, k = k, j
            rows = np.flatnonzero(x[:, j] <= x[:, k])
        if rows.size:
            i = int(rows[rng.integers(rows.size)])
            return rearrange.deficiency(a) - rearrange.deficiency(rearrange.exchange_step(a, i, j, k))
    return 0.0


def suite_rearrange(seed=0, jobs=1, exchange_trials=100_000):
    drops = sweep("rearrange/exchange", seed, exchange_trials, exchange_trial, 1)
    certs = [summarize("exchange_monotone", drops, 1e-12)]

    def conv(rng):
        n = 512
        p = CircleFn(rng.random(n) ** rng.uniform(0.5, 4))
        f = CircleFn(rng.random(n) ** rng.uniform(0.5, 4))
        g = CircleFn(rng.normal(size=n) + rng.normal())
        c1 = rearrange.conv_rearrangement_check(p, f, strict_nonneg=True)
        c2 = rearrange.conv_rearrangement_check(p, g)
        a, b = rearrange.signed_masses(g / lp_norm(g, 1))
        masses = max(abs(a + b - 1), abs(a - b - mean(g / lp_norm(g, 1))))
        return -c1.margin, -c2.margin, masses

    rows = np.array(sweep("rearrange/conv", seed, 1000, conv, jobs))
    certs += [
        summarize("conv_rearrangement_nonneg", rows[:, 0], 1e-9),
        summarize("conv_rearrangement_signed", rows[:, 1], 1e-9),
        summarize("signed_mass_decomposition", rows[:, 2], 1e-12),
    ]

    def matrix(rng):
        n = 64
        p = CircleFn(rng.random(n))
        f = CircleFn(rng.normal(size=n))
        cert = rearrange.conv_rearrangement_check(p, f)
        d, d_sorted = rearrange.matrix_route(p, f)
        verdict = (d <= d_sorted + 1e-9) == cert.passed
        return max(abs(2 * d / n**2 - cert.lhs), abs(2 * d_sorted / n**2 - cert.rhs), 0.0 if verdict else 1.0)

    certs.append(summarize("matrix_route_agreement", sweep("rearrange/matrix", seed, 100, matrix, jobs), 1e-12))

    def profiles(rng):
        n = int(rng.integers(4, 200))
        v = np.sort(rng.random(n) ** rng.uniform(0.2, 5))[::-1]
        p = CircleFn(v / v.mean())
        a = rng.random()
        cert = rearrange.pq_comparison_check(p, a, 1 - a)
        return -cert.margin if cert.params["hypothesis"] else None

    vals = sweep("rearrange/pq", seed, 200, profiles, jobs)
    held = [v for v in vals if v is not None]
    certs.append(summarize("pq_comparison", held, 1e-9, hypothesis_failed=len(vals) - len(held)))

    def two_step(rng):
        h1 = 1 + rng.uniform(0, 5)
        p = CircleFn(np.array([h1, 2 - min(h1, 2)]) if h1 <= 2 else np.array([h1, 0.0]))
        p = p / mean(p)
        cert = rearrange.pq_comparison_check(p, 0.5, 0.5)
        closed = (p.samples[0] - p.samples[1]) / 2
        return max(abs(cert.lhs - closed), abs(cert.rhs - closed))

    certs.append(summarize("pq_half_half_closed_form", sweep("rearrange/two", seed, 50, two_step, jobs), 1e-12))
    return certs


def run_suite(name, seed=0, jobs=1):
    fn = {
        "circlefn": suite_circlefn,
        "spaces": suite_spaces,
        "operators": suite_operators,
        "bounds": suite_bounds,
        "rearrange": suite_rearrange,
    }[name]
    certs = fn(seed, jobs)
    for c in certs:
        c.name = f"{name}.{c.name}"
    return certs
