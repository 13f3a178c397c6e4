"""The twelve acceptance criteria, one test each.

Each test prints a ``criterion N: PASS|FAIL`` line; the same lines are
repeated in the terminal summary.  Criteria 6 to 11 read the randomized
sweeps from the ``verify all`` report that criterion 12 produces.
"""

import json

import numpy as np
import pytest
from scipy import integrate

from shiftnorm import bounds
from shiftnorm.cli import main
from shiftnorm.operators import (
    ExtremalFamily,
    MobiusFn,
    Space,
    cutoff,
    poisson_bump,
    ratio,
    search_lower_bound,
    sign_alternating,
)
from shiftnorm.verify import sharp_quadrature

RESULTS = {}


def record(number, ok, detail):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[number] = line
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def verify_reports(tmp_path_factory):
    out = {}
    for jobs in (1, 4):
        path = tmp_path_factory.mktemp("verify") / f"jobs{jobs}.json"
        code = main(["verify", "all", "--seed", "1", "--jobs", str(jobs), "--format", "json", "--out", str(path)])
        out[jobs] = (code, path.read_bytes())
    return out


@pytest.fixture(scope="module")
def certs(verify_reports):
    doc = json.loads(verify_reports[1][1])
    return {c["name"]: c for c in doc["certificates"]}


def sweep_ok(certs, names, instances):
    picked = [certs[n] for n in names]
    ok = all(c["pass"] and c["params"]["failures"] == 0 and c["params"]["instances"] == instances for c in picked)
    worst = max(c["lhs"] for c in picked)
    return ok, worst


def test_criterion_01_sharp_constant():
    errs = {r: abs(sharp_quadrature(r, 2**16) - bounds.sharp_szr_constant(r)) for r in np.arange(1, 10) / 10}
    half = abs(sharp_quadrature(0.5, 2**16) - 2 / 3)
    record(1, max(errs.values()) < 1e-6 and half < 1e-6, f"max quadrature error {max(errs.values()):.2e}")


def test_criterion_02_corollary_integral():
    val, _ = integrate.quad(lambda r: bounds.sharp_szr_constant(r) * 2 * r, 0, 1, epsabs=1e-13, epsrel=1e-13)
    record(2, abs(val - 1) < 1e-8, f"integral = {val:.15f}")


def test_criterion_03_constants():
    ok = True
    parts = []
    for opt, verifier, target in (
        (bounds.optimize_h1_szop, bounds.verify_h1_szop_witness, bounds.PUBLISHED_H1_SZOP),
        (bounds.optimize_h1_bshift, bounds.verify_h1_bshift_witness, bounds.PUBLISHED_H1_BSHIFT),
        (bounds.optimize_a1, bounds.verify_a1_witness, bounds.PUBLISHED_A1),
    ):
        res = opt()
        extra = () if res.gamma is None else (res.gamma,)
        ok &= abs(res.bound - target) < 5e-3 and verifier(res.alpha, res.beta, *extra).passed
        parts.append(f"{res.bound:.6f}")
    a1 = bounds.verify_a1_witness(*bounds.PUBLISHED_A1_WITNESS)
    ok &= a1.passed and a1.lhs - a1.rhs > 0
    for c in (bounds.verify_h1_szop_witness(*bounds.PUBLISHED_SZOP_WITNESS),
              bounds.verify_h1_bshift_witness(*bounds.PUBLISHED_BSHIFT_WITNESS)):
        ok &= c.passed and abs(c.lhs - c.rhs) < 1e-4
    record(3, ok, f"bounds {', '.join(parts)}; a1 witness lhs-rhs {a1.lhs - a1.rhs:.2e}")


def test_criterion_04_hinf_limit():
    rep = search_lower_bound("S", Space.hardy(np.inf), ExtremalFamily.mobius(), 200, seed=0)
    dev = max(abs(ratio("S", MobiusFn(a), Space.hardy(np.inf)) - (1 + a)) for a in (0.5, 0.9, 0.99))
    record(4, rep.best_ratio >= 1.99 and dev < 1e-4, f"search {rep.best_ratio:.6f}, closed-form deviation {dev:.1e}")


def test_criterion_05_extremal_families():
    cut = max(abs(ratio("S", cutoff(n), Space.h1()) - (2 - 2 / (np.pi * n))) for n in (2, 4, 16, 64))
    alt = max(abs(ratio("S", sign_alternating(n), Space.h1()) - 1) for n in (2, 4, 16, 64))
    atom = poisson_bump(1.0, 2**16)
    sharp = max(abs(ratio("S_r", atom, Space.h1(), r=r) - bounds.sharp_szr_constant(r))
                for r in np.arange(1, 10) / 10)
    record(5, cut < 1e-6 and alt < 1e-9 and sharp < 1e-6,
           f"cutoff {cut:.1e}, alternating {alt:.1e}, atom {sharp:.1e}")


def test_criterion_06_exchange(certs):
    ok, worst = sweep_ok(certs, ["rearrange.exchange_monotone"], 100_000)
    record(6, ok, f"1e5 swaps, largest decrease {worst:.1e}")


def test_criterion_07_convolution_rearrangement(certs):
    ok, worst = sweep_ok(certs, ["rearrange.conv_rearrangement_nonneg", "rearrange.conv_rearrangement_signed"], 1000)
    record(7, ok, f"2x1000 instances, worst excess {worst:.3f}")


def test_criterion_08_concentration(certs):
    ok, worst = sweep_ok(certs, ["bounds.thm2_outer_realization", "bounds.thm1_outer_realization"], 200)
    ok &= certs["bounds.thm2_outer_realization"]["params"]["tol"] == 1e-9
    ok &= certs["bounds.thm1_outer_realization"]["params"]["tol"] == 1e-6
    record(8, ok, f"2x200 instances, worst excess {worst:.2e}")


def test_criterion_09_interpolation(certs):
    names = [n for n in certs if n.startswith("operators.B_interpolation_")] + ["operators.B_contraction_H2"]
    ok, worst = sweep_ok(certs, names, 500)
    ok &= len(names) == 6 and certs["operators.B_contraction_H2"]["params"]["tol"] == 1e-12
    record(9, ok, f"500 polynomials, 5 exponents, worst excess {worst:.2e}")


def test_criterion_10_bergman(certs):
    names = ["operators.bergman_S_transfer", "operators.bergman_z_lemma", "operators.bergman_B_transfer"]
    ok, worst = sweep_ok(certs, names, 200)
    record(10, ok, f"200 polynomials, worst excess {worst:.2e}")


def test_criterion_11_h1_sharp(certs):
    ok, worst = sweep_ok(certs, ["operators.h1_sharp_Sr"], 200)
    record(11, ok, f"200 harmonic functions, worst excess {worst:.2e}")


def test_criterion_12_determinism(verify_reports):
    (c1, a), (c4, b) = verify_reports[1], verify_reports[4]
    record(12, a == b and c1 == 0 and c4 == 0, f"{len(a)} bytes, identical={a == b}, exit codes {c1},{c4}")
