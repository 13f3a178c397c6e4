import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shiftnorm import bounds
from shiftnorm.circlefn import CircleFn
from shiftnorm.operators import (
    ExtremalFamily,
    MobiusFn,
    Space,
    backward_shift,
    cutoff,
    multiply_by_z,
    poisson_bump,
    ratio,
    search_lower_bound,
    sign_alternating,
    subtract_value,
    szop_r_apply,
)
from shiftnorm.spaces import HarmonicFn, TaylorFn, h1_norm

coeffs = st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
                  min_size=2, max_size=9).filter(lambda c: np.linalg.norm(c) > 1e-3)


def cutoff_oracle(n):
    # ||f_n - 1||_1 = (1/pi n)(pi n - 1) + (1 - 1/pi n) with the normalized measure
    return 2 - 2 / (np.pi * n)


def test_subtract_value_examples():
    assert np.allclose(subtract_value(TaylorFn([4.0])).coeffs, 0)
    assert h1_norm(subtract_value(HarmonicFn(CircleFn.constant(3.0, 64)))) == pytest.approx(0, abs=1e-12)
    assert h1_norm(subtract_value(cutoff(4))) == pytest.approx(2 - 1 / (2 * np.pi), abs=1e-12)


def test_shift_and_multiply_are_inverse_on_zero_mean():
    f = TaylorFn([0, 1, 2j, -3])
    assert np.allclose(backward_shift(multiply_by_z(f)).coeffs, f.coeffs)
    assert np.allclose(multiply_by_z(backward_shift(f)).coeffs, f.coeffs)


def test_szop_r_examples():
    u = HarmonicFn(CircleFn.constant(1.7, 128))
    assert np.allclose(szop_r_apply(u, 0.6).samples, 0)
    v = HarmonicFn(CircleFn(np.random.default_rng(0).normal(size=128)), ((2.0, 1.0),))
    assert np.allclose(szop_r_apply(v, 0.0).samples, 0, atol=1e-12)


@pytest.mark.parametrize("n", [2, 4, 16, 64])
def test_cutoff_ratio_matches_oracle(n):
    assert abs(ratio("S", cutoff(n), Space.h1()) - cutoff_oracle(n)) < 1e-6


@pytest.mark.parametrize("n", [1, 3, 10])
def test_sign_alternating_ratio_is_one(n):
    assert abs(ratio("S", sign_alternating(n), Space.h1()) - 1) < 1e-9


def test_poisson_atom_attains_sharp_constant():
    atom = poisson_bump(1.0, 2**16)
    for r in (0.25, 0.5, 0.75):
        assert abs(ratio("S_r", atom, Space.h1(), r=r) - bounds.sharp_szr_constant(r)) < 1e-6


@pytest.mark.parametrize("a", [0.5, 0.9, 0.99])
def test_mobius_ratio(a):
    assert abs(ratio("S", MobiusFn(a), Space.hardy(np.inf)) - (1 + a)) < 1e-4


@given(coeffs)
def test_hardy_ratios_agree_for_B_and_S(c):
    f = TaylorFn(c)
    for p in (1, 2, 3, np.inf):
        sp = Space.hardy(p)
        assert ratio("B", f, sp, n=256) == pytest.approx(ratio("S", f, sp, n=256), rel=1e-12)


@given(coeffs)
def test_B_respects_interpolation_bound(c):
    f = TaylorFn(c)
    for p in (1, 4 / 3, 2, 3, np.inf):
        assert ratio("B", f, Space.hardy(p), n=256) <= bounds.interpolation_bound(p) + 1e-6
    assert ratio("B", f, Space.hardy(2), n=256) <= 1 + 1e-12


@given(coeffs)
def test_S_is_idempotent_and_at_most_two(c):
    f = TaylorFn(c)
    assert np.array_equal(subtract_value(subtract_value(f)).coeffs, subtract_value(f).coeffs)
    assert ratio("S", f, Space.bergman(1), n=256) <= 2 + 1e-9


def test_ratio_rejects_bad_input():
    with pytest.raises(ValueError):
        ratio("S", TaylorFn([0.0]), Space.hardy(2))
    with pytest.raises(ValueError):
        ratio("X", TaylorFn([1.0]), Space.hardy(2))
    with pytest.raises(ValueError):
        ratio("B", cutoff(2), Space.h1())
    with pytest.raises(ValueError):
        ratio("S_r", cutoff(2), Space.h1())


def test_search_examples():
    rep = search_lower_bound("S", Space.hardy(np.inf), ExtremalFamily.mobius(), 200, seed=3)
    assert rep.best_ratio >= 1.99 and rep.best_params[0] >= 0.99
    rep = search_lower_bound("S", Space.h1(), ExtremalFamily.cutoff(64), 64)
    assert rep.best_ratio == pytest.approx(cutoff_oracle(64), abs=1e-6)
    rep = search_lower_bound("B", Space.hardy(2), ExtremalFamily.poly(4), 500, seed=1, grid=256)
    assert rep.best_ratio <= 1 + 1e-9


def test_search_is_reproducible_and_job_independent():
    fam = ExtremalFamily.poly(3)
    a = search_lower_bound("S", Space.hardy(1), fam, 120, seed=7, grid=256, jobs=1)
    b = search_lower_bound("S", Space.hardy(1), fam, 120, seed=7, grid=256, jobs=4)
    assert a.to_dict() == b.to_dict()
    assert a.best_ratio <= bounds.proven_upper_bound("S", "hardy", 1) + 1e-6


def test_search_returns_start_when_budget_is_one():
    rep = search_lower_bound("S", Space.hardy(np.inf), ExtremalFamily.mobius(), 1, seed=0)
    assert rep.evaluations == 1 and np.isfinite(rep.best_ratio)


def test_poly_family_degree_limit():
    with pytest.raises(ValueError):
        ExtremalFamily.poly(65)
