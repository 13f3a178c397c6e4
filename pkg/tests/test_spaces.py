import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shiftnorm.circlefn import BoundarySet, CircleFn, mean, step_function
from shiftnorm.spaces import (
    HarmonicFn,
    RadialWeight,
    TaylorFn,
    bergman_norm,
    dilate,
    h1_norm,
    hardy_norm,
    harmonic_measure_arc,
    integral_mean,
    outer_function,
    outer_on_circle,
    outer_radius_cap,
    poisson_extend,
    poisson_kernel,
)

coeffs = st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
                  min_size=1, max_size=9)


def test_poisson_kernel_examples():
    assert np.allclose(poisson_kernel(0.0, np.linspace(0, 6, 7)), 1.0)
    assert poisson_kernel(0.5, 0.0) == pytest.approx(3.0)
    with pytest.raises(ValueError):
        poisson_kernel(1.0, 0.0)


@pytest.mark.parametrize("r", [0.0, 0.3, 0.6, 0.9])
def test_poisson_unit_mass(r):
    assert abs(mean(CircleFn(poisson_kernel(r, 2 * np.pi * np.arange(4096) / 4096))) - 1) < 1e-9


def test_poisson_extend_constant_and_centre():
    u = HarmonicFn(CircleFn.constant(2.5, 256))
    assert np.allclose(poisson_extend(u, 0.8).samples, 2.5)
    v = HarmonicFn(CircleFn(np.random.default_rng(0).normal(size=256)), ((1.5, 0.3),))
    assert np.allclose(poisson_extend(v, 0.0).samples, v.value_at_zero())


def test_integral_mean_examples():
    z = TaylorFn([0, 1])
    for r in (0.1, 0.5, 0.9):
        assert integral_mean(z, r, 2, 256) == pytest.approx(r)
    assert abs(integral_mean(TaylorFn([1, 1]), 1.0, 1, 2**16) - 4 / np.pi) < 1e-6
    with pytest.raises(ValueError):
        integral_mean(z, 0.5, 0)


def test_hardy_norm_examples():
    assert hardy_norm(TaylorFn([3 - 4j]), 1) == pytest.approx(5.0)
    assert hardy_norm(TaylorFn([0, 0, 0, 1]), 2) == pytest.approx(1.0)
    assert abs(hardy_norm(TaylorFn([0.5, 0.5]), 1, 2**16) - 2 / np.pi) < 1e-6


def test_bergman_norm_examples():
    w = RadialWeight.unit()
    for p in (1, 2, 3.5):
        assert bergman_norm(TaylorFn([1.0]), p, w) == pytest.approx(1.0, abs=1e-12)
    assert abs(bergman_norm(TaylorFn([0, 1]), 2, w) - np.sqrt(0.5)) < 1e-8
    assert abs(bergman_norm(TaylorFn([0, 1]), 1, w) - 2 / 3) < 1e-8
    with pytest.raises(ValueError):
        bergman_norm(TaylorFn([1.0]), np.inf, w)


def test_bergman_power_weight_closed_form():
    # ||z^m||_{A^2(r^k)}^2 = int r^{2m} 2r r^k dr = 2 / (2m + k + 2)
    for m, k in ((1, 2), (3, 4), (0, 2)):
        val = bergman_norm(TaylorFn(np.eye(m + 1)[m]), 2, RadialWeight.power(k))
        assert val**2 == pytest.approx(2 / (2 * m + k + 2), abs=1e-12)


@given(coeffs)
def test_means_are_nondecreasing(c):
    f = TaylorFn(c)
    for p in (1, 2, np.inf):
        m = [integral_mean(f, r, p, 256) for r in (0.0, 0.3, 0.6, 0.9, 1.0)]
        assert np.all(np.diff(m) >= -1e-10 * max(1.0, max(m)))


@given(coeffs)
def test_h2_norm_is_coefficient_norm(c):
    f = TaylorFn(c)
    assert hardy_norm(f, 2, 64) == pytest.approx(np.linalg.norm(c), rel=1e-12, abs=1e-12)


def test_h1_norm_merges_atoms():
    u = HarmonicFn(CircleFn.constant(0.0, 64), ((1.0, 0.0), (-1.0, 2 * np.pi), (2.0, 1.0)))
    assert h1_norm(u) == pytest.approx(2.0)


def test_outer_function_examples():
    one = CircleFn.constant(1.0, 512)
    assert outer_function(one, 0.3 + 0.2j) == pytest.approx(1.0)
    half = CircleFn(np.where(BoundarySet.arc(0, np.pi, 512).mask, 0.5, 1.0))
    assert outer_function(half, 0) == pytest.approx(np.sqrt(0.5), abs=1e-12)
    with pytest.raises(ValueError):
        outer_function(CircleFn(np.array([1.0, 0.0, 1.0, 1.0])), 0)


def test_outer_boundary_convergence():
    devs = []
    for n in (4096, 8192):
        psi = CircleFn.from_function(lambda t: 2 + np.cos(t), n)
        f = outer_on_circle(psi, outer_radius_cap(n))
        devs.append(np.max(np.abs(np.abs(f.samples) - psi.samples) / psi.samples))
    assert devs[0] < 1e-2
    # the deviation is first order in the distance 16/N to the circle
    assert devs[1] == pytest.approx(devs[0] / 2, rel=0.1)


def test_outer_fft_path_matches_direct_sum():
    psi = CircleFn.from_function(lambda t: np.exp(np.sin(3 * t)), 512)
    r = 0.8
    direct = outer_function(psi, r * np.exp(1j * psi.angles))
    assert np.max(np.abs(outer_on_circle(psi, r).samples - direct)) < 1e-10


def test_harmonic_measure_examples():
    assert harmonic_measure_arc(0.4, 1.0, 1.0 + 2 * np.pi) == 1.0
    assert harmonic_measure_arc(0.0, 0.0, np.pi / 2) == pytest.approx(0.25)
    a = np.arccos(0.5)
    assert harmonic_measure_arc(0.5, -a, a) == pytest.approx(2 / 3)


@given(st.floats(0, 0.95), st.floats(0, 2 * np.pi), st.floats(0, 2 * np.pi))
def test_harmonic_measure_matches_quadrature(r, start, length):
    s = step_function([start, start + length], [1.0, 0.0], 2**14)
    quad = np.dot(s.weights, s.samples * poisson_kernel(r, s.angles))
    assert abs(quad - harmonic_measure_arc(r, start, start + length)) < 1e-6


def test_dilate_to_zero_is_constant():
    f = TaylorFn([2.0, 1.0, -3.0])
    assert np.allclose(dilate(f, 0.0).coeffs, [2.0, 0, 0])
    u = HarmonicFn(CircleFn(np.random.default_rng(1).normal(size=128)))
    assert np.allclose(dilate(u, 0.0).boundary.samples, u.value_at_zero())


def test_radial_weight_rejects_negative_values():
    with pytest.raises(ValueError):
        RadialWeight(lambda r: r - 0.5)
