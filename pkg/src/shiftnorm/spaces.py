"""Analytic and harmonic functions on the disc and their norms.

Hardy norms are boundary ``L^p`` norms, harmonic ``h^1`` norms are total
variations of the boundary measure, and Bergman norms integrate the squared
(or p-th power) integral means against a radial weight.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .circlefn import (
    DEFAULT_N,
    TWO_PI,
    CircleFn,
    convolve,
    grid_angles,
    lp_norm,
    mean,
)

DEFAULT_RADIAL_NODES = 128


def poisson_kernel(r, t):
    """``(1 - r^2) / (1 - 2 r cos t + r^2)``, vectorized over ``r`` and ``t``."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or np.any(r >= 1):
        raise ValueError("Poisson kernel needs 0 <= r < 1")
    return (1.0 - r * r) / (1.0 - 2.0 * r * np.cos(t) + r * r)


def poisson_samples(r: float, n: int = DEFAULT_N) -> CircleFn:
    return CircleFn(poisson_kernel(r, grid_angles(n)))


@dataclass(frozen=True, eq=False)
class TaylorFn:
    """Polynomial ``sum a_k z^k`` with complex coefficients."""

    coeffs: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if a.ndim != 1 or a.size == 0 or not np.all(np.isfinite(a)):
            raise ValueError("coefficients must be a nonempty finite vector")
        object.__setattr__(self, "coeffs", a)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(z, self.coeffs)

    def value_at_zero(self) -> complex:
        return complex(self.coeffs[0])

    def on_circle(self, r: float, n: int = DEFAULT_N) -> CircleFn:
        """Samples of ``f(r e^{i theta_k})`` computed with one inverse FFT."""
        return CircleFn(_taylor_rows(self.coeffs, np.array([r]), n)[0])

    def __repr__(self):
        return f"TaylorFn(degree={self.degree})"


def _taylor_rows(coeffs: np.ndarray, radii: np.ndarray, n: int) -> np.ndarray:
    # rows[i, k] = sum_j a_j r_i^j e^{i j theta_k}; powers wrap mod n exactly
    j = np.arange(coeffs.size)
    scaled = coeffs[None, :] * radii[:, None] ** j[None, :]
    folded = np.zeros((radii.size, n), dtype=complex)
    np.add.at(folded, (slice(None), j % n), scaled)
    return np.fft.ifft(folded, axis=1) * n


@dataclass(frozen=True, eq=False)
class HarmonicFn:
    """Poisson integral of ``boundary dθ/2π`` plus point masses.

    ``atoms`` is a tuple of ``(weight, angle)``.  A unit atom at angle 0 is
    the Poisson kernel itself.
    """

    boundary: CircleFn
    atoms: tuple = ()

    def __post_init__(self):
        if not self.boundary.is_real:
            raise ValueError("harmonic boundary data must be real")
        object.__setattr__(self, "atoms", tuple((float(w), float(a)) for w, a in self.atoms))

    @classmethod
    def atom(cls, weight: float = 1.0, angle: float = 0.0, n: int = DEFAULT_N) -> HarmonicFn:
        return cls(CircleFn.constant(0.0, n), ((weight, angle),))

    def value_at_zero(self) -> float:
        return float(mean(self.boundary)) + sum(w for w, _ in self.atoms)

    def __repr__(self):
        return f"HarmonicFn(n={self.boundary.n}, atoms={len(self.atoms)})"


@dataclass(frozen=True, eq=False)
class RadialWeight:
    """Radial weight ``w(r)`` defining ``dμ = w(|z|) dA`` on the disc.

    The radial integral uses Gauss-Legendre nodes on ``(0, 1)``, which never
    touch the endpoint ``r = 1``.
    """

    w: Callable[[np.ndarray], np.ndarray]
    monotone_increasing: bool = False
    n_nodes: int = DEFAULT_RADIAL_NODES
    label: str = "w"
    nodes: np.ndarray = field(init=False, repr=False)
    quad_weights: np.ndarray = field(init=False, repr=False)
    total_mass: float = field(init=False)

    def __post_init__(self):
        x, q = np.polynomial.legendre.leggauss(self.n_nodes)
        r = 0.5 * (x + 1.0)
        q = 0.5 * q
        vals = np.asarray(self.w(r), dtype=float) * np.ones_like(r)
        if np.any(vals < 0) or not np.all(np.isfinite(vals)):
            raise ValueError("radial weight must be finite and nonnegative")
        mass = float(np.sum(2.0 * r * vals * q))
        if not np.isfinite(mass):
            raise ValueError("radial weight has infinite mass")
        object.__setattr__(self, "nodes", r)
        object.__setattr__(self, "quad_weights", 2.0 * r * vals * q)
        object.__setattr__(self, "total_mass", mass)

    @classmethod
    def unit(cls, n_nodes: int = DEFAULT_RADIAL_NODES) -> RadialWeight:
        return cls(lambda r: np.ones_like(r), True, n_nodes, "1")

    @classmethod
    def power(cls, k: float, n_nodes: int = DEFAULT_RADIAL_NODES) -> RadialWeight:
        return cls(lambda r: r**k, k >= 0, n_nodes, f"r^{k:g}")


def poisson_extend(u: HarmonicFn, r: float) -> CircleFn:
    """Samples of ``u`` on the circle of radius ``r``."""
    if not 0 <= r < 1:
        raise ValueError("extension radius must satisfy 0 <= r < 1")
    b = u.boundary
    out = convolve(poisson_samples(r, b.n), b).samples
    theta = b.angles
    for w, angle in u.atoms:
        out = out + w * poisson_kernel(r, theta - angle)
    return CircleFn(out)


def h1_norm(u: HarmonicFn) -> float:
    """Total variation of the boundary measure."""
    return lp_norm(u.boundary, 1) + sum(abs(w) for w in _merged_atoms(u.atoms).values())


def _merged_atoms(atoms) -> dict:
    merged: dict[float, float] = {}
    for w, a in atoms:
        key = round(float(np.mod(a, TWO_PI)), 12)
        merged[key] = merged.get(key, 0.0) + w
    return merged


def integral_mean(f, r: float, p: float, n: int = DEFAULT_N) -> float:
    """``M_p(r, f)``: the normalized ``L^p`` mean over the circle of radius ``r``."""
    if not p > 0:
        raise ValueError(f"p must be positive or inf, got {p}")
    if isinstance(f, HarmonicFn):
        if r == 1:
            if p != 1:
                raise ValueError("harmonic means at r = 1 are only defined for p = 1")
            return h1_norm(f)
        return lp_norm(poisson_extend(f, r), p)
    if not 0 <= r <= 1:
        raise ValueError("radius must lie in [0, 1]")
    return lp_norm(f.on_circle(r, n), p)


def hardy_norm(f, p: float, n: int = DEFAULT_N) -> float:
    # means increase with r and f is continuous up to the boundary
    return integral_mean(f, 1.0, p, n)


def bergman_norm(f, p: float, w: RadialWeight, n: int = DEFAULT_N) -> float:
    """``(∫_0^1 M_p(r,f)^p 2r w(r) dr)^{1/p}``; ``w ≡ 1`` is normalized area."""
    if np.isinf(p) or not p > 0:
        raise ValueError("Bergman norms need 0 < p < inf")
    means = radial_means(f, p, w.nodes, n)
    return float(np.dot(w.quad_weights, means**p) ** (1.0 / p))


def radial_means(f, p: float, radii, n: int = DEFAULT_N) -> np.ndarray:
    radii = np.asarray(radii, dtype=float)
    if isinstance(f, TaylorFn):
        rows = np.abs(_taylor_rows(f.coeffs, radii, n))
        if np.isinf(p):
            return rows.max(axis=1)
        return np.mean(rows**p, axis=1) ** (1.0 / p)
    return np.array([integral_mean(f, r, p, n) for r in radii])


def _herglotz_kernel(theta, z):
    e = np.exp(1j * theta)
    return (e + z) / (e - z)


def outer_function(psi: CircleFn, z):
    """Outer function with boundary modulus ``psi``, evaluated at ``z``.

    Uses the discretized Herglotz integral of ``log psi``.  Points must lie
    within radius ``1 - 16/N`` so the kernel stays resolved by the grid.
    """
    logpsi = _log_modulus(psi)
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) > outer_radius_cap(psi.n) + 1e-12):
        raise ValueError(f"|z| must not exceed {outer_radius_cap(psi.n)}")
    flat = z.reshape(-1)
    w = psi.cell_weights
    out = np.empty(flat.size, dtype=complex)
    for start in range(0, flat.size, 256):
        zz = flat[start : start + 256]
        k = _herglotz_kernel(psi.angles[None, :], zz[:, None])
        out[start : start + 256] = np.exp(k @ (w * logpsi))
    return out.reshape(z.shape) if z.ndim else out[0]


def outer_on_circle(psi: CircleFn, r: float) -> CircleFn:
    """Outer function sampled on the circle of radius ``r`` (FFT path)."""
    logpsi = _log_modulus(psi)
    if not psi.uniform:
        raise ValueError("FFT evaluation needs a uniform grid")
    if not 0 <= r <= outer_radius_cap(psi.n):
        raise ValueError(f"r must lie in [0, {outer_radius_cap(psi.n)}]")
    # kernel value at theta_j - theta_k is (1 + r e^{i(θj-θk)}) / (1 - r e^{i(θj-θk)})
    e = r * np.exp(1j * grid_angles(psi.n))
    kern = CircleFn((1.0 + e) / (1.0 - e))
    return CircleFn(np.exp(convolve(kern, CircleFn(logpsi + 0j)).samples))


def outer_radius_cap(n: int) -> float:
    return 1.0 - 16.0 / n


def _log_modulus(psi: CircleFn) -> np.ndarray:
    if not psi.is_real or np.any(psi.samples <= 0):
        raise ValueError("outer functions need strictly positive boundary modulus")
    return np.log(psi.samples)


def harmonic_measure_arc(r: float, start: float, stop: float) -> float:
    """Harmonic measure at the point ``r`` of the arc from ``start`` to ``stop``.

    Uses the subtended-angle formula ``phi/pi - (stop - start)/(2 pi)``, with
    ``phi`` the angle the arc subtends at ``r``.
    """
    if not 0 <= r < 1:
        raise ValueError("point must satisfy 0 <= r < 1")
    length = stop - start
    if not 0 <= length <= TWO_PI:
        raise ValueError("need start <= stop <= start + 2*pi")
    if length == TWO_PI:
        return 1.0
    a = np.angle(np.exp(1j * start) - r)
    b = np.angle(np.exp(1j * stop) - r)
    phi = np.mod(b - a, TWO_PI)
    if length > np.pi and phi < 1e-12:
        phi = TWO_PI
    return float(phi / np.pi - length / TWO_PI)


def dilate(f, s: float):
    """``f_s(z) = f(s z)``."""
    if not 0 <= s < 1:
        raise ValueError("dilation needs 0 <= s < 1")
    if isinstance(f, TaylorFn):
        return TaylorFn(f.coeffs * s ** np.arange(f.coeffs.size))
    return HarmonicFn(poisson_extend(f, s))
