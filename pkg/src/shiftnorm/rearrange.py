"""Rearrangement inequalities behind the sharp ``S_r`` constant.

The discrete objects here are exact instances of the continuous statements:
cyclic convolutions of sampled step functions, column sums of finite
matrices, and step profiles on an interval.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bounds import BoundCertificate
from .circlefn import CircleFn, convolve, decreasing_rearrangement, lp_norm, mean
from .spaces import harmonic_measure_arc, poisson_kernel

CHECK_TOL = 1e-9


def half_mass_identity(f: CircleFn) -> tuple[float, float]:
    """Both sides of ``∫|f - μ| = 2 ∫_{f > μ} (f - μ)`` with ``μ = mean(f)``."""
    if not f.is_real:
        raise ValueError("half-mass identity needs real input")
    mu = mean(f)
    w = f.cell_weights
    lhs = float(np.dot(w, np.abs(f.samples - mu)))
    above = f.samples > mu
    rhs = float(2.0 * np.dot(w[above], f.samples[above] - mu))
    return lhs, rhs


@dataclass(frozen=True, eq=False)
class DeficiencyMatrix:
    """Matrix ``A`` with threshold ``mu``; ``D = sum_j max(C_j - mu, 0)``."""

    entries: np.ndarray
    threshold: float

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        if a.ndim != 2:
            raise ValueError("entries must form a matrix")
        object.__setattr__(self, "entries", a)

    @property
    def column_sums(self) -> np.ndarray:
        return self.entries.sum(axis=0)

    @property
    def column_deficiencies(self) -> np.ndarray:
        return np.maximum(self.column_sums - self.threshold, 0.0)


def deficiency(a: DeficiencyMatrix) -> float:
    return float(a.column_deficiencies.sum())


def exchange_step(a: DeficiencyMatrix, i: int, j: int, k: int) -> DeficiencyMatrix:
    """Swap ``a[i, j]`` and ``a[i, k]`` (zero-based).

    Requires ``D_j >= D_k`` and ``a[i, j] <= a[i, k]``; under that hypothesis
    the deficiency cannot decrease.
    """
    d = a.column_deficiencies
    x = a.entries
    if not (d[j] >= d[k] and x[i, j] <= x[i, k]):
        raise ValueError(
            f"exchange hypothesis fails at (i={i}, j={j}, k={k}): "
            f"D_j={d[j]:g}, D_k={d[k]:g}, a_ij={x[i, j]:g}, a_ik={x[i, k]:g}"
        )
    y = x.copy()
    y[i, j], y[i, k] = x[i, k], x[i, j]
    return DeficiencyMatrix(y, a.threshold)


def sort_rows_descending(a: DeficiencyMatrix) -> DeficiencyMatrix:
    return DeficiencyMatrix(-np.sort(-a.entries, axis=1), a.threshold)


@dataclass(frozen=True, eq=False)
class TiltedRearrangement:
    """``Q(x) = a P*(x) - b P*(reflected x)`` with ``a + b = 1``.

    ``base`` is the decreasing rearrangement ``P*``; reflection reverses the
    sample order.
    """

    base: CircleFn
    a: float
    b: float

    def __post_init__(self):
        if self.a < 0 or self.b < 0 or abs(self.a + self.b - 1) > 1e-12:
            raise ValueError("need a, b >= 0 with a + b = 1")

    @property
    def values(self) -> CircleFn:
        p = self.base.samples
        return CircleFn(self.a * p - self.b * p[::-1])


def signed_masses(f: CircleFn) -> tuple[float, float]:
    """Positive and negative mass of ``f`` (``a``, ``b``)."""
    w = f.cell_weights
    return float(np.dot(w, np.maximum(f.samples, 0))), float(np.dot(w, np.maximum(-f.samples, 0)))


def centered_l1(f: CircleFn) -> float:
    return lp_norm(f - mean(f), 1)


def conv_rearrangement_check(p: CircleFn, f: CircleFn, strict_nonneg: bool = False) -> BoundCertificate:
    """``||P*f - mean||_1`` against the rearranged bound.

    With ``strict_nonneg`` the input must be nonnegative and the bound is
    ``||P - mean(P)||_1``.  Otherwise it is ``||Q - mean(Q)||_1`` with
    ``Q = a P* - b P*(reflected)`` built from the signed masses of ``f``.
    """
    if not (p.is_real and f.is_real):
        raise ValueError("real inputs required")
    if np.any(p.samples < 0):
        raise ValueError("P must be nonnegative")
    norm = lp_norm(f, 1)
    if not norm > 0:
        raise ValueError("f must be nonzero")
    f = f / norm
    lhs = centered_l1(convolve(p, f))
    if strict_nonneg:
        if np.any(f.samples < 0):
            raise ValueError("strict_nonneg requires f >= 0")
        rhs = centered_l1(p)
        params = {"a": 1.0, "b": 0.0}
    else:
        a, b = signed_masses(f)
        q = TiltedRearrangement(decreasing_rearrangement(p), a / (a + b), b / (a + b)).values
        rhs = centered_l1(q)
        params = {"a": a, "b": b}
    params["tol"] = CHECK_TOL
    return BoundCertificate("conv_rearrangement", lhs, rhs, "<=", params)


def matrix_route(p: CircleFn, f: CircleFn) -> tuple[float, float]:
    """Same comparison through the matrix ``a_ij = c_{j-i} d_i``.

    Returns ``(D, D')`` for the original and row-sorted matrices, with
    threshold the average column sum.  ``2 D / N^2`` equals
    ``||P*f - mean||_1`` for unit-norm ``f``.
    """
    c, d = p.samples, f.samples / lp_norm(f, 1)
    n = c.size
    idx = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
    a = c[idx] * d[:, None]
    mu = a.sum() / n
    m = DeficiencyMatrix(a, mu)
    return deficiency(m), deficiency(sort_rows_descending(m))


# --- profiles on an interval ------------------------------------------------


def _profile_at(p, x, length):
    if callable(p):
        return p(x)
    vals = p.samples
    k = np.clip(np.floor(np.asarray(x) / length * vals.size).astype(int), 0, vals.size - 1)
    return vals[k]


def find_c(p: CircleFn | Callable, a: float, b: float, length: float = np.pi, tol: float = 1e-12) -> float:
    """Root of ``a P(c) - b P(L - c) = a - b`` on ``[0, L]`` by bisection.

    ``p`` is a non-increasing profile: a callable or a step profile whose
    samples are cell values on ``[0, L]``.
    """
    if a < 0 or b < 0 or abs(a + b - 1) > 1e-12:
        raise ValueError("need a, b >= 0 with a + b = 1")

    def s(c):
        return a * _profile_at(p, c, length) - b * _profile_at(p, length - c, length) - (a - b)

    lo, hi = 0.0, float(length)
    # flat profiles give s == 0 up to rounding, which is a valid (degenerate) crossing
    slack = 1e-12 * max(1.0, abs(float(_profile_at(p, lo, length))))
    if s(lo) < -slack or s(hi) > slack:
        raise ValueError("no sign change: profile is not decreasing with mean one")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if s(mid) >= 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def poisson_profile(r: float) -> Callable:
    return lambda x: poisson_kernel(r, x)


def poisson_step_profile(r: float, n: int = 4096) -> CircleFn:
    """Cell averages of ``P_r`` on ``[0, pi]``, from exact arc harmonic measures."""
    edges = np.linspace(0.0, np.pi, n + 1)
    h = edges[1] - edges[0]
    vals = [2 * np.pi / h * harmonic_measure_arc(r, lo, hi) for lo, hi in zip(edges[:-1], edges[1:])]
    return CircleFn(np.array(vals))


def _cumulative(p: CircleFn, x: float, length: float) -> float:
    vals = p.samples
    h = length / vals.size
    k = min(int(np.floor(x / h)), vals.size)
    part = vals[:k].sum() * h
    if k < vals.size:
        part += vals[k] * (x - k * h)
    return float(part)


def pq_comparison_check(p: CircleFn, a: float, b: float, length: float = np.pi) -> BoundCertificate:
    """Check ``||P - 1||_1 >= ||Q - mean Q||_1`` when the integral hypothesis holds.

    ``p`` is a non-increasing, nonnegative step profile with mean one on
    ``[0, L]`` and ``Q = a P(x) - b P(L - x)``.  The hypothesis is
    ``∫_0^c P + ∫_{L-c}^L P >= 2c``; when it fails the certificate records
    that and passes vacuously.  Inputs with ``a < b`` are first reflected to
    ``(b, a)``, which leaves ``||Q - mean Q||_1`` unchanged.
    """
    vals = p.samples
    if not p.is_real or np.any(vals < 0) or np.any(np.diff(vals) > 1e-12 * max(1.0, vals.max())):
        raise ValueError("P must be real, nonnegative and non-increasing")
    if abs(vals.mean() - 1) > 1e-9:
        raise ValueError("P must have mean one")
    swapped = a < b
    if swapped:
        # b P(x) - a P(L-x) is minus Q reflected, so both have the same norm
        a, b = b, a
    c = find_c(p, a, b, length)
    hyp = _cumulative(p, c, length) + _cumulative(p, length, length) - _cumulative(p, length - c, length)
    holds = hyp >= 2 * c * (1 - 1e-12) - 1e-12
    q = a * vals - b * vals[::-1]
    lhs = float(np.mean(np.abs(q - q.mean())))
    rhs = float(np.mean(np.abs(vals - 1.0)))
    params = {
        "a": a, "b": b, "c": c,
        "hypothesis_raw": hyp, "hypothesis_target": 2 * c,
        "hypothesis_normalized": hyp / length, "target_normalized": 2 * c / length,
        "hypothesis": float(holds), "swapped": float(swapped), "tol": CHECK_TOL,
    }
    cert = BoundCertificate("pq_comparison", lhs, rhs, "<=", params)
    if not holds:
        cert.passed = True
    return cert
