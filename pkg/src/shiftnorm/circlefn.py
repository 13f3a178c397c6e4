"""Sampled functions on the unit circle.

A :class:`CircleFn` holds the values of a real or complex function at the
uniform angles ``theta_k = 2*pi*k/N``.  Every integral is taken against the
normalized measure ``d theta / 2 pi``, so each sample carries weight ``1/N``.

Step functions whose jumps do not fall on the grid are represented with
explicit per-sample weights (see :func:`step_function`).  Such weighted
functions support means, norms, subsets and rearrangement exactly, but not
convolution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

DEFAULT_N = 4096
TWO_PI = 2.0 * np.pi


def grid_angles(n: int) -> np.ndarray:
    return TWO_PI * np.arange(n) / n


@dataclass(frozen=True, eq=False)
class CircleFn:
    """Samples of a function on the unit circle.

    ``weights`` is ``None`` for the uniform grid.  Otherwise it gives the
    normalized measure of the cell each sample stands for, and ``angles``
    gives a representative angle for each cell.
    """

    samples: np.ndarray
    weights: np.ndarray | None = None
    angles_: np.ndarray | None = None

    def __post_init__(self):
        s = np.asarray(self.samples)
        if s.ndim != 1 or s.size < 2:
            raise ValueError("a CircleFn needs at least two samples")
        if not np.all(np.isfinite(s)):
            raise ValueError("samples must be finite")
        if not np.iscomplexobj(s):
            s = s.astype(float)
        object.__setattr__(self, "samples", s)
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float)
            if w.shape != s.shape or np.any(w < 0):
                raise ValueError("weights must be nonnegative and match samples")
            object.__setattr__(self, "weights", w / w.sum())

    @classmethod
    def from_function(cls, fn: Callable[[np.ndarray], np.ndarray], n: int = DEFAULT_N) -> CircleFn:
        return cls(np.asarray(fn(grid_angles(n))))

    @classmethod
    def constant(cls, c, n: int = DEFAULT_N) -> CircleFn:
        return cls(np.full(n, c))

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def uniform(self) -> bool:
        return self.weights is None

    @property
    def angles(self) -> np.ndarray:
        if self.angles_ is not None:
            return self.angles_
        return grid_angles(self.n)

    @property
    def cell_weights(self) -> np.ndarray:
        if self.weights is None:
            return np.full(self.n, 1.0 / self.n)
        return self.weights

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.samples)

    def _like(self, samples) -> CircleFn:
        return CircleFn(samples, self.weights, self.angles_)

    def _other(self, other):
        if isinstance(other, CircleFn):
            if other.n != self.n:
                raise ValueError(f"grid mismatch: {self.n} vs {other.n}")
            return other.samples
        return other

    def __add__(self, other):
        return self._like(self.samples + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._like(self.samples - self._other(other))

    def __rsub__(self, other):
        return self._like(self._other(other) - self.samples)

    def __mul__(self, other):
        return self._like(self.samples * self._other(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._like(self.samples / self._other(other))

    def __neg__(self):
        return self._like(-self.samples)

    def __abs__(self):
        return self._like(np.abs(self.samples))

    @property
    def real(self) -> CircleFn:
        return self._like(np.real(self.samples))

    @property
    def imag(self) -> CircleFn:
        return self._like(np.imag(self.samples))

    def __repr__(self):
        kind = "uniform" if self.uniform else "weighted"
        return f"CircleFn(n={self.n}, {kind}, dtype={self.samples.dtype})"


@dataclass(frozen=True, eq=False)
class BoundarySet:
    """A subset of the sample cells, with the measure those cells carry."""

    mask: np.ndarray
    weights: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "mask", np.asarray(self.mask, dtype=bool))

    @classmethod
    def where(cls, f: CircleFn, condition: np.ndarray) -> BoundarySet:
        return cls(np.asarray(condition, dtype=bool), f.weights)

    @classmethod
    def arc(cls, start: float, stop: float, n: int = DEFAULT_N) -> BoundarySet:
        """Grid points with angle in ``[start, stop)`` taken modulo 2*pi."""
        theta = grid_angles(n)
        width = stop - start
        if width >= TWO_PI:
            return cls(np.ones(n, dtype=bool))
        offset = np.mod(theta - start, TWO_PI)
        return cls(offset < width)

    @property
    def measure(self) -> float:
        if self.weights is None:
            return float(np.count_nonzero(self.mask)) / self.mask.size
        return float(self.weights[self.mask].sum())

    def complement(self) -> BoundarySet:
        return BoundarySet(~self.mask, self.weights)


def mean(f: CircleFn):
    """Average of ``f`` against the normalized measure."""
    if f.uniform:
        return f.samples.mean()
    return np.dot(f.weights, f.samples)


def lp_norm(f: CircleFn, p: float) -> float:
    if not p > 0:
        raise ValueError(f"p must be positive or inf, got {p}")
    a = np.abs(f.samples)
    if np.isinf(p):
        return float(a.max())
    w = f.cell_weights
    if p == 1:
        return float(np.dot(w, a))
    return float(np.dot(w, a**p) ** (1.0 / p))


def convolve(f: CircleFn, g: CircleFn) -> CircleFn:
    """Cyclic convolution with normalized measure, so ``f * 1 = mean(f)``.

    ``(f*g)_j = (1/N) sum_k f_k g_{j-k}``, computed with the FFT.
    """
    if f.n != g.n:
        raise ValueError(f"grid mismatch: {f.n} vs {g.n}")
    if not (f.uniform and g.uniform):
        raise ValueError("convolution needs uniformly sampled functions")
    h = np.fft.ifft(np.fft.fft(f.samples) * np.fft.fft(g.samples)) / f.n
    if f.is_real and g.is_real:
        h = h.real
    return CircleFn(h)


def _require_real(f: CircleFn):
    if not f.is_real:
        raise ValueError("operation requires a real-valued function")


def decreasing_rearrangement(f: CircleFn) -> CircleFn:
    """Non-increasing function equimeasurable with ``f``.

    For weighted samples the cell weights travel with their values, so the
    result is again an exact step function.
    """
    _require_real(f)
    order = np.argsort(-f.samples, kind="stable")
    if f.uniform:
        return CircleFn(f.samples[order])
    w = f.weights[order]
    edges = TWO_PI * np.concatenate(([0.0], np.cumsum(w)))
    return CircleFn(f.samples[order], w, 0.5 * (edges[:-1] + edges[1:]))


def integrate_over(f: CircleFn, s: BoundarySet):
    if s.mask.size != f.n:
        raise ValueError("set and function live on different grids")
    return np.dot(f.cell_weights[s.mask], f.samples[s.mask])


def step_function(breaks, values, n: int = DEFAULT_N) -> CircleFn:
    """Exact weighted representation of a step function on the circle.

    ``values[i]`` holds on ``[breaks[i], breaks[i+1])`` and the last value
    wraps around to ``breaks[0] + 2*pi``.  The circle is cut at the uniform
    grid points and at every break; each resulting piece becomes one
    weighted sample, so integrals of the step function are exact.
    """
    breaks = np.mod(np.asarray(breaks, dtype=float), TWO_PI)
    values = np.asarray(values)
    if breaks.shape != values.shape or breaks.size == 0:
        raise ValueError("need one value per break")
    order = np.argsort(breaks)
    breaks, values = breaks[order], values[order]
    cuts = np.unique(np.concatenate((grid_angles(n), breaks)))
    right = np.append(cuts[1:], TWO_PI)
    mid = 0.5 * (cuts + right)
    # piece at mid takes the value of the last break at or before it (cyclically)
    idx = np.searchsorted(breaks, mid, side="right") - 1
    samples = values[idx]  # idx == -1 wraps to the last value
    return CircleFn(samples, right - cuts, mid)
