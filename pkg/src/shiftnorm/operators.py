"""The operators ``B f = (f - f(0))/z``, ``S f = f - f(0)`` and ``S_r``.

Also holds the parametric test-function families and a derivative-free
search that turns them into operator-norm lower bounds.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .circlefn import DEFAULT_N, CircleFn, grid_angles, lp_norm, step_function
from .spaces import (
    HarmonicFn,
    RadialWeight,
    TaylorFn,
    bergman_norm,
    h1_norm,
    poisson_extend,
    poisson_samples,
)

OPERATORS = ("B", "S", "S_r")


@dataclass(frozen=True, eq=False)
class MobiusFn:
    """``(a - z) / (1 - a z)``: unimodular on the circle, equal to ``a`` at 0."""

    a: float

    def __post_init__(self):
        if not 0 < self.a < 1:
            raise ValueError("Möbius parameter must satisfy 0 < a < 1")

    def __call__(self, z):
        return (self.a - z) / (1.0 - self.a * z)

    def value_at_zero(self) -> complex:
        return complex(self.a)

    def on_circle(self, r: float, n: int = DEFAULT_N) -> CircleFn:
        return CircleFn(self(r * np.exp(1j * grid_angles(n))))


def subtract_value(f):
    """``S f = f - f(0)``."""
    if isinstance(f, TaylorFn):
        c = f.coeffs.copy()
        c[0] = 0
        return TaylorFn(c)
    if isinstance(f, HarmonicFn):
        return HarmonicFn(f.boundary - f.value_at_zero(), f.atoms)
    raise TypeError(f"cannot apply S to {type(f).__name__}")


def backward_shift(f: TaylorFn) -> TaylorFn:
    if f.coeffs.size == 1:
        return TaylorFn([0.0])
    return TaylorFn(f.coeffs[1:])


def multiply_by_z(f: TaylorFn) -> TaylorFn:
    return TaylorFn(np.concatenate(([0.0], f.coeffs)))


def szop_r_apply(u: HarmonicFn, r: float) -> CircleFn:
    """``u(r e^{iθ}) - u(0)`` on the circle of radius ``r``."""
    return poisson_extend(u, r) - u.value_at_zero()


@dataclass(frozen=True)
class Space:
    """Where a ratio is measured: ``hardy`` (H^p), ``h1`` or ``bergman``."""

    kind: str
    p: float = 1.0
    weight: RadialWeight | None = None

    @classmethod
    def hardy(cls, p: float) -> Space:
        return cls("hardy", p)

    @classmethod
    def h1(cls) -> Space:
        return cls("h1", 1.0)

    @classmethod
    def bergman(cls, p: float, weight: RadialWeight | None = None) -> Space:
        return cls("bergman", p, weight or RadialWeight.unit())

    def label(self) -> str:
        if self.kind == "h1":
            return "h1"
        if self.kind == "hardy":
            return "Hinf" if np.isinf(self.p) else f"H{self.p:g}"
        return f"A{self.p:g}({self.weight.label})"


def ratio(op: str, f, space: Space, *, r: float | None = None, n: int = DEFAULT_N) -> float:
    """``||op f|| / ||f||`` in ``space``."""
    if op not in OPERATORS:
        raise ValueError(f"unknown operator {op!r}")
    if space.kind == "hardy":
        if op == "S_r":
            raise ValueError("S_r acts on h1")
        b = f.on_circle(1.0, n)
        num = b - f.value_at_zero()
        if op == "B":
            num = num * np.exp(-1j * b.angles)
        den = lp_norm(b, space.p)
        top = lp_norm(num, space.p)
    elif space.kind == "h1":
        if not isinstance(f, HarmonicFn):
            raise TypeError("h1 ratios need a HarmonicFn")
        den = h1_norm(f)
        if op == "S_r":
            if r is None:
                raise ValueError("S_r needs a radius")
            top = lp_norm(szop_r_apply(f, r), 1)
        elif op == "S":
            top = h1_norm(subtract_value(f))
        else:
            raise ValueError("B is not defined on h1")
    elif space.kind == "bergman":
        if not isinstance(f, TaylorFn):
            raise TypeError("Bergman ratios need a TaylorFn")
        if op == "S_r":
            raise ValueError("S_r acts on h1")
        g = subtract_value(f) if op == "S" else backward_shift(f)
        den = bergman_norm(f, space.p, space.weight, n)
        top = bergman_norm(g, space.p, space.weight, n)
    else:
        raise ValueError(f"unknown space {space.kind!r}")
    if not den > 0:
        raise ValueError("ratio undefined for a zero-norm function")
    return top / den


# --- test-function families -------------------------------------------------


def cutoff(n: int, grid: int = DEFAULT_N) -> HarmonicFn:
    """Boundary value ``pi n`` on ``[-1/n, 1/n]``, zero elsewhere; mean one."""
    return HarmonicFn(step_function([-1.0 / n, 1.0 / n], [np.pi * n, 0.0], grid))


def sign_alternating(n: int, grid: int = DEFAULT_N) -> HarmonicFn:
    """``-pi n`` on ``[-1/n, 0)``, ``pi n`` on ``[0, 1/n]``; mean zero."""
    return HarmonicFn(step_function([-1.0 / n, 0.0, 1.0 / n], [-np.pi * n, np.pi * n, 0.0], grid))


def poisson_bump(rho: float, grid: int = DEFAULT_N) -> HarmonicFn:
    """``u(z) = P(rho z)``; the unit atom when ``rho = 1``."""
    if rho == 1:
        return HarmonicFn.atom(1.0, 0.0, grid)
    return HarmonicFn(poisson_samples(rho, grid))


def concentrated_polynomial(m: int) -> TaylorFn:
    """``(1 + z)^m / 2^m``, large only near ``z = 1``."""
    c = np.polynomial.polynomial.polypow([0.5, 0.5], m)
    return TaylorFn(c)


@dataclass(frozen=True)
class ExtremalFamily:
    """A parametric family searched for large operator ratios.

    ``kind`` is one of ``mobius``, ``cutoff``, ``poisson`` or ``poly``.
    ``lower``/``upper`` give the parameter box; ``cutoff`` is discrete
    with ``n`` in ``1..n_max``.
    """

    kind: str
    lower: tuple = ()
    upper: tuple = ()
    degree: int = 0

    @classmethod
    def mobius(cls, a_max: float = 1 - 1e-4) -> ExtremalFamily:
        return cls("mobius", (1e-3,), (a_max,))

    @classmethod
    def cutoff(cls, n_max: int = 64) -> ExtremalFamily:
        return cls("cutoff", (1,), (n_max,))

    @classmethod
    def poisson(cls, rho_max: float = 0.999) -> ExtremalFamily:
        return cls("poisson", (0.0,), (rho_max,))

    @classmethod
    def poly(cls, degree: int = 4, box: float = 1.0) -> ExtremalFamily:
        if not 0 <= degree <= 64:
            raise ValueError("polynomial degree must be in 0..64")
        dim = 2 * (degree + 1)
        return cls("poly", (-box,) * dim, (box,) * dim, degree)

    @property
    def discrete(self) -> bool:
        return self.kind == "cutoff"

    def build(self, params, grid: int = DEFAULT_N):
        params = np.asarray(params, dtype=float)
        if self.kind == "mobius":
            return MobiusFn(float(params[0]))
        if self.kind == "cutoff":
            return cutoff(int(params[0]), grid)
        if self.kind == "poisson":
            return poisson_bump(float(params[0]), grid)
        if self.kind == "poly":
            half = self.degree + 1
            return TaylorFn(params[:half] + 1j * params[half:])
        raise ValueError(f"unknown family {self.kind!r}")


@dataclass
class SearchReport:
    family: str
    operator: str
    space: str
    best_params: list
    best_ratio: float
    evaluations: int
    seed: int
    history: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "operator": self.operator,
            "space": self.space,
            "best_params": [float(x) for x in self.best_params],
            "best_ratio": float(self.best_ratio),
            "evaluations": int(self.evaluations),
            "seed": int(self.seed),
        }


def _better(cand, best):
    """Larger ratio wins; ties go to the lexicographically smaller point."""
    if best is None:
        return True
    if cand[0] != best[0]:
        return cand[0] > best[0]
    return tuple(cand[1]) < tuple(best[1])


def _coordinate_search(objective, x0, lower, upper, budget):
    x = np.array(x0, dtype=float)
    best = (objective(x), tuple(x))
    used = 1
    step = 0.25 * (upper - lower)
    min_step = 1e-9 * np.maximum(upper - lower, 1.0)
    while used < budget and np.any(step > min_step):
        improved = False
        for i in range(x.size):
            for sign in (1.0, -1.0):
                if used >= budget:
                    break
                y = x.copy()
                y[i] = np.clip(y[i] + sign * step[i], lower[i], upper[i])
                if y[i] == x[i]:
                    continue
                cand = (objective(y), tuple(y))
                used += 1
                if cand[0] > best[0]:
                    best, x, improved = cand, y, True
                    break
        if not improved:
            step = 0.5 * step
    return best, used


def search_lower_bound(
    op: str,
    space: Space,
    family: ExtremalFamily,
    budget: int,
    seed: int = 0,
    *,
    r: float | None = None,
    restarts: int = 8,
    jobs: int = 1,
    grid: int = DEFAULT_N,
) -> SearchReport:
    """Maximize ``ratio(op, f, space)`` over ``family``.

    Continuous families use coordinate search with halving steps from
    ``restarts`` seeded starting points; the discrete cutoff family is swept
    exhaustively.  The result depends only on ``seed`` and ``budget``.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")

    def objective(params):
        return ratio(op, family.build(params, grid), space, r=r, n=grid)

    lower = np.asarray(family.lower, dtype=float)
    upper = np.asarray(family.upper, dtype=float)

    if family.discrete:
        values = range(int(lower[0]), min(int(upper[0]), int(lower[0]) + budget - 1) + 1)
        points = [(float(v),) for v in values]
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            scores = list(pool.map(objective, points))
        best = None
        for score, pt in zip(scores, points):
            if _better((score, pt), best):
                best = (score, pt)
        return SearchReport(family.kind, op, space.label(), list(best[1]), best[0], len(points), seed)

    rng = np.random.default_rng(seed)
    starts = [lower + (upper - lower) * rng.random(lower.size) for _ in range(restarts)]
    share = [budget // restarts + (1 if i < budget % restarts else 0) for i in range(restarts)]
    tasks = [(s, b) for s, b in zip(starts, share) if b > 0]

    def run(task):
        return _coordinate_search(objective, task[0], lower, upper, task[1])

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(run, tasks))
    best = None
    for cand, _ in results:
        if _better(cand, best):
            best = cand
    used = sum(u for _, u in results)
    return SearchReport(family.kind, op, space.label(), list(best[1]), best[0], used, seed,
                        [c[0] for c, _ in results])
