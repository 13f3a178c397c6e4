"""Closed-form bounds, witness verifiers and the constant optimizers.

Each H^1 / a^1 estimate comes from a contradiction inequality in two
auxiliary constants ``(alpha, beta)``: if the inequality holds ("the witness
passes") then no unit-norm ``f`` has ``||S f|| > 2 - alpha``.  The optimizers
locate the boundary ``alpha*`` of the passing region and report
``2 - alpha*``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .operators import backward_shift, subtract_value
from .spaces import RadialWeight, TaylorFn, bergman_norm

# Published values, used only as comparison targets.
PUBLISHED_H1_SZOP = 1.952396
PUBLISHED_H1_BSHIFT = 1.7047
PUBLISHED_A1 = 1.835
PUBLISHED_SZOP_WITNESS = (0.047604, 0.127079, 0.104634)
PUBLISHED_BSHIFT_WITNESS = (0.295302, 0.476286)
PUBLISHED_A1_WITNESS = (0.165, 0.506)

CONTRADICTION_TOL = 1e-9
BOUNDARY_BAND = 1e-4

_RELATIONS = {
    "<=": lambda lhs, rhs, tol: lhs <= rhs + tol,
    ">=": lambda lhs, rhs, tol: lhs >= rhs - tol,
    "<": lambda lhs, rhs, tol: lhs < rhs - tol,
    ">": lambda lhs, rhs, tol: lhs > rhs + tol,
    "==": lambda lhs, rhs, tol: abs(lhs - rhs) <= tol,
}


@dataclass
class BoundCertificate:
    """One checked inequality ``lhs <relation> rhs``.

    ``margin`` is signed so that positive means the relation holds with room
    to spare.  ``params`` records inputs, the tolerance and any flags.
    """

    name: str
    lhs: float
    rhs: float
    relation: str
    params: dict = field(default_factory=dict)
    passed: bool | None = None

    def __post_init__(self):
        if self.relation not in _RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")
        self.lhs = float(self.lhs)
        self.rhs = float(self.rhs)
        self.params = {k: float(v) for k, v in self.params.items()}
        if self.passed is None:
            tol = self.params.get("tol", 0.0)
            self.passed = bool(_RELATIONS[self.relation](self.lhs, self.rhs, tol))

    @property
    def margin(self) -> float:
        if self.relation in ("<=", "<"):
            return self.rhs - self.lhs
        if self.relation in (">=", ">"):
            return self.lhs - self.rhs
        return -abs(self.lhs - self.rhs)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "params": dict(sorted(self.params.items())),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "relation": self.relation,
            "margin": self.margin,
            "pass": self.passed,
        }


# --- concentration theorems ------------------------------------------------


def concentration_ratio(gamma, eps):
    """``[log(gamma + eps) - log(1 - 2 eps)] / log(gamma)``."""
    gamma = np.asarray(gamma, dtype=float)
    return (np.log(gamma + eps) - np.log1p(-2.0 * eps)) / np.log(gamma)


def _check_eps(eps):
    if not 0 < eps < 0.25:
        raise ValueError(f"eps must lie in (0, 1/4), got {eps}")


def thm1_argmax(eps: float) -> tuple[float, float]:
    """Maximizer and maximum of ``concentration_ratio(., eps)`` on ``(0, 1)``.

    A 1024-point log-spaced grid locates the best bracket, then golden
    section refines inside it.
    """
    _check_eps(eps)
    grid = np.geomspace(1e-6, 1 - 1e-6, 1024)
    vals = concentration_ratio(grid, eps)
    i = int(np.argmax(vals))
    if i == 0 or i == grid.size - 1:
        return float(grid[i]), float(vals[i])
    res = optimize.minimize_scalar(
        lambda g: -concentration_ratio(g, eps),
        bracket=(grid[i - 1], grid[i], grid[i + 1]),
        method="golden",
        tol=1e-10,
    )
    if -res.fun < vals[i]:
        return float(grid[i]), float(vals[i])
    return float(res.x), float(-res.fun)


def thm1_measure_lower_bound(eps: float) -> float:
    """Smallest possible measure of a set carrying ``1 - eps`` of ``Re f``."""
    return thm1_argmax(eps)[1]


def thm2_f0_upper_bound(eps: float, delta: float) -> float:
    """``((1-eps)/delta)^delta (eps/(1-delta))^(1-delta)``.

    Evaluated for any positive inputs; the statement it comes from only
    covers ``eps, delta < 1/2``.
    """
    if eps <= 0 or delta <= 0:
        raise ValueError("eps and delta must be positive")
    if delta >= 1 or eps >= 1:
        raise ValueError("eps and delta must be below 1")
    return ((1 - eps) / delta) ** delta * (eps / (1 - delta)) ** (1 - delta)


def _range_flag(*values, limit=0.5) -> float:
    return float(any(v >= limit for v in values))


# --- witness verifiers -----------------------------------------------------


def _band_certificate(name, lhs, rhs, relation, params, band):
    strict = BoundCertificate(name, lhs, rhs, relation, {**params, "tol": 0.0})
    on_boundary = abs(lhs - rhs) < band
    params = {**params, "tol": 0.0, "band": band, "boundary": float(on_boundary and not strict.passed)}
    return BoundCertificate(name, lhs, rhs, relation, params, strict.passed or on_boundary)


def verify_h1_szop_witness(alpha, beta, gamma, band=BOUNDARY_BAND) -> BoundCertificate:
    """``alpha/beta < concentration_ratio(gamma, alpha + beta)``.

    Passes strictly, or within ``band`` of equality (flagged ``boundary``).
    """
    if alpha <= 0 or beta <= 0 or alpha + beta >= 0.25:
        raise ValueError("need alpha, beta > 0 with alpha + beta < 1/4")
    if not 0 < gamma < 1:
        raise ValueError("gamma must lie in (0, 1)")
    lhs = alpha / beta
    rhs = float(concentration_ratio(gamma, alpha + beta))
    params = {"alpha": alpha, "beta": beta, "gamma": gamma}
    return _band_certificate("h1_szop_witness", lhs, rhs, "<", params, band)


def verify_h1_bshift_witness(alpha, beta, band=BOUNDARY_BAND) -> BoundCertificate:
    """``1 - alpha >= thm2_f0_upper_bound(alpha + beta, alpha/beta)``."""
    if not (0 < alpha < 1 and 0 < beta < 1 and alpha < beta and alpha + beta < 1):
        raise ValueError("need 0 < alpha < beta < 1 and alpha + beta < 1")
    eps, delta = alpha + beta, alpha / beta
    params = {"alpha": alpha, "beta": beta, "range_violation": _range_flag(eps, delta)}
    return _band_certificate("h1_bshift_witness", 1 - alpha, thm2_f0_upper_bound(eps, delta),
                             ">=", params, band)


def a1_measure_lower(alpha, beta) -> float:
    sb = math.sqrt(beta)
    series = math.log((1 + sb) / (1 - sb)) / (2 * sb) - 1
    return (1 - alpha - beta) / beta * series


def verify_a1_witness(alpha, beta) -> BoundCertificate:
    """Lower bound on ``m(A)`` exceeds the upper bound ``alpha/(2 beta)``."""
    if not (0 < beta < 1 and alpha > 0 and alpha + beta < 1):
        raise ValueError("need 0 < beta < 1, alpha > 0, alpha + beta < 1")
    params = {"alpha": alpha, "beta": beta, "tol": 0.0, "range_violation": _range_flag(beta)}
    return BoundCertificate("a1_witness", a1_measure_lower(alpha, beta), alpha / (2 * beta), ">", params)


# --- optimizers ------------------------------------------------------------


@dataclass(frozen=True)
class OptimizedBound:
    alpha: float
    beta: float
    bound: float
    gamma: float | None = None
    passing_side: str = "below"  # witnesses pass for alpha below alpha* (or "above")

    def as_tuple(self):
        if self.gamma is None:
            return self.alpha, self.beta, self.bound
        return self.alpha, self.beta, self.gamma, self.bound


def _bisect_boundary(passes, good, bad, iters=60):
    """Shrink ``[good, bad]`` around the pass/fail transition; returns ``good``."""
    for _ in range(iters):
        mid = 0.5 * (good + bad)
        if passes(mid):
            good = mid
        else:
            bad = mid
        if abs(bad - good) < 1e-14:
            break
    return good


def _maximize_over_beta(alpha_of_beta, lo, hi, grid=200, rounds=4, shrink=10.0):
    """Grid search over ``beta`` then repeated local refinement."""
    betas = np.linspace(lo, hi, grid + 2)[1:-1]
    for _ in range(rounds + 1):
        vals = np.array([alpha_of_beta(b) for b in betas])
        i = int(np.argmax(vals))  # first maximum: smallest beta on ties
        best_beta, best_alpha = float(betas[i]), float(vals[i])
        step = betas[1] - betas[0]
        half = step * grid / (2 * shrink)
        betas = np.linspace(max(lo, best_beta - half), min(hi, best_beta + half), grid // 10 + 1)
        betas = betas[(betas > lo) & (betas < hi)]
    return best_alpha, best_beta


def _szop_passes(alpha, beta, tol=CONTRADICTION_TOL):
    return thm1_measure_lower_bound(alpha + beta) - alpha / beta > tol


@functools.lru_cache(maxsize=None)
def optimize_h1_szop(grid=200, rounds=4) -> OptimizedBound:
    """Largest ``alpha`` with a passing H^1 witness; bound ``2 - alpha``."""

    def alpha_star(beta):
        top = 0.25 - beta - 1e-12
        if not _szop_passes(1e-12, beta):
            return 0.0
        if _szop_passes(top, beta):
            return top
        return _bisect_boundary(lambda a: _szop_passes(a, beta), 1e-12, top)

    alpha, beta = _maximize_over_beta(alpha_star, 0.0, 0.25, grid, rounds)
    gamma = thm1_argmax(alpha + beta)[0]
    return OptimizedBound(alpha, beta, 2 - alpha, gamma, "below")


def _bshift_passes(alpha, beta, tol=CONTRADICTION_TOL):
    return (1 - alpha) - thm2_f0_upper_bound(alpha + beta, alpha / beta) > tol


def _bshift_upper_crossing(beta, scan=400):
    """Start of the passing interval that reaches ``alpha -> min(beta, 1/2)``.

    Returns 0 when no failing ``alpha`` exists for this ``beta``.
    """
    top = min(beta, 0.5, 1 - beta) - 1e-9
    alphas = np.linspace(top, 1e-6, scan)
    ok = [_bshift_passes(a, beta) for a in alphas]
    if not ok[0]:
        return top
    for k in range(1, scan):
        if not ok[k]:
            return _bisect_boundary(lambda a: _bshift_passes(a, beta), alphas[k - 1], alphas[k])
    return 0.0


@functools.lru_cache(maxsize=None)
def optimize_h1_bshift(grid=200, rounds=4) -> OptimizedBound:
    """B on H^1: worst-case ``beta`` for the upper passing region.

    For each ``beta < 1/2`` the witness passes for ``alpha`` above a
    crossing point; the bound takes the largest crossing over ``beta``.
    """
    alpha, beta = _maximize_over_beta(_bshift_upper_crossing, 0.0, 0.5, grid, rounds)
    return OptimizedBound(alpha, beta, 2 - alpha, None, "above")


def _a1_passes(alpha, beta, tol=CONTRADICTION_TOL):
    return a1_measure_lower(alpha, beta) - alpha / (2 * beta) > tol


@functools.lru_cache(maxsize=None)
def optimize_a1(grid=200, rounds=4) -> OptimizedBound:
    """Largest ``alpha`` with a passing a^1 witness over ``beta`` in ``(0, 1)``."""

    def alpha_star(beta):
        top = 1 - beta - 1e-12
        if not _a1_passes(1e-12, beta):
            return 0.0
        return _bisect_boundary(lambda a: _a1_passes(a, beta), 1e-12, top)

    alpha, beta = _maximize_over_beta(alpha_star, 0.0, 1.0, grid, rounds)
    return OptimizedBound(alpha, beta, 2 - alpha, None, "below")


def boundary_perturbation(result: OptimizedBound, verifier, small=1e-4, large=1e-2):
    """Witness status a small step into and a large step out of the passing side.

    Returns ``(inside_passes, outside_passes)``; a genuine boundary gives
    ``(True, False)``.
    """
    sign = 1.0 if result.passing_side == "above" else -1.0
    extra = () if result.gamma is None else (result.gamma,)

    def strict(alpha):
        cert = verifier(alpha, result.beta, *extra)
        return cert.margin > 0

    return strict(result.alpha + sign * small), strict(result.alpha - sign * large)


# --- closed forms ----------------------------------------------------------


def interpolation_bound(p: float) -> float:
    """Riesz-Thorin bound for B on H^p: ``2^{|2-p|/p}``."""
    if p < 1:
        raise ValueError("interpolation bound needs p >= 1")
    if np.isinf(p):
        return 2.0
    return 2.0 ** (abs(2.0 - p) / p)


def sharp_szr_constant(r: float) -> float:
    """Norm of ``u -> u(r e^{iθ}) - u(0)`` from h^1 to L^1: ``2 - (4/π) arccos r``."""
    if not 0 <= r <= 1:
        raise ValueError("r must lie in [0, 1]")
    return 2.0 - 4.0 / math.pi * math.acos(r)


def proven_upper_bound(op: str, space_kind: str, p: float = 1.0, r: float | None = None) -> float:
    """Best available upper bound for ``op`` on the named space."""
    if space_kind == "h1":
        return sharp_szr_constant(r) if op == "S_r" else 2.0
    if space_kind == "hardy":
        if np.isinf(p):
            return 2.0
        if p == 1:
            return PUBLISHED_H1_BSHIFT if op == "B" else PUBLISHED_H1_SZOP
        return interpolation_bound(p)
    if space_kind == "bergman":
        if op == "B":
            # only the A^1 transfer is proven, through ||z f|| >= ||f||/2
            if p != 1:
                raise ValueError("no proven bound for B on A^p with p != 1")
            return 2 * PUBLISHED_H1_BSHIFT
        return PUBLISHED_H1_SZOP if p == 1 else interpolation_bound(p)
    raise ValueError(f"unknown space {space_kind!r}")


def bergman_transfer_check(f: TaylorFn, p: float, w: RadialWeight, k: float, n: int = 1024):
    """Certify ``||S f||_{A^p(w)} <= K ||f||``, plus ``||B f|| <= 2K ||f||`` on A^1.

    The second certificate is only produced for ``p = 1`` with an increasing
    weight.
    """
    norm = bergman_norm(f, p, w, n)
    if not norm > 0:
        raise ValueError("f has zero Bergman norm")
    params = {"p": p, "K": k, "tol": 1e-12 * norm}
    certs = [BoundCertificate("bergman_szop_transfer", bergman_norm(subtract_value(f), p, w, n),
                              k * norm, "<=", params)]
    if p == 1 and w.monotone_increasing:
        certs.append(BoundCertificate("bergman_bshift_transfer", bergman_norm(backward_shift(f), 1, w, n),
                                      2 * k * norm, "<=", params))
    return certs
