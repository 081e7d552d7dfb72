"""Modified walk-on-spheres engine and Monte Carlo estimator.

A walk started at x0 repeatedly jumps out of the largest ball inscribed at
the current position, using the heavy-tailed exit law of the order-2s
process, until it lands outside the domain.  Each intermediate ball also
contributes one weighted interior source sample, so the walk's score is

    Z = g(X_l) + sum_{k=0}^{l-1} w(X_k, Y_{k+1}) f(Y_{k+1}),

the weight being ``kernels.interior_weight`` for n >= 2 and the interval
formulas of ``source_contribution_1d`` for n = 1.  The estimator averages N
independent walks, one keyed random stream per walk, and reduces with exact
(fsum) summation so results are bit-identical for any parallelism level.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._backend import using_numba
from .errors import DomainError, EstimationFailure
from .geometry import Domain, contains, inscribed_radius, spherical_to_cartesian
from .kernels import (BallContext, KAPPA_LOG_1D, constants, green_mass_b,
                      interior_weight, kappa_interval_1d)
from .sampling import (EXIT_RADIUS_GUARD, RngStream, _as_generator,
                       sample_direction, sample_exit_radius,
                       sample_interior_radius)
from .specfun import gauss_2f1, log_beta, log_gamma

__all__ = ["ProblemSpec", "WalkResult", "EstimatorSummary", "run_walk",
           "source_contribution_1d", "interval_source_weight", "estimate"]

_CHUNK = 8192
_DEFAULT_MAX_STEPS = 1_000_000


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """Dirichlet problem for the order-2s operator on a bounded domain.

    ``f`` (interior source) and ``g`` (exterior data) take arrays of shape
    (..., n) and return shape (...); ``None`` means identically zero.
    ``exact`` is optional and only used for error reporting.  Walks longer
    than ``max_steps`` are capped: their score is excluded from the
    estimator and they are counted separately (the expected number of steps
    diverges as s -> 1, so a cap is required for safety).
    """

    n: int
    s: float
    domain: Domain
    f: Callable[[np.ndarray], np.ndarray] | None = None
    g: Callable[[np.ndarray], np.ndarray] | None = None
    exact: Callable[[np.ndarray], np.ndarray] | None = None
    max_steps: int = _DEFAULT_MAX_STEPS
    f_name: str | None = None
    g_name: str | None = None

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"dimension must be an integer >= 1, got {self.n}")
        if not (0.0 < self.s < 1.0):
            raise DomainError(f"order s must lie in (0, 1), got {self.s}")
        if self.domain.dimension != self.n:
            raise DomainError(
                f"domain dimension {self.domain.dimension} != problem dimension {self.n}")
        if self.max_steps < 1:
            raise DomainError(f"max_steps must be >= 1, got {self.max_steps}")


@dataclass(frozen=True)
class WalkResult:
    """Score and length of a single walk. Capped walks carry a nan score."""

    score: float
    steps: int
    capped: bool


@dataclass(frozen=True)
class EstimatorSummary:
    estimate: float
    sample_variance: float
    std_error: float
    avg_steps: float
    n_samples: int
    n_capped: int
    wall_seconds: float
    abs_error: float | None = None


def _eval_field(fn, pts: np.ndarray) -> np.ndarray:
    out = np.asarray(fn(pts), dtype=float)
    if out.shape != pts.shape[:-1]:
        raise DomainError(
            f"field returned shape {out.shape} for points of shape {pts.shape}")
    return out


def interval_source_weight(r_k: float, rho: float, s: float) -> float:
    """Weight of an interval source sample at offset distance rho < r_k.

    s < 1/2 pairs with the radial power law rho = r u^{1/(2s)} and the
    incomplete-beta tail weight; s = 1/2 pairs a uniform radius with the
    logarithmic kernel; s > 1/2 pairs a uniform radius with the
    hypergeometric combination evaluated at the negative argument
    -(r_k^2 - rho^2)/rho^2 (the positive mirror diverges).
    """
    if not (r_k > 0.0):
        raise DomainError(f"r_k must be positive, got {r_k}")
    if not (0.0 <= rho <= r_k):
        raise DomainError(f"rho must lie in [0, r_k], got {rho}")
    if rho == 0.0 and s >= 0.5:
        raise DomainError("rho = 0 is singular for s >= 1/2; resample the draw")
    if s < 0.5:
        from .specfun import reg_inc_beta
        b = kappa_interval_1d(s) * math.exp(log_beta(0.5 - s, s)) * r_k ** (2 * s) / s
        return b * (1.0 - reg_inc_beta(rho * rho / (r_k * r_k), 0.5 - s, s))
    if s == 0.5:
        if rho == r_k:
            return 0.0
        return 2.0 * KAPPA_LOG_1D * r_k * math.log(
            (r_k + math.sqrt(r_k * r_k - rho * rho)) / rho)
    aa = rho * rho
    bb = r_k * r_k - aa
    if bb <= 0.0:
        return 0.0
    arg = -bb / aa
    f1 = gauss_2f1(-0.5, s, s + 1.0, arg)
    f2 = gauss_2f1(0.5, s + 1.0, s + 2.0, arg)
    q = aa ** -1.5 * bb ** s / (s * (s + 1.0)) * (
        aa * (s + 1.0) * f1 - bb * s * f2)
    return 2.0 * kappa_interval_1d(s) * r_k * q


def source_contribution_1d(x_k: float, r_k: float, s: float, f, rng) -> float:
    """One weighted interior source sample for an interval walk step.

    Draws the offset radius (power law for s < 1/2, uniform otherwise),
    a +-1 sign with equal probability, and returns weight * f(Y).
    Zero-radius draws are resampled in the s >= 1/2 branches (logarithmic
    singularity, probability zero).
    """
    if not (r_k > 0.0):
        raise DomainError(f"r_k must be positive, got {r_k}")
    gen = _as_generator(rng)
    if s < 0.5:
        rho = sample_interior_radius(r_k, s, gen.random())
    else:
        u = gen.random()
        while u <= 0.0:
            u = gen.random()
        rho = r_k * u
    w = interval_source_weight(r_k, rho, s)
    sign = 1.0 if gen.random() < 0.5 else -1.0
    y = np.array([x_k + rho * sign])
    return w * float(_eval_field(f, y))


def run_walk(p: ProblemSpec, x0, rng) -> WalkResult:
    """Run one walk from x0. Reference implementation of the walk kernel."""
    x = np.asarray(x0, dtype=float).copy()
    if not contains(p.domain, x):
        raise DomainError("walk must start inside the domain")
    gen = _as_generator(rng)
    tol = p.domain.grazing_tol
    n, s = p.n, p.s
    cst = constants(n, s)
    acc = 0.0
    steps = 0
    capped = False
    while True:
        if not contains(p.domain, x):
            break
        rk = inscribed_radius(p.domain, x)
        if rk < tol:
            steps = max(steps, 1)
            break
        if p.f is not None:
            if n == 1:
                acc += source_contribution_1d(float(x[0]), rk, s, p.f, gen)
            else:
                ctx = BallContext(center=x.copy(), radius=rk, constants=cst)
                u = gen.random()
                rho_y = sample_interior_radius(rk, s, u)
                theta, phis = sample_direction(n, gen)
                y = x.copy() if rho_y == 0.0 else spherical_to_cartesian(x, rho_y, theta, phis)
                acc += interior_weight(ctx, y) * float(_eval_field(p.f, y))
        while True:
            u = gen.random()
            if u <= 0.0:
                continue
            rho = sample_exit_radius(rk, s, u)
            if rho <= EXIT_RADIUS_GUARD * rk:
                break
        if n == 1:
            sign = 1.0 if gen.random() < 0.5 else -1.0
            x[0] += rho * sign
        else:
            theta, phis = sample_direction(n, gen)
            x = spherical_to_cartesian(x, rho, theta, phis)
        steps += 1
        if not contains(p.domain, x):
            break
        if steps >= p.max_steps:
            capped = True
            break
    if capped:
        return WalkResult(score=math.nan, steps=steps, capped=True)
    score = acc
    if p.g is not None:
        score += float(_eval_field(p.g, x))
    return WalkResult(score=score, steps=steps, capped=False)


# --------------------------------------------------------------------------
# batch execution

def _kernel_setup(p: ProblemSpec):
    n, s = p.n, p.s
    dom = p.domain
    if dom.kind == "ball":
        dom_kind, dom_a, dom_b = 0, dom.center, np.array([dom.radius])
    else:
        dom_kind, dom_a, dom_b = 1, dom.lo, dom.hi
    if p.f is None:
        mode, b_const = 0, 0.0
    elif n >= 2:
        mode = 1
        b_const = green_mass_b(BallContext(center=np.zeros(n), radius=1.0,
                                           constants=constants(n, s)))
    elif s < 0.5:
        mode = 2
        b_const = kappa_interval_1d(s) * math.exp(log_beta(0.5 - s, s)) / s
    elif s == 0.5:
        mode, b_const = 3, 2.0 * KAPPA_LOG_1D
    else:
        mode, b_const = 4, 0.0
    ln_beta_exit = log_beta(s, 1.0 - s)
    ln_beta_wt = log_beta(0.5 * n - s, s) if mode in (1, 2) else 0.0
    ln_front_f1 = log_gamma(s + 1.0) - log_gamma(s) if mode == 4 else 0.0
    ln_front_f2 = log_gamma(s + 2.0) - log_gamma(s + 1.0) if mode == 4 else 0.0
    kappa_1d = kappa_interval_1d(s) if n == 1 else 0.0
    return (dom_kind, dom_a, dom_b, mode, b_const, ln_beta_exit, ln_beta_wt,
            ln_front_f1, ln_front_f2, kappa_1d)


def _kernel_chunk(p, x0, master_seed, i0, i1, setup):
    from ._walk import walk_chunk

    (dom_kind, dom_a, dom_b, mode, b_const, ln_beta_exit, ln_beta_wt,
     ln_front_f1, ln_front_f2, kappa_1d) = setup
    n = p.n
    m = i1 - i0
    exit_pts = np.empty((m, n))
    steps = np.empty(m, dtype=np.int64)
    capped = np.zeros(m, dtype=np.uint8)
    cap = 16 * m if mode != 0 else 1
    src_w = np.empty(cap)
    src_y = np.empty((cap, n))
    src_walk = np.empty(cap, dtype=np.int64)
    start, cursor = i0, 0
    while True:
        start, cursor = walk_chunk(
            n, p.s, dom_kind, dom_a, dom_b, p.domain.grazing_tol,
            np.asarray(x0, dtype=float), master_seed, i0, start, i1,
            p.max_steps, mode, b_const, ln_beta_exit, ln_beta_wt,
            ln_front_f1, ln_front_f2, kappa_1d,
            exit_pts, steps, capped, src_w, src_y, src_walk, cursor)
        if start >= i1:
            break
        cap *= 2
        src_w = np.concatenate([src_w, np.empty(cap - src_w.shape[0])])
        src_y = np.concatenate([src_y, np.empty((cap - src_y.shape[0], n))])
        src_walk = np.concatenate(
            [src_walk, np.empty(cap - src_walk.shape[0], dtype=np.int64)])
    return exit_pts, steps, capped.astype(bool), src_w[:cursor], src_y[:cursor], src_walk[:cursor]


def _score_chunk(p, chunk_data):
    exit_pts, steps, capped, src_w, src_y, src_walk = chunk_data
    m = exit_pts.shape[0]
    scores = np.zeros(m)
    if p.g is not None:
        scores += _eval_field(p.g, exit_pts)
    if p.f is not None and src_w.size:
        contrib = src_w * _eval_field(p.f, src_y)
        scores += np.bincount(src_walk, weights=contrib, minlength=m)
    scores[capped] = math.nan
    return scores, steps, capped


def _python_chunk(p, x0, master_seed, i0, i1):
    m = i1 - i0
    scores = np.empty(m)
    steps = np.empty(m, dtype=np.int64)
    capped = np.zeros(m, dtype=bool)
    for i in range(i0, i1):
        res = run_walk(p, x0, RngStream(master_seed, i))
        scores[i - i0] = res.score
        steps[i - i0] = res.steps
        capped[i - i0] = res.capped
    return scores, steps, capped


def _run_many(p: ProblemSpec, x0, n_samples: int, master_seed: int,
              parallelism: int = 1):
    """(scores, steps, capped) for walks with stream indices 0..n_samples-1.

    Results depend only on (master_seed, n_samples): chunking is fixed and
    every walk owns its stream, so the parallelism level cannot change any
    output value.
    """
    x0 = np.asarray(x0, dtype=float)
    if not contains(p.domain, x0):
        raise DomainError("evaluation point must lie inside the domain")
    use_kernel = using_numba() and p.domain.kind in ("ball", "box")
    bounds = [(i, min(i + _CHUNK, n_samples)) for i in range(0, n_samples, _CHUNK)]
    scores = np.empty(n_samples)
    steps = np.empty(n_samples, dtype=np.int64)
    capped = np.zeros(n_samples, dtype=bool)
    setup = _kernel_setup(p) if use_kernel else None

    def work(span):
        i0, i1 = span
        if use_kernel:
            return _score_chunk(p, _kernel_chunk(p, x0, master_seed, i0, i1, setup))
        return _python_chunk(p, x0, master_seed, i0, i1)

    parallelism = max(1, int(parallelism))
    if parallelism == 1 or len(bounds) == 1:
        results = map(work, bounds)
        for (i0, i1), (sc, st, cp) in zip(bounds, results):
            scores[i0:i1], steps[i0:i1], capped[i0:i1] = sc, st, cp
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            for (i0, i1), (sc, st, cp) in zip(bounds, pool.map(work, bounds)):
                scores[i0:i1], steps[i0:i1], capped[i0:i1] = sc, st, cp
    return scores, steps, capped


def estimate(p: ProblemSpec, x0, n_samples: int, master_seed: int,
             parallelism: int = 1) -> EstimatorSummary:
    """Monte Carlo estimate of the solution at x0 from n_samples walks."""
    if n_samples < 2:
        raise DomainError(f"n_samples must be >= 2, got {n_samples}")
    t0 = time.perf_counter()
    scores, steps, capped = _run_many(p, x0, n_samples, master_seed, parallelism)
    ok = ~capped
    n_ok = int(ok.sum())
    if n_ok == 0:
        raise EstimationFailure("all walks hit the step cap; no usable samples")
    vals = scores[ok]
    mean = math.fsum(vals) / n_ok
    if n_ok > 1:
        var = math.fsum((vals - mean) ** 2) / (n_ok - 1)
    else:
        var = 0.0
    avg_steps = math.fsum(steps[ok].astype(float)) / n_ok
    abs_error = None
    if p.exact is not None:
        truth = float(_eval_field(p.exact, np.asarray(x0, dtype=float)[None, :])[0])
        abs_error = abs(mean - truth)
    return EstimatorSummary(
        estimate=mean,
        sample_variance=var,
        std_error=math.sqrt(var / n_ok),
        avg_steps=avg_steps,
        n_samples=n_samples,
        n_capped=int(n_samples - n_ok),
        wall_seconds=time.perf_counter() - t0,
        abs_error=abs_error,
    )
