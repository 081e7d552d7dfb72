"""Executable bounds: expected walk length and Green-function inequalities.

``expected_steps_bound`` evaluates the closed-form upper bound on the mean
number of walk steps for a ball domain,

    E(l) <= 2^{4s+1} pi^{n/2} Gamma(s+n/2) Gamma(s+1) / Gamma(n/2)^2 * C4 *
            { 2^s / s1
              + (r-|x0|)^s [ r^{n-(1+s1+s)/2} B((1-s1-s)/2, n) ]^{2(s1+s)/(1+s1+s)}
                ( [ (r+|x0|)^{E+n} - ((r-|x0|)/2)^{E+n} ] / (E+n)
                )^{(1-s1-s)/(1+s1+s)} },

with E = (1+s1+s)(s1-n)/(1-s1-s) and the exponent split s1 = s for
s <= 1/3, s1 = (1-s)/2 otherwise.  The bound is loose (often by orders of
magnitude, increasingly so as s -> 1) but provably dominates the empirical
mean and is monotone in both s and |x0|; those are the properties the test
suite checks.

``green_bound_constants`` returns the six constants of the pointwise
Green-function bounds

    G <= C1 d(x)^s d(y)^s / |x-y|^n
    G <= C3 d(x)^s / (d(y)^s |x-y|^{n-2s})
    G <= C4 d(x)^s d(y)^{s-s1} / |x-y|^{n-s1},   s1 in (0, 2s)

where d is the distance to the sphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .geometry import Domain
from .specfun import log_beta, log_gamma
from .wos import ProblemSpec, _run_many

__all__ = ["StepBoundInputs", "expected_steps_bound", "green_bound_constants",
           "empirical_step_check", "StepCheckResult"]


@dataclass(frozen=True)
class StepBoundInputs:
    """Inputs of the step bound, with the derived split exponent attached."""

    n: int
    s: float
    r: float
    x0_norm: float
    s1: float
    a_s: float
    rho: float

    @staticmethod
    def create(n: int, s: float, r: float, x0_norm: float) -> "StepBoundInputs":
        if n < 2 or int(n) != n:
            raise DomainError(f"step bound requires integer n >= 2, got {n}")
        if not (0.0 < s < 1.0):
            raise DomainError(f"order s must lie in (0, 1), got {s}")
        if not (r > 0.0):
            raise DomainError(f"radius must be positive, got {r}")
        if not (0.0 <= x0_norm < r):
            raise DomainError(f"|x0| must lie in [0, r), got {x0_norm}")
        s1 = s if s <= 1.0 / 3.0 else 0.5 * (1.0 - s)
        a_s = (s * s + 4.0 * n * s + 2.0 * s + 4.0 * n - 3.0) / (2.0 * (1.0 - s))
        return StepBoundInputs(n=int(n), s=float(s), r=float(r),
                               x0_norm=float(x0_norm), s1=s1, a_s=a_s,
                               rho=float(x0_norm) / float(r))


def green_bound_constants(n: int, s: float):
    """(C1, C2, C3, C4, C5, C6) of the Green-function and step bounds."""
    if n < 2 or int(n) != n:
        raise DomainError(f"green_bound_constants requires integer n >= 2, got {n}")
    if not (0.0 < s < 1.0):
        raise DomainError(f"order s must lie in (0, 1), got {s}")
    half = 0.5 * n
    c1 = math.exp(log_gamma(half) - half * math.log(math.pi)
                  - log_gamma(s) - log_gamma(s + 1.0))
    c2 = math.exp(log_gamma(half - s) - log_gamma(s)
                  - half * math.log(math.pi) - 2.0 * s * math.log(2.0))
    c3 = 2.0 ** (2.0 * s) * max(c1, c2)
    c4 = c3
    c5 = 2.0 ** (6.0 * s + 1.0) / math.exp(log_beta(s, half))
    c6 = (2.0 ** (4.0 * s + 1.0) * s
          * math.exp(log_gamma(s + half) + log_gamma(half - s) - 2.0 * log_gamma(half)))
    return c1, c2, c3, c4, c5, c6


def expected_steps_bound(inputs: StepBoundInputs) -> float:
    """Closed-form upper bound on the expected number of walk steps."""
    n, s, r, x0 = inputs.n, inputs.s, inputs.r, inputs.x0_norm
    s1 = inputs.s1
    _, _, _, c4, _, _ = green_bound_constants(n, s)
    half = 0.5 * n
    pref = (2.0 ** (4.0 * s + 1.0) * math.pi ** half
            * math.exp(log_gamma(s + half) + log_gamma(s + 1.0) - 2.0 * log_gamma(half))
            * c4)
    sigma = s1 + s
    term1 = 2.0 ** s / s1
    expo = (1.0 + sigma) * (s1 - n) / (1.0 - sigma)
    inner = ((r + x0) ** (expo + n) - (0.5 * (r - x0)) ** (expo + n)) / (expo + n)
    radial = (r ** (n - 0.5 * (1.0 + sigma))
              * math.exp(log_beta(0.5 * (1.0 - sigma), float(n))))
    term2 = ((r - x0) ** s * radial ** (2.0 * sigma / (1.0 + sigma))
             * inner ** ((1.0 - sigma) / (1.0 + sigma)))
    return pref * (term1 + term2)


@dataclass(frozen=True)
class StepCheckResult:
    mean_steps: float
    std_error: float
    bound: float
    passed: bool


def empirical_step_check(n: int, s: float, r: float, x0, n_samples: int,
                         master_seed: int = 2024,
                         parallelism: int = 1) -> StepCheckResult:
    """Mean walk length on the ball B_r versus the closed-form bound.

    Walk lengths do not depend on the data fields, so the walks run with
    zero source and boundary values.  Passes when mean + 3 stderr <= bound.
    """
    x0 = np.asarray(x0, dtype=float)
    problem = ProblemSpec(n=n, s=s, domain=Domain.ball(np.zeros(n), r))
    _, steps, capped = _run_many(problem, x0, n_samples, master_seed, parallelism)
    vals = steps[~capped].astype(float)
    if vals.size == 0:
        raise DomainError("all walks capped; cannot measure mean steps")
    mean = math.fsum(vals) / vals.size
    var = math.fsum((vals - mean) ** 2) / max(vals.size - 1, 1)
    se = math.sqrt(var / vals.size)
    bound = expected_steps_bound(StepBoundInputs.create(n, s, r, float(np.linalg.norm(x0))))
    return StepCheckResult(mean_steps=mean, std_error=se, bound=bound,
                           passed=mean + 3.0 * se <= bound)
