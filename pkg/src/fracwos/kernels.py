"""Closed-form kernels of the ball representation formula.

For a ball B_r(c), order s in (0, 1) and dimension n:

* Poisson kernel (exit density, exterior support)
      P(x, y) = alpha(n,s) ((r^2-|x-c|^2)/(|y-c|^2-r^2))^s / |x-y|^n
* Green function (source kernel, interior support), n >= 2:
      G(x, y) = kappa(n,s) |x-y|^{2s-n} * B(s, n/2-s) * I(q; s, n/2-s),
      q = rstar/(1+rstar),
      rstar = (r^2-|x-c|^2)(r^2-|y-c|^2) / (r^2 |x-y|^2).
  The incomplete-beta form is the exact reformulation (substitute
  t = u/(1-u)) of the integral int_0^rstar t^{s-1}(1+t)^{-n/2} dt; it is
  evaluated in closed form because the walk engine and the identity tests
  hit it in hot loops and need uniform accuracy for rstar -> 0 and -> inf.
* exit mass a = integral of G(c, .) over the ball; green mass b turns the
  radially-weighted interior law into the source weight
      w(y) = b * (1 - I(|y-c|^2/r^2; n/2-s, s)).

In one dimension the package supports the order-1/2 logarithmic Green
function (prefactor 1/pi) through ``green_function``; interval source
weights for s != 1/2 live in the walk module and use the generic
n-dimensional kappa continued to n = 1, ``kappa_interval_1d``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularityError, UnsupportedParameterError
from .specfun import _betainc_raw, log_beta, log_gamma

__all__ = [
    "FracConstants",
    "BallContext",
    "constants",
    "kappa_interval_1d",
    "poisson_kernel",
    "green_function",
    "exit_mass_a",
    "green_mass_b",
    "interior_weight",
    "classical_green_limit",
    "KAPPA_LOG_1D",
]

# prefactor of the 1-D order-1/2 logarithmic Green function
KAPPA_LOG_1D = 1.0 / math.pi


@dataclass(frozen=True)
class FracConstants:
    """The constant family attached to (n, s).

    ``C``      normalization of the singular-integral operator definition
    ``alpha``  Poisson kernel constant Gamma(n/2) sin(pi s) / pi^{n/2+1}
    ``kappa``  Green function constant; 1/pi in the n = 1 branch
    ``a_ns``   fundamental-solution constant Gamma(n/2-s)/(2^{2s} pi^{n/2} Gamma(s)),
               defined for n >= 2 (nan otherwise)
    ``omega``  surface measure of the unit sphere, 2 pi^{n/2}/Gamma(n/2)
    """

    n: int
    s: float
    C: float
    alpha: float
    kappa: float
    a_ns: float
    omega: float


def _check_order(n: int, s: float) -> None:
    if int(n) != n or n < 1:
        raise DomainError(f"dimension must be an integer >= 1, got {n}")
    if not (0.0 < s < 1.0):
        raise DomainError(f"order s must lie in (0, 1), got {s}")


def kappa_interval_1d(s: float) -> float:
    """Generic Green-function constant continued to n = 1: 1/(2^{2s} Gamma(s)^2).

    The printed n = 1 constant 1/pi belongs to the order-1/2 logarithmic
    kernel only; interval source weights for s != 1/2 require this value
    (using 1/pi biases the estimator by Gamma(s)^2 2^{2s}/pi).
    """
    _check_order(1, s)
    return math.exp(-2.0 * s * math.log(2.0) - 2.0 * log_gamma(s))


def constants(n: int, s: float) -> FracConstants:
    """All constants for dimension n and order s, evaluated via log-gamma."""
    _check_order(n, s)
    n = int(n)
    half = 0.5 * n
    C = s * math.exp(2.0 * s * math.log(2.0) + log_gamma(half + s)
                     - half * math.log(math.pi) - log_gamma(1.0 - s))
    alpha = math.exp(log_gamma(half)) * math.sin(math.pi * s) / math.pi ** (half + 1.0)
    if n == 1:
        kappa = 1.0 / math.pi
    else:
        kappa = math.exp(log_gamma(half) - 2.0 * s * math.log(2.0)
                         - half * math.log(math.pi) - 2.0 * log_gamma(s))
    if n >= 2 and half - s > 0.0:
        a_ns = math.exp(log_gamma(half - s) - 2.0 * s * math.log(2.0)
                        - half * math.log(math.pi) - log_gamma(s))
    else:
        a_ns = math.nan
    omega = 2.0 * math.pi ** half / math.exp(log_gamma(half))
    return FracConstants(n=n, s=float(s), C=C, alpha=alpha, kappa=kappa,
                         a_ns=a_ns, omega=omega)


@dataclass(frozen=True, eq=False)
class BallContext:
    """A ball together with the (n, s) constants."""

    center: np.ndarray
    radius: float
    constants: FracConstants

    @staticmethod
    def create(center, radius: float, n_s: FracConstants | None = None, *,
               s: float | None = None) -> "BallContext":
        c = np.asarray(center, dtype=float)
        if c.ndim != 1 or not np.all(np.isfinite(c)):
            raise DomainError("ball center must be a finite 1-D point")
        if not (radius > 0.0 and math.isfinite(radius)):
            raise DomainError(f"ball radius must be positive and finite, got {radius}")
        if n_s is None:
            if s is None:
                raise DomainError("either constants or s must be supplied")
            n_s = constants(c.size, s)
        elif n_s.n != c.size:
            raise DomainError(f"constants are for n={n_s.n}, center has n={c.size}")
        return BallContext(center=c, radius=float(radius), constants=n_s)

    @property
    def n(self) -> int:
        return self.constants.n

    @property
    def s(self) -> float:
        return self.constants.s


def _offsets(ctx: BallContext, x) -> tuple[np.ndarray, float]:
    p = np.asarray(x, dtype=float)
    if p.shape != ctx.center.shape:
        raise DomainError(f"point shape {p.shape} does not match ball dimension {ctx.n}")
    d = p - ctx.center
    return d, float(np.linalg.norm(d))


def poisson_kernel(ctx: BallContext, x, y) -> float:
    """Exit density of the ball at exterior point y, started from interior x."""
    dx, nx = _offsets(ctx, x)
    dy, ny = _offsets(ctx, y)
    r = ctx.radius
    if nx >= r:
        raise DomainError("poisson_kernel requires x strictly inside the ball")
    if ny <= r:
        raise DomainError("poisson_kernel requires y strictly outside the closed ball")
    s = ctx.s
    dist = float(np.linalg.norm(dx - dy))
    return ctx.constants.alpha * ((r * r - nx * nx) / (ny * ny - r * r)) ** s / dist ** ctx.n


def _green_nd(n: int, s: float, kappa: float, nx: float, ny: float,
              dist: float, r: float) -> float:
    rstar = (r * r - nx * nx) * (r * r - ny * ny) / (r * r * dist * dist)
    q = rstar / (1.0 + rstar)
    inner = math.exp(log_beta(s, 0.5 * n - s)) * _betainc_raw(q, s, 0.5 * n - s,
                                                              log_beta(s, 0.5 * n - s))
    return kappa * dist ** (2.0 * s - n) * inner


def green_function(ctx: BallContext, x, y) -> float:
    """Ball Green function G(x, y) for interior x != y."""
    dx, nx = _offsets(ctx, x)
    dy, ny = _offsets(ctx, y)
    r = ctx.radius
    if nx >= r or ny >= r:
        raise DomainError("green_function requires both points inside the open ball")
    dist = float(np.linalg.norm(dx - dy))
    if dist == 0.0:
        raise SingularityError("green_function is singular at x = y")
    n, s = ctx.n, ctx.s
    if n == 1:
        if s != 0.5:
            raise UnsupportedParameterError(
                "the 1-D Green function is implemented only at s = 1/2 "
                "(logarithmic branch); interval source weights for other s "
                "are handled by the walk module")
        a, b = float(dx[0]), float(dy[0])
        num = r * r - a * b + math.sqrt((r * r - a * a) * (r * r - b * b))
        return KAPPA_LOG_1D * math.log(num / (r * dist))
    return _green_nd(n, s, ctx.constants.kappa, nx, ny, dist, r)


def exit_mass_a(ctx: BallContext) -> float:
    """Integral of G(center, .) over the ball: kappa B(s, n/2) omega r^{2s} / (2s)."""
    n, s = ctx.n, ctx.s
    kf = ctx.constants.kappa if n >= 2 else kappa_interval_1d(s)
    return (kf * math.exp(log_beta(s, 0.5 * n)) * ctx.constants.omega
            * ctx.radius ** (2.0 * s) / (2.0 * s))


def green_mass_b(ctx: BallContext) -> float:
    """Normalizer of the interior source weight:
    kappa B(n/2-s, s) r^{2s} pi^{n/2} / (s Gamma(n/2))."""
    n, s = ctx.n, ctx.s
    if n == 1:
        if s >= 0.5:
            raise UnsupportedParameterError(
                "green_mass_b needs n/2 - s > 0; 1-D orders s >= 1/2 are "
                "handled by the walk module's interval formulas")
        kf = kappa_interval_1d(s)
    else:
        kf = ctx.constants.kappa
    return (kf * math.exp(log_beta(0.5 * n - s, s)) * ctx.radius ** (2.0 * s)
            * math.pi ** (0.5 * n) / (s * math.exp(log_gamma(0.5 * n))))


def interior_weight(ctx: BallContext, y) -> float:
    """Source weight b * (1 - I(|y-c|^2/r^2; n/2-s, s)) for interior y.

    The second beta parameter is s, as the substitution t = (1-t')/t' in the
    Green mass integral produces; the kernel-weight identity
    G(c, y) = interior_weight(y) * p2*(y) holds only with this choice and is
    enforced by the test suite.
    """
    _, ny = _offsets(ctx, y)
    r = ctx.radius
    if ny >= r:
        raise DomainError("interior_weight requires y inside the open ball")
    n, s = ctx.n, ctx.s
    z, w = 0.5 * n - s, s
    frac = 1.0 - _betainc_raw(ny * ny / (r * r), z, w, log_beta(z, w))
    return green_mass_b(ctx) * frac


def classical_green_limit(ctx: BallContext, x, y) -> float:
    """Limit s -> 1 of the Green function: the classical ball Green function.

    n = 2 gives the logarithmic form (1/(4 pi)) log(1 + rstar); n >= 3 the
    difference-of-powers form.  The order stored in ``ctx`` is ignored.
    """
    dx, nx = _offsets(ctx, x)
    dy, ny = _offsets(ctx, y)
    r = ctx.radius
    n = ctx.n
    if n < 2:
        raise UnsupportedParameterError("classical_green_limit requires n >= 2")
    if nx >= r or ny >= r:
        raise DomainError("classical_green_limit requires interior points")
    dist = float(np.linalg.norm(dx - dy))
    if dist == 0.0:
        raise SingularityError("classical_green_limit is singular at x = y")
    rstar = (r * r - nx * nx) * (r * r - ny * ny) / (r * r * dist * dist)
    kappa1 = math.exp(log_gamma(0.5 * n)) / (4.0 * math.pi ** (0.5 * n))
    if n == 2:
        return kappa1 * math.log1p(rstar)
    return (2.0 * kappa1 / (n - 2.0)) * dist ** (2.0 - n) * (
        1.0 - (1.0 + rstar) ** (-(n - 2.0) / 2.0))
