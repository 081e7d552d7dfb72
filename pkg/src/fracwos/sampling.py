"""Exact samplers for the exit and interior-source distributions.

Randomness model
----------------
Every walk owns a counter-based stream keyed by ``(master_seed,
stream_index)``.  The Python-facing API hands out
``numpy.random.Generator(Philox(key=(master_seed, stream_index)))``; the
compiled walk kernels run an in-process replica of the Philox-4x64-10 block
function that reproduces the generator's ``random()`` output stream bit for
bit (the parity is asserted in the test suite).  Streams with distinct keys
are independent by construction and replay identically, in any execution
order, which is what makes the estimator reduction parallelism-proof.

Draw-order conventions (shared by the Python samplers and the kernels):

* exit radius: uniforms are drawn until positive, then inverted;
  astronomically distant exits (rho > 1e30 r) are redrawn - they carry
  probability < 1e-25 per draw for s >= 0.25 and only poison the floats.
* direction: theta first, then the polar angles in order of decreasing
  sin-power exponent m = n-2, ..., 1.
* sin^m rejection trial: two uniforms feed a Box-Muller normal for the
  truncated-Gaussian proposal; a third uniform is spent on the acceptance
  test only when the proposal lands in (0, pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import jit
from .errors import DomainError
from .geometry import spherical_to_cartesian
from .kernels import BallContext
from .specfun import _betainc_inv_raw, _sin_power_const, log_beta

__all__ = [
    "RngStream",
    "AngularLaw",
    "sample_exit_radius",
    "sample_interior_radius",
    "sample_sin_power_angle",
    "sample_direction",
    "sample_exit_point",
    "sample_interior_point",
]

EXIT_RADIUS_GUARD = 1e30
_U_MAX = 1.0 - 2.0 ** -53


# --------------------------------------------------------------------------
# counter-based streams (Philox 4x64-10, numpy-compatible)

_PHILOX_M0 = np.uint64(0xD2E7470EE14C6C93)
_PHILOX_M1 = np.uint64(0xCA5A826395121157)
_PHILOX_W0 = np.uint64(0x9E3779B97F4A7C15)
_PHILOX_W1 = np.uint64(0xBB67AE8584CAA73B)
_LOW32 = np.uint64(0xFFFFFFFF)
_SH32 = np.uint64(32)
_INV53 = 1.0 / 9007199254740992.0


@jit(inline="always")
def _mulhi(a, b):
    # high 64 bits of a*b via 32-bit limbs
    a_lo = a & _LOW32
    a_hi = a >> _SH32
    b_lo = b & _LOW32
    b_hi = b >> _SH32
    t = a_lo * b_lo
    c = t >> _SH32
    t = a_hi * b_lo + c
    mid_lo = t & _LOW32
    mid_hi = t >> _SH32
    t = a_lo * b_hi + mid_lo
    return a_hi * b_hi + mid_hi + (t >> _SH32)


@jit()
def _philox_fill(buf, blk, k0, k1):
    # one 4x64 block at counter (blk, 0, 0, 0); 10 rounds
    c0 = blk
    c1 = np.uint64(0)
    c2 = np.uint64(0)
    c3 = np.uint64(0)
    for _ in range(10):
        hi0 = _mulhi(_PHILOX_M0, c0)
        lo0 = _PHILOX_M0 * c0
        hi1 = _mulhi(_PHILOX_M1, c2)
        lo1 = _PHILOX_M1 * c2
        n0 = hi1 ^ c1 ^ k0
        n2 = hi0 ^ c3 ^ k1
        c0, c1, c2, c3 = n0, lo1, n2, lo0
        k0 = k0 + _PHILOX_W0
        k1 = k1 + _PHILOX_W1
    buf[0] = float(c0 >> np.uint64(11)) * _INV53
    buf[1] = float(c1 >> np.uint64(11)) * _INV53
    buf[2] = float(c2 >> np.uint64(11)) * _INV53
    buf[3] = float(c3 >> np.uint64(11)) * _INV53


@jit(inline="always")
def _stream_next(state, buf, k0, k1):
    # state[0] = block counter, state[1] = position in buf
    pos = state[1]
    if pos == np.uint64(4):
        state[0] = state[0] + np.uint64(1)
        _philox_fill(buf, state[0], k0, k1)
        pos = np.uint64(0)
    state[1] = pos + np.uint64(1)
    return buf[pos]


@dataclass(frozen=True)
class RngStream:
    """Keyed, replayable random stream. One stream per walk."""

    master_seed: int
    stream_index: int

    def __post_init__(self):
        for name in ("master_seed", "stream_index"):
            v = getattr(self, name)
            if int(v) != v or not (0 <= int(v) < 2 ** 64):
                raise DomainError(f"{name} must be a 64-bit unsigned integer, got {v}")

    def key(self) -> np.ndarray:
        return np.array([self.master_seed, self.stream_index], dtype=np.uint64)

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=self.key()))


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise DomainError(f"expected RngStream or numpy Generator, got {type(rng)!r}")


# --------------------------------------------------------------------------
# laws

@dataclass(frozen=True)
class AngularLaw:
    """Rejection-sampling profile of the sin^m angular density.

    ``alpha_m = m/2`` is the curvature of the Gaussian proposal
    exp(-alpha_m (x - pi/2)^2) matched to sin^m at its mode; ``eta`` is the
    acceptance probability I_m / (sqrt(2 pi / m) erf(sqrt(m/2) pi)).
    """

    m: int
    alpha_m: float
    eta: float

    @staticmethod
    def for_exponent(m: int) -> "AngularLaw":
        if m < 1 or int(m) != m:
            raise DomainError(f"sin-power exponent must be an integer >= 1, got {m}")
        m = int(m)
        eta = _sin_power_const(m) / (math.sqrt(2.0 * math.pi / m)
                                     * math.erf(math.sqrt(0.5 * m) * math.pi))
        return AngularLaw(m=m, alpha_m=0.5 * m, eta=eta)


def sample_exit_radius(r: float, s: float, u: float) -> float:
    """Radius of the exit jump: r * I^{-1}(1-u; s, 1-s)^{-1/2}, u in (0, 1)."""
    if not (r > 0.0 and 0.0 < s < 1.0):
        raise DomainError(f"need r > 0 and s in (0,1), got r={r}, s={s}")
    if not (0.0 < u < 1.0):
        raise DomainError(f"u must lie strictly inside (0, 1), got {u}")
    u = min(u, _U_MAX)
    z = _betainc_inv_raw(1.0 - u, s, 1.0 - s, log_beta(s, 1.0 - s))
    return r / math.sqrt(z)


def sample_interior_radius(r: float, s: float, u: float) -> float:
    """Radius of the interior source point: r * u^{1/(2s)}."""
    if not (r > 0.0 and 0.0 < s < 1.0):
        raise DomainError(f"need r > 0 and s in (0,1), got r={r}, s={s}")
    if not (0.0 <= u < 1.0):
        raise DomainError(f"u must lie in [0, 1), got {u}")
    return r * u ** (1.0 / (2.0 * s))


@jit(inline="always")
def _sin_power_trial(m, u1, u2, u3):
    # one rejection trial; returns the sample or -1.0
    z = 0.5 * math.pi + math.sqrt(-2.0 * math.log(u1) / m) * math.cos(2.0 * math.pi * u2)
    if not (0.0 < z < math.pi):
        return -1.0
    if u3 <= math.sin(z) ** m * math.exp(0.5 * m * (z - 0.5 * math.pi) ** 2):
        return z
    return -1.0


def _sample_sin_power_counted(m: int, gen: np.random.Generator):
    """(sample, raw proposals spent, accepted) for acceptance-rate estimation.

    Every Gaussian draw counts as a trial, including those falling outside
    (0, pi); the acceptance rate eta is defined against raw proposals, which
    is what the expected cost 1/eta of one sample measures.
    """
    trials = 0
    while True:
        u1 = gen.random()
        u2 = gen.random()
        trials += 1
        if u1 <= 0.0:
            continue
        z = 0.5 * math.pi + math.sqrt(-2.0 * math.log(u1) / m) * math.cos(2.0 * math.pi * u2)
        if not (0.0 < z < math.pi):
            continue
        u3 = gen.random()
        if u3 <= math.sin(z) ** m * math.exp(0.5 * m * (z - 0.5 * math.pi) ** 2):
            return z, trials, 1


def sample_sin_power_angle(m: int, rng) -> float:
    """Draw from the density sin^m(phi)/I_m on (0, pi).

    m = 1 inverts the closed-form CDF; m >= 2 rejects from the Gaussian
    proposal exp(-(m/2)(x - pi/2)^2) truncated to (0, pi) (out-of-range
    proposals are simply redrawn; the truncated region carries
    erf(sqrt(m/2) pi) ~ 1 of the mass, so the loss is negligible).
    Expected trials per sample are 1/eta(m) < 1.2.
    """
    if m < 1 or int(m) != m:
        raise DomainError(f"sin-power exponent must be an integer >= 1, got {m}")
    gen = _as_generator(rng)
    if m == 1:
        return math.acos(1.0 - 2.0 * gen.random())
    z, _, _ = _sample_sin_power_counted(int(m), gen)
    return z


def sample_direction(n: int, rng):
    """Angles (theta, [phi_1, ..., phi_{n-2}]) of an isotropic direction.

    theta is uniform on [0, 2 pi); phi_i follows sin^{n-1-i}/I_{n-1-i},
    so the last polar angle has exponent one and is drawn in closed form.
    """
    if n < 2 or int(n) != n:
        raise DomainError(f"sample_direction requires integer n >= 2, got {n}")
    gen = _as_generator(rng)
    theta = 2.0 * math.pi * gen.random()
    phis = [sample_sin_power_angle(n - 1 - i, gen) for i in range(1, n - 1)]
    return theta, phis


def _sample_point(ctx: BallContext, gen: np.random.Generator, interior: bool):
    n, s, r = ctx.n, ctx.s, ctx.radius
    if interior:
        rho = sample_interior_radius(r, s, gen.random())
    else:
        while True:
            u = gen.random()
            if u <= 0.0:
                continue
            rho = sample_exit_radius(r, s, u)
            if rho <= EXIT_RADIUS_GUARD * r:
                break
    theta, phis = sample_direction(n, gen)
    if rho == 0.0:
        # interior draw exactly at the center (u = 0)
        return ctx.center.copy()
    return spherical_to_cartesian(ctx.center, rho, theta, phis)


def sample_exit_point(ctx: BallContext, rng) -> np.ndarray:
    """Exit position: radius from the heavy-tailed exit law, isotropic angles."""
    if ctx.n < 2:
        raise DomainError("sample_exit_point requires n >= 2; 1-D walks use +-1 signs")
    return _sample_point(ctx, _as_generator(rng), interior=False)


def sample_interior_point(ctx: BallContext, rng) -> np.ndarray:
    """Interior source position with radial density 2s rho^{2s-1} / r^{2s}."""
    if ctx.n < 2:
        raise DomainError("sample_interior_point requires n >= 2")
    return _sample_point(ctx, _as_generator(rng), interior=True)
