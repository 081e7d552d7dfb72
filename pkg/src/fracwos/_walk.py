"""Hot walk kernel shared by ball and box domains.

One call advances a contiguous range of walks, each on its own keyed Philox
stream (stream index = global walk index), writing per-walk exit points,
step counts and cap flags into slot-addressed arrays plus a flat buffer of
(weight, location) source entries.  Boundary data and source fields are
applied outside, vectorized over the collected points, so the kernel never
touches Python callables.

Source entry buffers have fixed capacity; when a walk would overflow, its
partial entries are rolled back and the kernel returns that walk index so
the driver can grow the buffers and resume.  Resuming replays the walk
identically from its own stream.

``source_mode``: 0 none, 1 n>=2 weight, 2 interval s < 1/2,
3 interval s = 1/2 (logarithmic), 4 interval s > 1/2 (hypergeometric).
"""

import math

import numpy as np

from ._backend import jit
from .sampling import EXIT_RADIUS_GUARD, _philox_fill, _sin_power_trial, _stream_next
from .specfun import _betainc_inv_raw, _betainc_raw, _hyp2f1_neg_raw

__all__ = ["walk_chunk"]


@jit(inline="always")
def _inscribed(dom_kind, dom_a, dom_b, x, n):
    if dom_kind == 0:
        d2 = 0.0
        for j in range(n):
            t = x[j] - dom_a[j]
            d2 += t * t
        return dom_b[0] - math.sqrt(d2)
    r = 1e308
    for j in range(n):
        lo = x[j] - dom_a[j]
        hi = dom_b[j] - x[j]
        if lo < r:
            r = lo
        if hi < r:
            r = hi
    return r


@jit(inline="always")
def _draw_positive(state, buf, k0, k1):
    u = _stream_next(state, buf, k0, k1)
    while u <= 0.0:
        u = _stream_next(state, buf, k0, k1)
    return u


@jit(inline="always")
def _draw_direction(n, state, buf, k0, k1, out):
    theta = 2.0 * math.pi * _stream_next(state, buf, k0, k1)
    sprod = 1.0
    for j in range(n - 2):
        m = n - 2 - j
        if m == 1:
            ph = math.acos(1.0 - 2.0 * _stream_next(state, buf, k0, k1))
        else:
            ph = -1.0
            while ph < 0.0:
                u1 = _stream_next(state, buf, k0, k1)
                u2 = _stream_next(state, buf, k0, k1)
                if u1 <= 0.0:
                    continue
                z = (0.5 * math.pi
                     + math.sqrt(-2.0 * math.log(u1) / m) * math.cos(2.0 * math.pi * u2))
                if not (0.0 < z < math.pi):
                    continue
                u3 = _stream_next(state, buf, k0, k1)
                ph = _sin_power_trial(m, u1, u2, u3)
        out[n - 1 - j] = sprod * math.cos(ph)
        sprod *= math.sin(ph)
    out[1] = sprod * math.cos(theta)
    out[0] = sprod * math.sin(theta)


@jit()
def walk_chunk(n, s, dom_kind, dom_a, dom_b, grazing_tol, x0,
               master_seed, slot_base, start, stop, max_steps, source_mode,
               b_const, ln_beta_exit, ln_beta_wt, ln_front_f1, ln_front_f2, kappa_1d,
               exit_pts, steps_out, capped_out,
               src_w, src_y, src_walk, cursor):
    """Run walks [start, stop); returns (next_unfinished_walk, cursor)."""
    k0 = np.uint64(master_seed)
    state = np.zeros(2, dtype=np.uint64)
    buf = np.zeros(4, dtype=np.float64)
    x = np.empty(n, dtype=np.float64)
    direction = np.empty(n, dtype=np.float64)
    src_cap = src_w.shape[0]
    inv_two_s = 1.0 / (2.0 * s)

    for i in range(start, stop):
        k1 = np.uint64(i)
        state[0] = np.uint64(0)
        state[1] = np.uint64(4)  # empty buffer, first draw fills block 1
        for j in range(n):
            x[j] = x0[j]
        walk_mark = cursor
        steps = 0
        capped = False
        while True:
            rk = _inscribed(dom_kind, dom_a, dom_b, x, n)
            if rk < grazing_tol:
                # boundary grazing counts as an exit at the current point
                if steps == 0:
                    steps = 1
                break

            if source_mode != 0:
                if cursor >= src_cap:
                    return i, walk_mark  # roll back this walk, caller grows buffers
                if source_mode == 1 or source_mode == 2:
                    u = _stream_next(state, buf, k0, k1)
                    rho_y = rk * u ** inv_two_s
                    w = b_const * rk ** (2.0 * s) * (
                        1.0 - _betainc_raw(u ** (2.0 * inv_two_s), 0.5 * n - s, s,
                                           ln_beta_wt))
                elif source_mode == 3:
                    u = _draw_positive(state, buf, k0, k1)
                    rho_y = rk * u
                    w = b_const * rk * math.log((1.0 + math.sqrt(1.0 - u * u)) / u)
                else:
                    u = _draw_positive(state, buf, k0, k1)
                    rho_y = rk * u
                    aa = rho_y * rho_y
                    bb = rk * rk - aa
                    if bb <= 0.0:
                        w = 0.0
                    else:
                        arg = -bb / aa
                        f1 = _hyp2f1_neg_raw(-0.5, s, s + 1.0, arg, ln_front_f1)
                        f2 = _hyp2f1_neg_raw(0.5, s + 1.0, s + 2.0, arg, ln_front_f2)
                        q = (aa ** -1.5) * bb ** s / (s * (s + 1.0)) * (
                            aa * (s + 1.0) * f1 - bb * s * f2)
                        w = 2.0 * kappa_1d * rk * q
                if n == 1:
                    sign = 1.0 if _stream_next(state, buf, k0, k1) < 0.5 else -1.0
                    src_y[cursor, 0] = x[0] + rho_y * sign
                else:
                    _draw_direction(n, state, buf, k0, k1, direction)
                    for j in range(n):
                        src_y[cursor, j] = x[j] + rho_y * direction[j]
                src_w[cursor] = w
                src_walk[cursor] = i - slot_base
                cursor += 1

            # exit jump, redrawn on astronomically distant tails
            while True:
                u = _draw_positive(state, buf, k0, k1)
                z = _betainc_inv_raw(1.0 - u, s, 1.0 - s, ln_beta_exit)
                rho = rk / math.sqrt(z)
                if rho <= EXIT_RADIUS_GUARD * rk:
                    break
            if n == 1:
                sign = 1.0 if _stream_next(state, buf, k0, k1) < 0.5 else -1.0
                x[0] += rho * sign
            else:
                _draw_direction(n, state, buf, k0, k1, direction)
                for j in range(n):
                    x[j] += rho * direction[j]
            steps += 1
            inside = _inscribed(dom_kind, dom_a, dom_b, x, n) > 0.0
            if not inside:
                break
            if steps >= max_steps:
                capped = True
                break

        slot = i - slot_base
        for j in range(n):
            exit_pts[slot, j] = x[j]
        steps_out[slot] = steps
        capped_out[slot] = 1 if capped else 0

    return stop, cursor
