"""Deterministic tensor-grid quadrature of the ball representation formula.

``scheme1_homogeneous`` evaluates the boundary integral for the homogeneous
problem on a ball (n = 2 or 3).  The radial variable is normalized to [0, 1]
by inverting through the sphere; the singular radial weights rho^{2s-1}
(for s < 1/2, origin side) and (1-rho)^{-s} (boundary side) are integrated
exactly against piecewise-linear interpolation of the remaining smooth
factor, the angular directions use the trapezoid rule.  For s < 1/2 the
radial interval splits at 1/2 and each half is handled with its own exact
weights; for s >= 1/2 only the boundary weight is singular and a single
pass suffices.  Observed convergence is second order in every grid step for
twice-differentiable boundary data.

``scheme1_source_2d`` evaluates the interior Green-potential for the source
problem in the plane through the auxiliary integral

    u(x) = kappa r^{2-2s} (r^2-|x|^2)^s *
           int_0^1 t^{s-1} int_B (r^2-|y|^2)^s f(y) /
           [(r^2-|x|^2)(r^2-|y|^2) t + r^2 |x-y|^2] dy dt

with the t-weight t^{s-1} integrated exactly per cell (weights
(t_k^s - t_{k-1}^s)/s) and midpoint products over a polar decomposition of
the ball minus a square of half-side h_excl centered at x: the wedge facing
x is split into the segments before and after the square, and two corner
wedges patch the sliver between the square top/bottom faces and the
excluded rays.  Evaluation points never enter the square, which keeps the
integrand bounded; the smallest denominators scale like h_excl^2 and set
the observed order h^{min(2s,1)}-ish.

All accumulations run through exact (fsum) summation: the nested sums reach
~1e7 terms at the finest grids and would lose digits otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, UnsupportedParameterError
from .kernels import constants

__all__ = ["GridSpec", "scheme1_homogeneous", "scheme1_source_2d",
           "convergence_study", "ConvergenceRow", "adaptive_simpson"]

_RHO_FLOOR = 1e-150  # radius r/rho at the rho = 0 node stays a finite float


def _check_recip(h: float, name: str) -> int:
    if not (0.0 < h <= 0.5):
        raise DomainError(f"{name} must lie in (0, 1/2], got {h}")
    n = round(1.0 / h)
    if n < 2 or abs(n * h - 1.0) > 1e-9:
        raise DomainError(f"{name} must equal 1/N for an integer N >= 2, got {h}")
    return n


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid steps, each the reciprocal of an integer cell count."""

    h_rho: float
    h_theta: float
    h_phi: tuple[float, ...] = ()
    h_t: float | None = None

    def __post_init__(self):
        _check_recip(self.h_rho, "h_rho")
        _check_recip(self.h_theta, "h_theta")
        for i, h in enumerate(self.h_phi):
            _check_recip(h, f"h_phi[{i}]")
        if self.h_t is not None:
            _check_recip(self.h_t, "h_t")

    @staticmethod
    def uniform(n_cells: int, n_phi: int = 0, with_t: bool = False) -> "GridSpec":
        h = 1.0 / int(n_cells)
        return GridSpec(h_rho=h, h_theta=h, h_phi=(h,) * n_phi,
                        h_t=h if with_t else None)


# --------------------------------------------------------------------------
# exact singular radial weights

def _weights_origin(s: float, n: int) -> np.ndarray:
    """Per-node weights integrating (rho/2)^{2s-1} against linear interpolation."""
    i = np.arange(1, n + 1)
    r0 = (i - 1.0) / n
    r1 = i / n
    c = 2.0 ** (1.0 - 2.0 * s)
    a1 = c * (r1 * (r1 ** (2 * s) - r0 ** (2 * s)) / (2 * s)
              - (r1 ** (2 * s + 1) - r0 ** (2 * s + 1)) / (2 * s + 1))
    a2 = c * ((r1 ** (2 * s + 1) - r0 ** (2 * s + 1)) / (2 * s + 1)
              - r0 * (r1 ** (2 * s) - r0 ** (2 * s)) / (2 * s))
    w = np.zeros(n + 1)
    w[:-1] += a1
    w[1:] += a2
    return w * n  # divide by h_rho


def _weights_boundary(s: float, n: int) -> np.ndarray:
    """Per-node weights integrating ((1-rho)/2)^{-s} against linear interpolation."""
    i = np.arange(1, n + 1)
    w0 = 1.0 - (i - 1.0) / n
    w1 = 1.0 - i / n
    c = 2.0 ** s
    b1 = c * ((w0 ** (2 - s) - w1 ** (2 - s)) / (2 - s)
              - w1 * (w0 ** (1 - s) - w1 ** (1 - s)) / (1 - s))
    b2 = c * (w0 * (w0 ** (1 - s) - w1 ** (1 - s)) / (1 - s)
              - (w0 ** (2 - s) - w1 ** (2 - s)) / (2 - s))
    w = np.zeros(n + 1)
    w[:-1] += b1
    w[1:] += b2
    return w * n


def _trapezoid(n: int) -> np.ndarray:
    w = np.ones(n + 1)
    w[0] = w[-1] = 0.5
    return w


def _householder_to_last_axis(x: np.ndarray) -> np.ndarray:
    """Orthogonal symmetric H with H e_n = x/|x| (identity for x = 0)."""
    n = x.size
    nx = float(np.linalg.norm(x))
    eye = np.eye(n)
    if nx == 0.0:
        return eye
    u = x / nx
    v = u - eye[-1]
    nv = float(np.linalg.norm(v))
    if nv < 1e-14:
        return eye
    v /= nv
    return eye - 2.0 * np.outer(v, v)


def scheme1_homogeneous(n: int, s: float, r: float, g: Callable, x,
                        grid: GridSpec) -> float:
    """Boundary-data quadrature for the homogeneous ball problem, n in {2, 3}."""
    if n not in (2, 3):
        raise UnsupportedParameterError(
            f"scheme1_homogeneous covers n = 2 and 3, got n = {n}")
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise DomainError(f"x must have shape ({n},), got {x.shape}")
    xn = float(np.linalg.norm(x))
    if xn >= r:
        raise DomainError("x must lie inside the ball")
    if len(grid.h_phi) != n - 2:
        raise DomainError(f"grid needs {n - 2} phi steps for n = {n}")
    s = float(s)
    cst = constants(n, s)
    n_rho = round(1.0 / grid.h_rho)
    n_th = round(1.0 / grid.h_theta)
    rho = np.arange(n_rho + 1) / n_rho
    theta = 2.0 * math.pi * np.arange(n_th + 1) / n_th
    t_th = _trapezoid(n_th) * grid.h_theta
    house = _householder_to_last_axis(x)
    cos_th = np.cos(theta)
    sin_th = np.sin(theta)

    if n == 2:
        # x sits on the cosine axis; angular weight vector only
        ang_w = t_th
        cos_axis = cos_th

        def omega_smooth(rp: float) -> np.ndarray:
            radius = r / max(rp, _RHO_FLOOR)
            pts = np.stack([radius * sin_th, radius * cos_th], axis=-1)
            den = r * r + rp * rp * xn * xn - 2.0 * r * rp * xn * cos_axis
            return _eval_rotated(g, pts, house) / den
    else:
        n_ph = round(1.0 / grid.h_phi[0])
        phi = math.pi * np.arange(n_ph + 1) / n_ph
        t_ph = _trapezoid(n_ph) * grid.h_phi[0]
        sin_ph = np.sin(phi)
        cos_ph = np.cos(phi)
        ang_w = np.outer(t_ph, t_th)
        d1 = np.outer(sin_ph, sin_th)
        d2 = np.outer(sin_ph, cos_th)
        d3 = np.outer(cos_ph, np.ones(n_th + 1))

        def omega_smooth(rp: float) -> np.ndarray:
            radius = r / max(rp, _RHO_FLOOR)
            pts = np.stack([radius * d1, radius * d2, radius * d3], axis=-1)
            den = (r * r + rp * rp * xn * xn
                   - 2.0 * r * rp * xn * cos_ph[:, None]) ** 1.5
            return _eval_rotated(g, pts, house) * sin_ph[:, None] / den

    front = cst.alpha * (r * r - xn * xn) ** s * r ** (n - 2.0 * s)
    jac = math.pi ** (n - 1)
    parts = []
    if s < 0.5:
        w_a = _weights_origin(s, n_rho)
        w_b = _weights_boundary(s, n_rho)
        for i in range(n_rho + 1):
            rp = 0.5 * rho[i]
            om1 = (1.0 - rp * rp) ** (-s) * omega_smooth(rp)
            parts.append(w_a[i] * float(np.sum(ang_w * om1)))
            rp2 = 0.5 * (rho[i] + 1.0)
            om2 = ((3.0 + rho[i]) / 2.0) ** (-s) * rp2 ** (2 * s - 1.0) * omega_smooth(rp2)
            parts.append(w_b[i] * float(np.sum(ang_w * om2)))
        return front * jac * math.fsum(parts)
    w_b = _weights_boundary(s, n_rho)
    for i in range(n_rho + 1):
        rp = rho[i]
        rad_pow = 1.0 if (rp == 0.0 and 2 * s == 1.0) else rp ** (2 * s - 1.0)
        om2 = (1.0 + rp) ** (-s) * rad_pow * omega_smooth(rp)
        parts.append(w_b[i] * float(np.sum(ang_w * om2)))
    return front * jac * 2.0 ** (1.0 - s) * math.fsum(parts)


def _eval_rotated(g, pts: np.ndarray, house: np.ndarray) -> np.ndarray:
    vals = np.asarray(g(pts @ house.T), dtype=float)
    if vals.shape != pts.shape[:-1]:
        raise DomainError(
            f"boundary data returned shape {vals.shape} for points {pts.shape}")
    return vals


# --------------------------------------------------------------------------
# source-term scheme, n = 2

def scheme1_source_2d(s: float, r: float, f: Callable, x, grid: GridSpec,
                      h_excl: float | None = None) -> float:
    """Interior source quadrature on the disk of radius r (zero exterior data)."""
    x = np.asarray(x, dtype=float)
    if x.shape != (2,):
        raise DomainError(f"x must be a planar point, got shape {x.shape}")
    xn = float(np.hypot(x[0], x[1]))
    if xn >= r:
        raise DomainError("x must lie inside the disk")
    if grid.h_t is None:
        raise DomainError("scheme1_source_2d needs a t-grid (GridSpec.h_t)")
    s = float(s)
    n_r = round(1.0 / grid.h_rho)
    n_th = round(1.0 / grid.h_theta)
    n_t = round(1.0 / grid.h_t)
    h = grid.h_rho if h_excl is None else float(h_excl)
    if xn > 0.0 and not (0.0 < h < r - xn):
        raise DomainError(f"h_excl must lie in (0, r - |x|), got {h}")
    cst = constants(2, s)
    k = np.arange(1, n_t + 1)
    c_t = ((k / n_t) ** s - ((k - 1.0) / n_t) ** s) / s
    t_mid = (k - 0.5) / n_t
    mid_r = (np.arange(1, n_r + 1) - 0.5) / n_r
    mid_th = (np.arange(1, n_th + 1) - 0.5) / n_th
    if xn > 0.0:
        ang = math.atan2(x[1], x[0])
        rot = np.array([[math.cos(ang), -math.sin(ang)],
                        [math.sin(ang), math.cos(ang)]])
    else:
        rot = np.eye(2)
    pref = cst.kappa * r ** (2.0 - 2.0 * s) * (r * r - xn * xn) ** s
    parts = []

    def accum(pts: np.ndarray, area_w: np.ndarray) -> None:
        # pts in the frame with x on the positive first axis
        y2 = pts[:, 0] ** 2 + pts[:, 1] ** 2
        d2 = (pts[:, 0] - xn) ** 2 + pts[:, 1] ** 2
        fy = np.asarray(f(pts @ rot.T), dtype=float)
        a_lin = (r * r - xn * xn) * (r * r - y2)
        b_lin = r * r * d2
        t_sum = (1.0 / (a_lin[:, None] * t_mid[None, :] + b_lin[:, None])) @ c_t
        parts.append(float(np.dot(area_w * (r * r - y2) ** s * fy, t_sum)))

    if xn == 0.0:
        radial = (r - h) * mid_r
        for th in 2.0 * math.pi * mid_th:
            pts = np.stack([radial * math.cos(th), radial * math.sin(th)], axis=-1)
            accum(pts, radial * ((r - h) / n_r) * (2.0 * math.pi / n_th))
        return pref * math.fsum(parts)

    phi = math.atan(h / (xn - h))
    # facing away from x: full radius
    radial = r * mid_r
    for th in phi + (2.0 * math.pi - 2.0 * phi) * mid_th:
        pts = np.stack([radial * math.cos(th), radial * math.sin(th)], axis=-1)
        accum(pts, radial * (r / n_r) * ((2.0 * math.pi - 2.0 * phi) / n_th))
    # wedge through the square: segment before and segment behind
    for th in -phi + 2.0 * phi * mid_th:
        c = math.cos(th)
        sn = math.sin(th)
        r_in = (xn - h) / c
        seg = r_in * mid_r
        accum(np.stack([seg * c, seg * sn], axis=-1),
              seg * (r_in / n_r) * (2.0 * phi / n_th))
        r_out = (xn + h) / c
        if r_out < r:
            seg = r_out + (r - r_out) * mid_r
            accum(np.stack([seg * c, seg * sn], axis=-1),
                  seg * ((r - r_out) / n_r) * (2.0 * phi / n_th))
    # corner wedges patching the slivers above and below the square
    for sgn in (1.0, -1.0):
        corner = np.array([xn - h, sgn * h])
        for th in sgn * phi * mid_th:
            c = math.cos(th)
            rmax = 2.0 * h / c
            seg = rmax * mid_r
            pts = np.stack([corner[0] + seg * c, corner[1] + seg * math.sin(th)],
                           axis=-1)
            accum(pts, seg * (rmax / n_r) * (phi / n_th))
    return pref * math.fsum(parts)


# --------------------------------------------------------------------------
# grid-halving study

@dataclass(frozen=True)
class ConvergenceRow:
    h: float
    value: float
    err: float | None  # |u_{2h} - u_h|
    rate: float | None  # log2(E(2h)/E(h))


def convergence_study(evaluate: Callable[[int], float], halvings: int,
                      n_start: int = 32) -> list[ConvergenceRow]:
    """Evaluate on grids n_start, 2 n_start, ... and report halving errors."""
    if halvings < 2:
        raise DomainError(f"halvings must be >= 2, got {halvings}")
    rows: list[ConvergenceRow] = []
    prev_val = None
    prev_err = None
    for k in range(halvings + 1):
        n = n_start * 2 ** k
        val = float(evaluate(n))
        err = None if prev_val is None else abs(val - prev_val)
        rate = None
        if err is not None and prev_err is not None and err > 0.0:
            rate = math.log2(prev_err / err)
        rows.append(ConvergenceRow(h=1.0 / n, value=val, err=err, rate=rate))
        prev_val, prev_err = val, err
    return rows


# --------------------------------------------------------------------------
# small adaptive quadrature used by self-check commands and identity tests

def adaptive_simpson(fn: Callable[[float], float], a: float, b: float,
                     tol: float = 1e-12, max_depth: int = 48) -> float:
    """Adaptive Simpson integration of a scalar function on [a, b]."""

    def simpson(lo, hi, flo, fmid, fhi):
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    def recurse(lo, hi, flo, fmid, fhi, whole, eps, depth):
        mid = 0.5 * (lo + hi)
        lmid = 0.5 * (lo + mid)
        rmid = 0.5 * (mid + hi)
        flm = fn(lmid)
        frm = fn(rmid)
        left = simpson(lo, mid, flo, flm, fmid)
        right = simpson(mid, hi, fmid, frm, fhi)
        if depth >= max_depth or abs(left + right - whole) <= 15.0 * eps:
            return left + right + (left + right - whole) / 15.0
        return (recurse(lo, mid, flo, flm, fmid, left, 0.5 * eps, depth + 1)
                + recurse(mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth + 1))

    fa, fb = fn(a), fn(b)
    fm = fn(0.5 * (a + b))
    whole = simpson(a, b, fa, fm, fb)
    return recurse(a, b, fa, fm, fb, whole, tol, 0)

