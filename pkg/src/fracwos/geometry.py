"""Domains, containment, inscribed-ball radii, hyperspherical transforms.

Points are plain 1-D numpy float arrays.  A domain is one of three kinds:

* ``ball(center, radius)``
* ``box(lo, hi)`` with ``lo < hi`` componentwise
* ``generic(dim, sdf)`` where ``sdf`` is a signed distance to the boundary,
  positive inside.  The walker trusts the oracle; it only ever needs the
  sign and, for interior points, the largest inscribed ball radius.

If the inscribed radius at an interior point falls below
``GRAZING_REL_TOL * scale(domain)`` the walker treats the point as already
exited and scores the exterior data there; zero-radius balls would stall
the walk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError

GRAZING_REL_TOL = 1e-12

__all__ = ["Domain", "contains", "inscribed_radius", "spherical_to_cartesian",
           "GRAZING_REL_TOL"]


def _as_point(x, dim: int | None = None) -> np.ndarray:
    p = np.asarray(x, dtype=float)
    if p.ndim != 1:
        raise DomainError(f"point must be 1-D, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise DomainError("point coordinates must be finite")
    if dim is not None and p.size != dim:
        raise DomainError(f"point has dimension {p.size}, expected {dim}")
    return p


@dataclass(frozen=True, eq=False)
class Domain:
    """Geometric region with containment test and inscribed-ball radius."""

    kind: str
    dimension: int
    center: np.ndarray | None = None
    radius: float | None = None
    lo: np.ndarray | None = None
    hi: np.ndarray | None = None
    sdf: Callable[[np.ndarray], float] | None = field(default=None, repr=False)

    @staticmethod
    def ball(center, radius: float) -> "Domain":
        c = _as_point(center)
        if not (radius > 0.0 and math.isfinite(radius)):
            raise DomainError(f"ball radius must be positive and finite, got {radius}")
        return Domain(kind="ball", dimension=c.size, center=c, radius=float(radius))

    @staticmethod
    def box(lo, hi) -> "Domain":
        lo = _as_point(lo)
        hi = _as_point(hi, lo.size)
        if not np.all(lo < hi):
            raise DomainError("box requires lo < hi componentwise")
        return Domain(kind="box", dimension=lo.size, lo=lo, hi=hi)

    @staticmethod
    def generic(dimension: int, sdf: Callable[[np.ndarray], float]) -> "Domain":
        if dimension < 1:
            raise DomainError("dimension must be >= 1")
        return Domain(kind="generic", dimension=int(dimension), sdf=sdf)

    @property
    def scale(self) -> float:
        """Characteristic length used for the boundary-grazing threshold."""
        if self.kind == "ball":
            return self.radius
        if self.kind == "box":
            return float(np.max(self.hi - self.lo))
        return 1.0

    @property
    def grazing_tol(self) -> float:
        return GRAZING_REL_TOL * self.scale


def contains(d: Domain, x) -> bool:
    """True iff x lies in the open domain."""
    p = _as_point(x, d.dimension)
    if d.kind == "ball":
        return float(np.linalg.norm(p - d.center)) < d.radius
    if d.kind == "box":
        return bool(np.all(p > d.lo) and np.all(p < d.hi))
    return float(d.sdf(p)) > 0.0


def inscribed_radius(d: Domain, x) -> float:
    """sup{r : B(x, r) is contained in the domain}, for interior x."""
    p = _as_point(x, d.dimension)
    if d.kind == "ball":
        r = d.radius - float(np.linalg.norm(p - d.center))
    elif d.kind == "box":
        r = float(min(np.min(p - d.lo), np.min(d.hi - p)))
    else:
        r = float(d.sdf(p))
    if r <= 0.0:
        raise DomainError("inscribed_radius requires an interior point")
    return r


def spherical_to_cartesian(center, rho: float, theta: float, phis=()) -> np.ndarray:
    """Map hyperspherical coordinates to a Cartesian point.

    Axis convention: the first coordinate carries sin(theta), the second
    cos(theta); each polar angle phi_i multiplies deeper coordinates by
    cos(phi_i) and shallower ones by sin(phi_i), with the last coordinate
    equal to rho*cos(phi_1).  For dimension 2 ``phis`` is empty and the map
    is polar.
    """
    c = _as_point(center)
    n = c.size
    phis = tuple(float(p) for p in phis)
    if n < 2:
        raise DomainError("spherical_to_cartesian requires dimension >= 2")
    if len(phis) != n - 2:
        raise DomainError(f"expected {n - 2} polar angles, got {len(phis)}")
    if not (rho > 0.0):
        raise DomainError(f"rho must be positive, got {rho}")
    if not (0.0 <= theta <= 2.0 * math.pi):
        raise DomainError(f"theta must lie in [0, 2*pi], got {theta}")
    for p in phis:
        if not (0.0 <= p <= math.pi):
            raise DomainError(f"polar angles must lie in [0, pi], got {p}")
    out = np.empty(n, dtype=float)
    sprod = 1.0
    # phis[j] is phi_{j+1}; x_n uses cos(phi_1), x_{n-1} cos(phi_2), ...
    for j, p in enumerate(phis):
        out[n - 1 - j] = sprod * math.cos(p)
        sprod *= math.sin(p)
    out[1] = sprod * math.cos(theta)
    out[0] = sprod * math.sin(theta)
    return c + rho * out
