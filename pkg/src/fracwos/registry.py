"""Named scalar fields used by configurations and the benchmark problems.

Every factory returns a vectorized callable mapping arrays of shape
(..., n) to shape (...).  Exterior data must remain finite for the huge
exit radii the heavy-tailed jump law occasionally produces, so all
registered fields decay (or are constant) at infinity.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConfigError, DomainError
from .specfun import log_gamma

__all__ = ["make_field", "registered_names"]


def _sqdist(pts: np.ndarray, ref: np.ndarray) -> np.ndarray:
    return np.sum((pts - ref) ** 2, axis=-1)


def _zero(n, s, params):
    return lambda pts: np.zeros(np.asarray(pts).shape[:-1])


def _constant(n, s, params):
    c = float(params["c"])
    return lambda pts: np.full(np.asarray(pts).shape[:-1], c)


def _gauss_bump(n, s, params):
    ref = np.asarray(params["x_prime"], dtype=float)
    if ref.shape != (n,):
        raise DomainError(f"x_prime must have dimension {n}")

    def g(pts):
        return np.exp(-_sqdist(np.asarray(pts, dtype=float), ref))

    return g


def _fundamental_g(n, s, params):
    # free-space kernel centered at an exterior point; its own trace is the
    # exact solution of the homogeneous problem
    ref = np.asarray(params["x_prime"], dtype=float)
    if ref.shape != (n,):
        raise DomainError(f"x_prime must have dimension {n}")
    if n == 1:
        def g(pts):
            d = np.sqrt(_sqdist(np.asarray(pts, dtype=float), ref))
            return np.log(d) / math.pi
        return g
    a_ns = math.exp(log_gamma(0.5 * n - s) - 2.0 * s * math.log(2.0)
                    - 0.5 * n * math.log(math.pi) - log_gamma(s))

    def g(pts):
        d2 = _sqdist(np.asarray(pts, dtype=float), ref)
        return a_ns * d2 ** (0.5 * (2.0 * s - n))

    return g


def _polynomial_source(n, s, params):
    if n == 1:
        c = math.exp(2.0 * s * math.log(2.0) + log_gamma(s + 1.0)
                     + log_gamma(s + 1.5) - log_gamma(1.5))
        return lambda pts: c * np.asarray(pts, dtype=float)[..., 0]
    c = math.exp(2.0 * s * math.log(2.0) + log_gamma(2.0 + s)
                 + log_gamma(0.5 * n + s) - log_gamma(0.5 * n))
    k = 1.0 + 2.0 * s / n

    def f(pts):
        return c * (1.0 - k * _sqdist(np.asarray(pts, dtype=float), 0.0))

    return f


def _polynomial_exact(n, s, params):
    if n == 1:
        def u(pts):
            x = np.asarray(pts, dtype=float)[..., 0]
            return x * np.maximum(1.0 - x * x, 0.0) ** s
        return u

    def u(pts):
        return np.maximum(1.0 - _sqdist(np.asarray(pts, dtype=float), 0.0),
                          0.0) ** (1.0 + s)

    return u


def _unit_source(n, s, params):
    return lambda pts: np.ones(np.asarray(pts).shape[:-1])


_REGISTRY = {
    "zero": _zero,
    "constant": _constant,
    "example1_g": _gauss_bump,
    "example2_g": _fundamental_g,
    "example2_exact": _fundamental_g,
    "example3_f": _polynomial_source,
    "example3_exact": _polynomial_exact,
    "example4_f": _unit_source,
}


def registered_names() -> tuple[str, ...]:
    return tuple(sorted(_REGISTRY))


def make_field(name: str, n: int, s: float, params: dict | None = None,
               config_path: str = "field"):
    """Resolve a named field for dimension n and order s."""
    params = dict(params or {})
    try:
        factory = _REGISTRY[name]
    except KeyError:
        raise ConfigError(config_path,
                          f"unknown field {name!r}; known: {', '.join(registered_names())}")
    try:
        return factory(n, s, params)
    except KeyError as exc:
        raise ConfigError(config_path, f"field {name!r} missing parameter {exc}")
