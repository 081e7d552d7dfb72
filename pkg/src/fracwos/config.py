"""Run configuration: a single JSON document describing one experiment.

Schema (see README for a complete example)::

    {
      "case_id": "ex2-2d",               optional, defaults to the file stem
      "dimension": 2,
      "s": 0.5,
      "domain": {"kind": "ball", "center": [0, 0], "radius": 1.0}
              | {"kind": "box", "lo": [...], "hi": [...]},
      "boundary": {"name": "example2_g", "params": {...}},
      "source":   {"name": "zero"},
      "exact":    {"name": "...", "params": {...}},        optional
      "points": [[0.6, 0.6], ...],
      "samples": 100000,
      "master_seed": 12345,
      "max_steps": 1000000,               optional
      "parallelism": 2,                   optional
      "output": "result.csv"              optional
    }

Validation errors carry the path of the offending field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .geometry import Domain, contains
from .registry import make_field
from .wos import ProblemSpec

__all__ = ["RunConfig", "load_config"]


def _require(doc: dict, key: str, kind, path: str):
    if key not in doc:
        raise ConfigError(f"{path}.{key}", "missing required field")
    val = doc[key]
    if kind is float and isinstance(val, int):
        val = float(val)
    if not isinstance(val, kind):
        raise ConfigError(f"{path}.{key}",
                          f"expected {getattr(kind, '__name__', kind)}, got {type(val).__name__}")
    return val


def _parse_domain(doc, n: int, path: str) -> Domain:
    kind = _require(doc, "kind", str, path)
    try:
        if kind == "ball":
            center = np.asarray(_require(doc, "center", list, path), dtype=float)
            radius = _require(doc, "radius", (int, float), path)
            if center.size != n:
                raise ConfigError(f"{path}.center", f"expected {n} coordinates")
            return Domain.ball(center, float(radius))
        if kind == "box":
            lo = np.asarray(_require(doc, "lo", list, path), dtype=float)
            hi = np.asarray(_require(doc, "hi", list, path), dtype=float)
            if lo.size != n or hi.size != n:
                raise ConfigError(f"{path}.lo", f"expected {n} coordinates")
            return Domain.box(lo, hi)
    except ValueError as exc:
        raise ConfigError(path, str(exc))
    raise ConfigError(f"{path}.kind", f"unknown domain kind {kind!r} (ball or box)")


@dataclass(frozen=True, eq=False)
class RunConfig:
    case_id: str
    n: int
    s: float
    domain: Domain
    boundary_name: str
    boundary_params: dict
    source_name: str
    source_params: dict
    exact_name: str | None
    exact_params: dict
    points: np.ndarray
    samples: int
    master_seed: int
    max_steps: int
    parallelism: int | None
    output: str | None

    def problem(self) -> ProblemSpec:
        g = make_field(self.boundary_name, self.n, self.s, self.boundary_params,
                       "boundary")
        f = make_field(self.source_name, self.n, self.s, self.source_params,
                       "source")
        if self.source_name == "zero":
            f = None
        if self.boundary_name == "zero":
            g = None
        exact = None
        if self.exact_name is not None:
            exact = make_field(self.exact_name, self.n, self.s, self.exact_params,
                               "exact")
        return ProblemSpec(n=self.n, s=self.s, domain=self.domain, f=f, g=g,
                           exact=exact, max_steps=self.max_steps,
                           f_name=self.source_name, g_name=self.boundary_name)


def load_config(source, default_case_id: str = "run") -> RunConfig:
    """Parse a configuration from a path, JSON string, or dict."""
    if isinstance(source, (str, Path)) and Path(source).exists():
        doc = json.loads(Path(source).read_text())
        default_case_id = Path(source).stem
    elif isinstance(source, str):
        doc = json.loads(source)
    elif isinstance(source, dict):
        doc = source
    else:
        raise ConfigError("config", f"cannot read configuration from {type(source)}")
    if not isinstance(doc, dict):
        raise ConfigError("config", "document root must be an object")

    n = _require(doc, "dimension", int, "config")
    if n < 1:
        raise ConfigError("config.dimension", "must be >= 1")
    s = _require(doc, "s", float, "config")
    if not (0.0 < s < 1.0):
        raise ConfigError("config.s", f"must lie in (0, 1), got {s}")
    domain = _parse_domain(_require(doc, "domain", dict, "config"), n, "config.domain")

    def field_ref(key: str, required: bool):
        if key not in doc:
            if required:
                raise ConfigError(f"config.{key}", "missing required field")
            return None, {}
        ref = _require(doc, key, dict, "config")
        name = _require(ref, "name", str, f"config.{key}")
        params = ref.get("params", {})
        if not isinstance(params, dict):
            raise ConfigError(f"config.{key}.params", "must be an object")
        # resolve now so bad names fail at load time
        make_field(name, n, s, params, f"config.{key}")
        return name, params

    boundary_name, boundary_params = field_ref("boundary", required=True)
    source_name, source_params = field_ref("source", required=True)
    exact_name, exact_params = field_ref("exact", required=False)

    pts_raw = _require(doc, "points", list, "config")
    if not pts_raw:
        raise ConfigError("config.points", "at least one evaluation point required")
    try:
        points = np.asarray(pts_raw, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError("config.points", "points must be arrays of numbers")
    if points.ndim != 2 or points.shape[1] != n:
        raise ConfigError("config.points",
                          f"expected shape (m, {n}), got {points.shape}")
    for idx, p in enumerate(points):
        if not contains(domain, p):
            raise ConfigError(f"config.points[{idx}]", "point lies outside the domain")

    samples = _require(doc, "samples", int, "config")
    if samples < 2:
        raise ConfigError("config.samples", "must be >= 2")
    master_seed = _require(doc, "master_seed", int, "config")
    max_steps = doc.get("max_steps", 1_000_000)
    if not isinstance(max_steps, int) or max_steps < 1:
        raise ConfigError("config.max_steps", "must be a positive integer")
    parallelism = doc.get("parallelism")
    if parallelism is not None and (not isinstance(parallelism, int) or parallelism < 1):
        raise ConfigError("config.parallelism", "must be a positive integer")
    output = doc.get("output")
    if output is not None and not isinstance(output, str):
        raise ConfigError("config.output", "must be a string path")
    case_id = doc.get("case_id", default_case_id)
    if not isinstance(case_id, str):
        raise ConfigError("config.case_id", "must be a string")

    return RunConfig(case_id=case_id, n=n, s=s, domain=domain,
                     boundary_name=boundary_name, boundary_params=boundary_params,
                     source_name=source_name, source_params=source_params,
                     exact_name=exact_name, exact_params=exact_params,
                     points=points, samples=samples, master_seed=master_seed,
                     max_steps=max_steps, parallelism=parallelism, output=output)
