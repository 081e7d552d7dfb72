"""Backend benchmark: compiled kernels versus the pure-Python walker.

Runs the same estimation workload in two subprocesses, one per backend
(``FRACWOS_BACKEND=numba`` / ``numpy``), and reports wall time plus the
relative difference of the estimates.  Subprocesses keep the backend choice
an import-time constant, which is how the library runs in production.

    python -m fracwos.benchmark [--samples 20000] [--skip-numpy]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

_WORKLOADS = [
    dict(name="boundary-2d", n=2, s=0.5, boundary="example2_g",
         x_prime=[2.0 ** 0.5, 2.0 ** 0.5], source=None, point=[0.6, 0.6]),
    dict(name="source-3d", n=3, s=0.5, boundary=None, source="example3_f",
         point=[0.5, 0.5, 0.5]),
]

_CHILD_CODE = """
import json, sys, time
import numpy as np
from fracwos import Domain, ProblemSpec, estimate, backend_name
from fracwos.registry import make_field

spec = json.loads(sys.argv[1])
n, s = spec["n"], spec["s"]
params = {"x_prime": spec["x_prime"]} if spec.get("x_prime") else {}
g = make_field(spec["boundary"], n, s, params) if spec.get("boundary") else None
f = make_field(spec["source"], n, s) if spec.get("source") else None
p = ProblemSpec(n=n, s=s, domain=Domain.ball(np.zeros(n), 1.0), f=f, g=g)
estimate(p, np.asarray(spec["point"]), 64, 7)       # warm up / compile
t0 = time.perf_counter()
summ = estimate(p, np.asarray(spec["point"]), spec["samples"], spec["seed"])
dt = time.perf_counter() - t0
print(json.dumps({"backend": backend_name(), "estimate": summ.estimate,
                  "std_error": summ.std_error, "seconds": dt}))
"""


def _run_child(workload: dict, backend: str) -> dict:
    env = dict(os.environ, FRACWOS_BACKEND=backend)
    out = subprocess.run(
        [sys.executable, "-c", _CHILD_CODE, json.dumps(workload)],
        env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=20000)
    ap.add_argument("--numpy-samples", type=int, default=None,
                    help="Smaller count for the interpreter backend "
                         "(defaults to samples/10).")
    ap.add_argument("--seed", type=int, default=20240817)
    ap.add_argument("--skip-numpy", action="store_true")
    args = ap.parse_args(argv)
    np_samples = args.numpy_samples or max(args.samples // 10, 200)

    t_total = time.perf_counter()
    for load in _WORKLOADS:
        spec = dict(load, samples=args.samples, seed=args.seed)
        fast = _run_child(spec, "numba")
        print(f"{load['name']}: numba   N={args.samples:>7} "
              f"estimate={fast['estimate']:.8g} +- {fast['std_error']:.2g} "
              f"in {fast['seconds']:.3f}s "
              f"({args.samples / fast['seconds']:.0f} walks/s)")
        if args.skip_numpy:
            continue
        spec_np = dict(load, samples=np_samples, seed=args.seed)
        slow = _run_child(spec_np, "numpy")
        ref = _run_child(spec_np, "numba")
        rel = abs(slow["estimate"] - ref["estimate"]) / max(abs(ref["estimate"]), 1e-300)
        print(f"{load['name']}: numpy   N={np_samples:>7} "
              f"estimate={slow['estimate']:.8g} in {slow['seconds']:.3f}s "
              f"({np_samples / slow['seconds']:.0f} walks/s); "
              f"same-seed backend deviation {rel:.2e}")
        speedup = (slow["seconds"] / np_samples) / (fast["seconds"] / args.samples)
        print(f"{load['name']}: per-walk speedup numba/numpy = {speedup:.0f}x")
    print(f"total {time.perf_counter() - t_total:.1f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
