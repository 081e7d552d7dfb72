"""Backend equivalence: compiled kernels versus the pure-Python walker."""

import json
import os
import subprocess
import sys

import numpy as np
import pytest

_CHILD = """
import json
import numpy as np
import fracwos as fw
from fracwos.registry import make_field

g = make_field("example2_g", 2, 0.5, {"x_prime": [2 ** 0.5, 2 ** 0.5]})
f = make_field("example3_f", 3, 0.5)
p1 = fw.ProblemSpec(n=2, s=0.5, domain=fw.Domain.ball([0, 0], 1.0), g=g)
p2 = fw.ProblemSpec(n=3, s=0.5, domain=fw.Domain.ball([0, 0, 0], 1.0), f=f)
p3 = fw.ProblemSpec(n=1, s=0.75, domain=fw.Domain.ball([0.0], 1.0),
                    f=make_field("example3_f", 1, 0.75))
a = fw.estimate(p1, [0.6, 0.6], 1500, 42)
b = fw.estimate(p2, [0.5, 0.5, 0.5], 1500, 42)
c = fw.estimate(p3, [0.5], 1500, 42)
print(json.dumps({"backend": fw.backend_name(),
                  "vals": [a.estimate, b.estimate, c.estimate],
                  "steps": [a.avg_steps, b.avg_steps, c.avg_steps]}))
"""


def _run(backend: str) -> dict:
    env = dict(os.environ, FRACWOS_BACKEND=backend)
    out = subprocess.run([sys.executable, "-c", _CHILD], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def test_backends_agree_on_identical_streams():
    fast = _run("numba")
    slow = _run("numpy")
    if fast["backend"] != "numba":
        pytest.skip("numba unavailable; nothing to compare")
    assert slow["backend"] == "numpy"
    # identical streams and algorithms; only libm ulp differences remain
    np.testing.assert_allclose(fast["vals"], slow["vals"], rtol=1e-12)
    assert fast["steps"] == slow["steps"]
