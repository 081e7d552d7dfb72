import numpy as np
import pytest

import fracwos


@pytest.fixture(scope="session")
def warm_kernels():
    """Compile the walk kernel once so timed tests measure math, not jitting."""
    p = fracwos.ProblemSpec(n=2, s=0.5, domain=fracwos.Domain.ball([0.0, 0.0], 1.0),
                            f=lambda pts: np.ones(pts.shape[:-1]),
                            g=lambda pts: np.ones(pts.shape[:-1]))
    fracwos.estimate(p, [0.1, 0.1], 64, 1)
    p1 = fracwos.ProblemSpec(n=1, s=0.75, domain=fracwos.Domain.ball([0.0], 1.0),
                             f=lambda pts: np.ones(pts.shape[:-1]))
    fracwos.estimate(p1, [0.1], 16, 1)
    pb = fracwos.ProblemSpec(n=3, s=0.5, domain=fracwos.Domain.box([0] * 3, [1] * 3),
                             g=lambda pts: np.ones(pts.shape[:-1]))
    fracwos.estimate(pb, [0.5, 0.5, 0.5], 16, 1)
    return True


def ks_statistic(samples: np.ndarray, cdf) -> float:
    """One-sample Kolmogorov-Smirnov statistic against a callable CDF."""
    xs = np.sort(np.asarray(samples, dtype=float))
    n = xs.size
    f = np.asarray([cdf(v) for v in xs])
    upper = np.max(np.arange(1, n + 1) / n - f)
    lower = np.max(f - np.arange(0, n) / n)
    return max(upper, lower)


def ks_critical(n: int, alpha: float = 0.01) -> float:
    # asymptotic critical value c(alpha)/sqrt(n), c(0.01) = 1.6276
    return np.sqrt(-0.5 * np.log(alpha / 2.0)) / np.sqrt(n)
