import math
import time

import numpy as np
import pytest
from scipy.integrate import quad

from fracwos.errors import DomainError, UnsupportedParameterError
from fracwos.quadrature import (GridSpec, adaptive_simpson, convergence_study,
                                scheme1_homogeneous, scheme1_source_2d)
from fracwos.quadrature import _weights_boundary, _weights_origin
from fracwos.registry import make_field


def ones(pts):
    return np.ones(np.asarray(pts).shape[:-1])


class TestGridSpec:
    def test_uniform(self):
        g = GridSpec.uniform(64, n_phi=1, with_t=True)
        assert g.h_rho == g.h_theta == g.h_phi[0] == g.h_t == 1.0 / 64

    def test_reciprocal_integer_required(self):
        with pytest.raises(DomainError):
            GridSpec(h_rho=0.3, h_theta=0.25)
        with pytest.raises(DomainError):
            GridSpec(h_rho=1.0, h_theta=0.25)


class TestSingularWeights:
    def test_origin_weights_integrate_weight_exactly(self):
        # node weights applied to any piecewise-linear function integrate it
        # exactly against (rho/2)^{2s-1}; check the constant and the identity
        rng = np.random.default_rng(1)
        for _ in range(10):
            s = float(rng.uniform(0.05, 0.95))
            n = int(rng.integers(2, 40))
            w = _weights_origin(s, n)
            ref, _ = quad(lambda r: 1.0, 0.0, 1.0, weight="alg",
                          wvar=(2 * s - 1.0, 0.0))
            assert np.sum(w) == pytest.approx(2.0 ** (1 - 2 * s) * ref, rel=1e-12)
            nodes = np.arange(n + 1) / n
            ref_lin, _ = quad(lambda r: r, 0.0, 1.0, weight="alg",
                              wvar=(2 * s - 1.0, 0.0))
            assert np.dot(w, nodes) == pytest.approx(
                2.0 ** (1 - 2 * s) * ref_lin, rel=1e-12)

    def test_boundary_weights_integrate_weight_exactly(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            s = float(rng.uniform(0.05, 0.95))
            n = int(rng.integers(2, 40))
            w = _weights_boundary(s, n)
            ref, _ = quad(lambda r: 1.0, 0.0, 1.0, weight="alg", wvar=(0.0, -s))
            assert np.sum(w) == pytest.approx(2.0 ** s * ref, rel=1e-12)
            nodes = np.arange(n + 1) / n
            ref_lin, _ = quad(lambda r: r, 0.0, 1.0, weight="alg", wvar=(0.0, -s))
            assert np.dot(w, nodes) == pytest.approx(2.0 ** s * ref_lin,
                                                     rel=1e-12)


class TestHomogeneousScheme:
    def test_constant_data_gives_constant_solution(self):
        # u == 1 solves the problem with data 1; both order branches
        for n in (2, 3):
            x = np.full(n, 0.3)
            for s in (0.25, 0.5, 0.75):
                grid = GridSpec.uniform(128 if n == 2 else 48, n_phi=n - 2)
                val = scheme1_homogeneous(n, s, 1.0, ones, x, grid)
                assert val == pytest.approx(1.0, abs=5e-3)

    def test_constant_data_second_order(self):
        x = np.array([0.5, 0.1])
        errs = []
        for n_cells in (32, 64, 128):
            grid = GridSpec.uniform(n_cells)
            errs.append(abs(scheme1_homogeneous(2, 0.25, 1.0, ones, x, grid) - 1.0))
        assert math.log2(errs[0] / errs[1]) == pytest.approx(2.0, abs=0.3)
        assert math.log2(errs[1] / errs[2]) == pytest.approx(2.0, abs=0.3)

    def test_reference_values_2d(self):
        # gaussian data centered at (3, 0), evaluated at (0.6, 0.6); coarse
        # grids admit ~4e-6 discretization-detail differences, the fine-grid
        # agreement is pinned by the acceptance suite
        x = np.array([0.6, 0.6])
        refs = {0.25: 0.0234021, 0.5: 0.0187558, 0.75: 0.0099082}
        for s, ref in refs.items():
            g_s = make_field("example1_g", 2, s, {"x_prime": [3.0, 0.0]})
            val = scheme1_homogeneous(2, s, 1.0, g_s, x, GridSpec.uniform(64))
            assert val == pytest.approx(ref, abs=1e-5)

    def test_reference_values_3d(self):
        g = make_field("example1_g", 3, 0.5, {"x_prime": [3.0, 0.0, 0.0]})
        x = np.array([0.5, 0.5, 0.5])
        val = scheme1_homogeneous(3, 0.5, 1.0, g, x, GridSpec.uniform(32, n_phi=1))
        assert val == pytest.approx(0.0066594, abs=2e-6)

    def test_rotation_invariance(self):
        # data symmetric under the rotation moving x: same value at both points
        s = 0.4
        g = lambda pts: np.exp(-np.sum(pts * pts, axis=-1) / 9.0)
        grid = GridSpec.uniform(64)
        a = scheme1_homogeneous(2, s, 1.0, g, np.array([0.6, 0.0]), grid)
        b = scheme1_homogeneous(2, s, 1.0, g, np.array([0.0, -0.6]), grid)
        assert a == pytest.approx(b, rel=1e-12)

    def test_center_evaluation(self):
        g = make_field("example1_g", 2, 0.3, {"x_prime": [2.0, 0.0]})
        val = scheme1_homogeneous(2, 0.3, 1.0, g, np.zeros(2), GridSpec.uniform(64))
        assert 0.0 < val < 1.0

    def test_validation(self):
        with pytest.raises(UnsupportedParameterError):
            scheme1_homogeneous(4, 0.5, 1.0, ones, np.zeros(4),
                                GridSpec.uniform(8, n_phi=2))
        with pytest.raises(DomainError):
            scheme1_homogeneous(2, 0.5, 1.0, ones, np.array([1.5, 0.0]),
                                GridSpec.uniform(8))
        with pytest.raises(DomainError):
            scheme1_homogeneous(3, 0.5, 1.0, ones, np.zeros(3),
                                GridSpec.uniform(8))  # missing phi step

    def test_cost_scaling(self):
        # doubling the grid multiplies work by ~2^n
        g = make_field("example1_g", 2, 0.5, {"x_prime": [3.0, 0.0]})
        x = np.array([0.6, 0.6])

        def timed(n_cells):
            best = math.inf
            for _ in range(3):
                t0 = time.perf_counter()
                scheme1_homogeneous(2, 0.5, 1.0, g, x, GridSpec.uniform(n_cells))
                best = min(best, time.perf_counter() - t0)
            return best

        timed(256)  # warm caches
        ratio = timed(512) / timed(256)
        assert 2.0 < ratio < 8.0


class TestSourceScheme:
    def test_converges_to_exact(self):
        # polynomial source with known solution (1 - |x|^2)^{1+s}
        x = np.array([0.6, 0.6])
        for s in (0.5, 0.75):
            f = make_field("example3_f", 2, s)
            exact = (1.0 - 0.72) ** (1.0 + s)
            errs = []
            for n_cells in (32, 64, 128):
                grid = GridSpec.uniform(n_cells, with_t=True)
                errs.append(abs(scheme1_source_2d(s, 1.0, f, x, grid) - exact))
            assert errs[2] < errs[1] < errs[0]
            assert errs[2] < 0.03 * exact

    def test_observed_rate_band_high_order(self):
        x = np.array([0.6, 0.6])
        s = 0.75
        f = make_field("example3_f", 2, s)
        vals = [scheme1_source_2d(s, 1.0, f, x, GridSpec.uniform(n, with_t=True))
                for n in (64, 128, 256)]
        e1 = abs(vals[1] - vals[0])
        e2 = abs(vals[2] - vals[1])
        assert math.log2(e1 / e2) == pytest.approx(1.33, abs=0.35)

    def test_zero_source_at_origin(self):
        grid = GridSpec.uniform(32, with_t=True)
        zero = lambda pts: np.zeros(np.asarray(pts).shape[:-1])
        assert scheme1_source_2d(0.5, 1.0, zero, np.zeros(2), grid) == 0.0

    def test_origin_evaluation_converges(self):
        s = 0.5
        f = make_field("example3_f", 2, s)
        errs = []
        for n_cells in (32, 64, 128, 256):
            grid = GridSpec.uniform(n_cells, with_t=True)
            errs.append(abs(scheme1_source_2d(s, 1.0, f, np.zeros(2), grid) - 1.0))
        assert errs[-1] < errs[0]
        assert errs[-1] < 0.1

    def test_validation(self):
        f = make_field("example3_f", 2, 0.5)
        grid = GridSpec.uniform(16, with_t=True)
        with pytest.raises(DomainError):
            scheme1_source_2d(0.5, 1.0, f, np.array([0.9, 0.43]), grid,
                              h_excl=0.2)  # larger than r - |x|
        with pytest.raises(DomainError):
            scheme1_source_2d(0.5, 1.0, f, np.array([0.5, 0.0]),
                              GridSpec.uniform(16))  # no t grid


class TestConvergenceStudy:
    def test_constant_data_zero_differences(self):
        rows = convergence_study(lambda n: 42.0, halvings=2, n_start=8)
        assert rows[0].err is None
        assert all(r.err == 0.0 for r in rows[1:])
        assert all(r.rate is None for r in rows)

    def test_second_order_sequence(self):
        rows = convergence_study(lambda n: 1.0 + 3.0 / n ** 2, halvings=3,
                                 n_start=8)
        for row in rows[2:]:
            assert row.rate == pytest.approx(2.0, abs=0.15)

    def test_validation(self):
        with pytest.raises(DomainError):
            convergence_study(lambda n: 0.0, halvings=1)


class TestAdaptiveSimpson:
    def test_polynomial_exact(self):
        val = adaptive_simpson(lambda t: t ** 3 - t, 0.0, 2.0)
        assert val == pytest.approx(2.0, abs=1e-12)

    def test_against_scipy(self):
        val = adaptive_simpson(lambda t: math.exp(-t) * math.sin(3 * t), 0.0, 5.0)
        ref, _ = quad(lambda t: math.exp(-t) * math.sin(3 * t), 0.0, 5.0)
        assert val == pytest.approx(ref, abs=1e-11)
