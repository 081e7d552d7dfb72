import math

import numpy as np
import pytest

from conftest import ks_critical, ks_statistic
from fracwos.errors import DomainError
from fracwos.kernels import BallContext, constants
from fracwos.sampling import (AngularLaw, RngStream, _philox_fill,
                              _sample_sin_power_counted, _stream_next,
                              sample_direction, sample_exit_point,
                              sample_exit_radius, sample_interior_point,
                              sample_interior_radius, sample_sin_power_angle)
from fracwos.specfun import reg_inc_beta, sin_power


class TestRngStream:
    def test_replay_is_bit_exact(self):
        a = RngStream(123, 45).generator().random(64)
        b = RngStream(123, 45).generator().random(64)
        assert np.array_equal(a, b)

    def test_streams_differ(self):
        a = RngStream(123, 45).generator().random(8)
        b = RngStream(123, 46).generator().random(8)
        c = RngStream(124, 45).generator().random(8)
        assert not np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_kernel_replica_matches_numpy(self):
        # the in-kernel block function must reproduce Generator.random() bits
        with np.errstate(over="ignore"):
            state = np.zeros(2, dtype=np.uint64)
            state[1] = np.uint64(4)
            buf = np.zeros(4)
            k0, k1 = np.uint64(987654321), np.uint64(1312)
            mine = np.array([_stream_next(state, buf, k0, k1) for _ in range(33)])
        ref = RngStream(987654321, 1312).generator().random(33)
        assert np.array_equal(mine, ref)

    def test_fill_counter_convention(self):
        with np.errstate(over="ignore"):
            buf = np.zeros(4)
            _philox_fill(buf, np.uint64(1), np.uint64(7), np.uint64(9))
        ref = RngStream(7, 9).generator().random(4)
        assert np.array_equal(buf, ref)

    def test_key_validation(self):
        with pytest.raises(DomainError):
            RngStream(-1, 0)
        with pytest.raises(DomainError):
            RngStream(0, 2 ** 64)


class TestRadii:
    def test_exit_radius_closed_forms(self):
        # I^{-1}(1/2; 1/2, 1/2) = 1/2 -> rho = sqrt(2);
        # I^{-1}(1/3; 1/2, 1/2) = 1/4 -> rho = 2
        assert sample_exit_radius(1.0, 0.5, 0.5) == pytest.approx(math.sqrt(2.0),
                                                                  rel=1e-12)
        assert sample_exit_radius(1.0, 0.5, 2.0 / 3.0) == pytest.approx(2.0,
                                                                        rel=1e-12)

    def test_exit_radius_limits(self):
        assert sample_exit_radius(1.0, 0.3, 1e-12) == pytest.approx(1.0, rel=1e-3)
        assert sample_exit_radius(2.5, 0.7, 0.5) > 2.5
        with pytest.raises(DomainError):
            sample_exit_radius(1.0, 0.5, 0.0)
        with pytest.raises(DomainError):
            sample_exit_radius(1.0, 0.5, 1.0)

    def test_interior_radius(self):
        assert sample_interior_radius(1.0, 0.5, 0.25) == pytest.approx(0.25)
        assert sample_interior_radius(1.0, 0.25, 0.5) == pytest.approx(0.25)
        assert sample_interior_radius(1.0, 0.5, 1.0 - 1e-12) < 1.0

    def test_exit_radius_law_ks(self):
        n_draws = 100_000
        crit = ks_critical(n_draws)
        for s in (0.25, 0.5, 0.75):
            u = RngStream(5, 17).generator().random(n_draws)
            u = np.clip(u, 1e-300, None)
            rho = np.array([sample_exit_radius(1.0, s, float(v)) for v in u])

            def cdf(t, _s=s):
                return 1.0 - reg_inc_beta(min(1.0, 1.0 / (t * t)), _s, 1.0 - _s)

            assert ks_statistic(rho, cdf) < crit

    def test_interior_radius_law_ks(self):
        n_draws = 100_000
        crit = ks_critical(n_draws)
        for s in (0.25, 0.5, 0.75):
            u = RngStream(6, 18).generator().random(n_draws)
            rho = 1.0 * u ** (1.0 / (2.0 * s))
            assert ks_statistic(rho, lambda t, _s=s: min(1.0, t ** (2 * _s))) < crit


class TestAngularLaw:
    def test_acceptance_rate_formula(self):
        law2 = AngularLaw.for_exponent(2)
        law3 = AngularLaw.for_exponent(3)
        assert law2.alpha_m == 1.0
        assert law2.eta == pytest.approx(0.8862, abs=2e-4)
        assert law3.eta == pytest.approx(0.9213, abs=2e-4)
        # monotone toward 1
        etas = [AngularLaw.for_exponent(m).eta for m in range(2, 12)]
        assert all(b > a for a, b in zip(etas, etas[1:]))
        assert etas[-1] < 1.0

    def test_m1_median(self):
        gen = RngStream(0, 0).generator()
        vals = np.array([sample_sin_power_angle(1, gen) for _ in range(20001)])
        assert np.median(vals) == pytest.approx(math.pi / 2.0, abs=0.03)

    def test_sin_power_ks(self):
        n_draws = 20_000
        crit = ks_critical(n_draws)
        for m in range(1, 9):
            gen = RngStream(9, m).generator()
            vals = np.array([sample_sin_power_angle(m, gen) for _ in range(n_draws)])
            assert ks_statistic(vals, lambda p, _m=m: sin_power(_m, float(p))) < crit

    def test_empirical_acceptance_rate(self):
        for m in (2, 3, 5, 8):
            gen = RngStream(10, m).generator()
            trials = 0
            n = 20_000
            for _ in range(n):
                _, t, _ = _sample_sin_power_counted(m, gen)
                trials += t
            eta_hat = n / trials
            assert eta_hat == pytest.approx(AngularLaw.for_exponent(m).eta, abs=0.01)

    def test_validation(self):
        with pytest.raises(DomainError):
            sample_sin_power_angle(0, RngStream(0, 0))
        with pytest.raises(DomainError):
            AngularLaw.for_exponent(0)


class TestDirections:
    def test_angle_ranges(self):
        gen = RngStream(3, 3).generator()
        for n in (2, 3, 6, 10):
            theta, phis = sample_direction(n, gen)
            assert 0.0 <= theta <= 2.0 * math.pi
            assert len(phis) == n - 2
            assert all(0.0 < p < math.pi for p in phis)

    def test_componentwise_isotropy(self):
        # unit direction components have mean 0 and variance 1/n
        from fracwos.geometry import spherical_to_cartesian

        n, draws = 6, 20_000
        gen = RngStream(21, 0).generator()
        pts = np.empty((draws, n))
        for i in range(draws):
            theta, phis = sample_direction(n, gen)
            pts[i] = spherical_to_cartesian(np.zeros(n), 1.0, theta, phis)
        se = math.sqrt(1.0 / n / draws)
        assert np.all(np.abs(pts.mean(axis=0)) < 5.0 * se)
        assert np.allclose((pts ** 2).mean(axis=0), 1.0 / n, atol=5.0 * se)

    def test_polar_angle_ks_n3_and_n10(self):
        n_draws = 20_000
        crit = ks_critical(n_draws)
        for n, m in ((3, 1), (10, 8)):
            gen = RngStream(31, n).generator()
            first = np.array([sample_direction(n, gen)[1][0] for _ in range(n_draws)])
            assert ks_statistic(first, lambda p, _m=m: sin_power(_m, float(p))) < crit


class TestPoints:
    def test_exit_point_radial_cdf(self):
        # P(|X| <= 2r) = 1 - I(1/4; s, 1-s) = 2/3 at s = 1/2
        c = BallContext(np.zeros(2), 1.0, constants(2, 0.5))
        gen = RngStream(77, 0).generator()
        draws = 50_000
        hits = 0
        for _ in range(draws):
            if np.linalg.norm(sample_exit_point(c, gen)) <= 2.0:
                hits += 1
        assert hits / draws == pytest.approx(2.0 / 3.0, abs=0.007)

    def test_interior_point_radial_cdf(self):
        # P(|Y| <= r/2) = (1/2)^{2s}
        c = BallContext(np.zeros(3), 1.0, constants(3, 0.75))
        gen = RngStream(78, 0).generator()
        draws = 50_000
        hits = 0
        for _ in range(draws):
            if np.linalg.norm(sample_interior_point(c, gen)) <= 0.5:
                hits += 1
        assert hits / draws == pytest.approx(0.5 ** 1.5, abs=0.007)

    def test_supports(self):
        c = BallContext(np.array([1.0, -2.0]), 0.5, constants(2, 0.4))
        gen = RngStream(79, 0).generator()
        for _ in range(200):
            assert np.linalg.norm(sample_exit_point(c, gen) - c.center) > 0.5
            assert np.linalg.norm(sample_interior_point(c, gen) - c.center) < 0.5

    def test_independent_draw_determinism(self):
        c = BallContext(np.zeros(4), 1.0, constants(4, 0.6))
        a = sample_exit_point(c, RngStream(101, 7))
        b = sample_exit_point(c, RngStream(101, 7))
        assert np.array_equal(a, b)
