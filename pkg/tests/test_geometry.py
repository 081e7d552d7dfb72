import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracwos.errors import DomainError
from fracwos.geometry import (Domain, contains, inscribed_radius,
                              spherical_to_cartesian)


class TestContains:
    def test_ball(self):
        d = Domain.ball([0.0, 0.0], 1.0)
        assert contains(d, [0.0, 0.0])
        assert not contains(d, [1.0000001, 0.0])
        assert not contains(d, [1.0, 0.0])  # boundary is exterior

    def test_box_10d(self):
        d = Domain.box(np.zeros(10), np.ones(10))
        assert contains(d, 0.1 * np.ones(10))
        assert not contains(d, np.ones(10) * 0.1 + np.eye(10)[0])

    def test_generic_signed_distance(self):
        d = Domain.generic(2, lambda p: 1.0 - float(np.linalg.norm(p)))
        assert contains(d, [0.5, 0.0])
        assert not contains(d, [1.5, 0.0])

    def test_dimension_mismatch(self):
        d = Domain.ball([0.0, 0.0], 1.0)
        with pytest.raises(DomainError):
            contains(d, [0.0, 0.0, 0.0])


class TestInscribedRadius:
    def test_ball_value(self):
        d = Domain.ball([0.0, 0.0], 1.0)
        assert inscribed_radius(d, [0.6, 0.6]) == pytest.approx(
            1.0 - 0.6 * math.sqrt(2.0), abs=1e-15)

    def test_box_nearest_face(self):
        d = Domain.box(np.zeros(10), np.ones(10))
        assert inscribed_radius(d, 0.1 * np.ones(10)) == pytest.approx(0.1)

    def test_exterior_raises(self):
        d = Domain.ball([0.0], 1.0)
        with pytest.raises(DomainError):
            inscribed_radius(d, [2.0])

    @settings(max_examples=100, deadline=None)
    @given(st.floats(-0.7, 0.7), st.floats(-0.7, 0.7))
    def test_ball_identity(self, a, b):
        # inscribed radius + |x - c| = r exactly
        d = Domain.ball([0.25, -0.5], 2.0)
        x = np.array([a, b])
        assert inscribed_radius(d, x) + np.linalg.norm(x - d.center) == \
            pytest.approx(2.0, abs=1e-14)

    def test_inscribed_ball_is_contained(self):
        rng = np.random.default_rng(0)
        d = Domain.box(np.array([-1.0, 0.0, 2.0]), np.array([1.0, 3.0, 2.5]))
        for _ in range(50):
            x = d.lo + (d.hi - d.lo) * rng.uniform(0.05, 0.95, 3)
            rho = inscribed_radius(d, x)
            for _ in range(20):
                v = rng.standard_normal(3)
                v *= rho * (1.0 - 1e-12) * rng.random() / np.linalg.norm(v)
                assert contains(d, x + v)


class TestSphericalToCartesian:
    def test_polar_convention(self):
        # first coordinate carries sin(theta), second cos(theta)
        p = spherical_to_cartesian([0.0, 0.0], 2.0, math.pi / 2.0)
        assert p == pytest.approx([2.0, 0.0], abs=1e-15)
        p = spherical_to_cartesian([1.0, 1.0], 1.0, 0.0)
        assert p == pytest.approx([1.0, 2.0], abs=1e-15)

    def test_pole(self):
        p = spherical_to_cartesian([0.0, 0.0, 0.0], 1.0, 1.234, [0.0])
        assert p == pytest.approx([0.0, 0.0, 1.0], abs=1e-15)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(0.01, 10.0), st.floats(0.0, 2.0 * math.pi),
           st.lists(st.floats(0.0, math.pi), min_size=3, max_size=3))
    def test_round_trip_norm(self, rho, theta, phis):
        c = np.array([0.3, -1.0, 0.2, 4.0, 0.0])
        p = spherical_to_cartesian(c, rho, theta, phis)
        assert np.linalg.norm(p - c) == pytest.approx(rho, rel=1e-13)

    def test_angle_validation(self):
        with pytest.raises(DomainError):
            spherical_to_cartesian([0.0, 0.0], 1.0, 7.0)
        with pytest.raises(DomainError):
            spherical_to_cartesian([0.0, 0.0, 0.0], 1.0, 1.0, [4.0])
        with pytest.raises(DomainError):
            spherical_to_cartesian([0.0, 0.0, 0.0], 1.0, 1.0, [])


class TestDomainConstruction:
    def test_ball_validation(self):
        with pytest.raises(DomainError):
            Domain.ball([0.0, 0.0], 0.0)
        with pytest.raises(DomainError):
            Domain.ball([0.0, math.inf], 1.0)

    def test_box_validation(self):
        with pytest.raises(DomainError):
            Domain.box([0.0, 0.0], [1.0, 0.0])

    def test_grazing_scale(self):
        assert Domain.ball([0.0], 2.0).grazing_tol == pytest.approx(2e-12)
        assert Domain.box([0.0, 0.0], [4.0, 1.0]).grazing_tol == pytest.approx(4e-12)
