import numpy as np
import pytest
from scipy.integrate import quad

from geolab.errors import LeftChartDomain, NoConvergence
from geolab.geodesics import (
    close_geodesic,
    curve_from_samples,
    curve_length,
    flow_chart,
    flow_levelset,
    geodesic_curvature_profile,
    hausdorff_distance,
    integrate_geodesic,
    low_discrepancy_seeds,
    require_geodesic,
    sample_great_circle,
    sample_level_circle,
)
from geolab.surfaces import make_flat_chart, make_mk, make_sphere


class TestIntegrate:
    def test_great_circle_returns(self, sphere):
        path = integrate_geodesic(
            sphere, np.array([1.0, 0, 0]), np.array([0, 1.0, 0]), 2 * np.pi
        )
        assert np.linalg.norm(path[-1] - path[0]) < 1e-8

    def test_mk_equator_is_gamma0(self, mk4):
        path = integrate_geodesic(
            mk4, np.array([1.0, 0, 0]), np.array([0, 1.0, 0]), 2 * np.pi
        )
        s = np.linspace(0, 2 * np.pi, path.shape[0])
        expected = np.stack([np.cos(s), np.sin(s), np.zeros_like(s)], axis=1)
        assert np.max(np.linalg.norm(path - expected, axis=1)) < 1e-8

    def test_flat_chart_straight_line(self):
        chart = make_flat_chart(4.0, 4.0)
        path = integrate_geodesic(
            chart, np.array([0.0, 0.0]), np.array([0.6, 0.8]), 1.5, step=1.5 / 256
        )
        assert np.allclose(path[-1], [0.9, 1.2], atol=1e-10)

    def test_left_chart_domain(self):
        chart = make_flat_chart(1.0, 1.0)
        with pytest.raises(LeftChartDomain):
            integrate_geodesic(
                chart, np.array([0.0, 0.0]), np.array([1.0, 0.0]), 3.0, step=0.01
            )

    def test_speed_stays_constant(self, mk4):
        path = integrate_geodesic(
            mk4, np.array([1.0, 0, 0]), np.array([0, 1.0, 0]), 2 * np.pi
        )
        cur = curve_from_samples(mk4, path[:-1])
        assert np.max(np.abs(cur.speeds - cur.length / (2 * np.pi))) < 1e-8 * cur.length

    def test_reversibility(self, mk4):
        p0 = np.array([[1.0, 0.0, 0.0]])
        v0 = np.array([[0.0, np.sqrt(0.5), np.sqrt(0.5) * 2]])
        v0 /= np.linalg.norm(v0)
        n = mk4.unit_normal(p0)
        v0 -= np.sum(v0 * n, axis=-1, keepdims=True) * n
        v0 /= np.linalg.norm(v0)
        P1, V1 = flow_levelset(mk4, p0, v0, np.array([5.0]), 4096)
        P2, _ = flow_levelset(mk4, P1, -V1, np.array([5.0]), 4096)
        assert np.linalg.norm(P2 - p0) < 1e-8

    def test_mirror_symmetry(self, mk4):
        p0 = np.array([[1.0, 0.0, 0.0]])
        v0 = np.array([[0.0, 0.8, 0.6]])
        v0 /= np.linalg.norm(v0)
        _, _, up = flow_levelset(mk4, p0, v0, np.array([3.0]), 1024, store_path=True)
        v0m = v0 * np.array([1.0, 1.0, -1.0])
        _, _, down = flow_levelset(mk4, p0, v0m, np.array([3.0]), 1024, store_path=True)
        mirrored = up[0] * np.array([1.0, 1.0, -1.0])
        assert np.max(np.linalg.norm(mirrored - down[0], axis=1)) < 1e-10


class TestCloseGeodesic:
    def test_equator(self, mk4):
        cur = close_geodesic(
            mk4, (np.array([1.0, 0.05, 0.02]), np.array([-0.05, 1.0, 0.01]), 6.2)
        )
        assert cur.closure_residual <= 1e-10
        assert abs(cur.length - 2 * np.pi) < 1e-8

    def test_meridian_against_quadrature(self, mk4):
        cur = close_geodesic(
            mk4, (np.array([0.0, 1.0, 0.0]), np.array([0.0, 0.0, 1.0]), 9.7)
        )
        oracle, _ = quad(
            lambda t: np.sqrt(np.sin(t) ** 2 + 4 * np.cos(t) ** 2),
            0,
            2 * np.pi,
            epsabs=1e-13,
            epsrel=1e-13,
        )
        assert abs(cur.length - oracle) < 1e-8
        assert cur.extra.get("degenerate_jacobian") is True  # meridian family

    def test_round_sphere_any_seed(self, sphere):
        cur = close_geodesic(
            sphere, (np.array([0.3, -0.8, 0.52]), np.array([0.7, 0.2, -0.1]), 6.0)
        )
        assert abs(cur.length - 2 * np.pi) < 1e-8

    def test_cover_detection(self):
        # k = 5: the doubled equator is non-degenerate (2m/sqrt(k) not an
        # integer), so the shot lands cleanly on the 2-fold cover
        mk5 = make_mk(5.0, 1.0)
        cur = close_geodesic(
            mk5, (np.array([1.0, 0.03, 0.01]), np.array([-0.03, 1.0, 0.005]), 4 * np.pi)
        )
        assert cur.cover_multiplicity == 2
        assert abs(cur.length - 2 * np.pi) < 1e-8  # primitive representative

    def test_no_convergence(self, mk4):
        with pytest.raises(NoConvergence):
            close_geodesic(
                mk4,
                (np.array([0.4, 0.5, 1.5]), np.array([0.1, -0.5, 0.6]), 7.0),
                max_iter=1,
            )


class TestLengthAndCurvature:
    def test_equator_length(self, equator_mk4):
        assert abs(equator_mk4.length - 2 * np.pi) < 1e-10

    def test_great_circle_length(self, great_circle):
        assert abs(great_circle.length - 2 * np.pi) < 1e-10

    def test_level_circle_length(self, mk4):
        for c in (0.5, 1.0, -1.3):
            cur = sample_level_circle(mk4, c)
            assert abs(cur.length - 2 * np.pi * np.sqrt(1 - c * c / 4)) < 1e-10

    def test_geodesic_curvature_small_on_geodesics(self, mk4):
        cur = close_geodesic(
            mk4, (np.array([1.0, 0.05, 0.02]), np.array([-0.05, 1.0, 0.01]), 6.2)
        )
        assert require_geodesic(cur) <= 1e-6

    def test_level_circle_curvature_points_to_equator(self, mk4):
        # curvature vector of the latitude circles points toward x3 = 0
        n = 2048
        th = np.linspace(0, 2 * np.pi, n, endpoint=False)
        for c in (0.8, -0.8):
            cur = sample_level_circle(mk4, c, n)
            kap = geodesic_curvature_profile(cur, mk4)
            assert np.all(np.abs(kap) > 1e-3) and (np.all(kap > 0) or np.all(kap < 0))
            # reconstruct the curvature vector's x3-component sign
            d1 = np.stack([-np.sin(th), np.cos(th), np.zeros_like(th)], axis=1)
            N = mk4.unit_normal(cur.samples)
            n_right = np.cross(d1, N)
            vec_x3 = kap * n_right[:, 2]
            if c > 0:
                assert np.all(vec_x3 < 0)
            else:
                assert np.all(vec_x3 > 0)

    def test_flat_circle_curvature(self):
        chart = make_flat_chart(4.0, 4.0)
        n = 2048
        th = np.linspace(0, 2 * np.pi, n, endpoint=False)
        r = 0.7
        cur = curve_from_samples(chart, r * np.stack([np.cos(th), np.sin(th)], axis=1))
        kap = geodesic_curvature_profile(cur, chart)
        assert np.max(np.abs(kap - 1.0 / r)) < 1e-4


class TestHelpers:
    def test_low_discrepancy_deterministic(self):
        a = low_discrepancy_seeds(100, 3, seed=5)
        b = low_discrepancy_seeds(100, 3, seed=5)
        c = low_discrepancy_seeds(100, 3, seed=6)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)
        assert a.min() >= 0 and a.max() < 1

    def test_hausdorff(self):
        a = np.array([[0.0, 0.0], [1.0, 0.0]])
        b = np.array([[0.0, 0.1], [1.0, 0.0], [2.0, 0.0]])
        assert hausdorff_distance(a, b) == pytest.approx(1.0)

    def test_chart_flow_straight(self):
        chart = make_flat_chart(4.0, 4.0)
        x1, v1 = flow_chart(chart, np.array([0.0, 0.0]), np.array([1.0, 0.0]), 1.0)
        assert np.allclose(x1, [1.0, 0.0], atol=1e-12)

    def test_great_circle_sampler_on_surface(self, sphere, great_circle):
        assert np.max(np.abs(sphere.level(great_circle.samples))) < 1e-14
