import numpy as np
import pytest

from geolab.errors import EtaTooLarge, FlowLeftSurface, NotGPlus, OriginMismatch
from geolab.extension import (
    SumField,
    TangentialField,
    cross_extension,
    extend_normal_field,
    flow_gram_matrix,
    flow_network_length,
    verify_second_variation_match,
)
from geolab.geodesics import curve_from_samples, sample_great_circle, sample_level_circle
from geolab.networks import GeodesicNetwork
from geolab.surfaces import make_flat_chart, make_mk


def vec_poly(coeffs):
    """R -> R^2 polynomial from a (2, deg+1) coefficient array."""

    def f(t):
        t = np.asarray(t, dtype=float)
        return np.stack(
            [np.polynomial.polynomial.polyval(t, c) for c in coeffs], axis=-1
        )

    return f


class TestCrossExtension:
    def test_identity_field(self):
        u1 = vec_poly([[0, 1], [0, 0]])  # u(t,0) = (t, 0)
        u2 = vec_poly([[0, 0], [0, 1]])  # u(0,t) = (0, t)
        U = cross_extension(u1, u2)
        x, y = np.meshgrid(np.linspace(-1, 1, 11), np.linspace(-1, 1, 11))
        vals = U(x.ravel(), y.ravel())
        assert np.allclose(vals, np.stack([x.ravel(), y.ravel()], axis=1))

    def test_constants(self):
        c = np.array([0.3, -0.7])
        u = lambda t: np.broadcast_to(c, np.shape(t) + (2,)) if np.ndim(t) else c
        U = cross_extension(u, u)
        assert np.allclose(U(0.5, -0.8), c)

    def test_polynomial_example(self):
        u1 = vec_poly([[0, 0, 1], [1, 0, 0]])  # (t^2, 1)

        def u2(t):
            t = np.asarray(t, dtype=float)
            return np.stack([np.sin(t), np.ones_like(t)], axis=-1)

        U = cross_extension(u1, u2)
        val = U(2.0, 3.0)
        assert np.allclose(val, [4.0 + np.sin(3.0), 1.0])

    def test_origin_mismatch(self):
        u1 = vec_poly([[0.0, 1], [0, 0]])
        u2 = vec_poly([[1e-6, 0], [0, 1]])
        with pytest.raises(OriginMismatch):
            cross_extension(u1, u2)

    def test_restriction_and_gradient_bound_random_polys(self):
        # criterion-5 style check: 20 random polynomial pairs
        rng = np.random.default_rng(42)
        grid = np.linspace(-1.0, 1.0, 100)
        X, Y = np.meshgrid(grid, grid)
        for _ in range(20):
            c1 = rng.normal(size=(2, 5))
            c2 = rng.normal(size=(2, 5))
            c2[:, 0] = c1[:, 0]  # shared value at the crossing
            u1, u2 = vec_poly(c1), vec_poly(c2)
            U = cross_extension(u1, u2)
            ts = rng.uniform(-1, 1, size=1000)
            assert np.max(np.abs(U(ts, 0.0) - u1(ts))) <= 1e-12
            assert np.max(np.abs(U(0.0, ts) - u2(ts))) <= 1e-12
            # pointwise gradient bound via finite differences of U
            h = 1e-6
            dUx = (U(X + h, Y) - U(X - h, Y)) / (2 * h)
            dUy = (U(X, Y + h) - U(X, Y - h)) / (2 * h)
            d1 = vec_poly(np.polynomial.polynomial.polyder(c1, axis=1))
            d2 = vec_poly(np.polynomial.polynomial.polyder(c2, axis=1))
            lhs = np.maximum(
                np.linalg.norm(dUx, axis=-1), np.linalg.norm(dUy, axis=-1)
            )
            rhs = np.maximum.reduce(
                [
                    np.linalg.norm(d1(X), axis=-1),
                    np.linalg.norm(d2(Y), axis=-1),
                    np.full(X.shape, np.linalg.norm(d1(0.0))),
                    np.full(X.shape, np.linalg.norm(d2(0.0))),
                ]
            )
            assert np.all(lhs <= rhs + 1e-5)


class TestExtendNormalField:
    def test_embedded_circle_no_tangential_part(self, sphere, great_circle):
        net = GeodesicNetwork.build(sphere, [great_circle], clustering_radius=0.01)
        X = extend_normal_field(net, [1.0], delta=0.5)
        assert X.support_measure == 0.0
        fr = X.frames[0]
        vals = X(great_circle.samples[::16])
        tangential = np.einsum("ni,ni->n", vals, fr.T[::16])
        normal = np.einsum("ni,ni->n", vals, fr.normals[::16])
        assert np.max(np.abs(tangential)) < 1e-12
        assert np.max(np.abs(normal - 1.0)) < 1e-8

    def test_two_circles_restriction(self, two_circles_network):
        net = two_circles_network
        X = extend_normal_field(net, [1.0, 1.0], delta=2.0)
        for k, c in enumerate(net.curves):
            vals = X(c.samples[::8])
            fr = X.frames[k]
            normal = np.einsum("ni,ni->n", vals, fr.normals[::8])
            assert np.max(np.abs(normal - 1.0)) <= 1e-8
        # crossing corrections solve the 2x2 transverse system
        for data in X.crossing_data:
            t0, t1 = data["t_corrections"]
            assert np.isfinite(t0) and np.isfinite(t1)

    def test_linearity(self, two_circles_network):
        net = two_circles_network
        Xa = extend_normal_field(net, [1.0, 0.0], delta=2.0)
        Xb = extend_normal_field(net, [0.0, 1.0], delta=2.0)
        Xsum = extend_normal_field(net, [1.0, 1.0], delta=2.0)
        surface = net.ambient_surface
        pts = surface.project(
            np.vstack([net.curves[0].samples[::500], net.curves[1].samples[::500] + 0.01])
        )
        assert np.max(np.abs(Xa(pts) + Xb(pts) - Xsum(pts))) <= 1e-10

    def test_support_scales_with_delta(self, two_circles_network):
        X2 = extend_normal_field(two_circles_network, [1.0, 1.0], delta=2.0)
        X1 = extend_normal_field(two_circles_network, [1.0, 1.0], delta=1.0)
        ratio = X1.support_measure / X2.support_measure
        assert abs(ratio - 0.5) < 0.05
        assert X2.support_measure <= 2.0

    def test_not_g_plus(self):
        chart = make_flat_chart(2.6, 2.6)
        curves = []
        for a in (0.0, np.pi / 2, np.pi / 4):
            t = np.linspace(-1, 1, 4000)
            curves.append(
                curve_from_samples(chart, np.outer(t, [np.cos(a), np.sin(a)]), closed=False)
            )
        net = GeodesicNetwork.build(chart, curves, clustering_radius=0.01)
        with pytest.raises(NotGPlus):
            extend_normal_field(net, [1.0, 1.0, 1.0], delta=1.0)

    def test_eta_too_large(self, two_circles_network):
        with pytest.raises(EtaTooLarge):
            extend_normal_field(two_circles_network, [1.0, 1.0], delta=2.0, eta=1.5)


class TestVerify:
    def test_round_great_circle(self, sphere, great_circle):
        net = GeodesicNetwork.build(sphere, [great_circle], clustering_radius=0.01)
        X = extend_normal_field(net, [1.0], delta=0.5)
        rep = verify_second_variation_match(net, [1.0], X, flow_step=0.01)
        assert rep["Q_form"] == pytest.approx(-2 * np.pi, rel=1e-9)
        assert rep["rel_error"] <= 1e-3

    def test_mk_mu2_degenerate_stable(self, mk_mu2):
        eq = sample_level_circle(mk_mu2, 0.0)
        net = GeodesicNetwork.build(mk_mu2, [eq], clustering_radius=0.01)
        X = extend_normal_field(net, [1.0], delta=0.5)
        rep = verify_second_variation_match(net, [1.0], X, flow_step=0.01)
        assert rep["Q_form"] == pytest.approx(0.0, abs=1e-10)
        assert abs(rep["Q_flow"]) <= 1e-4 * eq.length

    def test_tangential_field_changes_nothing(self, sphere, great_circle):
        net = GeodesicNetwork.build(sphere, [great_circle], clustering_radius=0.01)
        X = extend_normal_field(net, [1.0], delta=0.5)
        base = verify_second_variation_match(net, [1.0], X, flow_step=0.01)
        tang = TangentialField(net, [lambda s: 0.3 * np.sin(2 * s)])
        pert = verify_second_variation_match(
            net, [1.0], SumField(X, tang), flow_step=0.01
        )
        assert abs(pert["Q_flow"] - base["Q_flow"]) <= 1e-4 * abs(base["Q_form"])

    def test_negative_definite_gram_transport(self, two_circles_network):
        net = two_circles_network
        Xa = extend_normal_field(net, [1.0, 0.0], delta=2.0)
        Xb = extend_normal_field(net, [0.0, 1.0], delta=2.0)
        G = flow_gram_matrix(net, [Xa, Xb], flow_step=0.005)
        eigs = np.linalg.eigvalsh(G)
        assert np.all(eigs < 0)
        assert eigs == pytest.approx([-2 * np.pi, -2 * np.pi], rel=1e-3)

    def test_flow_left_surface_guard(self, sphere, great_circle):
        net = GeodesicNetwork.build(sphere, [great_circle], clustering_radius=0.01)

        class RunawayField:
            def __call__(self, pts):
                return np.broadcast_to([0.0, 0.0, 50.0], pts.shape)

        with pytest.raises(FlowLeftSurface):
            flow_network_length(net, RunawayField(), 0.5, n_substeps=1)
