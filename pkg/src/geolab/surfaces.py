"""Surfaces and metrics: level sets in R^3 and coordinate charts.

Two representations are supported:

* level sets ``F(x) = 0`` with analytic gradient and Hessian (all built-ins:
  the elongated spheroid family, ellipsoids, the unit sphere, the unit
  cylinder).  Gauss curvature uses the adjugate formula
  ``K = (grad F . adj(Hess F) . grad F) / |grad F|^4``, which has no chart
  singularities at the poles.
* charts over a parameter rectangle with metric coefficients E, F, G and
  optional periodic identifications per axis.

Either representation can carry a conformal factor f; the effective metric is
``exp(2 f) g``.  Factors are stored procedurally (callables with an explicit
support ball), never as grids, so support containment is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ChartUnavailable, PointOffSurface

ON_SURFACE_TOL = 1e-10

# step for finite differences of chart metric coefficients
_FD_H = 1e-6


@dataclass(frozen=True)
class MetricTensor:
    """Pointwise 2x2 first fundamental form."""

    components: np.ndarray

    @property
    def det(self) -> float:
        g = self.components
        return float(g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0])

    def is_spd(self, tol: float = 1e-12) -> bool:
        g = self.components
        if abs(g[0, 1] - g[1, 0]) > tol:
            return False
        ev = np.linalg.eigvalsh(0.5 * (g + g.T))
        return bool(ev.min() > tol)


@dataclass(frozen=True)
class ConformalFactor:
    """Procedural conformal factor with exact support control.

    ``value(points)`` returns f; the metric is multiplied by exp(2 f).
    ``center``/``radius`` bound the support: the factor is gated to return
    exactly 0 outside the ball, so the metric is unchanged there.
    """

    value: Callable[[np.ndarray], np.ndarray]
    center: np.ndarray
    radius: float
    label: str = ""

    def __call__(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        pts2 = np.atleast_2d(pts)
        r = np.linalg.norm(pts2 - self.center, axis=-1)
        inside = r < self.radius
        out = np.zeros(pts2.shape[0])
        if inside.any():
            out[inside] = np.asarray(self.value(pts2[inside]), dtype=float)
        return out[0] if single else out


class CompositeFactor:
    """Sum of conformal factors from successive deformations."""

    def __init__(self, parts: Sequence[ConformalFactor]):
        self.parts = list(parts)

    def __call__(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        pts2 = np.atleast_2d(pts)
        out = np.zeros(pts2.shape[0])
        for part in self.parts:
            out = out + part(pts2)
        return out[0] if single else out


@dataclass(frozen=True)
class SurfaceModel:
    """A surface, either as an ambient level set or as a chart.

    Level-set surfaces provide vectorized ``level_fn`` (F), ``grad_fn``
    (grad F, shape (...,3)) and ``hess_fn`` (Hess F, shape (...,3,3)).
    Chart surfaces provide metric coefficients ``chart_E/F/G`` over the
    rectangle ``chart_domain`` with per-axis ``chart_periodic`` flags.
    """

    kind: str  # "levelset" | "chart"
    name: str = "custom"
    builtin_params: dict = field(default_factory=dict)
    level_fn: Optional[Callable] = None
    grad_fn: Optional[Callable] = None
    hess_fn: Optional[Callable] = None
    chart_E: Optional[Callable] = None
    chart_F: Optional[Callable] = None
    chart_G: Optional[Callable] = None
    chart_domain: tuple = (0.0, 1.0, 0.0, 1.0)
    chart_periodic: tuple = (False, False)
    conformal_factor: Optional[object] = None
    on_surface_tol: float = ON_SURFACE_TOL

    # -- basic queries ---------------------------------------------------

    @property
    def ambient_dim(self) -> int:
        return 3 if self.kind == "levelset" else 2

    def with_conformal_factor(self, factor) -> "SurfaceModel":
        """Return a copy carrying ``factor`` composed onto any existing one."""
        if self.conformal_factor is None:
            return replace(self, conformal_factor=factor)
        old = self.conformal_factor
        parts = list(old.parts) if isinstance(old, CompositeFactor) else [old]
        return replace(self, conformal_factor=CompositeFactor(parts + [factor]))

    def factor_value(self, points: np.ndarray) -> np.ndarray:
        if self.conformal_factor is None:
            pts = np.asarray(points, dtype=float)
            return np.zeros(pts.shape[:-1]) if pts.ndim > 1 else 0.0
        return self.conformal_factor(points)

    # -- level-set machinery ----------------------------------------------

    def level(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(self.level_fn(np.asarray(points, dtype=float)))

    def grad(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(self.grad_fn(np.asarray(points, dtype=float)))

    def hess(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(self.hess_fn(np.asarray(points, dtype=float)))

    def unit_normal(self, points: np.ndarray) -> np.ndarray:
        g = self.grad(points)
        return g / np.linalg.norm(g, axis=-1, keepdims=True)

    def check_on_surface(self, points: np.ndarray, tol: Optional[float] = None):
        if self.kind != "levelset":
            return
        tol = self.on_surface_tol if tol is None else tol
        vals = np.abs(np.atleast_1d(self.level(points)))
        if vals.max() > tol:
            raise PointOffSurface(
                f"|F(point)| = {vals.max():.3e} exceeds tolerance {tol:.1e}"
            )

    def project(self, points: np.ndarray, iterations: int = 3) -> np.ndarray:
        """Newton projection onto the level set along grad F.

        Runs at least ``iterations`` sweeps and keeps going (up to 30) while
        the residual is far from roundoff, so distant starting points still
        land on the surface.
        """
        p = np.array(points, dtype=float)
        for it in range(30):
            f = self.level(p)
            if it >= iterations and np.max(np.abs(f)) < 1e-13:
                break
            g = self.grad(p)
            gg = np.sum(g * g, axis=-1)
            p = p - (f / gg)[..., None] * g
        return p

    def tangent_frame(self, point: np.ndarray):
        """Orthonormal tangent frame (e1, e2) and unit normal n at a point."""
        n = self.unit_normal(point)
        ref = np.array([1.0, 0.0, 0.0])
        if abs(n @ ref) > 0.9:
            ref = np.array([0.0, 1.0, 0.0])
        e1 = ref - (ref @ n) * n
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(n, e1)
        return e1, e2, n

    def diameter(self) -> float:
        """Cheap ambient diameter estimate for tolerance scaling."""
        if self.kind == "chart":
            u0, u1, v0, v1 = self.chart_domain
            return float(np.hypot(u1 - u0, v1 - v0))
        name = self.name
        p = self.builtin_params
        if name == "mk":
            return 2.0 * max(1.0, p["k"] ** (1.0 / (2.0 * p["mu"])))
        if name == "ellipsoid":
            return 2.0 / np.sqrt(min(p["a1"], p["a2"], p["a3"]))
        return 2.0

    # -- chart machinery ---------------------------------------------------

    def _coeff(self, which: str, u, v):
        fn = {"E": self.chart_E, "F": self.chart_F, "G": self.chart_G}[which]
        base = np.asarray(fn(u, v), dtype=float)
        if self.conformal_factor is not None:
            pts = np.stack(np.broadcast_arrays(u, v), axis=-1)
            base = base * np.exp(2.0 * self.factor_value(pts))
        return base

    def chart_metric(self, uv: np.ndarray) -> np.ndarray:
        """Metric components at chart points, shape (...,2,2)."""
        if self.kind != "chart":
            raise ChartUnavailable("surface has no chart representation")
        uv = np.asarray(uv, dtype=float)
        u, v = uv[..., 0], uv[..., 1]
        E = self._coeff("E", u, v)
        F = self._coeff("F", u, v)
        G = self._coeff("G", u, v)
        g = np.empty(np.broadcast(u, v).shape + (2, 2))
        g[..., 0, 0] = E
        g[..., 0, 1] = F
        g[..., 1, 0] = F
        g[..., 1, 1] = G
        return g

    def in_chart_domain(self, uv: np.ndarray) -> bool:
        u0, u1, v0, v1 = self.chart_domain
        uv = np.atleast_2d(np.asarray(uv, dtype=float))
        ok = np.ones(uv.shape[0], dtype=bool)
        if not self.chart_periodic[0]:
            ok &= (uv[:, 0] >= u0) & (uv[:, 0] <= u1)
        if not self.chart_periodic[1]:
            ok &= (uv[:, 1] >= v0) & (uv[:, 1] <= v1)
        return bool(ok.all())


# ---------------------------------------------------------------------------
# built-in surfaces
# ---------------------------------------------------------------------------


def make_mk(k: float, mu: float = 1.0) -> SurfaceModel:
    """Elongated spheroid x1^2 + x2^2 + x3^(2 mu)/k = 1.

    For mu = 1 this is a prolate ellipsoid of revolution; as k grows the
    family converges to the unit cylinder.  The equator {x3 = 0} is a simple
    closed geodesic of length 2 pi for every k.
    """
    if k <= 0:
        raise ValueError("k must be positive")
    if mu < 1:
        raise ValueError("mu must be >= 1")

    def F(p):
        x, y, z = p[..., 0], p[..., 1], p[..., 2]
        return x * x + y * y + (z * z) ** mu / k - 1.0

    def gradF(p):
        g = np.empty_like(p)
        z = p[..., 2]
        g[..., 0] = 2.0 * p[..., 0]
        g[..., 1] = 2.0 * p[..., 1]
        # d/dz (z^2)^mu = 2 mu z (z^2)^(mu-1)
        g[..., 2] = 2.0 * mu * z * _safe_pow(z * z, mu - 1.0) / k
        return g

    def hessF(p):
        shape = p.shape[:-1]
        H = np.zeros(shape + (3, 3))
        z = p[..., 2]
        H[..., 0, 0] = 2.0
        H[..., 1, 1] = 2.0
        H[..., 2, 2] = 2.0 * mu * (2.0 * mu - 1.0) * _safe_pow(z * z, mu - 1.0) / k
        return H

    return SurfaceModel(
        kind="levelset",
        name="mk",
        builtin_params={"k": float(k), "mu": float(mu)},
        level_fn=F,
        grad_fn=gradF,
        hess_fn=hessF,
    )


def _safe_pow(base: np.ndarray, expo: float) -> np.ndarray:
    """base**expo with 0**0 = 1 and no warnings for base = 0, expo > 0."""
    if expo == 0.0:
        return np.ones_like(np.asarray(base, dtype=float))
    return np.asarray(base, dtype=float) ** expo


def make_ellipsoid(a1: float, a2: float, a3: float) -> SurfaceModel:
    """Ellipsoid a1 x1^2 + a2 x2^2 + a3 x3^2 = 1 (coefficient convention)."""
    if min(a1, a2, a3) <= 0:
        raise ValueError("coefficients must be positive")
    a = np.array([a1, a2, a3])

    def F(p):
        return np.sum(a * p * p, axis=-1) - 1.0

    def gradF(p):
        return 2.0 * a * p

    def hessF(p):
        shape = p.shape[:-1]
        H = np.zeros(shape + (3, 3))
        for i in range(3):
            H[..., i, i] = 2.0 * a[i]
        return H

    return SurfaceModel(
        kind="levelset",
        name="ellipsoid",
        builtin_params={"a1": float(a1), "a2": float(a2), "a3": float(a3)},
        level_fn=F,
        grad_fn=gradF,
        hess_fn=hessF,
    )


def make_sphere() -> SurfaceModel:
    """Round unit sphere."""
    s = make_ellipsoid(1.0, 1.0, 1.0)
    return replace(s, name="sphere", builtin_params={})


def make_cylinder() -> SurfaceModel:
    """Unit cylinder x1^2 + x2^2 = 1 (flat, K = 0)."""

    def F(p):
        return p[..., 0] ** 2 + p[..., 1] ** 2 - 1.0

    def gradF(p):
        g = np.zeros_like(p)
        g[..., 0] = 2.0 * p[..., 0]
        g[..., 1] = 2.0 * p[..., 1]
        return g

    def hessF(p):
        H = np.zeros(p.shape[:-1] + (3, 3))
        H[..., 0, 0] = 2.0
        H[..., 1, 1] = 2.0
        return H

    return SurfaceModel(
        kind="levelset", name="cylinder", level_fn=F, grad_fn=gradF, hess_fn=hessF
    )


def make_flat_chart(
    width: float = 2.0, height: float = 2.0, periodic=(False, False)
) -> SurfaceModel:
    """Flat chart [-w/2, w/2] x [-h/2, h/2] with E = G = 1, F = 0."""

    one = lambda u, v: np.ones(np.broadcast(u, v).shape)
    zero = lambda u, v: np.zeros(np.broadcast(u, v).shape)
    return SurfaceModel(
        kind="chart",
        name="flat_chart",
        chart_E=one,
        chart_F=zero,
        chart_G=one,
        chart_domain=(-width / 2, width / 2, -height / 2, height / 2),
        chart_periodic=tuple(periodic),
    )


def make_flat_torus(side: float = 1.0) -> SurfaceModel:
    """Flat square torus of side length ``side`` (both axes periodic).

    Pointwise machinery (metric, curvature, Christoffels, integration of
    short arcs) is fully supported; curve-level operations assume samples
    do not wrap around the fundamental domain, so synthetic networks of
    full torus lines should use open segments in a flat chart instead.
    """
    s = make_flat_chart(side, side, periodic=(True, True))
    return replace(
        s,
        name="flat_torus",
        chart_domain=(0.0, side, 0.0, side),
        builtin_params={"side": float(side)},
    )


def make_sphere_polar_chart() -> SurfaceModel:
    """Polar chart (phi, theta) of the unit sphere, metric dphi^2 + sin^2(phi) dtheta^2."""

    one = lambda u, v: np.ones(np.broadcast(u, v).shape)
    zero = lambda u, v: np.zeros(np.broadcast(u, v).shape)
    sin2 = lambda u, v: np.sin(np.broadcast_arrays(u, v)[0]) ** 2
    return SurfaceModel(
        kind="chart",
        name="sphere_polar",
        chart_E=one,
        chart_F=zero,
        chart_G=sin2,
        chart_domain=(1e-3, np.pi - 1e-3, 0.0, 2 * np.pi),
        chart_periodic=(False, True),
    )


def sphere_exp_chart(radius: float = 1.2) -> SurfaceModel:
    """Normal-coordinate chart of the unit sphere around a point.

    In these coordinates geodesics through the origin are straight lines,
    which is what the vertex-splitting construction needs.  The metric is
    g_ij = x_i x_j / r^2 + (sin r / r)^2 (delta_ij - x_i x_j / r^2).
    """

    def coeff(i, j):
        def fn(u, v):
            u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
            r2 = u * u + v * v
            r = np.sqrt(r2)
            s = np.where(r > 1e-12, np.sin(r) / np.where(r > 1e-12, r, 1.0), 1.0)
            x = np.stack([u, v], axis=-1)
            rad = np.where(r2 > 1e-24, x[..., i] * x[..., j] / np.where(r2 > 1e-24, r2, 1.0), 0.0)
            delta = 1.0 if i == j else 0.0
            return rad + s * s * (delta - rad)

        return fn

    return SurfaceModel(
        kind="chart",
        name="sphere_exp",
        chart_E=coeff(0, 0),
        chart_F=coeff(0, 1),
        chart_G=coeff(1, 1),
        chart_domain=(-radius, radius, -radius, radius),
        chart_periodic=(False, False),
    )


def surface_from_config(spec: dict) -> SurfaceModel:
    """Build a surface from the JSON configuration convention.

    Recognized forms: {"type": "mk", "k": 4, "mu": 1},
    {"type": "ellipsoid", "a": [a1, a2, a3]}, {"type": "sphere"},
    {"type": "cylinder"}, {"type": "flat_torus", "side": 1.0}.
    """
    from .errors import ConfigInvalid

    if not isinstance(spec, dict) or "type" not in spec:
        raise ConfigInvalid("surface spec must be a dict with a 'type' key")
    t = spec["type"]
    try:
        if t == "mk":
            return make_mk(float(spec["k"]), float(spec.get("mu", 1.0)))
        if t == "ellipsoid":
            a = spec["a"]
            return make_ellipsoid(float(a[0]), float(a[1]), float(a[2]))
        if t == "sphere":
            return make_sphere()
        if t == "cylinder":
            return make_cylinder()
        if t == "flat_torus":
            return make_flat_torus(float(spec.get("side", 1.0)))
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise ConfigInvalid(f"bad surface spec {spec!r}: {exc}") from exc
    raise ConfigInvalid(f"unknown surface type {t!r}")


# ---------------------------------------------------------------------------
# metric, curvature, Christoffel symbols
# ---------------------------------------------------------------------------


def metric_at(surface: SurfaceModel, point: np.ndarray) -> MetricTensor:
    """First fundamental form at a point.

    For level-set surfaces the form is expressed in an orthonormal ambient
    tangent frame, so the base components are the identity; a conformal
    factor multiplies them by exp(2 f).  Chart surfaces return the
    coefficient matrix [[E, F], [F, G]].

    Raises PointOffSurface when |F(point)| exceeds the on-surface tolerance.
    """
    point = np.asarray(point, dtype=float)
    if surface.kind == "levelset":
        surface.check_on_surface(point)
        comp = np.eye(2)
        if surface.conformal_factor is not None:
            comp = comp * np.exp(2.0 * float(surface.factor_value(point)))
        return MetricTensor(comp)
    if not surface.in_chart_domain(point):
        raise PointOffSurface("chart point outside parameter rectangle")
    return MetricTensor(surface.chart_metric(point))


def gauss_curvature(surface: SurfaceModel, points: np.ndarray):
    """Gauss curvature of the (possibly conformally rescaled) metric.

    Level sets use K = (grad F . adj(Hess F) . grad F)/|grad F|^4; a
    conformal factor contributes K -> exp(-2f) (K - Lap_g f) with the
    Laplacian evaluated by second differences along a tangent frame.
    Charts use the Brioschi formula with finite-difference coefficient
    derivatives (the conformal factor is already folded into E, F, G).
    """
    pts = np.asarray(points, dtype=float)
    single = pts.ndim == 1
    pts2 = np.atleast_2d(pts)
    if surface.kind == "levelset":
        surface.check_on_surface(pts2)
        K = _levelset_curvature(surface, pts2)
        if surface.conformal_factor is not None:
            f = surface.factor_value(pts2)
            lap = _surface_laplacian(surface, pts2)
            K = np.exp(-2.0 * f) * (K - lap)
    else:
        if not surface.in_chart_domain(pts2):
            raise PointOffSurface("chart point outside parameter rectangle")
        if surface.name in ("flat_chart", "flat_torus"):
            # conformally flat: K = -exp(-2 f) Lap f (vectorized FD)
            if surface.conformal_factor is None:
                K = np.zeros(pts2.shape[0])
            else:
                f0 = surface.factor_value(pts2)
                h = 1e-5
                lap = np.zeros(pts2.shape[0])
                for ax in range(2):
                    e = np.zeros(2)
                    e[ax] = h
                    lap += (
                        surface.factor_value(pts2 + e)
                        - 2.0 * f0
                        + surface.factor_value(pts2 - e)
                    ) / h**2
                K = -np.exp(-2.0 * f0) * lap
        else:
            K = np.array([_brioschi(surface, uv) for uv in pts2])
    return float(K[0]) if single else K


def _levelset_curvature(surface: SurfaceModel, pts: np.ndarray) -> np.ndarray:
    g = surface.grad(pts)
    H = surface.hess(pts)
    adj = _adjugate3(H)
    num = np.einsum("...i,...ij,...j->...", g, adj, g)
    den = np.sum(g * g, axis=-1) ** 2
    return num / den


def _adjugate3(H: np.ndarray) -> np.ndarray:
    """Adjugate of a stack of 3x3 matrices (cofactor transpose)."""
    adj = np.empty_like(H)
    a, b, c = H[..., 0, 0], H[..., 0, 1], H[..., 0, 2]
    d, e, f = H[..., 1, 0], H[..., 1, 1], H[..., 1, 2]
    g, h, i = H[..., 2, 0], H[..., 2, 1], H[..., 2, 2]
    adj[..., 0, 0] = e * i - f * h
    adj[..., 0, 1] = c * h - b * i
    adj[..., 0, 2] = b * f - c * e
    adj[..., 1, 0] = f * g - d * i
    adj[..., 1, 1] = a * i - c * g
    adj[..., 1, 2] = c * d - a * f
    adj[..., 2, 0] = d * h - e * g
    adj[..., 2, 1] = b * g - a * h
    adj[..., 2, 2] = a * e - b * d
    return adj


def _surface_laplacian(surface: SurfaceModel, pts: np.ndarray, h: float = 1e-4):
    """Laplace-Beltrami of the conformal factor by projected second differences."""
    f0 = surface.factor_value(pts)
    lap = np.zeros(pts.shape[0])
    for i in range(pts.shape[0]):
        e1, e2, _ = surface.tangent_frame(pts[i])
        acc = 0.0
        for e in (e1, e2):
            fp = surface.factor_value(surface.project(pts[i] + h * e))
            fm = surface.factor_value(surface.project(pts[i] - h * e))
            acc += (fp - 2.0 * f0[i] + fm) / h**2
        lap[i] = acc
    return lap


def _brioschi(surface: SurfaceModel, uv: np.ndarray, h: float = 1e-4) -> float:
    """Gauss curvature of a chart metric via the Brioschi formula."""
    u, v = float(uv[0]), float(uv[1])

    def c(name, uu, vv):
        return float(surface._coeff(name, uu, vv))

    E, F, G = c("E", u, v), c("F", u, v), c("G", u, v)
    Eu = (c("E", u + h, v) - c("E", u - h, v)) / (2 * h)
    Ev = (c("E", u, v + h) - c("E", u, v - h)) / (2 * h)
    Gu = (c("G", u + h, v) - c("G", u - h, v)) / (2 * h)
    Gv = (c("G", u, v + h) - c("G", u, v - h)) / (2 * h)
    Fu = (c("F", u + h, v) - c("F", u - h, v)) / (2 * h)
    Fv = (c("F", u, v + h) - c("F", u, v - h)) / (2 * h)
    Evv = (c("E", u, v + h) - 2 * E + c("E", u, v - h)) / h**2
    Guu = (c("G", u + h, v) - 2 * G + c("G", u - h, v)) / h**2
    Fuv = (
        c("F", u + h, v + h)
        - c("F", u + h, v - h)
        - c("F", u - h, v + h)
        + c("F", u - h, v - h)
    ) / (4 * h**2)

    M1 = np.array(
        [
            [-0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev],
            [Fv - 0.5 * Gu, E, F],
            [0.5 * Gv, F, G],
        ]
    )
    M2 = np.array(
        [
            [0.0, 0.5 * Ev, 0.5 * Gu],
            [0.5 * Ev, E, F],
            [0.5 * Gu, F, G],
        ]
    )
    den = (E * G - F * F) ** 2
    return float((np.linalg.det(M1) - np.linalg.det(M2)) / den)


def christoffel_batch(surface: SurfaceModel, pts: np.ndarray, h: float = _FD_H):
    """Christoffel symbols at a batch of chart points, shape (n, 2, 2, 2).

    Coefficient derivatives are taken by vectorized central differences of
    the (conformally rescaled) E, F, G.
    """
    if surface.kind != "chart":
        raise ChartUnavailable("Christoffel symbols need a chart representation")
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    u, v = pts[:, 0], pts[:, 1]
    n = pts.shape[0]
    g = surface.chart_metric(pts)
    ginv = np.linalg.inv(g)
    # dg[:, c, a, b] = d g_{ab} / d x_c
    dg = np.empty((n, 2, 2, 2))
    for axis in range(2):
        up = (u + h, u) if axis == 0 else (u, u)
        um = (u - h, u) if axis == 0 else (u, u)
        vp = v + h if axis == 1 else v
        vm = v - h if axis == 1 else v
        E = (surface._coeff("E", up[0], vp) - surface._coeff("E", um[0], vm)) / (2 * h)
        F = (surface._coeff("F", up[0], vp) - surface._coeff("F", um[0], vm)) / (2 * h)
        G = (surface._coeff("G", up[0], vp) - surface._coeff("G", um[0], vm)) / (2 * h)
        dg[:, axis, 0, 0] = E
        dg[:, axis, 0, 1] = F
        dg[:, axis, 1, 0] = F
        dg[:, axis, 1, 1] = G
    # Gamma^c_{ab} = 1/2 g^{cd} (dg_a[d,b] + dg_b[d,a] - dg_d[a,b])
    gamma = np.empty((n, 2, 2, 2))
    for c in range(2):
        for a in range(2):
            for b in range(2):
                s = np.zeros(n)
                for d in range(2):
                    s += ginv[:, c, d] * (
                        dg[:, a, d, b] + dg[:, b, d, a] - dg[:, d, a, b]
                    )
                gamma[:, c, a, b] = 0.5 * s
    return gamma


def christoffel(surface: SurfaceModel, uv: np.ndarray) -> np.ndarray:
    """Christoffel symbols Gamma^c_{ab} of the chart metric, shape (2,2,2).

    Raises ChartUnavailable for level-set-only surfaces.
    """
    return christoffel_batch(surface, np.asarray(uv, dtype=float)[None])[0]


def chart_euclidean_deviation(surface: SurfaceModel, pts: np.ndarray) -> float:
    """sup |g - identity| over the sampled chart points.

    Diagnostic only: how close the working chart is to Euclidean.  The
    splitting construction assumes this is small but no quantitative gate
    is imposed.
    """
    g = surface.chart_metric(np.atleast_2d(np.asarray(pts, dtype=float)))
    return float(np.max(np.abs(g - np.eye(2))))


def conformal_geodesic_curvature(
    kappa: float, normal_derivative_f: float, f_value: float
) -> float:
    """Geodesic curvature after the conformal change g -> exp(2 f) g.

    Returns exp(-f) (kappa + df/dn), with the normal derivative taken along
    the same unit normal used to sign kappa.
    """
    return float(np.exp(-f_value) * (kappa + normal_derivative_f))
