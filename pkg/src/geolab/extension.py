"""Ambient extension of normal fields over networks with order-2 crossings.

A scalar profile phi along each curve prescribes the normal field
phi(s) n(s).  Away from crossings the field extends into a tube by parallel
transport along the normal geodesics (so the restriction is exact and the
normal derivative vanishes on the curve).  At a transverse crossing the two
prescribed values generally disagree as ambient vectors; adding the right
tangential vector to each strand makes them agree: the two affine lines

    L_k = { X_k + t T_k : t in R },   k = 0, 1

meet in a unique point by transversality, and the cross-extension formula
U(x, y) = u(x, 0) + u(0, y) - u(0, 0) extends the corrected strand values
over the crossing ball.  Radial cutoffs blend the ball fields into the tube
field, so tangential components and normal derivatives are supported only
inside the crossing balls.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .bumps import plateau
from .errors import EtaTooLarge, FlowLeftSurface, NotGPlus, OriginMismatch
from .geodesics import GeodesicCurve, curve_length, periodic_derivative, require_geodesic
from .jacobi import second_variation
from .networks import GeodesicNetwork, is_g_plus
from .surfaces import SurfaceModel


def cross_extension(u_axis1: Callable, u_axis2: Callable) -> Callable:
    """Extend axis data over the plane: U(x, y) = u1(x) + u2(y) - u1(0).

    The restriction to either axis reproduces the input exactly, and every
    partial derivative of U equals one of the axis derivatives pointwise.
    Raises OriginMismatch when u1(0) differs from u2(0) beyond 1e-12.
    """
    u10 = np.asarray(u_axis1(0.0), dtype=float)
    u20 = np.asarray(u_axis2(0.0), dtype=float)
    if np.max(np.abs(u10 - u20)) > 1e-12:
        raise OriginMismatch(
            f"axis values at the crossing differ by {np.max(np.abs(u10 - u20)):.2e}"
        )

    def U(x, y):
        return np.asarray(u_axis1(x), dtype=float) + np.asarray(
            u_axis2(y), dtype=float
        ) - u10

    return U


# ---------------------------------------------------------------------------
# per-curve geometry caches
# ---------------------------------------------------------------------------


class _CurveFrame:
    """Nearest-point queries plus tangent/normal frames along one curve."""

    def __init__(self, curve: GeodesicCurve, surface: SurfaceModel):
        self.curve = curve
        self.surface = surface
        n = curve.n
        self.ds = curve.length / n
        dtheta = 2 * np.pi / n
        d1 = periodic_derivative(curve.samples, dtheta)
        self.T = d1 / np.linalg.norm(d1, axis=1, keepdims=True)
        N = surface.unit_normal(curve.samples)
        self.normals = np.cross(N, self.T)
        self.tree = cKDTree(curve.samples)

    def nearest(self, pts: np.ndarray):
        """Foot data: (arclength s, distance d, foot point, index)."""
        pts = np.atleast_2d(pts)
        idx = self.tree.query(pts)[1]
        n = self.curve.n
        best_d = np.full(pts.shape[0], np.inf)
        best_s = np.zeros(pts.shape[0])
        best_foot = np.zeros_like(pts)
        for off in (-1, 0):
            a = self.curve.samples[(idx + off) % n]
            b = self.curve.samples[(idx + off + 1) % n]
            ab = b - a
            denom = np.sum(ab * ab, axis=1)
            t = np.clip(np.sum((pts - a) * ab, axis=1) / denom, 0.0, 1.0)
            foot = a + t[:, None] * ab
            d = np.linalg.norm(pts - foot, axis=1)
            better = d < best_d
            best_d[better] = d[better]
            best_foot[better] = foot[better]
            best_s[better] = ((idx + off)[better] + t[better]) * self.ds
        return best_s % self.curve.length, best_d, best_foot, idx

    def interp(self, values: np.ndarray, s: np.ndarray) -> np.ndarray:
        """Periodic linear interpolation of per-sample data at arclength s."""
        x = (np.asarray(s) % self.curve.length) / self.ds
        i0 = np.floor(x).astype(int) % self.curve.n
        lam = (x - np.floor(x))[..., None] if values.ndim > 1 else x - np.floor(x)
        i1 = (i0 + 1) % self.curve.n
        return values[i0] * (1 - lam) + values[i1] * lam


@dataclass
class AmbientField:
    """Evaluable ambient vector field extending per-curve normal fields."""

    network: GeodesicNetwork
    frames: List[_CurveFrame]
    phis: List[np.ndarray]
    eta: float
    tube_radius: float
    crossing_data: list
    support_description: str = ""

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        return self.evaluation(pts)

    def evaluation(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        surface = self.network.ambient_surface
        out = np.zeros_like(pts)
        Nx = surface.unit_normal(pts)
        Z = np.zeros_like(pts)
        for fr, phi in zip(self.frames, self.phis):
            s, d, foot, _ = fr.nearest(pts)
            cut = plateau(d, self.tube_radius / 2.0, self.tube_radius)
            live = cut > 0
            if not live.any():
                continue
            phi_s = fr.interp(phi, s[live])
            n_s = fr.interp(fr.normals, s[live])
            rel = pts[live] - foot[live]
            side = np.sum(rel * n_s, axis=1)
            tang = rel - np.sum(rel * Nx[live], axis=1, keepdims=True) * Nx[live]
            norm = np.linalg.norm(tang, axis=1)
            transported = n_s.copy()
            far = norm > 1e-9
            transported[far] = (
                np.sign(side[far])[:, None] * tang[far] / norm[far][:, None]
            )
            Z[live] += (cut[live] * phi_s)[:, None] * transported
        out = Z
        for data in self.crossing_data:
            r = np.linalg.norm(pts - data["position"], axis=1)
            psi = plateau(r, 5.0 * self.eta / 8.0, 7.0 * self.eta / 8.0)
            live = psi > 0
            if not live.any():
                continue
            Y = self._crossing_field(data, pts[live], Nx[live])
            out[live] = out[live] + psi[live][:, None] * (Y - out[live])
        # the field is tangent along the curves; keep it tangent everywhere
        out -= np.sum(out * Nx, axis=1, keepdims=True) * Nx
        return out

    def _crossing_field(self, data, pts, Nx):
        w = pts - data["position"]
        w = w - np.sum(w * data["N_vertex"], axis=1, keepdims=True) * data["N_vertex"]
        coords = np.einsum("ij,nj->ni", data["dual"], w)
        U = data["U"]
        return U(coords[:, 0], coords[:, 1])


def _axis_function(fr: _CurveFrame, phi, t_corr, s_vertex, proj_coord_of_ds, shift):
    """Y-values along one strand as a function of its axis coordinate.

    ``shift`` is the constant that pins the strand value at the crossing to
    the common line-intersection point (it absorbs the lstsq residual left
    by sample-level curvature, a few 1e-10).
    """

    coord_grid, ds_grid = proj_coord_of_ds

    def u(c):
        c = np.atleast_1d(np.asarray(c, dtype=float))
        dseff = np.interp(c, coord_grid, ds_grid)
        s = s_vertex + dseff
        phi_s = fr.interp(phi, s)
        n_s = fr.interp(fr.normals, s)
        T_s = fr.interp(fr.T, s)
        vals = phi_s[:, None] * n_s + t_corr * T_s + shift
        return vals if vals.shape[0] > 1 else vals[0]

    return u


def extend_normal_field(
    network: GeodesicNetwork,
    normal_fields: Sequence,
    delta: float,
    eta: Optional[float] = None,
) -> AmbientField:
    """Ambient field whose normal part along each curve is the given profile.

    ``normal_fields`` holds one scalar profile per curve: a constant, an
    array on the curve's sample grid, or a callable of arclength.  ``delta``
    bounds the total curve length where tangential parts and normal
    derivatives may live; ``eta`` (crossing-ball radius) defaults to a value
    realizing that bound and must stay below half the minimum inter-vertex
    distance.
    """
    if not is_g_plus(network):
        raise NotGPlus("extension requires transverse order-2 crossings only")
    surface = network.ambient_surface
    curves = network.curves
    frames = [_CurveFrame(c, surface) for c in curves]
    phis = []
    for c, spec in zip(curves, normal_fields):
        if callable(spec):
            s = np.arange(c.n) * (c.length / c.n)
            phis.append(np.asarray(spec(s), dtype=float))
        else:
            phis.append(np.broadcast_to(np.asarray(spec, dtype=float), (c.n,)).copy())

    verts = network.vertices
    if verts:
        if len(verts) > 1:
            pos = np.array([v.position for v in verts])
            dmin = min(
                np.linalg.norm(pos[i] - pos[j])
                for i in range(len(pos))
                for j in range(i + 1, len(pos))
            )
        else:
            dmin = min(c.length for c in curves) / 4.0
        if eta is None:
            eta = min(delta / (4.0 * len(verts)), 0.45 * dmin)
        if eta >= 0.5 * dmin:
            raise EtaTooLarge(
                f"eta = {eta:.3g} >= half the minimum inter-vertex distance "
                f"{0.5 * dmin:.3g}"
            )
    else:
        eta = eta or 0.0

    theta_min = np.pi / 2
    for v in verts:
        d = abs(v.strand_angles[0] - v.strand_angles[1]) % np.pi
        theta_min = min(theta_min, min(d, np.pi - d))
    tube_radius = 0.2 * min(c.length for c in curves)
    if verts:
        tube_radius = min(tube_radius, 0.45 * (5.0 * eta / 8.0) * np.sin(theta_min))

    crossing_data = []
    for v in verts:
        (c0, s0), (c1, s1) = v.strands
        fr0, fr1 = frames[c0], frames[c1]
        T0 = fr0.interp(fr0.T, np.array([s0]))[0]
        T1 = fr1.interp(fr1.T, np.array([s1]))[0]
        n0 = fr0.interp(fr0.normals, np.array([s0]))[0]
        n1 = fr1.interp(fr1.normals, np.array([s1]))[0]
        X0 = fr0.interp(phis[c0], np.array([s0]))[0] * n0
        X1 = fr1.interp(phis[c1], np.array([s1]))[0] * n1
        # unique intersection of the two affine lines X_k + t T_k
        A = np.stack([T0, -T1], axis=1)
        t01, *_ = np.linalg.lstsq(A, X1 - X0, rcond=None)
        t0, t1 = float(t01[0]), float(t01[1])
        N_vertex = surface.unit_normal(v.position)
        G = np.array([[T0 @ T0, T0 @ T1], [T1 @ T0, T1 @ T1]])
        dual = np.linalg.solve(G, np.stack([T0, T1]))
        # axis-coordinate <-> arclength tables per strand (sorted for interp)
        grids = []
        for axis, (fr, s_v) in enumerate(((fr0, s0), (fr1, s1))):
            ds_grid = np.linspace(-2.0 * eta, 2.0 * eta, 129)
            q = fr.interp(fr.curve.samples, s_v + ds_grid)
            wq = q - v.position
            wq -= np.sum(wq * N_vertex, axis=1, keepdims=True) * N_vertex
            coords = np.einsum("ij,nj->ni", dual, wq)[:, axis]
            order = np.argsort(coords)
            grids.append((coords[order], ds_grid[order]))
        v_cross = X0 + t0 * T0
        zero3 = np.zeros(3)
        u0_raw = _axis_function(fr0, phis[c0], t0, s0, grids[0], zero3)
        u1_raw = _axis_function(fr1, phis[c1], t1, s1, grids[1], zero3)
        u0 = _axis_function(fr0, phis[c0], t0, s0, grids[0], v_cross - u0_raw(0.0))
        u1 = _axis_function(fr1, phis[c1], t1, s1, grids[1], v_cross - u1_raw(0.0))
        U = cross_extension(u0, u1)
        crossing_data.append(
            {
                "position": np.asarray(v.position, dtype=float),
                "N_vertex": N_vertex,
                "dual": dual,
                "U": U,
                "t_corrections": (t0, t1),
            }
        )

    support = 0.0
    for v in verts:
        for ci, _ in v.strands:
            c = curves[ci]
            inside = np.linalg.norm(c.samples - v.position, axis=1) <= 7 * eta / 8
            support += inside.sum() * (c.length / c.n)

    fieldobj = AmbientField(
        network=network,
        frames=frames,
        phis=phis,
        eta=float(eta),
        tube_radius=float(tube_radius),
        crossing_data=crossing_data,
        support_description=(
            f"tubes of radius {tube_radius:.3g} around {len(curves)} curves; "
            f"{len(verts)} crossing balls of radius {eta:.3g}"
        ),
    )
    fieldobj.support_measure = float(support)
    fieldobj.delta = float(delta)
    return fieldobj


class SumField:
    """Pointwise sum of ambient fields (for tangential perturbations and
    Gram-matrix polarization)."""

    def __init__(self, *fields):
        self.fields = fields

    def __call__(self, pts):
        return sum(f(pts) for f in self.fields)


class TangentialField:
    """Pure tangential field along a network, for invariance checks."""

    def __init__(self, network: GeodesicNetwork, profiles, tube_radius=0.2):
        self.surface = network.ambient_surface
        self.frames = [_CurveFrame(c, self.surface) for c in network.curves]
        self.profiles = []
        for c, spec in zip(network.curves, profiles):
            if callable(spec):
                s = np.arange(c.n) * (c.length / c.n)
                self.profiles.append(np.asarray(spec(s), dtype=float))
            else:
                self.profiles.append(
                    np.broadcast_to(np.asarray(spec, dtype=float), (c.n,)).copy()
                )
        self.tube_radius = tube_radius

    def __call__(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        out = np.zeros_like(pts)
        Nx = self.surface.unit_normal(pts)
        for fr, prof in zip(self.frames, self.profiles):
            s, d, foot, _ = fr.nearest(pts)
            cut = plateau(d, self.tube_radius / 2.0, self.tube_radius)
            live = cut > 0
            if not live.any():
                continue
            T_s = fr.interp(fr.T, s[live])
            T_s -= np.sum(T_s * Nx[live], axis=1, keepdims=True) * Nx[live]
            out[live] += (cut[live] * fr.interp(prof, s[live]))[:, None] * T_s
        return out


# ---------------------------------------------------------------------------
# flow verification
# ---------------------------------------------------------------------------


def flow_network_length(
    network: GeodesicNetwork,
    ambient_field,
    t: float,
    n_substeps: int = 8,
    drift_tol: float = 1e-3,
) -> float:
    """Total network length after flowing every curve by the field for time t."""
    surface = network.ambient_surface
    total = 0.0
    for c in network.curves:
        pts = c.samples.copy()
        if t != 0.0:
            h = t / n_substeps
            for _ in range(n_substeps):
                k1 = ambient_field(pts)
                k2 = ambient_field(pts + 0.5 * h * k1)
                k3 = ambient_field(pts + 0.5 * h * k2)
                k4 = ambient_field(pts + h * k3)
                pts = pts + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
                drift = np.max(np.abs(surface.level(pts)))
                if drift > drift_tol * max(1.0, surface.diameter()):
                    raise FlowLeftSurface(f"|F| = {drift:.2e} before reprojection")
                pts = surface.project(pts)
        total += curve_length(pts, surface, closed=c.closed)
    return total


def verify_second_variation_match(
    network: GeodesicNetwork,
    normal_fields: Sequence,
    ambient_field,
    flow_step: float = 0.01,
    n_substeps: int = 8,
) -> dict:
    """Quadratic form vs. finite-difference second derivative of length.

    Q_Gamma(X, X) is the per-curve quadrature of the geodesic second
    variation; the flow value is the centered second difference of total
    network length under the ambient flow.  Returns both with their
    relative error.
    """
    Q_form = 0.0
    for c, spec in zip(network.curves, normal_fields):
        require_geodesic(c, network.ambient_surface)
        if callable(spec):
            s = np.arange(c.n) * (c.length / c.n)
            phi = np.asarray(spec(s), dtype=float)
        else:
            phi = np.broadcast_to(np.asarray(spec, dtype=float), (c.n,)).copy()
        Q_form += second_variation(c, phi, phi, network.ambient_surface)

    h = flow_step
    L0 = flow_network_length(network, ambient_field, 0.0, n_substeps)
    Lp = flow_network_length(network, ambient_field, h, n_substeps)
    Lm = flow_network_length(network, ambient_field, -h, n_substeps)
    Q_flow = (Lp - 2.0 * L0 + Lm) / h**2
    scale = max(abs(Q_form), 1e-12)
    report = {
        "Q_form": float(Q_form),
        "Q_flow": float(Q_flow),
        "rel_error": float(abs(Q_form - Q_flow) / scale),
        "abs_error": float(abs(Q_form - Q_flow)),
        "flow_step": float(h),
        "total_length": float(L0),
    }
    if isinstance(ambient_field, AmbientField):
        report["support_measure"] = float(ambient_field.support_measure)
        report["delta"] = float(ambient_field.delta)
        report["eta"] = float(ambient_field.eta)
    return report


def flow_gram_matrix(
    network: GeodesicNetwork,
    ambient_fields: Sequence,
    flow_step: float = 0.01,
    n_substeps: int = 8,
) -> np.ndarray:
    """Finite-difference Gram matrix of the length form on extended fields.

    Off-diagonal entries come from the polarization identity
    Q(X, Y) = (Q(X+Y) - Q(X) - Q(Y)) / 2.
    """

    def q(fieldobj):
        h = flow_step
        L0 = flow_network_length(network, fieldobj, 0.0, n_substeps)
        Lp = flow_network_length(network, fieldobj, h, n_substeps)
        Lm = flow_network_length(network, fieldobj, -h, n_substeps)
        return (Lp - 2.0 * L0 + Lm) / h**2

    k = len(ambient_fields)
    diag = [q(f) for f in ambient_fields]
    G = np.diag(diag)
    for i in range(k):
        for j in range(i + 1, k):
            qij = q(SumField(ambient_fields[i], ambient_fields[j]))
            G[i, j] = G[j, i] = 0.5 * (qij - diag[i] - diag[j])
    return G
