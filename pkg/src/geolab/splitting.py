"""Vertex splitting by detour curves and conformal metric deformation.

To reduce the order of a vertex, one strand is replaced by a detour that
misses the vertex: a graphical bridge out of the strand, a geodesic chord
past the vertex, and a bridge back.  A conformal factor

    f(s, t) = -chi(t) * t * kappa(s) * psi(s)

in Fermi coordinates (arclength s along the detour, signed normal distance
t) then makes the detour a geodesic of exp(2 f) g: on the curve f = 0 and
df/dn = -kappa, so the conformally transformed curvature
exp(-f) (kappa + df/dn) vanishes.  The factor is supported in a tube of
half-width d0 around the bridges, which by construction stays clear of the
other strands and of an inner ball around the vertex, so the remaining
strands stay geodesics and the deformation composes across nested splits.

Vertices are worked on in a chart centered at the vertex in which all
strands are straight lines through the origin (synthetic flat charts
directly; the unit sphere via its analytic normal-coordinate chart).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bumps import plateau
from .errors import (
    ChartUnavailable,
    D0TooLarge,
    NotReducible,
    OffsetTooLarge,
    VertexNotOnStrand,
)
from .geodesics import GeodesicCurve, curve_from_samples, flow_chart
from .networks import GeodesicNetwork, VertexRecord, detect_vertices
from .surfaces import ConformalFactor, SurfaceModel, gauss_curvature

# geometry fractions of the working-ball radius R: bridges span
# [P, p] = [-0.8 R, -0.4 R] and [q, Q] = [0.4 R, 0.8 R] along the strand
OUTER_FRAC = 0.8
INNER_FRAC = 0.4


def _quintic(s0, s1, y0, dy0, ddy0, y1, dy1, ddy1):
    """Quintic Hermite coefficients on [s0, s1] matching value, first and
    second derivative at both ends (monomials in (s - s0)/(s1 - s0))."""
    h = s1 - s0
    A = np.zeros((6, 6))
    b = np.array([y0, dy0 * h, ddy0 * h * h, y1, dy1 * h, ddy1 * h * h])
    A[0, 0] = 1.0
    A[1, 1] = 1.0
    A[2, 2] = 2.0
    A[3] = 1.0
    A[4] = np.arange(6)
    A[5] = np.arange(6) * (np.arange(6) - 1)
    return np.linalg.solve(A, b), s0, h


def _eval_quintic(coeffs, s0, h, s, order=0):
    x = (np.asarray(s, dtype=float) - s0) / h
    p = np.polynomial.polynomial
    c = coeffs
    for _ in range(order):
        c = p.polyder(c)
    return p.polyval(x, c) / h**order


@dataclass
class DetourCurve:
    """Piecewise-analytic detour around a vertex, graphical over a strand.

    The strand is the line {V + s e_hat}; offsets u(s) are measured along
    the left normal n_left = rot90(e_hat).  The signed curvature convention
    (right-of-travel normal) gives kappa(s) = u''(s)/(1 + u'(s)^2)^(3/2)
    in a flat chart.
    """

    surface: SurfaceModel
    vertex_position: np.ndarray
    e_hat: np.ndarray
    n_left: np.ndarray
    curve_index: int
    ball_radius: float
    offset_t: float
    s_window: tuple  # (s_P, s_p, s_q, s_Q)
    bridge_in: tuple  # quintic data
    chord: tuple  # (coeffs as linear poly data) offsets of sigma as graph
    bridge_out: tuple
    flat: bool = True

    # -- graph offsets ----------------------------------------------------

    def offset(self, s, order=0):
        s = np.asarray(s, dtype=float)
        out = np.zeros_like(s)
        sP, sp, sq, sQ = self.s_window
        for lo, hi, piece in (
            (sP, sp, self.bridge_in),
            (sp, sq, self.chord),
            (sq, sQ, self.bridge_out),
        ):
            m = (s >= lo) & (s < hi)
            if m.any():
                out[m] = _eval_quintic(*piece, s[m], order=order)
        return out

    def position(self, s):
        s = np.asarray(s, dtype=float)
        u = self.offset(s)
        return (
            self.vertex_position
            + s[..., None] * self.e_hat
            + u[..., None] * self.n_left
        )

    def kappa(self, s):
        """Signed geodesic curvature wrt the right-of-travel normal."""
        du = self.offset(s, 1)
        ddu = self.offset(s, 2)
        k = ddu / (1.0 + du * du) ** 1.5
        if not self.flat:
            k = k + self._curved_correction(s)
        return k

    def _curved_correction(self, s):
        from .geodesics import _chart_curvature

        s = np.atleast_1d(np.asarray(s, dtype=float))
        h = 1e-5 * self.ball_radius
        pts = self.position(s)
        d1 = (self.position(s + h) - self.position(s - h)) / (2 * h)
        d2 = (self.position(s + h) - 2 * pts + self.position(s - h)) / h**2
        kap_full = _chart_curvature(self.surface, pts, d1, d2)
        du = self.offset(s, 1)
        ddu = self.offset(s, 2)
        return kap_full - ddu / (1.0 + du * du) ** 1.5

    # -- Fermi coordinates --------------------------------------------------

    def fermi(self, points, newton_iters: int = 4):
        """Exact foot point and signed normal distance (s, t) per point.

        t is measured along the right-of-travel normal, the same normal
        that signs ``kappa``.
        """
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        rel = pts - self.vertex_position
        s = rel @ self.e_hat
        for _ in range(newton_iters):
            c = self.position(s)
            d1 = self.e_hat + self.offset(s, 1)[:, None] * self.n_left
            d2 = self.offset(s, 2)[:, None] * self.n_left
            r = pts - c
            g1 = -np.sum(r * d1, axis=1)
            g2 = np.sum(d1 * d1, axis=1) - np.sum(r * d2, axis=1)
            s = s - g1 / g2
        c = self.position(s)
        d1 = self.e_hat + self.offset(s, 1)[:, None] * self.n_left
        tangent = d1 / np.linalg.norm(d1, axis=1, keepdims=True)
        n_right = np.stack([tangent[:, 1], -tangent[:, 0]], axis=1)
        t = np.sum((pts - c) * n_right, axis=1)
        return s, t

    def replace_in_samples(self, samples: np.ndarray) -> np.ndarray:
        """Map the strand's samples onto the detour inside the window."""
        rel = samples - self.vertex_position
        s = rel @ self.e_hat
        out = samples.copy()
        sP, _, _, sQ = self.s_window
        m = (s >= sP) & (s < sQ)
        out[m] = self.position(s[m])
        return out

    def min_distance_to_vertex(self, n_probe: int = 2001) -> float:
        sP, _, _, sQ = self.s_window
        s = np.linspace(sP, sQ, n_probe)
        d = np.linalg.norm(self.position(s) - self.vertex_position, axis=1)
        return float(d.min())

    def bridge_points(self, n_probe: int = 400) -> np.ndarray:
        sP, sp, sq, sQ = self.s_window
        s = np.concatenate(
            [np.linspace(sP, sp, n_probe), np.linspace(sq, sQ, n_probe)]
        )
        return self.position(s)


@dataclass
class ConformalFactorField:
    """The vertex-splitting factor f in Fermi coordinates of the detour."""

    base_curve: DetourCurve
    fermi_half_width: float  # d0
    tangential_cutoff: str
    normal_cutoff: str
    curvature_profile: np.ndarray  # kappa samples over the window
    working_ball: tuple  # (center, radius)
    psi_inner: float = 0.0
    psi_outer: float = 0.0

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.zeros(pts.shape[0])
        center, radius = self.working_ball
        r = np.linalg.norm(pts - center, axis=1)
        inside = r < radius
        if not inside.any():
            return out
        s, t = self.base_curve.fermi(pts[inside])
        d0 = self.fermi_half_width
        chi = plateau(t, d0 / 2.0, d0)
        psi = plateau(s, self.psi_inner, self.psi_outer)
        kap = self.base_curve.kappa(s)
        out[inside] = -chi * t * kap * psi
        return out

    def as_conformal_factor(self) -> ConformalFactor:
        center, radius = self.working_ball
        return ConformalFactor(
            value=self.evaluate,
            center=np.asarray(center, dtype=float),
            radius=float(radius),
            label="vertex-split",
        )

    def sup_norm(self, n_grid: int = 160) -> float:
        """max |f| over a dense grid of the support tube."""
        det = self.base_curve
        sP, sp, sq, sQ = det.s_window
        s = np.concatenate(
            [np.linspace(sP, sp, n_grid), np.linspace(sq, sQ, n_grid)]
        )
        t = np.linspace(-self.fermi_half_width, self.fermi_half_width, 41)
        pts = det.position(s)[:, None, :] + np.einsum(
            "j,ni->nji",
            t,
            _right_normals(det, s),
        )
        vals = np.abs(self.evaluate(pts.reshape(-1, 2)))
        return float(vals.max())


def _right_normals(det: DetourCurve, s):
    d1 = det.e_hat + det.offset(np.asarray(s, float), 1)[:, None] * det.n_left
    tangent = d1 / np.linalg.norm(d1, axis=1, keepdims=True)
    return np.stack([tangent[:, 1], -tangent[:, 0]], axis=1)


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


def detour_curvature_in(
    detour: DetourCurve, surface: SurfaceModel, s_values: np.ndarray
) -> np.ndarray:
    """Signed geodesic curvature of the detour in ``surface``'s metric.

    Uses the detour's analytic derivatives (no sampling noise), so this is
    an independent check of the conformal cancellation when ``surface``
    carries the splitting factor.
    """
    from .geodesics import _chart_curvature

    s = np.atleast_1d(np.asarray(s_values, dtype=float))
    pts = detour.position(s)
    d1 = detour.e_hat + detour.offset(s, 1)[:, None] * detour.n_left
    d2 = detour.offset(s, 2)[:, None] * detour.n_left
    # FD step scaled to the ball so coefficient differencing resolves the
    # factor's feature scale (d0 shrinks with the ball on nested splits)
    return _chart_curvature(surface, pts, d1, d2, fd_h=2e-6 * detour.ball_radius)


def _probe_grid(detour: DetourCurve, n: int = 401) -> np.ndarray:
    """Check points across the detour window, offset off the piece joints.

    The factor's s-derivative has the construction's inherent Lipschitz kink
    exactly at the joints (the bridges match the chord to second order
    only), so curvature checks probe generic points.
    """
    sP, _, _, sQ = detour.s_window
    i = np.arange(1, n + 1) + 0.381966
    return sP + (sQ - sP) * i / (n + 2)


def strand_curvature_in(
    curve: GeodesicCurve, surface: SurfaceModel, mask_radius=None, center=None
) -> np.ndarray:
    """Curvature of a straight-strand curve in ``surface``'s metric.

    For the synthetic line strands the base derivatives are exact, so any
    nonzero value measures conformal-factor leakage onto the strand.
    """
    from .geodesics import _chart_curvature

    samples = curve.samples
    if mask_radius is not None and center is not None:
        keep = np.linalg.norm(samples - np.asarray(center), axis=1) <= mask_radius
        samples = samples[keep]
    a = samples[0]
    b = samples[-1]
    d = (b - a) / np.linalg.norm(b - a)
    d1 = np.tile(d, (samples.shape[0], 1))
    d2 = np.zeros_like(d1)
    return _chart_curvature(surface, samples, d1, d2)


def default_ball_radius(
    surface: SurfaceModel, network: GeodesicNetwork, vertex: VertexRecord
) -> float:
    """min(0.2 x injectivity estimate, half distance to the nearest other
    vertex, a margin to the chart boundary)."""
    cands = []
    K_max = 0.0
    for cur in network.curves:
        stride = max(1, cur.n // 64)
        K = np.atleast_1d(gauss_curvature(surface, cur.samples[::stride]))
        K_max = max(K_max, float(K.max()))
    if K_max > 0:
        cands.append(0.2 * np.pi / np.sqrt(K_max))
    min_len = min(c.length for c in network.curves)
    cands.append(0.2 * 0.5 * min_len)
    others = [
        v for v in network.vertices if not np.allclose(v.position, vertex.position)
    ]
    if others:
        d = min(np.linalg.norm(v.position - vertex.position) for v in others)
        cands.append(0.5 * d)
    if surface.kind == "chart":
        u0, u1, v0, v1 = surface.chart_domain
        x, y = vertex.position
        cands.append(
            0.8
            * min(x - u0, u1 - x, y - v0, v1 - y)
        )
    return float(min(cands))


def build_detour(
    surface: SurfaceModel,
    network: GeodesicNetwork,
    vertex: VertexRecord,
    strand_id: int,
    offset_t: float,
    ball_radius: Optional[float] = None,
) -> DetourCurve:
    """Detour of one strand around the vertex.

    The curve agrees with the strand outside the working ball and is
    composed of a quintic bridge (C^2-matched to the strand and to the
    chord), the geodesic chord past the offset point, and a closing bridge.
    ``offset_t = 0`` degenerates to the identity.  Raises OffsetTooLarge
    when the offset is not small relative to the ball, VertexNotOnStrand
    for a bad strand id.
    """
    if surface.kind != "chart":
        raise ChartUnavailable(
            "vertex splitting works in a chart centered at the vertex"
        )
    if strand_id < 0 or strand_id >= len(vertex.strands):
        raise VertexNotOnStrand(f"strand {strand_id} not present at this vertex")
    R = float(ball_radius) if ball_radius else default_ball_radius(surface, network, vertex)
    if abs(offset_t) > 0.3 * INNER_FRAC * R:
        raise OffsetTooLarge(
            f"offset {offset_t} too large for ball radius {R} "
            f"(need |t| <= {0.3 * INNER_FRAC * R:.3g})"
        )
    ang = vertex.strand_angles[strand_id]
    e_hat = np.array([np.cos(ang), np.sin(ang)])
    n_left = np.array([-e_hat[1], e_hat[0]])
    curve_index = vertex.strands[strand_id][0]
    sP, sp, sq, sQ = -OUTER_FRAC * R, -INNER_FRAC * R, INNER_FRAC * R, OUTER_FRAC * R

    flat = surface.name in ("flat_chart", "flat_torus")
    if flat:
        # the chord p_t -> q is a straight segment: linear graph offsets
        slope = -offset_t / (sq - sp)
        chord_coeffs = np.array([offset_t, slope * (sq - sp), 0, 0, 0, 0], dtype=float)
        chord = (chord_coeffs, sp, sq - sp)
        dv_p, ddv_p = slope, 0.0
        dv_q, ddv_q = slope, 0.0
    else:
        chord, dv_p, ddv_p, dv_q, ddv_q = _curved_chord(
            surface, vertex.position, e_hat, n_left, sp, sq, offset_t
        )
    bridge_in = _quintic(sP, sp, 0.0, 0.0, 0.0, offset_t, dv_p, ddv_p)
    bridge_out = _quintic(sq, sQ, 0.0, dv_q, ddv_q, 0.0, 0.0, 0.0)
    return DetourCurve(
        surface=surface,
        vertex_position=np.asarray(vertex.position, dtype=float),
        e_hat=e_hat,
        n_left=n_left,
        curve_index=curve_index,
        ball_radius=R,
        offset_t=float(offset_t),
        s_window=(sP, sp, sq, sQ),
        bridge_in=bridge_in,
        chord=chord,
        bridge_out=bridge_out,
        flat=flat,
    )


def _curved_chord(surface, V, e_hat, n_left, sp, sq, t):
    """Geodesic chord from p_t to q in a curved chart, as graph offsets.

    One-parameter shooting from p_t: Newton on the launch angle so the
    geodesic hits q; offsets and end derivatives are read off the path.
    """
    p_t = V + sp * e_hat + t * n_left
    q = V + sq * e_hat
    gap = np.linalg.norm(q - p_t)

    def endpoint_miss(angle, L):
        d = np.cos(angle) * e_hat + np.sin(angle) * n_left
        g = surface.chart_metric(p_t)
        d = d / np.sqrt(d @ g @ d)
        x1, v1, path = flow_chart(surface, p_t, d, L, n_steps=256, store_path=True)
        return x1 - q, path

    angle = float(np.arctan2(-t, sq - sp))
    L = gap
    for _ in range(30):
        miss, path = endpoint_miss(angle, L)
        if np.linalg.norm(miss) < 1e-12 * max(1.0, gap):
            break
        eps = 1e-7
        J = np.empty((2, 2))
        J[:, 0] = (endpoint_miss(angle + eps, L)[0] - miss) / eps
        J[:, 1] = (endpoint_miss(angle, L + eps)[0] - miss) / eps
        da, dL = np.linalg.solve(J, -miss)
        angle += float(np.clip(da, -0.3, 0.3))
        L += float(np.clip(dL, -0.3 * gap, 0.3 * gap))
    rel = path - V
    s_vals = rel @ e_hat
    v_vals = rel @ n_left
    # quintic fit of the graph offsets (geodesic chords are smooth graphs)
    coeffs = np.polynomial.polynomial.polyfit(
        (s_vals - sp) / (sq - sp), v_vals, 5
    )
    chord = (coeffs, sp, sq - sp)
    dv = np.polynomial.polynomial.polyder(coeffs)
    ddv = np.polynomial.polynomial.polyder(dv)
    pv = np.polynomial.polynomial.polyval
    h = sq - sp
    return (
        chord,
        pv(0.0, dv) / h,
        pv(0.0, ddv) / h**2,
        pv(1.0, dv) / h,
        pv(1.0, ddv) / h**2,
    )


def conformal_factor_for(
    detour: DetourCurve,
    surface: SurfaceModel,
    d0: Optional[float] = None,
    other_strand_points: Optional[np.ndarray] = None,
) -> ConformalFactorField:
    """Conformal factor making the detour a geodesic of exp(2 f) g.

    ``d0`` defaults to half the minimum distance from the bridges to the
    other strands; an explicit value that would let the support tube touch
    another strand raises D0TooLarge.
    """
    bridges = detour.bridge_points()
    if other_strand_points is not None and other_strand_points.size:
        dmin = float(
            np.min(
                np.linalg.norm(
                    bridges[:, None, :] - other_strand_points[None, :, :], axis=2
                )
            )
        )
    else:
        dmin = INNER_FRAC * detour.ball_radius
    if d0 is None:
        d0 = 0.5 * dmin
    if d0 > 0.5 * dmin + 1e-15:
        raise D0TooLarge(
            f"d0 = {d0:.3g} exceeds half the bridge clearance {dmin:.3g}"
        )
    sP, sp, sq, sQ = detour.s_window
    R = detour.ball_radius
    s_probe = np.linspace(sP, sQ, 801)
    return ConformalFactorField(
        base_curve=detour,
        fermi_half_width=float(d0),
        tangential_cutoff=f"plateau(|s|; {0.85 * R:.4g}, {0.95 * R:.4g})",
        normal_cutoff=f"plateau(|t|; {d0 / 2:.4g}, {d0:.4g})",
        curvature_profile=detour.kappa(s_probe),
        working_ball=(detour.vertex_position.copy(), R),
        psi_inner=0.85 * R,
        psi_outer=0.95 * R,
    )


def split_vertex(
    surface: SurfaceModel,
    network: GeodesicNetwork,
    vertex: VertexRecord,
    offset_t: Optional[float] = None,
    d0: Optional[float] = None,
    ball_radius: Optional[float] = None,
    clustering_radius: Optional[float] = None,
):
    """One splitting step: detour the lowest-index strand of the vertex.

    Returns (new_surface, new_network, step_record).  The new network has
    the vertex at order d-1 plus d-1 transverse order-2 vertices along the
    detour; the metric is unchanged outside the working ball.  Raises
    NotReducible for order < 3.
    """
    if vertex.order < 3:
        raise NotReducible("vertex already has order 2")
    R = ball_radius or default_ball_radius(surface, network, vertex)
    t = offset_t if offset_t is not None else 0.1 * R
    detour = build_detour(surface, network, vertex, 0, t, ball_radius=R)

    ci = detour.curve_index
    others = np.vstack(
        [c.samples for j, c in enumerate(network.curves) if j != ci]
    )
    near = np.linalg.norm(others - detour.vertex_position, axis=1) < 2.0 * R
    field = conformal_factor_for(detour, surface, d0, others[near])

    kappa_before = float(np.max(np.abs(field.curvature_profile)))
    new_surface = surface.with_conformal_factor(field.as_conformal_factor())
    kappa_after = float(
        np.max(np.abs(detour_curvature_in(detour, new_surface, _probe_grid(detour))))
    )

    new_curves = list(network.curves)
    old = network.curves[ci]
    new_samples = detour.replace_in_samples(old.samples)
    new_curves[ci] = curve_from_samples(
        new_surface, new_samples, closed=old.closed, primitive=old.primitive
    )
    radius = clustering_radius or min(network.clustering_radius, 0.1 * t)
    # detection runs on copies refined near the ball and near every prior
    # vertex (all intersection events live there); the stored curves keep
    # their uniform sampling for the differential machinery
    windows = [(detour.vertex_position, 3.0 * R)] + [
        (v.position, 25.0 * radius) for v in network.vertices
    ]
    det_curves = [
        _locally_refined(c, windows, radius / 5.0, new_surface) for c in new_curves
    ]
    verts = detect_vertices(
        det_curves, radius, network.angle_threshold, surface=new_surface
    )
    new_network = GeodesicNetwork(
        new_curves, verts, new_surface, radius, network.angle_threshold
    )
    from .surfaces import chart_euclidean_deviation

    probe = detour.position(np.linspace(-0.9 * R, 0.9 * R, 33))
    step = {
        "vertex": [float(x) for x in vertex.position],
        "strand_id": 0,
        "offset_t": float(t),
        "ball_radius": float(R),
        "chart_flatness": chart_euclidean_deviation(surface, probe),
        "d0": float(field.fermi_half_width),
        "max_f": field.sup_norm(),
        "curvature_residual_before": kappa_before,
        "curvature_residual_after": kappa_after,
        "vertex_orders_after": sorted(v.order for v in verts),
    }
    return new_surface, new_network, step


def _locally_refined(
    curve: GeodesicCurve, windows, spacing: float, surface
) -> GeodesicCurve:
    """Detection-only copy with extra samples inside the given balls.

    ``windows`` is a list of (center, radius) pairs.  The result is
    non-uniformly sampled and carries no speed data; vertex detection works
    on chord arclength so this is all it needs.
    """
    pts = curve.samples
    near = np.zeros(pts.shape[0], dtype=bool)
    for center, window in windows:
        center = np.asarray(center, dtype=float)
        near |= np.linalg.norm(pts - center, axis=1) < window
    pieces = []
    n = pts.shape[0]
    last = n if curve.closed else n - 1
    for k in range(last):
        a = pts[k]
        b = pts[(k + 1) % n]
        pieces.append(a[None])
        if near[k] or near[(k + 1) % n]:
            seg = np.linalg.norm(b - a)
            extra = int(seg // spacing)
            if extra > 0:
                lam = (np.arange(1, extra + 1) / (extra + 1))[:, None]
                pieces.append(a[None] * (1 - lam) + b[None] * lam)
    if not curve.closed:
        pieces.append(pts[-1][None])
    refined = np.vstack(pieces)
    return GeodesicCurve(
        samples=refined,
        speeds=np.empty(0),
        length=curve.length,
        closure_residual=curve.closure_residual,
        surface=surface,
        primitive=curve.primitive,
        cover_multiplicity=curve.cover_multiplicity,
        closed=curve.closed,
        extra={"detection_only": True},
    )


def reduce_vertex_fully(
    surface: SurfaceModel,
    network: GeodesicNetwork,
    vertex: VertexRecord,
    offset_frac: float = 0.1,
):
    """Split until every descendant of the vertex has order 2.

    Returns (surface, network, transcript).  Each round works in a smaller
    ball that avoids the previous detours, where the metric is still the
    original one.
    """
    transcript = []
    current = vertex
    while current.order >= 3:
        R = default_ball_radius(surface, network, current)
        # stay clear of every curve not through the current vertex location
        through = [ci for ci, _ in current.strands]
        for j, cur in enumerate(network.curves):
            if j in through:
                continue
            d = np.min(np.linalg.norm(cur.samples - current.position, axis=1))
            R = min(R, 0.8 * d)
        surface, network, step = split_vertex(
            surface, network, current, offset_t=offset_frac * R, ball_radius=R
        )
        transcript.append(step)
        current = _find_vertex_near(network, step["vertex"])
        if current is None:
            break
    return surface, network, transcript


def _find_vertex_near(network: GeodesicNetwork, position):
    position = np.asarray(position, dtype=float)
    best, best_d = None, np.inf
    for v in network.vertices:
        d = np.linalg.norm(v.position - position)
        if d < best_d:
            best, best_d = v, d
    if best is not None and best_d <= 4.0 * network.clustering_radius:
        return best
    return None
