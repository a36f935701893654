"""Geodesic integration, closed-geodesic shooting, lengths and curvature.

The integrator is a classical fixed-step RK4 on (position, velocity).  On a
level set F = 0 the geodesic equation reads gamma'' = lambda grad F with
lambda = -(gamma'^T Hess F gamma')/|grad F|^2; every step re-projects the
point onto the surface and renormalizes the tangential speed, which keeps
the constraint and energy drift at roundoff level.  All level-set routines
are batched over a leading seed axis so parameter sweeps stay in numpy.

Closed geodesics are found by Gauss-Newton shooting.  The unknowns are
(transversal base-point offset, initial direction angle, period); the
residual is the position mismatch in the tangent frame at the base point
plus the direction-angle mismatch.  Restricting the base-point motion to a
direction transverse to the seed velocity removes the reparametrization
kernel.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from .errors import (
    DegenerateJacobian,
    LeftChartDomain,
    NoConvergence,
    NotAGeodesic,
    StepTooLarge,
)
from .surfaces import SurfaceModel, christoffel

DEFAULT_STEPS = 4096
GEODESIC_KAPPA_TOL = 1e-6


@dataclass
class GeodesicCurve:
    """Closed constant-speed curve stored as dense samples.

    Samples are uniform in the circle parameter theta in [0, 2 pi); for an
    accepted geodesic the speed |gamma'| equals length / (2 pi) at every
    sample.  Covers are represented by ``cover_multiplicity`` on the
    primitive parametrization rather than by resampled loops.
    """

    samples: np.ndarray
    speeds: np.ndarray
    length: float
    closure_residual: float
    surface: SurfaceModel
    primitive: bool = True
    cover_multiplicity: int = 1
    closed: bool = True
    extra: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    def to_record(self) -> dict:
        return {
            "length": self.length,
            "closure_residual": self.closure_residual,
            "cover_multiplicity": self.cover_multiplicity,
            "primitive": self.primitive,
            "n_samples": int(self.n),
        }


# ---------------------------------------------------------------------------
# derivatives of uniformly sampled curves
# ---------------------------------------------------------------------------


def periodic_derivative(values: np.ndarray, spacing: float, order: int = 1):
    """4th-order central differences of periodic samples along axis 0."""
    v = np.asarray(values, dtype=float)
    if order == 1:
        out = (
            -np.roll(v, -2, axis=0)
            + 8 * np.roll(v, -1, axis=0)
            - 8 * np.roll(v, 1, axis=0)
            + np.roll(v, 2, axis=0)
        ) / (12.0 * spacing)
    elif order == 2:
        out = (
            -np.roll(v, -2, axis=0)
            + 16 * np.roll(v, -1, axis=0)
            - 30 * v
            + 16 * np.roll(v, 1, axis=0)
            - np.roll(v, 2, axis=0)
        ) / (12.0 * spacing**2)
    else:
        raise ValueError("order must be 1 or 2")
    return out


def open_derivative(values: np.ndarray, spacing: float, order: int = 1):
    """Centered differences with one-sided ends for open curves."""
    v = np.asarray(values, dtype=float)
    if order == 1:
        return np.gradient(v, spacing, axis=0, edge_order=2)
    d1 = np.gradient(v, spacing, axis=0, edge_order=2)
    return np.gradient(d1, spacing, axis=0, edge_order=2)


def curve_speeds(samples: np.ndarray, surface: SurfaceModel, closed: bool = True):
    """|gamma'| per sample in the surface metric, parameter spacing 2 pi / n."""
    samples = np.asarray(samples, dtype=float)
    n = samples.shape[0]
    dtheta = 2 * np.pi / n if closed else 2 * np.pi / (n - 1)
    deriv = (
        periodic_derivative(samples, dtheta)
        if closed
        else open_derivative(samples, dtheta)
    )
    if surface.kind == "levelset":
        sp = np.linalg.norm(deriv, axis=1)
        if surface.conformal_factor is not None:
            sp = sp * np.exp(surface.factor_value(samples))
    else:
        g = surface.chart_metric(samples)
        sp = np.sqrt(np.einsum("ni,nij,nj->n", deriv, g, deriv))
    return sp, dtheta


def curve_length(curve_or_samples, surface: Optional[SurfaceModel] = None, closed=True):
    """Length by composite quadrature of |gamma'|.

    Periodic curves use the trapezoid rule on the uniformly sampled speed
    (spectrally accurate for smooth closed curves, so better than the
    required 4th order); open curves use Simpson.
    """
    if isinstance(curve_or_samples, GeodesicCurve):
        samples = curve_or_samples.samples
        surface = surface or curve_or_samples.surface
        closed = curve_or_samples.closed
    else:
        samples = np.asarray(curve_or_samples, dtype=float)
    sp, dtheta = curve_speeds(samples, surface, closed)
    if closed:
        return float(sp.sum() * dtheta)
    from scipy.integrate import simpson

    return float(simpson(sp, dx=dtheta))


# ---------------------------------------------------------------------------
# level-set integrator (batched RK4)
# ---------------------------------------------------------------------------


def _accel_levelset(surface: SurfaceModel, P: np.ndarray, V: np.ndarray):
    g = surface.grad(P)
    H = surface.hess(P)
    vHv = np.einsum("...i,...ij,...j->...", V, H, V)
    gg = np.sum(g * g, axis=-1)
    a = (-vHv / gg)[..., None] * g
    if surface.conformal_factor is not None:
        a = a + _conformal_accel(surface, P, V)
    return a


def _conformal_accel(surface: SurfaceModel, P: np.ndarray, V: np.ndarray, h=1e-5):
    """Tangential correction -2 df(V) V + |V|^2 grad_s f for exp(2f) metrics."""
    grad_f = np.zeros_like(P)
    n = surface.unit_normal(P)
    e1 = np.cross(n, np.broadcast_to([1.0, 0.0, 0.0], n.shape))
    bad = np.linalg.norm(e1, axis=-1) < 0.1
    if bad.any():
        e1[bad] = np.cross(n[bad], [0.0, 1.0, 0.0])
    e1 /= np.linalg.norm(e1, axis=-1, keepdims=True)
    e2 = np.cross(n, e1)
    for e in (e1, e2):
        fp = surface.factor_value(surface.project(P + h * e))
        fm = surface.factor_value(surface.project(P - h * e))
        grad_f += ((fp - fm) / (2 * h))[..., None] * e
    dfV = np.sum(grad_f * V, axis=-1)
    v2 = np.sum(V * V, axis=-1)
    return -2.0 * dfV[..., None] * V + v2[..., None] * grad_f


def _project_state(surface: SurfaceModel, P, V, speed):
    """One Newton projection onto F = 0, then retangentialize and rescale V.

    A single iteration suffices: the RK4 step leaves |F| = O(h^5), and
    Newton squares it.  The gradient is reused for the tangential projection.
    """
    f = surface.level(P)
    g = surface.grad(P)
    gg = np.sum(g * g, axis=-1)
    P = P - (f / gg)[..., None] * g
    V = V - (np.sum(V * g, axis=-1) / gg)[..., None] * g
    V = V * (speed / np.linalg.norm(V, axis=-1, keepdims=True))
    return P, V


def flow_levelset(
    surface: SurfaceModel,
    P0: np.ndarray,
    V0: np.ndarray,
    T: np.ndarray,
    n_steps: int = DEFAULT_STEPS,
    store_path: bool = False,
):
    """Batched geodesic flow for arclength T (per seed).  Unit-speed state.

    Returns (P1, V1) or (P1, V1, path) with path of shape (m, n_steps+1, 3).
    """
    P = np.atleast_2d(np.array(P0, dtype=float))
    V = np.atleast_2d(np.array(V0, dtype=float))
    T = np.atleast_1d(np.asarray(T, dtype=float))
    m = P.shape[0]
    h = (T / n_steps)[:, None]
    path = np.empty((m, n_steps + 1, 3)) if store_path else None
    if store_path:
        path[:, 0] = P
    for i in range(n_steps):
        k1p, k1v = V, _accel_levelset(surface, P, V)
        k2p = V + 0.5 * h * k1v
        k2v = _accel_levelset(surface, P + 0.5 * h * k1p, k2p)
        k3p = V + 0.5 * h * k2v
        k3v = _accel_levelset(surface, P + 0.5 * h * k2p, k3p)
        k4p = V + h * k3v
        k4v = _accel_levelset(surface, P + h * k3p, k4p)
        P = P + (h / 6.0) * (k1p + 2 * k2p + 2 * k3p + k4p)
        V = V + (h / 6.0) * (k1v + 2 * k2v + 2 * k3v + k4v)
        P, V = _project_state(surface, P, V, 1.0)
        if store_path:
            path[:, i + 1] = P
    if store_path:
        return P, V, path
    return P, V


def flow_chart(
    surface: SurfaceModel,
    x0: np.ndarray,
    v0: np.ndarray,
    T: float,
    n_steps: int = 512,
    store_path: bool = False,
):
    """Chart geodesic flow via x''^c = -Gamma^c_{ab} x'^a x'^b (single seed)."""

    def acc(x, v):
        gam = christoffel(surface, x)
        return -np.einsum("cab,a,b->c", gam, v, v)

    x = np.array(x0, dtype=float)
    v = np.array(v0, dtype=float)
    h = T / n_steps
    path = np.empty((n_steps + 1, 2)) if store_path else None
    if store_path:
        path[0] = x
    for i in range(n_steps):
        k1x, k1v = v, acc(x, v)
        k2x, k2v = v + 0.5 * h * k1v, acc(x + 0.5 * h * k1x, v + 0.5 * h * k1v)
        k3x, k3v = v + 0.5 * h * k2v, acc(x + 0.5 * h * k2x, v + 0.5 * h * k2v)
        k4x, k4v = v + h * k3v, acc(x + h * k3x, v + h * k3v)
        x = x + (h / 6.0) * (k1x + 2 * k2x + 2 * k3x + k4x)
        v = v + (h / 6.0) * (k1v + 2 * k2v + 2 * k3v + k4v)
        if not surface.in_chart_domain(x):
            raise LeftChartDomain(f"left chart domain at step {i}")
        if store_path:
            path[i + 1] = x
    if store_path:
        return x, v, path
    return x, v


def integrate_geodesic(
    surface: SurfaceModel,
    p0: np.ndarray,
    v0: np.ndarray,
    arc_length: float,
    step: Optional[float] = None,
):
    """Integrate the geodesic equation for the given arclength.

    ``v0`` must be unit and tangent.  Returns the path samples, shape
    (n_steps+1, d).  Raises StepTooLarge when the speed drift per unit
    length exceeds 1e-9.
    """
    if step is None:
        step = arc_length / DEFAULT_STEPS
    if step <= 0:
        raise ValueError("step must be positive")
    n_steps = max(8, int(np.ceil(arc_length / step)))
    p0 = np.asarray(p0, dtype=float)
    v0 = np.asarray(v0, dtype=float)
    if surface.kind == "levelset":
        surface.check_on_surface(p0)
        n = surface.unit_normal(p0)
        if abs(v0 @ n) > 1e-8 or abs(np.linalg.norm(v0) - 1.0) > 1e-8:
            raise ValueError("v0 must be a unit tangent vector")
        _, V1, path = flow_levelset(
            surface, p0, v0, np.array([arc_length]), n_steps, store_path=True
        )
        # speed drift check on the unprojected endpoint velocity
        drift = abs(np.linalg.norm(V1[0]) - 1.0)
        if drift > 1e-9 * max(arc_length, 1.0):
            raise StepTooLarge(f"speed drift {drift:.2e} over length {arc_length}")
        return path[0]
    _, _, path = flow_chart(surface, p0, v0, arc_length, n_steps, store_path=True)
    return path


# ---------------------------------------------------------------------------
# closed-geodesic shooting
# ---------------------------------------------------------------------------


def _frames_at(surface, P, Vref):
    """Orthonormal tangent frames (e1 along Vref, e2 = n x e1)."""
    n = surface.unit_normal(P)
    e1 = Vref - np.sum(Vref * n, axis=-1, keepdims=True) * n
    e1 = e1 / np.linalg.norm(e1, axis=-1, keepdims=True)
    e2 = np.cross(n, e1)
    return e1, e2, n


def shoot_closed_batch(
    surface: SurfaceModel,
    seeds_p: np.ndarray,
    seeds_v: np.ndarray,
    periods: np.ndarray,
    tol: float = 1e-12,
    max_iter: int = 30,
    n_steps: int = DEFAULT_STEPS,
    coarse_steps: int = 512,
):
    """Gauss-Newton closure of a batch of shooting seeds.

    The residual and all three Jacobian columns are evaluated in a single
    batched flow per iteration.  Steps use the pseudo-inverse so
    rank-deficient shooting differentials (continuous families of closed
    geodesics, e.g. meridians of a surface of revolution) still converge to
    a member of the family; such seeds are flagged ``degenerate``.

    Runs a coarse-grid Newton phase first and polishes on the fine grid.
    Returns a dict of arrays: ok, p0, v0, period, residual, degenerate.
    """
    P_seed = np.atleast_2d(np.asarray(seeds_p, dtype=float))
    V_seed = np.atleast_2d(np.asarray(seeds_v, dtype=float))
    T0 = np.atleast_1d(np.asarray(periods, dtype=float)).copy()
    m = P_seed.shape[0]

    P_seed = surface.project(P_seed)
    n0 = surface.unit_normal(P_seed)
    V_seed = V_seed - np.sum(V_seed * n0, axis=-1, keepdims=True) * n0
    V_seed = V_seed / np.linalg.norm(V_seed, axis=-1, keepdims=True)
    W = np.cross(n0, V_seed)  # transversal base-point direction

    x = np.zeros((m, 3))  # (tau, theta, T - T0)
    degenerate = np.zeros(m, dtype=bool)
    resid = np.full(m, np.inf)
    EPS = 1e-7

    def residual(xv, seed_idx, steps):
        """xv: (q,3) unknowns for seeds seed_idx (q,)."""
        tau, theta, dT = xv[:, 0], xv[:, 1], xv[:, 2]
        Ps, Vs, Ts = P_seed[seed_idx], V_seed[seed_idx], T0[seed_idx]
        P0 = surface.project(Ps + tau[:, None] * W[seed_idx], iterations=8)
        e1, e2, _ = _frames_at(surface, P0, Vs)
        V0 = np.cos(theta)[:, None] * e1 + np.sin(theta)[:, None] * e2
        T = np.maximum(Ts + dT, 0.3 * Ts)
        P1, V1 = flow_levelset(surface, P0, V0, T, steps)
        d = P1 - P0
        a1 = np.arctan2(np.sum(V1 * e2, axis=1), np.sum(V1 * e1, axis=1))
        ang = np.arctan2(np.sin(a1 - theta), np.cos(a1 - theta))
        r = np.stack(
            [np.sum(d * e1, axis=1), np.sum(d * e2, axis=1), ang * T / (2 * np.pi)],
            axis=1,
        )
        return r, P0, V0, T

    active = np.ones(m, dtype=bool)
    for phase_steps, phase_iters, phase_tol in (
        (coarse_steps, max_iter, 1e-9),
        (n_steps, 8, max(tol, 1e-11)),
    ):
        prev_rn = np.full(m, np.inf)
        for _ in range(phase_iters):
            if not active.any():
                break
            idx = np.where(active)[0]
            q = idx.size
            # stack unknowns with the three FD perturbations: one flow call
            xs = np.repeat(x[idx], 4, axis=0)
            for col in range(3):
                xs[4 * np.arange(q) + 1 + col, col] += EPS
            seed_rep = np.repeat(idx, 4)
            r_all, _, _, _ = residual(xs, seed_rep, phase_steps)
            r_all = r_all.reshape(q, 4, 3)
            r0 = r_all[:, 0]
            rn = np.linalg.norm(r0, axis=1)
            resid[idx] = rn
            # done when below tolerance, or stalled at the FD-noise floor
            done = (rn < phase_tol) | ((rn < 1e-9) & (rn > 0.5 * prev_rn[idx]))
            prev_rn[idx] = rn
            active[idx[done]] = False
            live = ~done
            if not live.any():
                continue
            li = idx[live]
            J = np.transpose((r_all[live, 1:] - r0[live, None]) / EPS, (0, 2, 1))
            sv = np.linalg.svd(J, compute_uv=False)
            degenerate[li] |= sv[:, -1] < 1e-5 * sv[:, 0]
            Jinv = np.linalg.pinv(J, rcond=1e-8)
            dx = -np.einsum("qij,qj->qi", Jinv, r0[live])
            # trust region keeps early iterations stable
            dx[:, 0] = np.clip(dx[:, 0], -0.2, 0.2)
            dx[:, 1] = np.clip(dx[:, 1], -0.5, 0.5)
            dx[:, 2] = np.clip(dx[:, 2], -0.5 * T0[li], 0.5 * T0[li])
            bad = ~np.isfinite(dx).all(axis=1)
            dx[bad] = 0.0
            active[li[bad]] = False
            x[li] += dx
            tau_max = 0.25 * surface.diameter()
            x[li, 0] = np.clip(x[li, 0], -tau_max, tau_max)
        if phase_steps == coarse_steps:
            active = resid < 1e-6  # only polish seeds the coarse phase closed

    r_final, P0, V0, T = residual(x, np.arange(m), n_steps)
    rn = np.linalg.norm(r_final, axis=1)
    on_surface = np.abs(surface.level(P0)) < 1e-11
    ok = (rn <= 1e-10) & on_surface
    return {
        "ok": ok,
        "p0": P0,
        "v0": V0,
        "period": T,
        "residual": rn,
        "degenerate": degenerate,
    }


def _flow_closure_residual(surface, p0, v0, period, n_steps):
    """Position + direction mismatch of the discrete flow after one period."""
    P1, V1 = flow_levelset(surface, p0, v0, np.atleast_1d(period), n_steps)
    d_pos = np.linalg.norm(P1[0] - np.atleast_2d(p0)[0])
    d_dir = np.linalg.norm(V1[0] - np.atleast_2d(v0)[0])
    return float(d_pos + d_dir)


def _detect_cover(path: np.ndarray, max_mult: int = 6, tol: float = 1e-7):
    """Smallest m such that the loop is an m-fold cover of a primitive loop."""
    n = path.shape[0]
    scale = max(np.ptp(path, axis=0).max(), 1e-30)
    for mult in range(2, max_mult + 1):
        shift = n / mult
        idx = (np.arange(n) + shift) % n
        lo = np.floor(idx).astype(int)
        frac = (idx - lo)[:, None]
        shifted = path[lo] * (1 - frac) + path[(lo + 1) % n] * frac
        if np.max(np.linalg.norm(shifted - path, axis=1)) < tol * scale:
            return mult
    return 1


def close_geodesic(
    surface: SurfaceModel,
    seed,
    n_samples: int = DEFAULT_STEPS,
    tol: float = 1e-12,
    max_iter: int = 30,
) -> GeodesicCurve:
    """Close a geodesic by Newton shooting from ``seed = (point, direction,
    period_guess)``.

    Returns a constant-speed GeodesicCurve with closure residual <= 1e-10.
    Raises NoConvergence or DegenerateJacobian on failure.
    """
    p, v, T = seed
    out = shoot_closed_batch(
        surface,
        np.asarray(p, float)[None],
        np.asarray(v, float)[None],
        np.array([float(T)]),
        tol=tol,
        max_iter=max_iter,
    )
    if not out["ok"][0]:
        if out["degenerate"][0]:
            raise DegenerateJacobian(
                "singular shooting differential (nontrivial Jacobi field?)"
            )
        raise NoConvergence(f"shooting residual {out['residual'][0]:.3e}")
    period = float(out["period"][0])
    residual = _flow_closure_residual(
        surface, out["p0"], out["v0"], period, n_samples
    )
    _, _, path = flow_levelset(
        surface, out["p0"], out["v0"], np.array([period]), n_samples, store_path=True
    )
    samples = path[0][:-1]
    mult = _detect_cover(samples)
    if mult > 1:
        period /= mult
        _, _, path = flow_levelset(
            surface,
            out["p0"],
            out["v0"],
            np.array([period]),
            n_samples,
            store_path=True,
        )
        samples = path[0][:-1]
    speeds = np.full(n_samples, period / (2 * np.pi))
    return GeodesicCurve(
        samples=samples,
        speeds=speeds,
        length=period,
        closure_residual=residual,
        surface=surface,
        primitive=True,
        cover_multiplicity=mult,
        extra={"degenerate_jacobian": bool(out["degenerate"][0])},
    )


# ---------------------------------------------------------------------------
# geodesic curvature
# ---------------------------------------------------------------------------


def geodesic_curvature_profile(curve, surface: Optional[SurfaceModel] = None):
    """Signed geodesic curvature kappa(s) per sample.

    Sign convention: kappa = <-grad_T T, n> with n the right-of-travel
    normal (ambient: n = T x N_surface; charts: the metric-unit normal with
    det[T, n] < 0).  A counterclockwise circle of radius r in a flat chart
    has kappa = +1/r.
    """
    if isinstance(curve, GeodesicCurve):
        samples, closed = curve.samples, curve.closed
        surface = surface or curve.surface
    else:
        samples, closed = np.asarray(curve, dtype=float), True
    n_pts = samples.shape[0]
    dtheta = 2 * np.pi / n_pts if closed else 2 * np.pi / (n_pts - 1)
    d1 = (
        periodic_derivative(samples, dtheta)
        if closed
        else open_derivative(samples, dtheta)
    )
    d2 = (
        periodic_derivative(samples, dtheta, 2)
        if closed
        else open_derivative(samples, dtheta, 2)
    )
    if surface.kind == "levelset":
        N = surface.unit_normal(samples)
        sp = np.linalg.norm(d1, axis=1)
        T = d1 / sp[:, None]
        n_curve = np.cross(T, N)
        kappa = -np.einsum("ni,ni->n", d2, n_curve) / sp**2
        if surface.conformal_factor is not None:
            f = surface.factor_value(samples)
            dnf = _normal_derivative_of_factor(surface, samples, n_curve)
            kappa = np.exp(-f) * (kappa + dnf)
        return kappa
    return _chart_curvature(surface, samples, d1, d2)


def _normal_derivative_of_factor(surface, samples, n_curve, h=1e-6):
    fp = surface.factor_value(surface.project(samples + h * n_curve))
    fm = surface.factor_value(surface.project(samples - h * n_curve))
    return (fp - fm) / (2 * h)


def _chart_curvature(surface, samples, d1, d2, fd_h=None):
    """Signed curvature in a chart metric (vectorized over samples)."""
    from .surfaces import christoffel_batch

    g = surface.chart_metric(samples)
    if fd_h is None:
        gam = christoffel_batch(surface, samples)
    else:
        gam = christoffel_batch(surface, samples, h=fd_h)
    acc = d2 + np.einsum("ncab,na,nb->nc", gam, d1, d1)
    sp2 = np.einsum("ni,nij,nj->n", d1, g, d1)
    t = d1 / np.sqrt(sp2)[:, None]
    w = np.stack([t[:, 1], -t[:, 0]], axis=1)
    w = w - np.einsum("ni,nij,nj->n", w, g, t)[:, None] * t
    w = w / np.sqrt(np.einsum("ni,nij,nj->n", w, g, w))[:, None]
    flip = t[:, 0] * w[:, 1] - t[:, 1] * w[:, 0] > 0
    w[flip] = -w[flip]
    return -np.einsum("ni,nij,nj->n", acc, g, w) / sp2


def require_geodesic(curve, surface=None, tol: float = GEODESIC_KAPPA_TOL):
    kap = geodesic_curvature_profile(curve, surface)
    worst = float(np.max(np.abs(kap)))
    if worst > tol:
        raise NotAGeodesic(f"max |kappa| = {worst:.3e} exceeds {tol:.1e}")
    return worst


# ---------------------------------------------------------------------------
# canonical sampled curves, seeds, distances
# ---------------------------------------------------------------------------


def curve_from_samples(
    surface, samples, closed=True, primitive=True, cover_multiplicity=1
) -> GeodesicCurve:
    samples = np.asarray(samples, dtype=float)
    sp, _ = curve_speeds(samples, surface, closed)
    length = curve_length(samples, surface, closed)
    # a sampled loop is closed by construction; open curves have no closure
    res = 0.0 if closed else np.inf
    return GeodesicCurve(
        samples=samples,
        speeds=sp,
        length=length,
        closure_residual=res,
        surface=surface,
        primitive=primitive,
        cover_multiplicity=cover_multiplicity,
        closed=closed,
    )


def sample_level_circle(surface: SurfaceModel, c: float, n: int = DEFAULT_STEPS):
    """Level circle {x3 = c} on an mk surface or sphere, sampled uniformly."""
    p = surface.builtin_params
    if surface.name == "mk":
        rho2 = 1.0 - (c * c) ** p["mu"] / p["k"]
    else:
        rho2 = 1.0 - c * c
    if rho2 <= 0:
        raise ValueError("level circle is empty at this height")
    rho = np.sqrt(rho2)
    th = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
    pts = np.stack([rho * np.cos(th), rho * np.sin(th), np.full(n, c)], axis=1)
    return curve_from_samples(surface, pts)


def sample_great_circle(surface: SurfaceModel, u, v, n: int = DEFAULT_STEPS):
    """Great circle cos(t) u + sin(t) v on the unit sphere."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    u = u / np.linalg.norm(u)
    v = v - (v @ u) * u
    v = v / np.linalg.norm(v)
    th = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
    pts = np.outer(np.cos(th), u) + np.outer(np.sin(th), v)
    return curve_from_samples(surface, pts)


def hausdorff_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Symmetric Hausdorff distance between two sample clouds."""
    ta, tb = cKDTree(a), cKDTree(b)
    d_ab = tb.query(a)[0].max()
    d_ba = ta.query(b)[0].max()
    return float(max(d_ab, d_ba))


_PLASTIC = 1.32471795724474602596  # root of x^3 = x + 1


def low_discrepancy_seeds(n: int, dims: int, seed: int = 0) -> np.ndarray:
    """Deterministic Kronecker low-discrepancy sequence in [0,1)^dims.

    Keyed by ``seed`` through a fixed-offset scramble; identical inputs give
    byte-identical outputs.
    """
    alphas = np.array([1.0 / _PLASTIC ** (j + 1) for j in range(dims)])
    offs = np.modf(np.float64(seed) * 0.6180339887498949 + np.arange(dims) * 0.7548776662466927)[0]
    i = np.arange(1, n + 1)[:, None]
    return np.modf(offs + i * alphas)[0]


def mk_seed_directions(
    surface: SurfaceModel, n_seeds: int, seed: int, band: float = 0.6
):
    """Shooting seeds on an mk surface: points in a latitude band plus
    tangent directions from the low-discrepancy sequence."""
    p = surface.builtin_params
    zmax = p["k"] ** (1.0 / (2.0 * p["mu"]))
    u = low_discrepancy_seeds(n_seeds, 3, seed)
    c = band * zmax * (2.0 * u[:, 0] - 1.0)
    phi = 2 * np.pi * u[:, 1]
    alpha = np.pi * (u[:, 2] - 0.5)
    rho = np.sqrt(np.maximum(1.0 - (c * c) ** p["mu"] / p["k"], 1e-9))
    pts = np.stack([rho * np.cos(phi), rho * np.sin(phi), c], axis=1)
    pts = surface.project(pts)
    n = surface.unit_normal(pts)
    east = np.stack([-np.sin(phi), np.cos(phi), np.zeros(n_seeds)], axis=1)
    east -= np.sum(east * n, axis=1, keepdims=True) * n
    east /= np.linalg.norm(east, axis=1, keepdims=True)
    north = np.cross(n, east)
    dirs = np.cos(alpha)[:, None] * east + np.sin(alpha)[:, None] * north
    return pts, dirs
