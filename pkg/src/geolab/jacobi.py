"""Second variation, periodic Jacobi spectra, Morse index and nullity.

For a closed geodesic the second variation of length over normal fields
phi n is the quadratic form

    Q(phi, psi) = integral phi' psi' - K phi psi ds,

whose operator form is -phi'' - K(s) phi with periodic boundary conditions
on [0, m L] for the m-fold cover.  The operator is discretized as a
symmetric cyclic difference matrix plus the diagonal -K; the stencil is the
4th-order five-point one so the lowest eigenvalues converge well inside the
5 h^2 acceptance tolerance (the plain three-point stencil misses it at the
sixth eigenvalue, whose truncation constant is 81/12 > 5).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import GridTooCoarse
from .geodesics import (
    GeodesicCurve,
    periodic_derivative,
    require_geodesic,
)
from .surfaces import SurfaceModel, gauss_curvature


@dataclass
class SpectrumReport:
    """Eigenvalues of the periodic Jacobi operator with classification."""

    eigenvalues: np.ndarray  # ascending
    index: int
    nullity: int
    grid_size: int
    zero_tolerance: float
    cover_multiplicity: int = 1
    discretization_error: float = 0.0

    def to_json_dict(self, n_eigs: int = 12) -> dict:
        return {
            "eigenvalues": [float(v) for v in self.eigenvalues[:n_eigs]],
            "index": int(self.index),
            "nullity": int(self.nullity),
            "grid_size": int(self.grid_size),
            "zero_tolerance": float(self.zero_tolerance),
            "cover_multiplicity": int(self.cover_multiplicity),
        }


def curvature_along(curve: GeodesicCurve, surface: Optional[SurfaceModel] = None):
    """Gauss curvature sampled along the curve."""
    surface = surface or curve.surface
    return gauss_curvature(surface, curve.samples)


def second_variation(
    curve: GeodesicCurve,
    phi: np.ndarray,
    psi: np.ndarray,
    surface: Optional[SurfaceModel] = None,
) -> float:
    """Polarized second variation  integral phi' psi' - K phi psi ds.

    ``phi`` and ``psi`` are scalar samples on the curve's own grid.  The
    curve must pass the geodesic test.
    """
    surface = surface or curve.surface
    require_geodesic(curve, surface)
    phi = np.asarray(phi, dtype=float)
    psi = np.asarray(psi, dtype=float)
    if phi.shape != (curve.n,) or psi.shape != (curve.n,):
        raise ValueError("phi, psi must be sampled on the curve grid")
    ds = curve.length / curve.n
    dphi = periodic_derivative(phi, ds)
    dpsi = periodic_derivative(psi, ds)
    K = curvature_along(curve, surface)
    return float(np.sum(dphi * dpsi - K * phi * psi) * ds)


def _cyclic_second_difference(n: int, h: float) -> np.ndarray:
    """Symmetric cyclic matrix for -d^2/ds^2, 4th-order five-point stencil."""
    A = np.zeros((n, n))
    i = np.arange(n)
    A[i, i] = 2.5
    for off, c in ((1, -4.0 / 3.0), (2, 1.0 / 12.0)):
        A[i, (i + off) % n] += c
        A[i, (i - off) % n] += c
    return A / h**2


def jacobi_spectrum(
    curve: GeodesicCurve,
    surface: Optional[SurfaceModel] = None,
    cover_multiplicity: int = 1,
    grid_size: int = 512,
) -> SpectrumReport:
    """Periodic spectrum of -phi'' - K phi on [0, m length(curve)].

    Eigenvalues come from a dense symmetric eigensolve; index counts
    eigenvalues below -zero_tolerance and nullity those within it, with
    zero_tolerance = max(1e-8, 10 h^2 max|K|).  Raises GridTooCoarse when
    an eigenvalue falls too close to the classification boundary to trust.
    """
    surface = surface or curve.surface
    if grid_size < 256:
        raise ValueError("grid_size must be at least 256")
    m = int(cover_multiplicity)
    if m < 1:
        raise ValueError("cover_multiplicity must be >= 1")
    require_geodesic(curve, surface)

    L = curve.length * m
    n = grid_size
    h = L / n
    # sample K along the m-fold traversal: parameter wraps with period L/m
    s = np.arange(n) * h
    K_curve = curvature_along(curve, surface)
    s_curve = np.arange(curve.n) * (curve.length / curve.n)
    K = np.interp(s % curve.length, s_curve, K_curve, period=curve.length)

    A = _cyclic_second_difference(n, h) - np.diag(K)
    eig = np.linalg.eigvalsh(0.5 * (A + A.T))

    maxK = float(np.max(np.abs(K)))
    zero_tol = max(1e-8, 10.0 * h**2 * maxK)
    index = int(np.sum(eig < -zero_tol))
    nullity = int(np.sum(np.abs(eig) <= zero_tol))

    # classification is ambiguous when an eigenvalue sits near the boundary
    near = np.abs(np.abs(eig) - zero_tol) < 0.25 * zero_tol
    if near.any():
        raise GridTooCoarse(
            "eigenvalue within 25% of the zero tolerance; refine grid_size"
        )
    disc_err = float(h**2 * maxK)
    return SpectrumReport(
        eigenvalues=eig,
        index=index,
        nullity=nullity,
        grid_size=n,
        zero_tolerance=zero_tol,
        cover_multiplicity=m,
        discretization_error=disc_err,
    )


def network_index(
    network,
    multiplicities: Optional[Sequence[int]] = None,
    grid_size: int = 512,
):
    """Morse index of a geodesic network: sum of per-curve indices.

    The weighted form Q_V = sum m_gamma Q_gamma has the same negative
    subspace dimension as Q_Gamma since every m_gamma > 0, so the index does
    not depend on the multiplicities; they are echoed in the descriptor.
    Returns (index, descriptor) where the descriptor holds per-curve
    spectra.
    """
    curves = network.curves if hasattr(network, "curves") else list(network)
    if multiplicities is None:
        multiplicities = [1] * len(curves)
    if len(multiplicities) != len(curves) or any(m < 1 for m in multiplicities):
        raise ValueError("multiplicities must be positive, one per curve")
    reports = []
    for cur in curves:
        reports.append(jacobi_spectrum(cur, grid_size=grid_size))
    total = int(sum(r.index for r in reports))
    descriptor = {
        "per_curve": [r.to_json_dict() for r in reports],
        "multiplicities": [int(m) for m in multiplicities],
        "index": total,
        "nullity_total": int(sum(r.nullity for r in reports)),
        "weighted_form": "Q_V(X,Y) = sum_gamma m_gamma Q_gamma(X_gamma, Y_gamma)",
    }
    return total, descriptor


def degeneracy_criterion_mk(k: float, m: int) -> bool:
    """Conservative degeneracy test for the m-fold cover of the mk equator.

    Returns True (degeneracy possible) iff k^(-1/2) * 2 pi m is an integer
    multiple of pi, i.e. 2 m / sqrt(k) is an integer.  This is deliberately
    the conservative convention: it can flag cases whose computed nullity is
    zero (e.g. k = 4, m = 1), so reports pair it with the spectrum's
    nullity rather than treating it as ground truth.
    """
    if k <= 0 or m < 1:
        raise ValueError("need k > 0 and m >= 1")
    ratio = 2.0 * m / np.sqrt(k)
    return bool(abs(ratio - round(ratio)) < 1e-9)


def width_consistency_assertions(network, p: int, grid_size: int = 512) -> dict:
    """Consistency checks for networks produced at target width level p.

    Asserts index(Gamma) <= p and #Vert(Gamma) <= p (checked, not proven).
    Returns a report dict with pass/fail flags.
    """
    idx, desc = network_index(network, grid_size=grid_size)
    n_vert = len(network.vertices)
    return {
        "p": int(p),
        "index": idx,
        "index_le_p": bool(idx <= p),
        "n_vertices": int(n_vert),
        "vertices_le_p": bool(n_vert <= p),
        "per_curve": desc["per_curve"],
    }
