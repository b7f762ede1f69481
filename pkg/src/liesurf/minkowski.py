"""Linear algebra of R^{4,2} with the inner product (-++++-).

Coordinates are ordered so the first and the last component carry metric
sign -1.  The Euclidean gauge is fixed throughout the package:

    p = (0,0,0,0,0,1)   point sphere complex (unit timelike),
    q = (1,-1,0,0,0,0)  spaceform vector (null),

so the quadric {X in L^5 | (X,p)=0, (X,q)=-1} is the isometric copy of R^3
that all projections land in.

Lightcone lines are interpreted as oriented spheres / planes / points of R^3:
writing sigma = (a, b, zeta, c) with zeta in R^3,

* (sigma, q) != 0  (i.e. a+b != 0): after scaling to a+b = 1, sigma is the
  sphere with center zeta and signed radius c (a point of R^3 when c = 0);
* (sigma, q) == 0: after scaling to c = 1, zeta is a unit vector and sigma is
  the plane <zeta, xi> = (a-b)/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    GramSchmidtBreakdown,
    ImproperPoint,
    NotLightlike,
    NotUnitTimelike,
    ZeroVector,
)

SIGNS = np.array([-1.0, 1.0, 1.0, 1.0, 1.0, -1.0])
J = np.diag(SIGNS)
P_EUCLIDEAN = np.array([0.0, 0.0, 0.0, 0.0, 0.0, 1.0])
Q_EUCLIDEAN = np.array([1.0, -1.0, 0.0, 0.0, 0.0, 0.0])


def inner(x, y):
    """Signature (-++++-) inner product.

    Works on float arrays and on length-6 sequences of jets alike.
    """
    if isinstance(x, np.ndarray) and isinstance(y, np.ndarray) and x.dtype != object:
        return -x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3] + x[4] * y[4] - x[5] * y[5]
    acc = -(x[0] * y[0])
    for i in range(1, 5):
        acc = acc + x[i] * y[i]
    return acc - x[5] * y[5]


def lie_residual(a: np.ndarray) -> float:
    """Max-norm of A^T J A - J."""
    return float(np.max(np.abs(a.T @ J @ a - J)))


def is_lie_transformation(a: np.ndarray, tol: float = 1e-9) -> tuple[bool, float]:
    """Whether A is in O(4,2), with the residual for diagnostics."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    r = lie_residual(a)
    return r <= tol, r


def _project_out(w, basis, signs):
    for v, s in zip(basis, signs):
        w = w - s * inner(w, v) * v
    return w


def complete_pseudo_orthonormal_basis(seeds, seed_signs, candidates=None,
                                      null_tol: float = 1e-10):
    """Extend J-orthonormal seed vectors to a full pseudo-orthonormal basis.

    Gram-Schmidt in indefinite signature pivots greedily on the remaining
    candidate with the largest |self inner product| after projection; naive
    ordering breaks down when an early candidate lands near the lightcone.
    Returns (basis list, sign list).
    """
    basis = [np.asarray(v, dtype=float) for v in seeds]
    signs = list(seed_signs)
    if candidates is None:
        candidates = [np.eye(6)[i] for i in range(6)]
    pool = [np.asarray(c, dtype=float) for c in candidates]
    while len(basis) < 6:
        best, best_norm = None, 0.0
        for cand in pool:
            w = _project_out(cand, basis, signs)
            wn = inner(w, w)
            if abs(wn) > abs(best_norm):
                best, best_norm = w, wn
        if best is None or abs(best_norm) <= null_tol * max(1.0, float(np.dot(best, best))):
            raise GramSchmidtBreakdown(
                f"no candidate with usable self inner product at step {len(basis)}")
        s = 1.0 if best_norm > 0 else -1.0
        basis.append(best / np.sqrt(abs(best_norm)))
        signs.append(s)
    plus = signs.count(1.0)
    if plus != 4:
        raise GramSchmidtBreakdown(f"completed basis has signature ({plus},{6 - plus})")
    return basis, signs


def _canonical_order(basis, signs):
    """Seed first, then the four spacelike vectors, then the second timelike."""
    head = [(basis[0], signs[0])]
    space = [(b, s) for b, s in zip(basis[1:], signs[1:]) if s > 0]
    time = [(b, s) for b, s in zip(basis[1:], signs[1:]) if s < 0]
    ordered = head + space + time
    return [b for b, _ in ordered], [s for _, s in ordered]


def build_isometry_sending(phat: np.ndarray, p: np.ndarray, tol: float = 1e-8,
                           rng: np.random.Generator | None = None) -> np.ndarray:
    """An O(4,2) matrix A with A phat = p.

    Both arguments must be unit timelike.  Completes each to a
    pseudo-orthonormal basis and maps basis to basis; with ``rng`` the
    completion candidates are randomized, which samples the stabilizer
    freedom left by the construction.
    """
    phat = np.asarray(phat, dtype=float)
    p = np.asarray(p, dtype=float)
    for v in (phat, p):
        if abs(inner(v, v) + 1.0) > tol:
            raise NotUnitTimelike(f"(v,v) = {inner(v, v):.3e}, expected -1")
    candidates = None
    if rng is not None:
        candidates = list(rng.standard_normal((8, 6)))
    out_basis = []
    for seed in (phat, p):
        try:
            basis, signs = complete_pseudo_orthonormal_basis([seed], [-1.0], candidates)
        except GramSchmidtBreakdown:
            basis, signs = complete_pseudo_orthonormal_basis([seed], [-1.0])
        basis, signs = _canonical_order(basis, signs)
        out_basis.append((np.column_stack(basis), np.array(signs)))
    (v1, e1), (v2, e2) = out_basis
    assert np.array_equal(e1, e2)
    # A V1 = V2 and V1^T J V1 = diag(e) give A = V2 diag(e) V1^T J.
    return v2 @ np.diag(e1) @ v1.T @ J


# -- sphere interpretation ------------------------------------------------------


@dataclass(frozen=True)
class MetricSphere:
    center: np.ndarray
    radius: float
    orientation: float  # sign of the scaled c component

    kind = "sphere"


@dataclass(frozen=True)
class Plane:
    normal: np.ndarray
    offset: float  # plane is <normal, xi> = offset

    kind = "plane"


@dataclass(frozen=True)
class PointSphere:
    point: np.ndarray

    kind = "point"


SphereInterp = MetricSphere | Plane | PointSphere


def interpret_sphere(sigma: np.ndarray, tol: float = 1e-10) -> SphereInterp:
    """Euclidean sphere/plane/point named by a lightcone representative."""
    sigma = np.asarray(sigma, dtype=float)
    norm = float(np.linalg.norm(sigma))
    if norm == 0.0:
        raise ZeroVector("cannot interpret the zero vector")
    if abs(inner(sigma, sigma)) > 1e-8 * norm * norm:
        raise NotLightlike(f"(sigma,sigma) = {inner(sigma, sigma):.3e}")
    a, b, c = sigma[0], sigma[1], sigma[5]
    if abs(a + b) >= tol * norm:
        s = sigma / (a + b)
        center = s[2:5].copy()
        radius = abs(s[5])
        if radius < tol:
            return PointSphere(point=center)
        return MetricSphere(center=center, radius=radius, orientation=float(np.sign(s[5])))
    if abs(c) < tol * norm:
        raise ImproperPoint("a+b = 0 and c = 0: direction of the spaceform vector")
    s = sigma / c
    return Plane(normal=s[2:5].copy(), offset=float((s[0] - s[1]) / 2.0))


# -- matrix file format ------------------------------------------------------------


def read_matrix(text: str) -> np.ndarray:
    """Parse the 6-lines-by-6-numbers matrix format."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 6:
            raise ValueError(f"matrix line {lineno}: expected 6 numbers, got {len(parts)}")
        rows.append([float(x) for x in parts])
    if len(rows) != 6:
        raise ValueError(f"expected 6 matrix rows, got {len(rows)}")
    return np.array(rows)


def format_matrix(a: np.ndarray) -> str:
    return "\n".join(" ".join(f"{x:.17g}" for x in row) for row in np.asarray(a)) + "\n"
