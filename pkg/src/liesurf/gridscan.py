"""Vectorized domain scans for singular-locus extraction.

Scanning a grid point-by-point through the scalar jet pipeline would be
slow, so this module evaluates the few closed-form quantities a scan needs
(a density proportional to the signed area density, the transformed surface
values, a projection-regularity witness and an umbilic witness) directly
over numpy arrays of base points.

For a transformed surface the density used is the lift-product proxy

    (A sigma_1, p)(A sigma_2, p) = ap^2 + tr(S) ap bp + det(S) bp^2,

with ap = (A T, p), bp = (A F, p): proportional to the signed area density
of fhat by a nonvanishing factor, so it has the same zero set and the same
crossings, while avoiding the eigenvalue square root (umbilic-safe).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .minkowski import SIGNS, P_EUCLIDEAN, Q_EUCLIDEAN
from .surface import SurfaceExpr


def _inner_rows(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """(-++++-) inner product along axis 0."""
    return (SIGNS[:, None] * x * y).sum(axis=0)


@dataclass
class GridScan:
    U: np.ndarray
    V: np.ndarray
    density: np.ndarray
    fhat: np.ndarray          # (3, nu, nv)
    that: np.ndarray
    det_b: np.ndarray | None
    umbilic: np.ndarray | None
    masked: np.ndarray
    masked_fraction: float

    @property
    def shape(self):
        return self.U.shape


def scan_grid(surf: SurfaceExpr, a: np.ndarray | None, domain, grid,
              det_b_tol: float = 1e-10) -> GridScan:
    nu, nv = grid
    u0, u1, v0, v1 = domain
    us = np.linspace(u0, u1, nu)
    vs = np.linspace(v0, v1, nv)
    U, V = np.meshgrid(us, vs, indexing="ij")
    uu, vv = U.ravel(), V.ravel()

    with np.errstate(all="ignore"):
        f_jets, n_jets = surf.eval_jet(uu, vv, order=2)
        f = np.stack([c.value() for c in f_jets])
        fu = np.stack([c.partial(1, 0) for c in f_jets])
        fv = np.stack([c.partial(0, 1) for c in f_jets])
        if n_jets is not None:
            t = np.stack([c.value() for c in n_jets])
        else:
            t = np.cross(fu, fv, axis=0)
            t = t / np.linalg.norm(t, axis=0, keepdims=True)

        if a is None:
            density = (np.cross(fu, fv, axis=0) * t).sum(axis=0)
            fhat, that = f, t
            det_b = None
            umb = None
            masked = ~np.isfinite(density)
        else:
            fuu = np.stack([c.partial(2, 0) for c in f_jets])
            fuv = np.stack([c.partial(1, 1) for c in f_jets])
            fvv = np.stack([c.partial(0, 2) for c in f_jets])
            E = (fu * fu).sum(axis=0)
            Fm = (fu * fv).sum(axis=0)
            G = (fv * fv).sum(axis=0)
            L = (fuu * t).sum(axis=0)
            M = (fuv * t).sum(axis=0)
            N = (fvv * t).sum(axis=0)
            det_i = E * G - Fm * Fm
            tr_s = (G * L - 2.0 * Fm * M + E * N) / det_i
            det_s = (L * N - M * M) / det_i

            ff = (f * f).sum(axis=0)
            ft = (f * t).sum(axis=0)
            ones = np.ones_like(ff)
            F6 = np.stack([(1.0 + ff) / 2.0, (1.0 - ff) / 2.0,
                           f[0], f[1], f[2], 0.0 * ones])
            T6 = np.stack([ft, -ft, t[0], t[1], t[2], ones])
            AF = a @ F6
            AT = a @ T6
            p6 = P_EUCLIDEAN[:, None]
            q6 = Q_EUCLIDEAN[:, None]
            ap = _inner_rows(AT, p6)
            bp = _inner_rows(AF, p6)
            aq = _inner_rows(AT, q6)
            bq = _inner_rows(AF, q6)
            det_b = bp * aq - ap * bq
            density = ap * ap + tr_s * ap * bp + det_s * bp * bp
            scale_b = np.maximum(1.0, np.max(np.abs(np.stack([ap, bp, aq, bq])),
                                             axis=0) ** 2)
            fhat = (ap * AF - bp * AT)[2:5] / det_b
            that = (-aq * AF + bq * AT)[2:5] / det_b
            umb = tr_s * tr_s - 4.0 * det_s
            masked = ~np.isfinite(density) | (np.abs(det_b) < det_b_tol * scale_b)

    shape = U.shape
    return GridScan(
        U=U, V=V,
        density=density.reshape(shape),
        fhat=fhat.reshape((3,) + shape),
        that=that.reshape((3,) + shape),
        det_b=None if det_b is None else det_b.reshape(shape),
        umbilic=None if umb is None else umb.reshape(shape),
        masked=masked.reshape(shape),
        masked_fraction=float(np.mean(masked)),
    )


def marching_squares(scan: GridScan):
    """Zero-crossing segments of the density, one pair of points per cell edge.

    Returns a list of ((u,v), (u,v)) segments from linear interpolation on
    cell edges; cells touching masked nodes are skipped.
    """
    d = scan.density.copy()
    scale = np.nanmax(np.abs(d))
    if not np.isfinite(scale) or scale == 0.0:
        scale = 1.0
    # a locus running exactly through grid nodes would otherwise shred into
    # per-cell fragments
    d[d == 0.0] = 1e-12 * scale
    U, V = scan.U, scan.V
    bad = scan.masked | ~np.isfinite(d)
    segments = []
    nu, nv = d.shape
    for i in range(nu - 1):
        for j in range(nv - 1):
            if bad[i:i + 2, j:j + 2].any():
                continue
            corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
            pts = []
            for k in range(4):
                (i1, j1), (i2, j2) = corners[k], corners[(k + 1) % 4]
                d1, d2 = d[i1, j1], d[i2, j2]
                if d1 * d2 < 0.0:
                    s = d1 / (d1 - d2)
                    pts.append((U[i1, j1] + s * (U[i2, j2] - U[i1, j1]),
                                V[i1, j1] + s * (V[i2, j2] - V[i1, j1])))
            if len(pts) == 2:
                segments.append((pts[0], pts[1]))
            elif len(pts) == 4:
                # ambiguous saddle cell: connect by proximity
                p = sorted(pts)
                segments.append((p[0], p[1]))
                segments.append((p[2], p[3]))
    return segments


def chain_segments(segments, tol: float):
    """Join segments sharing endpoints (within tol) into polylines."""
    if not segments:
        return []

    def key(pt):
        return (round(pt[0] / tol), round(pt[1] / tol))

    adj: dict = {}
    for idx, (p1, p2) in enumerate(segments):
        adj.setdefault(key(p1), []).append((idx, 0))
        adj.setdefault(key(p2), []).append((idx, 1))

    used = [False] * len(segments)
    polylines = []
    for start in range(len(segments)):
        if used[start]:
            continue
        used[start] = True
        p1, p2 = segments[start]
        chain = [p1, p2]
        for head in (True, False):
            while True:
                pt = chain[-1] if head else chain[0]
                candidates = [c for c in adj.get(key(pt), []) if not used[c[0]]]
                if not candidates:
                    break
                idx, end = candidates[0]
                used[idx] = True
                nxt = segments[idx][1 - end]
                if head:
                    chain.append(nxt)
                else:
                    chain.insert(0, nxt)
        polylines.append(chain)
    return polylines


def critical_candidates(scan: GridScan, density_rtol: float = 1e-3):
    """Grid points that may hide critical zeros of the density.

    Candidates where |density| is locally small and either the discrete
    gradient is small (lips/beaks/D4 points are critical points of the
    density) or the umbilic witness is small (corank-2 candidates).
    """
    d = scan.density.copy()
    d[scan.masked] = np.nan
    if not np.isfinite(d).any():
        return []
    scale = np.nanmax(np.abs(d))
    if not np.isfinite(scale) or scale == 0.0:
        scale = 1.0
    du = scan.U[1, 0] - scan.U[0, 0] if scan.U.shape[0] > 1 else 1.0
    dv = scan.V[0, 1] - scan.V[0, 0] if scan.V.shape[1] > 1 else 1.0
    gu, gv = np.gradient(d, du, dv)
    gnorm = np.hypot(gu, gv)
    with np.errstate(invalid="ignore"):
        gmax = np.nanmax(gnorm) if np.isfinite(gnorm).any() else 1.0
    gscale = gmax if np.isfinite(gmax) else 1.0
    cell = max(abs(du), abs(dv))
    small_d = np.abs(d) < max(density_rtol * scale, 2.0 * gscale * cell)
    small_g = gnorm < 0.2 * gscale
    cand = small_d & small_g
    if scan.umbilic is not None:
        uscale = np.nanmax(np.abs(scan.umbilic))
        if np.isfinite(uscale) and uscale > 0:
            cand |= small_d & (np.abs(scan.umbilic) < 1e-3 * uscale)
    cand &= ~scan.masked & np.isfinite(d)
    out = []
    for i, j in zip(*np.nonzero(cand)):
        out.append((float(scan.U[i, j]), float(scan.V[i, j])))
    return out
