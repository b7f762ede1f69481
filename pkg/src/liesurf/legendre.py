"""Euclidean Legendre lifts and projections.

A surface f with unit normal t lifts to the pair of lightcone maps

    F = ((1+<f,f>)/2, (1-<f,f>)/2, f, 0),      T = (<f,t>, -<f,t>, t, 1),

whose span is a 2-dimensional null plane at every point (the pencil of
oriented spheres tangent to f).  Conversely, any generating pair (sigma1,
sigma2) of such a plane projects back to Euclidean data through the pairing
matrix against the gauge vectors p, q:

    B = [[(s1,p), (s2,p)], [(s1,q), (s2,q)]],
    Fhat = a s1 + b s2,  That = c s1 + d s2,  [[a,c],[b,d]] = B^-1 [[0,-1],[-1,0]],

which pins (Fhat,p)=0, (Fhat,q)=-1, (That,p)=-1, (That,q)=0 so that fhat and
that can be read off components 3..5.  det B = 0 means the transformed plane
has no Euclidean projection at that point and is reported loudly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotIsotropic, NotUnitNormal, ProjectionSingular, RankDeficient
from .minkowski import P_EUCLIDEAN, Q_EUCLIDEAN, inner


def dot3(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross3(a, b):
    return [a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]]


def vec_values(vec) -> np.ndarray:
    """Base-point values of a vector of jets."""
    return np.array([c.value() for c in vec]) if not isinstance(vec[0], float) \
        else np.asarray(vec)


def deriv_vec(vec, which):
    return [c.du() if which == "u" else c.dv() for c in vec]


@dataclass(frozen=True)
class LiftPair:
    """Lightcone lifts (F, T) of a surface-with-normal, as jets."""

    F: tuple
    T: tuple
    base: tuple

    @property
    def f(self):
        return self.F[2:5]

    @property
    def t(self):
        return self.T[2:5]


@dataclass(frozen=True)
class ProjectionResult:
    """Euclidean data recovered from a generating pair of a lifted plane."""

    fhat: tuple
    that: tuple
    Fhat: tuple
    That: tuple
    det_b: float
    base: tuple

    def as_lift(self) -> LiftPair:
        return LiftPair(F=self.Fhat, T=self.That, base=self.base)


def compute_normal(f, tol: float = 1e-12):
    """normalize(f_u x f_v) as jets; orientation follows f_u x f_v.

    Raises RankDeficient at non-immersed base points: frontal normal forms
    need an explicit nx/ny/nz field there.
    """
    fu = deriv_vec(f, "u")
    fv = deriv_vec(f, "v")
    nu = cross3(fu, fv)
    n2 = dot3(nu, nu)
    base = n2.value()
    if np.ndim(base) == 0:
        scale = max((abs(c.partial(1, 0)) + abs(c.partial(0, 1)) + abs(c.value())) for c in f)
        if base <= tol * max(1.0, scale ** 4):
            raise RankDeficient(
                "f_u x f_v vanishes at the base point; supply nx/ny/nz to classify here")
    inv = n2 ** -0.5
    return [c * inv for c in nu]


def lift(f, t, base=(0.0, 0.0), tol: float = 1e-8) -> LiftPair:
    """Lightcone lifts of (f, t); validates |t| = 1 and <df, t> = 0 at base."""
    tnorm = dot3(t, t).value()
    if np.ndim(tnorm) == 0:
        if abs(tnorm - 1.0) > tol:
            raise NotUnitNormal(f"|t|^2 = {tnorm:.6g} at base, expected 1")
        fu = deriv_vec(f, "u")
        fv = deriv_vec(f, "v")
        scale = 1.0 + max(abs(x) for x in
                          np.concatenate([vec_values(fu), vec_values(fv)]))
        for d in (fu, fv):
            r = dot3(d, t).value()
            if abs(r) > tol * scale:
                raise NotIsotropic(f"<df,t> = {r:.3e} at base")
    ff = dot3(f, f)
    ft = dot3(f, t)
    half = 0.5
    F = (half * (1.0 + ff), half * (1.0 - ff), f[0], f[1], f[2],
         _zero_like(ff))
    T = (ft, -ft, t[0], t[1], t[2], _one_like(ft))
    return LiftPair(F=F, T=T, base=tuple(base))


def _zero_like(jet):
    z = jet * 0.0
    return z


def _one_like(jet):
    z = jet * 0.0
    return z + 1.0


def pairings(sigma, p=P_EUCLIDEAN, q=Q_EUCLIDEAN):
    return inner(sigma, list(p)), inner(sigma, list(q))


def project(sigma1, sigma2, base=(0.0, 0.0), p=P_EUCLIDEAN, q=Q_EUCLIDEAN,
            tol: float = 1e-10) -> ProjectionResult:
    """Euclidean projection of the plane spanned by two lightcone sections."""
    b11, b21 = pairings(sigma1, p, q)
    b12, b22 = pairings(sigma2, p, q)
    det = b11 * b22 - b12 * b21
    det0 = det.value()
    bscale = max(abs(x.value()) for x in (b11, b12, b21, b22))
    if abs(det0) < tol * max(1.0, bscale ** 2):
        raise ProjectionSingular(
            f"det B = {det0:.3e}: no Euclidean projection at base {base}")
    inv = det.reciprocal()
    a = b12 * inv
    b = -1.0 * (b11 * inv)
    c = -1.0 * (b22 * inv)
    d = b21 * inv
    Fhat = tuple(a * s1 + b * s2 for s1, s2 in zip(sigma1, sigma2))
    That = tuple(c * s1 + d * s2 for s1, s2 in zip(sigma1, sigma2))
    return ProjectionResult(fhat=Fhat[2:5], that=That[2:5], Fhat=Fhat, That=That,
                            det_b=float(det0), base=tuple(base))


def immersion_margin(lp: LiftPair) -> float:
    """Smallest singular value of X -> (d_X F, d_X T) at the base point.

    Positive bounded away from zero iff the lift is a Legendre immersion
    there (no common kernel direction of dF and dT).
    """
    cols = []
    for which in ("u", "v"):
        col = np.concatenate([vec_values(deriv_vec(lp.F, which)),
                              vec_values(deriv_vec(lp.T, which))])
        cols.append(col)
    m = np.column_stack(cols)
    return float(np.linalg.svd(m, compute_uv=False)[-1])
