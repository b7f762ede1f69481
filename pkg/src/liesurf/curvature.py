"""Shape operator, principal curvatures and curvature sphere lifts.

Conventions (they matter; everything downstream depends on them):

* shape operator S = I^-1 II with II_ij = <f_ij, t>,
* principal curvatures k_i are the eigenvalues of S, so the Rodrigues
  equations hold in the form  d_i t + k_i d_i f = 0  along the principal
  direction d_i of k_i,
* curvature sphere lifts are sigma_i = T + k_i F; with the Rodrigues sign
  above these are exactly the lifts whose derivative along their own
  principal direction stays inside the lifted plane, and they interpret to
  the tangent sphere of signed radius 1/k_i centered at f + t/k_i.

k_1 >= k_2 at the base point is a reporting convention only; singularity
analysis re-binds "sigma_1" to whichever sphere is annihilated by the point
sphere complex.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotImmersed, NotUmbilic, UmbilicAmbiguity, UmbilicDirectionUndefined
from .jets import Jet2
from .legendre import LiftPair, deriv_vec, dot3
from .minkowski import inner


@dataclass(frozen=True)
class PrincipalData:
    """Principal curvatures/directions at a base point, as jets."""

    kappa1: Jet2
    kappa2: Jet2
    dir1: tuple | None  # (X1, X2) jets, unit first-fundamental-form length
    dir2: tuple | None
    umbilic: bool
    umbilic_margin: float  # |k1 - k2| at base

    def kappa(self, i: int) -> Jet2:
        return self.kappa1 if i == 1 else self.kappa2

    def direction(self, i: int):
        d = self.dir1 if i == 1 else self.dir2
        if d is None:
            raise UmbilicDirectionUndefined("principal directions undefined at umbilic")
        return d


def fundamental_forms(f, t):
    fu, fv = deriv_vec(f, "u"), deriv_vec(f, "v")
    fuu = deriv_vec(fu, "u")
    fuv = deriv_vec(fu, "v")
    fvv = deriv_vec(fv, "v")
    E, Fm, G = dot3(fu, fu), dot3(fu, fv), dot3(fv, fv)
    L, M, N = dot3(fuu, t), dot3(fuv, t), dot3(fvv, t)
    return (E, Fm, G), (L, M, N)


def shape_operator(f, t):
    (E, Fm, G), (L, M, N) = fundamental_forms(f, t)
    det_i = E * G - Fm * Fm
    d0 = det_i.value()
    if np.ndim(d0) == 0 and d0 <= 0.0:
        raise NotImmersed(f"det I = {d0:.3e} at base")
    inv = det_i.reciprocal()
    s11 = (G * L - Fm * M) * inv
    s12 = (G * M - Fm * N) * inv
    s21 = (E * M - Fm * L) * inv
    s22 = (E * N - Fm * M) * inv
    return (s11, s12, s21, s22), (E, Fm, G)


def principal_data(f, t, umbilic_tol: float = 1e-8) -> PrincipalData:
    """Eigen-decomposition of the shape operator as jets.

    Direction jets come from the closed-form 2x2 eigenvector composed in jet
    arithmetic (not per-point numerics), so they form smooth fields away
    from umbilics automatically.
    """
    (s11, s12, s21, s22), (E, Fm, G) = shape_operator(f, t)
    tr = s11 + s22
    disc = (s11 - s22) * (s11 - s22) + 4.0 * (s12 * s21)
    d0 = disc.value()
    k_scale = 1.0 + abs(tr.value())
    if d0 <= (umbilic_tol * k_scale) ** 2:
        half = 0.5 * tr
        return PrincipalData(kappa1=half, kappa2=half, dir1=None, dir2=None,
                             umbilic=True, umbilic_margin=float(np.sqrt(max(d0, 0.0))))
    root = disc ** 0.5
    kappa1 = 0.5 * (tr + root)
    kappa2 = 0.5 * (tr - root)
    dirs = []
    for kappa in (kappa1, kappa2):
        va = (s12, kappa - s11)
        vb = (kappa - s22, s21)
        na = va[0].value() ** 2 + va[1].value() ** 2
        nb = vb[0].value() ** 2 + vb[1].value() ** 2
        v = va if na >= nb else vb
        if max(na, nb) <= (1e-13 * k_scale) ** 2:
            raise UmbilicDirectionUndefined("eigenvector numerically undefined")
        n2 = E * (v[0] * v[0]) + 2.0 * (Fm * (v[0] * v[1])) + G * (v[1] * v[1])
        inv = n2 ** -0.5
        x1, x2 = v[0] * inv, v[1] * inv
        b1, b2 = x1.value(), x2.value()
        big = b1 if abs(b1) >= abs(b2) else b2
        if big < 0:
            x1, x2 = -1.0 * x1, -1.0 * x2
        dirs.append((x1, x2))
    return PrincipalData(kappa1=kappa1, kappa2=kappa2, dir1=dirs[0], dir2=dirs[1],
                         umbilic=False, umbilic_margin=float(np.sqrt(d0)))


@dataclass(frozen=True)
class CurvatureSphereLift:
    """sigma_i = T + kappa_i F, a lift of the i-th curvature sphere congruence."""

    sigma: tuple
    index: int


def curvature_sphere_lift(lp: LiftPair, pd: PrincipalData, i: int) -> CurvatureSphereLift:
    if pd.umbilic:
        raise UmbilicAmbiguity("curvature sphere index is meaningless at an umbilic")
    kappa = pd.kappa(i)
    sigma = tuple(tc + kappa * fc for tc, fc in zip(lp.T, lp.F))
    return CurvatureSphereLift(sigma=sigma, index=i)


@dataclass(frozen=True)
class CubicForm:
    """Third-order invariant at an umbilic against the basis X=du, Y=dv."""

    c_xxx: float
    c_xxy: float
    c_xyy: float
    c_yyy: float

    def coefficients(self):
        return (self.c_xxx, self.c_xxy, self.c_xyy, self.c_yyy)


def cubic_form(lp: LiftPair, kappa) -> CubicForm:
    """Umbilic cubic form via the Euclidean expansion

        C(X,Y,Z) = (d_X d_Y d_Z F, T)
                   - kappa [ (d_X d_Y F, d_Z F) + (d_X d_Z F, d_Y F)
                             + (d_Y d_Z F, d_X F) ]

    with kappa frozen at its base value (a valid section choice at an
    umbilic: T + kappa(x) F passes through the curvature sphere there).
    ``kappa`` may be the base-point value or a PrincipalData, in which case
    the umbilic precondition is enforced.
    """
    if isinstance(kappa, PrincipalData):
        if not kappa.umbilic:
            raise NotUmbilic(
                f"cubic form needs an umbilic base point (|k1-k2| = {kappa.umbilic_margin:.3e})")
        kappa = kappa.kappa1.value()
    F, T = lp.F, lp.T
    d1 = {"u": deriv_vec(F, "u"), "v": deriv_vec(F, "v")}
    d2 = {}
    for a in ("u", "v"):
        for b in ("u", "v"):
            d2[a + b] = deriv_vec(d1[a], b)
    d3 = {}
    for ab in d2:
        for c in ("u", "v"):
            d3[ab + c] = deriv_vec(d2[ab], c)

    def coeff(word):
        x, y, z = word
        third = inner(d3[word], T).value()
        corr = (inner(d2[x + y], d1[z]).value()
                + inner(d2[x + z], d1[y]).value()
                + inner(d2[y + z], d1[x]).value())
        return third - kappa * corr

    return CubicForm(c_xxx=coeff("uuu"), c_xxy=coeff("uuv"),
                     c_xyy=coeff("uvv"), c_yyy=coeff("vvv"))


def cubic_form_from_sections(sigma, sigma_tilde) -> CubicForm:
    """C(X,Y,Z) = (d_X d_Y d_Z sigma_tilde, sigma) at the base point.

    General form of the invariant; sigma must pass through the curvature
    sphere at the (umbilic) base point.
    """
    d1 = {"u": deriv_vec(sigma_tilde, "u"), "v": deriv_vec(sigma_tilde, "v")}
    d2 = {a + b: deriv_vec(d1[a], b) for a in "uv" for b in "uv"}
    d3 = {ab + c: deriv_vec(d2[ab], c) for ab in d2 for c in "uv"}
    return CubicForm(c_xxx=inner(d3["uuu"], sigma).value(),
                     c_xxy=inner(d3["uuv"], sigma).value(),
                     c_xyy=inner(d3["uvv"], sigma).value(),
                     c_yyy=inner(d3["vvv"], sigma).value())


def cubic_discriminant(c: CubicForm) -> float:
    """(c_xxx c_xyy - c_xxy^2)(c_yyy c_xxy - c_xyy^2) - (c_xxx c_yyy - c_xxy c_xyy)^2 / 4.

    With coefficients in third-derivative normalization this equals 12 times
    the classical discriminant of the associated binary cubic, so it is a
    weight-6 covariant: its sign is invariant under basis changes of (X, Y)
    and under rescaling of either lift.  Without the 1/4 on the cross term
    the expression is not a covariant at all (its sign is basis dependent).
    Positive at elliptic umbilics, negative at hyperbolic ones.
    """
    a, b, cc, d = c.coefficients()
    return (a * cc - b * b) * (d * b - cc * cc) - (a * d - b * cc) ** 2 / 4.0
