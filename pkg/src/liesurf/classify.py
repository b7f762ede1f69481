"""Singularity detection and classification for fronts.

Two independent pipelines produce the same class and cross-check each other:

direct (area density) path
    lambda = det(f_u, f_v, t) and a null vector field X spanning ker df
    along the singular set.  Rank-1 classes by the iterated derivatives
    d_X lambda, d_X d_X lambda, d_X d_X d_X lambda together with d lambda
    and det Hess lambda; rank-0 (corank 2) points by the sign of
    det Hess lambda alone.

Lie-geometric path
    with the curvature sphere lift sigma_1 satisfying (sigma_1(x), p) = 0,
    the same classes are read off membership of iterated derivatives
    d_X...d_X sigma_1 in the line s_1(x), the gradient of (sigma_1, p), and
    det Hess (sigma_1, p).

Every report carries its raw margins: a criterion value counts as zero when
|value| <= 1e-7 * (1 + magnitude of the consulted derivatives), and
borderline calls stay auditable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    NotFront,
    NotRank0,
    NotRank1,
    NotSingular,
    NotSingularHere,
    NotUmbilic,
    Umbilic,
)
from .jets import Jet2, directional_derivative
from .legendre import cross3, deriv_vec, dot3, vec_values
from .minkowski import P_EUCLIDEAN, Q_EUCLIDEAN, inner
from .curvature import CubicForm, PrincipalData, cubic_discriminant

ZERO_FACTOR = 1e-7
RANK_TOL = 1e-7
SINGULAR_TOL = 1e-7


class SingularityClass(str, enum.Enum):
    REGULAR = "Regular"
    CUSPIDAL_EDGE = "CuspidalEdge"
    SWALLOWTAIL = "Swallowtail"
    CUSPIDAL_LIPS = "CuspidalLips"
    CUSPIDAL_BEAKS = "CuspidalBeaks"
    CUSPIDAL_BUTTERFLY = "CuspidalButterfly"
    TYPE2_DEGENERATE = "Type2Degenerate"
    TYPE3_DEGENERATE = "Type3Degenerate"
    D4_PLUS = "D4Plus"
    D4_MINUS = "D4Minus"
    UNRESOLVED = "Unresolved"


class UmbilicType(str, enum.Enum):
    ELLIPTIC = "Elliptic"
    HYPERBOLIC = "Hyperbolic"
    DEGENERATE = "Degenerate"


class SurfaceType(str, enum.Enum):
    TYPE1 = "Type1"
    TYPE2 = "Type2"
    TYPE3 = "Type3"
    HIGHER = "HigherType"


TYPE_BUCKETS = {
    SurfaceType.TYPE1: {SingularityClass.CUSPIDAL_EDGE},
    SurfaceType.TYPE2: {SingularityClass.SWALLOWTAIL, SingularityClass.CUSPIDAL_LIPS,
                        SingularityClass.CUSPIDAL_BEAKS, SingularityClass.TYPE2_DEGENERATE},
    SurfaceType.TYPE3: {SingularityClass.CUSPIDAL_BUTTERFLY, SingularityClass.TYPE3_DEGENERATE},
}


@dataclass
class ClassificationReport:
    point: tuple
    rank: int
    cls: SingularityClass
    margins: dict = field(default_factory=dict)
    method: str = "Direct"  # Direct | LieGeometric | Both


# -- signed area density -----------------------------------------------------------


@dataclass(frozen=True)
class DensityJet:
    lam: Jet2
    source: str  # det3 | det6 | liftproduct


def jet_det(rows):
    """Determinant of a small matrix whose entries are jets or floats.

    Cofactor expansion along the first column with zero-skip; exact-zero
    float entries (the constant p, q columns) prune most of the recursion.
    """
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = None
    for i in range(n):
        a = rows[i][0]
        if isinstance(a, float) and a == 0.0:
            continue
        minor = [row[1:] for j, row in enumerate(rows) if j != i]
        term = a * jet_det(minor)
        if i % 2:
            term = -term
        acc = term if acc is None else acc + term
    if acc is None:
        return 0.0  # all-float zero column; floats mix fine with jets upstream
    return acc


def det3_density(f, t) -> Jet2:
    fu, fv = deriv_vec(f, "u"), deriv_vec(f, "v")
    return dot3(cross3(fu, fv), t)


def det6_density(lift_pair) -> Jet2:
    """The 6x6 lift determinant density, signed to equal det3 on the nose.

    det(d_u F, d_v F, T, F, q, p) itself evaluates to -det(f_u, f_v, t)
    (check it on the flat plane at the origin), so the determinant is
    negated here to make the two sources identical rather than opposite.
    The constant q, p columns are moved to the front (an even permutation)
    so the cofactor expansion prunes on their zeros.
    """
    Fu = deriv_vec(lift_pair.F, "u")
    Fv = deriv_vec(lift_pair.F, "v")
    cols = [[float(x) for x in Q_EUCLIDEAN], [float(x) for x in P_EUCLIDEAN],
            Fu, Fv, lift_pair.T, lift_pair.F]
    rows = [[cols[j][i] for j in range(6)] for i in range(6)]
    return -jet_det(rows)


def liftproduct_density(sigma1, sigma2, p=P_EUCLIDEAN) -> Jet2:
    pl = [float(x) for x in p]
    return inner(sigma1, pl) * inner(sigma2, pl)


def area_density(f=None, t=None, lift_pair=None, sigma1=None, sigma2=None,
                 source: str = "det3") -> DensityJet:
    if source == "det3":
        return DensityJet(lam=det3_density(f, t), source=source)
    if source == "det6":
        return DensityJet(lam=det6_density(lift_pair), source=source)
    if source == "liftproduct":
        return DensityJet(lam=liftproduct_density(sigma1, sigma2), source=source)
    raise ValueError(f"unknown density source {source!r}")


# -- rank / null field ----------------------------------------------------------------


def jacobian_values(f) -> np.ndarray:
    fu, fv = deriv_vec(f, "u"), deriv_vec(f, "v")
    return np.column_stack([vec_values(fu), vec_values(fv)])


def rank_of_df(f, tol: float = RANK_TOL):
    """(rank, singular values) of the 3x2 Jacobian at the base point."""
    m = jacobian_values(f)
    s = np.linalg.svd(m, compute_uv=False)
    scale = 1.0 + s[0]
    return int(np.sum(s > tol * scale)), s


def is_front(f, t, tol: float = RANK_TOL) -> bool:
    """(f, t) immersive at the base point."""
    mf = jacobian_values(f)
    mt = jacobian_values(t)
    m = np.vstack([mf, mt])
    s = np.linalg.svd(m, compute_uv=False)
    return bool(s[-1] > tol * (1.0 + s[0]))


def null_field(f):
    """Unit kernel field of df near a rank-1 point, as jets.

    The adjugate columns of N = (df)^T df lie in ker df wherever det N = 0,
    so the better-conditioned column is a smooth vector field spanning the
    kernel along the whole singular curve.  Normalized to unit Euclidean
    parameter length; sign fixed by the largest component at the base point.
    """
    fu, fv = deriv_vec(f, "u"), deriv_vec(f, "v")
    n11, n12, n22 = dot3(fu, fu), dot3(fu, fv), dot3(fv, fv)
    col1 = (n22, -1.0 * n12)
    col2 = (-1.0 * n12, n11)
    c1 = col1[0].value() ** 2 + col1[1].value() ** 2
    c2 = col2[0].value() ** 2 + col2[1].value() ** 2
    col = col1 if c1 >= c2 else col2
    if max(c1, c2) == 0.0:
        raise NotRank1("df vanishes to second order; no rank-1 null field")
    n2 = col[0] * col[0] + col[1] * col[1]
    invn = n2 ** -0.5
    x1, x2 = col[0] * invn, col[1] * invn
    b1, b2 = x1.value(), x2.value()
    big = b1 if abs(b1) >= abs(b2) else b2
    if big < 0:
        x1, x2 = -1.0 * x1, -1.0 * x2
    return x1, x2


# -- margin evaluation -------------------------------------------------------------------


def _lambda_scale(lam: Jet2) -> float:
    order = min(lam.order, 4)
    mags = [abs(lam.partial(i, j)) for i in range(order + 1)
            for j in range(order + 1 - i)]
    return 1.0 + max(mags)


def _density_is_noise(lam: Jet2, f, t) -> bool:
    """Whole density jet at roundoff level relative to the input jets.

    Happens when a transformed surface collapses (e.g. the focal point of a
    sphere): lambda is identically zero and every margin is noise, so no
    sign may be trusted.
    """
    mag = max(float(np.max(np.abs(c.c))) for c in list(f) + list(t))
    return float(np.max(np.abs(lam.c))) <= 1e-11 * (1.0 + mag) ** 3


def _deriv_magnitudes(lam: Jet2) -> dict:
    """Largest n-th derivative magnitude of the density for n = 0..4."""
    out = {}
    for n in range(min(lam.order, 4) + 1):
        out[n] = max(abs(lam.partial(i, n - i)) for i in range(n + 1))
    return out


def density_margins(lam: Jet2, X) -> dict:
    """The rank-1 margins of a density jet along a null field X.

    Raw values plus per-order reference scales: a margin built from n-th
    derivatives of lambda is compared against the n-th derivative magnitude
    of lambda, never against a global jet scale.  Steering matrices can blow
    the density up by orders of magnitude across derivative orders, and a
    single global scale then swamps legitimate low-order margins.
    """
    l1 = directional_derivative(lam, X)
    l2 = directional_derivative(l1, X)
    l3 = directional_derivative(l2, X)
    gu, gv = lam.gradient()
    h = lam.hessian()
    ds = _deriv_magnitudes(lam)
    ref = max(max(ds.values()), 1e-300)
    return {
        "dXlambda": float(l1.value()),
        "dXdXlambda": float(l2.value()),
        "dXdXdXlambda": float(l3.value()),
        "dlambda_norm": float(np.hypot(gu, gv)),
        "detHess": float(np.linalg.det(h)),
        "scale": 1.0 + ref,
        # margins linear in lambda scale with its dominant derivative; the
        # Hessian determinant is quadratic and gets its own reference
        "tolFirst": ref,
        "tolHess": max(ds.get(2, 0.0), 1e-4 * ref) ** 2,
    }


def _decide_rank1(m: dict, zero_factor: float = ZERO_FACTOR) -> SingularityClass:
    tol = zero_factor * m["tolFirst"]
    tol_hess = zero_factor * m["tolHess"]
    if abs(m["dXlambda"]) > tol:
        return SingularityClass.CUSPIDAL_EDGE
    if abs(m["dXdXlambda"]) > tol:
        if m["dlambda_norm"] > tol:
            return SingularityClass.SWALLOWTAIL
        if m["detHess"] > tol_hess:
            return SingularityClass.CUSPIDAL_LIPS
        if m["detHess"] < -tol_hess:
            return SingularityClass.CUSPIDAL_BEAKS
        return SingularityClass.TYPE2_DEGENERATE
    if abs(m["dXdXdXlambda"]) > tol:
        if m["dlambda_norm"] > tol:
            return SingularityClass.CUSPIDAL_BUTTERFLY
        return SingularityClass.TYPE3_DEGENERATE
    return SingularityClass.UNRESOLVED


def classify_rank1(f, t, point=(0.0, 0.0), lam: Jet2 | None = None, X=None,
                   require_front: bool = True,
                   zero_factor: float = ZERO_FACTOR) -> ClassificationReport:
    """Direct front criteria at a rank-1 singular point.

    ``lam`` and ``X`` can be overridden with any density proportional to the
    signed area density and any null field; the class does not depend on the
    choice.
    """
    if lam is None:
        lam = det3_density(f, t)
    scale = _lambda_scale(lam)
    if abs(lam.value()) > SINGULAR_TOL * scale:
        raise NotSingular(f"lambda = {lam.value():.3e} at {point}")
    rank, svals = rank_of_df(f)
    if rank != 1:
        raise NotRank1(f"rank df = {rank} at {point} (singular values {svals})")
    if require_front and not is_front(f, t):
        raise NotFront(f"(f, t) is not immersive at {point}")
    if _density_is_noise(lam, f, t):
        return ClassificationReport(point=tuple(point), rank=1,
                                    cls=SingularityClass.UNRESOLVED,
                                    margins={"scale": _lambda_scale(lam)},
                                    method="Direct")
    if X is None:
        X = null_field(f)
    m = density_margins(lam, X)
    cls = _decide_rank1(m, zero_factor)
    return ClassificationReport(point=tuple(point), rank=1, cls=cls, margins=m,
                                method="Direct")


def classify_rank0(f, t, point=(0.0, 0.0), lam: Jet2 | None = None,
                   require_front: bool = True) -> ClassificationReport:
    """D4 criteria at a corank-2 singular point: the sign of det Hess lambda."""
    rank, svals = rank_of_df(f)
    if rank != 0:
        raise NotRank0(f"rank df = {rank} at {point} (singular values {svals})")
    if require_front and not is_front(f, t):
        raise NotFront(f"(f, t) is not immersive at {point}")
    if lam is None:
        lam = det3_density(f, t)
    scale = _lambda_scale(lam)
    if _density_is_noise(lam, f, t):
        return ClassificationReport(point=tuple(point), rank=0,
                                    cls=SingularityClass.UNRESOLVED,
                                    margins={"scale": scale}, method="Direct")
    det_h = float(np.linalg.det(lam.hessian()))
    ds = _deriv_magnitudes(lam)
    base = max(max(ds.values()), 1e-300)
    tol_hess = max(ds.get(2, 0.0), 1e-4 * base) ** 2
    m = {
        "detHess": det_h,
        "dlambda_norm": float(np.hypot(*lam.gradient())),
        "scale": scale,
        "tolHess": tol_hess,
    }
    tol = ZERO_FACTOR * tol_hess
    if det_h < -tol:
        cls = SingularityClass.D4_PLUS
    elif det_h > tol:
        cls = SingularityClass.D4_MINUS
    else:
        cls = SingularityClass.UNRESOLVED
    return ClassificationReport(point=tuple(point), rank=0, cls=cls, margins=m,
                                method="Direct")


# -- Lie-geometric criteria ------------------------------------------------------------------


def _membership_frame(s1: np.ndarray, s2: np.ndarray) -> np.ndarray:
    """Frame {sigma1(x), sigma2(x), complement} for component extraction."""
    u, s, vt = np.linalg.svd(np.column_stack([s1, s2]))
    comp = u[:, 2:]
    return np.column_stack([s1, s2, comp])


def classify_lie(sigma1, sigma2, X, point=(0.0, 0.0),
                 p: np.ndarray = P_EUCLIDEAN) -> ClassificationReport:
    """Classes read from the lift sigma1 with s_1(x) perp p.

    Membership v in s_1(x) is decided by decomposing v in the frame
    {sigma1(x), sigma2(x), complement}: the consulted derivatives have no
    complement component (asserted via a margin), so membership is the
    vanishing of the sigma2 component.
    """
    # lift scaling freedom: normalize both representatives at the base point
    norm1 = float(np.linalg.norm(vec_values(sigma1)))
    norm2 = float(np.linalg.norm(vec_values(sigma2)))
    sigma1 = tuple((1.0 / norm1) * c for c in sigma1)
    sigma2 = tuple((1.0 / norm2) * c for c in sigma2)
    s1 = vec_values(sigma1)
    s2 = vec_values(sigma2)
    pl = [float(x) for x in p]
    sp1 = float(inner(s1, np.asarray(pl)))
    if abs(sp1) > SINGULAR_TOL * 2.0:
        raise NotSingularHere(f"(sigma1(x), p) = {sp1:.3e}")
    frame = _membership_frame(s1, s2)

    w1 = directional_derivative_vec(sigma1, X)
    w2 = directional_derivative_vec(w1, X)
    w3 = directional_derivative_vec(w2, X)

    def decomp(wjets):
        w = vec_values(wjets)
        coords = np.linalg.solve(frame, w)
        beta = coords[1]  # sigma2 component (unit lifts: already length units)
        residual = float(np.linalg.norm(coords[2:]))
        return float(beta), residual, float(np.linalg.norm(w))

    m1, r1, n1 = decomp(w1)
    m2, r2, n2 = decomp(w2)
    m3, r3, n3 = decomp(w3)

    hp = inner(sigma1, pl)  # scalar jet (sigma1(u,v), p), unit-normalized lift
    gu, gv = hp.gradient()
    det_h = float(np.linalg.det(hp.hessian()))
    hs = _deriv_magnitudes(hp)
    href = max(max(hs.values()), 1e-300)
    tol_g = ZERO_FACTOR * href
    tol_hess = ZERO_FACTOR * max(hs.get(2, 0.0), 1e-4 * href) ** 2
    scale = 1.0 + max(n1, n2, n3)
    tol = ZERO_FACTOR * scale
    # complement components vanish for every derivative consulted before the
    # decision fires; deeper ones legitimately leave the lifted plane
    if abs(m1) > tol:
        residual = r1
    elif abs(m2) > tol:
        residual = max(r1, r2)
    else:
        residual = max(r1, r2, r3)
    m = {
        "dXlambda": m1,
        "dXdXlambda": m2,
        "dXdXdXlambda": m3,
        "dlambda_norm": float(np.hypot(gu, gv)),
        "detHess": det_h,
        "complement_residual": residual,
        "sigma2_p": float(inner(s2, np.asarray(pl))),
        "scale": scale,
    }
    if abs(m1) > tol:
        cls = SingularityClass.CUSPIDAL_EDGE
    elif abs(m2) > tol:
        if m["dlambda_norm"] > tol_g:
            cls = SingularityClass.SWALLOWTAIL
        elif det_h > tol_hess:
            cls = SingularityClass.CUSPIDAL_LIPS
        elif det_h < -tol_hess:
            cls = SingularityClass.CUSPIDAL_BEAKS
        else:
            cls = SingularityClass.TYPE2_DEGENERATE
    elif abs(m3) > tol:
        if m["dlambda_norm"] > tol_g:
            cls = SingularityClass.CUSPIDAL_BUTTERFLY
        else:
            cls = SingularityClass.TYPE3_DEGENERATE
    else:
        cls = SingularityClass.UNRESOLVED
    return ClassificationReport(point=tuple(point), rank=1, cls=cls, margins=m,
                                method="LieGeometric")


def directional_derivative_vec(vec, X):
    return tuple(directional_derivative(c, X) for c in vec)


# -- surface type (what Lie sphere transformations preserve) -----------------------------------


def type_from_surface(pd: PrincipalData, i: int = 1) -> tuple[SurfaceType, dict]:
    """Type bucket of the chosen curvature sphere at the base point.

    The iterated derivative of kappa_i along its own unit principal field
    has the same vanishing pattern as the curvature-line coordinate
    derivatives the bucket is defined by.
    """
    if pd.umbilic:
        raise Umbilic("surface type is defined at non-umbilic points only")
    kappa = pd.kappa(i)
    X = pd.direction(i)
    k1 = directional_derivative(kappa, X)
    k2 = directional_derivative(k1, X)
    k3 = directional_derivative(k2, X)
    scale = 1.0 + abs(kappa.value()) + pd.umbilic_margin
    margins = {"dXkappa": float(k1.value()), "dXdXkappa": float(k2.value()),
               "dXdXdXkappa": float(k3.value()), "scale": scale}
    tol = ZERO_FACTOR * scale
    if abs(margins["dXkappa"]) > tol:
        t = SurfaceType.TYPE1
    elif abs(margins["dXdXkappa"]) > tol:
        t = SurfaceType.TYPE2
    elif abs(margins["dXdXdXkappa"]) > tol:
        t = SurfaceType.TYPE3
    else:
        t = SurfaceType.HIGHER
    return t, margins


# -- umbilic pipeline -----------------------------------------------------------------------------


def classify_umbilic(f, t, cubic: CubicForm, point=(0.0, 0.0),
                     umbilic: bool = True):
    """Umbilic classification from the cubic form discriminant.

    Immersed points report their umbilic kind (elliptic for positive
    discriminant, hyperbolic for negative); singular projections report the
    D4 class (D4+ for negative discriminant, D4- for positive).
    """
    if not umbilic:
        raise NotUmbilic("cubic form classification requires an umbilic point")
    disc = cubic_discriminant(cubic)
    cscale = 1.0 + max(abs(x) for x in cubic.coefficients())
    tol = ZERO_FACTOR * cscale ** 4
    rank, _ = rank_of_df(f)
    margins = {"discriminant": float(disc), "scale": cscale ** 4}
    if rank == 2:
        if disc > tol:
            kind = UmbilicType.ELLIPTIC
        elif disc < -tol:
            kind = UmbilicType.HYPERBOLIC
        else:
            kind = UmbilicType.DEGENERATE
        return kind, margins
    if disc < -tol:
        cls = SingularityClass.D4_PLUS
    elif disc > tol:
        cls = SingularityClass.D4_MINUS
    else:
        cls = SingularityClass.UNRESOLVED
    return ClassificationReport(point=tuple(point), rank=rank, cls=cls,
                                margins=margins, method="LieGeometric"), margins
