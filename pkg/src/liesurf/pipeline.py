"""Orchestration: point classification, domain scans, sweeps and steering.

This is the layer the HTTP service and the CLI sit on.  A *point
classification* runs both pipelines (direct front criteria on the projected
surface and the Lie-geometric criteria on the transformed curvature sphere
lifts) and cross-checks them; a *domain run* scans the grid for the singular
locus, refines it by Newton iteration on the true area density, hunts down
the distinguished points (degenerate points along the locus, critical zeros,
corank-2 points) and reports them with margins.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import classify as cls_mod
from .classify import (
    SingularityClass,
    SurfaceType,
    classify_lie,
    classify_rank0,
    classify_rank1,
    classify_umbilic,
    det3_density,
    rank_of_df,
    type_from_surface,
)
from .curvature import cubic_form, curvature_sphere_lift, principal_data
from .errors import (
    ConfigError,
    LieSurfError,
    NoTransition,
    NotSingularHere,
    TypeIncompatible,
)
from .gridscan import chain_segments, critical_candidates, marching_squares, scan_grid
from .jets import DEFAULT_ORDER, Jet2, directional_derivative
from .legendre import compute_normal, lift
from .minkowski import P_EUCLIDEAN, inner, is_lie_transformation
from .surface import SurfaceExpr, parse_surface
from .transform import apply, choose_phat, matvec_jets, steer

SPHERE_TOL = 1e-7


@dataclass
class PointOutcome:
    """Merged result of classifying one parameter point."""

    point: tuple
    rank: int
    cls: str
    method: str
    margins: dict = field(default_factory=dict)
    agreement: bool | None = None
    direct_cls: str | None = None
    lie_cls: str | None = None
    sphere_index: int | None = None
    surface_type: str | None = None
    note: str | None = None

    def as_report_dict(self) -> dict:
        return {
            "uv": [float(self.point[0]), float(self.point[1])],
            "rank": self.rank,
            "class": self.cls,
            "margins": {k: float(v) for k, v in self.margins.items()},
            "method": self.method,
        }


def surface_jets(surf: SurfaceExpr, point, order=DEFAULT_ORDER):
    f, n = surf.eval_jet(float(point[0]), float(point[1]), order)
    t = n if n is not None else compute_normal(f)
    return f, t


def transformed_jets(surf: SurfaceExpr, a, point, order=DEFAULT_ORDER):
    """(fhat, that) jets of the (possibly transformed) surface at a point."""
    f, t = surface_jets(surf, point, order)
    if a is None:
        return f, t
    lp = lift(f, t, base=point)
    pr = apply(a, lp)
    return pr.fhat, pr.that


def density_jet(surf: SurfaceExpr, a, point, order=3) -> Jet2:
    fhat, that = transformed_jets(surf, a, point, order)
    return det3_density(fhat, that)


def classify_point(surf: SurfaceExpr, a, point, order=DEFAULT_ORDER,
                   zero_factor: float = cls_mod.ZERO_FACTOR) -> PointOutcome:
    """Classify the (transformed) surface at one parameter point.

    With no matrix only the direct path applies (the surface itself may be a
    front normal form).  With a matrix, the original surface must be
    immersed; the Lie-geometric path runs on the transformed curvature
    sphere lifts and is cross-checked against the direct path on the
    projection.
    """
    point = (float(point[0]), float(point[1]))
    if a is None:
        return _classify_direct_only(surf, point, order, zero_factor)

    f, t = surface_jets(surf, point, order)
    lp = lift(f, t, base=point)
    pr = apply(a, lp)
    fhat, that = pr.fhat, pr.that
    lam = det3_density(fhat, that)
    lam_scale = cls_mod._lambda_scale(lam)
    pd = principal_data(f, t)

    if abs(lam.value()) > cls_mod.SINGULAR_TOL * lam_scale:
        out = PointOutcome(point=point, rank=2, cls=SingularityClass.REGULAR.value,
                           method="Direct", margins={"lambda": lam.value()})
        if pd.umbilic:
            kind, margins = classify_umbilic(fhat, that, cubic_form(lp, pd.kappa1.value()),
                                             point)
            out.margins.update(margins)
            out.note = f"umbilic point ({kind.value})"
        return out

    if pd.umbilic:
        return _classify_umbilic_point(surf, point, lp, pd, fhat, that, lam)

    # which transformed curvature sphere is annihilated by p
    sigmas = [curvature_sphere_lift(lp, pd, i).sigma for i in (1, 2)]
    asigmas = [matvec_jets(a, s) for s in sigmas]
    pl = [float(x) for x in P_EUCLIDEAN]
    vals = []
    for s in asigmas:
        v = np.array([c.value() for c in s])
        vals.append(abs(inner(list(v), pl)) / (1.0 + np.linalg.norm(v)))
    i_star = int(np.argmin(vals)) + 1
    if vals[i_star - 1] > SPHERE_TOL:
        raise NotSingularHere(
            f"no transformed curvature sphere annihilated by p at {point}")
    other = 2 if i_star == 1 else 1
    X = pd.direction(i_star)
    lie = classify_lie(asigmas[i_star - 1], asigmas[other - 1], X, point)

    rank, _ = rank_of_df(fhat)
    if rank == 0:
        direct = classify_rank0(fhat, that, point, lam=lam)
    else:
        direct = classify_rank1(fhat, that, point, lam=lam, zero_factor=zero_factor)
    stype, tmargins = type_from_surface(pd, i_star)

    margins = dict(direct.margins)
    margins.update({f"lie_{k}": v for k, v in lie.margins.items()})
    margins.update({f"type_{k}": v for k, v in tmargins.items()})
    agree = direct.cls == lie.cls
    return PointOutcome(point=point, rank=rank,
                        cls=direct.cls.value, method="Both" if agree else "Direct",
                        margins=margins, agreement=agree,
                        direct_cls=direct.cls.value, lie_cls=lie.cls.value,
                        sphere_index=i_star, surface_type=stype.value)


def _classify_direct_only(surf, point, order, zero_factor) -> PointOutcome:
    fhat, that = transformed_jets(surf, None, point, order)
    lam = det3_density(fhat, that)
    if abs(lam.value()) > cls_mod.SINGULAR_TOL * cls_mod._lambda_scale(lam):
        return PointOutcome(point=point, rank=2, cls=SingularityClass.REGULAR.value,
                            method="Direct", margins={"lambda": lam.value()})
    rank, _ = rank_of_df(fhat)
    if rank == 0:
        rep = classify_rank0(fhat, that, point, lam=lam)
    else:
        rep = classify_rank1(fhat, that, point, lam=lam, zero_factor=zero_factor)
    return PointOutcome(point=point, rank=rank, cls=rep.cls.value, method="Direct",
                        margins=rep.margins, direct_cls=rep.cls.value)


def _classify_umbilic_point(surf, point, lp, pd, fhat, that, lam) -> PointOutcome:
    cubic = cubic_form(lp, pd.kappa1.value())
    result, margins = classify_umbilic(fhat, that, cubic, point)
    rank, _ = rank_of_df(fhat)
    if rank == 0:
        direct = classify_rank0(fhat, that, point, lam=lam)
        agree = direct.cls == result.cls
        m = dict(direct.margins)
        m.update({f"lie_{k}": v for k, v in margins.items()})
        m["discriminant"] = margins["discriminant"]
        return PointOutcome(point=point, rank=0, cls=direct.cls.value,
                            method="Both" if agree else "Direct", margins=m,
                            agreement=agree, direct_cls=direct.cls.value,
                            lie_cls=result.cls.value, note="umbilic")
    direct = classify_rank1(fhat, that, point, lam=lam)
    m = dict(direct.margins)
    m["discriminant"] = margins["discriminant"]
    return PointOutcome(point=point, rank=rank, cls=direct.cls.value, method="Direct",
                        margins=m, direct_cls=direct.cls.value, note="umbilic")


# -- Newton refinements ---------------------------------------------------------------


def _in_domain(pt, domain, slack=0.05):
    u0, u1, v0, v1 = domain
    su, sv = slack * (u1 - u0), slack * (v1 - v0)
    return (u0 - su <= pt[0] <= u1 + su) and (v0 - sv <= pt[1] <= v1 + sv)


def _order_for(a, lam_order: int) -> int:
    """Jet order needed so the transformed density has ``lam_order`` orders:
    the projection pipeline consumes 3 (2 for the shape operator, 1 for the
    3x3 determinant), a direct surface only 1."""
    return lam_order + (1 if a is None else 3)


def refine_zero(surf, a, pt, domain, atol=1e-10, max_iter=30):
    """Newton iteration driving the true area density to |lambda| <= atol."""
    u, v = float(pt[0]), float(pt[1])
    for _ in range(max_iter):
        try:
            lam = density_jet(surf, a, (u, v), order=_order_for(a, 1))
        except LieSurfError:
            return None
        val = lam.value()
        scale = cls_mod._lambda_scale(lam)
        if not np.isfinite(val):
            return None
        gu, gv = lam.gradient()
        g2 = gu * gu + gv * gv
        if abs(val) <= atol * max(1.0, scale):
            return (u, v)
        if g2 == 0.0:
            return None
        u -= val * gu / g2
        v -= val * gv / g2
        if not _in_domain((u, v), domain, slack=0.2):
            return None
    return None


def refine_special_on_locus(surf, a, pt, domain, atol=1e-11, max_iter=40):
    """Newton on (lambda, d_X lambda) = (0, 0): degenerate point on the locus."""
    u, v = float(pt[0]), float(pt[1])
    for _ in range(max_iter):
        try:
            fhat, that = transformed_jets(surf, a, (u, v), order=_order_for(a, 2) + 1)
            lam = det3_density(fhat, that)
            X = cls_mod.null_field(fhat)
        except LieSurfError:
            return None
        m1 = directional_derivative(lam, X)
        g = np.array([lam.value(), m1.value()])
        scale = max(1.0, cls_mod._lambda_scale(lam))
        if not np.all(np.isfinite(g)):
            return None
        if np.all(np.abs(g) <= atol * scale * 10):
            return (u, v)
        jac = np.array([[*lam.gradient()], [*m1.gradient()]])
        try:
            step = np.linalg.solve(jac, g)
        except np.linalg.LinAlgError:
            return None
        u -= step[0]
        v -= step[1]
        if not _in_domain((u, v), domain, slack=0.2):
            return None
    return None


def refine_critical(surf, a, pt, domain, atol=1e-11, max_iter=40):
    """Newton on grad lambda = 0; keep the point only if lambda ~ 0 there."""
    u, v = float(pt[0]), float(pt[1])
    for _ in range(max_iter):
        try:
            lam = density_jet(surf, a, (u, v), order=_order_for(a, 2))
        except LieSurfError:
            return None
        g = np.array(lam.gradient())
        scale = max(1.0, cls_mod._lambda_scale(lam))
        if not np.all(np.isfinite(g)):
            return None
        if np.all(np.abs(g) <= atol * scale * 10):
            if abs(lam.value()) <= cls_mod.SINGULAR_TOL * scale:
                return (u, v)
            return None
        h = lam.hessian()
        try:
            step = np.linalg.solve(h, g)
        except np.linalg.LinAlgError:
            return None
        u -= step[0]
        v -= step[1]
        if not _in_domain((u, v), domain, slack=0.2):
            return None
    return None


# -- domain runs ---------------------------------------------------------------------------


@dataclass
class RunConfig:
    surface_text: str
    matrix: np.ndarray | None = None
    steering: dict | None = None       # {point, mode, sphere, seed, xi}
    grid: tuple = (41, 41)
    order: int = DEFAULT_ORDER
    domain: tuple | None = None
    seed: int = 0
    max_points: int = 64
    projection_tol: float | None = None

    def validate(self):
        if self.grid[0] < 2 or self.grid[1] < 2:
            raise ConfigError("grid resolution must be at least 2 per axis")
        if not 4 <= self.order <= 10:
            raise ConfigError("jet order must be in [4, 10]")
        if self.domain is not None and not (
                np.all(np.isfinite(self.domain))
                and self.domain[0] < self.domain[1] and self.domain[2] < self.domain[3]):
            raise ConfigError("domain must be finite and ordered")
        if self.matrix is not None and self.steering is not None:
            raise ConfigError("give either a matrix or a steering spec, not both")


def resolve_steering(surf: SurfaceExpr, steering: dict, order=DEFAULT_ORDER):
    """Build the steering matrix A from a steering spec."""
    point = tuple(steering.get("point", (0.0, 0.0)))
    mode = steering.get("mode", "generic")
    seed = int(steering.get("seed", 0))
    xi = float(steering.get("xi", 0.0))
    sphere = steering.get("sphere")
    f, t = surface_jets(surf, point, order)
    lp = lift(f, t, base=point)
    pd = principal_data(f, t)
    if sphere is None:
        # prefer the sphere with the lowest type bucket (most structure to show)
        ranks = {}
        for i in (1, 2):
            stype, _ = type_from_surface(pd, i)
            ranks[i] = {"Type1": 1, "Type2": 2, "Type3": 3, "HigherType": 4}[stype.value]
        sphere = min(ranks, key=ranks.get)
    sigma = curvature_sphere_lift(lp, pd, int(sphere)).sigma
    ctx = choose_phat(sigma, point, mode, seed=seed, xi=xi)
    a = steer(ctx)
    return a, ctx, int(sphere)


def run_classify(config: RunConfig) -> dict:
    config.validate()
    surf = parse_surface(config.surface_text)
    domain = config.domain or surf.domain
    a = config.matrix
    ctx = None
    if config.steering is not None:
        a, ctx, _ = resolve_steering(surf, config.steering, config.order)
    if a is not None:
        ok, res = is_lie_transformation(np.asarray(a), 1e-9)
        if not ok:
            raise ConfigError(f"matrix is not in O(4,2): residual {res:.3e}")

    scan = scan_grid(surf, a, domain, config.grid,
                     det_b_tol=config.projection_tol or 1e-10)
    cell = max((domain[1] - domain[0]) / (config.grid[0] - 1),
               (domain[3] - domain[2]) / (config.grid[1] - 1))

    segments = marching_squares(scan)
    chains = chain_segments(segments, tol=cell * 1e-3)

    locus = []
    for chain in chains:
        refined = []
        for pt in chain:
            r = refine_zero(surf, a, pt, domain)
            if r is not None:
                refined.append(r)
        if len(refined) >= 2:
            locus.append(refined)

    special = _find_special_points(surf, a, locus, scan, domain, config)
    points = [p for p in special if _in_domain(p.point, domain, slack=0.0)]

    if not points:
        # no distinguished points: classify representatives along each chain
        reps = []
        for chain in locus:
            for i in sorted({0, len(chain) // 2, len(chain) - 1}):
                pt = chain[i]
                if all(np.hypot(pt[0] - q[0], pt[1] - q[1]) > 1e-6 * max(cell, 1.0)
                       for q in reps):
                    reps.append(pt)
        for pt in reps[:config.max_points]:
            out = _safe_classify(surf, a, pt, config.order)
            if out is not None:
                points.append(out)

    points = points[:config.max_points]
    points.sort(key=lambda o: (o.point[0], o.point[1]))

    report = {
        "surface": config.surface_text,
        "matrixA": None if a is None else [[float(x) for x in row] for row in np.asarray(a)],
        "points": [p.as_report_dict() for p in points],
        "locus": [[[float(u), float(v)] for (u, v) in chain] for chain in locus],
        "stats": {
            "grid": list(config.grid),
            "domain": [float(x) for x in domain],
            "masked_fraction": scan.masked_fraction,
            "segments": len(segments),
        },
    }
    if ctx is not None:
        report["phat"] = [float(x) for x in ctx.phat_xi()]
        report["steering"] = {"mode": ctx.mode, "xi": ctx.xi,
                              "point": [float(x) for x in ctx.base]}
    report["outcomes"] = points
    return report


def _safe_classify(surf, a, pt, order) -> PointOutcome | None:
    try:
        return classify_point(surf, a, pt, order)
    except LieSurfError as e:
        return PointOutcome(point=tuple(pt), rank=-1,
                            cls=SingularityClass.UNRESOLVED.value,
                            method="Direct", margins={}, note=e.code)


def _find_special_points(surf, a, locus, scan, domain, config) -> list:
    cell = max((domain[1] - domain[0]) / (config.grid[0] - 1),
               (domain[3] - domain[2]) / (config.grid[1] - 1))
    candidates = []

    # degenerate points along the locus: sign changes of d_X lambda
    for chain in locus:
        margins = []
        prev_x = None
        for pt in chain:
            try:
                fhat, that = transformed_jets(surf, a, pt, 4)
                lam = det3_density(fhat, that)
                X = cls_mod.null_field(fhat)
            except LieSurfError:
                margins.append(None)
                continue
            xval = np.array([X[0].value(), X[1].value()])
            if prev_x is not None and float(np.dot(prev_x, xval)) < 0.0:
                xval = -xval
                X = (-1.0 * X[0], -1.0 * X[1])
            prev_x = xval
            margins.append(float(directional_derivative(lam, X).value()))
        for i in range(len(chain) - 1):
            m1, m2 = margins[i], margins[i + 1]
            if m1 is None or m2 is None:
                continue
            if m1 == 0.0 or m1 * m2 < 0.0:
                seed = chain[i] if abs(m1) <= abs(m2) else chain[i + 1]
                r = refine_special_on_locus(surf, a, seed, domain)
                if r is not None:
                    candidates.append(r)

    # critical zeros of the density (lips, beaks, D4 and friends)
    for pt in critical_candidates(scan):
        r = refine_critical(surf, a, pt, domain)
        if r is not None:
            candidates.append(r)

    merged = []
    for pt in candidates:
        if all(np.hypot(pt[0] - q[0], pt[1] - q[1]) > 1e-5 * max(cell, 1.0)
               for q in merged):
            merged.append(pt)

    outcomes = []
    for pt in merged[:config.max_points]:
        out = _safe_classify(surf, a, pt, config.order)
        if out is not None and out.cls != SingularityClass.REGULAR.value:
            outcomes.append(out)
    return outcomes


# -- sweep --------------------------------------------------------------------------------


def run_sweep(surface_text: str, point, xi_range, family=None, steering: dict | None = None,
              samples: int = 11, order: int = DEFAULT_ORDER, bisect_tol: float = 1e-8) -> dict:
    """Classify at a fixed point along a one-parameter matrix family.

    ``family`` maps xi to a matrix; alternatively a degenerate steering spec
    builds the family phat + xi sigma(x).  Bisects the sign change of the
    det Hess margin to locate the class transition.
    """
    surf = parse_surface(surface_text)
    if family is None:
        if steering is None:
            raise ConfigError("sweep needs a matrix family or a steering spec")
        steering = dict(steering)
        steering.setdefault("mode", "degenerate")
        steering.setdefault("point", point)
        if steering["mode"] != "degenerate":
            raise ConfigError("sweep steering must use degenerate mode")
        _, ctx, sphere = resolve_steering(surf, steering, order)

        def family(xi):
            return steer(replace(ctx, xi=float(xi)))

    lo, hi = float(xi_range[0]), float(xi_range[1])
    xis = np.linspace(lo, hi, samples)

    def margin_and_class(xi):
        out = classify_point(surf, family(float(xi)), point, order)
        m = out.margins.get("lie_detHess", out.margins.get("detHess", 0.0))
        return float(m), out

    rows = []
    for xi in xis:
        m, out = margin_and_class(xi)
        rows.append({"xi": float(xi), "class": out.cls, "detHess": m})

    bracket = None
    for i in range(len(rows) - 1):
        if rows[i]["detHess"] * rows[i + 1]["detHess"] < 0.0:
            bracket = (rows[i]["xi"], rows[i + 1]["xi"])
            break
    if bracket is None:
        raise NoTransition(f"classification constant over [{lo}, {hi}]")

    a, b = bracket
    ma, _ = margin_and_class(a)
    while b - a > bisect_tol:
        mid = 0.5 * (a + b)
        mm, _ = margin_and_class(mid)
        if ma * mm <= 0.0:
            b = mid
        else:
            a, ma = mid, mm
    xi_star = 0.5 * (a + b)
    _, out_star = margin_and_class(xi_star)

    return {
        "surface": surface_text,
        "point": [float(point[0]), float(point[1])],
        "rows": rows,
        "transition_xi": float(xi_star),
        "transition_class": out_star.cls,
        "bracket": [float(a), float(b)],
        "transition_outcome": out_star,
    }


# -- steering to a target class ----------------------------------------------------------------


_TARGET_TYPES = {
    SingularityClass.CUSPIDAL_EDGE: SurfaceType.TYPE1,
    SingularityClass.SWALLOWTAIL: SurfaceType.TYPE2,
    SingularityClass.CUSPIDAL_LIPS: SurfaceType.TYPE2,
    SingularityClass.CUSPIDAL_BEAKS: SurfaceType.TYPE2,
    SingularityClass.CUSPIDAL_BUTTERFLY: SurfaceType.TYPE3,
}


def run_steer(surface_text: str, point, target: str, seed: int = 0,
              order: int = DEFAULT_ORDER) -> dict:
    """Construct A achieving the target class at the point, with verification."""
    try:
        target_cls = SingularityClass(target)
    except ValueError:
        raise ConfigError(f"unknown target class {target!r}")
    if target_cls not in _TARGET_TYPES:
        raise ConfigError(f"target {target} is not steerable")
    needed = _TARGET_TYPES[target_cls]

    surf = parse_surface(surface_text)
    point = (float(point[0]), float(point[1]))
    f, t = surface_jets(surf, point, order)
    lp = lift(f, t, base=point)
    pd = principal_data(f, t)
    types = {i: type_from_surface(pd, i)[0] for i in (1, 2)}
    usable = [i for i, st in types.items() if st == needed]
    if not usable:
        raise TypeIncompatible(
            f"target {target} needs a {needed.value} curvature sphere at {point}; "
            f"found {types[1].value} and {types[2].value}")
    sphere = usable[0]
    sigma = curvature_sphere_lift(lp, pd, sphere).sigma

    mode = "degenerate" if target_cls in (SingularityClass.CUSPIDAL_LIPS,
                                          SingularityClass.CUSPIDAL_BEAKS) else "generic"
    ctx = choose_phat(sigma, point, mode, seed=seed)

    xi = 0.0
    if mode == "degenerate":
        xi = _xi_for_hessian_sign(sigma, ctx,
                                  +1.0 if target_cls is SingularityClass.CUSPIDAL_LIPS
                                  else -1.0)
        ctx = replace(ctx, xi=xi)
    a = steer(ctx)
    out = classify_point(surf, a, point, order)
    if out.cls != target_cls.value:
        raise TypeIncompatible(
            f"steering produced {out.cls}, expected {target}; margins {out.margins}")
    return {
        "matrix": [[float(x) for x in row] for row in a],
        "phat": [float(x) for x in ctx.phat_xi()],
        "xi": float(xi),
        "mode": mode,
        "sphere": sphere,
        "verification": out,
        "surface": surface_text,
    }


def _xi_for_hessian_sign(sigma, ctx, sign: float) -> float:
    """det Hess(sigma, phat + xi sigma(x)) is affine in xi; pick xi on the
    requested side of the root."""

    def det_at(xi):
        pvec = list(ctx.phat + xi * ctx.sigma_value)
        h = inner(sigma, pvec)
        return float(np.linalg.det(h.hessian()))

    d0, d1 = det_at(0.0), det_at(1.0)
    slope = d1 - d0
    if abs(slope) < 1e-14:
        raise TypeIncompatible("Hessian family is constant in xi; cannot steer the sign")
    root = -d0 / slope
    step = 1.0 if slope * sign > 0 else -1.0
    return root + step
