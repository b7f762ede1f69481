"""Lie sphere transformations of lifted surfaces and steering constructions.

Applying A in O(4,2) to a lifted plane and projecting back gives the
transformed surface fhat with unit normal that.  Singularities of fhat at a
chosen point x are *steered* by picking a unit timelike vector phat
orthogonal to a curvature sphere lift sigma(x) and mapping phat to the point
sphere complex p: then (A sigma(x), p) = (sigma(x), phat) = 0, which is
exactly the singularity condition.

Steering modes:

* generic     -- phat is additionally NOT orthogonal to d sigma(T_x), which
                 forces the non-degenerate branch (cuspidal edge /
                 swallowtail / butterfly, by the surface type at x);
* degenerate  -- phat is orthogonal to span{sigma(x), d sigma(T_x)} (the
                 W-space), forcing d(A sigma)_x perp p.  The one-parameter
                 family phat + xi sigma(x) then toggles the sign of
                 det Hess(sigma, phat^xi), switching cuspidal beaks and lips.

All "choose any" steps are deterministic under a seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotOrthogonal, NoTimelikeVector
from .legendre import LiftPair, ProjectionResult, deriv_vec, project, vec_values
from .minkowski import (
    J,
    P_EUCLIDEAN,
    build_isometry_sending,
    inner,
    is_lie_transformation,
)


def matvec_jets(a: np.ndarray, vec):
    """Apply a constant 6x6 matrix to a 6-vector of jets."""
    out = []
    for i in range(6):
        acc = None
        for j in range(6):
            aij = float(a[i, j])
            if aij == 0.0:
                continue
            term = aij * vec[j]
            acc = term if acc is None else acc + term
        if acc is None:
            acc = 0.0 * vec[0]
        out.append(acc)
    return tuple(out)


def apply(a: np.ndarray, lp: LiftPair, tol: float = 1e-9) -> ProjectionResult:
    """Transformed surface (fhat, that) of the lift by A, as jets."""
    ok, res = is_lie_transformation(a, tol)
    if not ok:
        raise NotOrthogonal(f"matrix is not in O(4,2): residual {res:.3e}")
    return project(matvec_jets(a, lp.F), matvec_jets(a, lp.T), base=lp.base)


def parallel_matrix(d: float) -> np.ndarray:
    """The O(4,2) matrix whose projection action is f -> f + d t, t -> t.

    On oriented spheres (center zeta, signed radius c) it acts by
    c -> c - d: the sphere of radius c - d around zeta is tangent to the
    parallel surface at distance d.  In coordinates (a, b, zeta, c) this is
    linear via the scale-free substitute a+b for 1.
    """
    a = np.eye(6)
    a[0, 0] = 1.0 - d * d / 2.0
    a[0, 1] = -d * d / 2.0
    a[0, 5] = d
    a[1, 0] = d * d / 2.0
    a[1, 1] = 1.0 + d * d / 2.0
    a[1, 5] = -d
    a[5, 0] = -d
    a[5, 1] = -d
    return a


@dataclass(frozen=True)
class SteeringContext:
    """A steering choice at one parameter point."""

    base: tuple
    sigma_value: np.ndarray        # sigma(x)
    dsigma_u: np.ndarray           # d_u sigma at x
    dsigma_v: np.ndarray           # d_v sigma at x
    w_basis: np.ndarray            # columns span the W-space (degenerate mode)
    phat: np.ndarray               # unit timelike, perp sigma(x)
    xi: float
    mode: str                      # "generic" or "degenerate"
    witness: float                 # max |(phat, dsigma)| over coordinate directions

    def phat_xi(self) -> np.ndarray:
        """phat + xi sigma(x): still unit timelike and perp to sigma(x)."""
        return self.phat + self.xi * self.sigma_value


def _metric_complement(vectors: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal (Euclidean) basis of the metric-orthogonal complement."""
    m = vectors @ J  # rows: constraints (v_i, .) = 0
    _, s, vt = np.linalg.svd(m)
    rank = int(np.sum(s > tol * max(1.0, s[0] if len(s) else 1.0)))
    return vt[rank:].T


def _timelike_in(subspace: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Seeded unit timelike vector inside the column span, if one exists."""
    g = subspace.T @ J @ subspace
    g = 0.5 * (g + g.T)
    w, vecs = np.linalg.eigh(g)
    k = g.shape[0]
    if w[0] >= -1e-12:
        raise NoTimelikeVector(
            f"restricted metric eigenvalues {np.round(w, 12)} contain no negative direction")
    # Mix the most-timelike eigendirection with the others, scaled so the
    # norm stays negative; this samples the "many choices" freedom.
    z = np.zeros(k)
    z[0] = 1.0
    if k > 1:
        ratio = np.sqrt(np.abs(w[0]) / np.maximum(np.abs(w[1:]), 1e-12))
        z[1:] = rng.uniform(-0.6, 0.6, size=k - 1) * np.minimum(ratio, 10.0) * 0.5
    v = subspace @ (vecs @ z)
    n = inner(v, v)
    if n >= -1e-12:
        v = subspace @ vecs[:, 0]
        n = inner(v, v)
    return v / np.sqrt(-n)


def choose_phat(sigma, base, mode: str, seed: int = 0, xi: float = 0.0) -> SteeringContext:
    """Choose a steering vector phat for the curvature sphere lift sigma.

    ``sigma`` is a 6-vector of jets at the base point.  In degenerate mode
    phat is orthogonal to span{sigma(x), d_u sigma, d_v sigma}; at a point
    where sigma's curvature derivative does not vanish that span contains
    F(x) and the complement carries no timelike vector, so NoTimelikeVector
    correctly signals that degenerate steering is impossible there.
    """
    if mode not in ("generic", "degenerate"):
        raise ValueError(f"unknown steering mode {mode!r}")
    rng = np.random.default_rng(seed)
    s0 = vec_values(sigma)
    su = vec_values(deriv_vec(sigma, "u"))
    sv = vec_values(deriv_vec(sigma, "v"))
    if mode == "degenerate":
        span = np.vstack([s0, su, sv])
        comp = _metric_complement(span)
        if comp.shape[1] == 0:
            raise NoTimelikeVector("orthogonal complement of the steering span is trivial")
        phat = _timelike_in(comp, rng)
    else:
        comp = _metric_complement(s0[None, :])
        scale = 1.0 + max(np.linalg.norm(su), np.linalg.norm(sv))
        for _ in range(64):
            phat = _timelike_in(comp, rng)
            if max(abs(inner(phat, su)), abs(inner(phat, sv))) > 1e-6 * scale:
                break
        else:
            raise NoTimelikeVector("could not find a generic timelike steering vector")
    witness = max(abs(inner(phat, su)), abs(inner(phat, sv)))
    w_basis = _metric_complement(np.vstack([s0, su, sv]))
    return SteeringContext(base=tuple(base), sigma_value=s0, dsigma_u=su, dsigma_v=sv,
                           w_basis=w_basis, phat=phat, xi=float(xi), mode=mode,
                           witness=float(witness))


def steer(ctx: SteeringContext, p: np.ndarray = P_EUCLIDEAN,
          rng: np.random.Generator | None = None) -> np.ndarray:
    """An O(4,2) matrix A with A phat^xi = p; the transformed surface is
    singular at the steering point."""
    return build_isometry_sending(ctx.phat_xi(), p, rng=rng)


def random_p_stabilizer(seed: int, p: np.ndarray = P_EUCLIDEAN) -> np.ndarray:
    """Random element of O(4,2) fixing p (the residual steering freedom)."""
    rng = np.random.default_rng(seed)
    return build_isometry_sending(p, p, rng=rng)
