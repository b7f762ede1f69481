"""Shared test utilities: random surface generation and steering instances."""

from __future__ import annotations

import numpy as np

from liesurf.curvature import curvature_sphere_lift, principal_data
from liesurf.errors import LieSurfError
from liesurf.legendre import compute_normal, lift
from liesurf.pipeline import classify_point
from liesurf.surface import parse_surface
from liesurf.transform import choose_phat, steer


def poly_text(coeffs: dict) -> str:
    """Expression text for sum of c * u^i * v^j."""
    parts = []
    for (i, j), c in sorted(coeffs.items()):
        if c == 0.0:
            continue
        factors = [repr(float(c))]
        if i:
            factors.append("u" if i == 1 else f"u^{i}")
        if j:
            factors.append("v" if j == 1 else f"v^{j}")
        parts.append("*".join(factors))
    return " + ".join(parts) if parts else "0"


def graph_surface_text(coeffs: dict, domain=(-0.5, 0.5, -0.5, 0.5)) -> str:
    return (f"x = u\ny = v\nz = {poly_text(coeffs)}\n"
            f"domain = {domain[0]} {domain[1]} {domain[2]} {domain[3]}\n")


def random_graph_coeffs(rng: np.random.Generator, even_in_u: bool) -> dict:
    """Quadratic + higher terms of a graph surface, distinct curvatures at 0.

    With ``even_in_u`` the curved sphere along the u direction has vanishing
    first curvature derivative along its own principal field (a type >= 2
    point by symmetry).
    """
    k1 = rng.uniform(0.6, 1.6) * rng.choice([-1.0, 1.0])
    k2 = k1 + rng.uniform(0.5, 1.5) * rng.choice([-1.0, 1.0])
    coeffs = {(2, 0): k1 / 2.0, (0, 2): k2 / 2.0}
    candidates = [(2, 1), (0, 3), (4, 0), (2, 2), (0, 4)]
    if not even_in_u:
        candidates += [(3, 0), (1, 2)]
        coeffs[(3, 0)] = rng.uniform(0.2, 0.6) * rng.choice([-1.0, 1.0])
    else:
        coeffs[(4, 0)] = rng.uniform(0.2, 0.6) * rng.choice([-1.0, 1.0])
    for mono in candidates:
        if rng.random() < 0.5:
            coeffs[mono] = coeffs.get(mono, 0.0) + rng.uniform(-0.3, 0.3)
    return coeffs


def u_sphere_index(pd) -> int:
    """Index of the curvature sphere whose principal direction is the u axis."""
    d1 = abs(pd.dir1[0].value())
    d2 = abs(pd.dir2[0].value())
    return 1 if d1 >= d2 else 2


def make_steered_instance(seed: int, kind: str):
    """Random steered surface instance at (0, 0).

    kind: 'generic-type1', 'generic-type2', 'degenerate-type2'.
    Returns (surf, A, sphere_index) or None when the draw is unusable
    (umbilic, borderline margins, no Euclidean projection).
    """
    rng = np.random.default_rng(seed)
    even = kind != "generic-type1"
    text = graph_surface_text(random_graph_coeffs(rng, even_in_u=even))
    surf = parse_surface(text)
    try:
        f, n = surf.eval_jet(0.0, 0.0, 6)
        t = compute_normal(f)
        pd = principal_data(f, t)
        if pd.umbilic or pd.umbilic_margin < 0.2:
            return None
        lp = lift(f, t, base=(0.0, 0.0))
        sphere = u_sphere_index(pd)
        sigma = curvature_sphere_lift(lp, pd, sphere).sigma
        mode = "degenerate" if kind == "degenerate-type2" else "generic"
        xi = float(rng.uniform(-1.2, 1.2)) if mode == "degenerate" else 0.0
        ctx = choose_phat(sigma, (0.0, 0.0), mode, seed=seed, xi=xi)
        a = steer(ctx)
        out = classify_point(surf, a, (0.0, 0.0))
    except LieSurfError:
        return None
    # skip borderline draws: every decision margin must clear its threshold
    scale = out.margins.get("scale", 1.0)
    decisive = [abs(out.margins.get(k, 0.0)) for k in
                ("dXlambda", "dXdXlambda", "dXdXdXlambda")]
    if max(decisive) < 50 * 1e-7 * scale:
        return None
    return surf, a, sphere, out
