"""Lightcone lifts and Euclidean projections."""

import numpy as np
import pytest

from liesurf import minkowski as mk
from liesurf.errors import NotIsotropic, NotUnitNormal, ProjectionSingular, RankDeficient
from liesurf.jets import Jet2
from liesurf.legendre import (
    compute_normal,
    deriv_vec,
    dot3,
    immersion_margin,
    lift,
    project,
)
from liesurf.surface import parse_surface

from helpers import graph_surface_text, random_graph_coeffs


def jets_of(text, u0=0.0, v0=0.0, order=6):
    surf = parse_surface(text)
    f, n = surf.eval_jet(u0, v0, order)
    return f, n


def vec_vals(vec):
    return np.array([c.value() for c in vec])


def test_lift_at_origin_plane():
    f, _ = jets_of("x = u\ny = v\nz = 0\n")
    t = compute_normal(f)
    lp = lift(f, t)
    np.testing.assert_allclose(vec_vals(lp.F), [0.5, 0.5, 0, 0, 0, 0], atol=1e-14)
    np.testing.assert_allclose(vec_vals(lp.T), [0, 0, 0, 0, 1, 1], atol=1e-14)


def test_lift_constant_point():
    k = 4
    f = [Jet2.constant(c, k) for c in (1.0, 0.0, 0.0)]
    t = [Jet2.constant(c, k) for c in (1.0, 0.0, 0.0)]
    lp = lift(f, t)
    np.testing.assert_allclose(vec_vals(lp.F), [1, 0, 1, 0, 0, 0], atol=1e-14)
    np.testing.assert_allclose(vec_vals(lp.T), [1, -1, 1, 0, 0, 1], atol=1e-14)


def test_lift_parabolic_cylinder():
    f, _ = jets_of("x = u\ny = u^2\nz = v\n")
    t = compute_normal(f)
    np.testing.assert_allclose(vec_vals(t), [0, -1, 0], atol=1e-14)
    lp = lift(f, t)
    np.testing.assert_allclose(vec_vals(lp.F), [0.5, 0.5, 0, 0, 0, 0], atol=1e-14)
    np.testing.assert_allclose(vec_vals(lp.T), [0, 0, 0, -1, 0, 1], atol=1e-14)


def _all_coeffs_small(jet, tol):
    return float(np.max(np.abs(jet.c))) <= tol


def test_lift_invariants_random_surfaces():
    rng = np.random.default_rng(11)
    p = [float(x) for x in mk.P_EUCLIDEAN]
    q = [float(x) for x in mk.Q_EUCLIDEAN]
    for trial in range(20):
        text = graph_surface_text(random_graph_coeffs(rng, even_in_u=False))
        f, _ = jets_of(text, *rng.uniform(-0.3, 0.3, 2))
        t = compute_normal(f)
        lp = lift(f, t)
        # null and pairing conditions hold identically in the jet
        assert _all_coeffs_small(mk.inner(lp.F, lp.F), 1e-10)
        assert _all_coeffs_small(mk.inner(lp.T, lp.T), 1e-10)
        assert _all_coeffs_small(mk.inner(lp.F, lp.T), 1e-10)
        assert _all_coeffs_small(mk.inner(lp.F, p), 1e-10)
        assert _all_coeffs_small(mk.inner(lp.F, q) + 1.0, 1e-10)
        assert _all_coeffs_small(mk.inner(lp.T, p) + 1.0, 1e-10)
        assert _all_coeffs_small(mk.inner(lp.T, q), 1e-10)
        # isotropy (dF, T) = 0
        for which in ("u", "v"):
            assert _all_coeffs_small(mk.inner(deriv_vec(lp.F, which), lp.T), 1e-9)
        # Legendre immersion: no common kernel of dF and dT
        assert immersion_margin(lp) > 1e-6


def test_lift_precondition_errors():
    f, _ = jets_of("x = u\ny = v\nz = 0\n")
    k = f[0].k
    bad_len = [Jet2.constant(c, k) for c in (0.0, 0.0, 2.0)]
    with pytest.raises(NotUnitNormal):
        lift(f, bad_len)
    bad_dir = [Jet2.constant(c, k) for c in (1.0, 0.0, 0.0)]
    with pytest.raises(NotIsotropic):
        lift(f, bad_dir)


def test_compute_normal_examples():
    f, _ = jets_of("x = u\ny = v\nz = 0\n")
    np.testing.assert_allclose(vec_vals(compute_normal(f)), [0, 0, 1], atol=1e-14)

    f, _ = jets_of("x = u\ny = u^2\nz = v\n")
    np.testing.assert_allclose(vec_vals(compute_normal(f)), [0, -1, 0], atol=1e-14)


def test_compute_normal_rank_deficient_and_supplied():
    f, _ = jets_of("x = u\ny = v^2\nz = v^3\n")
    with pytest.raises(RankDeficient):
        compute_normal(f)
    # the supplied normal satisfies the lift preconditions there
    text = ("x = u\ny = v^2\nz = v^3\n"
            "nx = 0\nny = -3*v / sqrt(9*v^2 + 4)\nnz = 2 / sqrt(9*v^2 + 4)\n")
    f, n = jets_of(text)
    assert abs(dot3(deriv_vec(f, "v"), n).value()) < 1e-12
    lift(f, n)  # does not raise


def test_project_round_trip():
    rng = np.random.default_rng(13)
    for _ in range(20):
        text = graph_surface_text(random_graph_coeffs(rng, even_in_u=False))
        f, _ = jets_of(text, *rng.uniform(-0.3, 0.3, 2))
        t = compute_normal(f)
        lp = lift(f, t)
        pr = project(lp.F, lp.T)
        for a, b in zip(pr.fhat, f):
            np.testing.assert_allclose(a.c, b.c, atol=1e-10)
        for a, b in zip(pr.that, t):
            np.testing.assert_allclose(a.c, b.c, atol=1e-10)


def test_project_basis_covariance():
    rng = np.random.default_rng(17)
    f, _ = jets_of("x = u\ny = u^2\nz = v\n", 0.1, -0.2)
    t = compute_normal(f)
    lp = lift(f, t)
    base = project(lp.F, lp.T)
    # swapping generators changes nothing
    swapped = project(lp.T, lp.F)
    for a, b in zip(base.fhat + base.that, swapped.fhat + swapped.that):
        np.testing.assert_allclose(a.c, b.c, atol=1e-12)
    # rescaling by nonvanishing scalar jets changes nothing
    k = f[0].k
    for _ in range(5):
        cs = rng.uniform(-0.4, 0.4, 6)
        u = Jet2.variable("u", 0.1, k)
        v = Jet2.variable("v", -0.2, k)
        g = 1.5 + cs[0] * u + cs[1] * v + cs[2] * u * v
        h = -2.0 + cs[3] * u + cs[4] * v + cs[5] * v * v
        scaled = project([g * c for c in lp.F], [h * c for c in lp.T])
        for a, b in zip(base.fhat + base.that, scaled.fhat + scaled.that):
            np.testing.assert_allclose(a.c, b.c, atol=1e-9)


def test_projection_singular_detected():
    f, _ = jets_of("x = u\ny = u^2\nz = v\n")
    t = compute_normal(f)
    lp = lift(f, t)
    with pytest.raises(ProjectionSingular):
        project(lp.F, lp.F)
