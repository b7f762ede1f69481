"""Shape operator, curvature sphere lifts, umbilic cubic form."""

import numpy as np
import pytest

from liesurf import minkowski as mk
from liesurf.curvature import (
    CubicForm,
    cubic_discriminant,
    cubic_form,
    cubic_form_from_sections,
    curvature_sphere_lift,
    principal_data,
)
from liesurf.errors import UmbilicAmbiguity
from liesurf.jets import directional_derivative as dd
from liesurf.legendre import compute_normal, deriv_vec, lift, vec_values
from liesurf.surface import parse_surface
from liesurf import gallery

from helpers import graph_surface_text, random_graph_coeffs


def surface_data(text, u0=0.0, v0=0.0, order=6):
    surf = parse_surface(text)
    f, n = surf.eval_jet(u0, v0, order)
    t = n if n is not None else compute_normal(f)
    return f, t


def test_sphere_is_totally_umbilic():
    f, t = surface_data(gallery.SPHERE_PATCH, 0.2, -0.1)
    pd = principal_data(f, t)
    assert pd.umbilic
    assert pd.umbilic_margin < 1e-9
    # outward normal of the unit sphere: Rodrigues curvature -1
    assert pd.kappa1.value() == pytest.approx(-1.0, abs=1e-10)
    with pytest.raises(UmbilicAmbiguity):
        lp = lift(f, t)
        curvature_sphere_lift(lp, pd, 1)


def test_parabolic_cylinder_curvatures():
    f, t = surface_data(gallery.PARABOLIC_CYLINDER)
    pd = principal_data(f, t)
    assert not pd.umbilic
    # k1 >= k2 at the base: flat direction first
    assert pd.kappa1.value() == pytest.approx(0.0, abs=1e-12)
    assert pd.kappa2.value() == pytest.approx(-2.0)
    # curved principal direction is du, flat is dv
    np.testing.assert_allclose([pd.dir2[0].value(), pd.dir2[1].value()], [1, 0],
                               atol=1e-12)
    np.testing.assert_allclose([pd.dir1[0].value(), pd.dir1[1].value()], [0, 1],
                               atol=1e-12)
    # iterated derivative of the curved curvature along its own unit field
    m1 = dd(pd.kappa2, pd.dir2)
    m2 = dd(m1, pd.dir2)
    assert m1.value() == pytest.approx(0.0, abs=1e-12)
    assert m2.value() == pytest.approx(24.0)


def test_rodrigues_and_curvature_sphere_property():
    rng = np.random.default_rng(23)
    for _ in range(15):
        text = graph_surface_text(random_graph_coeffs(rng, even_in_u=False))
        f, t = surface_data(text, *rng.uniform(-0.25, 0.25, 2))
        pd = principal_data(f, t)
        if pd.umbilic:
            continue
        lp = lift(f, t)
        fu, fv = deriv_vec(f, "u"), deriv_vec(f, "v")
        tu, tv = deriv_vec(t, "u"), deriv_vec(t, "v")
        for i in (1, 2):
            kappa = pd.kappa(i)
            X = pd.direction(i)
            # Rodrigues: d_X t + kappa d_X f = 0 at the base point
            res = 0.0
            for comp in range(3):
                dtx = X[0] * tu[comp] + X[1] * tv[comp]
                dfx = X[0] * fu[comp] + X[1] * fv[comp]
                res = max(res, abs((dtx + kappa * dfx).value()))
            assert res <= 1e-8
            # curvature sphere: d_X sigma stays in span{F, T} at the base
            sig = curvature_sphere_lift(lp, pd, i).sigma
            dsig = [dd(c, X) for c in sig]
            w = vec_values(dsig)
            span = np.column_stack([vec_values(lp.F), vec_values(lp.T)])
            coef, *_ = np.linalg.lstsq(span, w, rcond=None)
            assert np.linalg.norm(span @ coef - w) <= 1e-8 * (1 + np.linalg.norm(w))


def test_curvature_sphere_interpretation():
    f, t = surface_data(gallery.PARABOLIC_CYLINDER)
    pd = principal_data(f, t)
    lp = lift(f, t)
    # curved sphere: osculating circle of y = x^2 has radius 1/2, center (0, 1/2)
    sig = curvature_sphere_lift(lp, pd, 2).sigma
    np.testing.assert_allclose(vec_values(sig), [-1, -1, 0, -1, 0, 1], atol=1e-12)
    interp = mk.interpret_sphere(vec_values(sig))
    assert interp.kind == "sphere"
    np.testing.assert_allclose(interp.center, [0, 0.5, 0], atol=1e-12)
    assert interp.radius == pytest.approx(0.5)
    # flat sphere: the tangent plane
    sig2 = curvature_sphere_lift(lp, pd, 1).sigma
    interp2 = mk.interpret_sphere(vec_values(sig2))
    assert interp2.kind == "plane"
    np.testing.assert_allclose(interp2.normal, [0, -1, 0], atol=1e-12)
    assert interp2.offset == pytest.approx(0.0)
    # the two lifts pair to zero (both lie in the isotropic plane)
    assert mk.inner(vec_values(sig), vec_values(sig2)) == pytest.approx(0.0, abs=1e-12)


def test_kappa_matches_interpreted_radius():
    rng = np.random.default_rng(29)
    count = 0
    for _ in range(20):
        text = graph_surface_text(random_graph_coeffs(rng, even_in_u=False))
        f, t = surface_data(text, *rng.uniform(-0.25, 0.25, 2))
        pd = principal_data(f, t)
        if pd.umbilic:
            continue
        lp = lift(f, t)
        for i in (1, 2):
            k = pd.kappa(i).value()
            if abs(k) < 1e-6:
                continue
            interp = mk.interpret_sphere(vec_values(curvature_sphere_lift(lp, pd, i).sigma))
            assert interp.kind == "sphere"
            assert abs(1.0 / interp.radius - abs(k)) <= 1e-8 * (1 + abs(k))
            count += 1
    assert count > 10


def test_torus_principal_curvatures():
    # tube radius 1, center circle radius 2; f_u x f_v points into the tube,
    # flipping both curvature signs relative to the outward convention
    f, t = surface_data(gallery.TORUS_PATCH, 0.7, 0.3)
    pd = principal_data(f, t)
    u = 0.7
    expected = sorted([1.0, np.cos(u) / (2.0 + np.cos(u))])
    got = sorted([pd.kappa1.value(), pd.kappa2.value()])
    np.testing.assert_allclose(got, expected, atol=1e-10)


def test_cubic_discriminant_frozen_values():
    assert cubic_discriminant(CubicForm(6, 0, -6, 0)) == pytest.approx(1296.0)
    assert cubic_discriminant(CubicForm(6, 0, 2, 0)) == pytest.approx(-48.0)
    assert cubic_discriminant(CubicForm(0, 0, 0, 0)) == 0.0


def test_cubic_form_elliptic_umbilic_pattern():
    f, t = surface_data(gallery.ELLIPTIC_UMBILIC_GRAPH)
    pd = principal_data(f, t)
    assert pd.umbilic
    lp = lift(f, t)
    c = cubic_form(lp, pd.kappa1.value())
    coeffs = np.array(c.coefficients())
    # proportional to (1, 0, -1, 0)
    assert abs(coeffs[0]) > 1e-6
    np.testing.assert_allclose(coeffs / coeffs[0], [1, 0, -1, 0], atol=1e-9)
    assert cubic_discriminant(c) > 0

    f, t = surface_data(gallery.HYPERBOLIC_UMBILIC_GRAPH)
    pd = principal_data(f, t)
    lp = lift(f, t)
    assert cubic_discriminant(cubic_form(lp, pd.kappa1.value())) < 0


def test_cubic_form_sections_agree_with_expansion():
    f, t = surface_data(gallery.ELLIPTIC_UMBILIC_GRAPH)
    pd = principal_data(f, t)
    lp = lift(f, t)
    kappa = pd.kappa1.value()
    a = cubic_form(lp, kappa)
    sigma = tuple(tc + kappa * fc for tc, fc in zip(lp.T, lp.F))
    b = cubic_form_from_sections(sigma, lp.F)
    np.testing.assert_allclose(a.coefficients(), b.coefficients(), atol=1e-10)


def _transform_cubic(c: CubicForm, m: np.ndarray) -> CubicForm:
    """Pull back the symmetric cubic through the basis change (X,Y) -> (X,Y)M."""
    t = np.zeros((2, 2, 2))
    t[0, 0, 0] = c.c_xxx
    t[1, 1, 1] = c.c_yyy
    for idx in [(0, 0, 1), (0, 1, 0), (1, 0, 0)]:
        t[idx] = c.c_xxy
    for idx in [(0, 1, 1), (1, 0, 1), (1, 1, 0)]:
        t[idx] = c.c_xyy
    tt = np.einsum("abc,ai,bj,ck->ijk", t, m, m, m)
    return CubicForm(tt[0, 0, 0], tt[0, 0, 1], tt[0, 1, 1], tt[1, 1, 1])


def test_discriminant_sign_invariance():
    rng = np.random.default_rng(31)
    for c in (CubicForm(6, 0, -6, 0), CubicForm(6, 0, 2, 0),
              CubicForm(1.0, 0.3, -0.7, 2.0)):
        base = np.sign(cubic_discriminant(c))
        for _ in range(20):
            m = rng.uniform(-2, 2, (2, 2))
            if abs(np.linalg.det(m)) < 0.2:
                continue
            assert np.sign(cubic_discriminant(_transform_cubic(c, m))) == base
        for _ in range(10):
            s = rng.uniform(0.2, 3.0) * rng.choice([-1.0, 1.0])
            scaled = CubicForm(*(s * np.array(c.coefficients())))
            assert np.sign(cubic_discriminant(scaled)) == base


def test_directional_derivatives_match_curvature_line_chart():
    """Integrate the unit principal field into an arclength curvature line
    and compare finite differences of kappa along it with the iterated
    directional derivative jets (they agree at the consulted orders)."""
    from scipy.integrate import solve_ivp

    surf = parse_surface(gallery.PARABOLIC_CYLINDER)

    def principal_setup(u0, v0):
        f, n = surf.eval_jet(u0, v0, 6)
        t = compute_normal(f)
        pd = principal_data(f, t)
        idx = 1 if abs(pd.dir1[0].value()) >= abs(pd.dir2[0].value()) else 2
        return pd, idx

    pd0, idx0 = principal_setup(0.25, 0.0)
    ref_dir = np.array([pd0.direction(idx0)[0].value(), pd0.direction(idx0)[1].value()])

    def field(s, y):
        pd, idx = principal_setup(y[0], y[1])
        d = np.array([pd.direction(idx)[0].value(), pd.direction(idx)[1].value()])
        if np.dot(d, ref_dir) < 0:
            d = -d
        return d

    def kappa_at(u0, v0):
        pd, idx = principal_setup(u0, v0)
        return pd.kappa(idx).value()

    h = 1e-3
    fwd = solve_ivp(field, (0.0, 2 * h), [0.25, 0.0], t_eval=[h, 2 * h],
                    rtol=1e-12, atol=1e-12)
    bwd = solve_ivp(field, (0.0, -2 * h), [0.25, 0.0], t_eval=[-h, -2 * h],
                    rtol=1e-12, atol=1e-12)
    pts = [tuple(bwd.y[:, 1]), tuple(bwd.y[:, 0]), (0.25, 0.0),
           tuple(fwd.y[:, 0]), tuple(fwd.y[:, 1])]
    ks = np.array([kappa_at(u, v) for u, v in pts])
    fd1 = (ks[3] - ks[1]) / (2 * h)
    fd2 = (ks[3] - 2 * ks[2] + ks[1]) / (h * h)

    m1 = dd(pd0.kappa(idx0), pd0.direction(idx0)).value()
    m2 = dd(dd(pd0.kappa(idx0), pd0.direction(idx0)), pd0.direction(idx0)).value()
    assert fd1 == pytest.approx(m1, rel=1e-5, abs=1e-6)
    assert fd2 == pytest.approx(m2, rel=1e-4, abs=1e-4)


def test_curved_sphere_lift_two_jet():
    """Frozen 2-jet of the curved curvature sphere lift of the parabolic
    cylinder: (-1 + 6u^2 - v^2, -1 + 6u^2 + v^2, 0, -1, -2v, 1)."""
    f, t = surface_data(gallery.PARABOLIC_CYLINDER)
    pd = principal_data(f, t)
    lp = lift(f, t)
    sig = curvature_sphere_lift(lp, pd, 2).sigma
    expected = [
        {(0, 0): -1.0, (2, 0): 12.0, (0, 2): -2.0},
        {(0, 0): -1.0, (2, 0): 12.0, (0, 2): 2.0},
        {},
        {(0, 0): -1.0},
        {(0, 1): -2.0},
        {(0, 0): 1.0},
    ]
    for comp, want in zip(sig, expected):
        for i in range(3):
            for j in range(3 - i):
                assert comp.partial(i, j) == pytest.approx(want.get((i, j), 0.0),
                                                           abs=1e-10)


def test_cubic_form_rejects_non_umbilic_data():
    from liesurf.errors import NotUmbilic
    f, t = surface_data(gallery.PARABOLIC_CYLINDER)
    pd = principal_data(f, t)
    lp = lift(f, t)
    with pytest.raises(NotUmbilic):
        cubic_form(lp, pd)
    # PrincipalData at a genuine umbilic is accepted
    f, t = surface_data(gallery.ELLIPTIC_UMBILIC_GRAPH)
    pd = principal_data(f, t)
    c = cubic_form(lift(f, t), pd)
    assert cubic_discriminant(c) > 0
