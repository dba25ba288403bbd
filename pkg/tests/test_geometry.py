import math

import numpy as np
import pytest

import isocurv as ic
from isocurv import expr
from isocurv.errors import NotAdmissible


def phi3_spec(f_text, g_text, dom):
    return ic.FactorableSpec(
        ic.PHI3, expr.parse(f_text, {"y"}), expr.parse(g_text, {"z"}), ic.Rectangle(*dom)
    )


def plane_patch():
    return ic.SurfacePatch(
        expr.parse("u", {"u", "v"}),
        expr.parse("v", {"u", "v"}),
        expr.parse("0", {"u", "v"}),
        ("u", "v"),
        ic.Rectangle(-1.0, 1.0, -1.0, 1.0),
    )


def fd_forms(patch, u, v, h=1e-5):
    """Fundamental forms rebuilt from finite differences of the coordinate
    values only; independent of the jet machinery."""

    def r(du, dv):
        return np.array(patch.eval_point(u + du, v + dv))

    r0 = r(0, 0)
    ru = (r(h, 0) - r(-h, 0)) / (2 * h)
    rv = (r(0, h) - r(0, -h)) / (2 * h)
    ruu = (r(h, 0) - 2 * r0 + r(-h, 0)) / h**2
    rvv = (r(0, h) - 2 * r0 + r(0, -h)) / h**2
    ruv = (r(h, h) - r(h, -h) - r(-h, h) + r(-h, -h)) / (4 * h**2)
    E = ru[0] ** 2 + ru[1] ** 2
    F = ru[0] * rv[0] + ru[1] * rv[1]
    G = rv[0] ** 2 + rv[1] ** 2
    s = ru[1] * rv[0] - rv[1] * ru[0]
    det = lambda a, b, c: float(np.linalg.det(np.array([a, b, c])))
    return E, F, G, det(ruu, ru, rv) / s, det(ruv, ru, rv) / s, det(rvv, ru, rv) / s


def test_plane_forms_and_curvatures():
    p = plane_patch()
    f = ic.fundamental_forms(p, 0.3, -0.4)
    assert (f.E, f.F, f.G, f.l, f.m, f.n, f.W) == (1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0)
    c = ic.curvatures(f)
    assert (c.K, c.H) == (0.0, 0.0)


def test_forms_reciprocal_f_linear_g():
    spec = phi3_spec("1/y", "z", (1.0, math.pi, 1.0, 2 * math.pi))
    f = ic.fundamental_forms(ic.make_patch(spec), 1.0, 1.0)
    got = (f.E, f.F, f.G, f.W, f.l, f.m, f.n)
    assert got == pytest.approx((2.0, -1.0, 1.0, 1.0, 2.0, -1.0, 0.0), abs=1e-14)
    # independent finite-difference oracle
    want = fd_forms(ic.make_patch(spec), 1.0, 1.0)
    assert (f.E, f.F, f.G, f.l, f.m, f.n) == pytest.approx(want, rel=1e-5, abs=1e-5)


def test_forms_linear_f_tangent_g():
    spec = phi3_spec("y", "tan(z)", (0.02, math.pi / 3, 0.02, math.pi / 3))
    patch = ic.make_patch(spec)
    f = ic.fundamental_forms(patch, 1.0, math.pi / 4)
    got = (f.E, f.F, f.G, f.W, f.l, f.m, f.n)
    assert got == pytest.approx((2.0, 2.0, 4.0, 4.0, 0.0, 1.0, 2.0), rel=1e-12, abs=1e-12)
    want = fd_forms(patch, 1.0, math.pi / 4)
    assert (f.E, f.F, f.G, f.l, f.m, f.n) == pytest.approx(want, rel=1e-5, abs=1e-5)


def test_curvatures_of_reciprocal_surface():
    spec = phi3_spec("1/y", "z", (1.0, math.pi, 1.0, 2 * math.pi))
    c = ic.curvatures_at(ic.make_patch(spec), 1.0, 1.0)
    assert c.K == pytest.approx(-1.0, abs=1e-12)
    assert c.H == pytest.approx(0.0, abs=1e-12)


def test_curvatures_constant_f_sqrt_g():
    spec = phi3_spec("-1", "sqrt(z)", (0.0, 2 * math.pi, 0.05, 2 * math.pi))
    c = ic.curvatures_at(ic.make_patch(spec), 1.0, 1.0)
    assert c.H == pytest.approx(-1.0, abs=1e-12)


def test_curvatures_require_admissibility():
    with pytest.raises(NotAdmissible):
        ic.curvatures(ic.FundamentalForms(E=1, F=0, G=1, l=0, m=0, n=0, W=0.0))


def test_admissibility_plane():
    rep = ic.admissibility_check(plane_patch(), ic.GridSpec(8, 8))
    assert rep.admissible
    assert rep.worst_W == pytest.approx(1.0)


def test_admissibility_degenerate_product():
    spec = phi3_spec("1", "1", (0.0, 1.0, 0.0, 1.0))
    rep = ic.admissibility_check(ic.make_patch(spec), ic.GridSpec(4, 4))
    assert not rep.admissible
    assert rep.worst_W == 0.0
    assert rep.failing_points


def test_admissibility_worst_w_value():
    # W = (f*g')^2 = 1/y^2, smallest at y = pi
    spec = phi3_spec("1/y", "z", (1.0, math.pi, 1.0, 2 * math.pi))
    rep = ic.admissibility_check(ic.make_patch(spec), ic.GridSpec(16, 16, margin=0.0))
    assert rep.admissible
    assert rep.worst_W == pytest.approx(1.0 / math.pi**2, rel=1e-12)
    assert rep.worst_point[0] == pytest.approx(math.pi)


def constant_point_patch(x, y, z):
    return ic.SurfacePatch(
        expr.Num(float(x)),
        expr.Num(float(y)),
        expr.Num(float(z)),
        ("u", "v"),
        ic.Rectangle(0.0, 1.0, 0.0, 1.0),
    )


def test_identity_motion():
    p = ic.make_patch(phi3_spec("1/y", "z", (1.0, 2.0, 1.0, 2.0)))
    moved = ic.apply_motion(ic.IsotropicMotion(), p)
    for u, v in ((1.2, 1.7), (1.9, 1.1)):
        assert moved.eval_point(u, v) == pytest.approx(p.eval_point(u, v), abs=1e-15)


def test_quarter_turn_moves_x_to_y():
    p = constant_point_patch(1, 0, 0)
    moved = ic.apply_motion(ic.IsotropicMotion(phi=math.pi / 2), p)
    assert moved.eval_point(0.5, 0.5) == pytest.approx((0.0, 1.0, 0.0), abs=1e-15)


def test_z_shear():
    p = constant_point_patch(1, 0, 0)
    moved = ic.apply_motion(ic.IsotropicMotion(a4=1.0), p)
    assert moved.eval_point(0.5, 0.5) == pytest.approx((1.0, 0.0, 1.0), abs=1e-15)


def test_motion_invariance_random(rng):
    specs = [
        phi3_spec("1/y", "z", (1.0, math.pi, 1.0, 2 * math.pi)),
        phi3_spec("y", "tan(z)", (0.1, 1.0, 0.1, 1.0)),
        phi3_spec("exp(0.5*y)", "exp(0.8*z)", (0.0, 1.0, 0.0, 1.0)),
    ]
    for spec in specs:
        patch = ic.make_patch(spec)
        us, vs = patch.domain.axes(ic.GridSpec(3, 3, margin=0.05))
        for _ in range(10):
            motion = ic.IsotropicMotion(*rng.uniform(-2, 2, 5), phi=rng.uniform(0, 2 * math.pi))
            moved = ic.apply_motion(motion, patch)
            for u in us:
                for v in vs:
                    c0 = ic.curvatures_at(patch, float(u), float(v))
                    c1 = ic.curvatures_at(moved, float(u), float(v))
                    assert abs(c1.K - c0.K) <= 1e-9
                    assert abs(c1.H - c0.H) <= 1e-9


RANDOM_SPECS = [
    ("1/y", "z", (1.0, 2.5, 1.0, 2.5)),
    ("y^2+1", "exp(0.7*z)", (0.5, 1.5, 0.0, 1.0)),
    ("exp(0.4*y)", "z^2+z+1", (0.0, 1.0, 0.5, 1.5)),
    ("-1", "sqrt(z)", (0.0, 1.0, 0.5, 2.0)),
    ("2*y+3", "tan(0.6*z)", (0.2, 1.0, 0.2, 1.2)),
]


@pytest.mark.parametrize("f_text,g_text,dom", RANDOM_SPECS, ids=[s[0] for s in RANDOM_SPECS])
def test_discriminant_identity(f_text, g_text, dom, rng):
    # W = (f g')^2 for every product-graph patch
    spec = phi3_spec(f_text, g_text, dom)
    patch = ic.make_patch(spec)
    for _ in range(20):
        y = float(rng.uniform(dom[0], dom[1]))
        z = float(rng.uniform(dom[2], dom[3]))
        forms = ic.fundamental_forms(patch, y, z)
        fval = expr.eval_scalar(spec.f, {"y": y})
        gj = expr.eval_jet(spec.g, {"z": ic.seed(z, "v")})
        assert forms.W == pytest.approx((fval * gj.d_v) ** 2, rel=1e-12)


@pytest.mark.parametrize("f_text,g_text,dom", RANDOM_SPECS, ids=[s[0] for s in RANDOM_SPECS])
def test_second_form_closed_expressions(f_text, g_text, dom, rng):
    # l = f''g/(fg'), m = f'/f, n = g''/g' for the x = f(y)g(z) embedding
    spec = phi3_spec(f_text, g_text, dom)
    patch = ic.make_patch(spec)
    for _ in range(20):
        y = float(rng.uniform(dom[0], dom[1]))
        z = float(rng.uniform(dom[2], dom[3]))
        forms = ic.fundamental_forms(patch, y, z)
        fj = expr.eval_jet(spec.f, {"y": ic.seed(y, "u")})
        gj = expr.eval_jet(spec.g, {"z": ic.seed(z, "v")})
        want_l = fj.d_uu * gj.val / (fj.val * gj.d_v)
        want_m = fj.d_u / fj.val
        want_n = gj.d_vv / gj.d_v
        assert forms.l == pytest.approx(want_l, rel=1e-10, abs=1e-10)
        assert forms.m == pytest.approx(want_m, rel=1e-10, abs=1e-10)
        assert forms.n == pytest.approx(want_n, rel=1e-10, abs=1e-10)


def test_reparameterization_leaves_curvatures_unchanged(rng):
    spec = phi3_spec("1/y", "z^2+z+1", (1.0, 2.0, 1.0, 2.0))
    patch = ic.make_patch(spec)
    double_v = {"z": expr.Binary("*", expr.Num(2.0), expr.Var("z"))}
    stretched = ic.SurfacePatch(
        expr.substitute(patch.x, double_v),
        expr.substitute(patch.y, double_v),
        expr.substitute(patch.z, double_v),
        patch.params,
        ic.Rectangle(1.0, 2.0, 0.5, 1.0),
    )
    for _ in range(20):
        u = float(rng.uniform(1.0, 2.0))
        w = float(rng.uniform(0.5, 1.0))
        c0 = ic.curvatures_at(patch, u, 2.0 * w)
        c1 = ic.curvatures_at(stretched, u, w)
        assert abs(c1.K - c0.K) <= 1e-9
        assert abs(c1.H - c0.H) <= 1e-9


def test_parameter_swap_leaves_second_form_components_paired():
    # swapping (u, v) exchanges l and n and keeps m, because the signed
    # root of W flips together with the determinants
    spec = phi3_spec("1/y", "z^2+1", (1.0, 2.0, 1.0, 2.0))
    patch = ic.make_patch(spec)
    swapped = ic.SurfacePatch(
        expr.substitute(patch.x, {"y": expr.Var("q"), "z": expr.Var("p")}),
        expr.substitute(patch.y, {"y": expr.Var("q"), "z": expr.Var("p")}),
        expr.substitute(patch.z, {"y": expr.Var("q"), "z": expr.Var("p")}),
        ("p", "q"),
        ic.Rectangle(1.0, 2.0, 1.0, 2.0),
    )
    f0 = ic.fundamental_forms(patch, 1.3, 1.6)
    f1 = ic.fundamental_forms(swapped, 1.6, 1.3)
    assert f1.l == pytest.approx(f0.n, rel=1e-12)
    assert f1.n == pytest.approx(f0.l, rel=1e-12)
    assert f1.m == pytest.approx(f0.m, rel=1e-12)
    c0, c1 = ic.curvatures(f0), ic.curvatures(f1)
    assert c1.K == pytest.approx(c0.K, rel=1e-12)
    assert c1.H == pytest.approx(c0.H, rel=1e-12)


def test_rectangle_validation():
    with pytest.raises(ValueError):
        ic.Rectangle(1.0, 1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        ic.GridSpec(0, 4)
