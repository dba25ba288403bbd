"""The acceptance suite: twelve numbered end-to-end checks.

Each criterion is a zero-argument callable returning a
:class:`CriterionResult`; ``run_all`` executes them in order and prints
one pass/fail line per criterion.  The pytest acceptance module and the
CLI ``selftest`` command both drive this list, so there is exactly one
implementation of every check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import expr, jets
from .errors import IsocurvError
from .factorable import (
    BUILTIN_EXAMPLES,
    CLOSED_FORM_FAMILY_IDS,
    PHI3,
    FactorableSpec,
    FamilySpec,
    compare_types,
    instantiate_family,
    make_patch,
    ode_generate_cmc,
    ratio_probe,
    verify_family,
    verify_spec,
)
from .geometry import GridSpec, IsotropicMotion, Rectangle, apply_motion, curvatures_at


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str


def _example_spec(number: int) -> FactorableSpec:
    return BUILTIN_EXAMPLES[number].spec(for_curvature=True)


def _residual_result(number, name, reports, tol) -> CriterionResult:
    worst = max(r.max_residual for r in reports)
    return CriterionResult(
        number,
        name,
        all(r.passed for r in reports),
        f"max residual {worst:.3e} (tolerance {tol:g})",
    )


def criterion_01() -> CriterionResult:
    """Bundled example 1 is minimal: max |H| <= 1e-9 through both engines."""
    tol = 1e-9
    rep = verify_spec(_example_spec(1), ("H", 0.0), GridSpec(64, 64, margin=0.0), tol)
    return _residual_result(1, "example 1: x = y*tan(z) has H = 0", [rep], tol)


def criterion_02() -> CriterionResult:
    """Bundled example 2 has constant mean curvature -1."""
    tol = 1e-9
    rep = verify_spec(_example_spec(2), ("H", -1.0), GridSpec(64, 64, margin=0.0), tol)
    return _residual_result(2, "example 2: x = -sqrt(z) has H = -1", [rep], tol)


def criterion_03() -> CriterionResult:
    """Bundled example 3 is flat: max |K| <= 1e-9."""
    tol = 1e-9
    rep = verify_spec(_example_spec(3), ("K", 0.0), GridSpec(64, 64, margin=0.0), tol)
    return _residual_result(3, "example 3: x = -y^2/(4z) has K = 0", [rep], tol)


def criterion_04() -> CriterionResult:
    """Bundled example 4 has K = -1 and H = 0 simultaneously."""
    tol = 1e-9
    spec = _example_spec(4)
    grid = GridSpec(64, 64, margin=0.0)
    reps = [
        verify_spec(spec, ("K", -1.0), grid, tol),
        verify_spec(spec, ("H", 0.0), grid, tol),
    ]
    return _residual_result(4, "example 4: x = z/y has K = -1 and H = 0", reps, tol)


def _sgn(rng) -> float:
    return 1.0 if rng.random() < 0.5 else -1.0


def _draw_family(rng, fid: str) -> FamilySpec:
    if fid == "T1_I1":
        consts = {
            "f0": _sgn(rng) * rng.uniform(0.5, 2.0),
            "c1": _sgn(rng) * rng.uniform(0.5, 2.0),
            "c2": rng.uniform(-1.0, 1.0),
        }
    elif fid == "T1_I2":
        consts = {"c": _sgn(rng) * rng.uniform(0.3, 1.5)}
    elif fid == "T1_I3":
        consts = {"c": _sgn(rng) * rng.uniform(0.5, 2.0)}
    elif fid == "T1_II":
        consts = {"H0": _sgn(rng) * rng.uniform(0.5, 2.0), "sign": _sgn(rng)}
    elif fid == "T2_I1":
        a = _sgn(rng) * rng.uniform(0.5, 1.5)
        consts = {
            "c1": _sgn(rng) * rng.uniform(0.5, 2.0),
            "a": a,
            "b": rng.uniform(-0.4, 0.4) * abs(a),
        }
    elif fid == "T2_I2":
        consts = {
            "c1": _sgn(rng) * rng.uniform(0.5, 2.0),
            "c2": _sgn(rng) * rng.uniform(0.3, 1.2),
            "c3": _sgn(rng) * rng.uniform(0.3, 1.2),
        }
    elif fid == "T2_I3":
        c2 = rng.uniform(0.15, 0.85) + (1.0 if rng.random() < 0.5 else 0.0)
        consts = {
            "c1": _sgn(rng) * rng.uniform(0.5, 2.0),
            "c2": c2,
            "c3": 1.0 - c2,
        }
    elif fid == "T2_II1":
        consts = {"K0": -rng.uniform(0.4, 3.0), "sign": _sgn(rng)}
    else:
        raise ValueError(fid)
    return FamilySpec(fid, consts)


def criterion_05() -> CriterionResult:
    """50 random draws per closed-form family all verify at 1e-8."""
    rng = np.random.default_rng(5)
    tol = 1e-8
    grid = GridSpec(6, 6)
    worst = 0.0
    failures = 0
    for fid in CLOSED_FORM_FAMILY_IDS:
        for _ in range(50):
            rep = verify_family(_draw_family(rng, fid), grid, tol)
            worst = max(worst, rep.max_residual)
            failures += 0 if rep.passed else 1
    return CriterionResult(
        5,
        "family sweep: 50 random draws per closed-form family",
        failures == 0,
        f"{failures} failures, worst residual {worst:.3e} (tolerance {tol:g})",
    )


def criterion_06() -> CriterionResult:
    """RK4 constant-mean-curvature trajectory matches its closed form and
    yields a patch with H = -1."""
    tab = ode_generate_cmc(-1.0, 1.0, z0=1.0, g0=1.0, r0=0.5, z_end=4.0, steps=4000)
    table_err = float(np.max(np.abs(tab.g - np.sqrt(tab.z))))
    spec = FactorableSpec(
        PHI3, expr.parse("1", {"y"}), tab, Rectangle(0.5, 1.5, 1.0, 4.0), f_text="1"
    )
    patch = make_patch(spec)
    worst_h = 0.0
    zs = tab.z[40:-40:97]
    for u in np.linspace(0.6, 1.4, 5):
        for v in zs:
            c = curvatures_at(patch, float(u), float(v))
            worst_h = max(worst_h, abs(c.H + 1.0))
    passed = table_err <= 1e-8 and worst_h <= 1e-6
    return CriterionResult(
        6,
        "constant-H trajectory: RK4 vs closed form, patch check",
        passed,
        f"table error {table_err:.3e} (<= 1e-08), |H+1| {worst_h:.3e} (<= 1e-06)",
    )


def criterion_07() -> CriterionResult:
    """ODE-generated constant-K family reaches K = -1 through the generic
    engine, settling the slope-field form used for the trajectory."""
    fam = FamilySpec(
        "T2_II2",
        {"K0": -1.0, "c2": 1.0, "c4": 1.0, "g0": 1.0, "sign": 1.0},
        domain=Rectangle(0.5, 2.0, 0.0, 2.0),
        ode_steps=2000,
    )
    rep = verify_family(fam, GridSpec(12, 12, margin=0.02), tol=1e-6)
    return CriterionResult(
        7,
        "constant-K trajectory: tabulated g paired with f = -1/y",
        rep.passed,
        f"max |K+1| residual {rep.max_residual:.3e} (tolerance 1e-06)",
    )


def criterion_08() -> CriterionResult:
    """K and H are invariant under 100 random motions per example."""
    rng = np.random.default_rng(8)
    tol = 1e-9
    grid = GridSpec(3, 3, margin=0.05)
    worst = 0.0
    for number in (1, 2, 3, 4):
        patch = make_patch(_example_spec(number))
        us, vs = patch.domain.axes(grid)
        base = {(u, v): curvatures_at(patch, float(u), float(v)) for u in us for v in vs}
        for _ in range(100):
            motion = IsotropicMotion(
                a1=rng.uniform(-2, 2),
                a2=rng.uniform(-2, 2),
                a3=rng.uniform(-2, 2),
                a4=rng.uniform(-2, 2),
                a5=rng.uniform(-2, 2),
                phi=rng.uniform(0.0, 2.0 * math.pi),
            )
            moved = apply_motion(motion, patch)
            for (u, v), c0 in base.items():
                c1 = curvatures_at(moved, float(u), float(v))
                worst = max(worst, abs(c1.K - c0.K), abs(c1.H - c0.H))
    return CriterionResult(
        8,
        "motion invariance of K and H on examples 1-4",
        worst <= tol,
        f"worst |delta| {worst:.3e} (tolerance {tol:g})",
    )


def criterion_09() -> CriterionResult:
    """Both embeddings of 20 random (f, g) pairs agree: same K, same |H|."""
    rng = np.random.default_rng(9)
    tol = 1e-9
    domain = Rectangle(0.6, 1.6, 0.6, 1.6)
    grid = GridSpec(6, 6)
    worst = 0.0
    for _ in range(20):
        a = float(rng.uniform(0.3, 1.2))
        b = float(rng.uniform(0.2, 1.0))
        f_text = [
            f"{a!r}/t",
            f"{a!r}*t+{b!r}",
            f"exp({a!r}*t)",
            f"{a!r}*t^2+{b!r}",
        ][rng.integers(0, 4)]
        c = float(rng.uniform(0.3, 1.2))
        d = float(rng.uniform(0.2, 1.0))
        ct = float(rng.uniform(0.3, 0.9))  # keeps c*t clear of tangent poles on the domain
        g_text = [
            f"{c!r}*t+{d!r}",
            f"exp({c!r}*t)",
            f"tan({ct!r}*t)",
            f"sqrt({c!r}*t)",
        ][rng.integers(0, 4)]
        rep = compare_types(
            expr.parse(f_text, {"t"}), expr.parse(g_text, {"t"}), domain, grid
        )
        worst = max(worst, rep.max_K_diff, rep.max_absH_diff)
    return CriterionResult(
        9,
        "embedding comparison on 20 random (f, g) pairs",
        worst <= tol,
        f"worst difference {worst:.3e} (tolerance {tol:g})",
    )


def criterion_10() -> CriterionResult:
    """No constant curvature ratio: random non-degenerate pairs show a
    spread in H/K and a positive minimized scaled residual; every catalog
    family is either tagged degenerate or shows positive spread."""
    rng = np.random.default_rng(10)
    domain = Rectangle(1.0, 2.0, 1.0, 2.0)
    grid = GridSpec(24, 24)
    accepted = 0
    attempts = 0
    min_std = math.inf
    min_res = math.inf
    ok = True
    while accepted < 30 and attempts < 120:
        attempts += 1
        a = float(rng.uniform(0.4, 1.5))
        b = float(rng.uniform(0.3, 1.2))
        c = float(rng.uniform(0.4, 1.5))
        d = float(rng.uniform(0.3, 1.2))
        f_text = [
            f"{a!r}*y^2+{b!r}",
            f"{a!r}*y^3+{b!r}",
            f"exp({a!r}*y)+{b!r}",
            f"{a!r}*y^2+{b!r}*y+1",
        ][rng.integers(0, 4)]
        g_text = [
            f"{c!r}*z^2+{d!r}*z+1",
            f"exp({c!r}*z)",
            f"{c!r}*z^3+{d!r}",
            f"{c!r}*z^2+{d!r}",
        ][rng.integers(0, 4)]
        spec = FactorableSpec(
            PHI3,
            expr.parse(f_text, {"y"}),
            expr.parse(g_text, {"z"}),
            domain,
            f_text=f_text,
            g_text=g_text,
        )
        rep = ratio_probe(spec, grid)
        if rep.degenerate is not None:
            continue
        accepted += 1
        min_std = min(min_std, rep.ratio_stddev)
        min_res = min(min_res, rep.min_scaled_residual)
        if not (rep.ratio_stddev > 1e-4 and rep.min_scaled_residual > 1e-6):
            ok = False
    if accepted < 30:
        return CriterionResult(10, "curvature-ratio probe", False, "could not draw 30 pairs")

    canonical = [
        FamilySpec("T1_I1", {}),
        FamilySpec("T1_I2", {"c": 1.0}),
        FamilySpec("T1_I3", {"c": 1.0}),
        FamilySpec("T1_II", {"H0": -1.0, "sign": -1.0}),
        FamilySpec("T2_I1", {"c1": 1.0}),
        FamilySpec("T2_I2", {"c1": 1.0, "c2": 1.0, "c3": 1.0}),
        FamilySpec("T2_I3", {"c1": 1.0, "c2": 2.0, "c3": -1.0}),
        FamilySpec("T2_II1", {"K0": -1.0}),
        FamilySpec("T2_II2", {"K0": -1.0, "c2": 1.0}),
    ]
    catalog_ok = True
    for fam in canonical:
        rep = ratio_probe(instantiate_family(fam), GridSpec(12, 12))
        if rep.degenerate is None and not rep.ratio_stddev > 0.0:
            catalog_ok = False
    passed = ok and catalog_ok
    return CriterionResult(
        10,
        "curvature-ratio probe: 30 random pairs + catalog families",
        passed,
        f"min stddev {min_std:.3e} (> 1e-04), min scaled residual {min_res:.3e} (> 1e-06)"
        + ("" if catalog_ok else "; catalog check failed"),
    )


def _affine(rng, u0: float, v0: float, target: float) -> expr.ExprAst:
    c1 = rng.uniform(-1.0, 1.0)
    c2 = rng.uniform(-1.0, 1.0)
    c0 = target - c1 * u0 - c2 * v0
    return expr.Binary(
        "+",
        expr.Num(c0),
        expr.Binary(
            "+",
            expr.Binary("*", expr.Num(c1), expr.Var("u")),
            expr.Binary("*", expr.Num(c2), expr.Var("v")),
        ),
    )


def _fd_jet(ast: expr.ExprAst, u0: float, v0: float, h: float = 1e-4):
    def s(du: float, dv: float) -> float:
        return expr.eval_scalar(ast, {"u": u0 + du, "v": v0 + dv})

    f00 = s(0, 0)
    fu1, fu2 = s(h, 0), s(-h, 0)
    fv1, fv2 = s(0, h), s(0, -h)
    fpp, fpm, fmp, fmm = s(h, h), s(h, -h), s(-h, h), s(-h, -h)
    return (
        f00,
        (fu1 - fu2) / (2 * h),
        (fv1 - fv2) / (2 * h),
        (fu1 - 2 * f00 + fu2) / (h * h),
        (fpp - fpm - fmp + fmm) / (4 * h * h),
        (fv1 - 2 * f00 + fv2) / (h * h),
    )


_JET_OPS = (
    "add",
    "sub",
    "mul",
    "div",
    "pow_int",
    "pow_frac",
    "pow_var",
    "sin",
    "cos",
    "tan",
    "exp",
    "ln",
    "sqrt",
    "neg",
)


def _sample_ast(rng, op: str, u0: float, v0: float) -> expr.ExprAst:
    def aff(lo: float, hi: float) -> expr.ExprAst:
        t = rng.uniform(lo, hi) * (_sgn(rng) if lo >= 0 and op in ("div", "pow_int") else 1.0)
        return _affine(rng, u0, v0, t)

    if op in ("add", "sub", "mul"):
        return expr.Binary({"add": "+", "sub": "-", "mul": "*"}[op], aff(-10, 10), aff(-10, 10))
    if op == "div":
        return expr.Binary("/", _affine(rng, u0, v0, rng.uniform(-10, 10)), aff(0.3, 10))
    if op == "pow_int":
        p = float(rng.choice([-3, -2, -1, 2, 3]))
        return expr.Binary("^", aff(0.3, 3.0), expr.Num(p))
    if op == "pow_frac":
        p = rng.uniform(-1.5, 2.5)
        if float(p).is_integer():
            p += 0.37
        return expr.Binary("^", _affine(rng, u0, v0, rng.uniform(0.3, 3.0)), expr.Num(p))
    if op == "pow_var":
        base = _affine(rng, u0, v0, rng.uniform(0.5, 3.0))
        expo = _affine(rng, u0, v0, rng.uniform(0.5, 1.5))
        return expr.Binary("^", base, expo)
    if op == "tan":
        return expr.Call("tan", _affine(rng, u0, v0, rng.uniform(-1.2, 1.2)))
    if op == "exp":
        return expr.Call("exp", _affine(rng, u0, v0, rng.uniform(-2.0, 2.3)))
    if op in ("ln", "sqrt"):
        return expr.Call(op, _affine(rng, u0, v0, rng.uniform(0.1, 10.0)))
    if op == "neg":
        return expr.Unary("neg", _affine(rng, u0, v0, rng.uniform(-10, 10)))
    return expr.Call(op, _affine(rng, u0, v0, rng.uniform(-10.0, 10.0)))


def criterion_11() -> CriterionResult:
    """Every jet operation matches central finite differences (step 1e-4)
    to relative error 1e-5 on 10^4 random in-domain samples."""
    rng = np.random.default_rng(11)
    n_samples = 10_000
    worst = 0.0
    failures = 0
    for k in range(n_samples):
        op = _JET_OPS[k % len(_JET_OPS)]
        u0 = float(rng.uniform(-2.0, 2.0))
        v0 = float(rng.uniform(-2.0, 2.0))
        ast = _sample_ast(rng, op, u0, v0)
        j = expr.eval_jet(ast, {"u": jets.seed(u0, "u"), "v": jets.seed(v0, "v")})
        fd = _fd_jet(ast, u0, v0)
        got = (j.val, j.d_u, j.d_v, j.d_uu, j.d_uv, j.d_vv)
        for a, b in zip(got, fd):
            rel = abs(a - b) / max(1.0, abs(a), abs(b))
            worst = max(worst, rel)
            if rel > 1e-5:
                failures += 1
    return CriterionResult(
        11,
        "jet derivatives vs central finite differences (10^4 samples)",
        failures == 0,
        f"{failures} field mismatches, worst relative error {worst:.3e} (<= 1e-05)",
    )


_MUTATIONS = (
    ("T1_I1", "1", "z+0.05*z^2", Rectangle(0.0, 1.0, 0.3, 1.3), ("H", 0.0)),
    ("T1_I2", "y", "tan(z)+0.1*z", Rectangle(0.1, 1.0, 0.1, 0.45), ("H", 0.0)),
    ("T1_I3", "1/y+0.05", "z", Rectangle(1.0, 2.0, 1.0, 2.0), ("H", 0.0)),
    ("T1_II", "-1", "sqrt(z)+0.05*z", Rectangle(0.0, 1.0, 0.5, 2.0), ("H", -1.0)),
    ("T2_I1", "1.5+0.1*y", "z+0.5*sin(z)", Rectangle(0.0, 1.0, 0.0, 1.0), ("K", 0.0)),
    ("T2_I2", "exp(y)", "exp(z)+0.1*z", Rectangle(0.0, 1.0, 0.0, 1.0), ("K", 0.0)),
    # exponents 0.6 + 0.41 break the sum-to-one constraint by 0.01
    ("T2_I3", "y^0.6", "z^0.41", Rectangle(0.5, 1.5, 0.5, 1.5), ("K", 0.0)),
    ("T2_II1", "1/y+0.02", "z", Rectangle(1.0, math.pi, 1.0, 2.0 * math.pi), ("K", -1.0)),
)


def criterion_12() -> CriterionResult:
    """Breaking any family constraint makes verification fail loudly."""
    weakest = math.inf
    all_detected = True
    for fid, f_text, g_text, domain, claim in _MUTATIONS:
        spec = FactorableSpec(
            PHI3,
            expr.parse(f_text, {"y"}),
            expr.parse(g_text, {"z"}),
            domain,
            f_text=f_text,
            g_text=g_text,
            family_id=f"{fid}-mutated",
        )
        rep = verify_spec(spec, claim, GridSpec(8, 8), tol=1e-8)
        weakest = min(weakest, rep.max_residual)
        if rep.passed or rep.max_residual <= 1e-4:
            all_detected = False
    return CriterionResult(
        12,
        "mutation sensitivity: broken constraints fail verification",
        all_detected,
        f"weakest mutated residual {weakest:.3e} (> 1e-04)",
    )


ALL_CRITERIA = (
    criterion_01,
    criterion_02,
    criterion_03,
    criterion_04,
    criterion_05,
    criterion_06,
    criterion_07,
    criterion_08,
    criterion_09,
    criterion_10,
    criterion_11,
    criterion_12,
)


def run_all(echo=print) -> list[CriterionResult]:
    results = []
    for criterion in ALL_CRITERIA:
        try:
            result = criterion()
        except IsocurvError as exc:  # an aborted check is a failed check
            number = len(results) + 1
            result = CriterionResult(number, criterion.__name__, False, f"aborted: {exc}")
        results.append(result)
        if echo is not None:
            status = "PASS" if result.passed else "FAIL"
            echo(f"criterion {result.number:02d} {status}  {result.name}  [{result.detail}]")
    return results
