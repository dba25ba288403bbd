import math

import pytest

from isocurv import expr, jets
from isocurv.errors import DomainError


def parse(text, names=("y", "z")):
    return expr.parse(text, set(names))


def diagnostic_of(text, names=("y", "z")):
    with pytest.raises(expr.ParseError) as exc:
        parse(text, names)
    return exc.value.diagnostic


def test_parse_structure():
    ast = parse("y*tan(2*z)")
    assert ast == expr.Binary(
        "*",
        expr.Var("y"),
        expr.Call("tan", expr.Binary("*", expr.Num(2.0), expr.Var("z"))),
    )


def test_unexpected_token_offset():
    d = diagnostic_of("y+*z")
    assert d.kind == expr.UNEXPECTED_TOKEN
    assert d.offset == 2


def test_unknown_identifier():
    d = diagnostic_of("q+1")
    assert d.kind == expr.UNKNOWN_IDENTIFIER
    assert d.offset == 0


def test_unbalanced_open_paren():
    d = diagnostic_of("(y+1")
    assert d.kind == expr.UNBALANCED_PAREN


def test_unbalanced_close_paren():
    d = diagnostic_of("y)")
    assert d.kind == expr.UNBALANCED_PAREN


def test_empty_input():
    d = diagnostic_of("   ")
    assert d.kind == expr.EMPTY_INPUT
    assert d.offset == 0


def test_unknown_function():
    d = diagnostic_of("q(1)")
    assert d.kind == expr.UNKNOWN_IDENTIFIER


def test_function_without_call():
    d = diagnostic_of("sin + 1")
    assert d.kind == expr.UNEXPECTED_TOKEN


def test_diagnostic_offset_within_input():
    for text in ("y+*z", "(y+1", "q+1", "y z"):
        d = diagnostic_of(text)
        assert 0 <= d.offset <= len(text.encode())


def ev(text, **values):
    ast = parse(text, tuple(values))
    return expr.eval_scalar(ast, values)


def test_power_binds_tighter_than_unary_minus():
    assert ev("-y^2", y=3.0) == -9.0
    assert ev("(-y)^2", y=3.0) == 9.0


def test_power_right_associative():
    assert ev("2^3^2", y=0.0) == 512.0


def test_negative_exponent():
    assert ev("2^-2", y=0.0) == 0.25


def test_subtraction_left_associative():
    assert ev("y-1-2", y=10.0) == 7.0


def test_division_left_associative():
    assert ev("8/4/2", y=0.0) == 1.0


def test_constants():
    assert ev("pi", y=0.0) == math.pi
    assert ev("e", y=0.0) == math.e
    assert ev("2*pi", y=0.0) == pytest.approx(2 * math.pi)


def test_eval_jet_tan():
    j = expr.eval_jet(parse("tan(z)"), {"z": jets.seed(math.pi / 4, "v")})
    got = (j.val, j.d_u, j.d_v, j.d_uu, j.d_uv, j.d_vv)
    assert got == pytest.approx((1.0, 0.0, 2.0, 0.0, 0.0, 4.0), rel=1e-12)


def test_eval_jet_identity():
    j = expr.eval_jet(parse("y"), {"y": jets.seed(7.0, "u")})
    assert (j.val, j.d_u, j.d_v, j.d_uu, j.d_uv, j.d_vv) == (7.0, 1.0, 0.0, 0.0, 0.0, 0.0)


def test_eval_jet_domain_violation():
    with pytest.raises(DomainError):
        expr.eval_jet(parse("sqrt(z)"), {"z": jets.seed(-1.0, "v")})


def test_scalar_sqrt_extends_to_zero():
    assert ev("sqrt(z)", z=0.0) == 0.0
    with pytest.raises(DomainError):
        expr.eval_jet(parse("sqrt(z)"), {"z": jets.seed(0.0, "v")})


def test_eval_missing_binding_raises():
    with pytest.raises(KeyError):
        expr.eval_scalar(parse("y+z"), {"y": 1.0})


def test_variables_and_substitute():
    ast = parse("y*tan(2*z)")
    assert expr.variables(ast) == {"y", "z"}
    renamed = expr.substitute(ast, {"y": expr.Var("u"), "z": expr.Var("v")})
    assert expr.variables(renamed) == {"u", "v"}
    assert expr.eval_scalar(renamed, {"u": 2.0, "v": 0.3}) == ev("y*tan(2*z)", y=2.0, z=0.3)


def _random_ast(rng, depth, names=("y", "z")):
    kinds = ["num", "var", "const", "binary", "call", "neg", "pow"]
    if depth <= 0:
        kinds = kinds[:3]
    kind = kinds[rng.integers(0, len(kinds))]
    if kind == "num":
        value = float(rng.uniform(-5, 5))
        if rng.random() < 0.3:
            value = float(rng.integers(-4, 5))
        return expr.Num(value)
    if kind == "var":
        return expr.Var(names[rng.integers(0, len(names))])
    if kind == "const":
        return expr.Const("pi" if rng.random() < 0.5 else "e")
    if kind == "binary":
        op = "+-*/"[rng.integers(0, 4)]
        return expr.Binary(op, _random_ast(rng, depth - 1), _random_ast(rng, depth - 1))
    if kind == "call":
        fn = expr.FUNCTION_NAMES[rng.integers(0, len(expr.FUNCTION_NAMES))]
        return expr.Call(fn, _random_ast(rng, depth - 1))
    if kind == "neg":
        arg = _random_ast(rng, depth - 1)
        if isinstance(arg, expr.Num):  # parser folds negated literals
            return expr.Num(-arg.value)
        return expr.Unary("neg", arg)
    return expr.Binary("^", _random_ast(rng, depth - 1), expr.Num(float(rng.integers(-3, 4))))


def test_round_trip_random_asts(rng):
    for _ in range(300):
        ast = _random_ast(rng, depth=4)
        text = expr.to_string(ast)
        assert parse(text) == ast, text


def test_round_trip_pinned_strings():
    for text in ("-0.25*y^2", "z^(-1)", "tan(z)", "y*tan(2*z)", "sqrt(z)", "-1"):
        ast = parse(text)
        assert parse(expr.to_string(ast)) == ast


FD_EXPRESSIONS = (
    ("y*tan(0.5*z)+exp(0.3*y)", (0.5, 2.5), (0.2, 2.0)),
    ("sqrt(y+3)/(z+2)^2", (-1.0, 4.0), (-0.5, 3.0)),
    ("ln(y+2)*sin(z)-y/(z+4)", (-0.5, 5.0), (-2.0, 2.0)),
    ("(y^2+1)^0.7*cos(y*z)", (-2.0, 2.0), (-1.0, 1.0)),
)


@pytest.mark.parametrize("text,ybox,zbox", FD_EXPRESSIONS, ids=[e[0] for e in FD_EXPRESSIONS])
def test_eval_jet_matches_finite_differences(text, ybox, zbox, fd6, rng):
    ast = parse(text)
    for _ in range(25):
        y0 = float(rng.uniform(*ybox))
        z0 = float(rng.uniform(*zbox))
        j = expr.eval_jet(ast, {"y": jets.seed(y0, "u"), "z": jets.seed(z0, "v")})
        want = fd6(lambda u, v: expr.eval_scalar(ast, {"y": u, "z": v}), y0, z0)
        got = (j.val, j.d_u, j.d_v, j.d_uu, j.d_uv, j.d_vv)
        for a, b in zip(got, want):
            assert abs(a - b) <= 1e-5 * max(1.0, abs(a), abs(b))
