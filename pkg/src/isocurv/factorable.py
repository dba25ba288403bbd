"""Factorable surfaces of type 2 and their constant-curvature catalog.

A type-2 factorable surface is a graph of a product of two univariate
functions, embedded one of two ways:

    PHI3:  r(y, z) = (f(y) g(z), y, z)
    PHI2:  r(x, z) = (x, f(x) g(z), z)

Both embeddings share the first fundamental form, and with this package's
orientation convention they share the second one as well, so the closed
curvature formulas below apply to either (read f as a function of the
first parameter).  Regularity needs f != 0 and g' != 0 on the domain.

Closed forms (derivable by substituting the embedding into the generic
engine; the test-suite checks the agreement numerically):

    H = (((f' g)^2 + 1) g'' + g (g')^2 (f f'' - 2 (f')^2)) / (2 f^2 (g')^3)
    K = (f g f'' g'' - (f' g')^2) / (f g')^4

The catalog below lists every family with constant H or constant K, keyed
by identifiers stable enough to script against:

    ============  =========================================  ===========
    family id     surface                                    constant
    ============  =========================================  ===========
    T1_I1         x = f0 (c1 z + c2)   (non-isotropic plane)  H = 0
    T1_I2         x = y tan(c z)                              H = 0
    T1_I3         x = c z / y                                 H = 0
    T1_II         x = s sqrt(-z / H0), s = +-1                H = H0 != 0
    T2_I1         x = c1 g(z), g' != 0                        K = 0
    T2_I2         x = c1 exp(c2 y + c3 z)                     K = 0
    T2_I3         x = c1 y^c2 z^c3, c2 + c3 = 1               K = 0
    T2_II1        x = s z / (sqrt(-K0) y), K0 < 0             K = K0
    T2_II2        f = -1/(c2 y), g from its slope field       K = K0 != 0
    ============  =========================================  ===========

T2_II2 has no closed form for g: it is generated by integrating the
reduced slope field r(g) = s (c4^2 / g - K0 / c2^2)^(-1/2) (with r = g')
and tabulating the trajectory; patches interpolate the table with cubic
Hermite pieces built from the exact sample slopes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import expr, jets
from .errors import (
    BlowUp,
    DomainError,
    InvalidConstants,
    RadicandNonpositive,
    RegularityError,
)
from .geometry import GridSpec, Rectangle, SurfacePatch, curvatures_at

PHI2 = "PHI2"
PHI3 = "PHI3"

# |f| or |g'| at or below this is treated as a regularity loss.
EPS_REG = 1e-9

# verification tolerances: closed-form families vs ODE-generated ones
TOL_CLOSED = 1e-8
TOL_ODE = 1e-6

# ODE trajectories whose slope magnitude exceeds this are aborted.
SLOPE_LIMIT = 1e6

# instantiate_family rejects domains closer than this to a singular line
SINGULAR_MARGIN = 1e-3

LAMBDA_SEARCH_RANGE = 1e4


# -- tabulated univariate functions -------------------------------------------


@dataclass(frozen=True)
class TabulatedFunction:
    """Samples (z_i, g_i, g'_i) of a univariate function, with evaluation
    by cubic Hermite interpolation on each interval using the exact sample
    slopes (which keeps monotone data monotone).  Evaluation is restricted
    to the sampled range; there is no extrapolation."""

    z: np.ndarray
    g: np.ndarray
    r: np.ndarray
    name: str = "g_tab"

    def __post_init__(self):
        z = np.asarray(self.z, dtype=float)
        g = np.asarray(self.g, dtype=float)
        r = np.asarray(self.r, dtype=float)
        if not (z.shape == g.shape == r.shape) or z.ndim != 1 or z.size < 1:
            raise ValueError("tabulated samples must be equal-length 1-d arrays")
        if z.size > 1 and not np.all(np.diff(z) > 0):
            raise ValueError("sample abscissae must be strictly increasing")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "r", r)

    def samples(self) -> list[tuple[float, float, float]]:
        """Ordered (z, g, g') triples, the on-disk/exchange form."""
        return [(float(a), float(b), float(c)) for a, b, c in zip(self.z, self.g, self.r)]

    def eval_with_derivatives(self, x: float) -> tuple[float, float, float]:
        z, g, r = self.z, self.g, self.r
        if z.size == 1:
            if x != z[0]:
                raise DomainError(f"{self.name} sampled at a single point {z[0]:g}")
            return float(g[0]), float(r[0]), 0.0
        span = z[-1] - z[0]
        if x < z[0] - 1e-12 * span or x > z[-1] + 1e-12 * span:
            raise DomainError(
                f"{self.name} evaluated at {x:g}, outside the tabulated range "
                f"[{z[0]:g}, {z[-1]:g}]"
            )
        i = int(np.searchsorted(z, x, side="right")) - 1
        i = min(max(i, 0), z.size - 2)
        h = z[i + 1] - z[i]
        t = (x - z[i]) / h
        g0, g1 = g[i], g[i + 1]
        r0, r1 = r[i], r[i + 1]
        t2 = t * t
        t3 = t2 * t
        val = (
            (2 * t3 - 3 * t2 + 1) * g0
            + (t3 - 2 * t2 + t) * h * r0
            + (-2 * t3 + 3 * t2) * g1
            + (t3 - t2) * h * r1
        )
        d1 = (
            (6 * t2 - 6 * t) * g0
            + (3 * t2 - 4 * t + 1) * h * r0
            + (-6 * t2 + 6 * t) * g1
            + (3 * t2 - 2 * t) * h * r1
        ) / h
        d2 = (
            (12 * t - 6) * g0
            + (6 * t - 4) * h * r0
            + (-12 * t + 6) * g1
            + (6 * t - 2) * h * r1
        ) / (h * h)
        return float(val), float(d1), float(d2)

    def __call__(self, x: float) -> float:
        return self.eval_with_derivatives(x)[0]


GFunction = Union[expr.ExprAst, TabulatedFunction]


# -- specs and patches ---------------------------------------------------------


@dataclass(frozen=True)
class FactorableSpec:
    """One concrete factorable surface: the embedding type, the two factor
    functions and the parameter rectangle.  ``f`` is always an expression;
    ``g`` may be an expression or a tabulated trajectory."""

    type_tag: str
    f: expr.ExprAst
    g: GFunction
    domain: Rectangle
    f_var: str = "y"
    g_var: str = "z"
    f_text: str | None = None
    g_text: str | None = None
    family_id: str | None = None

    def __post_init__(self):
        if self.type_tag not in (PHI2, PHI3):
            raise ValueError(f"type_tag must be PHI2 or PHI3, got {self.type_tag!r}")

    def describe_f(self) -> str:
        return self.f_text if self.f_text is not None else expr.to_string(self.f)

    def describe_g(self) -> str:
        if isinstance(self.g, TabulatedFunction):
            return self.g_text or f"<tabulated {self.g.name}, {self.g.z.size} samples>"
        return self.g_text if self.g_text is not None else expr.to_string(self.g)


def _g_node(spec: FactorableSpec, var_name: str) -> expr.ExprAst:
    if isinstance(spec.g, TabulatedFunction):
        return expr.Sampled(spec.g.name, spec.g.eval_with_derivatives, expr.Var(var_name))
    return expr.substitute(spec.g, {spec.g_var: expr.Var(var_name)})


def make_patch(spec: FactorableSpec) -> SurfacePatch:
    """Embed the spec as a surface patch.

    PHI3 gives (f(u) g(v), u, v) over (u, v) = (y, z); PHI2 gives
    (u, f(u) g(v), v) over (u, v) = (x, z).
    """
    if spec.type_tag == PHI3:
        params = ("y", "z")
        f_node = expr.substitute(spec.f, {spec.f_var: expr.Var("y")})
        product = expr.Binary("*", f_node, _g_node(spec, "z"))
        x, y, z = product, expr.Var("y"), expr.Var("z")
    else:
        params = ("x", "z")
        f_node = expr.substitute(spec.f, {spec.f_var: expr.Var("x")})
        product = expr.Binary("*", f_node, _g_node(spec, "z"))
        x, y, z = expr.Var("x"), product, expr.Var("z")
    return SurfacePatch(
        x=x,
        y=y,
        z=z,
        params=params,
        domain=spec.domain,
        family_tag=spec.family_id or spec.type_tag,
    )


def _f_derivs(spec: FactorableSpec, y: float) -> tuple[float, float, float]:
    j = expr.eval_jet(spec.f, {spec.f_var: jets.seed(y, "u")})
    return j.val, j.d_u, j.d_uu


def _g_derivs(spec: FactorableSpec, z: float) -> tuple[float, float, float]:
    if isinstance(spec.g, TabulatedFunction):
        return spec.g.eval_with_derivatives(z)
    j = expr.eval_jet(spec.g, {spec.g_var: jets.seed(z, "v")})
    return j.val, j.d_v, j.d_vv


def _require_regular(f: float, g1: float, point: tuple[float, float]):
    if abs(f) <= EPS_REG:
        raise RegularityError(point, f"f vanishes at (u, v) = {point}")
    if abs(g1) <= EPS_REG:
        raise RegularityError(point, f"g' vanishes at (u, v) = {point}")


def mean_curvature_factorable(spec: FactorableSpec, y: float, z: float) -> float:
    """Isotropic mean curvature of the factorable surface at (y, z), via
    the closed form (no generic-engine determinant work)."""
    f, f1, f2 = _f_derivs(spec, y)
    g, g1, g2 = _g_derivs(spec, z)
    _require_regular(f, g1, (y, z))
    num = ((f1 * g) ** 2 + 1.0) * g2 + g * g1 * g1 * (f * f2 - 2.0 * f1 * f1)
    return num / (2.0 * f * f * g1 * g1 * g1)


def gauss_curvature_factorable(spec: FactorableSpec, y: float, z: float) -> float:
    """Isotropic Gaussian (relative) curvature at (y, z), closed form."""
    f, f1, f2 = _f_derivs(spec, y)
    g, g1, g2 = _g_derivs(spec, z)
    _require_regular(f, g1, (y, z))
    return (f * g * f2 * g2 - (f1 * g1) ** 2) / (f * g1) ** 4


def curvature_grid(
    spec: FactorableSpec, us: np.ndarray, vs: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """H and K over a grid via the closed forms.

    The factor functions are univariate, so they are differentiated once
    per axis and combined by broadcasting; output shape is
    (len(us), len(vs)).
    """
    fd = np.array([_f_derivs(spec, float(u)) for u in us])
    gd = np.array([_g_derivs(spec, float(v)) for v in vs])
    f, f1, f2 = (fd[:, k].reshape(-1, 1) for k in range(3))
    g, g1, g2 = (gd[:, k].reshape(1, -1) for k in range(3))
    bad = np.nonzero(np.abs(fd[:, 0]) <= EPS_REG)[0]
    if bad.size:
        pt = (float(us[bad[0]]), float(vs[0]))
        raise RegularityError(pt, f"f vanishes at y = {us[bad[0]]:g}")
    bad = np.nonzero(np.abs(gd[:, 1]) <= EPS_REG)[0]
    if bad.size:
        pt = (float(us[0]), float(vs[bad[0]]))
        raise RegularityError(pt, f"g' vanishes at z = {vs[bad[0]]:g}")
    H = (((f1 * g) ** 2 + 1.0) * g2 + g * g1 * g1 * (f * f2 - 2.0 * f1 * f1)) / (
        2.0 * f * f * g1**3
    )
    K = (f * g * f2 * g2 - (f1 * g1) ** 2) / (f * g1) ** 4
    return H, K


# -- ODE-generated factor functions --------------------------------------------


def _rk4(state: tuple[float, ...], h: float, rhs) -> tuple[float, ...]:
    k1 = rhs(state)
    k2 = rhs(tuple(s + 0.5 * h * k for s, k in zip(state, k1)))
    k3 = rhs(tuple(s + 0.5 * h * k for s, k in zip(state, k2)))
    k4 = rhs(tuple(s + h * k for s, k in zip(state, k3)))
    return tuple(
        s + (h / 6.0) * (a + 2.0 * b + 2.0 * c + d)
        for s, a, b, c, d in zip(state, k1, k2, k3, k4)
    )


def ode_generate_cmc(
    h0: float,
    f0: float,
    z0: float,
    g0: float,
    r0: float,
    z_end: float,
    steps: int,
) -> TabulatedFunction:
    """Tabulate g(z) for the constant-mean-curvature family with constant
    factor f = f0: integrates g'' = 2 h0 f0^2 (g')^3 with fixed-step
    classical RK4 (bit-reproducible for a given step count)."""
    if h0 == 0.0:
        raise InvalidConstants("h0 must be nonzero")
    if f0 == 0.0:
        raise InvalidConstants("f0 must be nonzero")
    if r0 == 0.0:
        raise InvalidConstants("initial slope r0 must be nonzero")
    if steps < 1:
        raise InvalidConstants("steps must be at least 1")
    if z_end < z0:
        raise InvalidConstants("z_end must not precede z0")
    if z_end == z0:  # zero-length integration keeps the initial state
        return TabulatedFunction(np.array([z0]), np.array([g0]), np.array([r0]), name="g_cmc")
    c = 2.0 * h0 * f0 * f0

    def rhs(state):
        _, r = state
        return (r, c * r * r * r)

    h = (z_end - z0) / steps
    zs = [z0]
    gs = [g0]
    rs = [r0]
    g, r = float(g0), float(r0)
    for k in range(steps):
        g, r = _rk4((g, r), h, rhs)
        if not (math.isfinite(g) and math.isfinite(r)) or abs(r) > SLOPE_LIMIT:
            raise BlowUp(f"slope left the trusted region near z = {z0 + (k + 1) * h:g}")
        zs.append(z0 + (k + 1) * h)
        gs.append(g)
        rs.append(r)
    return TabulatedFunction(np.array(zs), np.array(gs), np.array(rs), name="g_cmc")


def ode_generate_k0(
    k0: float,
    c2: float,
    c4: float,
    g0: float,
    sign: int,
    z0: float,
    z_end: float,
    steps: int,
) -> TabulatedFunction:
    """Tabulate g(z) for the constant-Gaussian-curvature family paired
    with f = -1/(c2 y): integrates the solved slope field

        dg/dz = r(g) = sign * (c4^2 / g - k0 / c2^2)^(-1/2)

    with fixed-step RK4.  The radicand must stay positive along the
    trajectory (for k0 < 0 and g > 0 it always does)."""
    if c2 == 0.0 or c4 == 0.0:
        raise InvalidConstants("c2 and c4 must be nonzero")
    if k0 == 0.0:
        raise InvalidConstants("k0 must be nonzero")
    if g0 <= 0.0:
        raise InvalidConstants("g0 must be positive")
    if sign not in (1, -1):
        raise InvalidConstants("sign must be +1 or -1")
    if steps < 1:
        raise InvalidConstants("steps must be at least 1")
    if z_end < z0:
        raise InvalidConstants("z_end must not precede z0")

    shift = k0 / (c2 * c2)
    cc = c4 * c4

    def slope(g: float) -> float:
        if g <= 0.0:
            raise RadicandNonpositive(f"trajectory reached g = {g:g} <= 0")
        q = cc / g - shift
        if q <= 0.0:
            raise RadicandNonpositive(f"radicand {q:g} at g = {g:g} is not positive")
        return sign / math.sqrt(q)

    def rhs(state):
        return (slope(state[0]),)

    if z_end == z0:  # zero-length integration keeps the initial state
        return TabulatedFunction(
            np.array([z0]), np.array([g0]), np.array([slope(g0)]), name="g_k0"
        )
    h = (z_end - z0) / steps
    zs = [z0]
    gs = [g0]
    rs = [slope(g0)]
    g = float(g0)
    for k in range(steps):
        (g,) = _rk4((g,), h, rhs)
        if not math.isfinite(g):
            raise BlowUp(f"trajectory lost near z = {z0 + (k + 1) * h:g}")
        r = slope(g)
        if abs(r) > SLOPE_LIMIT:
            raise BlowUp(f"slope left the trusted region near z = {z0 + (k + 1) * h:g}")
        zs.append(z0 + (k + 1) * h)
        gs.append(g)
        rs.append(r)
    return TabulatedFunction(np.array(zs), np.array(gs), np.array(rs), name="g_k0")


# -- the classified-family catalog ---------------------------------------------


FAMILY_IDS = (
    "T1_I1",
    "T1_I2",
    "T1_I3",
    "T1_II",
    "T2_I1",
    "T2_I2",
    "T2_I3",
    "T2_II1",
    "T2_II2",
)

CLOSED_FORM_FAMILY_IDS = FAMILY_IDS[:8]


@dataclass(frozen=True)
class FamilySpec:
    """A catalog family with its free constants; see the module docstring
    for the id table.  ``domain`` defaults to a family-appropriate
    rectangle.  ``ode_steps`` only matters for T2_II2."""

    family_id: str
    constants: dict[str, float] = field(default_factory=dict)
    domain: Rectangle | None = None
    ode_steps: int = 2000


def _fmt(c: float) -> str:
    if float(c).is_integer() and abs(c) < 1e15:
        return str(int(c))
    return repr(float(c))


def _scaled(c: float, var: str) -> str:
    if c == 1:
        return var
    if c == -1:
        return f"-{var}"
    return f"{_fmt(c)}*{var}"


def _plus_const(head: str, c: float) -> str:
    if c == 0:
        return head
    if c < 0:
        return f"{head}-{_fmt(-c)}"
    return f"{head}+{_fmt(c)}"


def _pow_text(base: str, p: float) -> str:
    t = _fmt(p)
    if p < 0:
        return f"{base}^({t})"
    return f"{base}^{t}"


def _take(constants: dict[str, float], required: tuple[str, ...], optional: dict[str, float]):
    known = set(required) | set(optional)
    extra = set(constants) - known
    if extra:
        raise InvalidConstants(f"unknown constant(s) {sorted(extra)}; expected {sorted(known)}")
    out = {}
    for name in required:
        if name not in constants:
            raise InvalidConstants(f"missing constant {name!r}")
        out[name] = float(constants[name])
    for name, default in optional.items():
        out[name] = float(constants.get(name, default))
    return out


def _check_nonzero(value: float, name: str):
    if value == 0.0:
        raise InvalidConstants(f"constant {name!r} must be nonzero")


def _check_sign(value: float) -> int:
    if value not in (1.0, -1.0):
        raise InvalidConstants("constant 'sign' must be +1 or -1")
    return int(value)


def _reject_zero_line(lo: float, hi: float, axis: str):
    if not (lo > SINGULAR_MARGIN or hi < -SINGULAR_MARGIN):
        raise InvalidConstants(f"domain must keep {axis} = 0 out (margin {SINGULAR_MARGIN:g})")


def _reject_tan_poles(c: float, dom: Rectangle):
    a, b = sorted((c * dom.v_min, c * dom.v_max))
    k_lo = math.floor((a - SINGULAR_MARGIN - math.pi / 2.0) / math.pi)
    k_hi = math.ceil((b + SINGULAR_MARGIN - math.pi / 2.0) / math.pi)
    for k in range(k_lo, k_hi + 1):
        pole = math.pi / 2.0 + k * math.pi
        if a - SINGULAR_MARGIN <= pole <= b + SINGULAR_MARGIN:
            raise InvalidConstants(
                f"domain puts c*z across a tangent pole near {pole:g} (margin {SINGULAR_MARGIN:g})"
            )


def _require_positive_axis(lo: float, hi: float, axis: str):
    if lo <= SINGULAR_MARGIN:
        raise InvalidConstants(f"domain must keep {axis} > 0 (margin {SINGULAR_MARGIN:g})")


def family_claim(fam: FamilySpec) -> tuple[str, float]:
    """The constancy claim verified for the family: ("H", h0) or ("K", k0)."""
    fid = fam.family_id
    if fid in ("T1_I1", "T1_I2", "T1_I3"):
        return ("H", 0.0)
    if fid == "T1_II":
        return ("H", float(fam.constants["H0"]))
    if fid in ("T2_I1", "T2_I2", "T2_I3"):
        return ("K", 0.0)
    if fid in ("T2_II1", "T2_II2"):
        return ("K", float(fam.constants["K0"]))
    raise InvalidConstants(f"unknown family id {fam.family_id!r}")


def instantiate_family(fam: FamilySpec) -> FactorableSpec:
    """Build the concrete factorable surface for a catalog family.

    Emits canonical formula strings for f and g (a tabulated g for
    T2_II2), picks a family-appropriate default domain when none is
    given, and rejects constants or domains that violate the family's
    constraints (:class:`InvalidConstants`)."""
    fid = fam.family_id
    consts = fam.constants

    if fid == "T1_I1":
        c = _take(consts, (), {"f0": 1.0, "c1": 1.0, "c2": 0.0})
        _check_nonzero(c["f0"], "f0")
        _check_nonzero(c["c1"], "c1")
        f_text = _fmt(c["f0"])
        g_text = _plus_const(_scaled(c["c1"], "z"), c["c2"])
        domain = fam.domain or Rectangle(-1.0, 1.0, -1.0, 1.0)

    elif fid == "T1_I2":
        c = _take(consts, ("c",), {})
        _check_nonzero(c["c"], "c")
        f_text = "y"
        g_text = f"tan({_scaled(c['c'], 'z')})"
        if fam.domain is None:
            z_hi = min(math.pi / 3.0, 1.3 / abs(c["c"]))
            if z_hi <= 0.02:
                raise InvalidConstants("|c| too large for the default domain; supply one")
            domain = Rectangle(0.02, math.pi / 3.0, 0.02, z_hi)
        else:
            domain = fam.domain
        _reject_zero_line(domain.u_min, domain.u_max, "y")
        _reject_tan_poles(c["c"], domain)

    elif fid == "T1_I3":
        c = _take(consts, ("c",), {})
        _check_nonzero(c["c"], "c")
        f_text = "1/y" if c["c"] == 1 else f"{_fmt(c['c'])}/y"
        g_text = "z"
        domain = fam.domain or Rectangle(1.0, math.pi, 1.0, 2.0 * math.pi)
        _reject_zero_line(domain.u_min, domain.u_max, "y")

    elif fid == "T1_II":
        c = _take(consts, ("H0",), {"sign": 1.0})
        _check_nonzero(c["H0"], "H0")
        s = _check_sign(c["sign"])
        a = -1.0 / c["H0"]
        f_text = "1" if s == 1 else "-1"
        g_text = f"sqrt({_scaled(a, 'z')})"
        if fam.domain is None:
            if a > 0:
                domain = Rectangle(0.0, 2.0 * math.pi, 0.05, 2.0 * math.pi)
            else:
                domain = Rectangle(0.0, 2.0 * math.pi, -2.0 * math.pi, -0.05)
        else:
            domain = fam.domain
        lo, hi = sorted((a * domain.v_min, a * domain.v_max))
        if lo <= SINGULAR_MARGIN:
            raise InvalidConstants(
                f"domain must keep -z/H0 positive (margin {SINGULAR_MARGIN:g})"
            )

    elif fid == "T2_I1":
        c = _take(consts, ("c1",), {"a": 1.0, "b": 0.5})
        _check_nonzero(c["c1"], "c1")
        _check_nonzero(c["a"], "a")
        if abs(c["b"]) >= abs(c["a"]):
            raise InvalidConstants("need |b| < |a| so that g' = a + b cos(z) stays nonzero")
        f_text = _fmt(c["c1"])
        head = _scaled(c["a"], "z")
        g_text = head if c["b"] == 0 else f"{head}+{_fmt(c['b'])}*sin(z)"
        domain = fam.domain or Rectangle(0.0, 1.0, 0.0, 1.0)

    elif fid == "T2_I2":
        c = _take(consts, ("c1", "c2", "c3"), {})
        for name in ("c1", "c2", "c3"):
            _check_nonzero(c[name], name)
        fy = f"exp({_scaled(c['c2'], 'y')})"
        f_text = fy if c["c1"] == 1 else f"{_fmt(c['c1'])}*{fy}"
        g_text = f"exp({_scaled(c['c3'], 'z')})"
        domain = fam.domain or Rectangle(0.0, 1.0, 0.0, 1.0)

    elif fid == "T2_I3":
        c = _take(consts, ("c1", "c2", "c3"), {})
        for name in ("c1", "c2", "c3"):
            _check_nonzero(c[name], name)
        if abs(c["c2"] + c["c3"] - 1.0) > 1e-9:
            raise InvalidConstants("exponents must satisfy c2 + c3 = 1")
        c["c3"] = 1.0 - c["c2"]  # snap so the flatness identity is exact
        fy = _pow_text("y", c["c2"])
        if c["c1"] == 1:
            f_text = fy
        elif c["c1"] == -1:
            f_text = f"-{fy}"
        else:
            f_text = f"{_fmt(c['c1'])}*{fy}"
        g_text = _pow_text("z", c["c3"])
        domain = fam.domain or Rectangle(0.5, 1.5, 0.5, 1.5)
        _require_positive_axis(domain.u_min, domain.u_max, "y")
        _require_positive_axis(domain.v_min, domain.v_max, "z")

    elif fid == "T2_II1":
        c = _take(consts, ("K0",), {"sign": 1.0})
        if not c["K0"] < 0.0:
            raise InvalidConstants("K0 must be negative for this family")
        s = _check_sign(c["sign"])
        a = math.sqrt(-c["K0"])
        numer = "1" if s == 1 else "-1"
        f_text = f"{numer}/y" if a == 1 else f"{numer}/({_fmt(a)}*y)"
        g_text = "z"
        domain = fam.domain or Rectangle(1.0, math.pi, 1.0, 2.0 * math.pi)
        _reject_zero_line(domain.u_min, domain.u_max, "y")

    elif fid == "T2_II2":
        c = _take(consts, ("K0", "c2"), {"c4": 1.0, "g0": 1.0, "sign": 1.0})
        _check_nonzero(c["K0"], "K0")
        _check_nonzero(c["c2"], "c2")
        _check_nonzero(c["c4"], "c4")
        s = _check_sign(c["sign"])
        domain = fam.domain or Rectangle(0.5, 2.0, 0.0, 2.0)
        _reject_zero_line(domain.u_min, domain.u_max, "y")
        f_text = "-1/y" if c["c2"] == 1 else f"-1/({_scaled(c['c2'], 'y')})"
        table = ode_generate_k0(
            c["K0"],
            c["c2"],
            c["c4"],
            c["g0"],
            s,
            z0=domain.v_min,
            z_end=domain.v_max,
            steps=fam.ode_steps,
        )
        return FactorableSpec(
            PHI3,
            expr.parse(f_text, {"y"}),
            table,
            domain,
            f_text=f_text,
            g_text=None,
            family_id=fid,
        )

    else:
        raise InvalidConstants(f"unknown family id {fid!r}")

    return FactorableSpec(
        PHI3,
        expr.parse(f_text, {"y"}),
        expr.parse(g_text, {"z"}),
        domain,
        f_text=f_text,
        g_text=g_text,
        family_id=fid,
    )


# -- verification ---------------------------------------------------------------


@dataclass(frozen=True)
class VerifyReport:
    claim: tuple[str, float]
    max_residual: float
    tolerance: float
    passed: bool
    grid: tuple[int, int]
    domain: Rectangle
    family_id: str | None = None
    constants: dict[str, float] | None = None
    worst_point: tuple[float, float] | None = None


def verify_spec(
    spec: FactorableSpec,
    claim: tuple[str, float],
    grid: GridSpec = GridSpec(),
    tol: float = TOL_CLOSED,
) -> VerifyReport:
    """Check |H - target| (or |K - target|) over a grid through BOTH the
    closed forms and the generic engine; passes iff the larger of the two
    residuals stays within ``tol`` everywhere.  Regularity or
    admissibility losses abort with the failing point attached."""
    kind, target = claim
    if kind not in ("H", "K"):
        raise ValueError("claim kind must be 'H' or 'K'")
    us, vs = spec.domain.axes(grid)
    H, K = curvature_grid(spec, us, vs)
    closed = H if kind == "H" else K
    patch = make_patch(spec)
    worst = -math.inf
    worst_pt = (float(us[0]), float(vs[0]))
    for i, u in enumerate(us):
        for j, v in enumerate(vs):
            c = curvatures_at(patch, float(u), float(v))
            generic = c.H if kind == "H" else c.K
            res = max(abs(closed[i, j] - target), abs(generic - target))
            if res > worst:
                worst = res
                worst_pt = (float(u), float(v))
    return VerifyReport(
        claim=claim,
        max_residual=worst,
        tolerance=tol,
        passed=worst <= tol,
        grid=(grid.nu, grid.nv),
        domain=spec.domain,
        family_id=spec.family_id,
        worst_point=worst_pt,
    )


def verify_family(
    fam: FamilySpec, grid: GridSpec = GridSpec(), tol: float | None = None
) -> VerifyReport:
    """Instantiate a catalog family and verify its constancy claim."""
    spec = instantiate_family(fam)
    claim = family_claim(fam)
    if tol is None:
        tol = TOL_ODE if fam.family_id == "T2_II2" else TOL_CLOSED
    report = verify_spec(spec, claim, grid=grid, tol=tol)
    return VerifyReport(
        claim=report.claim,
        max_residual=report.max_residual,
        tolerance=report.tolerance,
        passed=report.passed,
        grid=report.grid,
        domain=report.domain,
        family_id=fam.family_id,
        constants=dict(fam.constants),
        worst_point=report.worst_point,
    )


# -- the curvature-ratio probe ---------------------------------------------------


@dataclass(frozen=True)
class RatioProbeReport:
    degenerate: str | None  # "H_zero", "K_zero" or None
    best_lambda: float | None
    min_scaled_residual: float | None
    ratio_stddev: float | None


def _golden_min(fn, lo: float, hi: float, iters: int = 160) -> tuple[float, float]:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        if b - a <= 1e-12 * max(1.0, abs(a), abs(b)):
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(d)
    x = 0.5 * (a + b)
    return x, fn(x)


def ratio_probe(
    spec: FactorableSpec,
    grid: GridSpec = GridSpec(),
    degenerate_tol: float = 1e-8,
) -> RatioProbeReport:
    """Search for a constant lambda with H + lambda K = 0 on the grid.

    Degenerate surfaces (H or K identically zero within tolerance) are
    tagged and skipped.  Otherwise the scale-free merit

        merit(lambda) = max over the grid of |H + lambda K| / (|H| + |lambda K|)

    is minimized over lambda in [-1e4, 1e4] by a coarse candidate sweep
    (quantiles of the pointwise ratios -H/K) followed by golden-section
    refinement with three shrinking restarts.  The report also carries the
    standard deviation of H/K across the grid; a surface on which some
    constant lambda truly worked would show zero spread."""
    us, vs = spec.domain.axes(grid)
    H, K = curvature_grid(spec, us, vs)
    absH = np.abs(H)
    absK = np.abs(K)
    if float(absH.max()) < degenerate_tol:
        return RatioProbeReport("H_zero", None, None, None)
    if float(absK.max()) < degenerate_tol:
        return RatioProbeReport("K_zero", None, None, None)

    def merit(lam: float) -> float:
        return float(np.max(np.abs(H + lam * K) / (absH + abs(lam) * absK + 1e-300)))

    with np.errstate(divide="ignore", invalid="ignore"):
        hk = np.where(absK > 0, H / K, np.nan).ravel()
    hk = hk[np.isfinite(hk)]
    stddev = float(np.std(hk)) if hk.size else 0.0
    ratios = -hk  # pointwise lambda candidates solving H + lambda K = 0

    lo, hi = -LAMBDA_SEARCH_RANGE, LAMBDA_SEARCH_RANGE
    candidates = [lo, hi, 0.0]
    if ratios.size:
        qs = np.quantile(np.clip(ratios, lo, hi), [0.0, 0.05, 0.25, 0.5, 0.75, 0.95, 1.0])
        candidates.extend(float(q) for q in qs)
    candidates = sorted(set(candidates))
    scores = [merit(c) for c in candidates]
    k = int(np.argmin(scores))
    b_lo = candidates[max(0, k - 1)]
    b_hi = candidates[min(len(candidates) - 1, k + 1)]
    if b_lo == b_hi:
        b_lo, b_hi = max(lo, b_lo - 1.0), min(hi, b_hi + 1.0)
    best_x, best_f = _golden_min(merit, b_lo, b_hi)
    width = b_hi - b_lo
    for shrink in (0.1, 0.01, 0.001):
        d = max(width * shrink, 1e-9)
        x, fx = _golden_min(merit, max(lo, best_x - d), min(hi, best_x + d))
        if fx < best_f:
            best_x, best_f = x, fx
    return RatioProbeReport(
        degenerate=None,
        best_lambda=best_x,
        min_scaled_residual=best_f,
        ratio_stddev=stddev,
    )


# -- cross-type comparison --------------------------------------------------------


@dataclass(frozen=True)
class CompareReport:
    max_K_diff: float
    max_absH_diff: float


def _single_var(node: expr.ExprAst, fallback: str) -> str:
    names = expr.variables(node)
    if len(names) > 1:
        raise ValueError(f"factor function must be univariate, got variables {sorted(names)}")
    return next(iter(names)) if names else fallback


def compare_types(
    f: expr.ExprAst,
    g: expr.ExprAst,
    domain: Rectangle,
    grid: GridSpec = GridSpec(),
) -> CompareReport:
    """Build both embeddings from the same pair (f, g) and compare their
    curvatures at matched parameter points: the Gaussian curvatures should
    agree, and the mean curvatures should agree in magnitude."""
    f_var = _single_var(f, "t")
    g_var = _single_var(g, "t")
    spec3 = FactorableSpec(PHI3, f, g, domain, f_var=f_var, g_var=g_var)
    spec2 = FactorableSpec(PHI2, f, g, domain, f_var=f_var, g_var=g_var)
    p3 = make_patch(spec3)
    p2 = make_patch(spec2)
    us, vs = domain.axes(grid)
    max_k = 0.0
    max_h = 0.0
    for u in us:
        for v in vs:
            c3 = curvatures_at(p3, float(u), float(v))
            c2 = curvatures_at(p2, float(u), float(v))
            max_k = max(max_k, abs(c2.K - c3.K))
            max_h = max(max_h, abs(abs(c2.H) - abs(c3.H)))
    return CompareReport(max_K_diff=max_k, max_absH_diff=max_h)


# -- bundled demonstration surfaces ------------------------------------------------


@dataclass(frozen=True)
class ExampleSurface:
    """One of the four bundled demonstration surfaces, with its display
    domain and an inset domain on which the curvature formulas stay
    regular."""

    number: int
    f_text: str
    g_text: str
    domain: Rectangle
    curvature_domain: Rectangle
    description: str
    claims: tuple[tuple[str, float], ...]

    def spec(self, for_curvature: bool = False) -> FactorableSpec:
        dom = self.curvature_domain if for_curvature else self.domain
        return FactorableSpec(
            PHI3,
            expr.parse(self.f_text, {"y"}),
            expr.parse(self.g_text, {"z"}),
            dom,
            f_text=self.f_text,
            g_text=self.g_text,
            family_id=f"example-{self.number}",
        )


_PI = math.pi

BUILTIN_EXAMPLES = {
    1: ExampleSurface(
        number=1,
        f_text="y",
        g_text="tan(z)",
        domain=Rectangle(0.0, _PI / 3.0, 0.0, _PI / 3.0),
        curvature_domain=Rectangle(0.02, _PI / 3.0, 0.02, _PI / 3.0),
        description="minimal surface x = y*tan(z) (H = 0)",
        claims=(("H", 0.0),),
    ),
    2: ExampleSurface(
        number=2,
        f_text="-1",
        g_text="sqrt(z)",
        domain=Rectangle(0.0, 2.0 * _PI, 0.0, 2.0 * _PI),
        curvature_domain=Rectangle(0.0, 2.0 * _PI, 0.05, 2.0 * _PI),
        description="constant-mean-curvature surface x = -sqrt(z) (H = -1)",
        claims=(("H", -1.0),),
    ),
    3: ExampleSurface(
        number=3,
        f_text="-0.25*y^2",
        g_text="1/z",
        domain=Rectangle(1.0, 1.4, 1.0, 2.0 * _PI),
        curvature_domain=Rectangle(1.0, 1.4, 1.0, 2.0 * _PI),
        description="flat surface x = -y^2/(4*z) (K = 0)",
        claims=(("K", 0.0),),
    ),
    4: ExampleSurface(
        number=4,
        f_text="1/y",
        g_text="z",
        domain=Rectangle(1.0, _PI, 1.0, 2.0 * _PI),
        curvature_domain=Rectangle(1.0, _PI, 1.0, 2.0 * _PI),
        description="surface x = z/y (K = -1, H = 0)",
        claims=(("K", -1.0), ("H", 0.0)),
    ),
}
