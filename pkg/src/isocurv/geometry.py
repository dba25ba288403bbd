"""Curvature engine for admissible surfaces in simply isotropic 3-space.

The ambient metric is the degenerate ds^2 = dx^2 + dy^2 (the z-direction
carries no length), so the first fundamental form of a parameterized
surface r(u, v) = (x, y, z)(u, v) uses only the x and y derivatives:

    E = x_u^2 + y_u^2,  F = x_u x_v + y_u y_v,  G = x_v^2 + y_v^2.

A point is admissible when W = EG - F^2 > 0 (Euclidean tangent plane).
The second fundamental form divides the row determinants of the second
derivatives against the tangent vectors by the square root of W:

    l = det(r_uu, r_u, r_v) / s,  m = det(r_uv, r_u, r_v) / s,
    n = det(r_vv, r_u, r_v) / s,

where s = y_u x_v - y_v x_u is the signed root of W (Lagrange's identity
gives W = s^2).  Taking the sign from the (y, x) top view orients the
normal so that graphs x = f(y) g(z) parameterized by (y, z) receive the
classical second form (f''g/(fg')) dy^2 + 2 (f'/f) dy dz + (g''/g') dz^2,
and it makes l, m, n independent of the parameterization, including
parameter swaps.  Curvatures:

    K = (l n - m^2) / W,      H = (E n - 2 F m + G l) / (2 W).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import expr, jets
from .errors import DomainError, NotAdmissible
from .runtime import grid_map

# Admissibility floor for W = EG - F^2; double-precision determinants lose
# roughly 1e-13 near degeneracy, so anything at or below this is rejected.
EPS_W = 1e-12


@dataclass(frozen=True)
class Rectangle:
    """Closed parameter rectangle [u_min, u_max] x [v_min, v_max]."""

    u_min: float
    u_max: float
    v_min: float
    v_max: float

    def __post_init__(self):
        if not (self.u_min < self.u_max and self.v_min < self.v_max):
            raise ValueError(f"degenerate parameter rectangle {self}")

    def contains(self, u: float, v: float) -> bool:
        return self.u_min <= u <= self.u_max and self.v_min <= v <= self.v_max

    def axes(self, grid: "GridSpec") -> tuple[np.ndarray, np.ndarray]:
        du = (self.u_max - self.u_min) * grid.margin
        dv = (self.v_max - self.v_min) * grid.margin
        us = np.linspace(self.u_min + du, self.u_max - du, grid.nu)
        vs = np.linspace(self.v_min + dv, self.v_max - dv, grid.nv)
        return us, vs


@dataclass(frozen=True)
class GridSpec:
    """Uniform sampling of a rectangle, inset by a fractional margin to
    keep clear of boundary singularities."""

    nu: int = 64
    nv: int = 64
    margin: float = 1e-3

    def __post_init__(self):
        if self.nu < 1 or self.nv < 1:
            raise ValueError("grid needs at least one sample per axis")
        if not 0.0 <= self.margin < 0.5:
            raise ValueError("margin must lie in [0, 0.5)")


@dataclass(frozen=True)
class FundamentalForms:
    E: float
    F: float
    G: float
    l: float
    m: float
    n: float
    W: float


@dataclass(frozen=True)
class Curvatures:
    K: float
    H: float


@dataclass(frozen=True)
class IsotropicMotion:
    """Rigid motion of the isotropic space: a Euclidean rotation and
    translation of the (x, y) top view combined with a z-shear."""

    a1: float = 0.0
    a2: float = 0.0
    a3: float = 0.0
    a4: float = 0.0
    a5: float = 0.0
    phi: float = 0.0


@dataclass(frozen=True)
class SurfacePatch:
    """Parametric surface: three coordinate expressions over two named
    parameters, with a rectangular domain."""

    x: expr.ExprAst
    y: expr.ExprAst
    z: expr.ExprAst
    params: tuple[str, str]
    domain: Rectangle
    family_tag: str | None = None

    def eval_jets(self, u: float, v: float) -> tuple[jets.Jet2, jets.Jet2, jets.Jet2]:
        env = {
            self.params[0]: jets.seed(u, "u"),
            self.params[1]: jets.seed(v, "v"),
        }
        return (
            expr.eval_jet(self.x, env),
            expr.eval_jet(self.y, env),
            expr.eval_jet(self.z, env),
        )

    def eval_point(self, u: float, v: float) -> tuple[float, float, float]:
        env = {self.params[0]: float(u), self.params[1]: float(v)}
        return (
            expr.eval_scalar(self.x, env),
            expr.eval_scalar(self.y, env),
            expr.eval_scalar(self.z, env),
        )


def _det3(a, b, c) -> float:
    return (
        a[0] * (b[1] * c[2] - b[2] * c[1])
        - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
    )


def fundamental_forms(patch: SurfacePatch, u: float, v: float) -> FundamentalForms:
    """First and second fundamental forms at (u, v).

    Raises :class:`NotAdmissible` when W = EG - F^2 falls at or below
    ``EPS_W`` and propagates :class:`DomainError` from coordinate
    evaluation.
    """
    jx, jy, jz = patch.eval_jets(u, v)
    E = jx.d_u * jx.d_u + jy.d_u * jy.d_u
    F = jx.d_u * jx.d_v + jy.d_u * jy.d_v
    G = jx.d_v * jx.d_v + jy.d_v * jy.d_v
    W = E * G - F * F
    if not W > EPS_W:
        raise NotAdmissible((u, v), W)
    s = jy.d_u * jx.d_v - jy.d_v * jx.d_u  # signed root of W (see module doc)
    ru = (jx.d_u, jy.d_u, jz.d_u)
    rv = (jx.d_v, jy.d_v, jz.d_v)
    ruu = (jx.d_uu, jy.d_uu, jz.d_uu)
    ruv = (jx.d_uv, jy.d_uv, jz.d_uv)
    rvv = (jx.d_vv, jy.d_vv, jz.d_vv)
    return FundamentalForms(
        E=E,
        F=F,
        G=G,
        l=_det3(ruu, ru, rv) / s,
        m=_det3(ruv, ru, rv) / s,
        n=_det3(rvv, ru, rv) / s,
        W=W,
    )


def curvatures(forms: FundamentalForms) -> Curvatures:
    """Isotropic Gaussian (relative) and mean curvature from the forms."""
    if not forms.W > EPS_W:
        raise NotAdmissible((math.nan, math.nan), forms.W)
    K = (forms.l * forms.n - forms.m * forms.m) / forms.W
    H = (forms.E * forms.n - 2.0 * forms.F * forms.m + forms.G * forms.l) / (2.0 * forms.W)
    return Curvatures(K=K, H=H)


def curvatures_at(patch: SurfacePatch, u: float, v: float) -> Curvatures:
    return curvatures(fundamental_forms(patch, u, v))


@dataclass(frozen=True)
class AdmissibilityReport:
    admissible: bool
    worst_W: float
    worst_point: tuple[float, float]
    failing_points: tuple[tuple[float, float], ...] = field(default_factory=tuple)

    MAX_FAILURES_KEPT = 16


def admissibility_check(patch: SurfacePatch, grid: GridSpec = GridSpec()) -> AdmissibilityReport:
    """Evaluate W over a grid; admissible iff every sample clears ``EPS_W``.

    Failures (including points where the coordinates cannot be evaluated)
    are collected in the report, not raised.
    """
    us, vs = patch.domain.axes(grid)

    def scan_row(u: float):
        row_worst = math.inf
        row_pt = (u, float(vs[0]))
        row_failing: list[tuple[float, float]] = []
        for v in vs:
            try:
                jx, jy, _ = patch.eval_jets(u, v)
            except DomainError:
                row_failing.append((u, float(v)))
                continue
            E = jx.d_u * jx.d_u + jy.d_u * jy.d_u
            F = jx.d_u * jx.d_v + jy.d_u * jy.d_v
            G = jx.d_v * jx.d_v + jy.d_v * jy.d_v
            W = E * G - F * F
            if W < row_worst:
                row_worst = W
                row_pt = (u, float(v))
            if not W > EPS_W:
                row_failing.append((u, float(v)))
        return row_worst, row_pt, row_failing

    worst = math.inf
    worst_pt = (float(us[0]), float(vs[0]))
    failing: list[tuple[float, float]] = []
    for row_worst, row_pt, row_failing in grid_map(scan_row, (float(u) for u in us)):
        if row_worst < worst:
            worst = row_worst
            worst_pt = row_pt
        failing.extend(row_failing[: AdmissibilityReport.MAX_FAILURES_KEPT - len(failing)])
    return AdmissibilityReport(
        admissible=not failing and worst > EPS_W,
        worst_W=worst,
        worst_point=worst_pt,
        failing_points=tuple(failing),
    )


def apply_motion(motion: IsotropicMotion, patch: SurfacePatch) -> SurfacePatch:
    """Compose the patch with a motion of the isotropic space:

        x' = a1 + x cos(phi) - y sin(phi)
        y' = a2 + x sin(phi) + y cos(phi)
        z' = a3 + a4 x + a5 y + z

    implemented by wrapping the coordinate ASTs.
    """
    c = expr.Num(math.cos(motion.phi))
    s = expr.Num(math.sin(motion.phi))
    X, Y, Z = patch.x, patch.y, patch.z

    def add(a, b):
        return expr.Binary("+", a, b)

    def mul(a, b):
        return expr.Binary("*", a, b)

    x2 = add(expr.Num(motion.a1), expr.Binary("-", mul(c, X), mul(s, Y)))
    y2 = add(expr.Num(motion.a2), add(mul(s, X), mul(c, Y)))
    z2 = add(expr.Num(motion.a3), add(mul(expr.Num(motion.a4), X), add(mul(expr.Num(motion.a5), Y), Z)))
    return SurfacePatch(
        x=x2, y=y2, z=z2, params=patch.params, domain=patch.domain, family_tag=patch.family_tag
    )
