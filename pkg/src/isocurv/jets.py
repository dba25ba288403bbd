"""Second-order forward-mode jets for scalar fields of two parameters.

A :class:`Jet2` carries the value of a smooth function w(u, v) at a point
together with its first and second partial derivatives there.  Arithmetic
and the elementary functions propagate all six components exactly
(product, quotient and second-order chain rules), so curvature code sees
machine-precision derivatives instead of finite-difference estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, UnsupportedFunction

# tan() is rejected when |cos| falls below this; keeps slopes representable.
TAN_POLE_MARGIN = 1e-8


@dataclass(slots=True)
class Jet2:
    """Value and partials of w(u, v) up to second order at one point.

    ``d_uv`` stores the single mixed partial; all functions in scope are
    smooth, so the two mixed derivative orders coincide.
    """

    val: float
    d_u: float = 0.0
    d_v: float = 0.0
    d_uu: float = 0.0
    d_uv: float = 0.0
    d_vv: float = 0.0

    def is_constant(self) -> bool:
        return (
            self.d_u == 0.0
            and self.d_v == 0.0
            and self.d_uu == 0.0
            and self.d_uv == 0.0
            and self.d_vv == 0.0
        )

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        o = _lift(other)
        return Jet2(
            self.val + o.val,
            self.d_u + o.d_u,
            self.d_v + o.d_v,
            self.d_uu + o.d_uu,
            self.d_uv + o.d_uv,
            self.d_vv + o.d_vv,
        )

    __radd__ = __add__

    def __sub__(self, other):
        o = _lift(other)
        return Jet2(
            self.val - o.val,
            self.d_u - o.d_u,
            self.d_v - o.d_v,
            self.d_uu - o.d_uu,
            self.d_uv - o.d_uv,
            self.d_vv - o.d_vv,
        )

    def __rsub__(self, other):
        return _lift(other).__sub__(self)

    def __mul__(self, other):
        o = _lift(other)
        return Jet2(
            self.val * o.val,
            self.d_u * o.val + self.val * o.d_u,
            self.d_v * o.val + self.val * o.d_v,
            self.d_uu * o.val + 2.0 * self.d_u * o.d_u + self.val * o.d_uu,
            self.d_uv * o.val + self.d_u * o.d_v + self.d_v * o.d_u + self.val * o.d_uv,
            self.d_vv * o.val + 2.0 * self.d_v * o.d_v + self.val * o.d_vv,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _lift(other)
        if o.val == 0.0:
            raise DomainError("division by zero")
        q = self.val / o.val
        q_u = (self.d_u - q * o.d_u) / o.val
        q_v = (self.d_v - q * o.d_v) / o.val
        q_uu = (self.d_uu - 2.0 * q_u * o.d_u - q * o.d_uu) / o.val
        q_uv = (self.d_uv - q_u * o.d_v - q_v * o.d_u - q * o.d_uv) / o.val
        q_vv = (self.d_vv - 2.0 * q_v * o.d_v - q * o.d_vv) / o.val
        return Jet2(q, q_u, q_v, q_uu, q_uv, q_vv)

    def __rtruediv__(self, other):
        return _lift(other).__truediv__(self)

    def __neg__(self):
        return Jet2(-self.val, -self.d_u, -self.d_v, -self.d_uu, -self.d_uv, -self.d_vv)

    def __pow__(self, other):
        return pow_jet(self, other)


def _lift(x) -> Jet2:
    if isinstance(x, Jet2):
        return x
    return Jet2(float(x))


def constant(value: float) -> Jet2:
    return Jet2(float(value))


def seed(value: float, which: str | None = None) -> Jet2:
    """Jet of a coordinate function or a constant.

    ``which`` is ``"u"`` or ``"v"`` for the respective coordinate function
    (first derivative one, all else zero) and ``None`` for a constant.
    """
    if which is None:
        return Jet2(float(value))
    if which == "u":
        return Jet2(float(value), d_u=1.0)
    if which == "v":
        return Jet2(float(value), d_v=1.0)
    raise ValueError(f"seed direction must be 'u', 'v' or None, got {which!r}")


def chain(a: Jet2, val: float, d1: float, d2: float) -> Jet2:
    """Second-order chain rule: compose a with phi given phi(a), phi', phi''."""
    return Jet2(
        val,
        d1 * a.d_u,
        d1 * a.d_v,
        d2 * a.d_u * a.d_u + d1 * a.d_uu,
        d2 * a.d_u * a.d_v + d1 * a.d_uv,
        d2 * a.d_v * a.d_v + d1 * a.d_vv,
    )


# -- elementary functions ----------------------------------------------------


def sin(a: Jet2) -> Jet2:
    s, c = math.sin(a.val), math.cos(a.val)
    return chain(a, s, c, -s)


def cos(a: Jet2) -> Jet2:
    s, c = math.sin(a.val), math.cos(a.val)
    return chain(a, c, -s, -c)


def tan(a: Jet2) -> Jet2:
    if abs(math.cos(a.val)) < TAN_POLE_MARGIN:
        raise DomainError(f"tan evaluated too close to a pole (argument {a.val:g})")
    t = math.tan(a.val)
    sec2 = 1.0 + t * t
    return chain(a, t, sec2, 2.0 * t * sec2)


def exp(a: Jet2) -> Jet2:
    e = math.exp(a.val)
    return chain(a, e, e, e)


def ln(a: Jet2) -> Jet2:
    if a.val <= 0.0:
        raise DomainError(f"ln of non-positive value {a.val:g}")
    inv = 1.0 / a.val
    return chain(a, math.log(a.val), inv, -inv * inv)


def sqrt(a: Jet2) -> Jet2:
    if a.val <= 0.0:
        raise DomainError(f"sqrt of non-positive value {a.val:g}")
    root = math.sqrt(a.val)
    d1 = 0.5 / root
    return chain(a, root, d1, -0.25 / (a.val * root))


def neg(a: Jet2) -> Jet2:
    return -a


def _abs_rejected(a: Jet2) -> Jet2:
    raise UnsupportedFunction("abs is not smooth and cannot be differentiated")


def _int_pow(a: Jet2, n: int) -> Jet2:
    if n == 0:
        return Jet2(1.0)
    if n < 0:
        return Jet2(1.0) / _int_pow(a, -n)
    # binary exponentiation with the jet product rule; valid for any base
    result = None
    base = a
    while n:
        if n & 1:
            result = base if result is None else result * base
        n >>= 1
        if n:
            base = base * base
    return result


def pow_jet(a: Jet2, b) -> Jet2:
    """General power a**b.

    A constant integer exponent uses the repeated product rule (valid for
    negative bases); anything else goes through exp(b * ln(a)) and needs a
    positive base.
    """
    bj = _lift(b)
    if bj.is_constant():
        p = bj.val
        if float(p).is_integer() and abs(p) < 2**31:
            return _int_pow(a, int(p))
        if a.val <= 0.0:
            raise DomainError(
                f"power with non-integer exponent needs a positive base, got {a.val:g}"
            )
        v = a.val**p
        return chain(a, v, p * a.val ** (p - 1.0), p * (p - 1.0) * a.val ** (p - 2.0))
    if a.val <= 0.0:
        raise DomainError(
            f"power with a varying exponent needs a positive base, got {a.val:g}"
        )
    return exp(bj * ln(a))


def add(a: Jet2, b: Jet2) -> Jet2:
    return a + b


def sub(a: Jet2, b: Jet2) -> Jet2:
    return a - b


def mul(a: Jet2, b: Jet2) -> Jet2:
    return a * b


def div(a: Jet2, b: Jet2) -> Jet2:
    return a / b


ARITH = {"add": add, "sub": sub, "mul": mul, "div": div, "pow": pow_jet}

FUNCTIONS = {
    "sin": sin,
    "cos": cos,
    "tan": tan,
    "exp": exp,
    "ln": ln,
    "sqrt": sqrt,
    "neg": neg,
    "abs": _abs_rejected,
}
