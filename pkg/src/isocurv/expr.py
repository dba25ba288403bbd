"""Formula strings for coordinate functions, parsed into small ASTs.

Grammar (standard infix precedence, loosest first)::

    expr    :=  term (("+" | "-") term)*
    term    :=  factor (("*" | "/") factor)*
    factor  :=  "-" factor | power
    power   :=  atom ("^" factor)?          # right-associative
    atom    :=  NUMBER | NAME | NAME "(" expr ")" | "(" expr ")"

"^" binds tighter than unary minus, so ``-y^2`` is ``-(y^2)``.  Implicit
multiplication is not supported.  NAME is a declared variable, one of the
constants ``pi`` and ``e``, or a function from ``sin cos tan exp ln sqrt``.

Parse failures raise :class:`ParseError` carrying a :class:`ParseDiagnostic`
with the byte offset of the first problem.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Union

from . import jets
from .errors import DomainError, IsocurvError

# diagnostic kinds
UNEXPECTED_TOKEN = "UnexpectedToken"
UNKNOWN_IDENTIFIER = "UnknownIdentifier"
UNBALANCED_PAREN = "UnbalancedParen"
EMPTY_INPUT = "EmptyInput"

FUNCTION_NAMES = ("sin", "cos", "tan", "exp", "ln", "sqrt")
CONSTANTS = {"pi": math.pi, "e": math.e}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # only "neg"
    arg: "ExprAst"


@dataclass(frozen=True)
class Binary:
    op: str  # one of + - * / ^
    left: "ExprAst"
    right: "ExprAst"


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "ExprAst"


@dataclass(frozen=True, eq=False)
class Sampled:
    """Opaque sampled univariate function, used for tabulated coordinate
    factors.  ``fn`` maps a float to (value, first, second derivative).
    Never produced by the parser and not reparseable."""

    name: str
    fn: Callable[[float], tuple[float, float, float]]
    arg: "ExprAst"


ExprAst = Union[Num, Var, Const, Unary, Binary, Call, Sampled]


@dataclass(frozen=True)
class ParseDiagnostic:
    offset: int  # byte offset into the UTF-8 encoding of the input
    message: str
    kind: str


class ParseError(IsocurvError):
    def __init__(self, diagnostic: ParseDiagnostic):
        self.diagnostic = diagnostic
        super().__init__(f"{diagnostic.kind} at offset {diagnostic.offset}: {diagnostic.message}")


# -- tokenizer ----------------------------------------------------------------

_NUMBER_RE = re.compile(r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_OPS = set("+-*/^()")


@dataclass(frozen=True)
class _Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    pos: int  # character offset


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        m = _NUMBER_RE.match(text, i)
        if m:
            tokens.append(_Token("num", m.group(), i))
            i = m.end()
            continue
        m = _NAME_RE.match(text, i)
        if m:
            tokens.append(_Token("name", m.group(), i))
            i = m.end()
            continue
        if ch in _OPS:
            tokens.append(_Token("op", ch, i))
            i += 1
            continue
        raise ParseError(
            ParseDiagnostic(_byte_offset(text, i), f"unexpected character {ch!r}", UNEXPECTED_TOKEN)
        )
    tokens.append(_Token("end", "", n))
    return tokens


def _byte_offset(text: str, char_index: int) -> int:
    return len(text[:char_index].encode("utf-8"))


class _Parser:
    def __init__(self, text: str, allowed_vars: frozenset[str]):
        self.text = text
        self.allowed = allowed_vars
        self.tokens = _tokenize(text)
        self.i = 0

    def _fail(self, kind: str, message: str, pos: int | None = None):
        tok = self.tokens[self.i]
        offset = _byte_offset(self.text, tok.pos if pos is None else pos)
        raise ParseError(ParseDiagnostic(offset, message, kind))

    @property
    def cur(self) -> _Token:
        return self.tokens[self.i]

    def _advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def _at_op(self, *ops: str) -> bool:
        return self.cur.kind == "op" and self.cur.text in ops

    def parse(self) -> ExprAst:
        if self.cur.kind == "end":
            self._fail(EMPTY_INPUT, "empty expression", pos=0)
        node = self.expr()
        if self.cur.kind != "end":
            if self._at_op(")"):
                self._fail(UNBALANCED_PAREN, "unmatched ')'")
            self._fail(UNEXPECTED_TOKEN, f"unexpected {self.cur.text!r} after expression")
        return node

    def expr(self) -> ExprAst:
        node = self.term()
        while self._at_op("+", "-"):
            op = self._advance().text
            node = Binary(op, node, self.term())
        return node

    def term(self) -> ExprAst:
        node = self.factor()
        while self._at_op("*", "/"):
            op = self._advance().text
            node = Binary(op, node, self.factor())
        return node

    def factor(self) -> ExprAst:
        if self._at_op("-"):
            self._advance()
            arg = self.factor()
            if isinstance(arg, Num):  # fold so printed negatives round-trip
                return Num(-arg.value)
            return Unary("neg", arg)
        return self.power()

    def power(self) -> ExprAst:
        base = self.atom()
        if self._at_op("^"):
            self._advance()
            return Binary("^", base, self.factor())
        return base

    def atom(self) -> ExprAst:
        tok = self.cur
        if tok.kind == "num":
            self._advance()
            return Num(float(tok.text))
        if tok.kind == "name":
            self._advance()
            if self._at_op("("):
                if tok.text not in FUNCTION_NAMES:
                    self._fail(UNKNOWN_IDENTIFIER, f"unknown function {tok.text!r}", tok.pos)
                open_pos = self.cur.pos
                self._advance()
                arg = self.expr()
                if not self._at_op(")"):
                    self._fail(UNBALANCED_PAREN, "expected ')'", open_pos)
                self._advance()
                return Call(tok.text, arg)
            if tok.text in self.allowed:
                return Var(tok.text)
            if tok.text in CONSTANTS:
                return Const(tok.text)
            if tok.text in FUNCTION_NAMES:
                self._fail(UNEXPECTED_TOKEN, f"function {tok.text!r} needs an argument list", tok.pos)
            self._fail(UNKNOWN_IDENTIFIER, f"unknown identifier {tok.text!r}", tok.pos)
        if tok.kind == "op" and tok.text == "(":
            open_pos = tok.pos
            self._advance()
            node = self.expr()
            if not self._at_op(")"):
                self._fail(UNBALANCED_PAREN, "expected ')'", open_pos)
            self._advance()
            return node
        if tok.kind == "op" and tok.text == ")":
            self._fail(UNBALANCED_PAREN, "unmatched ')'")
        self._fail(UNEXPECTED_TOKEN, f"expected a value, got {tok.text or 'end of input'!r}")


def parse(text: str, allowed_vars: Iterable[str]) -> ExprAst:
    """Parse ``text`` into an AST; variables must come from ``allowed_vars``.

    Raises :class:`ParseError` (whose ``diagnostic`` locates the problem).
    """
    return _Parser(text, frozenset(allowed_vars)).parse()


# -- evaluation ---------------------------------------------------------------


def eval_jet(node: ExprAst, env: dict[str, jets.Jet2]) -> jets.Jet2:
    """Evaluate to a second-order jet; ``env`` binds every variable name."""
    if isinstance(node, Num):
        return jets.constant(node.value)
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Const):
        return jets.constant(CONSTANTS[node.name])
    if isinstance(node, Unary):
        return -eval_jet(node.arg, env)
    if isinstance(node, Binary):
        a = eval_jet(node.left, env)
        b = eval_jet(node.right, env)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            return a / b
        return jets.pow_jet(a, b)
    if isinstance(node, Call):
        return jets.FUNCTIONS[node.fn](eval_jet(node.arg, env))
    if isinstance(node, Sampled):
        inner = eval_jet(node.arg, env)
        val, d1, d2 = node.fn(inner.val)
        return jets.chain(inner, val, d1, d2)
    raise TypeError(f"not an expression node: {node!r}")


def _scalar_pow(base: float, expo: float) -> float:
    if float(expo).is_integer():
        if base == 0.0 and expo < 0:
            raise DomainError("zero base with negative exponent")
        return base ** int(expo)
    if base <= 0.0:
        raise DomainError(f"power with non-integer exponent needs a positive base, got {base:g}")
    return base**expo


def _scalar_tan(x: float) -> float:
    if abs(math.cos(x)) < jets.TAN_POLE_MARGIN:
        raise DomainError(f"tan evaluated too close to a pole (argument {x:g})")
    return math.tan(x)


def _scalar_ln(x: float) -> float:
    if x <= 0.0:
        raise DomainError(f"ln of non-positive value {x:g}")
    return math.log(x)


def _scalar_sqrt(x: float) -> float:
    # values extend to the boundary x = 0; jet evaluation does not
    if x < 0.0:
        raise DomainError(f"sqrt of negative value {x:g}")
    return math.sqrt(x)


_SCALAR_FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": _scalar_tan,
    "exp": math.exp,
    "ln": _scalar_ln,
    "sqrt": _scalar_sqrt,
}


def eval_scalar(node: ExprAst, env: dict[str, float]) -> float:
    """Plain float evaluation with the same domain checks as the jet path
    (except sqrt, whose value alone extends to zero)."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Unary):
        return -eval_scalar(node.arg, env)
    if isinstance(node, Binary):
        a = eval_scalar(node.left, env)
        b = eval_scalar(node.right, env)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            if b == 0.0:
                raise DomainError("division by zero")
            return a / b
        return _scalar_pow(a, b)
    if isinstance(node, Call):
        return _SCALAR_FUNCTIONS[node.fn](eval_scalar(node.arg, env))
    if isinstance(node, Sampled):
        return node.fn(eval_scalar(node.arg, env))[0]
    raise TypeError(f"not an expression node: {node!r}")


# -- utilities ----------------------------------------------------------------


def variables(node: ExprAst) -> set[str]:
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Unary):
        return variables(node.arg)
    if isinstance(node, Binary):
        return variables(node.left) | variables(node.right)
    if isinstance(node, (Call, Sampled)):
        return variables(node.arg)
    return set()


def substitute(node: ExprAst, mapping: dict[str, ExprAst]) -> ExprAst:
    """Replace variables by expressions (used to rename parameters and to
    compose coordinate functions)."""
    if isinstance(node, Var):
        return mapping.get(node.name, node)
    if isinstance(node, Unary):
        return Unary(node.op, substitute(node.arg, mapping))
    if isinstance(node, Binary):
        return Binary(node.op, substitute(node.left, mapping), substitute(node.right, mapping))
    if isinstance(node, Call):
        return Call(node.fn, substitute(node.arg, mapping))
    if isinstance(node, Sampled):
        return Sampled(node.name, node.fn, substitute(node.arg, mapping))
    return node


_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(node: ExprAst) -> int:
    if isinstance(node, Binary):
        if node.op in "+-":
            return _PREC_ADD
        if node.op in "*/":
            return _PREC_MUL
        return _PREC_POW
    if isinstance(node, Unary):
        return _PREC_NEG
    if isinstance(node, Num) and node.value < 0:
        return _PREC_NEG  # prints with a leading minus
    return _PREC_ATOM


def _num_text(value: float) -> str:
    if float(value).is_integer() and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def to_string(node: ExprAst) -> str:
    """Render an AST compactly so that reparsing gives a structurally
    identical tree.  ``Sampled`` nodes render with their table name and do
    not reparse."""
    return _render(node, 0)


def _render(node: ExprAst, context: int) -> str:
    text = _render_bare(node)
    if _prec(node) < context:
        return f"({text})"
    return text


def _render_bare(node: ExprAst) -> str:
    if isinstance(node, Num):
        return _num_text(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Unary):
        return "-" + _render(node.arg, _PREC_NEG)
    if isinstance(node, Binary):
        p = _prec(node)
        if node.op == "^":
            # right-associative; the exponent slot accepts a unary minus
            return _render(node.left, _PREC_ATOM) + "^" + _render(node.right, _PREC_NEG)
        return _render(node.left, p) + node.op + _render(node.right, p + 1)
    if isinstance(node, Call):
        return f"{node.fn}({_render(node.arg, 0)})"
    if isinstance(node, Sampled):
        return f"{node.name}({_render(node.arg, 0)})"
    raise TypeError(f"not an expression node: {node!r}")
