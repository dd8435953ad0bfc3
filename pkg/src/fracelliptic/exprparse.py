"""Small arithmetic expression language for user-supplied coefficients.

Grammar: real literals, the variable x, binary + - * / ^ (with ^ binding
tightest and right-associative, then unary minus, then * /, then + -),
parentheses, and the functions exp, log, sin, cos, sqrt, pow(a, b), gamma.
No implicit multiplication.

Expressions are immutable trees; evaluation is vectorized over numpy arrays
and raises EvalDomainError instead of ever returning a non-finite value.
differentiate() produces the symbolic first derivative within the same
grammar (gamma is evaluation-only).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ExprSyntaxError",
    "EvalDomainError",
    "UnsupportedConstructError",
    "Expr",
    "Num",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "parse",
    "evaluate",
    "differentiate",
    "to_source",
]


class ExprSyntaxError(ValueError):
    """Parse failure; carries the byte offset and the expected-token set."""

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        self.offset = offset
        self.expected = tuple(expected)
        hint = f" (expected one of: {', '.join(expected)})" if expected else ""
        super().__init__(f"{message} at offset {offset}{hint}")


class EvalDomainError(ValueError):
    """Evaluation left the expression's real domain (log of <= 0, etc.)."""


class UnsupportedConstructError(ValueError):
    """differentiate() hit a construct outside its supported set."""


class Expr:
    """Base class for expression nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str  # one of + - * / ^
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Call(Expr):
    fn: str
    args: tuple[Expr, ...]


_FUNCTIONS = {"exp": 1, "log": 1, "sin": 1, "cos": 1, "sqrt": 1, "pow": 2, "gamma": 1}

_TOKEN_RE = re.compile(
    r"(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),]))"
)

# left binding powers
_LBP = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 30}
_UNARY_BP = 25  # binds tighter than * /, looser than ^


@dataclass(frozen=True)
class _Token:
    kind: str  # num | ident | op | end
    text: str
    offset: int


def _tokenize(src: str) -> list[_Token]:
    tokens = []
    pos = 0
    n = len(src)
    while pos < n:
        if src[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", pos)
        kind = {"num": "num", "ident": "ident", "op": "op"}[m.lastgroup]
        tokens.append(_Token(kind, m.group(m.lastgroup), pos))
        pos = m.end()
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    """Precedence-climbing (Pratt) parser over the token list."""

    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.pos = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str) -> None:
        tok = self.current
        if tok.kind != "op" or tok.text != op:
            raise ExprSyntaxError(f"got {tok.text or 'end of input'!r}", tok.offset, (op,))
        self.advance()

    def parse(self) -> Expr:
        expr = self.expression(0)
        tok = self.current
        if tok.kind != "end":
            raise ExprSyntaxError(f"trailing input {tok.text!r}", tok.offset,
                                  ("+", "-", "*", "/", "^", "end of input"))
        return expr

    def expression(self, rbp: int) -> Expr:
        left = self.prefix()
        while True:
            tok = self.current
            if tok.kind != "op" or tok.text not in _LBP:
                break
            lbp = _LBP[tok.text]
            if lbp <= rbp:
                break
            self.advance()
            # ^ is right-associative: recurse with lbp - 1
            right = self.expression(lbp - 1 if tok.text == "^" else lbp)
            left = BinOp(tok.text, left, right)
        return left

    def prefix(self) -> Expr:
        tok = self.advance()
        if tok.kind == "num":
            return Num(float(tok.text))
        if tok.kind == "ident":
            if tok.text == "x":
                return Var()
            if tok.text in _FUNCTIONS:
                return self.call(tok)
            raise ExprSyntaxError(f"unknown identifier {tok.text!r}", tok.offset,
                                  ("x",) + tuple(sorted(_FUNCTIONS)))
        if tok.kind == "op":
            if tok.text == "-":
                return Neg(self.expression(_UNARY_BP))
            if tok.text == "+":
                return self.expression(_UNARY_BP)
            if tok.text == "(":
                inner = self.expression(0)
                self.expect_op(")")
                return inner
        raise ExprSyntaxError(f"got {tok.text or 'end of input'!r}", tok.offset,
                              ("number", "x", "function", "(", "-"))

    def call(self, name: _Token) -> Expr:
        nargs = _FUNCTIONS[name.text]
        self.expect_op("(")
        args = [self.expression(0)]
        while len(args) < nargs:
            self.expect_op(",")
            args.append(self.expression(0))
        self.expect_op(")")
        return Call(name.text, tuple(args))


def parse(src: str) -> Expr:
    """Parse an expression string into an immutable tree."""
    return _Parser(src).parse()


def _check_finite(value, what: str):
    if not np.all(np.isfinite(value)):
        raise EvalDomainError(f"{what} produced a non-finite value")
    return value


def _power(base, expo):
    base_a, expo_a = np.broadcast_arrays(np.asarray(base, dtype=float),
                                         np.asarray(expo, dtype=float))
    if np.any((base_a < 0.0) & (expo_a != np.floor(expo_a))):
        raise EvalDomainError("negative base raised to a non-integer power")
    if np.any((base_a == 0.0) & (expo_a < 0.0)):
        raise EvalDomainError("zero raised to a negative power")
    with np.errstate(over="ignore"):
        return _check_finite(np.power(base_a, expo_a), "power")


def evaluate(expr: Expr, x) -> float | np.ndarray:
    """Evaluate at a scalar or array x in IEEE double precision."""
    result = _eval(expr, np.asarray(x, dtype=float))
    if np.ndim(x):
        return np.broadcast_to(np.asarray(result, dtype=float), np.shape(x)).copy()
    return float(result)


def _eval(expr: Expr, x: np.ndarray):
    if isinstance(expr, Num):
        return expr.value
    if isinstance(expr, Var):
        return x
    if isinstance(expr, Neg):
        return -_eval(expr.arg, x)
    if isinstance(expr, BinOp):
        a = _eval(expr.left, x)
        b = _eval(expr.right, x)
        if expr.op == "+":
            return _check_finite(a + b, "addition")
        if expr.op == "-":
            return _check_finite(a - b, "subtraction")
        if expr.op == "*":
            return _check_finite(a * b, "multiplication")
        if expr.op == "/":
            if np.any(np.asarray(b) == 0.0):
                raise EvalDomainError("division by zero")
            return _check_finite(a / b, "division")
        return _power(a, b)  # ^
    if isinstance(expr, Call):
        args = [_eval(arg, x) for arg in expr.args]
        fn = expr.fn
        if fn == "exp":
            with np.errstate(over="ignore"):
                return _check_finite(np.exp(args[0]), "exp")
        if fn == "log":
            if np.any(np.asarray(args[0]) <= 0.0):
                raise EvalDomainError("log of a non-positive value")
            return np.log(args[0])
        if fn == "sin":
            return np.sin(args[0])
        if fn == "cos":
            return np.cos(args[0])
        if fn == "sqrt":
            if np.any(np.asarray(args[0]) < 0.0):
                raise EvalDomainError("sqrt of a negative value")
            return np.sqrt(args[0])
        if fn == "pow":
            return _power(args[0], args[1])
        if fn == "gamma":
            arg = np.asarray(args[0], dtype=float)
            if np.any((arg <= 0.0) & (arg == np.floor(arg))):
                raise EvalDomainError("gamma at a non-positive integer")
            try:
                out = (math.gamma(float(arg)) if arg.ndim == 0
                       else np.vectorize(math.gamma)(arg))
            except ValueError as exc:
                raise EvalDomainError(str(exc)) from exc
            return _check_finite(out, "gamma")
    raise TypeError(f"not an expression node: {expr!r}")


def differentiate(expr: Expr) -> Expr:
    """Symbolic first derivative, closed over the same grammar."""
    if isinstance(expr, Num):
        return Num(0.0)
    if isinstance(expr, Var):
        return Num(1.0)
    if isinstance(expr, Neg):
        return Neg(differentiate(expr.arg))
    if isinstance(expr, BinOp):
        u, v = expr.left, expr.right
        if expr.op in "+-":
            return BinOp(expr.op, differentiate(u), differentiate(v))
        if expr.op == "*":
            return BinOp("+", BinOp("*", differentiate(u), v),
                         BinOp("*", u, differentiate(v)))
        if expr.op == "/":
            num = BinOp("-", BinOp("*", differentiate(u), v),
                        BinOp("*", u, differentiate(v)))
            return BinOp("/", num, BinOp("^", v, Num(2.0)))
        return _d_power(u, v)  # ^
    if isinstance(expr, Call):
        if expr.fn == "pow":
            return _d_power(expr.args[0], expr.args[1])
        if expr.fn == "gamma":
            raise UnsupportedConstructError("gamma is evaluation-only")
        (u,) = expr.args
        du = differentiate(u)
        if expr.fn == "exp":
            outer = Call("exp", (u,))
        elif expr.fn == "log":
            return BinOp("/", du, u)
        elif expr.fn == "sin":
            outer = Call("cos", (u,))
        elif expr.fn == "cos":
            outer = Neg(Call("sin", (u,)))
        elif expr.fn == "sqrt":
            return BinOp("/", du, BinOp("*", Num(2.0), Call("sqrt", (u,))))
        else:  # pragma: no cover
            raise UnsupportedConstructError(f"cannot differentiate {expr.fn}")
        return BinOp("*", outer, du)
    raise TypeError(f"not an expression node: {expr!r}")


def _d_power(u: Expr, v: Expr) -> Expr:
    if isinstance(v, Num):
        # d(u^c) = c * u^(c-1) * u'
        return BinOp("*", BinOp("*", v, BinOp("^", u, Num(v.value - 1.0))),
                     differentiate(u))
    # general case via u^v = exp(v log u)
    inner = BinOp("+", BinOp("*", differentiate(v), Call("log", (u,))),
                  BinOp("/", BinOp("*", v, differentiate(u)), u))
    return BinOp("*", BinOp("^", u, v), inner)


def to_source(expr: Expr) -> str:
    """Canonical fully-parenthesized rendering; parse(to_source(e)) == e."""
    if isinstance(expr, Num):
        return repr(expr.value)
    if isinstance(expr, Var):
        return "x"
    if isinstance(expr, Neg):
        return f"(-{to_source(expr.arg)})"
    if isinstance(expr, BinOp):
        return f"({to_source(expr.left)}{expr.op}{to_source(expr.right)})"
    if isinstance(expr, Call):
        return f"{expr.fn}({','.join(to_source(a) for a in expr.args)})"
    raise TypeError(f"not an expression node: {expr!r}")
