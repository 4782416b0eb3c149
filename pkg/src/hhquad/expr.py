"""Univariate expression trees: parsing, printing and evaluation.

Grammar (whitespace is ignored)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := atom ('^' integer)?
    atom   := number | 'x' | func '(' expr ')' | '(' expr ')' | '-' atom
    func   := exp | log | sin | cos | sqrt

Note that unary minus is an *atom*, so ``-x^2`` parses as ``(-x)^2``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import DomainError, ExprSyntaxError, NonIntegerExponentError, UnknownIdentifierError
from .interval import Interval, icos, iexp, ilog, ipow, isin, isqrt

FUNCTIONS = ("exp", "log", "sin", "cos", "sqrt")
UNARY_OPS = ("neg",) + FUNCTIONS
BINARY_OPS = ("add", "sub", "mul", "div")


@dataclass(frozen=True)
class Const:
    value: float

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Var:
    """The single free variable ``x``."""

    def __str__(self) -> str:
        return "x"


@dataclass(frozen=True)
class Unary:
    op: str
    arg: "Expr"

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int

    def __str__(self) -> str:
        return to_text(self)


Expr = Union[Const, Var, Unary, Binary, Pow]

X = Var()


# ----------------------------------------------------------------------
# Parsing

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # "num", "ident", "op", "end"
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, m.group(), pos))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def _error(self, message: str, tok: _Tok | None = None, cls=ExprSyntaxError):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        return cls(f"{message}, found {found}", tok.pos, self.text)

    def _accept(self, *ops: str) -> _Tok | None:
        tok = self.tok
        if tok.kind == "op" and tok.text in ops:
            self.i += 1
            return tok
        return None

    def _expect(self, op: str) -> None:
        if self._accept(op) is None:
            raise self._error(f"expected {op!r}")

    def parse(self) -> Expr:
        node = self.expr()
        if self.tok.kind != "end":
            raise self._error("unexpected token")
        return node

    def expr(self) -> Expr:
        node = self.term()
        while (tok := self._accept("+", "-")) is not None:
            node = Binary("add" if tok.text == "+" else "sub", node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while (tok := self._accept("*", "/")) is not None:
            node = Binary("mul" if tok.text == "*" else "div", node, self.factor())
        return node

    def factor(self) -> Expr:
        node = self.atom()
        if self._accept("^") is not None:
            node = Pow(node, self.integer())
        return node

    def integer(self) -> int:
        sign = -1 if self._accept("-") is not None else 1
        tok = self.tok
        if tok.kind != "num":
            raise self._error("expected an integer exponent")
        if not tok.text.isdigit():
            raise NonIntegerExponentError(
                f"non-integer exponent {tok.text!r}", tok.pos, self.text
            )
        self.i += 1
        return sign * int(tok.text)

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return Const(float(tok.text))
        if tok.kind == "ident":
            self.i += 1
            if tok.text == "x":
                return X
            if tok.text in FUNCTIONS:
                self._expect("(")
                arg = self.expr()
                self._expect(")")
                return Unary(tok.text, arg)
            raise UnknownIdentifierError(f"unknown identifier {tok.text!r}", tok.pos, self.text)
        if self._accept("(") is not None:
            node = self.expr()
            self._expect(")")
            return node
        if self._accept("-") is not None:
            return Unary("neg", self.atom())
        raise self._error("expected a number, 'x', a function or '('")


def parse(text: str) -> Expr:
    """Parse ``text`` into an expression tree.

    >>> parse("2*x + exp(x)")
    Binary(op='add', left=Binary(op='mul', left=Const(value=2.0), right=Var()), right=Unary(op='exp', arg=Var()))
    """
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", 0, text or "")
    return _Parser(text).parse()


# ----------------------------------------------------------------------
# Printing

_EXPR, _TERM, _FACTOR, _ATOM = range(4)


def _const_text(v: float) -> str:
    if v.is_integer() and abs(v) < 1e15:
        s = str(int(v))
    else:
        s = repr(v)
    if v < 0 or s.startswith("-"):
        return f"({s})"
    return s


def _text(node: Expr, ctx: int) -> str:
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Const):
        return _const_text(node.value)
    if isinstance(node, Unary):
        if node.op == "neg":
            return "-" + _text(node.arg, _ATOM)
        return f"{node.op}({_text(node.arg, _EXPR)})"
    if isinstance(node, Pow):
        s = f"{_text(node.base, _ATOM)}^{node.exponent}"
        return s if ctx <= _FACTOR else f"({s})"
    if isinstance(node, Binary):
        if node.op in ("add", "sub"):
            sym, level, rctx = ("+" if node.op == "add" else "-"), _EXPR, _TERM
        else:
            sym, level, rctx = ("*" if node.op == "mul" else "/"), _TERM, _FACTOR
        s = f"{_text(node.left, level)} {sym} {_text(node.right, rctx)}"
        return s if ctx <= level else f"({s})"
    raise TypeError(f"not an expression node: {node!r}")


def to_text(node: Expr) -> str:
    """Render ``node`` as text; ``parse`` rebuilds any tree that it produced."""
    return _text(node, _EXPR)


# ----------------------------------------------------------------------
# Evaluation backends
#
# A backend maps op names to callables over one scalar type.  The jet
# module builds its own backend on top of these.


def _real_fn(fn: Callable[[float], float], name: str) -> Callable[[float], float]:
    def g(v):
        try:
            return fn(v)
        except (ValueError, OverflowError) as exc:
            raise DomainError(f"{name}({v!r}) is undefined") from exc

    return g


def _real_div(a, b):
    if b == 0:
        raise DomainError("division by zero")
    return a / b


def _real_pow(a, n):
    try:
        return a**n
    except ZeroDivisionError as exc:
        raise DomainError(f"zero raised to negative power {n}") from exc
    except OverflowError as exc:
        raise DomainError("power overflow") from exc


def _real_sqrt(v):
    if v < 0:
        raise DomainError(f"sqrt({v!r}) is undefined")
    return math.sqrt(v)


REAL = {
    "const": float,
    "neg": lambda a: -a,
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": _real_div,
    "pow": _real_pow,
    "exp": _real_fn(math.exp, "exp"),
    "log": _real_fn(math.log, "log"),
    "sin": _real_fn(math.sin, "sin"),
    "cos": _real_fn(math.cos, "cos"),
    "sqrt": _real_sqrt,
}


def _arr_check(r, what):
    if not np.all(np.isfinite(r)):
        raise DomainError(f"{what} produced a non-finite value")
    return r


def _arr_log(v):
    if np.any(v <= 0):
        raise DomainError("log of a non-positive value")
    return np.log(v)


def _arr_sqrt(v):
    if np.any(v < 0):
        raise DomainError("sqrt of a negative value")
    return np.sqrt(v)


def _arr_div(a, b):
    if np.any(b == 0):
        raise DomainError("division by zero")
    with np.errstate(over="ignore"):
        return _arr_check(a / b, "division")


def _arr_pow(a, n):
    if n < 0 and np.any(a == 0):
        raise DomainError(f"zero raised to negative power {n}")
    with np.errstate(over="ignore", divide="ignore"):
        return _arr_check(np.power(a, float(n)) if n < 0 else a**n, "power")


def _arr_exp(v):
    with np.errstate(over="ignore"):
        return _arr_check(np.exp(v), "exp")


ARRAY = {
    "const": float,
    "neg": lambda a: -a,
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": _arr_div,
    "pow": _arr_pow,
    "exp": _arr_exp,
    "log": _arr_log,
    "sin": np.sin,
    "cos": np.cos,
    "sqrt": _arr_sqrt,
}


INTERVAL = {
    "const": Interval,
    "neg": lambda a: -a,
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
    "pow": ipow,
    "exp": iexp,
    "log": ilog,
    "sin": isin,
    "cos": icos,
    "sqrt": isqrt,
}


def backend_for(x) -> dict:
    """Pick the scalar backend matching the type of ``x``."""
    if isinstance(x, Interval):
        return INTERVAL
    if isinstance(x, np.ndarray):
        return ARRAY
    return REAL


def evaluate(node: Expr, x, be: dict):
    """Evaluate ``node`` at ``x`` using backend ``be``.

    Domain errors raised by the backend get the failing node attached.
    """
    t = type(node)
    if t is Var:
        return x
    if t is Const:
        return be["const"](node.value)
    try:
        if t is Binary:
            left = evaluate(node.left, x, be)
            right = evaluate(node.right, x, be)
            return be[node.op](left, right)
        if t is Unary:
            return be[node.op](evaluate(node.arg, x, be))
        if t is Pow:
            return be["pow"](evaluate(node.base, x, be), node.exponent)
    except DomainError as err:
        if err.node is None:
            err.node = node
        raise
    raise TypeError(f"not an expression node: {node!r}")


def eval_real(f: Expr, x: float) -> float:
    """Evaluate ``f`` at the real point ``x``."""
    r = evaluate(f, float(x), REAL)
    if not math.isfinite(r):
        raise DomainError(f"non-finite value at x={x!r}", f)
    return r


def eval_array(f: Expr, xs) -> np.ndarray:
    """Vectorised :func:`eval_real` over a 1-d array of points."""
    xs = np.asarray(xs, dtype=float)
    r = evaluate(f, xs, ARRAY)
    return np.broadcast_to(np.asarray(r, dtype=float), xs.shape).copy()


def eval_interval(f: Expr, X: Interval) -> Interval:
    """Enclose the range of ``f`` over ``X``."""
    r = evaluate(f, Interval.coerce(X), INTERVAL)
    return Interval.coerce(r)


def count_nodes(f: Expr) -> int:
    if isinstance(f, Binary):
        return 1 + count_nodes(f.left) + count_nodes(f.right)
    if isinstance(f, Unary):
        return 1 + count_nodes(f.arg)
    if isinstance(f, Pow):
        return 1 + count_nodes(f.base)
    return 1
