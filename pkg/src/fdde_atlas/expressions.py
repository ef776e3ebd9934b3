"""Recursive-descent parser for right-hand-side expressions.

Grammar (EBNF, whitespace insignificant):

    expr   = term , { ("+" | "-") , term } ;
    term   = unary , { ("*" | "/") , unary } ;
    unary  = "-" , unary | power ;
    power  = atom , { "^" , integer } ;
    atom   = number | "x" | "xd" | "(" , expr , ")" ;

`x` is the current state, `xd` the delayed state.  Exponents are positive
integer literals; `+ - * /` are left-associative and `^` binds tighter
than unary minus (so ``-x^2`` is ``-(x^2)``).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Union

from .errors import ExprSyntaxError, UnknownIdentifierError

Node = Union["Num", "Var", "Neg", "BinOp", "Pow"]


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str  # "x" or "xd"


@dataclass(frozen=True)
class Neg:
    operand: Node


@dataclass(frozen=True)
class BinOp:
    op: str  # one of "+ - * /"
    left: Node
    right: Node


@dataclass(frozen=True)
class Pow:
    base: Node
    exponent: int


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)

_ATOM_EXPECTED = ("number", "x", "xd", "(", "-")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            # skip trailing whitespace before declaring failure
            rest = text[pos:]
            if rest.strip() == "":
                break
            bad = pos + len(rest) - len(rest.lstrip())
            raise ExprSyntaxError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self):
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "eof":
            raise ExprSyntaxError(
                f"unexpected token {val!r}", pos, ("operator", "end of input")
            )
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.advance()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self):
        node = self.atom()
        while self.peek()[0] == "op" and self.peek()[1] == "^":
            self.advance()
            kind, val, pos = self.peek()
            if kind != "num" or not val.isdigit() or int(val) < 1:
                raise ExprSyntaxError(
                    "expected positive integer exponent", pos, ("positive integer",)
                )
            self.advance()
            node = Pow(node, int(val))
        return node

    def atom(self):
        kind, val, pos = self.advance()
        if kind == "num":
            return Num(float(val))
        if kind == "name":
            if val in ("x", "xd"):
                return Var(val)
            raise UnknownIdentifierError(val, pos)
        if kind == "op" and val == "(":
            node = self.expr()
            k2, v2, p2 = self.peek()
            if not (k2 == "op" and v2 == ")"):
                raise ExprSyntaxError("expected ')'", p2, (")",))
            self.advance()
            return node
        raise ExprSyntaxError(f"expected operand, got {val!r}", pos, _ATOM_EXPECTED)


def parse(text: str) -> Node:
    """Parse `text` into an AST; raises ExprSyntaxError with a byte offset."""
    return _Parser(text).parse()


def _pow_safe(base: float, exponent: int) -> float:
    try:
        return base ** exponent
    except OverflowError:
        neg = base < 0 and exponent % 2 == 1
        return -math.inf if neg else math.inf


def evaluate(node: Node, x: float, xd: float) -> float:
    """Tree-walking evaluation; total on finite inputs (overflows become inf)."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x if node.name == "x" else xd
    if isinstance(node, Neg):
        return -evaluate(node.operand, x, xd)
    if isinstance(node, Pow):
        return _pow_safe(evaluate(node.base, x, xd), node.exponent)
    left = evaluate(node.left, x, xd)
    right = evaluate(node.right, x, xd)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if right == 0.0:
        return math.nan if left == 0.0 else math.copysign(math.inf, left)
    return left / right


def compile_node(node: Node) -> Callable[[float, float], float]:
    """Compile an AST into nested closures (faster than re-walking per call)."""
    if isinstance(node, Num):
        v = node.value
        return lambda x, xd: v
    if isinstance(node, Var):
        if node.name == "x":
            return lambda x, xd: x
        return lambda x, xd: xd
    if isinstance(node, Neg):
        f = compile_node(node.operand)
        return lambda x, xd: -f(x, xd)
    if isinstance(node, Pow):
        f = compile_node(node.base)
        e = node.exponent
        return lambda x, xd: _pow_safe(f(x, xd), e)
    fl = compile_node(node.left)
    fr = compile_node(node.right)
    if node.op == "+":
        return lambda x, xd: fl(x, xd) + fr(x, xd)
    if node.op == "-":
        return lambda x, xd: fl(x, xd) - fr(x, xd)
    if node.op == "*":
        return lambda x, xd: fl(x, xd) * fr(x, xd)

    def _div(x, xd):
        num = fl(x, xd)
        den = fr(x, xd)
        if den == 0.0:
            return math.nan if num == 0.0 else math.copysign(math.inf, num)
        return num / den

    return _div


# operator precedence used by the printer; atoms rank highest
_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(node: Node) -> int:
    if isinstance(node, Num):
        return _PREC_NEG if node.value < 0 else _PREC_ATOM
    if isinstance(node, Var):
        return _PREC_ATOM
    if isinstance(node, Neg):
        return _PREC_NEG
    if isinstance(node, Pow):
        return _PREC_POW
    return _PREC_ADD if node.op in "+-" else _PREC_MUL


def to_text(node: Node) -> str:
    """Pretty-print so that parse(to_text(n)) == n."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        inner = to_text(node.operand)
        if _prec(node.operand) < _PREC_NEG:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(node, Pow):
        base = to_text(node.base)
        if _prec(node.base) < _PREC_POW:
            base = f"({base})"
        return f"{base}^{node.exponent}"
    me = _prec(node)
    left = to_text(node.left)
    if _prec(node.left) < me:
        left = f"({left})"
    right = to_text(node.right)
    # right operand parenthesized on ties: the grammar is left-associative
    if _prec(node.right) <= me:
        right = f"({right})"
    return f"{left} {node.op} {right}"
