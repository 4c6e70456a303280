"""A tiny expression language for symbols in the frequency variable ``k``.

Grammar (precedence high to low)::

    atom    := NUMBER | "k" | "pi" | FUNC "(" expr ")" | "(" expr ")"
    power   := atom [ "^" ["-"] INTEGER ]
    unary   := "-" unary | power
    term    := unary (("*" | "/") unary)*
    expr    := term (("+" | "-") term)*

Functions: ``sqrt tanh cosh sech abs``. Compiled symbols are evaluated at
``|k|``, so odd expressions such as ``"k"`` become ``|k|``.
"""
import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, UnknownIdentifier
from .symbols import STUB_RADIUS, MultiplierSymbol

FUNCTIONS = ("sqrt", "tanh", "cosh", "sech", "abs")


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    arg: object


@dataclass(frozen=True)
class SymbolExpr:
    ast: object
    source_text: str

    def __str__(self):
        return to_text(self.ast)


_TOKEN = re.compile(r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
                    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))")


def _tokenize(text):
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(pos, "a number, name or operator", text)
        start = m.start(m.lastgroup)
        tokens.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def advance(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect_op(self, op, what):
        kind, value, pos = self.tok
        if kind != "op" or value != op:
            raise ParseError(pos, what, self.text)
        self.advance()

    def parse(self):
        node = self.expr()
        kind, value, pos = self.tok
        if kind != "end":
            raise ParseError(pos, "end of input", self.text)
        return node

    def expr(self):
        node = self.term()
        while self.tok[0] == "op" and self.tok[1] in "+-":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.tok[0] == "op" and self.tok[1] in "*/":
            op = self.advance()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.tok[0] == "op" and self.tok[1] == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok[0] == "op" and self.tok[1] == "^":
            self.advance()
            sign = 1
            if self.tok[0] == "op" and self.tok[1] == "-":
                self.advance()
                sign = -1
            kind, value, pos = self.tok
            if kind != "num" or not value.isdigit():
                raise ParseError(pos, "integer exponent", self.text)
            self.advance()
            return Pow(base, sign * int(value))
        return base

    def atom(self):
        kind, value, pos = self.tok
        if kind == "num":
            self.advance()
            return Num(float(value))
        if kind == "name":
            self.advance()
            if value == "k":
                return Var()
            if value == "pi":
                return Num(math.pi)
            if value in FUNCTIONS:
                self.expect_op("(", "'(' after function name")
                arg = self.expr()
                self.expect_op(")", "')'")
                return Call(value, arg)
            raise UnknownIdentifier(value, pos)
        if kind == "op" and value == "(":
            self.advance()
            node = self.expr()
            self.expect_op(")", "')'")
            return node
        raise ParseError(pos, "expression", self.text)


def parse_symbol(text):
    """Parse ``text`` into a :class:`SymbolExpr`."""
    if not isinstance(text, str) or not text.strip():
        raise ParseError(0, "expression", text if isinstance(text, str) else "")
    return SymbolExpr(_Parser(text).parse(), text)


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}
_UNARY_PREC = 3
_ATOM_PREC = 5


def _prec(node):
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return _UNARY_PREC
    if isinstance(node, Pow):
        return 4
    return _ATOM_PREC


def to_text(node):
    """Render an AST so that ``parse_symbol(to_text(ast)).ast == ast``."""
    if isinstance(node, Num):
        return repr(float(node.value))
    if isinstance(node, Var):
        return "k"
    if isinstance(node, Call):
        return f"{node.func}({to_text(node.arg)})"
    if isinstance(node, Neg):
        inner = to_text(node.operand)
        return "-" + (inner if _prec(node.operand) >= _UNARY_PREC else f"({inner})")
    if isinstance(node, Pow):
        inner = to_text(node.base)
        if _prec(node.base) < _ATOM_PREC or isinstance(node.base, Num) and node.base.value < 0:
            inner = f"({inner})"
        return f"{inner}^{node.exponent}"
    p = _PREC[node.op]
    left = to_text(node.left)
    right = to_text(node.right)
    if _prec(node.left) < p:
        left = f"({left})"
    if _prec(node.right) <= p:
        right = f"({right})"
    return f"{left}{node.op}{right}"


def interpret(node, k):
    """Scalar reference evaluator (plain recursion over ``math``)."""
    if isinstance(node, SymbolExpr):
        node = node.ast
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return k
    if isinstance(node, Neg):
        return -interpret(node.operand, k)
    if isinstance(node, Pow):
        return interpret(node.base, k) ** node.exponent
    if isinstance(node, Call):
        x = interpret(node.arg, k)
        if node.func == "sqrt":
            return math.sqrt(x)
        if node.func == "tanh":
            return math.tanh(x)
        if node.func == "cosh":
            return math.cosh(x)
        if node.func == "sech":
            return 1.0 / math.cosh(x)
        return abs(x)
    a, b = interpret(node.left, k), interpret(node.right, k)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    return a / b


_NUMPY_FUNCS = {
    "sqrt": np.sqrt,
    "tanh": np.tanh,
    "cosh": np.cosh,
    "sech": lambda x: 1.0 / np.cosh(x),
    "abs": np.abs,
}

# sample radius for the limit of 0/0 division nodes
_LIMIT_H = 1e-2


def _removable_limit(num, den):
    """Limit of num(h)/den(h) as h -> 0+, by polynomial extrapolation in h."""
    hs = _LIMIT_H / 2.0 ** np.arange(7)
    vals = num(hs) / den(hs)
    # Neville extrapolation to h = 0
    p = list(vals)
    for m in range(1, len(hs)):
        for i in range(len(hs) - m):
            p[i] = (hs[i] * p[i + 1] - hs[i + m] * p[i]) / (hs[i] - hs[i + m])
    return float(p[0])


def _build(node):
    """Return a vectorized evaluator for ``node`` (argument: nonnegative array)."""
    if isinstance(node, Num):
        v = node.value
        return lambda k: np.full(np.shape(k), v)
    if isinstance(node, Var):
        return lambda k: k
    if isinstance(node, Neg):
        f = _build(node.operand)
        return lambda k: -f(k)
    if isinstance(node, Pow):
        f = _build(node.base)
        e = node.exponent
        return lambda k: f(k) ** float(e)
    if isinstance(node, Call):
        f = _build(node.arg)
        g = _NUMPY_FUNCS[node.func]
        return lambda k: g(f(k))
    a, b = _build(node.left), _build(node.right)
    if node.op == "+":
        return lambda k: a(k) + b(k)
    if node.op == "-":
        return lambda k: a(k) - b(k)
    if node.op == "*":
        return lambda k: a(k) * b(k)
    zero = np.zeros(1)
    with np.errstate(all="ignore"):
        num0, den0 = float(a(zero)[0]), float(b(zero)[0])
    if num0 == 0.0 and den0 == 0.0:
        cache = []

        def guarded(k):
            k = np.asarray(k, dtype=float)
            out = a(k) / b(k)
            small = np.abs(k) < STUB_RADIUS
            if np.any(small):
                if not cache:
                    cache.append(_removable_limit(a, b))
                out = np.where(small, cache[0], out)
            return out

        return guarded
    return lambda k: a(k) / b(k)


def compile_symbol(expr):
    """Turn a parsed expression (or source text) into a :class:`MultiplierSymbol`."""
    if isinstance(expr, str):
        expr = parse_symbol(expr)
    f = _build(expr.ast)

    def func(xi):
        return f(np.asarray(xi, dtype=float))

    return MultiplierSymbol(func, label=expr.source_text)
