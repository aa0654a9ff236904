"""A tiny expression language over quaternionic variables q1, q2, ...

Grammar (whitespace insignificant):

    expr   := term (('+' | '-') term)*
    term   := factor (factor | '*' factor)*
    factor := atom ('^' integer)?
    atom   := 'q' digits | number | 'i' | 'j' | 'k'
            | 'inv' '(' expr ')' | 'conj' '(' expr ')'
            | '(' expr ')' | '-' atom

Multiplication is noncommutative and evaluates strictly left to right.
Juxtaposition multiplies ("q1 q2" == "q1*q2").  A '-' at a term boundary is
subtraction — it never starts a juxtaposed factor — so "q1 -q1" is q1 minus
q1, while "q1*-q1" and "q1 - -q1" use unary minus.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ArityError, EvalError, ExprSyntaxError
from .quat import I, J, K, Quaternion
from .stem import QFunctionN

__all__ = [
    "Node",
    "Var",
    "Const",
    "Neg",
    "Add",
    "Sub",
    "Mul",
    "Pow",
    "Inv",
    "Conj",
    "parse",
    "eval_ast",
    "to_string",
    "max_var",
    "compile_expr",
]


@dataclass(frozen=True)
class Node:
    span: tuple[int, int] = field(compare=False, kw_only=True, default=(0, 0))


@dataclass(frozen=True)
class Var(Node):
    index: int  # 1-based


@dataclass(frozen=True)
class Const(Node):
    value: Quaternion


@dataclass(frozen=True)
class Neg(Node):
    arg: Node


@dataclass(frozen=True)
class Add(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Sub(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Mul(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: int


@dataclass(frozen=True)
class Inv(Node):
    arg: Node


@dataclass(frozen=True)
class Conj(Node):
    arg: Node


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<var>q\d+)
  | (?P<func>inv|conj)
  | (?P<num>\d+(?:\.\d*)?|\.\d+)
  | (?P<unit>[ijk])
  | (?P<op>[-+*^()])
    """,
    re.VERBOSE,
)

_UNITS = {"i": I, "j": J, "k": K}


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append(_Token(m.lastgroup, m.group(), m.start()))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.pos = 0

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> _Token:
        tok = self.peek()
        if tok is None:
            raise ExprSyntaxError("unexpected end of expression", len(self.source))
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.next()
        if tok.text != text:
            raise ExprSyntaxError(f"expected {text!r}, got {tok.text!r}", tok.pos)
        return tok

    def parse(self) -> Node:
        node = self.expr()
        tok = self.peek()
        if tok is not None:
            raise ExprSyntaxError(f"trailing input {tok.text!r}", tok.pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while True:
            tok = self.peek()
            if tok is None or tok.text not in "+-":
                return node
            self.next()
            rhs = self.term()
            span = (node.span[0], rhs.span[1])
            cls = Add if tok.text == "+" else Sub
            node = cls(node, rhs, span=span)

    def term(self) -> Node:
        # A bare '-' never starts a juxtaposed factor, so at a term boundary
        # it always means subtraction; unary minus needs '*' or parentheses.
        node = self.factor()
        while True:
            tok = self.peek()
            if tok is None:
                return node
            if tok.text == "*":
                self.next()
                rhs = self.factor()
            elif tok.kind in ("var", "func", "num", "unit") or tok.text == "(":
                rhs = self.factor()
            else:
                return node
            node = Mul(node, rhs, span=(node.span[0], rhs.span[1]))

    def factor(self) -> Node:
        node = self.atom()
        tok = self.peek()
        if tok is not None and tok.text == "^":
            self.next()
            sign = 1
            etok = self.next()
            if etok.text == "-":
                sign = -1
                etok = self.next()
            if etok.kind != "num" or not etok.text.isdigit():
                raise ExprSyntaxError("exponent must be an integer", etok.pos)
            node = Pow(
                node, sign * int(etok.text), span=(node.span[0], etok.pos + len(etok.text))
            )
        return node

    def atom(self) -> Node:
        tok = self.next()
        end = tok.pos + len(tok.text)
        if tok.kind == "var":
            index = int(tok.text[1:])
            if index < 1:
                raise ExprSyntaxError("variable indices start at q1", tok.pos)
            return Var(index, span=(tok.pos, end))
        if tok.kind == "num":
            return Const(Quaternion(float(tok.text)), span=(tok.pos, end))
        if tok.kind == "unit":
            return Const(_UNITS[tok.text], span=(tok.pos, end))
        if tok.kind == "func":
            self.expect("(")
            inner = self.expr()
            close = self.expect(")")
            cls = Inv if tok.text == "inv" else Conj
            return cls(inner, span=(tok.pos, close.pos + 1))
        if tok.text == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if tok.text == "-":
            inner = self.atom()
            return Neg(inner, span=(tok.pos, inner.span[1]))
        raise ExprSyntaxError(f"unexpected token {tok.text!r}", tok.pos)


def parse(source: str) -> Node:
    """Parse the expression source into an AST.

    Raises:
        ExprSyntaxError: with the byte offset of the offending token.
    """
    if not source.strip():
        raise ExprSyntaxError("empty expression", 0)
    return _Parser(source).parse()


def max_var(node: Node) -> int:
    """Largest variable index appearing in the tree (0 if none)."""
    if isinstance(node, Var):
        return node.index
    if isinstance(node, Const):
        return 0
    if isinstance(node, (Neg, Inv, Conj)):
        return max_var(node.arg)
    if isinstance(node, Pow):
        return max_var(node.base)
    return max(max_var(node.left), max_var(node.right))


def eval_ast(node: Node, point: tuple[Quaternion, ...]) -> Quaternion:
    """Evaluate with strict left-to-right ordered products.

    Raises:
        ArityError: if a variable index exceeds the point dimension.
        EvalError: on inversion of a (numerically) zero value.
    """
    if isinstance(node, Var):
        if node.index > len(point):
            raise ArityError(
                f"expression uses q{node.index} but only {len(point)} variables were supplied"
            )
        return point[node.index - 1]
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Neg):
        return -eval_ast(node.arg, point)
    if isinstance(node, Add):
        return eval_ast(node.left, point) + eval_ast(node.right, point)
    if isinstance(node, Sub):
        return eval_ast(node.left, point) - eval_ast(node.right, point)
    if isinstance(node, Mul):
        return eval_ast(node.left, point) * eval_ast(node.right, point)
    if isinstance(node, Pow):
        base = eval_ast(node.base, point)
        if node.exponent < 0:
            try:
                base = base.inverse()
            except ZeroDivisionError:
                raise EvalError("negative power of zero", node.span) from None
        acc = Quaternion(1.0)
        for _ in range(abs(node.exponent)):
            acc = acc * base
        return acc
    if isinstance(node, Inv):
        val = eval_ast(node.arg, point)
        try:
            return val.inverse()
        except ZeroDivisionError:
            raise EvalError("inverse of zero", node.span) from None
    if isinstance(node, Conj):
        return eval_ast(node.arg, point).conj()
    raise TypeError(f"unknown node {node!r}")


def _fmt_real(value: float) -> str:
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def to_string(node: Node, parent: str = "") -> str:
    """Render the AST back to parseable source (round trips through parse)."""
    if isinstance(node, Var):
        return f"q{node.index}"
    if isinstance(node, Const):
        v = node.value
        if v == I:
            return "i"
        if v == J:
            return "j"
        if v == K:
            return "k"
        return _fmt_real(v.w)
    if isinstance(node, Neg):
        inner = to_string(node.arg, parent="neg")
        rendered = f"-{inner}"
        return f"({rendered})" if parent in ("mul", "pow", "neg") else rendered
    if isinstance(node, (Add, Sub)):
        op = " + " if isinstance(node, Add) else " - "
        rendered = to_string(node.left, "add") + op + to_string(node.right, "addr")
        return f"({rendered})" if parent else rendered
    if isinstance(node, Mul):
        # parse is left-associative, so a Mul in right position re-groups
        rendered = to_string(node.left, "mul") + "*" + to_string(node.right, "mulr")
        return f"({rendered})" if parent in ("pow", "addr", "mulr", "neg") else rendered
    if isinstance(node, Pow):
        rendered = f"{to_string(node.base, 'pow')}^{node.exponent}"
        # one '^' per factor, and unary minus binds tighter than '^'
        return f"({rendered})" if parent in ("pow", "neg") else rendered
    if isinstance(node, Inv):
        return f"inv({to_string(node.arg)})"
    if isinstance(node, Conj):
        return f"conj({to_string(node.arg)})"
    raise TypeError(f"unknown node {node!r}")


def compile_expr(source: str, n: int | None = None) -> QFunctionN:
    """Parse source and wrap it as an evaluable function of n variables.

    If n is omitted it defaults to the largest variable index used (at least 1).
    Points where some inv() argument vanishes are excluded from the domain.
    """
    ast = parse(source)
    used = max_var(ast)
    if n is None:
        n = max(used, 1)
    if used > n:
        raise ArityError(f"expression uses q{used} but n={n}")

    def func(point: tuple[Quaternion, ...]) -> Quaternion:
        return eval_ast(ast, point)

    def domain(point: tuple[Quaternion, ...]) -> bool:
        try:
            eval_ast(ast, point)
        except EvalError:
            return False
        return True

    return QFunctionN(n, func, domain, name=source.strip())
