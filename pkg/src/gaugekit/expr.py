"""Arithmetic expression ASTs over coordinates x1..xd.

The operator set is fixed: + - * / ^ with abs, sqrt, max, min; precedence is
^  >  unary -  >  * /  >  + -, everything left-associative except ^.
Evaluation is batched (an (n, d) array of points in, an (n,) array out) and
total on its domain: division by zero, sqrt of a negative, or a fractional
power of a negative raises an EvaluationError naming the offending subterm.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .core import InputError, as_points


class ParseError(InputError):
    def __init__(self, message: str, source: str, pos: int):
        line = source.count("\n", 0, pos) + 1
        col = pos - (source.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col
        self.pos = pos


class EvaluationError(ValueError):
    def __init__(self, message: str, subterm: str):
        super().__init__(f"{message} in subterm {subterm!r}")
        self.subterm = subterm


@dataclass(frozen=True)
class Node:
    kind: str
    span: Tuple[int, int]
    children: tuple = ()
    value: Optional[float] = None
    index: Optional[int] = None


@dataclass(frozen=True)
class ExpressionAst:
    source: str
    dim: int
    root: Node

    def subterm(self, node: Node) -> str:
        return self.source[node.span[0]:node.span[1]]


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),]))"
)

_FUNCTIONS = {"abs": (1, 1), "sqrt": (1, 1), "max": (2, None), "min": (2, None)}


def _tokenize(source: str):
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if not m or m.end() == pos:
            stripped = source[pos:].lstrip()
            if not stripped:
                break
            bad = pos + (len(source[pos:]) - len(stripped))
            raise ParseError(f"unexpected character {source[bad]!r}", source, bad)
        if m.group("num") is not None:
            tokens.append(("num", m.group("num"), m.start("num")))
        elif m.group("ident") is not None:
            tokens.append(("ident", m.group("ident"), m.start("ident")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("eof", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str, dim: int):
        self.source = source
        self.dim = dim
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, text, pos = self.peek()
        if kind != "op" or text != op:
            raise ParseError(f"expected {op!r}", self.source, pos)
        return self.advance()

    def parse(self) -> Node:
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "eof":
            raise ParseError(f"unexpected token {text!r}", self.source, pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                rhs = self.term()
                node = Node("add" if text == "+" else "sub",
                            (node.span[0], rhs.span[1]), (node, rhs))
            else:
                return node

    def term(self) -> Node:
        node = self.factor()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                rhs = self.factor()
                node = Node("mul" if text == "*" else "div",
                            (node.span[0], rhs.span[1]), (node, rhs))
            else:
                return node

    def factor(self) -> Node:
        kind, text, pos = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            inner = self.factor()
            return Node("neg", (pos, inner.span[1]), (inner,))
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            exp = self.factor()  # right-associative, allows 2^-3
            return Node("pow", (base.span[0], exp.span[1]), (base, exp))
        return base

    def atom(self) -> Node:
        kind, text, pos = self.advance()
        if kind == "num":
            return Node("num", (pos, pos + len(text)), value=float(text))
        if kind == "ident":
            m = re.fullmatch(r"x(\d+)", text)
            if m:
                idx = int(m.group(1))
                if not (1 <= idx <= self.dim):
                    raise ParseError(
                        f"coordinate {text} out of range for dimension {self.dim}",
                        self.source, pos)
                return Node("coord", (pos, pos + len(text)), index=idx - 1)
            if text in _FUNCTIONS:
                lo, hi = _FUNCTIONS[text]
                self.expect_op("(")
                args = [self.expr()]
                while True:
                    k2, t2, p2 = self.peek()
                    if k2 == "op" and t2 == ",":
                        self.advance()
                        args.append(self.expr())
                    else:
                        break
                closing = self.expect_op(")")
                if len(args) < lo or (hi is not None and len(args) > hi):
                    raise ParseError(f"{text} takes {'exactly ' + str(lo) if hi == lo else 'at least ' + str(lo)} argument(s)",
                                     self.source, pos)
                return Node(text, (pos, closing[2] + 1), tuple(args))
            raise ParseError(f"unknown identifier {text!r}", self.source, pos)
        if kind == "op" and text == "(":
            inner = self.expr()
            closing = self.expect_op(")")
            return Node(inner.kind, (pos, closing[2] + 1), inner.children,
                        inner.value, inner.index)
        raise ParseError(f"unexpected token {text!r}" if text else "unexpected end of input",
                         self.source, pos)


def parse_expression(source: str, dim: int) -> ExpressionAst:
    """Parse a formula over x1..x<dim> into an AST; errors carry line/column."""
    if not source or not source.strip():
        raise InputError("empty expression source")
    if dim < 1:
        raise InputError("dim must be >= 1")
    root = _Parser(source, dim).parse()
    return ExpressionAst(source=source, dim=dim, root=root)


def evaluate_ast(ast: ExpressionAst, X) -> np.ndarray:
    """Evaluate on an (n, dim) batch of points, returning an (n,) array."""
    X = as_points(X, ast.dim)

    def ev(node: Node) -> np.ndarray:
        k = node.kind
        if k == "num":
            return np.full(len(X), node.value)
        if k == "coord":
            return X[:, node.index].copy()
        if k == "neg":
            return -ev(node.children[0])
        if k == "add":
            return ev(node.children[0]) + ev(node.children[1])
        if k == "sub":
            return ev(node.children[0]) - ev(node.children[1])
        if k == "mul":
            return ev(node.children[0]) * ev(node.children[1])
        if k == "div":
            num = ev(node.children[0])
            den = ev(node.children[1])
            if np.any(den == 0.0):
                raise EvaluationError("division by zero", ast.subterm(node))
            return num / den
        if k == "pow":
            base = ev(node.children[0])
            expo = ev(node.children[1])
            integral = expo == np.round(expo)
            bad_frac = (base < 0.0) & ~integral
            if np.any(bad_frac):
                raise EvaluationError("fractional power of a negative value", ast.subterm(node))
            bad_zero = (base == 0.0) & (expo < 0.0)
            if np.any(bad_zero):
                raise EvaluationError("zero raised to a negative power", ast.subterm(node))
            return np.power(base, expo)
        if k == "abs":
            return np.abs(ev(node.children[0]))
        if k == "sqrt":
            arg = ev(node.children[0])
            if np.any(arg < 0.0):
                raise EvaluationError("square root of a negative value", ast.subterm(node))
            return np.sqrt(arg)
        if k == "max":
            vals = [ev(c) for c in node.children]
            return np.maximum.reduce(vals)
        if k == "min":
            vals = [ev(c) for c in node.children]
            return np.minimum.reduce(vals)
        raise InputError(f"unknown AST node kind {k!r}")

    return ev(ast.root)
