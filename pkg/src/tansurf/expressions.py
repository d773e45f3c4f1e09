"""Tiny expression language for curve components.

Supports rational-coefficient polynomials in ``t`` plus ``sin``/``cos``/
``exp``, with ``+ - * /``, powers (``^`` or ``**``) and parentheses.
Decimal literals are read exactly, so ``0.3`` means 3/10.  Division is
only allowed by constant subexpressions, which keeps every expression
either a polynomial over the rationals or an analytic composite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .jets import Jet, RationalPoly

_FUNCTIONS = ("sin", "cos", "exp")


class ExpressionError(ValueError):
    """Malformed component expression; carries the offending column."""

    def __init__(self, message, column=None):
        self.column = column
        if column is not None:
            message = f"{message} (column {column})"
        super().__init__(message)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text):
    out = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < n and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                if text[j] == ".":
                    seen_dot = True
                j += 1
            out.append(_Token("num", text[i:j], i))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and text[j].isalnum():
                j += 1
            out.append(_Token("name", text[i:j], i))
            i = j
            continue
        if text.startswith("**", i):
            out.append(_Token("op", "^", i))
            i += 2
            continue
        if ch in "+-*/^()":
            out.append(_Token("op", ch, i))
            i += 1
            continue
        raise ExpressionError(f"unexpected character {ch!r}", i)
    out.append(_Token("end", "", n))
    return out


class _Num:
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value  # Fraction

    def jet(self, t, order):
        return Jet.constant(float(self.value), order, float(t))

    def poly(self):
        return RationalPoly.const(self.value, ("t",))


class _Var:
    __slots__ = ()

    def jet(self, t, order):
        return Jet.variable(float(t), order)

    def poly(self):
        return RationalPoly.var("t", ("t",))


class _Neg:
    __slots__ = ("a",)

    def __init__(self, a):
        self.a = a

    def jet(self, t, order):
        return -self.a.jet(t, order)

    def poly(self):
        p = self.a.poly()
        return None if p is None else -p


class _Bin:
    __slots__ = ("op", "a", "b")

    def __init__(self, op, a, b):
        self.op = op
        self.a = a
        self.b = b

    def jet(self, t, order):
        a = self.a.jet(t, order)
        b = self.b.jet(t, order)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        return a / b

    def poly(self):
        pa = self.a.poly()
        pb = self.b.poly()
        if pa is None or pb is None:
            return None
        if self.op == "+":
            return pa + pb
        if self.op == "-":
            return pa - pb
        if self.op == "*":
            return pa * pb
        if pb.degree() == 0:
            return pa / pb.coefficient(0)
        return None  # division by a non-constant: not polynomial


class _Pow:
    __slots__ = ("a", "n")

    def __init__(self, a, n):
        self.a = a
        self.n = n

    def jet(self, t, order):
        return self.a.jet(t, order) ** self.n

    def poly(self):
        p = self.a.poly()
        return None if p is None else p ** self.n


class _Call:
    __slots__ = ("fn", "a")

    def __init__(self, fn, a):
        self.fn = fn
        self.a = a

    def jet(self, t, order):
        inner = self.a.jet(t, order)
        if self.fn == "sin":
            return inner.sin()
        if self.fn == "cos":
            return inner.cos()
        return inner.exp()

    def poly(self):
        return None


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, text):
        tok = self.take()
        if tok.kind != "op" or tok.text != text:
            raise ExpressionError(f"expected {text!r}, found {tok.text!r}", tok.pos)

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ExpressionError(f"unexpected trailing input {tok.text!r}", tok.pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.take().text
            node = _Bin(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.take().text
            node = _Bin(op, node, self.factor())
        return node

    def factor(self):
        tok = self.peek()
        if tok.kind == "op" and tok.text in "+-":
            self.take()
            inner = self.factor()
            return _Neg(inner) if tok.text == "-" else inner
        node = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.take()
            exp = self.take()
            if exp.kind == "op" and exp.text == "-":
                raise ExpressionError("negative powers are not supported", exp.pos)
            if exp.kind != "num" or "." in exp.text:
                raise ExpressionError("powers must be integer literals", exp.pos)
            node = _Pow(node, int(exp.text))
        return node

    def atom(self):
        tok = self.take()
        if tok.kind == "num":
            return _Num(Fraction(tok.text))
        if tok.kind == "name":
            if tok.text == "t":
                return _Var()
            if tok.text in _FUNCTIONS:
                self.expect_op("(")
                inner = self.expr()
                self.expect_op(")")
                return _Call(tok.text, inner)
            raise ExpressionError(f"unknown name {tok.text!r}", tok.pos)
        if tok.kind == "op" and tok.text == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ExpressionError(f"unexpected token {tok.text!r}", tok.pos)


class Expr:
    """Parsed component expression, evaluable as a float jet or exact poly."""

    __slots__ = ("text", "_node", "_poly")

    def __init__(self, text):
        self.text = text
        self._node = _Parser(_tokenize(text)).parse()
        self._poly = self._node.poly()

    @property
    def polynomial(self):
        """Exact RationalPoly in ("t",) when the expression is polynomial."""
        return self._poly

    def jet(self, t, order):
        if self._poly is not None:
            return self._poly.jet(t, order)
        return self._node.jet(t, order)

    def __call__(self, t):
        return self.jet(t, 0).value

    def __repr__(self):
        return f"Expr({self.text!r})"


def parse_expression(text):
    if not isinstance(text, str):
        raise ExpressionError(f"component must be a string, got {type(text).__name__}")
    return Expr(text)
