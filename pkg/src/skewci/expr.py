"""Parser for the small expression language used by manifests.

Grammar (juxtaposition is not a product; write ``x1*x2``)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" ["-"] INT)?
    atom   := INT | NAME | "(" expr ")"

Parsing produces a nested-tuple tree; :func:`evaluate` folds it with Python
operators, so the same tree can be evaluated into scalars, noncommutative
polynomials or commutative polynomials in a family parameter.
"""
from __future__ import annotations

import re

from .coeff import QQ, QQ_q, Field, RationalFunction

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class ExpressionParseError(ValueError):
    def __init__(self, message: str, text: str = "", position: int | None = None):
        self.text = text
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where} in {text!r}" if text else message)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1):
            tokens.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2):
            tokens.append(("name", m.group(2), m.start(2)))
        elif m.group(3):
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ExpressionParseError(f"unexpected character {ch!r}", text, m.start(3))
            tokens.append(("op", ch, m.start(3)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            raise ExpressionParseError(f"expected {value!r}", self.text, tok[2])

    def parse(self):
        if self.peek()[0] == "end":
            raise ExpressionParseError("empty expression", self.text, 0)
        tree = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ExpressionParseError(
                f"unexpected {tok[1]!r} (products need an explicit '*')", self.text, tok[2]
            )
        return tree

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = ("add" if op == "+" else "sub", node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            node = ("mul" if op == "*" else "div", node, self.unary())
        return node

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            inner = self.unary()
            return ("neg", inner) if tok[1] == "-" else inner
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[1] == "-":
                self.take()
                sign = -1
            tok = self.take()
            if tok[0] != "int":
                raise ExpressionParseError("exponent must be an integer", self.text, tok[2])
            return ("pow", base, sign * tok[1])
        return base

    def atom(self):
        tok = self.take()
        if tok[0] == "int":
            return ("int", tok[1])
        if tok[0] == "name":
            return ("name", tok[1], tok[2])
        if tok[1] == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ExpressionParseError(f"unexpected {tok[1]!r}", self.text, tok[2])


def parse_tree(text: str):
    return _Parser(text).parse()


def evaluate(tree, number, name, invert, text=""):
    """Fold a parse tree.

    ``number(int)`` and ``name(str)`` build leaves; ``invert(value)`` returns a
    multiplicative inverse or raises when the value is not an invertible scalar.
    """

    def ev(node):
        kind = node[0]
        if kind == "int":
            return number(node[1])
        if kind == "name":
            try:
                return name(node[1])
            except KeyError:
                raise ExpressionParseError(f"unknown symbol {node[1]!r}", text, node[2]) from None
        if kind == "neg":
            return -ev(node[1])
        if kind == "add":
            return ev(node[1]) + ev(node[2])
        if kind == "sub":
            return ev(node[1]) - ev(node[2])
        if kind == "mul":
            return ev(node[1]) * ev(node[2])
        if kind == "div":
            return ev(node[1]) * invert(ev(node[2]))
        if kind == "pow":
            base, k = ev(node[1]), node[2]
            if k < 0:
                base, k = invert(base), -k
            result = number(1)
            for _ in range(k):
                result = result * base
            return result
        raise AssertionError(kind)

    return ev(tree)


def _scalar_inverse(value, text):
    if not value:
        raise ExpressionParseError("division by zero", text)
    return 1 / value


def parse_expression(text: str, field: Field = QQ, generators: dict | None = None, q_value=None):
    """Evaluate ``text`` into a field element or, with ``generators``, an NCPoly.

    ``generators`` maps names to generator indices.  With ``q_value`` the
    symbol ``q`` is bound to that rational number.
    """
    from .freealg import NCPoly

    tree = parse_tree(text)

    def number(k):
        value = field.coerce(k)
        return NCPoly.constant(value) if generators is not None else value

    def name(s):
        if s == "q" and (field is QQ_q or q_value is not None):
            value = field.coerce(q_value) if q_value is not None else RationalFunction.q()
            return NCPoly.constant(value) if generators is not None else value
        if generators is not None and s in generators:
            return NCPoly.generator(generators[s], field.one)
        raise KeyError(s)

    def invert(value):
        if generators is not None:
            if not isinstance(value, NCPoly) or not value.is_constant():
                raise ExpressionParseError("can only divide by a scalar", text)
            return NCPoly.constant(_scalar_inverse(value.constant_term(), text))
        return _scalar_inverse(value, text)

    try:
        return evaluate(tree, number, name, invert, text)
    except ZeroDivisionError as exc:
        raise ExpressionParseError(str(exc), text) from exc
