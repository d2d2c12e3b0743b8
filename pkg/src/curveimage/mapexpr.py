"""Parser and printer for map expressions such as ``(t^2, t^3)`` or
``1/(1 + x1^2 + x2^2)``.

Grammar (whitespace ignored)::

    map     := expr | "(" expr ("," expr)+ ")"
    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := ("-" | "+") unary | power
    power   := primary ("^" ["-"] INT)?
    primary := NUMBER | VAR | "(" expr ")"

``VAR`` is ``t`` or ``x1`` ... ``x9``; ``NUMBER`` is an integer or an exact
decimal.  The syntax tree is made of tuples: ``("num", Fraction)``,
``("var", name)``, ``("neg", a)``, ``(op, a, b)`` for ``op`` in
``add sub mul div`` and ``("pow", a, int)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import sympy as sp

from .errors import DegenerateInput

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<var>t|x[1-9])|(?P<op>[-+*/^(),]))")


class MapSyntaxError(DegenerateInput):
    """Malformed expression; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise MapSyntaxError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def take(self, value: str | None = None) -> tuple[str, str, int]:
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise MapSyntaxError(f"expected {value!r}, found {what}", tok[2])
        self.i += 1
        return tok

    def at(self, *values: str) -> bool:
        tok = self.peek()
        return tok[0] == "op" and tok[1] in values

    def parse_map(self) -> list:
        if self.at("(") and self._top_level_tuple():
            self.take("(")
            items = [self.expr()]
            while self.at(","):
                self.take(",")
                items.append(self.expr())
            self.take(")")
        else:
            items = [self.expr()]
        tok = self.peek()
        if tok[0] != "end":
            raise MapSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return items

    def _top_level_tuple(self) -> bool:
        depth = 0
        for kind, val, _ in self.toks[self.i:]:
            if val == "(":
                depth += 1
            elif val == ")":
                depth -= 1
                if depth == 0:
                    return False
            elif val == "," and depth == 1:
                return True
        return False

    def expr(self):
        node = self.term()
        while self.at("+", "-"):
            op = self.take()[1]
            node = ("add" if op == "+" else "sub", node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.at("*", "/"):
            op = self.take()[1]
            node = ("mul" if op == "*" else "div", node, self.unary())
        return node

    def unary(self):
        if self.at("-"):
            self.take()
            return ("neg", self.unary())
        if self.at("+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.primary()
        if self.at("^"):
            self.take()
            sign = 1
            if self.at("-"):
                self.take()
                sign = -1
            kind, val, pos = self.take()
            if kind != "num" or "." in val:
                raise MapSyntaxError("exponent must be an integer literal", pos)
            return ("pow", base, sign * int(val))
        return base

    def primary(self):
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            return ("num", Fraction(val))
        if kind == "var":
            self.take()
            return ("var", val)
        if val == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        what = "end of input" if kind == "end" else repr(val)
        raise MapSyntaxError(f"unexpected {what}", pos)


def parse_ast(text: str) -> list:
    return _Parser(text).parse_map()


_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4, "num": 5, "var": 5}
_SYM = {"add": " + ", "sub": " - ", "mul": "*", "div": "/"}


def _fmt_num(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    # only terminating decimals come out of the parser
    digits = 0
    while (v * 10 ** digits).denominator != 1:
        digits += 1
    scaled = v.numerator * 10 ** digits // v.denominator
    s = str(scaled).rjust(digits + 1, "0")
    return s[:-digits] + "." + s[-digits:]


def to_text(node) -> str:
    kind = node[0]
    if kind == "num":
        return _fmt_num(node[1])
    if kind == "var":
        return node[1]
    if kind == "neg":
        inner = node[1]
        s = to_text(inner)
        return "-" + (s if _PREC[inner[0]] >= 3 and inner[0] != "neg" else f"({s})")
    if kind == "pow":
        base = to_text(node[1])
        if _PREC[node[1][0]] < 5:
            base = f"({base})"
        return f"{base}^{node[2]}"
    p = _PREC[kind]
    left, right = to_text(node[1]), to_text(node[2])
    if _PREC[node[1][0]] < p:
        left = f"({left})"
    if _PREC[node[2][0]] <= p:
        right = f"({right})"
    return left + _SYM[kind] + right


def map_to_text(items: list) -> str:
    texts = [to_text(n) for n in items]
    return texts[0] if len(texts) == 1 else "(" + ", ".join(texts) + ")"


def to_sympy_expr(node) -> sp.Expr:
    kind = node[0]
    if kind == "num":
        return sp.Rational(node[1].numerator, node[1].denominator)
    if kind == "var":
        return sp.Symbol(node[1])
    if kind == "neg":
        return -to_sympy_expr(node[1])
    if kind == "pow":
        base = to_sympy_expr(node[1])
        if node[2] < 0 and base == 0:
            raise DegenerateInput("division by zero")
        return base ** node[2]
    a, b = to_sympy_expr(node[1]), to_sympy_expr(node[2])
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if sp.cancel(b) == 0:
        raise DegenerateInput("division by zero")
    return a / b


@dataclass
class MapExpr:
    """Parsed map: source text, syntax trees and the variables in use."""

    text: str
    ast: list

    @classmethod
    def parse(cls, text: str) -> "MapExpr":
        return cls(text, parse_ast(text))

    @property
    def exprs(self) -> list[sp.Expr]:
        return [sp.cancel(to_sympy_expr(n)) for n in self.ast]

    @property
    def variables(self) -> list[str]:
        names: set[str] = set()

        def walk(n):
            if n[0] == "var":
                names.add(n[1])
            else:
                for c in n[1:]:
                    if isinstance(c, tuple):
                        walk(c)

        for n in self.ast:
            walk(n)
        return sorted(names)

    @property
    def source_dim(self) -> int:
        """1 for maps in ``t``; the largest index ``k`` of ``xk`` otherwise."""
        vs = self.variables
        if "t" in vs and len(vs) > 1:
            raise MapSyntaxError("cannot mix t with x1..x9", 0)
        if not vs or vs == ["t"]:
            return 1
        return max(int(v[1:]) for v in vs)

    def pretty(self) -> str:
        return map_to_text(self.ast)
