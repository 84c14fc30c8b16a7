"""Text form of polynomials, e.g. ``(2+3i)*x0^2*x1 - x3 + 1``.

Grammar (whitespace is ignored)::

    expr   := [sign] term (sign term)*
    term   := factor ('*' factor)*
    factor := number ['i'] | 'i' | 'x' digit ['^' integer] | '(' expr ')'

Products are taken in the coordinate algebra, so ``x1*x0`` is normal
ordered on input.  Printing writes each monomial in the table's
generator order, which makes parse(print(p)) reproduce p.
"""

from __future__ import annotations

import re

from .qalgebra import Poly, RewriteTable, multiply

NUMBER = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
INTEGER = re.compile(r"\d+")


class ParseError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"column {column}: {message}")
        self.column = column
        self.reason = message


class _Parser:
    def __init__(self, text: str, rt: RewriteTable):
        self.text = text
        self.pos = 0
        self.rt = rt

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def fail(self, message: str, pos: int | None = None):
        raise ParseError(message, (self.pos if pos is None else pos) + 1)

    def parse(self) -> Poly:
        if not self.text.strip():
            self.fail("empty expression")
        value = self.expr()
        if self.peek():
            self.fail(f"unexpected {self.peek()!r}")
        return value

    def expr(self) -> Poly:
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        total = sign * self.term()
        while self.peek() in ("+", "-"):
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
            total = total + sign * self.term()
        return total

    def term(self) -> Poly:
        value = self.factor()
        while self.peek() == "*":
            self.pos += 1
            value = multiply(value, self.factor(), self.rt)
        return value

    def factor(self) -> Poly:
        ch = self.peek()
        start = self.pos
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            if self.peek() != ")":
                self.fail("expected ')'")
            self.pos += 1
            return inner
        if ch == "x":
            self.pos += 1
            if self.pos >= len(self.text) or self.text[self.pos] not in "0123":
                self.fail("expected generator index 0-3 after 'x'")
            g = int(self.text[self.pos])
            self.pos += 1
            power = 1
            if self.peek() == "^":
                caret = self.pos
                self.pos += 1
                self.skip()
                match = INTEGER.match(self.text, self.pos)
                if not match:
                    self.fail("expected integer exponent after '^'", caret)
                power = int(match.group())
                self.pos = match.end()
            return self.rt.word_poly([g] * power)
        if ch == "i":
            self.pos += 1
            return Poly.const(1j)
        match = NUMBER.match(self.text, self.pos)
        if match:
            self.pos = match.end()
            value = float(match.group())
            if self.pos < len(self.text) and self.text[self.pos] == "i":
                self.pos += 1
                return Poly.const(1j * value)
            return Poly.const(value)
        if not ch:
            self.fail("unexpected end of input")
        self.fail(f"unexpected {ch!r}", start)


def parse_poly(text: str, rt: RewriteTable) -> Poly:
    return _Parser(text, rt).parse()


def format_real(x: float) -> str:
    text = f"{x:.12g}"
    return "0" if text == "-0" else text


def format_complex(z: complex) -> str:
    """``a+bi`` with 12 significant digits; plain ``a`` when real."""
    z = complex(z)
    if z.imag == 0:
        return format_real(z.real)
    im = format_real(abs(z.imag))
    return f"{format_real(z.real)}{'-' if z.imag < 0 else '+'}{im}i"


def format_monomial(m, order) -> str:
    parts = []
    for g in order:
        if m[g] == 1:
            parts.append(f"x{g}")
        elif m[g] > 1:
            parts.append(f"x{g}^{m[g]}")
    return "*".join(parts)


def format_poly(p: Poly, rt: RewriteTable) -> str:
    if p.is_zero():
        return "0"
    order = rt.order
    # highest degree first, then by exponents in generator order
    keys = sorted(p.terms, key=lambda m: (-sum(m), [-m[g] for g in order]))
    pieces = []
    for m in keys:
        c = p.terms[m]
        mono = format_monomial(m, order)
        if c.imag == 0:
            sign = "-" if c.real < 0 else "+"
            mag = abs(c.real)
            coeff = "" if (mag == 1 and mono) else format_real(mag)
        else:
            sign = "+"
            coeff = f"({format_complex(c)})"
        body = "*".join(x for x in (coeff, mono) if x)
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out
