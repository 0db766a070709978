"""Recursive-descent parser for polynomial symbols.

Grammar (whitespace is insignificant)::

    expr  := ['-'] term (('+' | '-') term)*
    term  := coeff ['*' mono] | mono
    coeff := REAL | '(' ['-'] REAL [('+' | '-') REAL 'i'] ')'
    mono  := var ['^' UINT] ('*' var ['^' UINT])*
    var   := 'z' UINT            (bare 'z' allowed when m = 1)

Complex coefficients must be parenthesized, so ``0.1+0.2i*z`` is rejected
rather than silently read as ``0.1 + (0.2i)*z``.
"""

from __future__ import annotations

import re

from .errors import ExponentOverflow, ExpressionSyntaxError, UnknownVariable
from .series import PolynomialMap

MAX_EXPONENT = 10**6

_REAL = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_UINT = re.compile(r"\d+")


class _Parser:
    def __init__(self, text: str, m: int):
        self.text = text
        self.m = m
        self.pos = 0

    # -- low level -----------------------------------------------------

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def offset(self):
        # byte offset, so non-ASCII input reports positions consistently
        return len(self.text[: self.pos].encode("utf-8"))

    def error(self, cls, message):
        raise cls(message, self.offset(), self.text, self.pos)

    def expect(self, ch):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            self.error(ExpressionSyntaxError, f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def match(self, regex, what):
        self.skip_ws()
        mt = regex.match(self.text, self.pos)
        if not mt:
            found = self.peek() or "end of input"
            self.error(ExpressionSyntaxError, f"expected {what}, found {found!r}")
        self.pos = mt.end()
        return mt.group()

    # -- grammar ---------------------------------------------------------

    def parse(self):
        if not self.text.strip():
            self.error(ExpressionSyntaxError, "empty expression")
        terms = {}
        sign = 1.0
        if self.peek() == "-":
            self.pos += 1
            sign = -1.0
        self.accumulate(terms, sign, *self.term())
        while self.peek() in ("+", "-"):
            sign = 1.0 if self.text[self.pos] == "+" else -1.0
            self.pos += 1
            self.accumulate(terms, sign, *self.term())
        if self.peek():
            self.error(ExpressionSyntaxError, f"unexpected {self.peek()!r}")
        return PolynomialMap(self.m, terms)

    @staticmethod
    def accumulate(terms, sign, coeff, J):
        terms[J] = terms.get(J, 0j) + sign * coeff

    def term(self):
        ch = self.peek()
        if ch == "z":
            return 1.0 + 0j, self.mono()
        if ch == "(" or ch.isdigit() or ch == ".":
            c = self.coeff()
            if self.peek() == "*":
                self.pos += 1
                return c, self.mono()
            return c, (0,) * self.m
        found = ch or "end of input"
        self.error(ExpressionSyntaxError, f"expected a coefficient or variable, found {found!r}")

    def coeff(self):
        if self.peek() != "(":
            return complex(float(self.match(_REAL, "a number")))
        self.pos += 1
        sign = 1.0
        if self.peek() == "-":
            self.pos += 1
            sign = -1.0
        real = sign * float(self.match(_REAL, "a number"))
        imag = 0.0
        if self.peek() in ("+", "-"):
            s = 1.0 if self.text[self.pos] == "+" else -1.0
            self.pos += 1
            imag = s * float(self.match(_REAL, "a number"))
            self.expect("i")
        self.expect(")")
        return complex(real, imag)

    def mono(self):
        J = [0] * self.m
        while True:
            k = self.var()
            e = 1
            if self.peek() == "^":
                self.pos += 1
                start = self.pos
                e = int(self.match(_UINT, "an exponent"))
                if e > MAX_EXPONENT:
                    self.pos = start
                    self.skip_ws()
                    self.error(ExponentOverflow, f"exponent {e} exceeds {MAX_EXPONENT}")
            J[k - 1] += e
            if J[k - 1] > MAX_EXPONENT:
                self.error(ExponentOverflow, f"exponent of z{k} exceeds {MAX_EXPONENT}")
            # '*' continues the monomial only when another variable follows
            save = self.pos
            if self.peek() == "*":
                self.pos += 1
                if self.peek() == "z":
                    continue
                self.pos = save
            return tuple(J)

    def var(self):
        self.skip_ws()
        start = self.pos
        self.expect("z")
        if self.pos < len(self.text) and self.text[self.pos].isdigit():
            k = int(_UINT.match(self.text, self.pos).group())
            if k < 1 or k > self.m:
                self.pos = start
                self.error(UnknownVariable, f"variable z{k} out of range for m = {self.m}")
            self.pos = _UINT.match(self.text, self.pos).end()
            return k
        if self.m != 1:
            self.pos = start
            self.error(UnknownVariable, f"bare 'z' is ambiguous for m = {self.m}; use z1..z{self.m}")
        return 1


def parse_poly(text: str, m: int) -> PolynomialMap:
    """Parse ``text`` into a PolynomialMap in ``m`` variables."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return _Parser(text, m).parse()


def _format_real(x: float) -> str:
    return repr(float(x))


def _format_coeff(c: complex) -> str:
    if c.imag == 0:
        return _format_real(abs(c.real))
    sign = "+" if c.imag >= 0 else "-"
    return f"({_format_real(c.real)}{sign}{_format_real(abs(c.imag))}i)"


def format_poly(p: PolynomialMap) -> str:
    """Render ``p`` in the parser's grammar; ``parse_poly(format_poly(p), m) == p``."""
    if p.is_zero():
        return "0"
    parts = []
    for J, c in p.coeffs.items():
        if c.imag == 0:
            sign = "-" if c.real < 0 or (c.real == 0 and str(c.real).startswith("-")) else "+"
        else:
            sign = "+"
        coeff = _format_coeff(c)
        mono = "*".join(
            (f"z{k + 1}" if p.num_vars > 1 else "z") + (f"^{e}" if e > 1 else "")
            for k, e in enumerate(J)
            if e
        )
        body = f"{coeff}*{mono}" if mono else coeff
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
