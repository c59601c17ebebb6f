"""Parsing and rendering of polynomial expressions in ``x``.

Grammar (whitespace is insignificant)::

    poly  := ['+'|'-'] term (('+'|'-') term)*
    term  := [coeff '*'] 'x' ['^' uint] | coeff
    coeff := int | int '/' uint
"""

from __future__ import annotations

from fractions import Fraction

from .equations import PolynomialFunction
from .padic_core import PrimeContext

__all__ = ["PolynomialSyntaxError", "parse_polynomial", "render_polynomial"]


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def uint(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] in "0123456789":
            self.pos += 1
        if start == self.pos:
            raise PolynomialSyntaxError("expected an unsigned integer", self._offset(start))
        return int(self.text[start:self.pos])

    def _offset(self, pos: int) -> int:
        return len(self.text[:pos].encode("utf-8"))

    def error(self, message: str):
        self.skip_ws()
        return PolynomialSyntaxError(message, self._offset(self.pos))


def _term(sc: _Scanner) -> tuple[int, Fraction]:
    coeff = Fraction(1)
    if sc.peek().isdigit():
        num = sc.uint()
        coeff = Fraction(num)
        if sc.take("/"):
            den_at = sc._offset(sc.pos)
            den = sc.uint()
            if den == 0:
                raise PolynomialSyntaxError("zero denominator", den_at)
            coeff = Fraction(num, den)
        if not sc.take("*"):
            if sc.peek() == "x":
                raise sc.error("expected '*' between coefficient and x")
            return 0, coeff
    if not sc.take("x"):
        raise sc.error("expected 'x' or a coefficient")
    degree = 1
    if sc.take("^"):
        degree = sc.uint()
    return degree, coeff


def parse_polynomial(text: str, ctx: PrimeContext) -> PolynomialFunction:
    """Parse ``text`` into a polynomial; repeated degrees are summed."""
    sc = _Scanner(text)
    coeffs: dict[int, Fraction] = {}
    sign = -1 if sc.take("-") else 1
    if sign == 1:
        sc.take("+")
    while True:
        degree, c = _term(sc)
        coeffs[degree] = coeffs.get(degree, Fraction(0)) + sign * c
        if sc.take("+"):
            sign = 1
        elif sc.take("-"):
            sign = -1
        elif sc.peek() == "":
            break
        else:
            raise sc.error(f"unexpected character {sc.peek()!r}")
    return PolynomialFunction(coeffs, ctx)


def _coeff_text(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}" if c.denominator != 1 else str(c.numerator)


def render_polynomial(f: PolynomialFunction) -> str:
    """Canonical text: ascending degree, ``"0"`` for the zero polynomial."""
    if not f.coeffs:
        return "0"
    parts = []
    for degree in sorted(f.coeffs):
        c = f.coeffs[degree]
        mag = abs(c)
        if degree == 0:
            body = _coeff_text(mag)
        else:
            var = "x" if degree == 1 else f"x^{degree}"
            body = var if mag == 1 else f"{_coeff_text(mag)}*{var}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)
