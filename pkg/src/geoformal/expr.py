"""Measurement expressions: numbers, linear forms, and opaque fallbacks.

Values on the right of ``=`` compare by rational value when numeric
(``5.0`` equals ``5``), by (coefficient, variable, constant) when linear in
one variable (``2x + 5`` equals ``2*x+5``), and by whitespace-stripped text
otherwise. No CAS: anything beyond a linear form stays opaque.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

_EXPR_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>[0-9]+(?:\.[0-9]+)?)|(?P<var>[a-z][a-z0-9]*)|(?P<op>[-+*/]))"
)


@dataclass(frozen=True, eq=False)
class Expr:
    raw: str
    number: Fraction | None = field(default=None)
    linear: tuple[Fraction, str, Fraction] | None = field(default=None)

    def comparison_key(self):
        if self.number is not None:
            return ("num", self.number)
        if self.linear is not None:
            return ("lin",) + self.linear
        return ("raw", re.sub(r"\s+", "", self.raw))

    def canonical(self) -> str:
        """Deterministic rendering; reparsing it yields an equal Expr."""
        if self.number is not None:
            return _format_rational(self.number)
        if self.linear is not None:
            coeff, var, const = self.linear
            if coeff == 1:
                text = var
            elif coeff == -1:
                text = "-" + var
            elif coeff.denominator == 1:
                text = f"{coeff.numerator}{var}"
            else:
                text = f"{_format_rational(coeff)}*{var}"
            if const > 0:
                text += f" + {_format_rational(const)}"
            elif const < 0:
                text += f" - {_format_rational(-const)}"
            return text
        return re.sub(r"\s+", "", self.raw)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Expr):
            return NotImplemented
        return self.comparison_key() == other.comparison_key()

    def __hash__(self) -> int:
        return hash(self.comparison_key())

    def __str__(self) -> str:
        return self.raw


def _format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_expr(text: str) -> Expr:
    """Parse an expression tail into an Expr.

    Understands sums of terms, each a product/quotient of numbers with at
    most one variable factor (and no variable in a denominator). Any other
    shape falls back to an opaque Expr compared by stripped text.
    """
    raw = " ".join(text.split())
    tokens = _lex_expr(raw)
    if tokens is None:
        return Expr(raw)
    parsed = _accumulate_linear(tokens)
    if parsed is None:
        return Expr(raw)
    coeffs, const = parsed
    if not coeffs:
        return Expr(raw, number=const)
    if len(coeffs) == 1:
        var, coeff = next(iter(coeffs.items()))
        return Expr(raw, linear=(coeff, var, const))
    return Expr(raw)


def _lex_expr(raw: str):
    tokens = []
    pos = 0
    while pos < len(raw):
        m = _EXPR_TOKEN_RE.match(raw, pos)
        if m is None:
            return None if raw[pos:].strip() else tokens
        if m.lastgroup == "num":
            tokens.append(("num", Fraction(m.group("num"))))
        elif m.lastgroup == "var":
            tokens.append(("var", m.group("var")))
        else:
            tokens.append(("op", m.group("op")))
        pos = m.end()
    return tokens


def _accumulate_linear(tokens):
    coeffs: dict[str, Fraction] = {}
    const = Fraction(0)
    i = 0
    first = True
    while i < len(tokens):
        sign = Fraction(1)
        if tokens[i][0] == "op" and tokens[i][1] in "+-":
            if tokens[i][1] == "-":
                sign = Fraction(-1)
            i += 1
        elif not first:
            return None  # adjacent terms need an explicit + or -
        first = False
        term, i = _parse_term(tokens, i)
        if term is None:
            return None
        coeff, var = term
        if var is None:
            const += sign * coeff
        else:
            coeffs[var] = coeffs.get(var, Fraction(0)) + sign * coeff
    if first:
        return None  # empty expression
    return {v: c for v, c in coeffs.items() if c != 0}, const


def _parse_term(tokens, i):
    coeff = Fraction(1)
    var: str | None = None
    saw_factor = False
    expect_factor = True
    while i < len(tokens):
        kind, value = tokens[i]
        if expect_factor:
            if kind == "num":
                coeff *= value
            elif kind == "var":
                if var is not None:
                    return None, i  # more than one variable factor
                var = value
            else:
                return None, i
            saw_factor = True
            expect_factor = False
            i += 1
            continue
        if kind == "op" and value in "*/":
            if value == "/":
                if i + 1 >= len(tokens) or tokens[i + 1][0] != "num":
                    return None, i  # only numeric divisors stay linear
                divisor = tokens[i + 1][1]
                if divisor == 0:
                    return None, i
                coeff /= divisor
                i += 2
                continue
            expect_factor = True
            i += 1
            continue
        if kind == "var":  # implicit product, e.g. "2x" or "2 x"
            expect_factor = True
            continue
        break  # +/- ends the term
    if not saw_factor or expect_factor:
        return None, i
    return (coeff, var), i
