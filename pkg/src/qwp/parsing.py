"""Expression grammar shared by the CLI and the serialized element format.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/')? unary)*      ('?' = juxtaposition multiplies)
    unary  := '-' unary | power
    power  := atom ('^' ['-'] integer)?
    atom   := integer | 'q' | generator | '(' expr ')'

Generators are z0..zN, w, and their adjoints z0*, w*.  A '*' immediately
following a generator (no whitespace) is the adjoint star; everywhere else
'*' multiplies.  This is the grammar's only whitespace-sensitive rule and
exists so that "z0*z0" reads as z0* · z0 while "q^2 * z1" multiplies.
'/' divides and its divisor must be a scalar, which covers both rational
literals (1/2) and printed Q(q) scalars ("(1 - q^2)/(q^2)").
"""

from __future__ import annotations

from typing import NamedTuple

from qwp.scalar import QScalar
from qwp.star_algebra import (
    AlgebraElement,
    Generator,
    InvalidGeneratorError,
    normalize,
)


class ParseError(ValueError):
    """Syntax error with position and expected-token information."""

    def __init__(self, message, position, expected=None):
        self.position = position
        self.expected = expected
        detail = f"{message} at position {position}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)


class _Token(NamedTuple):
    kind: str  # "int", "q", "gen", "op", "lparen", "rparen", "end"
    value: object
    pos: int
    end: int


def _tokenize(text):
    tokens = []
    i = 0
    size = len(text)
    while i < size:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < size and text[j].isdigit():
                j += 1
            tokens.append(_Token("int", int(text[i:j]), i, j))
            i = j
            continue
        if ch == "z":
            j = i + 1
            while j < size and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ParseError("generator needs an index", i, "z<digits>")
            tokens.append(_Token("gen", Generator("z", int(text[i + 1 : j])), i, j))
            i = j
            continue
        if ch == "w":
            tokens.append(_Token("gen", Generator("w", -1), i, i + 1))
            i += 1
            continue
        if ch == "q":
            tokens.append(_Token("q", None, i, i + 1))
            i += 1
            continue
        if ch == "*":
            prev = tokens[-1] if tokens else None
            if (
                prev is not None
                and prev.kind == "gen"
                and prev.end == i
                and prev.value.kind in ("z", "w")
            ):
                tokens[-1] = _Token("gen", prev.value.star(), prev.pos, i + 1)
            else:
                tokens.append(_Token("op", "*", i, i + 1))
            i += 1
            continue
        if ch in "+-/^":
            tokens.append(_Token("op", ch, i, i + 1))
            i += 1
            continue
        if ch == "(":
            tokens.append(_Token("lparen", None, i, i + 1))
            i += 1
            continue
        if ch == ")":
            tokens.append(_Token("rparen", None, i, i + 1))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(_Token("end", None, size, size))
    return tokens


_ATOM_STARTS = ("int", "q", "gen", "lparen")


class _Parser:
    """Evaluating recursive-descent parser; values are QScalar or AlgebraElement."""

    def __init__(self, text, pres):
        self.text = text
        self.pres = pres
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind, what):
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"unexpected {tok.kind}", tok.pos, what)
        return self.advance()

    # -- value algebra -------------------------------------------------------

    def _promote(self, v):
        if isinstance(v, QScalar):
            if self.pres is None:
                raise ParseError("generators not allowed in scalar context", 0)
            return AlgebraElement.from_scalar(self.pres, v)
        return v

    def _mul(self, x, y):
        if isinstance(x, QScalar) and isinstance(y, QScalar):
            return x * y
        if isinstance(x, QScalar):
            return y.scale(x)
        if isinstance(y, QScalar):
            return x.scale(y)
        return x * y

    def _div(self, x, y, pos):
        if not isinstance(y, QScalar):
            raise ParseError("divisor must be a scalar", pos)
        if y.is_zero():
            raise ParseError("division by zero", pos)
        if isinstance(x, QScalar):
            return x / y
        return x.scale(1 / y)

    def _addsub(self, x, y, op):
        if isinstance(x, QScalar) and isinstance(y, QScalar):
            return x + y if op == "+" else x - y
        x, y = self._promote(x), self._promote(y)
        return x + y if op == "+" else x - y

    # -- grammar -------------------------------------------------------------

    def parse(self):
        value = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"trailing input", tok.pos, "operator or end of input")
        return value

    def expr(self):
        value = self.term()
        while self.peek().kind == "op" and self.peek().value in "+-":
            op = self.advance().value
            value = self._addsub(value, self.term(), op)
        return value

    def term(self):
        value = self.unary()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.value in "*/":
                self.advance()
                rhs = self.unary()
                if tok.value == "*":
                    value = self._mul(value, rhs)
                else:
                    value = self._div(value, rhs, tok.pos)
            elif tok.kind in _ATOM_STARTS:
                value = self._mul(value, self.unary())
            else:
                return value

    def unary(self):
        tok = self.peek()
        if tok.kind == "op" and tok.value == "-":
            self.advance()
            v = self.unary()
            return -v if isinstance(v, QScalar) else -v
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok.kind == "op" and tok.value == "^":
            self.advance()
            sign = 1
            if self.peek().kind == "op" and self.peek().value == "-":
                self.advance()
                sign = -1
            exp_tok = self.expect("int", "integer exponent")
            k = sign * exp_tok.value
            if isinstance(base, QScalar):
                return base ** k
            if k < 0:
                raise ParseError("negative powers only apply to scalars", tok.pos)
            return base ** k
        return base

    def atom(self):
        tok = self.advance()
        if tok.kind == "int":
            return QScalar(tok.value)
        if tok.kind == "q":
            return QScalar.q()
        if tok.kind == "gen":
            if self.pres is None:
                raise ParseError("generators not allowed in scalar context", tok.pos)
            try:
                self.pres.check_generator(tok.value)
            except InvalidGeneratorError as err:
                raise InvalidGeneratorError(f"{err} (at position {tok.pos})") from None
            return normalize((tok.value,), self.pres)
        if tok.kind == "lparen":
            value = self.expr()
            self.expect("rparen", "')'")
            return value
        raise ParseError(f"unexpected {tok.kind}", tok.pos, "number, q, generator or '('")


def parse_expression(text, pres):
    """Parse text to a normalized AlgebraElement of the given presentation."""
    value = _Parser(text, pres).parse()
    if isinstance(value, QScalar):
        return AlgebraElement.from_scalar(pres, value)
    return value


def parse_scalar(text):
    """Parse a pure Q(q) scalar such as "(1 - q^2)/(q^2)" or "3/2*q"."""
    value = _Parser(text, None).parse()
    return value
