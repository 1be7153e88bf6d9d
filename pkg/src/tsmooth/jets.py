"""Truncated bivariate polynomials over exact rationals ("jets").

A jet is an element of Q[x,y] with every term of total degree >= N dropped,
N being the jet's truncation degree.  Jets represent curve germs at the
origin and generators of ideals in the local ring; all arithmetic here is
exact (``fractions.Fraction``), never floating point, since a single rounding
error can flip a criterion verdict downstream.

Dropping high terms during arithmetic is harmless for the results computed in
this package: multiplication only raises total degree, so terms at or above N
can never influence a coefficient below N.

Input grammar (EBNF, also in ``docs/polynomial-grammar.md``)::

    expr     = [ "-" | "+" ] , term , { ( "+" | "-" ) , term } ;
    term     = factor , { "*" , factor } ;
    factor   = base , [ "^" , integer ] ;
    base     = number | "x" | "y" | "(" , expr , ")" ;
    number   = integer , [ "/" , integer ] ;
    integer  = digit , { digit } ;

"/" is only allowed between integer literals (rational constants), and
exponents must be nonnegative integers.  Decimal literals are rejected:
coefficients must be exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping

Exponent = tuple[int, int]


class PolynomialSyntaxError(ValueError):
    """Raised on malformed polynomial text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class Jet:
    """Sparse truncated polynomial: exponent pair ``(i, j)`` -> coefficient.

    Invariants: every stored exponent satisfies ``i + j < truncation`` and
    every stored coefficient is nonzero.  Instances are immutable; all
    operations return new jets at the same truncation degree.
    """

    coeffs: Mapping[Exponent, Fraction] = field(default_factory=dict)
    truncation: int = 1

    def __post_init__(self):
        if self.truncation < 1:
            raise ValueError("truncation degree must be >= 1")
        clean = {}
        for (i, j), c in self.coeffs.items():
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent pair {(i, j)}")
            c = Fraction(c)
            if c != 0 and i + j < self.truncation:
                clean[(i, j)] = c
        object.__setattr__(self, "coeffs", clean)

    def __hash__(self):
        return hash((self.truncation, frozenset(self.coeffs.items())))

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(truncation: int) -> "Jet":
        return Jet({}, truncation)

    @staticmethod
    def monomial(i: int, j: int, truncation: int, coeff=1) -> "Jet":
        return Jet({(i, j): Fraction(coeff)}, truncation)

    @staticmethod
    def variable(name: str, truncation: int) -> "Jet":
        if name == "x":
            return Jet.monomial(1, 0, truncation)
        if name == "y":
            return Jet.monomial(0, 1, truncation)
        raise ValueError(f"unknown variable {name!r}")

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def order(self) -> int:
        """Minimal total degree of a term (the germ's multiplicity bound).

        The zero jet has no order; callers must check ``is_zero`` first.
        """
        if not self.coeffs:
            raise ValueError("zero jet has no order")
        return min(i + j for i, j in self.coeffs)

    def degree(self) -> int:
        if not self.coeffs:
            return 0
        return max(i + j for i, j in self.coeffs)

    def constant_term(self) -> Fraction:
        return self.coeffs.get((0, 0), Fraction(0))

    def terms(self) -> Iterator[tuple[Exponent, Fraction]]:
        yield from sorted(self.coeffs.items(), key=lambda t: (t[0][0] + t[0][1], t[0][1]))

    # -- arithmetic --------------------------------------------------------

    def _require_same_truncation(self, other: "Jet") -> None:
        if self.truncation != other.truncation:
            raise ValueError(
                f"truncation mismatch: {self.truncation} vs {other.truncation}"
            )

    def __add__(self, other: "Jet") -> "Jet":
        self._require_same_truncation(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Jet(out, self.truncation)

    def __sub__(self, other: "Jet") -> "Jet":
        return self + (-other)

    def __neg__(self) -> "Jet":
        return Jet({e: -c for e, c in self.coeffs.items()}, self.truncation)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._require_same_truncation(other)
        n = self.truncation
        out: dict[Exponent, Fraction] = {}
        for (i1, j1), c1 in self.coeffs.items():
            for (i2, j2), c2 in other.coeffs.items():
                i, j = i1 + i2, j1 + j2
                if i + j >= n:
                    continue
                out[(i, j)] = out.get((i, j), Fraction(0)) + c1 * c2
        return Jet(out, n)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c) -> "Jet":
        c = Fraction(c)
        return Jet({e: c * v for e, v in self.coeffs.items()}, self.truncation)

    def __pow__(self, k: int) -> "Jet":
        if k < 0:
            raise ValueError("negative exponent")
        out = Jet.monomial(0, 0, self.truncation)
        for _ in range(k):
            out = out * self
        return out

    def shift(self, di: int, dj: int) -> "Jet":
        """Multiply by the monomial x^di * y^dj."""
        n = self.truncation
        out = {
            (i + di, j + dj): c
            for (i, j), c in self.coeffs.items()
            if i + di + j + dj < n
        }
        return Jet(out, n)

    def diff(self, variable: str) -> "Jet":
        out: dict[Exponent, Fraction] = {}
        for (i, j), c in self.coeffs.items():
            if variable == "x" and i > 0:
                out[(i - 1, j)] = c * i
            elif variable == "y" and j > 0:
                out[(i, j - 1)] = c * j
        return Jet(out, self.truncation)

    def with_truncation(self, truncation: int) -> "Jet":
        """Re-truncate.

        Lowering drops high terms and is always sound.  Raising keeps the
        stored coefficients and declares them complete, i.e. the jet is read
        as the polynomial its support spells out.  That is valid for parsed
        polynomials, their derivatives, and any combination formed below the
        original cap; the local-algebra routines rely on it when they escalate
        the working degree.
        """
        return Jet(dict(self.coeffs), truncation)

    # -- rendering ---------------------------------------------------------

    def __str__(self) -> str:
        return render_poly(self.coeffs)

    def __repr__(self) -> str:
        return f"Jet({self}, N={self.truncation})"


def render_poly(coeffs: Mapping[Exponent, Fraction]) -> str:
    """Deterministic text form, parseable by :func:`parse_polynomial`."""
    if not coeffs:
        return "0"
    parts = []
    for (i, j), c in sorted(coeffs.items(), key=lambda t: (t[0][0] + t[0][1], t[0][1])):
        factors = []
        if i == 1:
            factors.append("x")
        elif i > 1:
            factors.append(f"x^{i}")
        if j == 1:
            factors.append("y")
        elif j > 1:
            factors.append(f"y^{j}")
        mono = "*".join(factors)
        c_abs = abs(c)
        if not mono:
            body = str(c_abs)
        elif c_abs == 1:
            body = mono
        else:
            coeff = str(c_abs) if c_abs.denominator == 1 else f"({c_abs})"
            body = f"{coeff}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


# -- parsing ---------------------------------------------------------------

_TOKEN_OPS = set("+-*^/()")


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    tokens: list[tuple[str, object, int]] = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch.isdigit():
            start = pos
            while pos < len(text) and text[pos].isdigit():
                pos += 1
            if pos < len(text) and text[pos] == ".":
                raise PolynomialSyntaxError(
                    "unsupported coefficient: decimal literals are not exact, "
                    "use p/q rationals",
                    pos,
                )
            tokens.append(("int", int(text[start:pos]), start))
            continue
        if ch == ".":
            raise PolynomialSyntaxError(
                "unsupported coefficient: decimal literals are not exact, "
                "use p/q rationals",
                pos,
            )
        if ch in ("x", "y"):
            tokens.append(("var", ch, pos))
            pos += 1
            continue
        if ch.isalpha():
            raise PolynomialSyntaxError(f"unknown variable {ch!r}", pos)
        if ch in _TOKEN_OPS:
            tokens.append((ch, ch, pos))
            pos += 1
            continue
        raise PolynomialSyntaxError(f"unexpected character {ch!r}", pos)
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    """Recursive-descent parser evaluating directly in the polynomial ring."""

    def __init__(self, tokens: list[tuple[str, object, int]]):
        self.tokens = tokens
        self.idx = 0

    def peek(self):
        return self.tokens[self.idx]

    def take(self):
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def expect(self, kind: str):
        tok = self.take()
        if tok[0] != kind:
            raise PolynomialSyntaxError(f"expected {kind!r}", tok[2])
        return tok

    def parse(self) -> dict[Exponent, Fraction]:
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise PolynomialSyntaxError("unexpected trailing input", tok[2])
        return value

    def expr(self) -> dict[Exponent, Fraction]:
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        value = _pscale(self.term(), sign)
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            value = _padd(value, _pscale(rhs, -1 if op == "-" else 1))
        return value

    def term(self) -> dict[Exponent, Fraction]:
        value = self.factor()
        while self.peek()[0] == "*":
            self.take()
            value = _pmul(value, self.factor())
        return value

    def factor(self) -> dict[Exponent, Fraction]:
        base = self.base()
        if self.peek()[0] == "^":
            caret = self.take()
            tok = self.peek()
            if tok[0] != "int":
                raise PolynomialSyntaxError(
                    "exponent must be a nonnegative integer", caret[2] + 1
                )
            self.take()
            return _ppow(base, tok[1])
        return base

    def base(self) -> dict[Exponent, Fraction]:
        tok = self.take()
        if tok[0] == "int":
            value = Fraction(tok[1])
            if self.peek()[0] == "/":
                slash = self.take()
                den = self.peek()
                if den[0] != "int":
                    raise PolynomialSyntaxError(
                        "'/' is only allowed between integer literals", slash[2]
                    )
                self.take()
                if den[1] == 0:
                    raise PolynomialSyntaxError("division by zero", den[2])
                value = value / den[1]
            return {(0, 0): value} if value else {}
        if tok[0] == "var":
            return {((1, 0) if tok[1] == "x" else (0, 1)): Fraction(1)}
        if tok[0] == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if tok[0] == "-":
            return _pscale(self.base_or_factor(), -1)
        raise PolynomialSyntaxError("expected a number, variable or '('", tok[2])

    def base_or_factor(self) -> dict[Exponent, Fraction]:
        return self.factor()


def _padd(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, Fraction(0)) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def _pscale(a, s):
    s = Fraction(s)
    if s == 0:
        return {}
    return {e: c * s for e, c in a.items()}


def _pmul(a, b):
    out: dict[Exponent, Fraction] = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            e = (i1 + i2, j1 + j2)
            s = out.get(e, Fraction(0)) + c1 * c2
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def _ppow(a, k):
    out = {(0, 0): Fraction(1)}
    for _ in range(k):
        out = _pmul(out, a)
    return out


def parse_polynomial(text: str) -> dict[Exponent, Fraction]:
    """Parse to an untruncated sparse polynomial; exact, no floating point."""
    return _Parser(_tokenize(text)).parse()


def make_jet(poly_text: str, truncation_degree: int) -> Jet:
    """Parse ``poly_text`` and truncate at ``truncation_degree``."""
    if truncation_degree < 1:
        raise ValueError("truncation degree must be >= 1")
    return Jet(parse_polynomial(poly_text), truncation_degree)


def default_truncation(degree: int, cap: int = 64) -> int:
    """Initial working truncation for a germ of the given total degree."""
    return min(max(2 * degree + 4, 6), cap)


def jet_for_germ(poly_text: str, cap: int = 64) -> Jet:
    """Parse a germ and pick the default truncation from its degree."""
    poly = parse_polynomial(poly_text)
    degree = max((i + j for i, j in poly), default=0)
    return Jet(poly, default_truncation(degree, cap))
