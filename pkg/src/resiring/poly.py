"""Exact integer polynomials: parsing, evaluation, derivatives, valuations.

Coefficients are arbitrary-precision signed integers and nothing is reduced
until evaluation time, so every operation here is exact regardless of
coefficient magnitude.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from typing import Union

#: Degree assigned to the zero polynomial; compares below every finite degree.
NEG_INFINITY = float("-inf")

#: Valuation assigned to 0, which is divisible by every power of p.
INFINITY = math.inf

#: A p-adic valuation: a nonnegative int, or INFINITY exactly for input 0.
Valuation = Union[int, float]

# Densified storage; a larger exponent almost certainly indicates a typo
# and would exhaust memory.
_MAX_EXPONENT = 100_000


class ParseError(ValueError):
    """Polynomial text rejected; carries the offending character position."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (position {position})")
        self.position = position


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test for desk-scale n."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def require_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not a prime")


@dataclass(frozen=True)
class IntPolynomial:
    """Dense integer polynomial; ``coeffs[i]`` multiplies ``x**i``.

    The stored form is canonical: trailing zero coefficients are stripped,
    so equal polynomials always compare (and hash) equal.  The zero
    polynomial stores an empty tuple and has degree ``NEG_INFINITY``.
    """

    coeffs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        coeffs = tuple(operator.index(c) for c in self.coeffs)
        end = len(coeffs)
        while end and coeffs[end - 1] == 0:
            end -= 1
        object.__setattr__(self, "coeffs", coeffs[:end])

    @property
    def degree(self) -> int | float:
        return len(self.coeffs) - 1 if self.coeffs else NEG_INFINITY

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> int:
        """Coefficient of x**i (0 beyond the stored degree)."""
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __str__(self) -> str:
        return render_poly(self)


def evaluate(f: IntPolynomial, a: int) -> int:
    """f(a) in exact integer arithmetic (Horner)."""
    acc = 0
    for c in reversed(f.coeffs):
        acc = acc * a + c
    return acc


def eval_mod(f: IntPolynomial, a: int, m: int, *, reduce_each_step: bool = False) -> int:
    """f(a) mod m, always in [0, m).

    The default evaluates exactly and reduces once at the end.  With
    ``reduce_each_step`` every Horner step is reduced, which caps
    intermediate size for large degrees; both modes give the same result.
    """
    if m < 1:
        raise ValueError("modulus must be a positive integer")
    if not reduce_each_step:
        return evaluate(f, a) % m
    a %= m
    acc = 0
    for c in reversed(f.coeffs):
        acc = (acc * a + c) % m
    return acc


def derivative(f: IntPolynomial) -> IntPolynomial:
    """Formal derivative; constants map to the zero polynomial."""
    return IntPolynomial(tuple(i * f.coeffs[i] for i in range(1, len(f.coeffs))))


def hasse_derivative(f: IntPolynomial, i: int) -> IntPolynomial:
    """i-th Hasse derivative: the coefficient of y**i in f(x + y).

    Computed as sum_j binomial(j, i) * a_j * x**(j-i), so the result has
    integer coefficients without ever dividing by i!.  For i above the
    degree this is the zero polynomial.
    """
    if i < 0:
        raise ValueError("order must be a nonnegative integer")
    return IntPolynomial(
        tuple(math.comb(j, i) * f.coeffs[j] for j in range(i, len(f.coeffs)))
    )


def ord_p(n: int, p: int) -> Valuation:
    """p-adic valuation of n: the largest v with p**v dividing n.

    Returns INFINITY exactly when n == 0.
    """
    require_prime(p)
    if n == 0:
        return INFINITY
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def render_poly(f: IntPolynomial) -> str:
    """Canonical text form.

    Descending exponents, ``x^k`` for k >= 2 and plain ``x`` for k = 1,
    coefficients joined to the variable with ``*`` (unit coefficients
    omitted), single spaces around binary + and -, zero terms dropped.
    The zero polynomial renders as ``0``.
    """
    if f.is_zero:
        return "0"
    parts: list[str] = []
    for i in range(len(f.coeffs) - 1, -1, -1):
        c = f.coeffs[i]
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            var = "x" if i == 1 else f"x^{i}"
            body = var if mag == 1 else f"{mag}*{var}"
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)


def parse_poly(text: str) -> IntPolynomial:
    """Parse polynomial text into canonical dense form, summing like terms.

    Grammar (whitespace insignificant)::

        poly := ['-'] term (('+' | '-') term)*
        term := INT ['*' var] | var
        var  := ('x' | 'X') ['^' UINT]

    INT is an optionally signed decimal of unbounded length.  The optional
    leading '-' lets canonical renderings such as ``-x - 1`` round-trip.
    Raises ParseError with the offending position on bad input.
    """
    return _Parser(text).parse()


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def parse(self) -> IntPolynomial:
        acc: dict[int, int] = {}
        self._skip_ws()
        sign = 1
        if self._peek() == "-":
            self.pos += 1
            sign = -1
        self._term(acc, sign)
        while True:
            self._skip_ws()
            ch = self._peek()
            if ch is None:
                break
            if ch == "+":
                sign = 1
            elif ch == "-":
                sign = -1
            else:
                raise ParseError(f"expected '+' or '-', found {ch!r}", self.pos)
            self.pos += 1
            self._term(acc, sign)
        if not acc:
            return IntPolynomial()
        size = max(acc) + 1
        coeffs = [0] * size
        for e, c in acc.items():
            coeffs[e] = c
        return IntPolynomial(tuple(coeffs))

    def _term(self, acc: dict[int, int], sign: int) -> None:
        self._skip_ws()
        tsign = 1
        ch = self._peek()
        if ch in ("+", "-"):
            tsign = -1 if ch == "-" else 1
            self.pos += 1
            self._skip_ws()
            ch = self._peek()
        if ch is None:
            raise ParseError("expected a term, found end of input", self.pos)
        if ch.isdigit():
            value = tsign * self._digits()
            self._skip_ws()
            if self._peek() == "*":
                self.pos += 1
                self._skip_ws()
                exponent = self._var()
            else:
                exponent = 0
            self._add(acc, exponent, sign * value)
        elif ch in ("x", "X"):
            exponent = self._var()
            self._add(acc, exponent, sign * tsign)
        else:
            raise ParseError(f"expected a term, found {ch!r}", self.pos)

    def _var(self) -> int:
        ch = self._peek()
        if ch not in ("x", "X"):
            raise ParseError(f"expected variable, found {ch!r}", self.pos)
        self.pos += 1
        self._skip_ws()
        if self._peek() != "^":
            return 1
        self.pos += 1
        self._skip_ws()
        ch = self._peek()
        if ch is None or not ch.isdigit():
            raise ParseError("exponent must be a nonnegative integer", self.pos)
        exponent = self._digits()
        if exponent > _MAX_EXPONENT:
            raise ParseError(f"exponent exceeds the supported maximum {_MAX_EXPONENT}", self.pos)
        return exponent

    def _digits(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ParseError("expected digits", start)
        return int(self.text[start : self.pos])

    @staticmethod
    def _add(acc: dict[int, int], exponent: int, value: int) -> None:
        acc[exponent] = acc.get(exponent, 0) + value

    def _peek(self) -> str | None:
        return self.text[self.pos] if self.pos < len(self.text) else None

    def _skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
