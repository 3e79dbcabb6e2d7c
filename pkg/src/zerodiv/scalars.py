"""Exact field arithmetic over the rationals and over prime fields GF(p).

Field values are plain Python objects: Fraction for the rationals, an int
residue in [0, p) for GF(p).  A Field instance supplies the operations and
the parsing/rendering of the canonical text forms ("-2/3", "2").
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from random import Random

from .errors import FieldMismatch, InputError, ParseError, ZeroDenominator, ZeroInversion

MAX_PRIME = 2**31

_SCALAR_RE = re.compile(r"\s*([+-]?\d+)\s*(?:/\s*([+-]?\d+))?\s*$")


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Field:
    """Shared surface of RationalField and PrimeField."""

    def text(self) -> str:
        raise NotImplementedError

    def check(self, x):
        raise NotImplementedError


@dataclass(frozen=True)
class RationalField(Field):
    zero = Fraction(0)
    one = Fraction(1)

    def text(self) -> str:
        return "Q"

    def check(self, x) -> Fraction:
        if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
            raise FieldMismatch(f"not a rational value: {x!r}")
        return Fraction(x)

    def add(self, x: Fraction, y: Fraction) -> Fraction:
        return x + y

    def sub(self, x: Fraction, y: Fraction) -> Fraction:
        return x - y

    def neg(self, x: Fraction) -> Fraction:
        return -x

    def mul(self, x: Fraction, y: Fraction) -> Fraction:
        return x * y

    def inv(self, x: Fraction) -> Fraction:
        if x == 0:
            raise ZeroInversion("cannot invert 0")
        return 1 / Fraction(x)

    def div(self, x: Fraction, y: Fraction) -> Fraction:
        return self.mul(x, self.inv(y))

    def parse(self, text: str) -> Fraction:
        m = _SCALAR_RE.match(text)
        if not m:
            raise ParseError(f"malformed scalar {text!r}", text, 0)
        num, den = int(m.group(1)), int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise ZeroDenominator(f"zero denominator in {text!r}", text, 0)
        return Fraction(num, den)

    def render(self, x: Fraction) -> str:
        return str(Fraction(x))

    def random(self, rng: Random, nonzero: bool = False) -> Fraction:
        while True:
            v = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
            if v != 0 or not nonzero:
                return v


@dataclass(frozen=True)
class PrimeField(Field):
    p: int

    def __post_init__(self):
        if self.p >= MAX_PRIME:
            raise InputError(f"prime {self.p} too large (must be < 2^31)")
        if not is_prime(self.p):
            raise InputError(f"{self.p} is not prime")

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1 % self.p

    def text(self) -> str:
        return f"GF:{self.p}"

    def check(self, x) -> int:
        if isinstance(x, bool) or not isinstance(x, int):
            raise FieldMismatch(f"not a GF({self.p}) residue: {x!r}")
        return x % self.p

    def add(self, x: int, y: int) -> int:
        return (x + y) % self.p

    def sub(self, x: int, y: int) -> int:
        return (x - y) % self.p

    def neg(self, x: int) -> int:
        return -x % self.p

    def mul(self, x: int, y: int) -> int:
        return (x * y) % self.p

    def inv(self, x: int) -> int:
        if x % self.p == 0:
            raise ZeroInversion(f"cannot invert 0 in GF({self.p})")
        return pow(x, -1, self.p)

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def parse(self, text: str) -> int:
        m = _SCALAR_RE.match(text)
        if not m:
            raise ParseError(f"malformed scalar {text!r}", text, 0)
        num, den = int(m.group(1)), int(m.group(2)) if m.group(2) else 1
        if den % self.p == 0:
            raise ZeroDenominator(f"zero denominator in {text!r} over GF({self.p})", text, 0)
        return self.mul(num % self.p, self.inv(den % self.p))

    def render(self, x: int) -> str:
        return str(x % self.p)

    def random(self, rng: Random, nonzero: bool = False) -> int:
        if nonzero:
            return rng.randrange(1, self.p)
        return rng.randrange(self.p)


RATIONALS = RationalField()


def field_from_text(text: str) -> Field:
    """Parse "Q" or "GF:p" into a field."""
    t = text.strip()
    if t in ("Q", "q"):
        return RATIONALS
    low = t.lower()
    if low.startswith("gf:"):
        body = t[3:]
        if not body.lstrip("+").isdigit():
            raise InputError(f"bad prime in field spec {text!r}")
        return PrimeField(int(body))
    raise InputError(f"unknown field spec {text!r} (expected 'Q' or 'GF:p')")


def parse_scalar(text: str, field: Field):
    return field.parse(text)


def render_scalar(x, field: Field) -> str:
    return field.render(x)
