"""Group-algebra elements F[G]: sparse exact convolution arithmetic plus the
expression parser and canonical rendering.

An AlgebraElement is a finite map from group elements (normal forms) to
nonzero field values.  All operations are pure and return new elements.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import groups
from .errors import (
    FieldMismatch,
    GroupMismatch,
    IdentityNotInSupport,
    ParseError,
    SupportSizeError,
)
from .groups import GroupSpec, g_inv, g_mul, identity, lex, parse_word_tokens
from .scalars import Field, RationalField


class AlgebraElement:
    __slots__ = ("spec", "field", "terms")

    def __init__(self, spec: GroupSpec, field: Field, terms: dict, _trusted: bool = False):
        self.spec = spec
        self.field = field
        if _trusted:
            self.terms = terms
        else:
            clean = {}
            for g, c in terms.items():
                c = field.check(c)
                if c != field.zero:
                    clean[g] = c
            self.terms = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, spec: GroupSpec, field: Field) -> "AlgebraElement":
        return cls(spec, field, {}, _trusted=True)

    @classmethod
    def one(cls, spec: GroupSpec, field: Field) -> "AlgebraElement":
        return cls.monomial(spec, field, identity(spec), field.one)

    @classmethod
    def monomial(cls, spec: GroupSpec, field: Field, g, coeff) -> "AlgebraElement":
        coeff = field.check(coeff)
        if coeff == field.zero:
            return cls.zero(spec, field)
        return cls(spec, field, {g: coeff}, _trusted=True)

    # -- basic queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> tuple:
        """Support in canonical element order."""
        return tuple(groups.sort_elements(self.spec, self.terms))

    def support_size(self) -> int:
        return len(self.terms)

    def items_sorted(self):
        for g in self.support():
            yield g, self.terms[g]

    def coeff(self, g):
        return self.terms.get(g, self.field.zero)

    def _check_compatible(self, other: "AlgebraElement") -> None:
        if self.spec != other.spec:
            raise GroupMismatch(
                f"group mismatch: {self.spec.text()} vs {other.spec.text()}"
            )
        if self.field != other.field:
            raise FieldMismatch(
                f"field mismatch: {self.field.text()} vs {other.field.text()}"
            )

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check_compatible(other)
        f = self.field
        acc = dict(self.terms)
        for g, c in other.terms.items():
            s = f.add(acc.get(g, f.zero), c)
            if s == f.zero:
                acc.pop(g, None)
            else:
                acc[g] = s
        return AlgebraElement(self.spec, f, acc, _trusted=True)

    def __neg__(self) -> "AlgebraElement":
        f = self.field
        return AlgebraElement(
            self.spec, f, {g: f.neg(c) for g, c in self.terms.items()}, _trusted=True
        )

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        """Exact convolution product."""
        self._check_compatible(other)
        f, spec = self.field, self.spec
        acc: dict = {}
        for gx, cx in self.terms.items():
            for gy, cy in other.terms.items():
                g = g_mul(spec, gx, gy)
                c = f.mul(cx, cy)
                prev = acc.get(g)
                s = c if prev is None else f.add(prev, c)
                if s == f.zero:
                    acc.pop(g, None)
                else:
                    acc[g] = s
        return AlgebraElement(spec, f, acc, _trusted=True)

    def scale(self, coeff) -> "AlgebraElement":
        f = self.field
        coeff = f.check(coeff)
        if coeff == f.zero:
            return AlgebraElement.zero(self.spec, f)
        return AlgebraElement(
            self.spec, f, {g: f.mul(coeff, c) for g, c in self.terms.items()}, _trusted=True
        )

    def left_translate(self, g) -> "AlgebraElement":
        """Support mapped by h -> g*h, coefficients unchanged."""
        spec = self.spec
        return AlgebraElement(
            spec,
            self.field,
            {g_mul(spec, g, h): c for h, c in self.terms.items()},
            _trusted=True,
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AlgebraElement)
            and self.spec == other.spec
            and self.field == other.field
            and self.terms == other.terms
        )

    def __repr__(self) -> str:
        return f"AlgebraElement({self.render()!r} over {self.field.text()}[{self.spec.text()}])"

    # -- text and JSON ------------------------------------------------------

    def render(self) -> str:
        if not self.terms:
            return "0"
        f = self.field
        rational = isinstance(f, RationalField)
        e = identity(self.spec)
        pieces = []
        for g, c in self.items_sorted():
            base = groups.render_element(self.spec, g)
            if rational:
                neg = c < 0
                mag = -c if neg else c
                if g == e:
                    body = f.render(mag)
                elif mag == 1:
                    body = base
                else:
                    body = f"{f.render(mag)}*{base}"
                pieces.append(("-" if neg else "+", body))
            else:
                if g == e:
                    body = f.render(c)
                elif c == f.one:
                    body = base
                else:
                    body = f"{f.render(c)}*{base}"
                pieces.append(("+", body))
        sign0, body0 = pieces[0]
        out = body0 if sign0 == "+" else f"-{body0}"
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self) -> list[dict]:
        return [
            {"term": groups.render_element(self.spec, g), "coeff": self.field.render(c)}
            for g, c in self.items_sorted()
        ]


def a_add(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x + y


def a_mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x * y


def left_translate(g, x: AlgebraElement) -> AlgebraElement:
    return x.left_translate(g)


# ---------------------------------------------------------------------------
# Expression parsing
#
# element := ['+'|'-'] term (('+'|'-') term)*
# term    := scalar | [scalar '*'] word
# scalar  := INT ['/' INT]
# word    := factor (['*'] factor)*, factor := NAME ['^' INT] | '1' | tuple


def _looks_like_scalar(toks, i: int) -> bool:
    """INT here is a coefficient unless it is a lone '1' acting as a word."""
    if toks[i][0] != "INT":
        return False
    nxt = toks[i + 1]
    if nxt[:2] == ("OP", "/"):
        return True
    if toks[i][1] != 1:
        return True
    # a bare 1: scalar and identity-word parses agree, call it a scalar
    return nxt[0] in ("END",) or nxt[:2] in (("OP", "+"), ("OP", "-"), ("OP", ","), ("OP", ")"))


def _parse_term(spec: GroupSpec, field: Field, toks, i: int, text: str):
    coeff = field.one
    kind, val, pos = toks[i]
    if _looks_like_scalar(toks, i):
        num = val
        i += 1
        if toks[i][:2] == ("OP", "/"):
            i += 1
            if toks[i][0] != "INT":
                raise ParseError("expected denominator", text, toks[i][2])
            coeff = field.parse(f"{num}/{toks[i][1]}")
            i += 1
        else:
            coeff = field.parse(str(num))
        if toks[i][:2] == ("OP", "*"):
            i += 1
        kind, val, pos = toks[i]
        if kind == "NAME" or (kind == "INT" and val == 1) or (kind == "OP" and val == "("):
            g, i = parse_word_tokens(spec, toks, i, text)
        else:
            g = identity(spec)
    else:
        g, i = parse_word_tokens(spec, toks, i, text)
    return coeff, g, i


def parse_algebra(spec: GroupSpec, field: Field, text: str) -> AlgebraElement:
    """Parse an algebra expression like "1 + a + a^2" or "2*a*b^-1 + 1/2"."""
    toks = lex(text)
    i = 0
    acc: dict = {}
    sign = 1
    if toks[i][:2] == ("OP", "+"):
        i += 1
    elif toks[i][:2] == ("OP", "-"):
        sign = -1
        i += 1
    while True:
        coeff, g, i = _parse_term(spec, field, toks, i, text)
        if sign < 0:
            coeff = field.neg(coeff)
        s = field.add(acc.get(g, field.zero), coeff)
        if s == field.zero:
            acc.pop(g, None)
        else:
            acc[g] = s
        kind, val, pos = toks[i]
        if kind == "END":
            break
        if kind == "OP" and val in "+-":
            sign = 1 if val == "+" else -1
            i += 1
            continue
        raise ParseError(f"unexpected token {val!r}", text, pos)
    return AlgebraElement(spec, field, acc, _trusted=True)


# ---------------------------------------------------------------------------
# Support triples: normalized three-term annihilator candidates


@dataclass(frozen=True)
class SupportTriple:
    """The normalized left factor 1 + alpha1*g1 + alpha2*g2.

    Invariants: alpha1, alpha2 nonzero; g1, g2 distinct non-identity elements
    in canonical order; so the support has size exactly 3.
    """

    spec: GroupSpec
    field: Field
    alpha1: object
    g1: object
    alpha2: object
    g2: object

    def lambda_(self):
        """g1^-1 * g2, the offset relating the two translates."""
        return g_mul(self.spec, g_inv(self.spec, self.g1), self.g2)

    def to_element(self) -> AlgebraElement:
        return AlgebraElement(
            self.spec,
            self.field,
            {identity(self.spec): self.field.one, self.g1: self.alpha1, self.g2: self.alpha2},
        )

    def with_alphas(self, alpha1, alpha2) -> "SupportTriple":
        f = self.field
        a1, a2 = f.check(alpha1), f.check(alpha2)
        if a1 == f.zero or a2 == f.zero:
            raise SupportSizeError("triple coefficients must be nonzero")
        return SupportTriple(self.spec, f, a1, self.g1, a2, self.g2)


def as_support_triple(x: AlgebraElement) -> SupportTriple:
    """Normalize a support-3 element to coefficient 1 at the identity.

    The identity must already lie in the support; annihilation is invariant
    under left translation, so a caller holding g + g^2 + g^3 should
    left-translate by g^-1 first.
    """
    if x.support_size() != 3:
        raise SupportSizeError(f"support size must be 3, got {x.support_size()}")
    e = identity(x.spec)
    if e not in x.terms:
        raise IdentityNotInSupport(
            "identity not in support; left-translate by the inverse of a support element first"
        )
    f = x.field
    scale = f.inv(x.terms[e])
    rest = [g for g in x.support() if g != e]
    g1, g2 = rest
    return SupportTriple(
        x.spec, f, f.mul(scale, x.terms[g1]), g1, f.mul(scale, x.terms[g2]), g2
    )
