"""Computable group families with unique normal forms.

Families: free groups, free-abelian lattices, cyclic groups, the discrete
Heisenberg group, symmetric groups, and flat direct products of these.
Elements are plain hashable values; every operation takes the GroupSpec
first.

Normal forms:
  free        tuple of (generator index, nonzero exponent), adjacent indices
              distinct (freely reduced)
  abelian     integer vector (tuple)
  cyclic      residue in [0, m)
  heisenberg  integer triple (x, y, z); (x,y,z)*(x',y',z') =
              (x+x', y+y', z+z'+x*y')
  sym         permutation of 0..k-1 in one-line image form
  product     tuple of component normal forms
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from random import Random
from typing import Iterator

from .errors import GroupMismatch, InputError, ParseError, UnknownGenerator

_GEN_NAMES = "abcdefghijklmnopqrstuvwxyz"


# ---------------------------------------------------------------------------
# Group specifications


@dataclass(frozen=True)
class GroupSpec:
    kind: str  # free | abelian | cyclic | heisenberg | sym | product
    param: int = 0
    factors: tuple["GroupSpec", ...] = ()

    def __post_init__(self):
        k = self.kind
        if k == "free" or k == "abelian":
            if not 1 <= self.param <= 26:
                raise InputError(f"{k} rank must be between 1 and 26, got {self.param}")
        elif k == "cyclic":
            if self.param < 2:
                raise InputError(f"cyclic modulus must be >= 2, got {self.param}")
        elif k == "heisenberg":
            pass
        elif k == "sym":
            if not 2 <= self.param <= 26:
                raise InputError(f"sym degree must be between 2 and 26, got {self.param}")
        elif k == "product":
            if not self.factors:
                raise InputError("product needs at least one factor")
            if any(f.kind == "product" for f in self.factors):
                raise InputError("nested products are not allowed")
        else:
            raise InputError(f"unknown group kind {k!r}")

    def text(self) -> str:
        if self.kind == "heisenberg":
            return "heisenberg"
        if self.kind == "product":
            return "product(" + ",".join(f.text() for f in self.factors) + ")"
        return f"{self.kind}:{self.param}"


def parse_group_spec(text: str) -> GroupSpec:
    """Parse "free:2", "abelian:3", "cyclic:6", "heisenberg", "sym:3",
    "product(free:1,cyclic:3)"."""
    t = text.strip()
    if t == "heisenberg":
        return GroupSpec("heisenberg")
    if t.startswith("product(") and t.endswith(")"):
        inner = t[len("product(") : -1]
        parts = [p for p in inner.split(",") if p.strip()]
        if not parts:
            raise InputError(f"empty product in group spec {text!r}")
        return GroupSpec("product", factors=tuple(parse_group_spec(p) for p in parts))
    if ":" in t:
        kind, _, num = t.partition(":")
        kind = kind.strip()
        if kind in ("free", "abelian", "cyclic", "sym") and num.strip().isdigit():
            return GroupSpec(kind, int(num))
    raise InputError(f"unknown group spec {text!r}")


def is_torsion_free(spec: GroupSpec) -> bool:
    if spec.kind in ("free", "abelian", "heisenberg"):
        return True
    if spec.kind == "product":
        return all(is_torsion_free(f) for f in spec.factors)
    return False


def is_finite(spec: GroupSpec) -> bool:
    if spec.kind in ("cyclic", "sym"):
        return True
    if spec.kind == "product":
        return all(is_finite(f) for f in spec.factors)
    return False


def group_order(spec: GroupSpec) -> int:
    """Order of a finite group; raises for infinite families."""
    if spec.kind == "cyclic":
        return spec.param
    if spec.kind == "sym":
        import math

        return math.factorial(spec.param)
    if spec.kind == "product" and is_finite(spec):
        n = 1
        for f in spec.factors:
            n *= group_order(f)
        return n
    raise InputError(f"group {spec.text()} is infinite")


def num_generators(spec: GroupSpec) -> int:
    if spec.kind in ("free", "abelian"):
        return spec.param
    if spec.kind == "cyclic":
        return 1
    if spec.kind == "heisenberg":
        return 3
    if spec.kind == "sym":
        return spec.param - 1
    raise InputError("product groups have no flat generator naming")


# ---------------------------------------------------------------------------
# Element arithmetic


def identity(spec: GroupSpec):
    k = spec.kind
    if k == "free":
        return ()
    if k == "abelian":
        return (0,) * spec.param
    if k == "cyclic":
        return 0
    if k == "heisenberg":
        return (0, 0, 0)
    if k == "sym":
        return tuple(range(spec.param))
    return tuple(identity(f) for f in spec.factors)


def generators(spec: GroupSpec) -> list:
    k = spec.kind
    if k == "free":
        return [((i, 1),) for i in range(spec.param)]
    if k == "abelian":
        return [tuple(1 if j == i else 0 for j in range(spec.param)) for i in range(spec.param)]
    if k == "cyclic":
        return [1]
    if k == "heisenberg":
        return [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    if k == "sym":
        gens = []
        for i in range(spec.param - 1):
            img = list(range(spec.param))
            img[i], img[i + 1] = img[i + 1], img[i]
            gens.append(tuple(img))
        return gens
    raise InputError("product groups have no flat generator list")


def _free_append(word: list, gen: int, exp: int) -> None:
    if exp == 0:
        return
    if word and word[-1][0] == gen:
        s = word[-1][1] + exp
        if s == 0:
            word.pop()
        else:
            word[-1] = (gen, s)
    else:
        word.append((gen, exp))


def g_mul(spec: GroupSpec, x, y):
    k = spec.kind
    if k == "free":
        out = list(x)
        for gen, exp in y:
            _free_append(out, gen, exp)
        return tuple(out)
    if k == "abelian":
        return tuple(a + b for a, b in zip(x, y))
    if k == "cyclic":
        return (x + y) % spec.param
    if k == "heisenberg":
        return (x[0] + y[0], x[1] + y[1], x[2] + y[2] + x[0] * y[1])
    if k == "sym":
        return tuple(x[y[i]] for i in range(spec.param))
    return tuple(g_mul(f, a, b) for f, a, b in zip(spec.factors, x, y))


def g_inv(spec: GroupSpec, x):
    k = spec.kind
    if k == "free":
        return tuple((gen, -exp) for gen, exp in reversed(x))
    if k == "abelian":
        return tuple(-a for a in x)
    if k == "cyclic":
        return (-x) % spec.param
    if k == "heisenberg":
        return (-x[0], -x[1], x[0] * x[1] - x[2])
    if k == "sym":
        out = [0] * spec.param
        for i, v in enumerate(x):
            out[v] = i
        return tuple(out)
    return tuple(g_inv(f, a) for f, a in zip(spec.factors, x))


def g_pow(spec: GroupSpec, x, n: int):
    if n < 0:
        return g_pow(spec, g_inv(spec, x), -n)
    acc = identity(spec)
    base = x
    while n:
        if n & 1:
            acc = g_mul(spec, acc, base)
        base = g_mul(spec, base, base)
        n >>= 1
    return acc


def element_key(spec: GroupSpec, x):
    """Total order key within one family; defines the canonical element order."""
    if spec.kind == "product":
        return tuple(element_key(f, a) for f, a in zip(spec.factors, x))
    return x


def sort_elements(spec: GroupSpec, elems) -> list:
    return sorted(elems, key=lambda e: element_key(spec, e))


# ---------------------------------------------------------------------------
# Formal words in two letters


@dataclass(frozen=True)
class FormalWord:
    """Freely reduced word in the abstract letters X1, X2."""

    syllables: tuple[tuple[int, int], ...] = ()

    @staticmethod
    def make(seq) -> "FormalWord":
        out: list = []
        for letter, exp in seq:
            if letter not in (1, 2):
                raise InputError(f"formal letter must be 1 or 2, got {letter}")
            _free_append(out, letter, exp)
        return FormalWord(tuple(out))

    def __mul__(self, other: "FormalWord") -> "FormalWord":
        return FormalWord.make(self.syllables + other.syllables)

    def inverse(self) -> "FormalWord":
        return FormalWord(tuple((l, -e) for l, e in reversed(self.syllables)))

    def __pow__(self, n: int) -> "FormalWord":
        if n < 0:
            return self.inverse() ** (-n)
        w = FormalWord()
        for _ in range(n):
            w = w * self
        return w

    def is_identity(self) -> bool:
        return not self.syllables

    def length(self) -> int:
        return sum(abs(e) for _, e in self.syllables)

    def letters(self) -> list[tuple[int, int]]:
        """Expanded single letters as (letter, +1/-1)."""
        out = []
        for l, e in self.syllables:
            s = 1 if e > 0 else -1
            out.extend([(l, s)] * abs(e))
        return out

    def render(self) -> str:
        if not self.syllables:
            return "1"
        parts = []
        for l, e in self.syllables:
            parts.append(f"X{l}" if e == 1 else f"X{l}^{e}")
        return "*".join(parts)


X1 = FormalWord(((1, 1),))
X2 = FormalWord(((2, 1),))
# g1^-1 g2 as a word; its inverse expands the lambda letter used by chains.
LAMBDA_WORD = FormalWord(((1, -1), (2, 1)))


def eval_word(spec: GroupSpec, w: FormalWord, g1, g2):
    """Substitute g1 for X1 and g2 for X2 and multiply out."""
    acc = identity(spec)
    for letter, exp in w.syllables:
        g = g1 if letter == 1 else g2
        acc = g_mul(spec, acc, g_pow(spec, g, exp))
    return acc


def words_cyclic_equal(u: FormalWord, v: FormalWord) -> bool:
    """Equality of letter sequences up to cyclic rotation."""
    a, b = u.letters(), v.letters()
    if len(a) != len(b):
        return False
    if not a:
        return True
    return any(a[i:] + a[:i] == b for i in range(len(a)))


# ---------------------------------------------------------------------------
# Text: lexing, parsing, rendering


def lex(text: str) -> list[tuple[str, object, int]]:
    """Tokenize into (kind, value, pos); kinds: INT NAME OP END."""
    toks = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("INT", int(text[i:j]), i))
            i = j
            continue
        if c.isalpha():
            toks.append(("NAME", c, i))
            i += 1
            continue
        if c in "+-*/^(),":
            toks.append(("OP", c, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {c!r}", text, i)
    toks.append(("END", None, n))
    return toks


def _gen_index(spec: GroupSpec, name: str, text: str, pos: int) -> int:
    try:
        idx = _GEN_NAMES.index(name)
    except ValueError:
        raise UnknownGenerator(f"unknown generator {name!r}", text, pos) from None
    if idx >= num_generators(spec):
        raise UnknownGenerator(
            f"unknown generator {name!r} for group {spec.text()}", text, pos
        )
    return idx


def _parse_exponent(toks, i: int, text: str) -> tuple[int, int]:
    """Parse optional '^' [-] INT; returns (exponent, next index)."""
    if toks[i][:2] == ("OP", "^"):
        i += 1
        sign = 1
        if toks[i][:2] == ("OP", "-"):
            sign = -1
            i += 1
        if toks[i][0] != "INT":
            raise ParseError("expected integer exponent", text, toks[i][2])
        return sign * toks[i][1], i + 1
    return 1, i


def parse_word_tokens(spec: GroupSpec, toks, i: int, text: str):
    """Parse a group word (product of generator powers) from a token stream.

    Stops at the first token that cannot start a factor.  Returns
    (element, next index).  A bare "1" is the identity.
    """
    acc = identity(spec)
    nfactors = 0
    while True:
        kind, val, pos = toks[i]
        if kind == "OP" and val == "*" and nfactors > 0:
            i += 1
            kind, val, pos = toks[i]
        if kind == "NAME":
            if spec.kind == "product":
                raise ParseError(
                    "product group elements must be written as component tuples", text, pos
                )
            gen = _gen_index(spec, val, text, pos)
            exp, i = _parse_exponent(toks, i + 1, text)
            factor = g_pow(spec, generators(spec)[gen], exp)
        elif kind == "INT" and val == 1:
            exp, i = _parse_exponent(toks, i + 1, text)
            factor = identity(spec)
        elif kind == "OP" and val == "(" and spec.kind == "product":
            i += 1
            comps = []
            for fi, fspec in enumerate(spec.factors):
                comp, i = parse_word_tokens(fspec, toks, i, text)
                comps.append(comp)
                if fi < len(spec.factors) - 1:
                    if toks[i][:2] != ("OP", ","):
                        raise ParseError("expected ',' in component tuple", text, toks[i][2])
                    i += 1
            if toks[i][:2] != ("OP", ")"):
                raise ParseError("expected ')' closing component tuple", text, toks[i][2])
            exp, i = _parse_exponent(toks, i + 1, text)
            factor = g_pow(spec, tuple(comps), exp)
        else:
            break
        acc = g_mul(spec, acc, factor)
        nfactors += 1
    if nfactors == 0:
        raise ParseError("expected a group element", text, toks[i][2])
    return acc, i


def parse_group_element(spec: GroupSpec, text: str):
    toks = lex(text)
    elem, i = parse_word_tokens(spec, toks, 0, text)
    if toks[i][0] != "END":
        raise ParseError("trailing input after group element", text, toks[i][2])
    return elem


def _sym_word(spec: GroupSpec, x) -> list[int]:
    """Decompose a permutation into adjacent-transposition generator indices."""
    q = list(x)
    swaps = []
    while True:
        for i in range(len(q) - 1):
            if q[i] > q[i + 1]:
                q[i], q[i + 1] = q[i + 1], q[i]
                swaps.append(i)
                break
        else:
            break
    return swaps[::-1]


def render_element(spec: GroupSpec, x) -> str:
    k = spec.kind
    if x == identity(spec):
        return "1"
    if k == "free":
        parts = [
            _GEN_NAMES[g] if e == 1 else f"{_GEN_NAMES[g]}^{e}" for g, e in x
        ]
        return "*".join(parts)
    if k == "abelian":
        parts = [
            _GEN_NAMES[i] if e == 1 else f"{_GEN_NAMES[i]}^{e}"
            for i, e in enumerate(x)
            if e != 0
        ]
        return "*".join(parts)
    if k == "cyclic":
        return "a" if x == 1 else f"a^{x}"
    if k == "heisenberg":
        cx, cy, cz = x[0], x[1], x[2] - x[0] * x[1]
        parts = []
        for name, e in (("a", cx), ("b", cy), ("c", cz)):
            if e == 1:
                parts.append(name)
            elif e != 0:
                parts.append(f"{name}^{e}")
        return "*".join(parts)
    if k == "sym":
        return "*".join(_GEN_NAMES[i] for i in _sym_word(spec, x))
    return "(" + ",".join(render_element(f, c) for f, c in zip(spec.factors, x)) + ")"


# ---------------------------------------------------------------------------
# Enumeration of short elements and random sampling

# The "radius" is word length for free groups, max-abs coordinate for
# abelian/Heisenberg lattices, and covers the whole group for finite families.


def _shell(spec: GroupSpec, r: int, prev: list | None) -> list:
    k = spec.kind
    if k == "free":
        if r == 0:
            return [()]
        out = []
        for w in prev:
            for gen in range(spec.param):
                for sign in (1, -1):
                    if w and w[-1][0] == gen and (w[-1][1] > 0) != (sign > 0):
                        continue
                    word = list(w)
                    _free_append(word, gen, sign)
                    out.append(tuple(word))
        return sort_elements(spec, set(out))
    if k == "abelian" or k == "heisenberg":
        dim = 3 if k == "heisenberg" else spec.param
        if r == 0:
            return [identity(spec)]
        out = [
            v
            for v in itertools.product(range(-r, r + 1), repeat=dim)
            if max(abs(c) for c in v) == r
        ]
        return sorted(out)
    if k == "cyclic":
        if r == 0:
            return [0]
        if r == 1:
            return list(range(1, spec.param))
        return []
    if k == "sym":
        if r == 0:
            return [identity(spec)]
        if r == 1:
            return sorted(p for p in itertools.permutations(range(spec.param)) if p != identity(spec))
        return []
    # product: tuples whose maximal component radius is exactly r
    balls = [enumerate_ball(f, r) for f in spec.factors]
    full = set(itertools.product(*balls))
    if r > 0:
        inner = set(itertools.product(*[enumerate_ball(f, r - 1) for f in spec.factors]))
        full -= inner
    return sort_elements(spec, full)


def enumerate_ball(spec: GroupSpec, radius: int) -> list:
    """All elements within the given radius, shell by shell, canonical order."""
    out: list = []
    prev = None
    for r in range(radius + 1):
        shell = _shell(spec, r, prev)
        out.extend(shell)
        prev = shell
        if not shell and r > 0:
            break
    return out


def enumerate_elements(spec: GroupSpec, max_radius: int | None = None) -> Iterator:
    """Stream of elements in canonical shell order; finite groups terminate."""
    prev = None
    r = 0
    while max_radius is None or r <= max_radius:
        shell = _shell(spec, r, prev)
        if not shell and r > 0:
            return
        yield from shell
        prev = shell
        r += 1


def random_element(spec: GroupSpec, rng: Random, radius: int = 3):
    k = spec.kind
    if k == "free":
        length = rng.randint(0, radius)
        word: list = []
        for _ in range(length):
            while True:
                gen = rng.randrange(spec.param)
                sign = rng.choice((1, -1))
                if word and word[-1][0] == gen and (word[-1][1] > 0) != (sign > 0):
                    continue
                break
            _free_append(word, gen, sign)
        return tuple(word)
    if k == "abelian":
        return tuple(rng.randint(-radius, radius) for _ in range(spec.param))
    if k == "cyclic":
        return rng.randrange(spec.param)
    if k == "heisenberg":
        return tuple(rng.randint(-radius, radius) for _ in range(3))
    if k == "sym":
        img = list(range(spec.param))
        rng.shuffle(img)
        return tuple(img)
    return tuple(random_element(f, rng, radius) for f in spec.factors)


def check_same_spec(spec: GroupSpec, other: GroupSpec) -> None:
    if spec != other:
        raise GroupMismatch(f"group mismatch: {spec.text()} vs {other.text()}")
