"""Cancellation structures: how the supports of b, g1*b and g2*b interlock
when (1 + a1*g1 + a2*g2) * b = 0, together with recovery from concrete
annihilations and chain-based extraction of relation words.

Index conventions.  supp(b) is listed in canonical element order as
g'_1 .. g'_n.  Three permutations of {1..n} describe the interlocking,
recorded by the *position* ranges they act on:

  f    enumerates b's own terms: positions 1..k_c are terms whose
       coefficient cancels against the g1-translate (block 1), positions
       k_c+1..k_c+k_p merge with the g1-translate without cancelling
       (block 2), positions k_c+k_p+1..n survive untouched (block 3).
  phi  enumerates the g1-translate's terms in the matching roles; its tail
       positions k_c+k_p+1..n are translate-only terms (block 4).
  tau  enumerates the g2-translate's terms: positions 1..k_c match block-3
       survivors, k_c+1..k_c+k_p match merges, the tail matches block 4.

The identities the positions encode:

  g'_f(i)          = g1 * g'_phi(i)        (1 <= i <= k_c + k_p)
  g'_f(i)          = g2 * g'_tau(i)        (k_c < i <= k_c + k_p)
  g'_f(k_c+k_p+i)  = g2 * g'_tau(i)        (1 <= i <= k_c)
  g'_phi(k_c+k_p+i) = (g1^-1 g2) * g'_tau(k_c+k_p+i)   (1 <= i <= k_c)

Counting forces 2*k_c + k_p = n.  The k_c = 0 situation (no cancellation at
all, so supp(b) is invariant under left translation by g1) is handled by a
separate fixed-point-free permutation h with g'_i = g1 * g'_h(i).
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import AlgebraElement, SupportTriple
from .errors import (
    FixedPointPresent,
    InternalInconsistency,
    NotAnnihilating,
    PreconditionError,
)
from .groups import (
    FormalWord,
    LAMBDA_WORD,
    X1,
    X2,
    eval_word,
    g_inv,
    g_mul,
    identity,
    sort_elements,
)


@dataclass(frozen=True)
class CancellationStructure:
    n: int
    k_c: int
    k_p: int
    f: tuple[int, ...]
    phi: tuple[int, ...]
    tau: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k_c": self.k_c,
            "k_p": self.k_p,
            "f": list(self.f),
            "phi": list(self.phi),
            "tau": list(self.tau),
        }


def _is_perm(p: tuple[int, ...], n: int) -> bool:
    return len(p) == n and sorted(p) == list(range(1, n + 1))


def validate_structure(cs: CancellationStructure) -> list[str]:
    """All violated invariants, as human-readable clauses; empty means valid."""
    v: list[str] = []
    n, k_c, k_p = cs.n, cs.k_c, cs.k_p
    if k_c < 1:
        v.append(f"k_c must be >= 1, got {k_c}")
    if k_p < 0:
        v.append(f"k_p must be >= 0, got {k_p}")
    if 2 * k_c + k_p != n:
        v.append(f"counting: 2*k_c + k_p = {2 * k_c + k_p} != n = {n}")
    for name, p in (("f", cs.f), ("phi", cs.phi), ("tau", cs.tau)):
        if not _is_perm(p, n):
            v.append(f"{name} is not a permutation of 1..{n}")
    if v:
        return v
    f, phi, tau = cs.f, cs.phi, cs.tau
    for i in range(1, k_c + k_p + 1):
        if f[i - 1] == phi[i - 1]:
            v.append(f"f({i}) = phi({i}) = {f[i - 1]} (forces g1 = e)")
    for i in range(1, k_p + 1):
        pos = k_c + i
        if tau[pos - 1] == f[pos - 1]:
            v.append(f"tau({pos}) = f({pos}) = {tau[pos - 1]} (forces g2 = e)")
        if tau[pos - 1] == phi[pos - 1]:
            v.append(f"tau({pos}) = phi({pos}) = {tau[pos - 1]} (forces g1 = g2)")
    for i in range(1, k_c + 1):
        pos = k_c + k_p + i
        if f[pos - 1] == tau[i - 1]:
            v.append(f"f({pos}) = tau({i}) = {f[pos - 1]} (forces g2 = e)")
        if phi[pos - 1] == tau[pos - 1]:
            v.append(f"phi({pos}) = tau({pos}) = {phi[pos - 1]} (forces g1 = g2)")
    return v


# ---------------------------------------------------------------------------
# Recovery from a concrete annihilation


@dataclass(frozen=True)
class RecoveredInstance:
    """Result of replaying a concrete annihilation against the block taxonomy.

    Either `structure` is set (k_c >= 1) or `h` is set (the no-cancellation
    case, a fixed-point-free permutation with g'_i = g1 * g'_h(i)).
    `support` lists g'_1..g'_n; `block_of` gives each index's role as a term
    of b (1 cancelled, 2 merged, 3 survivor).
    """

    triple: SupportTriple
    support: tuple
    structure: CancellationStructure | None = None
    block_of: dict | None = None
    h: tuple[int, ...] | None = None

    @property
    def cycle_case(self) -> bool:
        return self.h is not None

    def beta(self, b: AlgebraElement) -> list:
        return [b.terms[g] for g in self.support]

    def to_json(self) -> dict:
        from .groups import render_element

        spec = self.triple.spec
        out: dict = {
            "n": len(self.support),
            "support": [render_element(spec, g) for g in self.support],
            "cycle_case": self.cycle_case,
        }
        if self.cycle_case:
            out["h"] = list(self.h)
        else:
            out.update(self.structure.to_json())
            out["blocks"] = {str(i): self.block_of[i] for i in sorted(self.block_of)}
        return out


def recover_shift_permutation(b: AlgebraElement, g1) -> tuple[int, ...]:
    """The permutation h with g'_i = g1 * g'_h(i), for supp(g1*b) = supp(b).

    Raises PreconditionError when the translate moves the support.
    """
    if b.is_zero():
        raise PreconditionError("b must be nonzero")
    spec = b.spec
    supp = b.support()
    translated = {g_mul(spec, g1, s) for s in supp}
    if translated != set(supp):
        raise PreconditionError("supp(g1*b) differs from supp(b); no shift permutation")
    index = {g: i + 1 for i, g in enumerate(supp)}
    inv1 = g_inv(spec, g1)
    return tuple(index[g_mul(spec, inv1, g)] for g in supp)


def recover_structure(triple: SupportTriple, b: AlgebraElement) -> RecoveredInstance:
    """Classify every element of supp(b) | supp(g1 b) | supp(g2 b) into the
    four blocks and assemble (f, phi, tau); requires a*b = 0 exactly.
    """
    if b.is_zero():
        raise PreconditionError("b must be nonzero")
    a_el = triple.to_element()
    if not (a_el * b).is_zero():
        raise NotAnnihilating("a*b != 0")
    spec, field = b.spec, b.field
    supp = b.support()
    n = len(supp)
    index = {g: i + 1 for i, g in enumerate(supp)}
    coeff = b.terms
    a1, a2 = triple.alpha1, triple.alpha2
    inv1, inv2 = g_inv(spec, triple.g1), g_inv(spec, triple.g2)

    union = set(supp)
    union.update(g_mul(spec, triple.g1, s) for s in supp)
    union.update(g_mul(spec, triple.g2, s) for s in supp)

    blocks: dict[int, list] = {1: [], 2: [], 3: [], 4: []}
    for x in sort_elements(spec, union):
        p1 = g_mul(spec, inv1, x)
        p2 = g_mul(spec, inv2, x)
        in_b, in_1, in_2 = x in coeff, p1 in coeff, p2 in coeff
        if in_b and in_1:
            s = field.add(coeff[x], field.mul(a1, coeff[p1]))
            if s == field.zero:
                if in_2:
                    raise InternalInconsistency(
                        "cancelled element also met the g2 translate"
                    )
                blocks[1].append(x)
            else:
                if not in_2 or field.add(s, field.mul(a2, coeff[p2])) != field.zero:
                    raise InternalInconsistency("merged element fails the three-way sum")
                blocks[2].append(x)
        elif in_b:
            if not in_2 or field.add(coeff[x], field.mul(a2, coeff[p2])) != field.zero:
                raise InternalInconsistency("surviving b term fails its pairing sum")
            blocks[3].append(x)
        elif in_1:
            if (
                not in_2
                or field.add(field.mul(a1, coeff[p1]), field.mul(a2, coeff[p2]))
                != field.zero
            ):
                raise InternalInconsistency("translate-only element fails its pairing sum")
            blocks[4].append(x)
        else:
            raise InternalInconsistency("element lies only in the g2 translate")

    k_c, k_p = len(blocks[1]), len(blocks[2])
    if k_c == 0:
        h = recover_shift_permutation(b, triple.g1)
        return RecoveredInstance(triple=triple, support=supp, h=h)
    if len(blocks[3]) != k_c or len(blocks[4]) != k_c or 2 * k_c + k_p != n:
        raise InternalInconsistency(
            f"block counts {[len(blocks[i]) for i in (1, 2, 3, 4)]} violate 2*k_c + k_p = n"
        )

    f = [0] * n
    phi = [0] * n
    tau = [0] * n
    for i, x in enumerate(blocks[1]):
        f[i] = index[x]
        phi[i] = index[g_mul(spec, inv1, x)]
    for i, x in enumerate(blocks[2]):
        pos = k_c + i
        f[pos] = index[x]
        phi[pos] = index[g_mul(spec, inv1, x)]
        tau[pos] = index[g_mul(spec, inv2, x)]
    for i, x in enumerate(blocks[3]):
        f[k_c + k_p + i] = index[x]
        tau[i] = index[g_mul(spec, inv2, x)]
    for i, x in enumerate(blocks[4]):
        pos = k_c + k_p + i
        phi[pos] = index[g_mul(spec, inv1, x)]
        tau[pos] = index[g_mul(spec, inv2, x)]

    cs = CancellationStructure(n, k_c, k_p, tuple(f), tuple(phi), tuple(tau))
    bad = validate_structure(cs)
    if bad:
        raise InternalInconsistency(f"recovered structure invalid: {bad}")
    block_of = {index[x]: bl for bl in (1, 2, 3) for x in blocks[bl]}
    return RecoveredInstance(
        triple=triple, support=supp, structure=cs, block_of=block_of
    )


# ---------------------------------------------------------------------------
# Pair sets and chains


@dataclass(frozen=True)
class Pair:
    first: int
    second: int
    block: int  # 1, 2 or 3 within its own set
    letter: str  # "g1" | "g2" | "g2^-1" | "lambda^-1"
    word: FormalWord

    def to_json(self) -> dict:
        return {
            "first": self.first,
            "second": self.second,
            "block": self.block,
            "letter": self.letter,
            "word": self.word.render(),
        }


_LETTERS = {
    "g1": X1,
    "g2": X2,
    "g2^-1": X2.inverse(),
    "lambda^-1": LAMBDA_WORD.inverse(),  # X2^-1 X1
}


@dataclass(frozen=True)
class PairSets:
    """The two successor systems over {1..n}.

    In each set the first coordinates are exactly {1..n}, so "step to the
    pair whose first coordinate is my second coordinate" is deterministic.
    Each pair (x, y) records the identity g'_x = letter * g'_y.
    """

    n: int
    B: tuple[Pair, ...]
    M: tuple[Pair, ...]

    def by_first(self, which: str) -> dict[int, Pair]:
        pairs = self.B if which == "B" else self.M
        return {p.first: p for p in pairs}

    def to_json(self) -> dict:
        return {"B": [p.to_json() for p in self.B], "M": [p.to_json() for p in self.M]}


def build_pair_sets(cs: CancellationStructure) -> PairSets:
    bad = validate_structure(cs)
    if bad:
        raise PreconditionError(f"invalid structure: {bad}")
    k_c, k_p = cs.k_c, cs.k_p
    f, phi, tau = cs.f, cs.phi, cs.tau
    B: list[Pair] = []
    M: list[Pair] = []
    for i in range(1, k_c + 1):
        B.append(Pair(f[i - 1], phi[i - 1], 1, "g1", _LETTERS["g1"]))
    for i in range(1, k_p + 1):
        pos = k_c + i
        B.append(Pair(f[pos - 1], tau[pos - 1], 2, "g2", _LETTERS["g2"]))
    for i in range(1, k_c + 1):
        pos = k_c + k_p + i
        B.append(Pair(f[pos - 1], tau[i - 1], 3, "g2", _LETTERS["g2"]))
    for i in range(1, k_c + 1):
        pos = k_c + k_p + i
        M.append(Pair(tau[i - 1], f[pos - 1], 1, "g2^-1", _LETTERS["g2^-1"]))
    for i in range(1, k_p + 1):
        pos = k_c + i
        M.append(Pair(tau[pos - 1], phi[pos - 1], 2, "lambda^-1", _LETTERS["lambda^-1"]))
    for i in range(1, k_c + 1):
        pos = k_c + k_p + i
        M.append(Pair(tau[pos - 1], phi[pos - 1], 3, "lambda^-1", _LETTERS["lambda^-1"]))
    for name, pairs in (("B", B), ("M", M)):
        firsts = sorted(p.first for p in pairs)
        if firsts != list(range(1, cs.n + 1)):
            raise InternalInconsistency(f"{name} first coordinates are not 1..n")
        if any(p.first == p.second for p in pairs):
            raise InternalInconsistency(f"{name} contains a self-pair")
    return PairSets(cs.n, tuple(B), tuple(M))


@dataclass(frozen=True)
class ChainTrace:
    """A successor walk: pairs visited in order, with the detected cycle
    occupying positions cycle_start..cycle_end (inclusive)."""

    which: str
    visited: tuple[Pair, ...]
    cycle_start: int
    cycle_end: int

    def cycle_pairs(self) -> tuple[Pair, ...]:
        return self.visited[self.cycle_start : self.cycle_end + 1]

    def cycle_letters(self) -> list[str]:
        return [p.letter for p in self.cycle_pairs()]

    def relation_word(self) -> FormalWord:
        w = FormalWord()
        for p in self.cycle_pairs():
            w = w * p.word
        return w

    def to_json(self) -> dict:
        return {
            "which": self.which,
            "visited": [p.to_json() for p in self.visited],
            "cycle_start": self.cycle_start,
            "cycle_end": self.cycle_end,
            "letters": self.cycle_letters(),
            "relation": self.relation_word().render(),
        }


def follow_chain(ps: PairSets, which: str, start_index: int) -> ChainTrace:
    """Walk the successor map from the pair whose first coordinate is
    start_index until a pair repeats; at most n steps."""
    table = ps.by_first(which)
    if start_index not in table:
        raise PreconditionError(f"no {which} pair with first coordinate {start_index}")
    visited: list[Pair] = []
    seen: dict[int, int] = {}
    cur = table[start_index]
    while cur.first not in seen:
        seen[cur.first] = len(visited)
        visited.append(cur)
        cur = table[cur.second]
    start = seen[cur.first]
    return ChainTrace(which, tuple(visited), start, len(visited) - 1)


def chain_cycles(ps: PairSets, which: str) -> list[ChainTrace]:
    """Every cycle of the successor map, one trace each, in canonical order
    (cycles discovered from ascending first coordinates, each trimmed to the
    cycle and rotated to start at its smallest first coordinate)."""
    table = ps.by_first(which)
    done: set[int] = set()
    cycles: list[ChainTrace] = []
    for start in range(1, ps.n + 1):
        if start in done:
            continue
        trace = follow_chain(ps, which, start)
        for p in trace.visited:
            done.add(p.first)
        cycle = list(trace.cycle_pairs())
        if any(p.first in {c.first for c in cyc.cycle_pairs()} for cyc in cycles for p in cycle):
            continue
        rot = min(range(len(cycle)), key=lambda i: cycle[i].first)
        cycle = cycle[rot:] + cycle[:rot]
        cycles.append(ChainTrace(which, tuple(cycle), 0, len(cycle) - 1))
    return cycles


# ---------------------------------------------------------------------------
# Relation words


def extract_relation_B(cs: CancellationStructure) -> FormalWord:
    """Multipliers around the cycle reached from the pair with first
    coordinate f(1); a nonempty positive word in X1, X2."""
    ps = build_pair_sets(cs)
    return follow_chain(ps, "B", cs.f[0]).relation_word()


def extract_relation_M(cs: CancellationStructure) -> FormalWord:
    """Multipliers around the cycle reached from the pair with first
    coordinate tau(1); letters X2^-1 and X2^-1*X1, freely reduced."""
    ps = build_pair_sets(cs)
    return follow_chain(ps, "M", cs.tau[0]).relation_word()


def extract_all_relations(cs: CancellationStructure) -> tuple[list[FormalWord], list[FormalWord]]:
    """Relation words of every cycle of both successor maps."""
    ps = build_pair_sets(cs)
    return (
        [t.relation_word() for t in chain_cycles(ps, "B")],
        [t.relation_word() for t in chain_cycles(ps, "M")],
    )


def extract_cycle_relation(h: tuple[int, ...]) -> FormalWord:
    """X1^r for the no-cancellation case, r the length of h's cycle through 1."""
    n = len(h)
    if sorted(h) != list(range(1, n + 1)):
        raise PreconditionError("h is not a permutation of 1..n")
    if any(h[i - 1] == i for i in range(1, n + 1)):
        raise FixedPointPresent("h has a fixed point (would force g1 = e)")
    r = 1
    j = h[0]
    while j != 1:
        j = h[j - 1]
        r += 1
    return FormalWord(((1, r),))


# ---------------------------------------------------------------------------
# Replay checks and reporting


def replay_instance(inst: RecoveredInstance, b: AlgebraElement) -> list[str]:
    """Re-derive every identity the instance asserts from the raw data;
    returns the failures (empty list when everything replays)."""
    from .wordeq import build_equation_system

    spec, field = b.spec, b.field
    triple = inst.triple
    supp = inst.support
    problems: list[str] = []
    if inst.cycle_case:
        for i in range(1, len(supp) + 1):
            lhs = supp[i - 1]
            rhs = g_mul(spec, triple.g1, supp[inst.h[i - 1] - 1])
            if lhs != rhs:
                problems.append(f"shift identity fails at index {i}")
        word = extract_cycle_relation(inst.h)
        if eval_word(spec, word, triple.g1, triple.g2) != identity(spec):
            problems.append("cycle relation does not evaluate to the identity")
        return problems
    sys = build_equation_system(inst.structure, triple)
    beta = inst.beta(b)
    for e in sys.edges:
        lhs = supp[e.src - 1]
        rhs = g_mul(spec, eval_word(spec, e.word, triple.g1, triple.g2), supp[e.dst - 1])
        if lhs != rhs:
            problems.append(f"word equation {e.src} = {e.word.render()}*{e.dst} fails")
    for row in sys.rows:
        acc = field.zero
        for i, c in enumerate(row):
            acc = field.add(acc, field.mul(c, beta[i]))
        if acc != field.zero:
            problems.append("coefficient identity fails")
    words_b, words_m = extract_all_relations(inst.structure)
    ident = identity(spec)
    for tag, words in (("B", words_b), ("M", words_m)):
        for w in words:
            if eval_word(spec, w, triple.g1, triple.g2) != ident:
                problems.append(f"{tag} relation {w.render()} does not evaluate to e")
    return problems


def relation_report(triple: SupportTriple, b: AlgebraElement, trace: bool = False) -> dict:
    """Full extraction report for one annihilation, as plain JSON data."""
    inst = recover_structure(triple, b)
    spec = triple.spec
    ident = identity(spec)
    out = inst.to_json()
    if inst.cycle_case:
        word = extract_cycle_relation(inst.h)
        out["relation"] = word.render()
        out["verified"] = (
            eval_word(spec, word, triple.g1, triple.g2) == ident
            and not replay_instance(inst, b)
        )
        return out
    cs = inst.structure
    ps = build_pair_sets(cs)
    trace_b = follow_chain(ps, "B", cs.f[0])
    trace_m = follow_chain(ps, "M", cs.tau[0])
    all_b, all_m = extract_all_relations(cs)
    out["relation_B"] = trace_b.relation_word().render()
    out["relation_B_letters"] = trace_b.cycle_letters()
    out["relation_M"] = trace_m.relation_word().render()
    out["relation_M_letters"] = trace_m.cycle_letters()
    out["relations_B_all"] = [w.render() for w in all_b]
    out["relations_M_all"] = [w.render() for w in all_m]
    evals_ok = all(
        eval_word(spec, w, triple.g1, triple.g2) == ident for w in all_b + all_m
    )
    out["verified"] = evals_ok and not replay_instance(inst, b)
    if trace:
        out["trace_B"] = trace_b.to_json()
        out["trace_M"] = trace_m.to_json()
    return out
