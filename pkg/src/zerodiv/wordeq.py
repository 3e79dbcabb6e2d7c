"""Realizability of a cancellation structure in a concrete target group.

The structure's identities become a system of word equations
g'_i = w * g'_j over the unknown support elements, plus homogeneous linear
constraints over the unknown coefficients.  Deciding realizability layers
three checks:

  1. propagate: spanning-tree substitution; every remaining edge induces a
     cycle word that must evaluate to the identity in the target.
  2. distinctness: within a component the relative words must name pairwise
     distinct group elements (support elements are distinct by definition).
  3. coefficients: the linear system must admit a nowhere-zero solution.

A surviving structure is realized into an explicit witness b, which is
verified by multiplying out before being reported.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import AlgebraElement, SupportTriple
from .cancellation import CancellationStructure, validate_structure
from .errors import PreconditionError, WitnessVerificationFailed
from .groups import (
    FormalWord,
    GroupSpec,
    LAMBDA_WORD,
    X1,
    X2,
    enumerate_elements,
    eval_word,
    group_order,
    is_finite,
)
from .linalg import nowhere_zero_in_span, nullspace
from .scalars import Field


@dataclass(frozen=True)
class Edge:
    """g'_src = word * g'_dst, word a formal word in X1, X2."""

    src: int
    dst: int
    word: FormalWord
    origin: str = ""

    def to_json(self) -> dict:
        return {"src": self.src, "dst": self.dst, "word": self.word.render()}


@dataclass(frozen=True)
class EquationSystem:
    n: int
    edges: tuple[Edge, ...]
    rows: tuple[tuple, ...]  # homogeneous rows over beta_1..beta_n


def build_equation_system(cs: CancellationStructure, triple: SupportTriple) -> EquationSystem:
    """Instantiate the structure's word equations and coefficient rows for
    the given triple (the triple supplies alpha1, alpha2 and the field)."""
    bad = validate_structure(cs)
    if bad:
        raise PreconditionError(f"invalid structure: {bad}")
    field = triple.field
    a1, a2 = triple.alpha1, triple.alpha2
    k_c, k_p, n = cs.k_c, cs.k_p, cs.n
    f, phi, tau = cs.f, cs.phi, cs.tau
    edges: list[Edge] = []
    rows: list[tuple] = []

    def row(entries) -> tuple:
        r = [field.zero] * n
        for idx, c in entries:
            r[idx - 1] = field.add(r[idx - 1], c)
        return tuple(r)

    for i in range(1, k_c + 1):
        edges.append(Edge(f[i - 1], phi[i - 1], X1, f"cancel {i}"))
        rows.append(row([(f[i - 1], field.one), (phi[i - 1], a1)]))
    for i in range(1, k_p + 1):
        pos = k_c + i
        edges.append(Edge(f[pos - 1], phi[pos - 1], X1, f"merge {i}"))
        edges.append(Edge(f[pos - 1], tau[pos - 1], X2, f"merge {i}"))
        rows.append(
            row([(f[pos - 1], field.one), (phi[pos - 1], a1), (tau[pos - 1], a2)])
        )
    for i in range(1, k_c + 1):
        pos = k_c + k_p + i
        edges.append(Edge(f[pos - 1], tau[i - 1], X2, f"survivor {i}"))
        edges.append(Edge(phi[pos - 1], tau[pos - 1], LAMBDA_WORD, f"translate-only {i}"))
        rows.append(row([(f[pos - 1], field.one), (tau[i - 1], a2)]))
        rows.append(row([(phi[pos - 1], a1), (tau[pos - 1], a2)]))
    return EquationSystem(n, tuple(edges), tuple(rows))


# ---------------------------------------------------------------------------
# Layer 1: word propagation


@dataclass(frozen=True)
class PropagationResult:
    ok: bool
    cycle_word: FormalWord | None = None
    failed_edge: Edge | None = None
    # components as (root, {index: word relative to the root}), roots ascending
    components: tuple[tuple[int, dict[int, FormalWord]], ...] = ()


def _dedup_edges(edges) -> list[Edge]:
    seen = set()
    out = []
    for e in edges:
        key = (e.src, e.dst, e.word.syllables)
        if key not in seen:
            seen.add(key)
            out.append(e)
    return out


def propagate(
    sys: EquationSystem,
    spec: GroupSpec,
    g1,
    g2,
    edge_order: list[int] | None = None,
) -> PropagationResult:
    """Spanning-tree substitution plus cycle checks.

    The set of consistent systems does not depend on the edge order; the
    particular failing cycle reported may.  edge_order permutes sys.edges and
    exists for exactly that robustness check.
    """
    edges = list(sys.edges) if edge_order is None else [sys.edges[i] for i in edge_order]
    edges = _dedup_edges(edges)
    adj: dict[int, list[tuple[int, FormalWord, bool]]] = {i: [] for i in range(1, sys.n + 1)}
    for e in edges:
        # forward: standing at src, the dst satisfies g'_dst = word^-1 * g'_src
        adj[e.src].append((e.dst, e.word, True))
        adj[e.dst].append((e.src, e.word, False))

    words: dict[int, FormalWord] = {}
    components: list[tuple[int, dict[int, FormalWord]]] = []
    for root in range(1, sys.n + 1):
        if root in words:
            continue
        comp: dict[int, FormalWord] = {root: FormalWord()}
        words[root] = FormalWord()
        queue = [root]
        while queue:
            u = queue.pop(0)
            for v, w, forward in adj[u]:
                if v in words:
                    continue
                words[v] = (w.inverse() if forward else w) * words[u]
                comp[v] = words[v]
                queue.append(v)
        components.append((root, comp))

    cache: dict = {}

    def ev(w: FormalWord):
        key = w.syllables
        if key not in cache:
            cache[key] = eval_word(spec, w, g1, g2)
        return cache[key]

    from .groups import g_mul

    for e in edges:
        lhs = ev(words[e.src])
        rhs = g_mul(spec, ev(e.word), ev(words[e.dst]))
        if lhs != rhs:
            cyc = words[e.src].inverse() * e.word * words[e.dst]
            return PropagationResult(False, cycle_word=cyc, failed_edge=e)
    return PropagationResult(True, components=tuple(components))


def check_distinctness(
    prop: PropagationResult, spec: GroupSpec, g1, g2
) -> tuple[int, int, FormalWord] | None:
    """Within-component collision (i, j, w_i^-1 w_j) or None when all of the
    relative words evaluate to pairwise distinct elements."""
    for _root, comp in prop.components:
        seen: dict = {}
        for i in sorted(comp):
            val = eval_word(spec, comp[i], g1, g2)
            if val in seen:
                j = seen[val]
            else:
                seen[val] = i
                continue
            return (j, i, comp[j].inverse() * comp[i])
    return None


# ---------------------------------------------------------------------------
# Layer 2: coefficients


@dataclass(frozen=True)
class CoeffResult:
    ok: bool
    witness: tuple | None
    exhaustive: bool
    attempts: int


def _dedup_rows(rows, field: Field) -> list[tuple]:
    seen = set()
    out = []
    for r in rows:
        lead = next((c for c in r if c != field.zero), None)
        if lead is None:
            continue
        inv = field.inv(lead)
        norm = tuple(field.mul(inv, c) for c in r)
        if norm not in seen:
            seen.add(norm)
            out.append(norm)
    return out


def solve_coefficients(sys: EquationSystem, field: Field, seed: int = 0) -> CoeffResult:
    """Does the homogeneous system admit a solution with every coordinate
    nonzero?  Exact over the rationals; over GF(p) exhaustive up to 2^16
    solutions and sampled beyond (attempts reported)."""
    rows = _dedup_rows(sys.rows, field)
    basis = nullspace(rows, sys.n, field)
    vec, exhaustive, attempts = nowhere_zero_in_span(basis, field, seed=seed)
    if vec is None:
        return CoeffResult(False, None, exhaustive, attempts)
    return CoeffResult(True, tuple(vec), exhaustive, attempts)


# ---------------------------------------------------------------------------
# Layer 3: realization and the combined verdict


@dataclass(frozen=True)
class Verdict:
    kind: str  # "word" | "coeff" | "feasible"
    reason: str = ""
    cycle_word: FormalWord | None = None
    witness: AlgebraElement | None = None
    exhaustive: bool | None = None
    attempts: int | None = None

    def to_json(self) -> dict:
        out: dict = {"verdict": self.kind}
        if self.reason:
            out["reason"] = self.reason
        if self.cycle_word is not None:
            out["cycle_word"] = self.cycle_word.render()
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.exhaustive is not None:
            out["exhaustive"] = self.exhaustive
        if self.attempts is not None:
            out["attempts"] = self.attempts
        return out


def _realize_roots(
    prop: PropagationResult, spec: GroupSpec, g1, g2, n: int
) -> dict[int, object] | None:
    """Concrete support elements satisfying every within-component word and
    avoiding collisions across components.

    In an infinite group at most |comp|*|placed| stream elements can collide
    per component, so a greedy sweep within the 10*n^2 attempt budget always
    succeeds.  Finite groups get exhaustive backtracking over root tuples.
    """
    cache: dict = {}

    def ev(w: FormalWord):
        key = w.syllables
        if key not in cache:
            cache[key] = eval_word(spec, w, g1, g2)
        return cache[key]

    from .groups import g_mul

    comps = [
        (root, {i: ev(w) for i, w in sorted(comp.items())})
        for root, comp in prop.components
    ]

    if is_finite(spec) and group_order(spec) <= 5000:
        domain = list(enumerate_elements(spec))

        def backtrack(idx: int, placed: dict[int, object], used: set):
            if idx == len(comps):
                return dict(placed)
            _root, rel = comps[idx]
            for rho in domain:
                vals = {i: g_mul(spec, v, rho) for i, v in rel.items()}
                if len(set(vals.values())) != len(vals):
                    continue
                if any(v in used for v in vals.values()):
                    continue
                placed.update(vals)
                res = backtrack(idx + 1, placed, used | set(vals.values()))
                if res is not None:
                    return res
                for i in vals:
                    placed.pop(i)
            return None

        return backtrack(0, {}, set())

    chosen: dict[int, object] = {}
    used: set = set()
    budget = 10 * n * n
    for _root, rel in comps:
        placed = False
        attempts = 0
        for rho in enumerate_elements(spec):
            attempts += 1
            if attempts > budget:
                break
            vals = {i: g_mul(spec, v, rho) for i, v in rel.items()}
            if any(v in used for v in vals.values()):
                continue
            chosen.update(vals)
            used.update(vals.values())
            placed = True
            break
        if not placed:
            return None
    return chosen


def decide(cs: CancellationStructure, triple: SupportTriple, seed: int = 0) -> Verdict:
    """Word layer, distinctness, coefficients, then witness construction;
    short-circuits at the first failing layer.  A feasible verdict always
    carries a witness that has been verified by direct multiplication."""
    bad = validate_structure(cs)
    if bad:
        raise PreconditionError(f"invalid structure: {bad}")
    spec, field = triple.spec, triple.field
    g1, g2 = triple.g1, triple.g2
    sys = build_equation_system(cs, triple)

    prop = propagate(sys, spec, g1, g2)
    if not prop.ok:
        return Verdict("word", reason="cycle", cycle_word=prop.cycle_word)

    collision = check_distinctness(prop, spec, g1, g2)
    if collision is not None:
        _i, _j, word = collision
        return Verdict("word", reason="support-collision", cycle_word=word)

    coeff = solve_coefficients(sys, field, seed=seed)
    if not coeff.ok:
        return Verdict(
            "coeff",
            reason="no nowhere-zero solution",
            exhaustive=coeff.exhaustive,
            attempts=coeff.attempts,
        )

    placed = _realize_roots(prop, spec, g1, g2, cs.n)
    if placed is None:
        return Verdict("word", reason="support-collision")
    terms = {placed[i]: coeff.witness[i - 1] for i in range(1, cs.n + 1)}
    b = AlgebraElement(spec, field, terms)
    if b.support_size() != cs.n or not (triple.to_element() * b).is_zero():
        raise WitnessVerificationFailed(
            "constructed witness failed verification; this is a bug"
        )
    return Verdict(
        "feasible", witness=b, exhaustive=coeff.exhaustive, attempts=coeff.attempts
    )
