"""Enumeration of cancellation structures, the small-support scan, direct
annihilator search, and generation of torsion oracle instances.

Enumeration order is canonical: splits with larger k_c first, then (f,)
phi, tau ascending lexicographically by image tuple.  Under the default
f = id symmetry every relabeling orbit contributes exactly one
representative; relabeling the unknowns by s sends (f, phi, tau) to
(s*f, s*phi, s*tau) and leaves all validity clauses untouched, so the full
count is exactly n! times the fixed-f count.
"""

from __future__ import annotations

import math
import multiprocessing
import time
from dataclasses import dataclass, field as dc_field
from random import Random
from typing import Callable, Iterator

from .algebra import AlgebraElement, SupportTriple
from .cancellation import CancellationStructure
from .errors import DegenerateC, InputError
from .groups import (
    GroupSpec,
    enumerate_ball,
    g_mul,
    identity,
    random_element,
    sort_elements,
)
from .linalg import nowhere_zero_in_span, nullspace
from .scalars import Field
from .wordeq import decide


# ---------------------------------------------------------------------------
# Structure enumeration


@dataclass(frozen=True)
class EnumerationPlan:
    n: int
    symmetry: str = "fix_f"  # "fix_f" | "full"
    filters: tuple[Callable[[CancellationStructure], bool], ...] = ()

    def __post_init__(self):
        if self.n < 2:
            raise InputError(f"support size must be >= 2, got {self.n}")
        if self.symmetry not in ("fix_f", "full"):
            raise InputError(f"unknown symmetry mode {self.symmetry!r}")


def splits(n: int) -> list[tuple[int, int]]:
    """(k_c, k_p) pairs with 2*k_c + k_p = n and k_c >= 1, larger k_c first."""
    return [(k_c, n - 2 * k_c) for k_c in range(n // 2, 0, -1)]


def _perms_avoiding(n: int, forbidden: dict[int, set[int]]) -> Iterator[tuple[int, ...]]:
    """All permutations of 1..n with image[pos] outside forbidden[pos],
    ascending lexicographically; positions are 1-based."""
    img = [0] * n
    used = [False] * (n + 1)

    def rec(pos: int):
        if pos > n:
            yield tuple(img)
            return
        banned = forbidden.get(pos, ())
        for v in range(1, n + 1):
            if used[v] or v in banned:
                continue
            used[v] = True
            img[pos - 1] = v
            yield from rec(pos + 1)
            used[v] = False

    yield from rec(1)


def _phi_forbidden(n: int, k_c: int, k_p: int, f: tuple[int, ...]) -> dict[int, set[int]]:
    return {pos: {f[pos - 1]} for pos in range(1, k_c + k_p + 1)}


def _tau_forbidden(
    n: int, k_c: int, k_p: int, f: tuple[int, ...], phi: tuple[int, ...]
) -> dict[int, set[int]]:
    forb: dict[int, set[int]] = {}
    for i in range(1, k_c + 1):
        forb[i] = {f[k_c + k_p + i - 1]}
    for i in range(1, k_p + 1):
        pos = k_c + i
        forb[pos] = {f[pos - 1], phi[pos - 1]}
    for i in range(1, k_c + 1):
        pos = k_c + k_p + i
        forb[pos] = {phi[pos - 1]}
    return forb


def enumerate_structures(plan: EnumerationPlan) -> Iterator[CancellationStructure]:
    n = plan.n
    id_perm = tuple(range(1, n + 1))
    for k_c, k_p in splits(n):
        if plan.symmetry == "fix_f":
            fs: Iterator[tuple[int, ...]] = iter((id_perm,))
        else:
            fs = _perms_avoiding(n, {})
        for f in fs:
            for phi in _perms_avoiding(n, _phi_forbidden(n, k_c, k_p, f)):
                for tau in _perms_avoiding(n, _tau_forbidden(n, k_c, k_p, f, phi)):
                    cs = CancellationStructure(n, k_c, k_p, f, phi, tau)
                    if all(flt(cs) for flt in plan.filters):
                        yield cs


def count_candidates(n: int, symmetry: str = "fix_f") -> int:
    """Size of the raw candidate space before the validity clauses."""
    per_split = math.factorial(n) ** (2 if symmetry == "fix_f" else 3)
    return per_split * len(splits(n))


# ---------------------------------------------------------------------------
# Small-support scan


@dataclass
class ScanReport:
    n: int
    structures_total: int
    structures_valid: int
    word_killed: int
    coeff_killed: int
    feasible_count: int
    wall_time: float
    witnesses: list[dict] = dc_field(default_factory=list)
    verdicts: list[dict] | None = None

    def to_json(self, include_verdicts: bool = False) -> dict:
        out = {
            "n": self.n,
            "structures_total": self.structures_total,
            "structures_valid": self.structures_valid,
            "word_killed": self.word_killed,
            "coeff_killed": self.coeff_killed,
            "feasible_count": self.feasible_count,
            "witnesses": self.witnesses,
        }
        if include_verdicts and self.verdicts is not None:
            out["verdicts"] = self.verdicts
        return out


def _structure_seed(base_seed: int, n: int, index: int) -> int:
    return (base_seed * 1_000_003 + n * 10_007 + index) & 0x7FFFFFFF


def _decide_batch(payload) -> tuple[int, int, int, list[dict], list[dict]]:
    triple, items, base_seed, n, keep_verdicts = payload
    word = coeff = feas = 0
    witnesses: list[dict] = []
    verdicts: list[dict] = []
    for index, cs in items:
        verdict = decide(cs, triple, seed=_structure_seed(base_seed, n, index))
        if verdict.kind == "word":
            word += 1
        elif verdict.kind == "coeff":
            coeff += 1
        else:
            feas += 1
            witnesses.append(
                {"structure": cs.to_json(), "witness": verdict.witness.to_json()}
            )
        if keep_verdicts:
            verdicts.append({"structure": cs.to_json(), **verdict.to_json()})
    return word, coeff, feas, witnesses, verdicts


def scan_small_supports(
    triple: SupportTriple,
    n_max: int,
    n_min: int = 2,
    workers: int = 1,
    per_structure: bool = False,
    seed: int = 0,
    symmetry: str = "fix_f",
) -> list[ScanReport]:
    """Run decide() over every enumerated structure for n_min <= n <= n_max.

    Deterministic: identical inputs give identical reports for any worker
    count (work is chunked in canonical order and merged back in order).
    """
    reports = []
    for n in range(max(2, n_min), n_max + 1):
        t0 = time.monotonic()
        structs = list(enumerate_structures(EnumerationPlan(n, symmetry)))
        items = list(enumerate(structs))
        nworkers = max(1, min(workers, len(items))) if items else 1
        if nworkers > 1:
            chunk = (len(items) + nworkers - 1) // nworkers
            payloads = [
                (triple, items[i : i + chunk], seed, n, per_structure)
                for i in range(0, len(items), chunk)
            ]
            with multiprocessing.Pool(nworkers) as pool:
                results = pool.map(_decide_batch, payloads)
        else:
            results = [_decide_batch((triple, items, seed, n, per_structure))]
        word = coeff = feas = 0
        witnesses: list[dict] = []
        verdicts: list[dict] = []
        for w, c, fz, wit, verd in results:
            word += w
            coeff += c
            feas += fz
            witnesses.extend(wit)
            verdicts.extend(verd)
        reports.append(
            ScanReport(
                n=n,
                structures_total=count_candidates(n, symmetry),
                structures_valid=len(structs),
                word_killed=word,
                coeff_killed=coeff,
                feasible_count=feas,
                wall_time=time.monotonic() - t0,
                witnesses=witnesses,
                verdicts=verdicts if per_structure else None,
            )
        )
    return reports


# ---------------------------------------------------------------------------
# Direct annihilator search


def search_annihilator_direct(
    a: AlgebraElement, n_max: int, radius: int, seed: int = 0
) -> AlgebraElement | None:
    """Exhaustive right-annihilator search over supports inside a ball.

    Candidate supports contain the identity (any annihilator can be right-
    translated to one that does) and grow through the ball in canonical
    order; for each support the exact vanishing system is solved and only
    nowhere-zero solutions are accepted.
    """
    import itertools

    if a.support_size() <= 1:
        return None
    spec, field = a.spec, a.field
    e = identity(spec)
    others = [x for x in enumerate_ball(spec, radius) if x != e]
    a_terms = list(a.items_sorted())
    for size in range(1, n_max + 1):
        for combo in itertools.combinations(others, size - 1):
            support = sort_elements(spec, (e,) + combo)
            col = {s: j for j, s in enumerate(support)}
            rows_map: dict = {}
            for t, alpha in a_terms:
                for s in support:
                    prod = g_mul(spec, t, s)
                    row = rows_map.setdefault(prod, [field.zero] * size)
                    row[col[s]] = field.add(row[col[s]], alpha)
            basis = nullspace(list(rows_map.values()), size, field)
            vec, _, _ = nowhere_zero_in_span(basis, field, seed=seed)
            if vec is None:
                continue
            b = AlgebraElement(spec, field, dict(zip(support, vec)))
            if b.support_size() == size and (a * b).is_zero():
                return b
    return None


# ---------------------------------------------------------------------------
# Torsion oracle instances


def order3_element(spec: GroupSpec):
    """A canonical element of order 3, or None if the family has none."""
    if spec.kind == "cyclic" and spec.param % 3 == 0:
        return spec.param // 3
    if spec.kind == "sym" and spec.param >= 3:
        return (1, 2, 0) + tuple(range(3, spec.param))
    if spec.kind == "product":
        for i, f in enumerate(spec.factors):
            h = order3_element(f)
            if h is not None:
                return tuple(
                    h if j == i else identity(g) for j, g in enumerate(spec.factors)
                )
    return None


def random_algebra_element(
    spec: GroupSpec, field: Field, rng: Random, support: int, radius: int = 2
) -> AlgebraElement:
    elems: set = set()
    guard = 0
    while len(elems) < support:
        elems.add(random_element(spec, rng, radius))
        guard += 1
        if guard > 100 * support:
            break
    return AlgebraElement(
        spec, field, {g: field.random(rng, nonzero=True) for g in elems}
    )


def make_torsion_instance(
    spec: GroupSpec, field: Field, c: AlgebraElement
) -> tuple[AlgebraElement, AlgebraElement]:
    """(a, b) with a = 1 + h + h^2 for an order-3 element h and b = (1-h)*c;
    then a*b = (1 - h^3)*c = 0.  Raises DegenerateC when (1-h)*c = 0."""
    h = order3_element(spec)
    if h is None:
        raise InputError(f"group {spec.text()} has no element of order 3")
    e = identity(spec)
    a = AlgebraElement(
        spec, field, {e: field.one, h: field.one, g_mul(spec, h, h): field.one}
    )
    left = AlgebraElement(spec, field, {e: field.one, h: field.neg(field.one)})
    b = left * c
    if b.is_zero():
        raise DegenerateC("(1 - h) * c collapsed to zero")
    return a, b


def random_torsion_instance(
    spec: GroupSpec,
    field: Field,
    rng: Random,
    support: int = 3,
    radius: int = 2,
    max_retries: int = 50,
) -> tuple[AlgebraElement, AlgebraElement]:
    """make_torsion_instance with fresh random cofactors until nondegenerate."""
    for _ in range(max_retries):
        c = random_algebra_element(spec, field, rng, support, radius)
        try:
            return make_torsion_instance(spec, field, c)
        except DegenerateC:
            continue
    raise DegenerateC(f"no nondegenerate cofactor found in {max_retries} tries")
