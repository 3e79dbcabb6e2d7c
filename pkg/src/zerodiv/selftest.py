"""Seeded randomized invariant suites: field, group and ring axioms, parser
round-trips, and the torsion-oracle soundness loop.  These back the CLI
selftest command and the acceptance tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random

from . import groups
from .algebra import as_support_triple, parse_algebra
from .cancellation import recover_structure, replay_instance
from .groups import GroupSpec, parse_group_spec
from .scalars import Field, field_from_text
from .search import random_algebra_element, random_torsion_instance

SHIPPED_GROUPS = (
    "free:2",
    "abelian:2",
    "cyclic:3",
    "cyclic:4",
    "heisenberg",
    "sym:3",
    "product(cyclic:3,abelian:1)",
)
SHIPPED_FIELDS = ("Q", "GF:2", "GF:7")
TORSION_ORACLE_GROUPS = ("cyclic:3", "sym:3", "product(cyclic:3,abelian:1)")


@dataclass
class SuiteResult:
    name: str
    passed: bool
    cases: int
    detail: str = ""

    def to_json(self) -> dict:
        out = {"suite": self.name, "pass": self.passed, "cases": self.cases}
        if self.detail:
            out["detail"] = self.detail
        return out


def field_axioms(field: Field, rng: Random, cases: int) -> str | None:
    for _ in range(cases):
        x, y, z = (field.random(rng) for _ in range(3))
        if field.add(field.add(x, y), z) != field.add(x, field.add(y, z)):
            return f"additive associativity fails at {x}, {y}, {z}"
        if field.add(x, y) != field.add(y, x) or field.mul(x, y) != field.mul(y, x):
            return f"commutativity fails at {x}, {y}"
        if field.mul(field.mul(x, y), z) != field.mul(x, field.mul(y, z)):
            return f"multiplicative associativity fails at {x}, {y}, {z}"
        if field.mul(x, field.add(y, z)) != field.add(field.mul(x, y), field.mul(x, z)):
            return f"distributivity fails at {x}, {y}, {z}"
        if field.add(x, field.neg(x)) != field.zero:
            return f"additive inverse fails at {x}"
        if x != field.zero and field.mul(x, field.inv(x)) != field.one:
            return f"multiplicative inverse fails at {x}"
    return None


def group_axioms(spec: GroupSpec, rng: Random, cases: int) -> str | None:
    e = groups.identity(spec)
    for _ in range(cases):
        x = groups.random_element(spec, rng)
        y = groups.random_element(spec, rng)
        z = groups.random_element(spec, rng)
        if groups.g_mul(spec, groups.g_mul(spec, x, y), z) != groups.g_mul(
            spec, x, groups.g_mul(spec, y, z)
        ):
            return f"associativity fails in {spec.text()}"
        if groups.g_mul(spec, x, e) != x or groups.g_mul(spec, e, x) != x:
            return f"identity law fails in {spec.text()}"
        if groups.g_mul(spec, x, groups.g_inv(spec, x)) != e:
            return f"inverse law fails in {spec.text()}"
    return None


def torsion_free_powers(spec: GroupSpec, rng: Random, cases: int) -> str | None:
    e = groups.identity(spec)
    for _ in range(cases):
        x = groups.random_element(spec, rng)
        if x == e:
            continue
        acc = e
        for k in range(1, 21):
            acc = groups.g_mul(spec, acc, x)
            if acc == e:
                return f"torsion element of order {k} in {spec.text()}"
    return None


def ring_axioms(spec: GroupSpec, field: Field, rng: Random, cases: int) -> str | None:
    for _ in range(cases):
        x = random_algebra_element(spec, field, rng, support=2)
        y = random_algebra_element(spec, field, rng, support=2)
        z = random_algebra_element(spec, field, rng, support=2)
        if (x * y) * z != x * (y * z):
            return f"associativity fails over {field.text()}[{spec.text()}]"
        if x * (y + z) != x * y + x * z:
            return f"left distributivity fails over {field.text()}[{spec.text()}]"
        if (y + z) * x != y * x + z * x:
            return f"right distributivity fails over {field.text()}[{spec.text()}]"
    return None


def parser_roundtrip(spec: GroupSpec, field: Field, rng: Random, cases: int) -> str | None:
    for _ in range(cases):
        x = random_algebra_element(spec, field, rng, support=rng.randint(0, 4))
        back = parse_algebra(spec, field, x.render())
        if back != x:
            return f"render/parse mismatch: {x.render()!r}"
    return None


def torsion_soundness(rng: Random, instances: int, field_text: str = "Q") -> str | None:
    field = field_from_text(field_text)
    specs = [parse_group_spec(t) for t in TORSION_ORACLE_GROUPS]
    for i in range(instances):
        spec = specs[i % len(specs)]
        a, b = random_torsion_instance(spec, field, rng, support=rng.randint(1, 4))
        triple = as_support_triple(a)
        inst = recover_structure(triple, b)
        problems = replay_instance(inst, b)
        if problems:
            return f"instance over {spec.text()} failed: {problems[0]}"
    return None


def run_all(seed: int, cases: int = 1000) -> list[SuiteResult]:
    results: list[SuiteResult] = []

    rng = Random(seed)
    failures = [
        d
        for ft in SHIPPED_FIELDS
        if (d := field_axioms(field_from_text(ft), rng, cases)) is not None
    ]
    results.append(
        SuiteResult(
            "field-axioms",
            not failures,
            cases * len(SHIPPED_FIELDS),
            failures[0] if failures else "",
        )
    )

    rng = Random(seed + 1)
    failures = []
    for gt in SHIPPED_GROUPS:
        spec = parse_group_spec(gt)
        d = group_axioms(spec, rng, cases)
        if d is None and groups.is_torsion_free(spec):
            d = torsion_free_powers(spec, rng, max(1, cases // 10))
        if d is not None:
            failures.append(d)
    results.append(
        SuiteResult(
            "group-axioms",
            not failures,
            cases * len(SHIPPED_GROUPS),
            failures[0] if failures else "",
        )
    )

    rng = Random(seed + 2)
    failures = []
    for gt in SHIPPED_GROUPS:
        for ft in SHIPPED_FIELDS:
            d = ring_axioms(parse_group_spec(gt), field_from_text(ft), rng, cases)
            if d is not None:
                failures.append(d)
    results.append(
        SuiteResult(
            "ring-axioms",
            not failures,
            cases * len(SHIPPED_GROUPS) * len(SHIPPED_FIELDS),
            failures[0] if failures else "",
        )
    )

    rng = Random(seed + 3)
    round_cases = max(1, cases // 10)
    failures = []
    for gt in SHIPPED_GROUPS:
        for ft in SHIPPED_FIELDS:
            d = parser_roundtrip(parse_group_spec(gt), field_from_text(ft), rng, round_cases)
            if d is not None:
                failures.append(d)
    results.append(
        SuiteResult(
            "parser-roundtrip",
            not failures,
            round_cases * len(SHIPPED_GROUPS) * len(SHIPPED_FIELDS),
            failures[0] if failures else "",
        )
    )

    rng = Random(seed + 4)
    oracle_cases = max(1, cases // 40)
    d = torsion_soundness(rng, oracle_cases)
    results.append(SuiteResult("torsion-oracle", d is None, oracle_cases, d or ""))

    return results
