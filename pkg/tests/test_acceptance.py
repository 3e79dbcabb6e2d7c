"""Acceptance criteria, one test each, every assertion exact (no tolerances:
all arithmetic is exact).  Each test prints one PASS/FAIL line; run with
`pytest tests/test_acceptance.py -v -s` to see them.
"""

import itertools
import json
import math
import os
import subprocess
import sys
import time
from random import Random

from conftest import brute_force_structures
from zerodiv.algebra import as_support_triple, parse_algebra
from zerodiv.cancellation import (
    extract_all_relations,
    extract_cycle_relation,
    extract_relation_B,
    extract_relation_M,
    recover_shift_permutation,
    recover_structure,
    replay_instance,
    validate_structure,
)
from zerodiv.groups import (
    FormalWord,
    enumerate_ball,
    eval_word,
    g_mul,
    identity,
    parse_group_spec,
)
from zerodiv.scalars import field_from_text
from zerodiv.search import (
    EnumerationPlan,
    enumerate_structures,
    random_torsion_instance,
    scan_small_supports,
)
from zerodiv.selftest import run_all

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def report(num: int, name: str, ok: bool, elapsed: float, limit: float) -> None:
    status = "PASS" if ok and elapsed < limit else "FAIL"
    print(f"[criterion {num}] {status} {name} ({elapsed:.2f}s, limit {limit:.0f}s)")
    assert ok, f"criterion {num} ({name}) failed"
    assert elapsed < limit, f"criterion {num} exceeded {limit}s: {elapsed:.2f}s"


def test_criterion_1_canonical_instance(Q, c3):
    t0 = time.monotonic()
    a = parse_algebra(c3, Q, "1 + a + a^2")
    b = parse_algebra(c3, Q, "1 - a")
    triple = as_support_triple(a)
    inst = recover_structure(triple, b)
    ok = not inst.cycle_case
    cs = inst.structure
    ok = ok and (cs.n, cs.k_c, cs.k_p) == (2, 1, 0)
    rb = extract_relation_B(cs)
    rm = extract_relation_M(cs)
    ok = ok and rb == FormalWord(((1, 1), (2, 1)))
    ok = ok and rm == FormalWord(((2, -2), (1, 1)))
    e = identity(c3)
    ok = ok and eval_word(c3, rb, triple.g1, triple.g2) == e
    ok = ok and eval_word(c3, rm, triple.g1, triple.g2) == e
    report(1, "canonical instance", ok, time.monotonic() - t0, 1.0)


def test_criterion_2_randomized_soundness(Q):
    t0 = time.monotonic()
    rng = Random(20240)
    specs = [
        parse_group_spec("cyclic:3"),
        parse_group_spec("sym:3"),
        parse_group_spec("product(cyclic:3,abelian:1)"),
    ]
    ok = True
    max_n = 0
    for i in range(200):
        spec = specs[i % 3]
        a, b = random_torsion_instance(spec, Q, rng, support=rng.randint(1, 6), radius=3)
        triple = as_support_triple(a)
        inst = recover_structure(triple, b)
        max_n = max(max_n, len(inst.support))
        if replay_instance(inst, b):
            ok = False
            break
        e = identity(spec)
        if inst.cycle_case:
            word = extract_cycle_relation(inst.h)
            ok = ok and eval_word(spec, word, triple.g1, triple.g2) == e
        else:
            if validate_structure(inst.structure):
                ok = False
                break
            for words in extract_all_relations(inst.structure):
                for w in words:
                    if eval_word(spec, w, triple.g1, triple.g2) != e:
                        ok = False
        if not ok:
            break
    ok = ok and max_n >= 8  # instances genuinely reach double-digit sizes
    report(2, f"200 torsion instances (max n = {max_n})", ok, time.monotonic() - t0, 60.0)


def test_criterion_3_no_cancellation_branch(Q):
    t0 = time.monotonic()
    c4 = parse_group_spec("cyclic:4")
    b = parse_algebra(c4, Q, "1 + a + a^2 + a^3")
    g1 = 1
    ok = b.left_translate(g1).support() == b.support()
    h = recover_shift_permutation(b, g1)
    # single 4-cycle
    seen, j = [1], h[0]
    while j != 1:
        seen.append(j)
        j = h[j - 1]
    ok = ok and len(seen) == 4
    word = extract_cycle_relation(h)
    ok = ok and word == FormalWord(((1, 4),))
    ok = ok and eval_word(c4, word, g1, 2) == 0

    # the infinite cyclic group admits no translation-invariant support:
    # exhaust every support of size <= 5 drawn from words of length <= 4
    z = parse_group_spec("free:1")
    ball = enumerate_ball(z, 4)
    gen = ((0, 1),)
    for size in range(1, 6):
        for S in itertools.combinations(ball, size):
            if {g_mul(z, gen, s) for s in S} == set(S):
                ok = False
    report(3, "no-cancellation branch", ok, time.monotonic() - t0, 30.0)


def test_criterion_4_free_group_infeasibility():
    t0 = time.monotonic()
    free = parse_group_spec("free:2")
    ok = True
    for field_text in ("Q", "GF:2"):
        field = field_from_text(field_text)
        triple = as_support_triple(parse_algebra(free, field, "1 + a + b"))
        reports = scan_small_supports(triple, 5, per_structure=True)
        for rep in reports:
            ok = ok and rep.feasible_count == 0
            ok = ok and rep.word_killed + rep.coeff_killed == rep.structures_valid
            for verdict in rep.verdicts:
                if verdict["verdict"] == "word":
                    ok = ok and verdict.get("cycle_word") not in (None, "", "1")
                else:
                    ok = ok and verdict["verdict"] == "coeff"
    report(4, "free:2 scan n <= 5 over Q and GF:2", ok, time.monotonic() - t0, 600.0)


def test_criterion_5_integer_lattice_domain_sanity(Q):
    t0 = time.monotonic()
    z = parse_group_spec("abelian:1")
    triple = as_support_triple(parse_algebra(z, Q, "1 + a + a^2"))
    reports = scan_small_supports(triple, 4)
    ok = all(rep.feasible_count == 0 for rep in reports)
    report(5, "integer lattice scan n <= 4: no witness", ok, time.monotonic() - t0, 60.0)


def test_criterion_5_coefficient_layer_reached(Q):
    # Stated expectation: some structure passes the word layer and dies on
    # coefficients.  For a = 1 + t + t^2 in the integer lattice every support
    # index carries an equation e_i = c + e_j with c in {1, 2}, so the chain
    # of these equations closes a cycle of positive total and the word layer
    # already kills every structure.  Kept as stated; see the scan counts.
    t0 = time.monotonic()
    z = parse_group_spec("abelian:1")
    triple = as_support_triple(parse_algebra(z, Q, "1 + a + a^2"))
    reports = scan_small_supports(triple, 4)
    coeff_reached = sum(rep.coeff_killed for rep in reports)
    report(
        5,
        f"integer lattice scan: coefficient layer reached ({coeff_reached} structures)",
        coeff_reached >= 1,
        time.monotonic() - t0,
        60.0,
    )


def test_criterion_6_enumerator_oracle_equivalence():
    t0 = time.monotonic()
    ok = True
    for n in (2, 3, 4):
        fixed = {
            (cs.n, cs.k_c, cs.k_p, cs.f, cs.phi, cs.tau)
            for cs in enumerate_structures(EnumerationPlan(n))
        }
        full = {
            (cs.n, cs.k_c, cs.k_p, cs.f, cs.phi, cs.tau)
            for cs in enumerate_structures(EnumerationPlan(n, "full"))
        }
        ok = ok and fixed == brute_force_structures(n, fix_f=True)
        ok = ok and full == brute_force_structures(n, fix_f=False)
        ok = ok and len(full) == math.factorial(n) * len(fixed)
    report(6, "enumerator equals brute force (n = 2, 3, 4)", ok, time.monotonic() - t0, 60.0)


def test_criterion_7_arithmetic_axiom_suites():
    t0 = time.monotonic()
    results = run_all(seed=0, cases=1000)
    ok = all(r.passed for r in results)
    names = ", ".join(r.name for r in results)
    report(7, f"axiom suites ({names})", ok, time.monotonic() - t0, 30.0)


def test_criterion_8_scan_determinism_across_workers():
    t0 = time.monotonic()

    def run(workers: str) -> subprocess.CompletedProcess:
        env = dict(os.environ)
        env["PYTHONPATH"] = os.path.join(ROOT, "src") + os.pathsep + env.get("PYTHONPATH", "")
        return subprocess.run(
            [
                sys.executable, "-m", "zerodiv",
                "--group", "free:2", "--workers", workers,
                "scan", "1 + a + b", "--n-max", "4",
            ],
            capture_output=True,
            text=True,
            env=env,
        )

    one, eight = run("1"), run("8")
    ok = one.returncode == 0 and eight.returncode == 0
    ok = ok and one.stdout == eight.stdout and one.stdout
    for line in one.stdout.splitlines():
        json.loads(line)
    report(8, "byte-identical scan JSON for 1 vs 8 workers", ok, time.monotonic() - t0, 60.0)
