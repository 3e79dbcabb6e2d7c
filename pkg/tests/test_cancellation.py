from random import Random

import pytest

from zerodiv.algebra import as_support_triple, parse_algebra
from zerodiv.cancellation import (
    CancellationStructure,
    build_pair_sets,
    chain_cycles,
    extract_all_relations,
    extract_cycle_relation,
    extract_relation_B,
    extract_relation_M,
    follow_chain,
    recover_shift_permutation,
    recover_structure,
    relation_report,
    replay_instance,
    validate_structure,
)
from zerodiv.errors import (
    FixedPointPresent,
    NotAnnihilating,
    PreconditionError,
)
from zerodiv.groups import FormalWord, eval_word, identity, parse_group_spec, words_cyclic_equal
from zerodiv.scalars import field_from_text
from zerodiv.search import EnumerationPlan, enumerate_structures, random_torsion_instance

CANONICAL = CancellationStructure(2, 1, 0, (2, 1), (1, 2), (2, 1))


def test_validate_examples():
    assert validate_structure(CANONICAL) == []
    bad = CancellationStructure(2, 1, 0, (2, 1), (2, 1), (2, 1))
    assert any("f(1) = phi(1)" in v for v in validate_structure(bad))
    counting = CancellationStructure(3, 1, 0, (1, 2, 3), (2, 3, 1), (3, 1, 2))
    assert any("counting" in v for v in validate_structure(counting))
    not_perm = CancellationStructure(2, 1, 0, (1, 1), (1, 2), (2, 1))
    assert any("not a permutation" in v for v in validate_structure(not_perm))


def test_recover_canonical(c3, Q):
    a = parse_algebra(c3, Q, "1 + a + a^2")
    b = parse_algebra(c3, Q, "1 - a")
    inst = recover_structure(as_support_triple(a), b)
    assert not inst.cycle_case
    cs = inst.structure
    assert (cs.n, cs.k_c, cs.k_p) == (2, 1, 0)
    assert cs.f == (2, 1) and cs.phi == (1, 2) and cs.tau == (2, 1)
    assert inst.support == (0, 1)  # e then g
    assert inst.block_of == {1: 3, 2: 1}
    assert replay_instance(inst, b) == []


def test_recover_sym3_matches_cyclic(Q):
    # the same computation inside the cyclic subgroup generated by a 3-cycle
    s3 = parse_group_spec("sym:3")
    a = parse_algebra(s3, Q, "1 + a*b + b*a")  # 1 + r + r^2 for r = (0 1 2)
    b = parse_algebra(s3, Q, "1 - a*b")
    inst = recover_structure(as_support_triple(a), b)
    cs = inst.structure
    assert (cs.n, cs.k_c, cs.k_p) == (2, 1, 0)
    assert cs.f == (2, 1) and cs.phi == (1, 2) and cs.tau == (2, 1)


def test_recover_not_annihilating(c3, Q):
    a = parse_algebra(c3, Q, "1 + a + a^2")
    b = parse_algebra(c3, Q, "1 + a")
    assert (a * b) == parse_algebra(c3, Q, "2 + 2*a + 2*a^2")
    with pytest.raises(NotAnnihilating):
        recover_structure(as_support_triple(a), b)
    with pytest.raises(PreconditionError):
        recover_structure(as_support_triple(a), parse_algebra(c3, Q, "0"))


def test_pair_sets_canonical():
    ps = build_pair_sets(CANONICAL)
    b_pairs = {(p.first, p.second, p.letter) for p in ps.B}
    m_pairs = {(p.first, p.second, p.letter) for p in ps.M}
    assert b_pairs == {(2, 1, "g1"), (1, 2, "g2")}
    assert m_pairs == {(2, 1, "g2^-1"), (1, 2, "lambda^-1")}
    assert sorted(p.first for p in ps.B) == [1, 2]
    assert sorted(p.first for p in ps.M) == [1, 2]
    assert all(p.first != p.second for p in ps.B + ps.M)


def test_follow_chain_canonical():
    ps = build_pair_sets(CANONICAL)
    trace = follow_chain(ps, "B", 2)
    assert [(p.first, p.second) for p in trace.visited] == [(2, 1), (1, 2)]
    assert (trace.cycle_start, trace.cycle_end) == (0, 1)
    assert trace.cycle_letters() == ["g1", "g2"]


def test_chain_length_bounded():
    for n in (2, 3, 4):
        for cs in enumerate_structures(EnumerationPlan(n)):
            ps = build_pair_sets(cs)
            for which in ("B", "M"):
                for start in range(1, n + 1):
                    trace = follow_chain(ps, which, start)
                    assert len(trace.visited) <= n
                    assert trace.cycle_end - trace.cycle_start + 1 >= 2


def test_extract_relations_canonical(c3):
    rb = extract_relation_B(CANONICAL)
    rm = extract_relation_M(CANONICAL)
    assert rb == FormalWord(((1, 1), (2, 1)))  # X1*X2
    assert rb.render() == "X1*X2"
    assert rm == FormalWord(((2, -2), (1, 1)))  # X2^-2*X1
    assert rm.render() == "X2^-2*X1"
    # evaluate at (g, g^2) in the cyclic group of order 3
    assert eval_word(c3, rb, 1, 2) == 0
    assert eval_word(c3, rm, 1, 2) == 0


def test_pure_block1_cycle_gives_power_of_x1():
    # block-1 pairs chained into each other produce X1^r
    cs = CancellationStructure(
        4, 2, 0, (1, 2, 3, 4), (2, 1, 3, 4), (1, 2, 4, 3)
    )
    assert validate_structure(cs) == []
    rb = extract_relation_B(cs)
    assert rb == FormalWord(((1, 2),))  # X1^2


def test_relation_words_nonempty_and_signed():
    # every enumerated structure through n = 5: B positive, M nonempty reduced
    for n in range(2, 6):
        for cs in enumerate_structures(EnumerationPlan(n)):
            rb = extract_relation_B(cs)
            assert rb.syllables and all(e > 0 for _, e in rb.syllables)
            rm = extract_relation_M(cs)
            assert rm.syllables
            for words in extract_all_relations(cs):
                for w in words:
                    assert w.syllables


def test_chain_cycles_rotation_invariant():
    for n in (2, 3, 4):
        for cs in list(enumerate_structures(EnumerationPlan(n)))[:40]:
            ps = build_pair_sets(cs)
            for which in ("B", "M"):
                cycles = chain_cycles(ps, which)
                for cyc in cycles:
                    word = cyc.relation_word()
                    firsts = {p.first for p in cyc.cycle_pairs()}
                    # entering the same cycle elsewhere rotates the word
                    for start in firsts:
                        other = follow_chain(ps, which, start)
                        assert words_cyclic_equal(other.relation_word(), word)


def test_cycle_case_cyclic4(Q):
    c4 = parse_group_spec("cyclic:4")
    b = parse_algebra(c4, Q, "1 + a + a^2 + a^3")
    assert b.left_translate(1).support() == b.support()
    h = recover_shift_permutation(b, 1)
    assert h == (4, 1, 2, 3)
    word = extract_cycle_relation(h)
    assert word == FormalWord(((1, 4),))
    assert eval_word(c4, word, 1, 2) == 0
    # shifted support fails the precondition
    with pytest.raises(PreconditionError):
        recover_shift_permutation(parse_algebra(c4, Q, "1 + a"), 1)


def test_cycle_case_real_annihilation_gf3(c3):
    gf3 = field_from_text("GF:3")
    a = parse_algebra(c3, gf3, "1 + a + a^2")
    inst = recover_structure(as_support_triple(a), a)  # a*a = 0 over GF(3)
    assert inst.cycle_case
    assert inst.h == (3, 1, 2)
    assert extract_cycle_relation(inst.h) == FormalWord(((1, 3),))
    assert replay_instance(inst, a) == []
    rep = relation_report(as_support_triple(a), a)
    assert rep["cycle_case"] and rep["verified"]


def test_extract_cycle_relation_examples():
    assert extract_cycle_relation((2, 1, 4, 3)) == FormalWord(((1, 2),))
    with pytest.raises(FixedPointPresent):
        extract_cycle_relation((1, 2, 3))
    with pytest.raises(PreconditionError):
        extract_cycle_relation((1, 1, 2))


def test_soundness_on_random_instances(Q):
    rng = Random(101)
    specs = [
        parse_group_spec("cyclic:3"),
        parse_group_spec("sym:3"),
        parse_group_spec("product(cyclic:3,abelian:1)"),
    ]
    for i in range(60):
        spec = specs[i % 3]
        a, b = random_torsion_instance(spec, Q, rng, support=rng.randint(1, 4))
        triple = as_support_triple(a)
        inst = recover_structure(triple, b)
        assert replay_instance(inst, b) == []
        if not inst.cycle_case:
            assert validate_structure(inst.structure) == []
            ident = identity(spec)
            for words in extract_all_relations(inst.structure):
                for w in words:
                    assert eval_word(spec, w, triple.g1, triple.g2) == ident


def test_relation_report_canonical(c3, Q):
    a = parse_algebra(c3, Q, "1 + a + a^2")
    b = parse_algebra(c3, Q, "1 - a")
    rep = relation_report(as_support_triple(a), b, trace=True)
    assert rep["relation_B"] == "X1*X2"
    assert rep["relation_M"] == "X2^-2*X1"
    assert rep["verified"] is True
    assert rep["trace_B"]["letters"] == ["g1", "g2"]
    assert rep["trace_M"]["letters"] == ["g2^-1", "lambda^-1"]
