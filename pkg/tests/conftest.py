import itertools

import pytest

from zerodiv.groups import parse_group_spec
from zerodiv.scalars import field_from_text


@pytest.fixture
def Q():
    return field_from_text("Q")


@pytest.fixture
def c3():
    return parse_group_spec("cyclic:3")


@pytest.fixture
def free2():
    return parse_group_spec("free:2")


def brute_force_valid(n, k_c, k_p, f, phi, tau):
    """The five validity clauses, transliterated directly; the independent
    oracle for the enumerator tests."""
    if k_c < 1 or 2 * k_c + k_p != n:
        return False
    for i in range(1, k_c + k_p + 1):
        if f[i - 1] == phi[i - 1]:
            return False
    for i in range(1, k_p + 1):
        pos = k_c + i
        if tau[pos - 1] == f[pos - 1] or tau[pos - 1] == phi[pos - 1]:
            return False
    for i in range(1, k_c + 1):
        pos = k_c + k_p + i
        if f[pos - 1] == tau[i - 1]:
            return False
        if phi[pos - 1] == tau[pos - 1]:
            return False
    return True


def brute_force_structures(n, fix_f=True):
    """All valid (f, phi, tau) triples by raw triple-loop filtering."""
    perms = list(itertools.permutations(range(1, n + 1)))
    id_perm = tuple(range(1, n + 1))
    out = set()
    for k_c in range(1, n // 2 + 1):
        k_p = n - 2 * k_c
        fs = [id_perm] if fix_f else perms
        for f in fs:
            for phi in perms:
                for tau in perms:
                    if brute_force_valid(n, k_c, k_p, f, phi, tau):
                        out.add((n, k_c, k_p, f, phi, tau))
    return out
