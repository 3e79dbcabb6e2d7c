"""Exact dense linear algebra over a Field: nullspace bases and nowhere-zero
vectors in a span.  Matrices here are tiny (at most a few dozen rows), so
plain Gauss-Jordan elimination with exact division is all that is needed.
"""

from __future__ import annotations

import itertools
from random import Random

from .scalars import Field, PrimeField

ENUM_LIMIT = 1 << 16
SAMPLE_TRIALS = 10_000


def nullspace(rows: list, n: int, field: Field) -> list[list]:
    """Basis of the right nullspace of the given row system (n unknowns)."""
    m = [list(r) for r in rows if any(c != field.zero for c in r)]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != field.zero), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(inv, v) for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != field.zero:
                factor = m[i][c]
                m[i] = [field.sub(v, field.mul(factor, w)) for v, w in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free_cols = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free_cols:
        v = [field.zero] * n
        v[fc] = field.one
        for ri, pc in enumerate(pivots):
            v[pc] = field.neg(m[ri][fc])
        basis.append(v)
    return basis


def _combine(basis: list[list], coeffs, field: Field) -> list:
    n = len(basis[0])
    v = [field.zero] * n
    for c, b in zip(coeffs, basis):
        if c == field.zero:
            continue
        for i in range(n):
            v[i] = field.add(v[i], field.mul(c, b[i]))
    return v


def nowhere_zero_in_span(
    basis: list[list],
    field: Field,
    seed: int = 0,
    enum_limit: int = ENUM_LIMIT,
    trials: int = SAMPLE_TRIALS,
) -> tuple[list | None, bool, int]:
    """A vector in the span with every coordinate nonzero, if one exists.

    Returns (vector or None, exhaustive, attempts).  Over the rationals the
    answer is exact: no coordinate may vanish identically on the span, and a
    Vandermonde-style sweep then hits a witness within a provable bound.
    Over GF(p) the span is enumerated when small enough, otherwise sampled;
    a None with exhaustive=False is only probabilistic.
    """
    if not basis:
        return None, True, 0
    n = len(basis[0])
    k = len(basis)
    if any(all(b[i] == field.zero for b in basis) for i in range(n)):
        return None, True, 0
    if isinstance(field, PrimeField):
        p = field.p
        if p**k <= enum_limit:
            count = 0
            for coeffs in itertools.product(range(p), repeat=k):
                if all(c == 0 for c in coeffs):
                    continue
                count += 1
                v = _combine(basis, coeffs, field)
                if all(c != field.zero for c in v):
                    return v, True, count
            return None, True, count
        rng = Random(seed)
        for t in range(1, trials + 1):
            coeffs = [rng.randrange(p) for _ in range(k)]
            if all(c == 0 for c in coeffs):
                continue
            v = _combine(basis, coeffs, field)
            if all(c != field.zero for c in v):
                return v, False, t
        return None, False, trials
    # rationals: coordinate i along (1, t, t^2, ...) is a nonzero polynomial
    # in t of degree < k, so at most n*(k-1) sweep values can fail
    bound = n * max(k - 1, 0) + 1
    for t in range(1, bound + 1):
        coeffs = [field.one]
        for _ in range(k - 1):
            coeffs.append(field.mul(coeffs[-1], field.check(t)))
        v = _combine(basis, coeffs, field)
        if all(c != field.zero for c in v):
            return v, True, t
    return None, True, bound
