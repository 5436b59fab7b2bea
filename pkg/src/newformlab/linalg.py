"""Exact linear algebra over cyclotomic fields (small dense matrices).

>>> from newformlab.cyclotomic import Cyclotomic
>>> z = Cyclotomic.root(3, 1)
>>> rank([[1, z], [z, z * z]])
1
"""
from __future__ import annotations

from typing import Sequence

from .cyclotomic import Cyclotomic, lcm

__all__ = ["as_matrix", "rref", "rank", "nullspace", "row_space_equal", "mat_vec", "mat_mul"]


def _common_order(rows) -> int:
    M = 1
    for row in rows:
        for x in row:
            M = lcm(M, x.order)
    return M


def as_matrix(rows: Sequence[Sequence]) -> list[list[Cyclotomic]]:
    """Coerce entries to Cyclotomic and lift them to one common order."""
    out = [[Cyclotomic.coerce(x) for x in row] for row in rows]
    M = _common_order(out)
    return [[x.lift(M) for x in row] for row in out]


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Cyclotomic]], list[int]]:
    A = as_matrix(rows)
    if not A:
        return [], []
    ncols = len(A[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if not A[i][c].is_zero()), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = A[r][c].inverse()
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and not A[i][c].is_zero():
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[list[Cyclotomic]]:
    """Basis of {x : A x = 0} as a list of vectors."""
    if not rows:
        assert ncols is not None
        return [[Cyclotomic.rational(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    R, piv = rref(rows)
    n = len(rows[0])
    free = [c for c in range(n) if c not in piv]
    basis = []
    for fcol in free:
        v = [Cyclotomic.rational(0)] * n
        v[fcol] = Cyclotomic.rational(1)
        for i, pc in enumerate(piv):
            v[pc] = -R[i][fcol]
        basis.append(v)
    return basis


def row_space_equal(U: Sequence[Sequence], V: Sequence[Sequence]) -> bool:
    """Do the rows of U and V span the same space?"""
    ru, rv = rank(U) if U else 0, rank(V) if V else 0
    if ru != rv:
        return False
    if ru == 0:
        return True
    return rank(list(U) + list(V)) == ru


def mat_vec(A: Sequence[Sequence], v: Sequence) -> list[Cyclotomic]:
    return [sum((Cyclotomic.coerce(a) * b for a, b in zip(row, v)), Cyclotomic.rational(0)) for row in A]


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list[Cyclotomic]]:
    cols = list(zip(*B))
    return [[sum((Cyclotomic.coerce(a) * b for a, b in zip(row, col)), Cyclotomic.rational(0)) for col in cols] for row in A]
