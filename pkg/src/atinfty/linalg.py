"""Exact rank and kernel computations.

Over the rationals rows are scaled to integers and ranks come from
fraction-free (Bareiss) elimination, which keeps intermediate entries as
minors of the original matrix and avoids gcd blow-up.  Over finite fields
plain Gaussian elimination is used.  A memoized minor-expansion oracle is
provided for cross-checking ranks of small matrices by an independent
method.
"""

from __future__ import annotations

from math import gcd
from typing import List, Sequence

from .fields import Field, Fv, QQ


def _rows_to_int(rows: Sequence[Sequence[Fv]]) -> List[List[int]]:
    """Scale each rational row to integers (row scaling preserves rank)."""
    out = []
    for row in rows:
        den = 1
        for v in row:
            d = v.payload.denominator
            den = den * d // gcd(den, d)
        ints = [int(v.payload * den) for v in row]
        g = 0
        for x in ints:
            g = gcd(g, abs(x))
        if g > 1:
            ints = [x // g for x in ints]
        out.append(ints)
    return out


def bareiss_rank(mat: List[List[int]]) -> int:
    """Rank of an integer matrix by fraction-free elimination."""
    m = [row[:] for row in mat]
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev = 1
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                m[i][j] = (m[i][j] * m[r][c] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        rank += 1
        r += 1
        if r == nrows:
            break
    return rank


def _gauss_rank(rows: Sequence[Sequence[Fv]], field: Field) -> int:
    m = [list(row) for row in rows]
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if not m[i][c].is_zero()), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inv()
        for i in range(r + 1, nrows):
            if not m[i][c].is_zero():
                f = m[i][c] * inv
                for j in range(c, ncols):
                    m[i][j] = m[i][j] - f * m[r][j]
        rank += 1
        r += 1
        if r == nrows:
            break
    return rank


def exact_rank(rows: Sequence[Sequence[Fv]], field: Field) -> int:
    if not rows:
        return 0
    if field == QQ:
        return bareiss_rank(_rows_to_int(rows))
    return _gauss_rank(rows, field)


def row_basis_indices(rows: Sequence[Sequence[Fv]], field: Field) -> List[int]:
    """Indices of a maximal linearly independent subset of rows (first wins)."""
    picked: List[int] = []
    basis: List[List[Fv]] = []
    for i, row in enumerate(rows):
        cand = basis + [list(row)]
        if exact_rank(cand, field) > len(basis):
            basis = cand
            picked.append(i)
    return picked


def rref_kernel(rows: Sequence[Sequence[Fv]], field: Field, ncols: int) -> List[List[Fv]]:
    """Basis of the right kernel of the matrix, via reduced row echelon form."""
    m = [list(r) for r in rows]
    zero, one = field.zero(), field.one()
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if not m[i][c].is_zero()), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inv()
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    kernel = []
    for fc in free:
        vec = [zero] * ncols
        vec[fc] = one
        for rr, pc in enumerate(pivots):
            vec[pc] = -m[rr][fc]
        kernel.append(vec)
    return kernel


def rank_by_minors(rows: Sequence[Sequence[Fv]], field: Field) -> int:
    """Largest k with a nonzero k x k minor, by memoized Laplace expansion.

    Independent of the elimination code path; intended for matrices with
    at most 8 rows and columns.
    """
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    if nrows == 0 or ncols == 0:
        return 0
    memo: dict = {}

    def minor(rset: tuple, cset: tuple) -> Fv:
        if len(rset) == 1:
            return rows[rset[0]][cset[0]]
        key = (rset, cset)
        got = memo.get(key)
        if got is not None:
            return got
        r = rset[-1]
        acc = field.zero()
        sign = 1 if len(cset) % 2 == 1 else -1
        for pos, c in enumerate(cset):
            a = rows[r][c]
            if not a.is_zero():
                sub = minor(rset[:-1], cset[:pos] + cset[pos + 1 :])
                term = a * sub
                acc = acc + term if sign > 0 else acc - term
            sign = -sign
        memo[key] = acc
        return acc

    from itertools import combinations

    for k in range(min(nrows, ncols), 0, -1):
        for rset in combinations(range(nrows), k):
            for cset in combinations(range(ncols), k):
                if not minor(rset, cset).is_zero():
                    return k
    return 0
