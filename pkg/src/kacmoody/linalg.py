"""Exact linear algebra over Q.

Sparse matrices are lists of rows, each a dict {column: value}.  Ranks are
computed without fractions: rows are scaled to primitive integer vectors and
eliminated by cross multiplication, choosing pivots by Markowitz count.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


def _primitive(row: dict) -> dict:
    """Scale a rational row to coprime integers (sign unchanged)."""
    if not row:
        return row
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    ints = {c: int(v * den) for c, v in row.items() if v}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        ints = {c: v // g for c, v in ints.items()}
    return ints


def sparse_rank(rows) -> int:
    """Exact rank of a sparse rational matrix given as a list of dict rows."""
    work = {}
    cols: dict = {}
    for i, r in enumerate(rows):
        p = _primitive({c: v for c, v in r.items() if v})
        if p:
            work[i] = p
            for c in p:
                cols.setdefault(c, set()).add(i)
    rank = 0
    while work:
        # Markowitz: among the shortest rows, the entry in the sparsest column
        shortest = min(len(r) for r in work.values())
        best = None
        for i, r in work.items():
            if len(r) != shortest:
                continue
            for c in r:
                cost = (len(r) - 1) * (len(cols[c]) - 1)
                if best is None or cost < best[0]:
                    best = (cost, i, c)
            if best[0] == 0:
                break
        _, pi, pc = best
        prow = work.pop(pi)
        for c in prow:
            cols[c].discard(pi)
        pv = prow[pc]
        rank += 1
        for i in list(cols[pc]):
            row = work[i]
            a = row[pc]
            for c in row:
                cols[c].discard(i)
            new = {c: pv * v for c, v in row.items()}
            for c, v in prow.items():
                nv = new.get(c, 0) - a * v
                if nv:
                    new[c] = nv
                else:
                    new.pop(c, None)
            new = _primitive(new)
            if new:
                work[i] = new
                for c in new:
                    cols.setdefault(c, set()).add(i)
            else:
                del work[i]
    return rank


def to_dense(rows, ncols: int) -> list:
    return [[r.get(c, 0) for c in range(ncols)] for r in rows]


def bareiss_rank(matrix) -> int:
    """Rank by dense fraction-free Bareiss elimination (rows scaled to integers)."""
    M = [list(_primitive({c: v for c, v in enumerate(row) if v}).get(c, 0) for c in range(len(row))) for row in matrix]
    if not M or not M[0]:
        return 0
    m, n = len(M), len(M[0])
    prev = 1
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        for i in range(r + 1, m):
            a = M[i][c]
            for j in range(c, n):
                M[i][j] = (p * M[i][j] - a * M[r][j]) // prev
        prev = p
        r += 1
        if r == m:
            break
    return r


def matmul_sparse(A, B) -> list:
    """Product of sparse row matrices A (m x k) and B (k x n)."""
    out = []
    for row in A:
        acc: dict = {}
        for k, a in row.items():
            for j, b in B[k].items():
                acc[j] = acc.get(j, 0) + a * b
        out.append({j: v for j, v in acc.items() if v})
    return out


# --------------------------------------------------------- dense Fraction ops


def echelon(rows, ncols: int):
    """Reduced row echelon form over Q.

    Returns (reduced nonzero rows, pivot columns, indices of the input rows that
    form a maximal independent subset).
    """
    basis: list = []  # list of (pivot, row) kept reduced
    pivots: list = []
    chosen = []
    for idx, row in enumerate(rows):
        v = [Fraction(x) for x in row]
        for p, b in zip(pivots, basis):
            if v[p]:
                f = v[p]
                v = [x - f * y for x, y in zip(v, b)]
        lead = next((j for j in range(ncols) if v[j]), None)
        if lead is None:
            continue
        f = v[lead]
        v = [x / f for x in v]
        for k, b in enumerate(basis):
            if b[lead]:
                g = b[lead]
                basis[k] = [x - g * y for x, y in zip(b, v)]
        basis.append(v)
        pivots.append(lead)
        chosen.append(idx)
    order = sorted(range(len(pivots)), key=lambda k: pivots[k])
    return [basis[k] for k in order], [pivots[k] for k in order], chosen


def solve_square(M, rhs_cols):
    """Solve M X = R exactly for square invertible M; R given as a list of columns."""
    n = len(M)
    aug = [[Fraction(x) for x in M[i]] + [Fraction(col[i]) for col in rhs_cols] for i in range(n)]
    w = len(aug[0])
    for c in range(n):
        p = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        if piv != 1:
            aug[c] = [x / piv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [[aug[i][n + k] for i in range(n)] for k in range(w - n)]


def rank_dense(M) -> int:
    if not M:
        return 0
    return len(echelon(M, len(M[0]))[1])
