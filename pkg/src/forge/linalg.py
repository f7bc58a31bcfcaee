"""Exact linear algebra over the rationals (sparse row reduction)."""
from __future__ import annotations

from .graded import rational


def det(m) -> rational:
    a = [[rational(v) for v in row] for row in m]
    n = len(a)
    out = rational(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return rational(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            out = -out
        out *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                for k in range(c, n):
                    a[r][k] -= f * a[c][k]
    return out


def inverse(m):
    n = len(m)
    a = [[rational(v) for v in row] + [rational(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [v / p for v in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [v - f * w for v, w in zip(a[r], a[c])]
    return [row[n:] for row in a]


def matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), rational(0)) for j in range(len(b[0]))]
            for i in range(len(a))]


def transpose(m):
    return [list(r) for r in zip(*m)]


def rank_sparse(columns) -> int:
    """Rank of a matrix given as a list of sparse column dicts {row: value}."""
    pivots = {}  # pivot row -> reduced column
    rank = 0
    for col in columns:
        v = {r: rational(c) for r, c in col.items() if c}
        while v:
            r = min(v)
            if r in pivots:
                pc = pivots[r]
                f = v[r] / pc[r]
                for rr, cc in pc.items():
                    nv = v.get(rr, 0) - f * cc
                    if nv:
                        v[rr] = nv
                    else:
                        v.pop(rr, None)
            else:
                pivots[r] = v
                rank += 1
                break
    return rank


def solve_sparse(columns, target):
    """Find x with sum_j x_j columns[j] = target, or None if inconsistent.

    Columns and target are sparse dicts {row: value}.
    """
    pivots = {}  # pivot row -> (reduced column, combination dict)
    for j, col in enumerate(columns):
        v = {r: rational(c) for r, c in col.items() if c}
        comb = {j: rational(1)}
        while v:
            r = min(v)
            if r not in pivots:
                pivots[r] = (v, comb)
                break
            pc, pcomb = pivots[r]
            f = v[r] / pc[r]
            for rr, cc in pc.items():
                nv = v.get(rr, 0) - f * cc
                if nv:
                    v[rr] = nv
                else:
                    v.pop(rr, None)
            for jj, cc in pcomb.items():
                nv = comb.get(jj, 0) - f * cc
                if nv:
                    comb[jj] = nv
                else:
                    comb.pop(jj, None)
    v = {r: rational(c) for r, c in target.items() if c}
    sol = {}
    while v:
        r = min(v)
        if r not in pivots:
            return None
        pc, pcomb = pivots[r]
        f = v[r] / pc[r]
        for rr, cc in pc.items():
            nv = v.get(rr, 0) - f * cc
            if nv:
                v[rr] = nv
            else:
                v.pop(rr, None)
        for jj, cc in pcomb.items():
            sol[jj] = sol.get(jj, 0) + f * cc
    return {j: c for j, c in sol.items() if c}
