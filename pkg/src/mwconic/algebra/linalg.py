"""Exact linear algebra over Z and Q: determinants, rank, integer kernels, char polys."""

from __future__ import annotations

import math
from typing import Sequence

try:
    from gmpy2 import mpq
except ImportError:  # pragma: no cover
    from fractions import Fraction as mpq

IntMatrix = Sequence[Sequence[int]]


def mat_mul(A: IntMatrix, B: IntMatrix) -> list[list[int]]:
    n, k, m = len(A), len(B), len(B[0])
    return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def mat_sub(A: IntMatrix, B: IntMatrix) -> list[list[int]]:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def rational_rank(M) -> int:
    rows = [[mpq(x) for x in row] for row in M]
    rank = 0
    cols = len(rows[0]) if rows else 0
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / pv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        rank += 1
        if r == len(rows):
            break
    return rank


def rational_det(M) -> "mpq":
    rows = [[mpq(x) for x in row] for row in M]
    n = len(rows)
    det = mpq(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if piv is None:
            return mpq(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        det *= rows[c][c]
        inv = 1 / rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] * inv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return det


def int_det(M: IntMatrix) -> int:
    d = rational_det(M)
    assert d.denominator == 1
    return int(d)


def hermite_normal_form(rows: list[list[int]]) -> list[list[int]]:
    """Row-style HNF (nonnegative pivots, entries above pivots reduced)."""
    rows = [r[:] for r in rows if any(r)]
    if not rows:
        return []
    m = len(rows[0])
    out: list[list[int]] = []
    work = rows
    col = 0
    while work and col < m:
        nz = [r for r in work if r[col] != 0]
        rest = [r for r in work if r[col] == 0]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            base = nz[0]
            new = [base]
            for r in nz[1:]:
                q = r[col] // base[col]
                rr = [a - q * b for a, b in zip(r, base)]
                if rr[col] != 0:
                    new.append(rr)
                elif any(rr):
                    rest.append(rr)
            if len(new) == 1:
                break
            nz = new
        pivot = nz[0]
        if pivot[col] < 0:
            pivot = [-x for x in pivot]
        out.append(pivot)
        work = rest
        col += 1
    # reduce entries above pivots
    for i in reversed(range(len(out))):
        pc = next(j for j in range(m) if out[i][j] != 0)
        for k in range(i):
            q = out[k][pc] // out[i][pc]
            if q:
                out[k] = [a - q * b for a, b in zip(out[k], out[i])]
    return out


def integer_kernel(M: IntMatrix) -> list[list[int]]:
    """Z-basis (HNF-reduced rows) of {v : M v = 0}.

    Column-style Hermite reduction with a unimodular transform: kernel vectors
    are the transform columns matching zero columns of the reduced matrix.
    """
    if not M:
        return []
    n_rows, n_cols = len(M), len(M[0])
    # work с columns: A = list of columns; U tracks column ops
    A = [[M[i][j] for i in range(n_rows)] for j in range(n_cols)]
    U = identity(n_cols)  # rows of U = column-vectors (U[j] is j-th column of transform)

    row = 0
    col = 0
    while row < n_rows and col < n_cols:
        # find column with nonzero entry in this row at position >= col
        cand = [j for j in range(col, n_cols) if A[j][row] != 0]
        if not cand:
            row += 1
            continue
        while len(cand) > 1:
            cand.sort(key=lambda j: abs(A[j][row]))
            j0 = cand[0]
            new_cand = [j0]
            for j in cand[1:]:
                q = A[j][row] // A[j0][row]
                A[j] = [a - q * b for a, b in zip(A[j], A[j0])]
                U[j] = [a - q * b for a, b in zip(U[j], U[j0])]
                if A[j][row] != 0:
                    new_cand.append(j)
            cand = new_cand
        j0 = cand[0]
        if j0 != col:
            A[j0], A[col] = A[col], A[j0]
            U[j0], U[col] = U[col], U[j0]
        row += 1
        col += 1

    kernel = [U[j] for j in range(n_cols) if not any(A[j])]
    return hermite_normal_form(kernel)


def char_poly_int(M: IntMatrix) -> list["mpq"]:
    """Characteristic polynomial det(xI - M) via Newton's identities; low-degree first."""
    n = len(M)
    A = [[mpq(x) for x in row] for row in M]
    traces = []
    P = [row[:] for row in A]
    for k in range(1, n + 1):
        traces.append(sum(P[i][i] for i in range(n)))
        if k < n:
            P = [[sum(P[i][t] * A[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
    e = [mpq(1)]
    for k in range(1, n + 1):
        s = mpq(0)
        for i in range(1, k + 1):
            s += ((-1) ** (i - 1)) * e[k - i] * traces[i - 1]
        e.append(s / k)
    # det(xI - M) = x^n - e1 x^(n-1) + e2 x^(n-2) - ...
    out = [mpq(0)] * (n + 1)
    out[n] = mpq(1)
    for k in range(1, n + 1):
        out[n - k] = ((-1) ** k) * e[k]
    return out
