"""Exact linear algebra over the rationals and the integers.

Small dense problems only (dimensions up to a few hundred): Gaussian
elimination with Fraction entries and an integer Smith normal form with
unimodular transforms.  Everything returns plain lists so callers can stay
exact or convert to numpy at the float boundary.
"""
from __future__ import annotations

from fractions import Fraction

Matrix = list[list[Fraction]]


def rref(mat: Matrix) -> list[int]:
    """Reduce ``mat`` in place to reduced row echelon form.

    Returns the list of pivot column indices.
    """
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, rows):
            if mat[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        inv = Fraction(1) / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(rows):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return pivots


def rank(mat: Matrix) -> int:
    m = [row[:] for row in mat]
    return len(rref(m))


def nullspace(mat: Matrix) -> list[list[Fraction]]:
    """Basis of the right kernel, one vector per free column."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    m = [row[:] for row in mat]
    pivots = rref(m)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][fc]
        basis.append(v)
    return basis


def solve(mat: Matrix, rhs: list[Fraction]) -> list[Fraction] | None:
    """One exact solution of ``mat x = rhs``, or None if inconsistent.

    Free variables are set to zero.
    """
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    aug = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    pivots = rref(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for r, pc in enumerate(pivots):
        x[pc] = aug[r][cols]
    for i in range(rows):
        acc = sum((mat[i][j] * x[j] for j in range(cols)), Fraction(0))
        if acc != rhs[i]:
            return None
    return x


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    return [
        [sum((a[i][t] * b[t][j] for t in range(k)), Fraction(0)) for j in range(m)]
        for i in range(n)
    ]


def identity_int(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(
    mat: list[list[int]],
) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Integer Smith normal form: returns (U, S, V) with U @ mat @ V = S.

    U and V are unimodular; S is diagonal with nonnegative entries, each
    dividing the next.
    """
    M = [row[:] for row in mat]
    m = len(M)
    n = len(M[0]) if m else 0
    U = identity_int(m)
    V = identity_int(n)

    def row_add(i: int, j: int, c: int) -> None:
        M[i] = [a + c * b for a, b in zip(M[i], M[j])]
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]

    def row_swap(i: int, j: int) -> None:
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]

    def col_add(i: int, j: int, c: int) -> None:
        for r in range(m):
            M[r][i] += c * M[r][j]
        for r in range(n):
            V[r][i] += c * V[r][j]

    def col_swap(i: int, j: int) -> None:
        for r in range(m):
            M[r][i], M[r][j] = M[r][j], M[r][i]
        for r in range(n):
            V[r][i], V[r][j] = V[r][j], V[r][i]

    t = 0
    while t < min(m, n):
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if M[i][j] != 0 and (piv is None or abs(M[i][j]) < abs(M[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        row_swap(t, piv[0])
        col_swap(t, piv[1])
        while True:
            dirty = False
            for i in range(t + 1, m):
                if M[i][t] != 0:
                    q = M[i][t] // M[t][t]
                    row_add(i, t, -q)
                    if M[i][t] != 0:
                        row_swap(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if M[t][j] != 0:
                    q = M[t][j] // M[t][t]
                    col_add(j, t, -q)
                    if M[t][j] != 0:
                        col_swap(t, j)
                        dirty = True
            if not dirty:
                break
        bad_row = None
        for i in range(t + 1, m):
            if any(M[i][j] % M[t][t] != 0 for j in range(t + 1, n)):
                bad_row = i
                break
        if bad_row is not None:
            row_add(t, bad_row, 1)
            continue
        if M[t][t] < 0:
            M[t] = [-x for x in M[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, M, V
