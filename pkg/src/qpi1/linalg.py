"""Exact row reduction over the rationals and the integers."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

Vector = tuple[Fraction, ...]


def rref(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns the non-zero rows and pivot columns."""
    M = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if pivot is None:
            continue
        M[r], M[pivot] = M[pivot], M[r]
        lead = M[r][c]
        M[r] = [x / lead for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def residue(basis: Sequence[Sequence[Fraction]], pivots: Sequence[int],
            v: Sequence) -> list[Fraction]:
    """Remainder of ``v`` after elimination against an RREF basis."""
    out = [Fraction(x) for x in v]
    for row, c in zip(basis, pivots):
        if out[c] != 0:
            f = out[c]
            out = [x - f * y for x, y in zip(out, row)]
    return out


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : M x = 0}``."""
    R, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, c in zip(R, pivots):
            x[c] = -row[f]
        out.append(x)
    return out


# -- integer lattices ----------------------------------------------------------

def smith_normal_form(A: Sequence[Sequence[int]], ncols: int):
    """Return ``(U, D, V)`` with ``U A V = D`` diagonal and U, V unimodular.

    ``A`` is an ``m x n`` integer matrix given by rows. The diagonal entries
    are non-negative and each divides the next.
    """
    m = len(A)
    n = ncols
    D = [list(map(int, r)) for r in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, f):  # row_dst += f * row_src
        D[dst] = [x + f * y for x, y in zip(D[dst], D[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, f):
        for row in D:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    t = 0
    while t < min(m, n):
        nonzero = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n)
                   if D[i][j] != 0]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    add_row(t, i, -q)
                    if D[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    add_col(t, j, -q)
                    if D[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                # enforce divisibility of the remaining block
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if D[i][j] % D[t][t]), None)
                if bad is None:
                    break
                add_row(bad[0], t, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, D, V


def invariant_factors(A: Sequence[Sequence[int]], ncols: int) -> tuple[list[int], int]:
    """Torsion coefficients (>1) and free rank of ``Z^ncols / rowspace(A)``."""
    _, D, _ = smith_normal_form(A, ncols) if A else ([], [], None)
    diag = [D[i][i] for i in range(min(len(D), ncols))] if A else []
    nonzero = [d for d in diag if d != 0]
    return [d for d in nonzero if d > 1], ncols - len(nonzero)


@lru_cache(maxsize=256)
def _snf_dv(A: tuple, ncols: int):
    if A:
        _, D, V = smith_normal_form(A, ncols)
        return D, V
    return [], [[int(i == j) for j in range(ncols)] for i in range(ncols)]


def lattice_separator(A: Sequence[Sequence[int]], ncols: int,
                      v: Sequence[int]) -> tuple[list[int], int] | None:
    """A functional separating ``v`` from the row lattice of ``A``.

    Returns ``(f, m)`` with ``f . r = 0 (mod m)`` for every row ``r`` and
    ``f . v != 0 (mod m)``, where ``m >= 2``. None when ``v`` lies in the lattice.
    """
    D, V = _snf_dv(tuple(tuple(r) for r in A), ncols)
    diag = [D[i][i] if i < len(D) else 0 for i in range(ncols)]
    # coordinates of v in the basis given by the columns of V
    w = [sum(v[k] * V[k][i] for k in range(ncols)) for i in range(ncols)]
    for i in range(ncols):
        d = diag[i]
        if (d == 0 and w[i] != 0) or (d != 0 and w[i] % d != 0):
            f = [V[k][i] for k in range(ncols)]
            m = d if d != 0 else abs(w[i]) + 1
            return f, max(m, 2)
    return None
