"""Smith normal form over the integers, with unimodular transforms."""

from __future__ import annotations


def smith_normal_form(A):
    """Return ``(D, U, V, Vinv)`` with ``U @ A @ V == D`` diagonal.

    The diagonal entries are non-negative and each divides the next.  All
    matrices are lists of lists of Python ints.
    """
    rows = len(A)
    cols = len(A[0]) if rows else 0
    D = [list(map(int, r)) for r in A]
    U = [[int(i == j) for j in range(rows)] for i in range(rows)]
    V = [[int(i == j) for j in range(cols)] for i in range(cols)]
    Vi = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(src, dst, k):
        # row dst += k * row src
        if k:
            D[dst] = [a + k * b for a, b in zip(D[dst], D[src])]
            U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, k):
        # col dst += k * col src; the inverse subtracts row dst from row src
        if k:
            for r in D:
                r[dst] += k * r[src]
            for r in V:
                r[dst] += k * r[src]
            Vi[src] = [a - k * b for a, b in zip(Vi[src], Vi[dst])]

    def negate_row(i):
        D[i] = [-a for a in D[i]]
        U[i] = [-a for a in U[i]]

    t = 0
    while t < min(rows, cols):
        nz = [(abs(D[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if D[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            changed = False
            for i in range(t + 1, rows):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    add_row(t, i, -q)
                    if D[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, cols):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    add_col(t, j, -q)
                    if D[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            # enforce divisibility of the rest by the pivot
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if D[i][j] % D[t][t]), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if D[t][t] < 0:
            negate_row(t)
        t += 1
    return D, U, V, Vi


def invariant_factors(A) -> list:
    """Diagonal of the Smith form, zeros kept, units dropped."""
    D, *_ = smith_normal_form(A)
    n = min(len(D), len(D[0]) if D else 0)
    return [D[i][i] for i in range(n) if D[i][i] != 1]
