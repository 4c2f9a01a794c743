"""Pure-Python Smith normal form kernel (arbitrary-precision ints).

The compiled kernel in ``_kernels.pyx`` follows the same pivot sequence step
for step, so both backends return identical ``U, S, V``.
"""

from __future__ import annotations


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def snf(rows, m, n, transforms=True):
    """Return ``(U, S, V)`` with ``S = U * M * V`` in Smith form.

    ``rows`` is a list of ``m`` lists of ``n`` ints; it is not modified.
    When ``transforms`` is false, ``U`` and ``V`` are returned as ``None``.
    """
    S = [list(r) for r in rows]
    U = _identity(m) if transforms else None
    V = _identity(n) if transforms else None

    def swap_rows(a, b):
        if a != b:
            S[a], S[b] = S[b], S[a]
            if U is not None:
                U[a], U[b] = U[b], U[a]

    def swap_cols(a, b):
        if a != b:
            for r in S:
                r[a], r[b] = r[b], r[a]
            if V is not None:
                for r in V:
                    r[a], r[b] = r[b], r[a]

    def add_row(dst, src, q):
        # row dst += q * row src
        sd, ss = S[dst], S[src]
        for k in range(n):
            if ss[k]:
                sd[k] += q * ss[k]
        if U is not None:
            ud, us = U[dst], U[src]
            for k in range(m):
                if us[k]:
                    ud[k] += q * us[k]

    def add_col(dst, src, q):
        for r in S:
            if r[src]:
                r[dst] += q * r[src]
        if V is not None:
            for r in V:
                if r[src]:
                    r[dst] += q * r[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = S[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            clean = True
            p = S[t][t]
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, -(S[i][t] // p))
                    if S[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, -(S[t][j] // p))
                    if S[t][j]:
                        clean = False
            if not clean:
                bi, bj, bv = t, t, abs(S[t][t])
                for i in range(t + 1, m):
                    if S[i][t] and abs(S[i][t]) < bv:
                        bi, bj, bv = i, t, abs(S[i][t])
                for j in range(t + 1, n):
                    if S[t][j] and abs(S[t][j]) < bv:
                        bi, bj, bv = t, j, abs(S[t][j])
                swap_rows(t, bi)
                swap_cols(t, bj)
                continue
            bad = -1
            for i in range(t + 1, m):
                row = S[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad < 0:
                break
            add_row(t, bad, 1)
        if S[t][t] < 0:
            S[t] = [-v for v in S[t]]
            if U is not None:
                U[t] = [-v for v in U[t]]
        t += 1
    return U, S, V
