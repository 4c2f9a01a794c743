"""Dense exact linear algebra over a concrete field (lists of lists)."""

from __future__ import annotations

from .fields import Field


def zeros(F: Field, rows: int, cols: int) -> list[list]:
    return [[F.zero] * cols for _ in range(rows)]


def identity(F: Field, n: int) -> list[list]:
    return [[F.one if i == j else F.zero for j in range(n)] for i in range(n)]


def matmul(F: Field, A, B) -> list[list]:
    if not A:
        return []
    inner, cols = len(B), len(B[0]) if B else 0
    out = []
    for row in A:
        new = [F.zero] * cols
        for k in range(inner):
            a = row[k]
            if not F.is_zero(a):
                bk = B[k]
                for j in range(cols):
                    if not F.is_zero(bk[j]):
                        new[j] = F.add(new[j], F.mul(a, bk[j]))
        out.append(new)
    return out


def rref(F: Field, A) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns."""
    M = [list(r) for r in A]
    rows = len(M)
    cols = len(M[0]) if M else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if not F.is_zero(M[i][c])), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv(M[r][c])
        M[r] = [F.mul(inv, v) for v in M[r]]
        for i in range(rows):
            if i != r and not F.is_zero(M[i][c]):
                f = M[i][c]
                M[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M, pivots


def rank(F: Field, A) -> int:
    return len(rref(F, A)[1])


def nullspace(F: Field, A, cols: int | None = None) -> list[list]:
    """Basis of ``{x : A x = 0}``."""
    if cols is None:
        cols = len(A[0]) if A else 0
    R, pivots = rref(F, A) if A else ([], [])
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [F.zero] * cols
        v[f] = F.one
        for row, p in zip(R, pivots):
            v[p] = F.neg(row[f])
        basis.append(v)
    return basis


def column_space_basis(F: Field, vectors) -> list[list]:
    """Row-reduced basis of the span of ``vectors``."""
    if not vectors:
        return []
    R, pivots = rref(F, vectors)
    return R[: len(pivots)]


def transpose(A) -> list[list]:
    return [list(r) for r in zip(*A)]
