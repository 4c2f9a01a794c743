"""Canonical forms for conjugation of square matrices by invertible diagonals.

``D A D^-1`` has entries ``d_i a_ij / d_j``, so the zero pattern (a digraph
with an arrow i -> j per nonzero entry) is invariant. Along a spanning tree of
each component the scalars d can make every tree entry 1; what is left on the
remaining arrows is a complete invariant of the orbit.

Vertices are 0-indexed here; the CLI prints them 1-indexed.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from . import linalg
from .errors import ParseError
from .fields import Field
from .poset import Preorder


@dataclass(frozen=True)
class PatternMatrix:
    field: Field
    entries: tuple[tuple, ...]

    def __post_init__(self):
        n = len(self.entries)
        if any(len(r) != n for r in self.entries):
            raise ValueError("matrix must be square")

    @classmethod
    def from_rows(cls, F: Field, rows: Sequence[Sequence]) -> "PatternMatrix":
        return cls(F, tuple(tuple(F.coerce(v) for v in r) for r in rows))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    def to_lists(self) -> list[list]:
        return [list(r) for r in self.entries]

    def to_json(self) -> list[list]:
        return [[self.field.to_json(v) for v in r] for r in self.entries]


def parse_matrix(text: str, F: Field) -> PatternMatrix:
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append([F.parse(tok) for tok in line.split()])
    if any(len(r) != len(rows) for r in rows):
        raise ParseError("matrix file must describe a square matrix")
    return PatternMatrix(F, tuple(tuple(r) for r in rows))


def pattern_graph(A: PatternMatrix) -> list[tuple[int, int]]:
    """Arrows ``i -> j`` for nonzero ``a_ij``, in row-major order."""
    F = A.field
    return [(i, j) for i in range(A.n) for j in range(A.n) if not F.is_zero(A.entries[i][j])]


@dataclass(frozen=True)
class SpanningStructure:
    n: int
    tree: tuple[tuple[int, int], ...]
    eliminated: tuple[tuple[int, int], ...]
    components: tuple[tuple[int, ...], ...]


def _connected(n: int, arrows, a: int, b: int) -> bool:
    adj = [[] for _ in range(n)]
    for i, j in arrows:
        adj[i].append(j)
        adj[j].append(i)
    seen = {a}
    queue = deque([a])
    while queue:
        v = queue.popleft()
        if v == b:
            return True
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return False


def _components(n: int, arrows) -> list[tuple[int, ...]]:
    parent = list(range(n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for i, j in arrows:
        parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    return sorted(tuple(g) for g in groups.values())


def spanning_structure(n: int, arrows: Sequence[tuple[int, int]]) -> SpanningStructure:
    """Remove, in ascending lexicographic order, every arrow lying on an
    undirected cycle (loops included) of the current graph.

    Deleting an arrow never puts another arrow onto a cycle, so one ascending
    pass removes the same arrows as repeatedly deleting the least cycle arrow.
    """
    current = sorted(set(arrows))
    eliminated = []
    for arrow in list(current):
        i, j = arrow
        rest = [a for a in current if a != arrow]
        if i == j or _connected(n, rest, i, j):
            eliminated.append(arrow)
            current = rest
    return SpanningStructure(n, tuple(current), tuple(eliminated), tuple(_components(n, current)))


@dataclass(frozen=True)
class CanonicalPair:
    C: PatternMatrix
    D: tuple
    structure: SpanningStructure

    def holonomy(self) -> tuple:
        return tuple(self.C.entries[i][j] for i, j in self.structure.eliminated)


def _scalings(A: PatternMatrix, st: SpanningStructure) -> list:
    """Diagonal entries making every tree entry of ``D A D^-1`` equal to 1."""
    F = A.field
    adj: list[list[tuple[int, int, bool]]] = [[] for _ in range(A.n)]
    for i, j in st.tree:
        adj[i].append((j, i, True))   # walk forward along i -> j
        adj[j].append((i, i, False))  # walk backward from j to i
    d = [None] * A.n
    for comp in st.components:
        root = comp[0]
        d[root] = F.one
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w, tail, forward in sorted(adj[v]):
                if d[w] is not None:
                    continue
                if forward:
                    # c_vw = d_v a_vw / d_w = 1
                    d[w] = F.mul(d[v], A.entries[v][w])
                else:
                    # c_wv = d_w a_wv / d_v = 1
                    d[w] = F.div(d[v], A.entries[w][v])
                queue.append(w)
    return d


def conjugate(A: PatternMatrix, D: Sequence) -> PatternMatrix:
    """``D A D^-1`` for a diagonal D given by its entries."""
    F = A.field
    return PatternMatrix(
        F,
        tuple(
            tuple(F.div(F.mul(D[i], A.entries[i][j]), D[j]) for j in range(A.n))
            for i in range(A.n)
        ),
    )


def canonical_form(A: PatternMatrix) -> CanonicalPair:
    st = spanning_structure(A.n, pattern_graph(A))
    D = _scalings(A, st)
    C = conjugate(A, D)
    F = A.field
    for i in range(A.n):
        for j in range(A.n):
            # D A = C D entrywise
            if F.mul(D[i], A.entries[i][j]) != F.mul(C.entries[i][j], D[j]):  # pragma: no cover
                raise AssertionError("canonical form fails D A = C D")
    return CanonicalPair(C, tuple(D), st)


def orbit_invariant(A: PatternMatrix) -> tuple[tuple[tuple[int, int], ...], tuple]:
    """Pattern arrows and the holonomy of each eliminated arrow, in elimination order."""
    pair = canonical_form(A)
    return tuple(pattern_graph(A)), pair.holonomy()


def diag_conjugate_test(A: PatternMatrix, B: PatternMatrix) -> tuple | None:
    """A diagonal D with ``D A D^-1 = B``, or None when no such D exists."""
    if A.field != B.field or A.n != B.n:
        raise ValueError("matrices must have the same size and field")
    if pattern_graph(A) != pattern_graph(B):
        return None
    ca, cb = canonical_form(A), canonical_form(B)
    if ca.C != cb.C:
        return None
    F = A.field
    D = tuple(F.div(a, b) for a, b in zip(ca.D, cb.D))
    if conjugate(A, D) != B:  # pragma: no cover
        raise AssertionError("recovered diagonal does not conjugate A to B")
    return D


def quiver_quotient_preorder(A: PatternMatrix) -> Preorder:
    """Reachability preorder ``i ⪯ j`` (path from i to j) on labels 1..n.

    Also checks that the algebra generated by the vertex idempotents and the
    arrow matrices ``a_ij E_ij`` is spanned by the ``E_ij`` with ``i ⪯ j``.
    """
    n = A.n
    arrows = pattern_graph(A)
    up = [1 << i for i in range(n)]
    for i, j in arrows:
        up[i] |= 1 << j
    changed = True
    while changed:
        changed = False
        for i in range(n):
            acc = up[i]
            for j in range(n):
                if up[i] >> j & 1:
                    acc |= up[j]
            if acc != up[i]:
                up[i], changed = acc, True
    labels = [str(i + 1) for i in range(n)]
    order = Preorder.from_masks(labels, up)
    if generated_algebra_dimension(A) != sum(bin(m).count("1") for m in up):  # pragma: no cover
        raise AssertionError("generated algebra is not the structural matrix algebra")
    return order


def generated_algebra_dimension(A: PatternMatrix) -> int:
    """dim of the algebra generated by the ``E_ii`` and the ``a_ij E_ij``."""
    F, n = A.field, A.n

    def unit(i, j, v):
        M = linalg.zeros(F, n, n)
        M[i][j] = v
        return M

    gens = [unit(i, i, F.one) for i in range(n)] + [unit(i, j, A.entries[i][j]) for i, j in pattern_graph(A)]
    flat = lambda M: [v for r in M for v in r]  # noqa: E731
    basis = linalg.column_space_basis(F, [flat(g) for g in gens])
    while True:
        mats = [[row[k * n:(k + 1) * n] for k in range(n)] for row in basis]
        products = [flat(linalg.matmul(F, X, Y)) for X in mats for Y in mats]
        grown = linalg.column_space_basis(F, basis + products)
        if len(grown) == len(basis):
            return len(basis)
        basis = grown
