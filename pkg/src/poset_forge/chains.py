"""Order complexes, integer boundary matrices, Smith normal form, homology."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import _backend
from .errors import DegreeOutOfRange
from .poset import Poset


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("matrix entries do not match the declared shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [tuple(int(v) for v in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols_t = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntMatrix(
            self.rows,
            other.cols,
            tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols_t) for r in self.entries),
        )

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)))

    def is_zero(self) -> bool:
        return all(v == 0 for r in self.entries for v in r)

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def diagonal(self) -> list[int]:
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]

    def determinant(self) -> int:
        """Exact determinant by fraction-free elimination over Q."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        a = [[Fraction(v) for v in r] for r in self.entries]
        n, det = self.rows, Fraction(1)
        for c in range(n):
            piv = next((r for r in range(c, n) if a[r][c]), None)
            if piv is None:
                return 0
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                det = -det
            det *= a[c][c]
            for r in range(c + 1, n):
                f = a[r][c] / a[c][c]
                if f:
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return int(det)


def smith_normal_form(M: IntMatrix, transforms: bool = True):
    """``(U, S, V)`` with ``S = U @ M @ V`` diagonal, ``s_1 | s_2 | ...``, ``s_i >= 0``.

    With ``transforms=False`` only ``S`` is computed and ``U, V`` are ``None``.
    """
    U, S, V = _backend.snf([list(r) for r in M.entries], M.rows, M.cols, transforms)
    wrap = lambda rows, c: IntMatrix.from_rows(rows, c)  # noqa: E731
    return (
        wrap(U, M.rows) if U is not None else None,
        wrap(S, M.cols),
        wrap(V, M.cols) if V is not None else None,
    )


def invariant_factors(M: IntMatrix) -> list[int]:
    """Nonzero diagonal of the Smith form."""
    _, S, _ = smith_normal_form(M, transforms=False)
    return [d for d in S.diagonal() if d]


@dataclass(frozen=True)
class FinAbGroup:
    """``Z^free_rank + Z/d1 + Z/d2 + ...`` with ``d1 | d2 | ...``."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        if any(d < 2 for d in self.torsion):
            raise ValueError("torsion divisors must be at least 2")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError("torsion divisors must form a divisor chain")

    @classmethod
    def from_diagonal(cls, free_rank: int, diagonal: Sequence[int]) -> "FinAbGroup":
        return cls(free_rank, tuple(d for d in diagonal if d > 1))

    @classmethod
    def from_cyclic(cls, free_rank: int, orders: Sequence[int]) -> "FinAbGroup":
        """Direct sum of cyclic groups of arbitrary orders, in invariant-factor form."""
        k = len(orders)
        M = IntMatrix.from_rows([[orders[i] if i == j else 0 for j in range(k)] for i in range(k)], k)
        return cls.from_diagonal(free_rank, invariant_factors(M))

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


class OrderComplex:
    """Strict chains of ``P`` grouped by degree, each degree in lexicographic order."""

    def __init__(self, P: Poset):
        self.poset = P
        chains: list[list[tuple[int, ...]]] = [[(i,) for i in range(P.n)]] if P.n else []
        while chains and chains[-1]:
            nxt = [
                c + (j,)
                for c in chains[-1]
                for j in range(P.n)
                if P.lt(c[-1], j)
            ]
            if not nxt:
                break
            nxt.sort()
            chains.append(nxt)
        self.chains: tuple[tuple[tuple[int, ...], ...], ...] = tuple(tuple(c) for c in chains)

    @property
    def top_degree(self) -> int:
        return len(self.chains) - 1

    def simplices(self, n: int) -> tuple[tuple[int, ...], ...]:
        if 0 <= n < len(self.chains):
            return self.chains[n]
        return ()

    def count(self, n: int) -> int:
        return len(self.simplices(n))

    @cached_property
    def _positions(self):
        return [{c: k for k, c in enumerate(level)} for level in self.chains]

    def position(self, chain: tuple[int, ...]) -> int:
        return self._positions[len(chain) - 1][chain]

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * len(level) for n, level in enumerate(self.chains))

    def labelled(self, n: int) -> list[tuple[str, ...]]:
        els = self.poset.elements
        return [tuple(els[i] for i in c) for c in self.simplices(n)]


def order_complex(P: Poset) -> OrderComplex:
    return OrderComplex(P)


def _boundary(K: OrderComplex, n: int) -> IntMatrix:
    rows, cols = K.simplices(n - 1), K.simplices(n)
    mat = [[0] * len(cols) for _ in rows]
    for c, chain in enumerate(cols):
        for i in range(len(chain)):
            face = chain[:i] + chain[i + 1:]
            mat[K.position(face)][c] += -1 if i % 2 else 1
    return IntMatrix.from_rows(mat, len(cols))


def boundary_matrix(K: OrderComplex, n: int) -> IntMatrix:
    """Matrix of the boundary from degree ``n`` chains to degree ``n - 1`` chains."""
    if n < 1 or n > K.top_degree:
        raise DegreeOutOfRange(f"boundary degree {n} outside 1..{K.top_degree}")
    return _boundary(K, n)


def _rank_and_torsion(K: OrderComplex, n: int) -> tuple[int, list[int]]:
    if n < 1 or n > K.top_degree:
        return 0, []
    diag = invariant_factors(_boundary(K, n))
    return len(diag), [d for d in diag if d > 1]


def homology(P: Poset | OrderComplex, n: int) -> FinAbGroup:
    """``H_n`` of the order complex with integer coefficients."""
    K = P if isinstance(P, OrderComplex) else OrderComplex(P)
    if n < 0:
        raise DegreeOutOfRange("homology degree must be nonnegative")
    if n > K.top_degree:
        return FinAbGroup(0)
    rank_n, _ = _rank_and_torsion(K, n)
    rank_up, torsion = _rank_and_torsion(K, n + 1)
    return FinAbGroup(K.count(n) - rank_n - rank_up, tuple(torsion))


def homology_all(P: Poset, max_degree: int | None = None) -> list[FinAbGroup]:
    K = OrderComplex(P)
    top = K.top_degree if max_degree is None else max_degree
    return [homology(K, n) for n in range(max(top, 0) + 1)]
