"""Tensor products of thin representations and meet-semilattice structure."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MismatchedParent, NotMeetSemilattice
from .fields import Field
from .poset import ClosedSubposet, Poset, closed_subposets, wedge
from .thin import ThinRep, catalogue, projective, reps_isomorphic


def tensor(M: ThinRep, N: ThinRep) -> ThinRep:
    """Pointwise tensor product: support ``Supp M ∧ Supp N``, alpha multiplied."""
    if M.parent != N.parent or M.field != N.field:
        raise MismatchedParent("representations of different algebras")
    S = wedge(M.support, N.support)
    F = M.field
    return ThinRep(M.parent, F, S, {pair: F.mul(M.alpha[pair], N.alpha[pair]) for pair in S.rel})


@dataclass
class CayleyTable:
    items: list
    table: list[list[int]]

    def is_commutative(self) -> bool:
        n = len(self.items)
        return all(self.table[i][j] == self.table[j][i] for i in range(n) for j in range(n))

    def is_associative(self) -> bool:
        t = self.table
        n = len(self.items)
        return all(t[t[i][j]][k] == t[i][t[j][k]] for i in range(n) for j in range(n) for k in range(n))

    def is_idempotent(self) -> bool:
        return all(self.table[i][i] == i for i in range(len(self.items)))

    def identity(self) -> int | None:
        n = len(self.items)
        for e in range(n):
            if all(self.table[e][i] == i and self.table[i][e] == i for i in range(n)):
                return e
        return None


def undeformed_semigroup(P: Poset) -> CayleyTable:
    """``(Cl(P), ∧)`` as a Cayley table over ``closed_subposets(P)``."""
    subs = closed_subposets(P)
    pos = {(S.members, S.rel): k for k, S in enumerate(subs)}
    table = [[pos[(w.members, w.rel)] for w in (wedge(S, T) for T in subs)] for S in subs]
    return CayleyTable(subs, table)


def thin_semigroup(P: Poset, F: Field) -> CayleyTable:
    """Tensor table on the isomorphism classes of thin representations over F_q."""
    reps = catalogue(P, F)
    by_support: dict = {}
    for k, r in enumerate(reps):
        by_support.setdefault((r.support.members, r.support.rel), []).append(k)

    def find(rep):
        for k in by_support[(rep.support.members, rep.support.rel)]:
            if reps_isomorphic(rep, reps[k]) is not None:
                return k
        raise AssertionError("tensor product missing from the catalogue")  # pragma: no cover

    table = [[find(tensor(M, N)) for N in reps] for M in reps]
    return CayleyTable(reps, table)


def lower_bounds(P: Poset, x: int, y: int) -> list[int]:
    return [z for z in range(P.n) if P.leq[z][x] and P.leq[z][y]]


def maximal_lower_bounds(P: Poset, x: int, y: int) -> list[int]:
    lbs = lower_bounds(P, x, y)
    return [z for z in lbs if not any(w != z and P.leq[z][w] for w in lbs)]


def meet(P: Poset, x: int, y: int) -> int | None:
    mlb = maximal_lower_bounds(P, x, y)
    return mlb[0] if len(mlb) == 1 else None


def is_meet_semilattice(P: Poset) -> tuple[bool, tuple[int, int] | None]:
    """``(True, None)`` or ``(False, (x, y))`` for a pair without a meet.

    Pairs are scanned from the largest indices down, so the witness favours
    elements declared last (typically the top of the poset).
    """
    for x in range(P.n - 1, -1, -1):
        for y in range(P.n - 1, x, -1):
            if meet(P, x, y) is None:
                return False, (x, y)
    return True, None


@dataclass
class K0Table:
    poset: Poset
    table: list[list[int]]

    def labelled(self) -> list[list[str]]:
        els = self.poset.elements
        return [[els[v] for v in row] for row in self.table]


def k0_table(P: Poset) -> K0Table:
    ok, witness = is_meet_semilattice(P)
    if not ok:
        x, y = witness
        els = P.elements
        bounds = ", ".join(els[z] for z in maximal_lower_bounds(P, x, y)) or "none"
        raise NotMeetSemilattice(
            f"{els[x]} and {els[y]} have no meet (maximal lower bounds: {bounds})"
        )
    return K0Table(P, [[meet(P, x, y) for y in range(P.n)] for x in range(P.n)])


def check_projective_products(P: Poset, F: Field) -> bool:
    """``P(x) ⊗ P(y) ≅ P(x ∧ y)`` for every pair of a meet-semilattice."""
    t = k0_table(P).table
    proj = [projective(P, x, F) for x in range(P.n)]
    return all(
        reps_isomorphic(tensor(proj[x], proj[y]), proj[t[x][y]]) is not None
        for x in range(P.n)
        for y in range(P.n)
    )


def principal_down(P: Poset, x: int) -> ClosedSubposet:
    return ClosedSubposet.principal_down(P, x)
