"""Thin representations of incidence algebras.

A thin representation is stored as its support (a closed subposet S) and a
multiplicative function alpha on the intervals of S. It has basis m_z for z in
S, and f_xy acts by ``f_xy m_y = alpha(x, y) m_x`` when ``x <=_S y`` and by
zero otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from . import linalg
from .cocycles import MultCochain, cohomology_transversal, same_class
from .errors import (
    MismatchedParent,
    NotClosed,
    NotIndecomposable,
    NotMultiplicative,
    SymbolicFieldUnsupported,
    ZeroRep,
)
from .fields import Field, FiniteField
from .poset import ClosedSubposet, Poset, closed_subposets, is_connected, removable_extremal


class ThinRep:
    __slots__ = ("parent", "field", "support", "alpha", "_order")

    def __init__(self, parent: Poset, field: Field, support: ClosedSubposet, alpha: Mapping[tuple[int, int], object]):
        if not field.is_concrete:
            raise SymbolicFieldUnsupported(f"representations need a concrete field, got {field}")
        if support.parent != parent:
            raise MismatchedParent("support belongs to a different poset")
        vals = {}
        for pair in support.rel:
            if pair not in alpha:
                raise NotMultiplicative(f"no value for ({parent.elements[pair[0]]}, {parent.elements[pair[1]]})")
            v = field.coerce(alpha[pair])
            if field.is_zero(v):
                raise NotMultiplicative("alpha must take unit values")
            vals[pair] = v
        for pair in alpha:
            if pair not in support.rel:
                raise NotMultiplicative(f"value given outside the support at {pair}")
        for z in support.members:
            if vals[(z, z)] != field.one:
                raise NotMultiplicative(f"alpha({parent.elements[z]}, {parent.elements[z]}) must be 1")
        for (x, y) in support.rel:
            for (y2, z) in support.rel:
                if y2 == y and vals[(x, z)] != field.mul(vals[(x, y)], vals[(y, z)]):
                    els = parent.elements
                    raise NotMultiplicative(f"alpha fails multiplicativity at {els[x]} <= {els[y]} <= {els[z]}")
        self.parent = parent
        self.field = field
        self.support = support
        self.alpha = vals
        self._order = support.sorted_members()

    def __repr__(self):
        return f"ThinRep(support={self.support.describe()}, {self.field})"

    def __eq__(self, other):
        if not isinstance(other, ThinRep):
            return NotImplemented
        return (self.parent, self.field, self.support, self.alpha) == (other.parent, other.field, other.support, other.alpha)

    def __hash__(self):
        return hash((self.support.members, self.support.rel, tuple(sorted(self.alpha.items()))))

    @classmethod
    def from_labels(cls, parent: Poset, field: Field, support: ClosedSubposet, alpha: Mapping[tuple[str, str], object] = ()):
        """Unlisted strict relations of the support get value 1, the diagonal 1."""
        vals = {pair: field.one for pair in support.rel}
        for (a, b), v in dict(alpha).items():
            vals[(parent.index(a), parent.index(b))] = v
        return cls(parent, field, support, vals)

    @property
    def dim(self) -> int:
        return len(self._order)

    def basis(self) -> list[int]:
        """Element indices of the basis vectors m_z, in increasing order."""
        return list(self._order)

    def dimension_vector(self) -> tuple[int, ...]:
        return self.support.dimension_vector()

    def is_zero(self) -> bool:
        return not self._order

    def sub_poset(self) -> Poset:
        return self.support.as_poset()

    def cocycle(self) -> MultCochain:
        """alpha as a weak degree-1 cochain on the support poset."""
        pos = {z: k for k, z in enumerate(self._order)}
        return MultCochain(
            self.sub_poset(), self.field, 1,
            {(pos[x], pos[y]): v for (x, y), v in self.alpha.items()}, weak=True,
        )

    @classmethod
    def from_cocycle(cls, parent: Poset, field: Field, support: ClosedSubposet, c: MultCochain) -> "ThinRep":
        order = support.sorted_members()
        return cls(parent, field, support, {(order[a], order[b]): v for (a, b), v in c.values.items()})

    def action_matrix(self, x: int, y: int) -> list[list]:
        """Matrix of f_xy in the basis ``basis()`` (columns are inputs)."""
        F = self.field
        M = linalg.zeros(F, self.dim, self.dim)
        if (x, y) in self.alpha:
            pos = {z: k for k, z in enumerate(self._order)}
            M[pos[x]][pos[y]] = self.alpha[(x, y)]
        return M

    def action_table(self) -> "ActionTable":
        return ActionTable(
            self.parent, self.field, tuple(self._order),
            {iv: self.action_matrix(*iv) for iv in self.parent.intervals()},
        )

    def restrict(self, members) -> "ThinRep":
        """Restriction to a closed subposet of the support on ``members``."""
        members = frozenset(members)
        rel = frozenset((a, b) for a, b in self.support.rel if a in members and b in members)
        sub = ClosedSubposet(self.parent, members, rel)
        return ThinRep(self.parent, self.field, sub, {p: self.alpha[p] for p in rel})

    def to_json(self) -> dict:
        F, els = self.field, self.parent.elements
        return {
            "support": self.support.to_json(),
            "dimension_vector": list(self.dimension_vector()),
            "alpha": [
                [els[x], els[y], F.to_json(v)]
                for (x, y), v in sorted(self.alpha.items())
                if x != y
            ],
        }

    def describe(self) -> str:
        els = self.parent.elements
        vals = " ".join(
            f"{els[x]}{els[y]}={self.field.fmt(v)}"
            for (x, y), v in sorted(self.alpha.items())
            if x != y and v != self.field.one
        )
        dv = "".join(map(str, self.dimension_vector()))
        return f"dim {dv} support {self.support.describe()}" + (f" alpha {vals}" if vals else "")


@dataclass
class ActionTable:
    """Explicit matrices of every f_xy on the span of the basis vectors."""

    parent: Poset
    field: Field
    basis: tuple[int, ...]
    matrices: dict[tuple[int, int], list[list]]

    def satisfies_module_law(self) -> bool:
        """``f_xy f_yz = f_xz`` and ``f_xy f_tz = 0`` (t != y) hold on the matrices."""
        F = self.field
        zero = linalg.zeros(F, len(self.basis), len(self.basis))
        ivs = list(self.matrices)
        for (x, y) in ivs:
            for (t, z) in ivs:
                prod = linalg.matmul(F, self.matrices[(x, y)], self.matrices[(t, z)])
                expect = self.matrices[(x, z)] if t == y else zero
                if prod != expect:
                    return False
        return True


def defining_representation(P: Poset, F: Field) -> ThinRep:
    S = ClosedSubposet.full(P)
    return ThinRep(P, F, S, {pair: F.one for pair in S.rel})


def trivial_rep(S: ClosedSubposet, F: Field) -> ThinRep:
    return ThinRep(S.parent, F, S, {pair: F.one for pair in S.rel})


def make_thin(P: Poset, S: ClosedSubposet, alpha: Mapping[tuple[int, int], object], F: Field) -> ThinRep:
    return ThinRep(P, F, S, alpha)


def projective(P: Poset, x: int, F: Field) -> ThinRep:
    """``P(x)``: support ``P_{<=x}`` with the induced order and trivial alpha."""
    return trivial_rep(ClosedSubposet.principal_down(P, x), F)


def annihilator_support(table: ActionTable) -> ClosedSubposet:
    """Support of the representation whose action matrices are given."""
    F = table.field
    pos = {z: k for k, z in enumerate(table.basis)}
    rel = set()
    for (x, y), M in table.matrices.items():
        nonzero = [(i, j) for i, row in enumerate(M) for j, v in enumerate(row) if not F.is_zero(v)]
        if not nonzero:
            continue
        if x not in pos or y not in pos or nonzero != [(pos[x], pos[y])]:
            raise NotClosed("action table does not come from a thin representation")
        rel.add((x, y))
    members = frozenset(a for a, b in rel if a == b)
    if members != frozenset(table.basis):
        raise NotClosed("some basis vector is not fixed by its idempotent")
    return ClosedSubposet(table.parent, members, frozenset(rel))


def reps_isomorphic(M: ThinRep, N: ThinRep) -> dict[int, object] | None:
    """A rescaling ``theta`` with ``m_z -> theta_z n_z`` an isomorphism, or None.

    ``alpha_M(x,y) / alpha_N(x,y) = theta_y / theta_x`` on the support.
    """
    if M.parent != N.parent or M.field != N.field:
        raise MismatchedParent("representations of different algebras")
    if M.support != N.support:
        return None
    order = M.basis()
    if not order:
        return {}
    ok, witness = same_class(M.cocycle(), N.cocycle())
    if not ok:
        return None
    return {order[k]: witness.values[(k,)] for k in range(len(order))}


def is_module_map(M: ThinRep, N: ThinRep, phi: list[list]) -> bool:
    """``phi`` (N-basis rows, M-basis columns) intertwines every f_xy."""
    F = M.field
    for iv in M.parent.intervals():
        if linalg.matmul(F, phi, M.action_matrix(*iv)) != linalg.matmul(F, N.action_matrix(*iv), phi):
            return False
    return True


def rescaling_matrix(M: ThinRep, theta: Mapping[int, object]) -> list[list]:
    F = M.field
    order = M.basis()
    return [[theta[z] if i == j else F.zero for j in range(len(order))] for i, z in enumerate(order)]


def classify_thin(P: Poset, F: Field) -> list[tuple[ClosedSubposet, list[ThinRep]]]:
    """Every thin representation over F_q up to isomorphism, grouped by support."""
    if not isinstance(F, FiniteField):
        raise SymbolicFieldUnsupported("a finite catalogue needs a finite field")
    out = []
    for S in closed_subposets(P):
        classes = cohomology_transversal(S.as_poset(), 1, F, weak=True)
        out.append((S, [ThinRep.from_cocycle(P, F, S, c) for c in classes]))
    return out


def catalogue(P: Poset, F: Field) -> list[ThinRep]:
    return [rep for _, reps in classify_thin(P, F) for rep in reps]


@dataclass
class RebaseCertificate:
    """``e_xy = scale[(x,y)] f_xy`` on the support algebra makes M the defining rep."""

    rep: ThinRep
    scale: dict[tuple[int, int], object]

    def verify(self) -> bool:
        F = self.rep.field
        rel = self.rep.support.rel
        for (x, y) in rel:
            # e_xy m_y = m_x
            if F.mul(self.scale[(x, y)], self.rep.alpha[(x, y)]) != F.one:
                return False
            for (y2, z) in rel:
                # e_xy e_yz = e_xz in the incidence algebra of the support
                if y2 == y and F.mul(self.scale[(x, y)], self.scale[(y, z)]) != self.scale[(x, z)]:
                    return False
        return True


def rebase_to_defining(M: ThinRep) -> RebaseCertificate:
    F = M.field
    cert = RebaseCertificate(M, {pair: F.inv(v) for pair, v in M.alpha.items()})
    if not cert.verify():  # pragma: no cover - follows from multiplicativity
        raise AssertionError("rescaled basis is not an incidence basis")
    return cert


def endomorphism_dimension(M: ThinRep) -> int:
    """dim End(M), from the linear equations ``phi A = A phi`` for every action matrix."""
    F = M.field
    d = M.dim
    eqs = []
    for iv in M.parent.intervals():
        A = M.action_matrix(*iv)
        # unknown phi[i][j] at position i*d + j; (phi A - A phi)[r][c] = 0
        for r in range(d):
            for c in range(d):
                row = [F.zero] * (d * d)
                for k in range(d):
                    if not F.is_zero(A[k][c]):
                        row[r * d + k] = F.add(row[r * d + k], A[k][c])
                    if not F.is_zero(A[r][k]):
                        row[k * d + c] = F.sub(row[k * d + c], A[r][k])
                if any(not F.is_zero(v) for v in row):
                    eqs.append(row)
    return len(linalg.nullspace(F, eqs, d * d))


def is_indecomposable(M: ThinRep) -> bool:
    if M.is_zero():
        raise ZeroRep("the zero representation is neither decomposable nor indecomposable")
    return is_connected(M.sub_poset())


@dataclass
class AccessStep:
    """One step of an accessibility chain.

    ``kind`` is ``"sub"`` (``matrix`` is the inclusion of ``smaller`` into
    ``larger``) or ``"quotient"`` (``matrix`` is the projection).
    """

    larger: ThinRep
    smaller: ThinRep
    removed: int
    kind: str
    matrix: list[list]

    def verify(self) -> bool:
        if self.kind == "sub":
            ok = is_module_map(self.smaller, self.larger, self.matrix)
        else:
            ok = is_module_map(self.larger, self.smaller, self.matrix)
        F = self.larger.field
        return ok and linalg.rank(F, self.matrix) == self.smaller.dim


def _embedding(big: ThinRep, small: ThinRep) -> list[list]:
    F = big.field
    pos = {z: k for k, z in enumerate(big.basis())}
    M = linalg.zeros(F, big.dim, small.dim)
    for j, z in enumerate(small.basis()):
        M[pos[z]][j] = F.one
    return M


def accessibility_chain(M: ThinRep) -> list[AccessStep]:
    """Steps from M down to a simple, each dropping one extremal support vertex.

    Removing a maximal vertex leaves a submodule, removing a minimal one a
    quotient; every intermediate representation stays indecomposable.
    """
    if not is_indecomposable(M):
        raise NotIndecomposable("support is not connected")
    steps = []
    cur = M
    while cur.dim > 1:
        order = cur.basis()
        sub_poset = cur.sub_poset()
        local = removable_extremal(sub_poset)
        x = order[local]
        smaller = cur.restrict(z for z in order if z != x)
        if local in sub_poset.maximal():
            kind, mat = "sub", _embedding(cur, smaller)
        else:
            kind, mat = "quotient", linalg.transpose(_embedding(cur, smaller))
        step = AccessStep(cur, smaller, x, kind, mat)
        if not step.verify() or not is_indecomposable(smaller):  # pragma: no cover
            raise AssertionError("accessibility step failed verification")
        steps.append(step)
        cur = smaller
    return steps


def accessibility_sequence(M: ThinRep) -> list[ThinRep]:
    steps = accessibility_chain(M)
    return [M] + [s.smaller for s in steps]


@dataclass
class SubmoduleLattice:
    """Submodules of a projective, as down-closed subsets ordered by inclusion."""

    poset: Poset
    top: int
    elements: list[frozenset[int]]

    def leq(self, a: frozenset, b: frozenset) -> bool:
        return a <= b

    def meet(self, a, b):
        return a & b

    def join(self, a, b):
        return a | b

    def is_lattice(self) -> bool:
        present = set(self.elements)
        return all(self.meet(a, b) in present and self.join(a, b) in present for a in self.elements for b in self.elements)

    def is_distributive(self) -> bool:
        els = self.elements
        return self.is_lattice() and all(
            self.meet(a, self.join(b, c)) == self.join(self.meet(a, b), self.meet(a, c))
            for a in els for b in els for c in els
        )

    def covers(self) -> list[tuple[int, int]]:
        """Hasse diagram of the lattice, by position in ``elements``."""
        out = []
        for i, a in enumerate(self.elements):
            for j, b in enumerate(self.elements):
                if a < b and not any(a < c < b for c in self.elements):
                    out.append((i, j))
        return out

    def labelled(self) -> list[list[str]]:
        els = self.poset.elements
        return [[els[i] for i in sorted(s)] for s in self.elements]


def submodule_lattice(P: Poset, x: int) -> SubmoduleLattice:
    """Submodules of P(x) correspond to down-closed subsets of ``{z <= x}``."""
    below = [z for z in range(P.n) if P.leq[z][x]]
    out = []
    for mask in range(1 << len(below)):
        subset = frozenset(below[i] for i in range(len(below)) if mask >> i & 1)
        if all(w in subset for z in subset for w in below if P.leq[w][z]):
            out.append(subset)
    out.sort(key=lambda s: (len(s), sorted(s)))
    lat = SubmoduleLattice(P, x, out)
    if not lat.is_distributive():  # pragma: no cover - down-sets form a distributive lattice
        raise AssertionError("submodule lattice is not distributive")
    return lat
