"""Deformed incidence algebras I_lambda(P, K) and their classification."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping

from .cocycles import (
    MultCochain,
    chain_domain,
    coboundary,
    is_cocycle,
    normalize_2cocycle,
    reduce_modulo_coboundaries,
    same_class,
)
from .errors import ClassNotFixed, CycleDetected, MalformedBasis, NotACocycle, SymbolicFieldUnsupported
from .fields import Field
from .poset import ClosedSubposet, Poset, PosetAutomorphism, Preorder, automorphism_group, closed_subposets


def interval_label(P: Poset, x: int, y: int) -> str:
    return f"{P.elements[x]}-{P.elements[y]}"


@dataclass
class StructureConstantAlgebra:
    """Algebra given by a basis and sparse structure constants.

    ``table[(i, j)]`` maps basis index ``k`` to the coefficient of ``b_k`` in
    ``b_i * b_j``; missing keys mean zero.
    """

    field: Field
    basis: list[str]
    idempotents: list[int]
    table: dict[tuple[int, int], dict[int, object]]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def product(self, u: Mapping[int, object], v: Mapping[int, object]) -> dict[int, object]:
        F = self.field
        out: dict[int, object] = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, c in self.table.get((i, j), {}).items():
                    out[k] = F.add(out.get(k, F.zero), F.mul(F.mul(a, b), c))
        return {k: c for k, c in out.items() if not F.is_zero(c)}

    def basis_product(self, i: int, j: int) -> dict[int, object]:
        return {k: c for k, c in self.table.get((i, j), {}).items() if not self.field.is_zero(c)}

    def is_associative(self) -> bool:
        n = self.dim
        for i in range(n):
            for j in range(n):
                ij = self.basis_product(i, j)
                for k in range(n):
                    if self.product(ij, {k: self.field.one}) != self.product({i: self.field.one}, self.basis_product(j, k)):
                        return False
        return True

    def to_json(self) -> dict:
        F = self.field
        table = {}
        for (i, j), prod in sorted(self.table.items()):
            entries = [[self.basis[k], F.to_json(c)] for k, c in sorted(prod.items()) if not F.is_zero(c)]
            if entries:
                table[f"{self.basis[i]},{self.basis[j]}"] = entries
        return {
            "basis": list(self.basis),
            "idempotents": [self.basis[i] for i in self.idempotents],
            "table": table,
        }

    @classmethod
    def from_json(cls, data: dict, F: Field) -> "StructureConstantAlgebra":
        basis = list(data["basis"])
        index = {b: k for k, b in enumerate(basis)}
        if len(index) != len(basis):
            raise MalformedBasis("duplicate basis label")
        try:
            idem = [index[b] for b in data["idempotents"]]
        except KeyError as exc:
            raise MalformedBasis(f"unknown idempotent {exc.args[0]!r}") from None
        table: dict[tuple[int, int], dict[int, object]] = {}
        for key, entries in data.get("table", {}).items():
            left, sep, right = key.partition(",")
            if not sep or left not in index or right not in index:
                raise MalformedBasis(f"bad table key {key!r}")
            prod = {}
            for label, coeff in entries:
                if label not in index:
                    raise MalformedBasis(f"unknown basis label {label!r}")
                prod[index[label]] = F.parse(str(coeff))
            table[(index[left], index[right])] = prod
        return cls(F, basis, idem, table)


class DeformedAlgebra:
    """``I_lambda(P, K)``: basis ``f_xy`` (x <= y), ``f_xy f_yz = lambda(x,y,z) f_xz``."""

    def __init__(self, poset: Poset, field: Field, lam: MultCochain):
        self.poset = poset
        self.field = field
        self.lam = lam
        self.basis = poset.intervals()
        self.index = {iv: k for k, iv in enumerate(self.basis)}

    def __repr__(self):
        return f"DeformedAlgebra({len(self.poset)} elements, dim {self.dim}, {self.field})"

    @property
    def dim(self) -> int:
        return len(self.basis)

    def basis_product(self, a: int, b: int):
        """``(coefficient, basis index)`` of ``b_a * b_b`` or None when zero."""
        x, y = self.basis[a]
        t, z = self.basis[b]
        if y != t:
            return None
        return self.lam.values[(x, y, z)], self.index[(x, z)]

    def multiply(self, u: Mapping[int, object], v: Mapping[int, object]) -> dict[int, object]:
        F = self.field
        out: dict[int, object] = {}
        for a, ca in u.items():
            for b, cb in v.items():
                r = self.basis_product(a, b)
                if r is not None:
                    c, k = r
                    out[k] = F.add(out.get(k, F.zero), F.mul(F.mul(ca, cb), c))
        return {k: c for k, c in out.items() if not F.is_zero(c)}

    def unit(self) -> dict[int, object]:
        """``sum_x lambda(x,x,x)^-1 f_xx``; equals ``sum_x f_xx`` when normalized."""
        F = self.field
        return {self.index[(x, x)]: F.inv(self.lam.values[(x, x, x)]) for x in range(self.poset.n)}

    def is_unit(self, u: Mapping[int, object]) -> bool:
        one = self.field.one
        return all(
            self.multiply(u, {k: one}) == {k: one} and self.multiply({k: one}, u) == {k: one}
            for k in range(self.dim)
        )

    def structure_constants(self) -> StructureConstantAlgebra:
        table = {}
        for a in range(self.dim):
            for b in range(self.dim):
                r = self.basis_product(a, b)
                if r is not None:
                    table[(a, b)] = {r[1]: r[0]}
        labels = [interval_label(self.poset, x, y) for x, y in self.basis]
        idem = [self.index[(x, x)] for x in range(self.poset.n)]
        return StructureConstantAlgebra(self.field, labels, idem, table)


def _check_associative(A: DeformedAlgebra) -> bool:
    """Exhaustive check on composable basis triples (all others multiply to zero)."""
    P, F, lam = A.poset, A.field, A.lam.values
    for x, y, z, t in chain_domain(P, 3, True):
        if F.mul(lam[(x, y, z)], lam[(x, z, t)]) != F.mul(lam[(y, z, t)], lam[(x, y, t)]):
            return False
    return True


def build_deformed(P: Poset, lam: MultCochain, F: Field | None = None) -> DeformedAlgebra:
    F = F or lam.field
    if not F.is_concrete:
        raise SymbolicFieldUnsupported(f"{F} cannot carry explicit structure constants")
    if lam.degree != 2 or not lam.weak or lam.poset != P or lam.field != F:
        raise ValueError("deformation data must be a weak degree-2 cochain on the same poset and field")
    lam.require_complete()
    A = DeformedAlgebra(P, F, lam)
    if not _check_associative(A):
        raise NotACocycle("multiplication is not associative: the data is not a 2-cocycle")
    if not A.is_unit(A.unit()):  # pragma: no cover - forced by the cocycle identity
        raise AssertionError("deformed algebra has no unit")
    return A


def undeformed(P: Poset, F: Field) -> DeformedAlgebra:
    return build_deformed(P, MultCochain.constant(P, F, 2, 1, weak=True), F)


@dataclass
class BasisMap:
    """Linear map sending basis vector ``a`` to ``coeff * target``."""

    source: DeformedAlgebra
    target: DeformedAlgebra
    images: dict[int, tuple[object, int]]

    def apply(self, u: Mapping[int, object]) -> dict[int, object]:
        F = self.source.field
        out: dict[int, object] = {}
        for a, c in u.items():
            coeff, k = self.images[a]
            out[k] = F.add(out.get(k, F.zero), F.mul(c, coeff))
        return {k: c for k, c in out.items() if not F.is_zero(c)}

    def is_multiplicative(self) -> bool:
        one = self.source.field.one
        n = self.source.dim
        for a in range(n):
            for b in range(n):
                lhs = self.apply(self.source.multiply({a: one}, {b: one}))
                rhs = self.target.multiply(self.apply({a: one}), self.apply({b: one}))
                if lhs != rhs:
                    return False
        return True

    def is_bijective(self) -> bool:
        return sorted(k for _, k in self.images.values()) == list(range(self.target.dim))

    def is_identity(self) -> bool:
        one = self.source.field.one
        return all(c == one and k == a for a, (c, k) in self.images.items())

    def labelled(self) -> dict[str, tuple[object, str]]:
        P = self.source.poset
        return {
            interval_label(P, *self.source.basis[a]): (c, interval_label(P, *self.target.basis[k]))
            for a, (c, k) in sorted(self.images.items())
        }


def _relabel_map(A: DeformedAlgebra, B: DeformedAlgebra, sigma: PosetAutomorphism, alpha: MultCochain) -> BasisMap:
    """``f_uv -> alpha(s^-1 u, s^-1 v) f_(s^-1 u, s^-1 v)``, an isomorphism A -> B
    whenever ``lambda_A^sigma / lambda_B = d(alpha)``."""
    inv = sigma.inverse()
    images = {}
    for a, (u, v) in enumerate(A.basis):
        x, y = inv(u), inv(v)
        images[a] = (alpha.values[(x, y)], B.index[(x, y)])
    return BasisMap(A, B, images)


def is_trivial_deformation(A: DeformedAlgebra):
    """``(True, alpha)`` with ``lambda = d(alpha)`` or ``(False, None)``.

    With a witness, ``f_xy -> alpha(x,y)^-1 f_xy`` maps ``I(P,K)`` onto ``A``.
    """
    report = reduce_modulo_coboundaries(A.lam)
    return report.trivial, report.witness


def trivializing_map(A: DeformedAlgebra, alpha: MultCochain) -> BasisMap:
    I = undeformed(A.poset, A.field)
    F = A.field
    return BasisMap(I, A, {k: (F.inv(alpha.values[iv]), k) for k, iv in enumerate(A.basis)})


@dataclass
class DeformationIsomorphism:
    sigma: PosetAutomorphism
    alpha: MultCochain
    map: BasisMap = dc_field(repr=False)


def deformations_isomorphic(A: DeformedAlgebra, B: DeformedAlgebra) -> DeformationIsomorphism | None:
    """Search Aut(P) for ``sigma`` with ``[lambda_A^sigma] = [lambda_B]``."""
    if A.poset != B.poset or A.field != B.field:
        raise ValueError("deformations live on different posets or fields")
    for sigma in automorphism_group(A.poset):
        ok, alpha = same_class(A.lam.act(sigma), B.lam)
        if ok:
            phi = _relabel_map(A, B, sigma, alpha)
            if not phi.is_multiplicative():  # pragma: no cover - algebraic identity
                raise AssertionError("constructed isomorphism is not multiplicative")
            return DeformationIsomorphism(sigma, alpha, phi)
    return None


def standard_automorphism(A: DeformedAlgebra, sigma: PosetAutomorphism, alpha: MultCochain) -> BasisMap:
    """``f_xy -> alpha(u,v) beta(u,v) f_uv`` with ``(u,v) = (s^-1 x, s^-1 y)``.

    ``alpha`` must be a weak degree-1 cocycle; ``beta`` solves
    ``lambda^sigma / lambda = d(beta)`` and exists exactly when sigma fixes the class.
    """
    if not is_cocycle(alpha):
        raise NotACocycle("alpha must be multiplicative")
    ok, beta = same_class(A.lam.act(sigma), A.lam)
    if not ok:
        raise ClassNotFixed("the automorphism moves the deformation class")
    phi = _relabel_map(A, A, sigma, alpha * beta)
    if not phi.is_multiplicative():  # pragma: no cover - algebraic identity
        raise AssertionError("standard automorphism is not multiplicative")
    return phi


def two_sided_ideals(P: Poset) -> list[frozenset[tuple[int, int]]]:
    """Every two-sided ideal of I(P,K), as the set of intervals spanning it.

    Ideals are spanned by basis vectors ``f_xy``, and a set of intervals spans
    an ideal exactly when its complement is closed under subintervals. Ideals
    are listed by size, then lexicographically.
    """
    ivs = sorted(P.intervals(), key=lambda iv: (bin(P.interval(*iv)).count("1"), iv))
    inner = {
        (x, y): [(a, b) for (a, b) in ivs if (a, b) != (x, y) and P.leq[x][a] and P.leq[b][y]]
        for (x, y) in ivs
    }
    full = frozenset(ivs)
    out = []
    # kept: intervals outside the ideal; every subinterval of a kept one is kept
    stack = [(0, frozenset())]
    while stack:
        k, kept = stack.pop()
        if k == len(ivs):
            out.append(full - kept)
            continue
        iv = ivs[k]
        stack.append((k + 1, kept))
        if all(j in kept for j in inner[iv]):
            stack.append((k + 1, kept | {iv}))
    out.sort(key=lambda J: (len(J), sorted(J)))
    return out


def annihilator_ideals(P: Poset) -> list[frozenset[tuple[int, int]]]:
    """Ideals that annihilate a thin representation: one per closed subposet."""
    full = frozenset(P.intervals())
    return [full - S.rel for S in closed_subposets(P)]


def jacobson_radical(P: Poset) -> frozenset[tuple[int, int]]:
    return frozenset(P.strict_pairs())


# ---- recognition ---------------------------------------------------------


@dataclass
class Recognition:
    """Result of ``recognize_incidence``.

    ``order`` is the relation on idempotents (a Poset when antisymmetric);
    ``constants[(i, j, k)]`` is the scalar with ``b_ij b_jk = c b_ik``;
    ``cocycle`` is the extracted weak 2-cochain when ``order`` is a poset;
    ``basis_match`` sends each basis label to its (i, j) pair of element labels.
    """

    order: Preorder
    is_poset: bool
    constants: dict[tuple[int, int, int], object]
    cocycle: MultCochain | None
    basis_match: dict[str, tuple[str, str]]


def _element_names(labels: list[str]) -> list[str]:
    names = []
    for lab in labels:
        left, sep, right = lab.partition("-")
        names.append(left if sep and left == right else lab)
    return names if len(set(names)) == len(names) else labels


def recognize_incidence(A: StructureConstantAlgebra) -> Recognition | None:
    """Recover (P, lambda) from a block-supported basis, or None.

    Raises MalformedBasis when a basis vector does not sit in a single
    ``e_i A e_j`` block.
    """
    F = A.field
    if not F.is_concrete:
        raise SymbolicFieldUnsupported(f"{F} cannot carry explicit structure constants")
    one = F.one
    idem = list(A.idempotents)
    if len(set(idem)) != len(idem):
        raise MalformedBasis("repeated idempotent")
    # rescale so that e_i^2 = e_i
    scaled = []
    for i in idem:
        sq = A.basis_product(i, i)
        if set(sq) != {i}:
            raise MalformedBasis(f"{A.basis[i]} is not a multiple of an idempotent")
        scaled.append({i: F.inv(sq[i])})
    for a, ea in enumerate(scaled):
        for b, eb in enumerate(scaled):
            if a != b and A.product(ea, eb):
                raise MalformedBasis("designated idempotents are not orthogonal")
    n = len(idem)
    block: dict[tuple[int, int], list[int]] = {}
    for k in range(A.dim):
        vec = {k: one}
        lefts = [a for a in range(n) if A.product(scaled[a], vec)]
        rights = [b for b in range(n) if A.product(vec, scaled[b])]
        if len(lefts) != 1 or len(rights) != 1:
            raise MalformedBasis(f"{A.basis[k]} is not supported in a single block")
        a, b = lefts[0], rights[0]
        if A.product(scaled[a], vec) != vec or A.product(vec, scaled[b]) != vec:
            raise MalformedBasis(f"{A.basis[k]} is not fixed by its block idempotents")
        block.setdefault((a, b), []).append(k)
    if any(len(v) > 1 for v in block.values()):
        return None
    vec_of = {ab: ({ks[0]: one} if ab[0] != ab[1] else scaled[ab[0]]) for ab, ks in block.items()}
    constants = {}
    for (a, b), u in vec_of.items():
        for (b2, c), v in vec_of.items():
            if b2 != b:
                continue
            prod = A.product(u, v)
            target = vec_of.get((a, c))
            if target is None or not prod:
                return None
            (kt, ct), = target.items()
            if set(prod) != {kt}:
                return None
            constants[(a, b, c)] = F.div(prod[kt], ct)
    names = _element_names([A.basis[i] for i in idem])
    up = [sum(1 << b for b in range(n) if (a, b) in block) for a in range(n)]
    try:
        order: Preorder = Poset.from_masks(names, up)
        is_poset = True
    except CycleDetected:
        try:
            order = Preorder.from_masks(names, up)
        except ValueError:
            return None
        is_poset = False
    cocycle = None
    if is_poset:
        cocycle = MultCochain(order, F, 2, {(a, b, c): v for (a, b, c), v in constants.items()}, weak=True)
        if not is_cocycle(cocycle):
            return None
    else:
        for (a, b, c), v in constants.items():
            for (c2, d) in block:
                if c2 == c and (a, c, d) in constants:
                    if F.mul(v, constants[(a, c, d)]) != F.mul(constants[(b, c, d)], constants[(a, b, d)]):
                        return None
    match = {A.basis[ks[0]]: (names[a], names[b]) for (a, b), ks in sorted(block.items())}
    return Recognition(order, is_poset, constants, cocycle, match)
