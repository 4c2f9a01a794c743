"""Cochains of the order complex with values in the unit group of a field.

A cochain of degree n assigns a unit to every chain x0 <= ... <= xn. With
``weak=True`` the chains are weakly increasing (repeats allowed, as needed for
deformation data); otherwise they are the strict chains of the order complex.
Both complexes have the same cohomology.

Triviality questions are turned into integer linear systems: values are
replaced by discrete logarithms (F_q) or by sign bits and prime exponents (Q),
and the coboundary matrix is put into Smith form once per (poset, degree).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Callable, Iterable, Mapping

from .chains import FinAbGroup, IntMatrix, OrderComplex, homology, smith_normal_form
from .errors import MissingValue, NotACocycle, SymbolicFieldUnsupported
from .fields import Field, FiniteField, Rationals, Symbolic
from .poset import Poset, PosetAutomorphism


# ---- chain domains -------------------------------------------------------


@lru_cache(maxsize=256)
def chain_domain(P: Poset, degree: int, weak: bool) -> tuple[tuple[int, ...], ...]:
    """Chains of length ``degree + 1`` in lexicographic order."""
    if degree < 0:
        return ()
    if not weak:
        return OrderComplex(P).simplices(degree)
    level = [(i,) for i in range(P.n)]
    for _ in range(degree):
        level = sorted(c + (j,) for c in level for j in range(P.n) if P.leq[c[-1]][j])
    return tuple(level)


@lru_cache(maxsize=256)
def _domain_index(P: Poset, degree: int, weak: bool) -> dict:
    return {c: k for k, c in enumerate(chain_domain(P, degree, weak))}


def _faces(chain):
    for i in range(len(chain)):
        yield i, chain[:i] + chain[i + 1:]


class MultCochain:
    """Unit-valued function on the chains of one degree."""

    __slots__ = ("poset", "field", "degree", "weak", "values")

    def __init__(self, poset: Poset, field: Field, degree: int, values: Mapping, weak: bool = False):
        if not field.is_concrete:
            raise SymbolicFieldUnsupported(f"cochains need a concrete field, got {field}")
        index = _domain_index(poset, degree, weak)
        clean = {}
        for chain, v in values.items():
            chain = tuple(chain)
            if chain not in index:
                raise ValueError(f"{_fmt_chain(poset, chain)} is not a chain of degree {degree}")
            v = field.coerce(v)
            if field.is_zero(v):
                raise ValueError(f"value at {_fmt_chain(poset, chain)} is zero, not a unit")
            clean[chain] = v
        self.poset = poset
        self.field = field
        self.degree = degree
        self.weak = weak
        self.values = clean

    # constructors
    @classmethod
    def constant(cls, P: Poset, F: Field, degree: int, value=1, weak: bool = False) -> "MultCochain":
        return cls(P, F, degree, {c: value for c in chain_domain(P, degree, weak)}, weak)

    @classmethod
    def from_function(cls, P: Poset, F: Field, degree: int, fn: Callable, weak: bool = False) -> "MultCochain":
        return cls(P, F, degree, {c: fn(c) for c in chain_domain(P, degree, weak)}, weak)

    @classmethod
    def from_labels(cls, P: Poset, F: Field, degree: int, values: Mapping, weak: bool = True, default=1) -> "MultCochain":
        """Values keyed by label tuples; unlisted chains get ``default`` unless it is None."""
        vals = {tuple(P.index(x) for x in chain): v for chain, v in values.items()}
        if default is not None:
            for c in chain_domain(P, degree, weak):
                vals.setdefault(c, default)
        return cls(P, F, degree, vals, weak)

    # access
    def domain(self) -> tuple[tuple[int, ...], ...]:
        return chain_domain(self.poset, self.degree, self.weak)

    def __getitem__(self, chain):
        chain = tuple(self.poset.index(c) if isinstance(c, str) else c for c in chain)
        try:
            return self.values[chain]
        except KeyError:
            raise MissingValue(f"no value at {_fmt_chain(self.poset, chain)}") from None

    def is_complete(self) -> bool:
        return len(self.values) == len(self.domain())

    def require_complete(self):
        for c in self.domain():
            if c not in self.values:
                raise MissingValue(f"no value at {_fmt_chain(self.poset, c)}")

    def __eq__(self, other):
        if not isinstance(other, MultCochain):
            return NotImplemented
        return (
            self.poset == other.poset
            and self.field == other.field
            and self.degree == other.degree
            and self.weak == other.weak
            and self.values == other.values
        )

    def __repr__(self):
        return f"MultCochain(degree={self.degree}, weak={self.weak}, field={self.field}, {len(self.values)} values)"

    def _like(self, values) -> "MultCochain":
        return MultCochain(self.poset, self.field, self.degree, values, self.weak)

    def _check_compatible(self, other):
        if (self.poset, self.field, self.degree, self.weak) != (other.poset, other.field, other.degree, other.weak):
            raise ValueError("cochains live on different domains")

    # group operations
    def __mul__(self, other: "MultCochain") -> "MultCochain":
        self._check_compatible(other)
        self.require_complete()
        other.require_complete()
        F = self.field
        return self._like({c: F.mul(v, other.values[c]) for c, v in self.values.items()})

    def inverse(self) -> "MultCochain":
        F = self.field
        return self._like({c: F.inv(v) for c, v in self.values.items()})

    def __truediv__(self, other: "MultCochain") -> "MultCochain":
        return self * other.inverse()

    def __pow__(self, e: int) -> "MultCochain":
        F = self.field
        return self._like({c: F.pow(v, e) for c, v in self.values.items()})

    def is_one(self) -> bool:
        return self.is_complete() and all(v == self.field.one for v in self.values.values())

    def act(self, sigma: PosetAutomorphism) -> "MultCochain":
        """``c^sigma(x0, ..., xn) = c(sigma x0, ..., sigma xn)``."""
        self.require_complete()
        return self._like({c: self.values[tuple(sigma(x) for x in c)] for c in self.domain()})

    def strict_part(self) -> "MultCochain":
        """Restriction to strictly increasing chains."""
        strict = set(chain_domain(self.poset, self.degree, False))
        return MultCochain(
            self.poset, self.field, self.degree,
            {c: v for c, v in self.values.items() if c in strict}, weak=False,
        )

    def labelled(self) -> dict[tuple[str, ...], object]:
        els = self.poset.elements
        return {tuple(els[i] for i in c): v for c, v in sorted(self.values.items())}

    def to_json(self) -> list:
        return [
            {"chain": list(chain), "value": self.field.to_json(v)}
            for chain, v in self.labelled().items()
        ]


def _fmt_chain(P: Poset, chain) -> str:
    return "(" + ",".join(P.elements[i] if isinstance(i, int) and 0 <= i < P.n else str(i) for i in chain) + ")"


def coboundary(a: MultCochain) -> MultCochain:
    """``(da)(s0..s_{n+1}) = prod_i a(s without s_i)^((-1)^i)``."""
    a.require_complete()
    F = a.field
    out = {}
    for chain in chain_domain(a.poset, a.degree + 1, a.weak):
        v = F.one
        for i, face in _faces(chain):
            fv = a.values[face]
            v = F.mul(v, fv if i % 2 == 0 else F.inv(fv))
        out[chain] = v
    return MultCochain(a.poset, F, a.degree + 1, out, a.weak)


def is_cocycle(c: MultCochain) -> bool:
    return coboundary(c).is_one()


def cocycle_violations(c: MultCochain) -> list[tuple[int, ...]]:
    """Chains of degree ``n + 1`` where the cocycle condition fails."""
    d = coboundary(c)
    return [chain for chain, v in sorted(d.values.items()) if v != c.field.one]


def normalize_2cocycle(lam: MultCochain) -> tuple[MultCochain, MultCochain]:
    """Return ``(mu, alpha)`` with ``mu = lam * d(alpha)`` normalized.

    ``alpha(x, y) = lam(x, x, y)^-1``; the result satisfies
    ``mu(x,x,x) = mu(x,x,y) = mu(x,y,y) = mu(y,y,y) = 1`` for all ``x <= y``.
    """
    if lam.degree != 2 or not lam.weak:
        raise ValueError("normalization applies to weak degree-2 cochains")
    if not is_cocycle(lam):
        raise NotACocycle("cannot normalize a cochain that is not a cocycle")
    F = lam.field
    alpha = MultCochain(
        lam.poset, F, 1,
        {(x, y): F.inv(lam.values[(x, x, y)]) for x, y in chain_domain(lam.poset, 1, True)},
        weak=True,
    )
    return lam * coboundary(alpha), alpha


def is_normalized(lam: MultCochain) -> bool:
    one = lam.field.one
    return all(
        lam.values[(x, x, y)] == one and lam.values[(x, y, y)] == one
        for x, y in chain_domain(lam.poset, 1, True)
    )


# ---- exponent coordinates ------------------------------------------------


class _UnitCoordinates:
    """Integer coordinates for the units of a concrete field.

    F_q gives one component modulo q - 1 (discrete log to the fixed
    generator). Q gives a sign component modulo 2 plus one component over Z
    (modulus 0) for every prime that occurs in the supplied values.
    """

    def __init__(self, field: Field, values: Iterable):
        self.field = field
        if isinstance(field, FiniteField):
            self.moduli = [field.q - 1]
            self.primes: list[int] = []
        elif isinstance(field, Rationals):
            primes = set()
            for v in values:
                primes.update(Rationals.unit_exponents(v)[1])
            self.primes = sorted(primes)
            self.moduli = [2] + [0] * len(self.primes)
        else:
            raise SymbolicFieldUnsupported(f"{field} has no concrete unit group")

    def encode(self, v) -> list[int]:
        if isinstance(self.field, FiniteField):
            return [self.field.dlog(v)]
        sign, exps = Rationals.unit_exponents(v)
        return [sign] + [exps.get(p, 0) for p in self.primes]

    def decode(self, coords: list[int]):
        if isinstance(self.field, FiniteField):
            return self.field.exp(coords[0])
        return Rationals.from_exponents(coords[0], dict(zip(self.primes, coords[1:])))


@lru_cache(maxsize=256)
def coboundary_matrix(P: Poset, degree: int, weak: bool) -> IntMatrix:
    """Exponent matrix of d: C^(degree-1) -> C^degree (rows: degree chains)."""
    rows = chain_domain(P, degree, weak)
    cols = chain_domain(P, degree - 1, weak)
    index = _domain_index(P, degree - 1, weak)
    mat = [[0] * len(cols) for _ in rows]
    if degree >= 1:
        for r, chain in enumerate(rows):
            for i, face in _faces(chain):
                mat[r][index[face]] += -1 if i % 2 else 1
    return IntMatrix.from_rows(mat, len(cols))


@dataclass(frozen=True)
class _SolvedSystem:
    U: tuple
    V: tuple
    diag: tuple
    rows: int
    cols: int


@lru_cache(maxsize=256)
def _coboundary_snf(P: Poset, degree: int, weak: bool) -> _SolvedSystem:
    M = coboundary_matrix(P, degree, weak)
    U, S, V = smith_normal_form(M)
    return _SolvedSystem(U.entries, V.entries, tuple(S.diagonal()), M.rows, M.cols)


def _mod(v: int, m: int) -> int:
    return v % m if m else v


def _solve_component(sys: _SolvedSystem, y: list[int], m: int):
    """Reduce ``y`` modulo the image of the coboundary, one coordinate system.

    Returns ``(coords, shift)`` where ``coords`` is the class invariant and
    ``shift`` solves ``D shift = y - representative`` (mod m).
    """
    yp = [_mod(sum(u * v for u, v in zip(row, y)), m) for row in sys.U]
    coords = []
    xp = [0] * sys.cols
    for i in range(sys.rows):
        s = sys.diag[i] if i < len(sys.diag) else 0
        if s:
            g = gcd(s, m) if m else s
            c = yp[i] % g
            coords.append(c)
            rhs = yp[i] - c
            if m:
                mg = m // g
                xp[i] = (rhs // g) * pow(s // g, -1, mg) % mg if mg > 1 else 0
            else:
                xp[i] = rhs // s
        else:
            coords.append(_mod(yp[i], m))
    shift = [_mod(sum(v * x for v, x in zip(row, xp)), m) for row in sys.V]
    return coords, shift


@dataclass
class TrivialityReport:
    """Outcome of reducing a cocycle modulo coboundaries.

    ``coordinates`` identifies the class (all zero iff trivial);
    ``representative`` is a canonical cocycle in the same class;
    ``witness`` satisfies ``coboundary(witness) == cocycle`` when trivial.
    """

    trivial: bool
    coordinates: tuple
    representative: MultCochain
    witness: MultCochain | None


def reduce_modulo_coboundaries(c: MultCochain) -> TrivialityReport:
    c.require_complete()
    if not is_cocycle(c):
        raise NotACocycle("input is not a cocycle")
    P, F, n, weak = c.poset, c.field, c.degree, c.weak
    rows = chain_domain(P, n, weak)
    cols = chain_domain(P, n - 1, weak)
    coder = _UnitCoordinates(F, c.values.values())
    encoded = [coder.encode(c.values[ch]) for ch in rows]
    sys = _coboundary_snf(P, n, weak) if n >= 1 else None
    coords_all = []
    shift_all = []
    for k, m in enumerate(coder.moduli):
        y = [e[k] for e in encoded]
        if sys is None:
            coords_all.append(tuple(_mod(v, m) for v in y))
            shift_all.append([])
            continue
        coords, shift = _solve_component(sys, y, m)
        coords_all.append(tuple(coords))
        shift_all.append(shift)
    trivial = all(v == 0 for comp in coords_all for v in comp)
    if n >= 1:
        a = MultCochain(
            P, F, n - 1,
            {ch: coder.decode([shift_all[k][j] for k in range(len(coder.moduli))]) for j, ch in enumerate(cols)},
            weak,
        )
        rep = c / coboundary(a)
    else:
        a = None
        rep = c
    witness = None
    if trivial and a is not None:
        witness = a
        if coboundary(witness) != c:  # pragma: no cover - algebraic identity
            raise AssertionError("coboundary witness failed verification")
    return TrivialityReport(trivial, tuple(coords_all), rep, witness)


def is_coboundary(c: MultCochain) -> bool:
    return reduce_modulo_coboundaries(c).trivial


def same_class(c1: MultCochain, c2: MultCochain) -> tuple[bool, MultCochain | None]:
    """Whether ``c1 / c2`` is a coboundary, with a witness ``a``: ``c1 = c2 * da``."""
    c1._check_compatible(c2)
    rep = reduce_modulo_coboundaries(c1 / c2)
    return rep.trivial, rep.witness


# ---- transversals over finite fields -------------------------------------


def _coordinate_key(c: MultCochain) -> tuple:
    return reduce_modulo_coboundaries(c).coordinates


def cocycle_generators(P: Poset, degree: int, F: FiniteField, weak: bool = False) -> list[MultCochain]:
    """Generators of the group of degree-``degree`` cocycles over F_q."""
    if not isinstance(F, FiniteField):
        raise SymbolicFieldUnsupported("cocycle generators are enumerated over finite fields only")
    m = F.q - 1
    dom = chain_domain(P, degree, weak)
    nxt = chain_domain(P, degree + 1, weak)
    if not nxt:
        vectors = [[int(i == j) for j in range(len(dom))] for i in range(len(dom))]
    else:
        sys = _coboundary_snf(P, degree + 1, weak)
        vectors = []
        for i in range(sys.cols):
            s = sys.diag[i] if i < len(sys.diag) else 0
            scale = m // gcd(s, m) if s else 1
            if m == 1 or (s and scale == m):
                continue  # generator vanishes mod q - 1
            vectors.append([row[i] * scale for row in sys.V])
    gens = []
    for vec in vectors:
        vals = {ch: F.exp(v) for ch, v in zip(dom, vec)}
        g = MultCochain(P, F, degree, vals, weak)
        if not g.is_one():
            gens.append(g)
    return gens


def cohomology_transversal(P: Poset, degree: int, F: FiniteField, weak: bool = False) -> list[MultCochain]:
    """One canonical cocycle per class of ``H^degree`` with F_q^* coefficients.

    Classes are listed in order of their coordinates, so the trivial class
    (the constant cochain) comes first.
    """
    gens = cocycle_generators(P, degree, F, weak)
    one = MultCochain.constant(P, F, degree, 1, weak)
    start = reduce_modulo_coboundaries(one)
    seen = {start.coordinates: start.representative}
    queue = deque([one])
    while queue:
        cur = queue.popleft()
        for g in gens:
            nxt = cur * g
            rep = reduce_modulo_coboundaries(nxt)
            if rep.coordinates not in seen:
                seen[rep.coordinates] = rep.representative
                queue.append(rep.representative)
    return [seen[k] for k in sorted(seen)]


# ---- universal coefficients ----------------------------------------------


@dataclass(frozen=True)
class UnitGroupExpr:
    """``(K^*)^unit_rank + Z/c1 + ... + extra`` for a cohomology group.

    ``extra`` lists summands that are neither finite cyclic nor copies of
    ``K^*`` (for example ``Ext(Z/3, Q^*)``); they make the group infinite or,
    for a non-closed symbolic field, of undetermined order.
    """

    field: Field
    unit_rank: int
    cyclic: tuple[int, ...]
    extra: tuple[str, ...] = ()

    @property
    def order(self) -> int | None:
        """Group order, or None when infinite or undetermined."""
        if self.extra:
            return None
        out = 1
        for c in self.cyclic:
            out *= c
        if self.unit_rank:
            if isinstance(self.field, FiniteField):
                out *= (self.field.q - 1) ** self.unit_rank
            else:
                return None
        return out

    def cyclic_factors(self) -> tuple[int, ...]:
        """Cyclic decomposition when the group is finite and explicit."""
        if isinstance(self.field, FiniteField) and not self.extra:
            parts = list(self.cyclic)
            if self.field.q > 2:
                parts += [self.field.q - 1] * self.unit_rank
            return tuple(sorted(parts))
        if self.unit_rank or self.extra:
            raise ValueError("group is not an explicit finite group")
        return tuple(sorted(self.cyclic))

    def __str__(self):
        parts = []
        unit = f"({self.field})*" if isinstance(self.field, FiniteField) else f"{self.field}*"
        if self.unit_rank == 1:
            parts.append(unit)
        elif self.unit_rank > 1:
            parts.append(f"{unit}^{self.unit_rank}")
        parts += [f"Z/{c}" for c in self.cyclic]
        parts += list(self.extra)
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {
            "field": str(self.field),
            "unit_rank": self.unit_rank,
            "cyclic": list(self.cyclic),
            "extra": list(self.extra),
            "order": self.order,
            "description": str(self),
        }


def _prime_to(d: int, p: int) -> int:
    if p == 0:
        return d
    while d % p == 0:
        d //= p
    return d


def universal_coefficients(h_n: FinAbGroup, h_prev: FinAbGroup | None, F: Field) -> UnitGroupExpr:
    """``Hom(H_n, K^*) + Ext(H_{n-1}, K^*)`` simplified for the field ``F``."""
    h_prev = h_prev or FinAbGroup(0)
    cyclic: list[int] = []
    extra: list[str] = []
    for d in h_n.torsion:
        if isinstance(F, FiniteField):
            cyclic.append(gcd(d, F.q - 1))
        elif isinstance(F, Rationals):
            cyclic.append(gcd(d, 2))
        elif F.closed:
            # roots of unity of order d in an algebraically closed field
            cyclic.append(_prime_to(d, F.characteristic))
        else:
            extra.append(f"Hom(Z/{d}, {F}*)")
    for d in h_prev.torsion:
        if isinstance(F, FiniteField):
            cyclic.append(gcd(d, F.q - 1))
        elif isinstance(F, Rationals):
            # Q^* = Z/2 + free abelian on the primes
            cyclic.append(gcd(d, 2))
            extra.append(f"(Z/{d})^(inf)")
        elif F.closed:
            pass  # K^* is divisible, so Ext vanishes
        else:
            extra.append(f"Ext(Z/{d}, {F}*)")
    return UnitGroupExpr(F, h_n.free_rank, tuple(sorted(c for c in cyclic if c > 1)), tuple(extra))


def cohomology_structure(
    P: Poset | None, n: int, F: Field, groups: Mapping[int, FinAbGroup] | None = None
) -> UnitGroupExpr:
    """``H^n`` of the order complex with coefficients in ``F^*``.

    ``groups`` overrides the computed integral homology in the given degrees,
    which lets callers evaluate the formula on groups no small poset realizes.
    """
    groups = dict(groups or {})
    K = OrderComplex(P) if P is not None and not {n, n - 1} <= groups.keys() else None

    def h(k):
        if k < 0:
            return FinAbGroup(0)
        if k in groups:
            return groups[k]
        if K is None:
            raise ValueError(f"no poset given and no homology supplied in degree {k}")
        return homology(K, k)

    return universal_coefficients(h(n), h(n - 1), F)
