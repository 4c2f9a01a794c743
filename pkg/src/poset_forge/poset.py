"""Finite posets and preorders, closed subposets, automorphisms.

Elements are string labels; everything internal works on their positions in
declaration order, and ties are always broken toward the smaller position.
"""

from __future__ import annotations

import itertools
import json
import os
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import factorial
from typing import Iterable, Iterator, Sequence

from .errors import (
    CycleDetected,
    DuplicateElement,
    MismatchedParent,
    NotClosed,
    NotConnected,
    ParseError,
    Singleton,
    SizeLimitExceeded,
    UnknownElement,
)

DEFAULT_MAX_CLOSED = 20
DEFAULT_MAX_AUT_FACTORIAL = 10


def size_guard(default: int) -> int:
    """Enumeration guard, overridable through ``POSET_FORGE_MAX_ELEMENTS``."""
    raw = os.environ.get("POSET_FORGE_MAX_ELEMENTS")
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"POSET_FORGE_MAX_ELEMENTS must be an integer, got {raw!r}")


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _closure(n: int, pairs: Iterable[tuple[int, int]]) -> list[int]:
    """Reflexive-transitive closure, returned as per-element up-set bitmasks."""
    up = [1 << i for i in range(n)]
    for i, j in pairs:
        up[i] |= 1 << j
    changed = True
    while changed:
        changed = False
        for i in range(n):
            acc = up[i]
            for j in _bits(up[i] & ~(1 << i)):
                acc |= up[j]
            if acc != up[i]:
                up[i] = acc
                changed = True
    return up


@dataclass(frozen=True)
class Preorder:
    """Reflexive transitive relation on labelled elements."""

    elements: tuple[str, ...]
    leq: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        n = len(self.elements)
        if len(set(self.elements)) != n:
            dup = next(e for e in self.elements if self.elements.count(e) > 1)
            raise DuplicateElement(f"duplicate element {dup!r}")
        if len(self.leq) != n or any(len(row) != n for row in self.leq):
            raise ValueError("relation matrix has the wrong shape")
        for i in range(n):
            if not self.leq[i][i]:
                raise ValueError(f"relation is not reflexive at {self.elements[i]!r}")
        up = self.up_masks
        for i in range(n):
            for j in _bits(up[i]):
                if up[j] & ~up[i]:
                    raise ValueError("relation is not transitive")

    @classmethod
    def from_masks(cls, elements: Sequence[str], up: Sequence[int]):
        n = len(elements)
        leq = tuple(tuple(bool(up[i] >> j & 1) for j in range(n)) for i in range(n))
        return cls(tuple(elements), leq)

    @classmethod
    def from_relations(cls, elements: Sequence[str], pairs: Iterable[tuple[str, str]]):
        elements = tuple(elements)
        index = {e: i for i, e in enumerate(elements)}
        if len(index) != len(elements):
            raise DuplicateElement("duplicate element in element list")
        idx_pairs = []
        for a, b in pairs:
            for e in (a, b):
                if e not in index:
                    raise UnknownElement(f"unknown element {e!r}")
            idx_pairs.append((index[a], index[b]))
        return cls.from_masks(elements, _closure(len(elements), idx_pairs))

    @property
    def n(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {e: i for i, e in enumerate(self.elements)}

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownElement(f"unknown element {label!r}") from None

    @cached_property
    def up_masks(self) -> tuple[int, ...]:
        return tuple(
            sum(1 << j for j in range(self.n) if self.leq[i][j]) for i in range(self.n)
        )

    @cached_property
    def down_masks(self) -> tuple[int, ...]:
        return tuple(
            sum(1 << i for i in range(self.n) if self.leq[i][j]) for j in range(self.n)
        )

    def le(self, i: int, j: int) -> bool:
        return self.leq[i][j]

    def lt(self, i: int, j: int) -> bool:
        return i != j and self.leq[i][j]

    def is_poset(self) -> bool:
        return all(
            not (self.leq[i][j] and self.leq[j][i])
            for i in range(self.n)
            for j in range(i + 1, self.n)
        )

    def classes(self) -> list[tuple[int, ...]]:
        """Equivalence classes of ``x ~ y`` iff ``x <= y <= x``."""
        seen, out = set(), []
        for i in range(self.n):
            if i in seen:
                continue
            cls = tuple(j for j in range(self.n) if self.leq[i][j] and self.leq[j][i])
            seen.update(cls)
            out.append(cls)
        return out

    def quotient(self) -> "Poset":
        classes = self.classes()
        labels = ["~".join(self.elements[i] for i in c) for c in classes]
        pairs = [
            (labels[a], labels[b])
            for a, ca in enumerate(classes)
            for b, cb in enumerate(classes)
            if a != b and self.leq[ca[0]][cb[0]]
        ]
        return Poset.from_relations(labels, pairs)


@dataclass(frozen=True)
class Poset(Preorder):
    """Finite partially ordered set."""

    def __post_init__(self):
        super().__post_init__()
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if self.leq[i][j] and self.leq[j][i]:
                    raise CycleDetected(
                        f"cycle between {self.elements[i]!r} and {self.elements[j]!r}"
                    )

    @classmethod
    def from_masks(cls, elements: Sequence[str], up: Sequence[int]):
        n = len(elements)
        for i in range(n):
            for j in range(i + 1, n):
                if up[i] >> j & 1 and up[j] >> i & 1:
                    raise CycleDetected(
                        f"cycle between {elements[i]!r} and {elements[j]!r}"
                    )
        return super().from_masks(elements, up)

    @classmethod
    def chain(cls, n: int, prefix: str = "") -> "Poset":
        labels = [f"{prefix}{i + 1}" for i in range(n)] if prefix else _letters(n)
        return cls.from_relations(labels, zip(labels, labels[1:]))

    @classmethod
    def antichain(cls, n: int) -> "Poset":
        return cls.from_relations(_letters(n), [])

    # ---- structure -------------------------------------------------------

    def intervals(self) -> list[tuple[int, int]]:
        """All pairs ``i <= j`` in lexicographic index order."""
        return [(i, j) for i in range(self.n) for j in range(self.n) if self.leq[i][j]]

    def strict_pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in self.intervals() if i != j]

    def interval(self, i: int, j: int) -> int:
        """Bitmask of ``[i, j]``."""
        return self.up_masks[i] & self.down_masks[j]

    def minimal(self) -> list[int]:
        return [i for i in range(self.n) if self.down_masks[i] == 1 << i]

    def maximal(self) -> list[int]:
        return [i for i in range(self.n) if self.up_masks[i] == 1 << i]

    def induced(self, members: Iterable[int]) -> "Poset":
        members = sorted(members)
        labels = [self.elements[i] for i in members]
        pairs = [
            (self.elements[a], self.elements[b])
            for a in members
            for b in members
            if a != b and self.leq[a][b]
        ]
        return Poset.from_relations(labels, pairs)

    def to_json(self) -> dict:
        return {
            "elements": list(self.elements),
            "covers": [[self.elements[a], self.elements[b]] for a, b in hasse_covers(self)],
        }

    def to_text(self) -> str:
        covers = " ".join(f"{self.elements[a]}<{self.elements[b]}" for a, b in hasse_covers(self))
        text = "elements: " + " ".join(self.elements) + "\n"
        if covers:
            text += "covers: " + covers + "\n"
        return text


def _letters(n: int) -> list[str]:
    if n <= 26:
        return [chr(ord("a") + i) for i in range(n)]
    return [f"e{i + 1}" for i in range(n)]


# ---- parsing -------------------------------------------------------------


def parse_poset(text: str) -> Poset:
    """Parse the ``elements:`` / ``covers:`` text format."""
    elements: list[str] = []
    pairs: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise ParseError(f"line {lineno}: expected 'key: values'")
        key = key.strip().lower()
        if key == "elements":
            for token in rest.split():
                if token in elements:
                    raise DuplicateElement(f"duplicate element {token!r}")
                elements.append(token)
        elif key in ("covers", "relations"):
            for token in rest.split():
                chain = token.split("<")
                if len(chain) < 2 or any(not part for part in chain):
                    raise ParseError(f"line {lineno}: malformed pair {token!r}")
                pairs.extend(zip(chain, chain[1:]))
        else:
            raise ParseError(f"line {lineno}: unknown key {key!r}")
    known = set(elements)
    for a, b in pairs:
        for e in (a, b):
            if e not in known:
                raise UnknownElement(f"unknown element {e!r}")
        if a == b:
            raise CycleDetected(f"{a!r} < {a!r} violates antisymmetry")
    return Poset.from_relations(elements, pairs)


def poset_from_json(data: dict) -> Poset:
    return Poset.from_relations(data["elements"], [tuple(p) for p in data.get("covers", [])])


def poset_to_json_text(P: Poset) -> str:
    return json.dumps(P.to_json())


# ---- covers, connectivity ------------------------------------------------


def hasse_covers(P: Poset) -> list[tuple[int, int]]:
    out = []
    for x, y in P.strict_pairs():
        between = P.interval(x, y) & ~(1 << x) & ~(1 << y)
        if not between:
            out.append((x, y))
    return out


def components(P: Preorder) -> list[tuple[int, ...]]:
    """Connected components of the comparability graph, by least element."""
    seen = 0
    out = []
    for start in range(P.n):
        if seen >> start & 1:
            continue
        comp = 1 << start
        queue = deque([start])
        while queue:
            v = queue.popleft()
            nbrs = (P.up_masks[v] | P.down_masks[v]) & ~comp
            comp |= nbrs
            queue.extend(_bits(nbrs))
        seen |= comp
        out.append(tuple(_bits(comp)))
    return out


def is_connected(P: Preorder) -> bool:
    return len(components(P)) == 1


def _graph_connected(vertices: set, adjacent) -> bool:
    if not vertices:
        return True
    start = min(vertices)
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in vertices:
            if w not in seen and adjacent(v, w):
                seen.add(w)
                queue.append(w)
    return seen == vertices


def removable_extremal(P: Poset) -> int:
    """A minimal or maximal element whose removal keeps ``P`` connected.

    Candidates are the non-cut vertices of the bipartite graph joining each
    minimal element to the maximal elements above it; these are exactly the
    vertices that can be leaves of a spanning tree of that graph. The least
    such index is returned.
    """
    if P.n < 2:
        raise Singleton("need at least two elements")
    if not is_connected(P):
        raise NotConnected("poset is not connected")
    mins, maxs = set(P.minimal()), set(P.maximal())
    nodes = mins | maxs

    def adjacent(u, v):
        return (u in mins and v in maxs and P.leq[u][v]) or (
            v in mins and u in maxs and P.leq[v][u]
        )

    for x in sorted(nodes):
        if _graph_connected(nodes - {x}, adjacent):
            rest = P.induced(i for i in range(P.n) if i != x)
            if not is_connected(rest):  # pragma: no cover - guaranteed by the bipartite argument
                raise AssertionError(f"removing {P.elements[x]!r} disconnects the poset")
            return x
    raise AssertionError("no removable extremal vertex")  # pragma: no cover


# ---- automorphisms -------------------------------------------------------


@dataclass(frozen=True)
class PosetAutomorphism:
    poset: Poset
    perm: tuple[int, ...]

    def __call__(self, i: int) -> int:
        return self.perm[i]

    def compose(self, other: "PosetAutomorphism") -> "PosetAutomorphism":
        """``self ∘ other``."""
        return PosetAutomorphism(self.poset, tuple(self.perm[other.perm[i]] for i in range(len(self.perm))))

    def inverse(self) -> "PosetAutomorphism":
        inv = [0] * len(self.perm)
        for i, j in enumerate(self.perm):
            inv[j] = i
        return PosetAutomorphism(self.poset, tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.perm))

    def as_labels(self) -> dict[str, str]:
        els = self.poset.elements
        return {els[i]: els[j] for i, j in enumerate(self.perm)}


def _signatures(P: Preorder, rounds: int = 2) -> list:
    sig = [(bin(P.down_masks[i]).count("1"), bin(P.up_masks[i]).count("1")) for i in range(P.n)]
    for _ in range(rounds):
        sig = [
            (
                sig[i],
                tuple(sorted(sig[j] for j in _bits(P.down_masks[i]))),
                tuple(sorted(sig[j] for j in _bits(P.up_masks[i]))),
            )
            for i in range(P.n)
        ]
    return sig


def _order_maps(P: Preorder, Q: Preorder, limit: int | None = None) -> Iterator[tuple[int, ...]]:
    """Backtracking search for order isomorphisms P -> Q."""
    n = P.n
    if Q.n != n:
        return
    sp, sq = _signatures(P), _signatures(Q)
    if sorted(map(repr, sp)) != sorted(map(repr, sq)):
        return
    image = [-1] * n
    used = [False] * n
    count = 0

    def extend(i):
        nonlocal count
        if i == n:
            count += 1
            if limit is not None and count > limit:
                raise SizeLimitExceeded("automorphism group exceeds the configured size guard")
            yield tuple(image)
            return
        for c in range(n):
            if used[c] or sq[c] != sp[i]:
                continue
            if any(
                P.leq[i][k] != Q.leq[c][image[k]] or P.leq[k][i] != Q.leq[image[k]][c]
                for k in range(i)
            ):
                continue
            image[i] = c
            used[c] = True
            yield from extend(i + 1)
            used[c] = False
        image[i] = -1

    yield from extend(0)


def automorphism_group(P: Poset) -> list[PosetAutomorphism]:
    """All order automorphisms, identity first, then in lexicographic order."""
    limit = factorial(size_guard(DEFAULT_MAX_AUT_FACTORIAL))
    return [PosetAutomorphism(P, perm) for perm in _order_maps(P, P, limit)]


def find_isomorphism(P: Preorder, Q: Preorder) -> tuple[int, ...] | None:
    return next(_order_maps(P, Q), None)


# ---- closed subposets ----------------------------------------------------


@dataclass(frozen=True)
class ClosedSubposet:
    """Subposet of ``parent`` closed under subintervals.

    ``rel`` holds index pairs ``(x, y)`` with ``x <=_S y``, diagonal included.
    """

    parent: Poset
    members: frozenset[int]
    rel: frozenset[tuple[int, int]]

    def __post_init__(self):
        problem = _closed_violation(self.parent, self.members, self.rel)
        if problem:
            raise NotClosed(problem)

    @classmethod
    def from_labels(cls, parent: Poset, members: Iterable[str], pairs: Iterable[tuple[str, str]] = ()):
        """Members plus strict relations; reflexive-transitive closure is taken."""
        idx = frozenset(parent.index(m) for m in members)
        rel = {(i, i) for i in idx}
        for a, b in pairs:
            rel.add((parent.index(a), parent.index(b)))
        return cls(parent, idx, frozenset(_transitive(rel)))

    @classmethod
    def full(cls, P: Poset) -> "ClosedSubposet":
        return cls(P, frozenset(range(P.n)), frozenset(P.intervals()))

    @classmethod
    def discrete(cls, P: Poset, members: Iterable[int] | None = None) -> "ClosedSubposet":
        idx = frozenset(range(P.n) if members is None else members)
        return cls(P, idx, frozenset((i, i) for i in idx))

    @classmethod
    def empty(cls, P: Poset) -> "ClosedSubposet":
        return cls(P, frozenset(), frozenset())

    @classmethod
    def principal_down(cls, P: Poset, x: int) -> "ClosedSubposet":
        """``P_{<=x}`` with the induced order."""
        below = frozenset(_bits(P.down_masks[x]))
        return cls(P, below, frozenset((a, b) for a in below for b in below if P.leq[a][b]))

    def __len__(self) -> int:
        return len(self.members)

    def sorted_members(self) -> list[int]:
        return sorted(self.members)

    def labels(self) -> list[str]:
        return [self.parent.elements[i] for i in self.sorted_members()]

    def strict_rel(self) -> list[tuple[int, int]]:
        return sorted((a, b) for a, b in self.rel if a != b)

    def le(self, a: int, b: int) -> bool:
        return (a, b) in self.rel

    def dimension_vector(self) -> tuple[int, ...]:
        return tuple(int(i in self.members) for i in range(self.parent.n))

    def as_poset(self) -> Poset:
        members = self.sorted_members()
        els = self.parent.elements
        return Poset.from_relations(
            [els[i] for i in members], [(els[a], els[b]) for a, b in self.strict_rel()]
        )

    def sort_key(self):
        return (len(self.members), tuple(sorted(self.members)), len(self.rel), tuple(sorted(self.rel)))

    def describe(self) -> str:
        if not self.members:
            return "{}"
        els = self.parent.elements
        rel = " ".join(f"{els[a]}<{els[b]}" for a, b in self.strict_rel())
        text = "{" + ",".join(self.labels()) + "}"
        return text + (f" [{rel}]" if rel else "")

    def to_json(self) -> dict:
        els = self.parent.elements
        return {
            "members": self.labels(),
            "rel": [[els[a], els[b]] for a, b in self.strict_rel()],
        }


def _transitive(rel: set[tuple[int, int]]) -> set[tuple[int, int]]:
    rel = set(rel)
    changed = True
    while changed:
        changed = False
        for a, b in list(rel):
            for c, d in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    return rel


def _closed_violation(P: Poset, members, rel) -> str | None:
    els = P.elements
    for a, b in rel:
        if not (0 <= a < P.n and 0 <= b < P.n):
            return "relation index out of range"
        if not P.leq[a][b]:
            return f"{els[a]} <= {els[b]} does not hold in the parent poset"
        if a not in members or b not in members:
            return f"relation ({els[a]}, {els[b]}) leaves the member set"
    for m in members:
        if (m, m) not in rel:
            return f"relation is not reflexive at {els[m]}"
    for a, b in rel:
        for z in _bits(P.interval(a, b)):
            if (a, z) not in rel or (z, b) not in rel:
                return f"not closed under subintervals: {els[z]} in [{els[a]}, {els[b]}]"
    for a, b in rel:
        for c, d in rel:
            if b == c and (a, d) not in rel:
                return f"not transitive: {els[a]} < {els[b]} < {els[d]}"
    return None


def is_closed(P: Poset, members, rel) -> bool:
    return _closed_violation(P, frozenset(members), frozenset(rel)) is None


def generated_closed_subposet(P: Poset, members: Iterable[int] = (), pairs: Iterable[tuple[int, int]] = ()) -> ClosedSubposet:
    """Smallest closed subposet containing the given members and relations.

    Alternates subinterval closure and transitivity until stable, which also
    covers the interval-overlap merging used when describing supports by
    maximal intervals.
    """
    rel = {(m, m) for m in members}
    for a, b in pairs:
        if not P.leq[a][b]:
            raise NotClosed(f"{P.elements[a]} <= {P.elements[b]} does not hold")
        rel.add((a, b))
    while True:
        grown = set(rel)
        for a, b in rel:
            zs = list(_bits(P.interval(a, b)))
            for u in zs:
                for v in zs:
                    if P.leq[u][v]:
                        grown.add((u, v))
        grown = _transitive(grown)
        if grown == rel:
            break
        rel = grown
    mem = frozenset(a for a, _ in rel)
    return ClosedSubposet(P, mem, frozenset(rel))


def closed_subposets(P: Poset) -> list[ClosedSubposet]:
    """Every closed subposet of ``P``, the empty one and ``P`` itself included.

    Intervals are decided smallest first, so all proper subintervals of an
    interval are settled before it. An interval may be included only when all
    of its proper subintervals are, and must be included when it is split by
    two included intervals ``[x, y]`` and ``[y, z]``.
    """
    guard = size_guard(DEFAULT_MAX_CLOSED)
    if P.n > guard:
        raise SizeLimitExceeded(
            f"closed-subposet enumeration refused for {P.n} > {guard} elements"
        )
    ivs = sorted(P.intervals(), key=lambda t: (bin(P.interval(*t)).count("1"), t))
    pos = {iv: k for k, iv in enumerate(ivs)}
    subs, splits = [], []
    for x, y in ivs:
        zs = list(_bits(P.interval(x, y)))
        sub = 0
        for u in zs:
            for v in zs:
                if P.leq[u][v] and (u, v) != (x, y):
                    sub |= 1 << pos[(u, v)]
        subs.append(sub)
        splits.append(
            [(pos[(x, z)], pos[(z, y)]) for z in zs if z != x and z != y]
        )

    out: list[ClosedSubposet] = []
    total = len(ivs)

    def emit(mask):
        rel = frozenset(ivs[k] for k in _bits(mask))
        members = frozenset(a for a, b in rel if a == b)
        out.append(ClosedSubposet.__new__(ClosedSubposet))
        object.__setattr__(out[-1], "parent", P)
        object.__setattr__(out[-1], "members", members)
        object.__setattr__(out[-1], "rel", rel)

    # explicit stack keeps recursion depth bounded for larger posets
    stack = [(0, 0)]
    while stack:
        k, mask = stack.pop()
        if k == total:
            emit(mask)
            continue
        allowed = mask & subs[k] == subs[k]
        forced = any(mask >> a & 1 and mask >> b & 1 for a, b in splits[k])
        if forced:
            if allowed:
                stack.append((k + 1, mask | 1 << k))
            continue
        stack.append((k + 1, mask))
        if allowed:
            stack.append((k + 1, mask | 1 << k))
    out.sort(key=ClosedSubposet.sort_key)
    return out


def wedge(S: ClosedSubposet, T: ClosedSubposet) -> ClosedSubposet:
    if S.parent != T.parent:
        raise MismatchedParent("closed subposets belong to different posets")
    return ClosedSubposet(S.parent, S.members & T.members, S.rel & T.rel)


# ---- enumeration of small posets -----------------------------------------


def canonical_key(P: Preorder) -> tuple:
    """Isomorphism invariant: least relation bitstring over signature-respecting relabellings."""
    n = P.n
    sig = _signatures(P)
    order = sorted(range(n), key=lambda i: repr(sig[i]))
    groups = [list(g) for _, g in itertools.groupby(order, key=lambda i: repr(sig[i]))]
    best = None
    for parts in itertools.product(*(itertools.permutations(g) for g in groups)):
        perm = [i for part in parts for i in part]
        pos = {v: k for k, v in enumerate(perm)}
        code = tuple(sum(1 << pos[j] for j in _bits(P.up_masks[i])) for i in perm)
        if best is None or code < best:
            best = code
    sig_key = tuple(sorted(repr(s) for s in sig))
    return (n, sig_key, best)


def _down_sets(P: Poset) -> list[int]:
    """All order ideals, as bitmasks."""
    out = []
    n = P.n
    for mask in range(1 << n):
        if all(P.down_masks[i] & ~mask == 0 for i in _bits(mask)):
            out.append(mask)
    return out


def all_posets(n: int, connected: bool = False) -> list[Poset]:
    """One representative per isomorphism class of posets on ``n`` elements."""
    reps = list(_all_posets(n))
    if connected:
        reps = [P for P in reps if P.n > 0 and is_connected(P)]
    return reps


@lru_cache(maxsize=None)
def _all_posets(n: int) -> tuple[Poset, ...]:
    # every poset is a smaller one plus a new maximal element over an order ideal
    if n == 0:
        reps = [Poset((), ())]
    else:
        reps = []
        seen = set()
        for Q in _all_posets(n - 1):
            for ideal in _down_sets(Q):
                up = list(Q.up_masks) + [1 << (n - 1)]
                for i in _bits(ideal):
                    up[i] |= 1 << (n - 1)
                P = Poset.from_masks(_letters(n), up)
                key = canonical_key(P)
                if key not in seen:
                    seen.add(key)
                    reps.append(P)
    return tuple(reps)
