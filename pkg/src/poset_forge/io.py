"""Readers for cochain, representation, and multiplication-table files."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .cocycles import MultCochain, chain_domain
from .deformation import StructureConstantAlgebra
from .errors import ParseError, UnknownElement
from .fields import Field, parse_field
from .poset import ClosedSubposet, Poset, hasse_covers, parse_poset
from .thin import ThinRep


def read_text(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def load_poset(path) -> Poset:
    return parse_poset(read_text(path))


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


@dataclass
class CochainFile:
    poset_path: str | None
    entries: list[tuple[tuple[str, ...], str]]

    @property
    def degree(self) -> int | None:
        return len(self.entries[0][0]) - 1 if self.entries else None

    def has_repeats(self) -> bool:
        return any(len(set(chain)) < len(chain) for chain, _ in self.entries)


def parse_cochain_file(text: str) -> CochainFile:
    """Lines ``x y z : value``; an optional ``poset: path`` header."""
    poset_path = None
    entries = []
    for lineno, line in _lines(text):
        if line.startswith("poset:"):
            poset_path = line[len("poset:"):].strip()
            continue
        left, sep, right = line.partition(":")
        chain = tuple(left.split())
        if not sep or not chain or len(right.split()) != 1:
            raise ParseError(f"line {lineno}: expected 'x y ... : value'")
        entries.append((chain, right.strip()))
    lengths = {len(c) for c, _ in entries}
    if len(lengths) > 1:
        raise ParseError("cochain lines have different chain lengths")
    return CochainFile(poset_path, entries)


def build_cochain(cf: CochainFile, P: Poset, F: Field, degree: int | None = None, weak: bool | None = None) -> MultCochain:
    """Values from the file, 1 on every unlisted chain.

    Unless ``weak`` is given, degenerate chains are used exactly when the file
    lists one; filling them with 1 keeps cocycles cocycles either way.
    """
    if degree is None:
        degree = cf.degree
        if degree is None:
            raise ParseError("empty cochain file: pass the degree explicitly")
    if cf.degree is not None and cf.degree != degree:
        raise ParseError(f"cochain file has degree {cf.degree}, expected {degree}")
    if weak is None:
        weak = cf.has_repeats()
    domain = set(chain_domain(P, degree, weak))
    values = {}
    for chain, raw in cf.entries:
        idx = tuple(P.index(x) for x in chain)
        if idx not in domain:
            raise ParseError(f"({' '.join(chain)}) is not a chain of the poset")
        if idx in values:
            raise ParseError(f"duplicate value for ({' '.join(chain)})")
        values[idx] = F.parse(raw)
    for c in chain_domain(P, degree, weak):
        values.setdefault(c, F.one)
    return MultCochain(P, F, degree, values, weak)


def resolve(base, rel: str) -> Path:
    p = Path(rel)
    return p if p.is_absolute() else Path(base).parent / p


def load_cochain(path, F: Field, poset: Poset | None = None, degree: int | None = None, weak: bool | None = None):
    cf = parse_cochain_file(read_text(path))
    if poset is None:
        if cf.poset_path is None:
            raise ParseError(f"{path}: no poset given (add a 'poset:' line or pass one)")
        poset = load_poset(resolve(path, cf.poset_path))
    return build_cochain(cf, poset, F, degree, weak), poset


@dataclass
class RepFile:
    poset_path: str | None
    field: str | None
    support: list[str]
    rel: list[tuple[str, str]] | None
    alpha: list[tuple[str, str, str]]


def parse_rep_file(text: str) -> RepFile:
    """``poset:``, ``field:``, ``support:``, ``rel:`` (pairs or ``*``), ``alpha: x y value``."""
    rf = RepFile(None, None, [], None, [])
    seen_support = False
    for lineno, line in _lines(text):
        key, sep, rest = line.partition(":")
        if not sep:
            raise ParseError(f"line {lineno}: expected 'key: values'")
        key, rest = key.strip().lower(), rest.strip()
        if key == "poset":
            rf.poset_path = rest
        elif key == "field":
            rf.field = rest
        elif key == "support":
            rf.support.extend(rest.split())
            seen_support = True
        elif key == "rel":
            if rest == "*":
                rf.rel = None
                continue
            rf.rel = rf.rel or []
            for tok in rest.split():
                parts = tok.split("<")
                if len(parts) < 2 or not all(parts):
                    raise ParseError(f"line {lineno}: malformed pair {tok!r}")
                rf.rel.extend(zip(parts, parts[1:]))
        elif key == "alpha":
            parts = rest.split()
            if len(parts) != 3:
                raise ParseError(f"line {lineno}: expected 'alpha: x y value'")
            rf.alpha.append((parts[0], parts[1], parts[2]))
        else:
            raise ParseError(f"line {lineno}: unknown key {key!r}")
    if not seen_support:
        raise ParseError("representation file needs a 'support:' line")
    return rf


def build_rep(rf: RepFile, P: Poset, F: Field) -> ThinRep:
    """Unlisted alpha values on covers of the support are 1; longer relations
    are filled in multiplicatively from the covers."""
    members = [P.index(x) for x in rf.support]
    if rf.rel is None:
        pairs = [(P.elements[a], P.elements[b]) for a in members for b in members if a != b and P.leq[a][b]]
    else:
        pairs = rf.rel
        for a, b in pairs:
            if a not in rf.support or b not in rf.support:
                raise UnknownElement(f"relation {a}<{b} leaves the support")
    S = ClosedSubposet.from_labels(P, rf.support, pairs)
    given = {}
    for a, b, raw in rf.alpha:
        pair = (P.index(a), P.index(b))
        if pair not in S.rel:
            raise ParseError(f"alpha given for {a},{b} which is not a relation of the support")
        given[pair] = F.parse(raw)
    alpha = {(z, z): F.one for z in S.members}
    alpha.update({k: v for k, v in given.items() if k[0] == k[1]})
    strict = sorted(S.strict_rel(), key=lambda p: bin(P.interval(*p)).count("1"))
    for x, z in strict:
        if (x, z) in given:
            alpha[(x, z)] = given[(x, z)]
            continue
        mid = next((y for y in S.sorted_members() if y not in (x, z) and (x, y) in S.rel and (y, z) in S.rel), None)
        alpha[(x, z)] = F.one if mid is None else F.mul(alpha[(x, mid)], alpha[(mid, z)])
    return ThinRep(P, F, S, alpha)


def load_rep(path, field: Field | None = None, poset: Poset | None = None) -> ThinRep:
    rf = parse_rep_file(read_text(path))
    if field is None:
        if rf.field is None:
            raise ParseError(f"{path}: no field given (add a 'field:' line or pass --field)")
        field = parse_field(rf.field)
    if poset is None:
        if rf.poset_path is None:
            raise ParseError(f"{path}: representation file needs a 'poset:' line")
        poset = load_poset(resolve(path, rf.poset_path))
    return build_rep(rf, poset, field)


def rep_to_text(M: ThinRep, poset_path: str) -> str:
    els = M.parent.elements
    S = M.support
    lines = [f"poset: {poset_path}", f"field: {M.field.q if hasattr(M.field, 'q') else 'Q'}"]
    lines.append("support: " + " ".join(S.labels()))
    sub = S.as_poset()
    covers = [(S.sorted_members()[a], S.sorted_members()[b]) for a, b in hasse_covers(sub)]
    lines.append("rel: " + " ".join(f"{els[a]}<{els[b]}" for a, b in covers))
    for a, b in covers:
        v = M.alpha[(a, b)]
        if v != M.field.one:
            lines.append(f"alpha: {els[a]} {els[b]} {M.field.fmt(v)}")
    return "\n".join(lines) + "\n"


def load_table(path, F: Field) -> StructureConstantAlgebra:
    try:
        data = json.loads(read_text(path))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg})") from None
    if not isinstance(data, dict) or "basis" not in data or "idempotents" not in data:
        raise ParseError(f"{path}: expected an object with 'basis', 'idempotents', 'table'")
    return StructureConstantAlgebra.from_json(data, F)
