"""Command-line interface: ``poset-forge <group> <command> ...``.

Exit status is 0 on success, 1 on a domain error (one line on stderr), 2 on a
usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import cocycles, deformation, diag, io, thin
from .tensor import k0_table, tensor as tensor_product, undeformed_semigroup
from .chains import homology_all
from .errors import MismatchedParent, NotACocycle, PosetForgeError
from .fields import FiniteField, parse_field
from .poset import (
    automorphism_group,
    closed_subposets,
    components,
    hasse_covers,
    is_connected,
    size_guard,
    DEFAULT_MAX_CLOSED,
)


class UsageError(Exception):
    pass


def _out(args, payload, lines):
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for line in lines:
            print(line)


def _field(args, required=True):
    if getattr(args, "field", None) is None:
        if required:
            raise UsageError("--field is required for this command")
        return None
    return parse_field(args.field)


def _concrete_field(args):
    F = _field(args)
    if not F.is_concrete:
        raise UsageError(f"--field {args.field} is not a concrete field")
    return F


def _nontrivial_values(F, name, cochain):
    """Text lines for the values of a cochain that differ from 1."""
    return [
        f"  {name} {' '.join(chain)} : {F.fmt(v)}"
        for chain, v in cochain.labelled().items()
        if v != F.one
    ]


# ---- poset ---------------------------------------------------------------


def cmd_poset_info(args):
    P = io.load_poset(args.file)
    els = P.elements
    covers = [[els[a], els[b]] for a, b in hasse_covers(P)]
    comps = [[els[i] for i in c] for c in components(P)]
    aut = len(automorphism_group(P))
    payload = {
        "elements": list(els),
        "covers": covers,
        "minimal": [els[i] for i in P.minimal()],
        "maximal": [els[i] for i in P.maximal()],
        "connected": is_connected(P),
        "components": comps,
        "automorphisms": aut,
    }
    if P.n <= size_guard(DEFAULT_MAX_CLOSED):
        payload["closed_subposets"] = len(closed_subposets(P))
    lines = [
        f"elements: {' '.join(els)}",
        f"covers: {' '.join(f'{a}<{b}' for a, b in covers)}",
        f"minimal: {' '.join(payload['minimal'])}",
        f"maximal: {' '.join(payload['maximal'])}",
        f"components: {len(comps)}",
        f"automorphisms: {aut}",
    ]
    if "closed_subposets" in payload:
        lines.append(f"closed subposets: {payload['closed_subposets']}")
    _out(args, payload, lines)


def cmd_poset_homology(args):
    P = io.load_poset(args.file)
    groups = homology_all(P, args.max_degree)
    payload = {"homology": [dict(degree=n, **g.to_json()) for n, g in enumerate(groups)]}
    _out(args, payload, [f"H_{n} = {g}" for n, g in enumerate(groups)])


def cmd_poset_cohomology(args):
    P = io.load_poset(args.file)
    F = _field(args)
    if args.degree < 0:
        raise UsageError("--degree must be nonnegative")
    expr = cocycles.cohomology_structure(P, args.degree, F)
    order = expr.order
    payload = {"degree": args.degree, "structure": expr.to_json()}
    lines = [f"H^{args.degree} = {expr}", f"order: {order if order is not None else 'infinite or undetermined'}"]
    if args.cochain:
        c, _ = io.load_cochain(args.cochain, F, poset=P, degree=args.degree)
        if not cocycles.is_cocycle(c):
            bad = cocycles.cocycle_violations(c)[0]
            raise NotACocycle(
                "cochain is not a cocycle at (" + " ".join(P.elements[i] for i in bad) + ")"
            )
        report = cocycles.reduce_modulo_coboundaries(c)
        payload["cochain"] = {
            "trivial": report.trivial,
            "coordinates": [list(comp) for comp in report.coordinates],
            "witness": report.witness.to_json() if report.witness else None,
        }
        lines.append(f"cochain class: {'trivial' if report.trivial else 'nontrivial'}")
        if report.witness is not None:
            lines += _nontrivial_values(F, "witness", report.witness)
    _out(args, payload, lines)


def cmd_poset_semigroup(args):
    P = io.load_poset(args.file)
    table = undeformed_semigroup(P)
    names = [S.describe() for S in table.items]
    payload = {"closed_subposets": [S.to_json() for S in table.items], "table": table.table}
    width = len(str(len(names) - 1))
    lines = [f"{k:>{width}}: {name}" for k, name in enumerate(names)]
    lines.append("wedge table:")
    lines += [" ".join(f"{v:>{width}}" for v in row) for row in table.table]
    _out(args, payload, lines)


# ---- deform --------------------------------------------------------------


def _load_deformation(args, path, poset_path):
    F = _concrete_field(args)
    P = io.load_poset(poset_path) if poset_path else None
    lam, P = io.load_cochain(path, F, poset=P, degree=2, weak=True)
    return deformation.build_deformed(P, lam, F)


def cmd_deform_build(args):
    A = _load_deformation(args, args.cocycle, args.poset)
    sc = A.structure_constants()
    data = sc.to_json()
    unit = {sc.basis[k]: A.field.to_json(v) for k, v in sorted(A.unit().items())}
    payload = dict(data, unit=unit, normalized=cocycles.is_normalized(A.lam), dimension=A.dim)
    lines = [f"dimension: {A.dim}", f"normalized: {'yes' if payload['normalized'] else 'no'}"]
    lines.append("unit: " + " + ".join(f"{A.field.fmt(v)}*{sc.basis[k]}" for k, v in sorted(A.unit().items())))
    for key, entries in data["table"].items():
        left, right = key.split(",")
        rhs = " + ".join(f"{c}*{lab}" for lab, c in entries)
        lines.append(f"{left} * {right} = {rhs}")
    _out(args, payload, lines)


def cmd_deform_trivial(args):
    A = _load_deformation(args, args.cocycle, args.poset)
    ok, witness = deformation.is_trivial_deformation(A)
    payload = {"trivial": ok, "witness": witness.to_json() if witness else None}
    lines = [f"trivial: {'yes' if ok else 'no'}"]
    if witness is not None:
        lines += _nontrivial_values(A.field, "alpha", witness)
    _out(args, payload, lines)


def cmd_deform_iso(args):
    A = _load_deformation(args, args.a, args.poset)
    B = _load_deformation(args, args.b, args.poset)
    if A.poset != B.poset:
        raise MismatchedParent("the two cocycles live on different posets")
    iso = deformation.deformations_isomorphic(A, B)
    if iso is None:
        _out(args, {"isomorphic": False}, ["isomorphic: no"])
        return
    sigma = iso.sigma.as_labels()
    payload = {"isomorphic": True, "sigma": sigma, "alpha": iso.alpha.to_json()}
    lines = ["isomorphic: yes", "sigma: " + " ".join(f"{k}->{v}" for k, v in sigma.items())]
    lines += _nontrivial_values(A.field, "alpha", iso.alpha)
    _out(args, payload, lines)


def cmd_deform_recognize(args):
    F = _concrete_field(args)
    sc = io.load_table(args.table, F)
    rec = deformation.recognize_incidence(sc)
    if rec is None:
        _out(args, {"recognized": False}, ["recognized: no"])
        return
    order = rec.order
    els = order.elements
    rel = [[els[a], els[b]] for a in range(order.n) for b in range(order.n) if a != b and order.leq[a][b]]
    payload = {
        "recognized": True,
        "kind": "poset" if rec.is_poset else "preorder",
        "elements": list(els),
        "relations": rel,
        "basis_match": {k: list(v) for k, v in rec.basis_match.items()},
    }
    lines = ["recognized: yes", f"kind: {payload['kind']}", f"elements: {' '.join(els)}",
             "relations: " + " ".join(f"{a}<={b}" for a, b in rel)]
    if rec.cocycle is not None:
        trivial = cocycles.reduce_modulo_coboundaries(rec.cocycle).trivial
        payload["trivial_class"] = trivial
        lines.append(f"deformation class: {'trivial' if trivial else 'nontrivial'}")
    lines += [f"  {k} -> ({a},{b})" for k, (a, b) in rec.basis_match.items()]
    _out(args, payload, lines)


# ---- thin ----------------------------------------------------------------


def cmd_thin_classify(args):
    P = io.load_poset(args.poset)
    F = _field(args)
    if not isinstance(F, FiniteField):
        raise UsageError("thin classify needs a finite field")
    groups = thin.classify_thin(P, F)
    total = sum(len(reps) for _, reps in groups)
    payload = {
        "field": str(F),
        "count": total,
        "supports": [
            {"support": S.to_json(), "classes": [r.to_json() for r in reps]} for S, reps in groups
        ],
    }
    lines = [f"{total} classes over {F}"]
    k = 0
    for S, reps in groups:
        for r in reps:
            k += 1
            lines.append(f"{k}: {r.describe()}")
    _out(args, payload, lines)


def _load_reps(args, *paths):
    F = _field(args, required=False)
    return [io.load_rep(p, F) for p in paths]


def cmd_thin_iso(args):
    M, N = _load_reps(args, args.rep1, args.rep2)
    theta = thin.reps_isomorphic(M, N)
    if theta is None:
        _out(args, {"isomorphic": False}, ["isomorphic: no"])
        return
    els, F = M.parent.elements, M.field
    payload = {"isomorphic": True, "theta": {els[z]: F.to_json(v) for z, v in sorted(theta.items())}}
    lines = ["isomorphic: yes"] + [f"  theta {els[z]} : {F.fmt(v)}" for z, v in sorted(theta.items())]
    _out(args, payload, lines)


def cmd_thin_tensor(args):
    M, N = _load_reps(args, args.rep1, args.rep2)
    T = tensor_product(M, N)
    _out(args, T.to_json(), [T.describe()])


def cmd_thin_access(args):
    (M,) = _load_reps(args, args.rep)
    steps = thin.accessibility_chain(M)
    els = M.parent.elements
    payload = {
        "length": M.dim,
        "steps": [
            {"removed": els[s.removed], "kind": s.kind, "result": s.smaller.to_json(), "verified": s.verify()}
            for s in steps
        ],
    }
    lines = [f"start: {M.describe()}"]
    lines += [f"remove {els[s.removed]} ({s.kind}): {s.smaller.describe()}" for s in steps]
    _out(args, payload, lines)


def cmd_thin_sublattice(args):
    P = io.load_poset(args.poset)
    lat = thin.submodule_lattice(P, P.index(args.element))
    labelled = lat.labelled()
    payload = {
        "submodules": labelled,
        "covers": [list(c) for c in lat.covers()],
        "distributive": lat.is_distributive(),
    }
    lines = [f"{len(labelled)} submodules of P({args.element}), distributive: {'yes' if payload['distributive'] else 'no'}"]
    lines += ["  {" + ",".join(s) + "}" for s in labelled]
    _out(args, payload, lines)


# ---- matrix --------------------------------------------------------------


def _load_matrix(args, path):
    F = parse_field(args.field)
    if not F.is_concrete:
        raise UsageError(f"--field {args.field} is not a concrete field")
    return diag.parse_matrix(io.read_text(path), F)


def _arrows(arrows):
    return [[i + 1, j + 1] for i, j in arrows]


def _fmt_rows(F, M):
    return [" ".join(F.fmt(v) for v in row) for row in M.entries]


def cmd_matrix_canon(args):
    A = _load_matrix(args, args.file)
    F = A.field
    pair = diag.canonical_form(A)
    payload = {
        "C": pair.C.to_json(),
        "D": [F.to_json(v) for v in pair.D],
        "tree_arrows": _arrows(pair.structure.tree),
        "eliminated_arrows": _arrows(pair.structure.eliminated),
        "invariant": [F.to_json(v) for v in pair.holonomy()],
    }
    lines = ["C ="] + ["  " + r for r in _fmt_rows(F, pair.C)]
    lines.append("D = diag(" + ", ".join(F.fmt(v) for v in pair.D) + ")")
    lines.append("tree arrows: " + " ".join(f"{i}->{j}" for i, j in payload["tree_arrows"]))
    lines.append("invariant: " + " ".join(F.fmt(v) for v in pair.holonomy()))
    _out(args, payload, lines)


def cmd_matrix_orbit(args):
    A = _load_matrix(args, args.file)
    F = A.field
    arrows, hol = diag.orbit_invariant(A)
    st = diag.canonical_form(A).structure
    payload = {
        "arrows": _arrows(arrows),
        "eliminated_arrows": _arrows(st.eliminated),
        "invariant": [F.to_json(v) for v in hol],
    }
    lines = [
        "arrows: " + " ".join(f"{i}->{j}" for i, j in payload["arrows"]),
        "invariant: " + " ".join(
            f"{i}->{j}={F.fmt(v)}" for (i, j), v in zip(payload["eliminated_arrows"], hol)
        ),
    ]
    _out(args, payload, lines)


def cmd_matrix_conj(args):
    A = _load_matrix(args, args.a)
    B = _load_matrix(args, args.b)
    D = diag.diag_conjugate_test(A, B)
    F = A.field
    if D is None:
        _out(args, {"conjugate": False}, ["conjugate: no"])
        return
    _out(args, {"conjugate": True, "D": [F.to_json(v) for v in D]},
         ["conjugate: yes", "D = diag(" + ", ".join(F.fmt(v) for v in D) + ")"])


# ---- k0 ------------------------------------------------------------------


def cmd_k0_table(args):
    P = io.load_poset(args.poset)
    K = k0_table(P)
    rows = K.labelled()
    els = P.elements
    width = max(len(e) for e in els) if els else 1
    lines = [" " * width + " | " + " ".join(f"{e:>{width}}" for e in els)]
    lines += [f"{els[i]:>{width}} | " + " ".join(f"{v:>{width}}" for v in row) for i, row in enumerate(rows)]
    _out(args, {"elements": list(els), "meet": rows}, lines)


# ---- parser --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="poset-forge", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)

    def sub(group, name, func, help_text):
        p = group.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    g = groups.add_parser("poset", help="poset structure and (co)homology").add_subparsers(dest="command", required=True)
    p = sub(g, "info", cmd_poset_info, "summary of a poset")
    p.add_argument("file")
    p = sub(g, "homology", cmd_poset_homology, "integral homology of the order complex")
    p.add_argument("file")
    p.add_argument("--max-degree", type=int, default=None)
    p = sub(g, "cohomology", cmd_poset_cohomology, "cohomology with unit-group coefficients")
    p.add_argument("file")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--field", required=True, help="q, Q, C, closed:p")
    p.add_argument("--cochain", help="cochain file to reduce modulo coboundaries")
    p = sub(g, "semigroup", cmd_poset_semigroup, "closed subposets under wedge")
    p.add_argument("file")

    g = groups.add_parser("deform", help="deformed incidence algebras").add_subparsers(dest="command", required=True)
    for name, func, text in (
        ("build", cmd_deform_build, "multiplication table of a deformation"),
        ("trivial", cmd_deform_trivial, "decide whether a deformation is trivial"),
    ):
        p = sub(g, name, func, text)
        p.add_argument("poset")
        p.add_argument("cocycle")
        p.add_argument("--field", required=True)
    p = sub(g, "iso", cmd_deform_iso, "isomorphism of two deformations")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--poset", help="poset file (default: the cocycle files' poset: line)")
    p.add_argument("--field", required=True)
    p = sub(g, "recognize", cmd_deform_recognize, "recognize a deformed incidence algebra")
    p.add_argument("table")
    p.add_argument("--field", required=True)

    g = groups.add_parser("thin", help="thin representations").add_subparsers(dest="command", required=True)
    p = sub(g, "classify", cmd_thin_classify, "all thin representations over F_q")
    p.add_argument("poset")
    p.add_argument("--field", required=True)
    for name, func in (("iso", cmd_thin_iso), ("tensor", cmd_thin_tensor)):
        p = sub(g, name, func, f"{name} of two representations")
        p.add_argument("rep1")
        p.add_argument("rep2")
        p.add_argument("--field")
    p = sub(g, "access", cmd_thin_access, "accessibility chain of an indecomposable")
    p.add_argument("rep")
    p.add_argument("--field")
    p = sub(g, "sublattice", cmd_thin_sublattice, "submodule lattice of a projective")
    p.add_argument("poset")
    p.add_argument("element")

    g = groups.add_parser("matrix", help="diagonal conjugation").add_subparsers(dest="command", required=True)
    for name, func in (("canon", cmd_matrix_canon), ("orbit", cmd_matrix_orbit)):
        p = sub(g, name, func, f"{name} of a matrix")
        p.add_argument("file")
        p.add_argument("--field", default="Q")
    p = sub(g, "conj", cmd_matrix_conj, "find D with D A D^-1 = B")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--field", default="Q")

    g = groups.add_parser("k0", help="Grothendieck group of a meet-semilattice").add_subparsers(dest="command", required=True)
    p = sub(g, "table", cmd_k0_table, "meet table")
    p.add_argument("poset")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"poset-forge: error: {exc}", file=sys.stderr)
        return 2
    except PosetForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
