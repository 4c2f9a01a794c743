import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poset_forge.errors import (
    CycleDetected,
    DuplicateElement,
    MismatchedParent,
    NotConnected,
    ParseError,
    Singleton,
    SizeLimitExceeded,
    UnknownElement,
)
from poset_forge.poset import (
    ClosedSubposet,
    Poset,
    Preorder,
    all_posets,
    automorphism_group,
    closed_subposets,
    components,
    find_isomorphism,
    generated_closed_subposet,
    hasse_covers,
    is_closed,
    is_connected,
    parse_poset,
    removable_extremal,
    wedge,
)

from conftest import CROWN4, SPHERE, crown, poset
from oracles import brute_automorphisms, brute_closed_subposets, brute_connected


def labels(P, pairs):
    return [(P.elements[a], P.elements[b]) for a, b in pairs]


class TestParse:
    def test_two_chain_closure(self):
        P = parse_poset("elements: a b\ncovers: a<b")
        assert P.leq == ((True, True), (False, True))

    def test_crown(self):
        P = parse_poset(CROWN4)
        assert labels(P, hasse_covers(P)) == [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")]

    def test_cycle_rejected(self):
        with pytest.raises(CycleDetected):
            parse_poset("elements: a b\ncovers: a<b b<a")

    def test_long_cycle_rejected(self):
        with pytest.raises(CycleDetected):
            parse_poset("elements: a b c\ncovers: a<b<c c<a")

    def test_duplicate(self):
        with pytest.raises(DuplicateElement):
            parse_poset("elements: a a")

    def test_unknown(self):
        with pytest.raises(UnknownElement):
            parse_poset("elements: a\ncovers: a<b")

    def test_comments_and_chains(self):
        P = parse_poset("# header\nelements: a b c  # three\ncovers: a<b<c\n")
        assert P.le(0, 2)

    def test_relations_key(self):
        P = parse_poset("elements: a b c\nrelations: a<c b<c")
        assert labels(P, hasse_covers(P)) == [("a", "c"), ("b", "c")]

    def test_garbage(self):
        with pytest.raises(ParseError):
            parse_poset("elements: a\nnonsense")

    def test_json_roundtrip(self, sphere):
        from poset_forge.poset import poset_from_json

        assert poset_from_json(sphere.to_json()) == sphere

    def test_text_roundtrip(self, sphere):
        assert parse_poset(sphere.to_text()) == sphere


class TestCovers:
    def test_three_chain(self, chain3):
        assert labels(chain3, hasse_covers(chain3)) == [("a", "b"), ("b", "c")]

    def test_antichain(self):
        assert hasse_covers(Poset.antichain(3)) == []


class TestAutomorphisms:
    def test_sphere_order_eight(self, sphere):
        assert len(automorphism_group(sphere)) == 8

    def test_chain_only_identity(self):
        G = automorphism_group(Poset.chain(5))
        assert len(G) == 1 and G[0].perm == tuple(range(5))

    def test_antichain_three(self):
        # DERIVED: all 3! bijections preserve the empty order
        assert len(automorphism_group(Poset.antichain(3))) == 6

    @pytest.mark.parametrize("text", [CROWN4, SPHERE, "elements: x y z t s\ncovers: x<y x<z y<t z<t y<s z<s"])
    def test_matches_brute_force(self, text):
        P = poset(text)
        assert sorted(g.perm for g in automorphism_group(P)) == sorted(brute_automorphisms(P))

    def test_group_closed(self, sphere):
        G = automorphism_group(sphere)
        perms = {g.perm for g in G}
        assert G[0].perm == tuple(range(6))
        for g in G:
            assert g.inverse().perm in perms
            for h in G:
                assert g.compose(h).perm in perms

    def test_preserves_covers(self, sphere):
        covers = set(hasse_covers(sphere))
        for g in automorphism_group(sphere):
            assert {(g.perm[a], g.perm[b]) for a, b in covers} == covers

    def test_size_guard(self, monkeypatch):
        monkeypatch.setenv("POSET_FORGE_MAX_ELEMENTS", "3")
        with pytest.raises(SizeLimitExceeded):
            automorphism_group(Poset.antichain(4))

    def test_find_isomorphism(self):
        P = parse_poset("elements: a b c\ncovers: a<b a<c")
        Q = parse_poset("elements: p q r\ncovers: q<p r<p")
        assert find_isomorphism(P, Q) is None
        R = parse_poset("elements: u v w\ncovers: w<u w<v")
        perm = find_isomorphism(P, R)
        assert all(P.leq[i][j] == R.leq[perm[i]][perm[j]] for i in range(3) for j in range(3))


class TestClosedSubposets:
    def test_two_chain(self, chain2):
        # DERIVED: brute force over (subset, sub-relation) pairs
        assert len(closed_subposets(chain2)) == 5

    def test_a3(self, a3):
        assert len(closed_subposets(a3)) == 13

    @pytest.mark.parametrize("n", range(5))
    def test_antichain(self, n):
        assert len(closed_subposets(Poset.antichain(n))) == 2**n

    def test_every_poset_up_to_five_matches_brute_force(self):
        for n in range(1, 6):
            for P in all_posets(n):
                got = {(S.members, S.rel) for S in closed_subposets(P)}
                assert got == brute_closed_subposets(P)

    def test_six_element_sample(self, sphere):
        got = {(S.members, S.rel) for S in closed_subposets(sphere)}
        assert got == brute_closed_subposets(sphere)

    def test_no_duplicates_and_closure(self, sphere):
        subs = closed_subposets(sphere)
        assert len({(S.members, S.rel) for S in subs}) == len(subs)
        for S in subs:
            for x, y in S.rel:
                for z in range(sphere.n):
                    if sphere.leq[x][z] and sphere.leq[z][y]:
                        assert z in S.members and (x, z) in S.rel and (z, y) in S.rel

    def test_invalid_rejected(self, chain3):
        # a <= c without the middle element violates closure
        assert not is_closed(chain3, {0, 2}, {(0, 0), (2, 2), (0, 2)})
        from poset_forge.errors import NotClosed

        with pytest.raises(NotClosed):
            ClosedSubposet(chain3, frozenset({0, 2}), frozenset({(0, 0), (2, 2), (0, 2)}))

    def test_generated(self, chain3):
        S = generated_closed_subposet(chain3, pairs=[(0, 2)])
        assert S.members == frozenset({0, 1, 2}) and len(S.rel) == 6

    def test_size_guard(self, monkeypatch):
        monkeypatch.setenv("POSET_FORGE_MAX_ELEMENTS", "3")
        with pytest.raises(SizeLimitExceeded):
            closed_subposets(Poset.antichain(4))


class TestWedge:
    def test_idempotent(self, sphere):
        for S in closed_subposets(sphere)[:40]:
            assert wedge(S, S) == S

    def test_projective_supports(self, fan5):
        t, s = fan5.index("t"), fan5.index("s")
        W = wedge(ClosedSubposet.principal_down(fan5, t), ClosedSubposet.principal_down(fan5, s))
        assert W.dimension_vector() == (1, 1, 1, 0, 0)
        assert sorted(labels(fan5, W.strict_rel())) == [("x", "y"), ("x", "z")]

    def test_empty_absorbs(self, a3):
        empty = ClosedSubposet.empty(a3)
        for S in closed_subposets(a3):
            assert wedge(S, empty) == empty

    def test_mismatched(self, a3, chain3):
        with pytest.raises(MismatchedParent):
            wedge(ClosedSubposet.full(a3), ClosedSubposet.full(chain3))

    def test_semilattice_laws(self, a3):
        subs = closed_subposets(a3)
        for S, T, U in itertools.product(subs, repeat=3):
            assert wedge(S, T) == wedge(T, S)
            assert wedge(wedge(S, T), U) == wedge(S, wedge(T, U))


class TestConnectivity:
    def test_crown(self, crown4):
        assert is_connected(crown4)

    def test_antichain(self):
        P = Poset.antichain(2)
        assert not is_connected(P) and len(components(P)) == 2

    def test_sphere_minus_one(self, sphere):
        rest = sphere.induced(range(1, 6))
        assert is_connected(rest) == brute_connected(sphere, removed=(0,)) is True


class TestRemovableExtremal:
    def test_two_chain(self, chain2):
        assert removable_extremal(chain2) == 0

    def test_crown(self, crown4):
        x = removable_extremal(crown4)
        assert crown4.elements[x] == "a"
        assert brute_connected(crown4, removed=(x,))

    def test_sphere(self, sphere):
        x = removable_extremal(sphere)
        assert sphere.elements[x] in {"1", "2", "5", "6"}
        assert brute_connected(sphere, removed=(x,))

    def test_errors(self):
        with pytest.raises(NotConnected):
            removable_extremal(Poset.antichain(2))
        with pytest.raises(Singleton):
            removable_extremal(Poset.antichain(1))

    def test_every_connected_poset_up_to_six(self):
        for n in range(2, 7):
            for P in all_posets(n, connected=True):
                x = removable_extremal(P)
                assert x in P.minimal() or x in P.maximal()
                assert brute_connected(P, removed=(x,))


class TestEnumeration:
    def test_counts(self):
        # posets and connected posets up to isomorphism on n = 1..6 elements
        assert [len(all_posets(n)) for n in range(1, 7)] == [1, 2, 5, 16, 63, 318]
        assert [len(all_posets(n, connected=True)) for n in range(1, 7)] == [1, 1, 3, 10, 44, 238]


class TestPreorder:
    def test_quotient(self):
        Q = Preorder.from_relations(["a", "b", "c"], [("a", "b"), ("b", "a"), ("b", "c")])
        assert not Q.is_poset()
        assert Q.classes() == [(0, 1), (2,)]
        assert Q.quotient().n == 2


# ---- property tests ------------------------------------------------------


@st.composite
def random_posets(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    perm = draw(st.permutations(range(n)))
    # relations only go up in a hidden linear extension, so no cycles
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=2 * n))
    rel = [(f"e{perm[i]}", f"e{perm[j]}") for i, j in pairs if i < j]
    return Poset.from_relations([f"e{k}" for k in range(n)], rel)


@settings(max_examples=40, deadline=None)
@given(random_posets())
def test_hasse_covers_regenerate_order(P):
    Q = Poset.from_relations(P.elements, labels(P, hasse_covers(P)))
    assert Q == P
    for a, b in hasse_covers(P):
        assert not any(P.lt(a, z) and P.lt(z, b) for z in range(P.n))


@settings(max_examples=25, deadline=None)
@given(random_posets(max_n=5))
def test_wedge_closed_on_enumeration(P):
    subs = closed_subposets(P)
    keys = {(S.members, S.rel) for S in subs}
    for S in subs:
        for T in subs:
            W = wedge(S, T)
            assert (W.members, W.rel) in keys


@settings(max_examples=25, deadline=None)
@given(random_posets())
def test_removal_reaches_singleton(P):
    for comp in components(P):
        Q = P.induced(comp)
        steps = 0
        while Q.n > 1:
            x = removable_extremal(Q)
            Q = Q.induced([v for v in range(Q.n) if v != x])
            assert is_connected(Q)
            steps += 1
        assert steps == len(comp) - 1


@settings(max_examples=25, deadline=None)
@given(random_posets(max_n=5))
def test_automorphisms_form_group(P):
    G = automorphism_group(P)
    perms = {g.perm for g in G}
    assert perms == set(brute_automorphisms(P))
    for g in G:
        for h in G:
            assert g.compose(h).perm in perms
