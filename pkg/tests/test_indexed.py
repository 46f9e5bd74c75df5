import pytest

from conftest import fibration_corpus
from finsite.fincat import (Functor, chain, empty_category, discrete, is_equivalence, one,
                            two, validate_category, validate_functor)
from finsite.fixtures import fibre_arrow_indexed, fibre_two_indexed, free_iso, presheaf_zoo
from finsite.indexed import (IndexedCategory, TotalFibration, cartesian_arrows, composite_fibration,
                             constant_indexed, dual, factor, grothendieck, indexed_from_json,
                             indexed_of_fibration, indexed_to_json, is_discrete_fibration,
                             is_grothendieck_fibration, is_splitting, is_street_fibration,
                             limit_in_total, slice_fibration, strict_fibre, validate_indexed)
from finsite.presheaf import discrete_indexed


def cartesian_brute(p, f):
    """Unique factorisation through f, checked over every h and every g."""
    D, C = p.src, p.dst
    A, B = D.arrows[f]
    for X in D.objects:
        for h in D.hom(X, B):
            for g in C.hom(p.obj(X), p.obj(A)):
                if C.comp(p.arr(f), g) != p.arr(h):
                    continue
                ks = [k for k in D.hom(X, A) if D.comp(f, k) == h and p.arr(k) == g]
                if len(ks) != 1:
                    return False
    return True


def test_cartesian_arrows_match_universal_property():
    for name, P in fibration_corpus():
        for f in P.total.arrow_ids:
            assert (f in cartesian_arrows(P.proj)) == cartesian_brute(P.proj, f), name


def test_corpus_fibrations_are_fibrations():
    for name, P in fibration_corpus():
        assert validate_category(P.total) == [] and validate_functor(P.proj) == []
        assert is_grothendieck_fibration(P.proj), name
        assert is_street_fibration(P.proj), name


def test_cleavage_lifts_are_cartesian():
    for name, P in fibration_corpus():
        C = P.base
        for A in P.total.objects:
            for y in C.into(P.proj.obj(A)):
                f, theta = P.lift(y, A)
                assert f in cartesian_arrows(P.proj) and C.is_iso(theta), name
                assert C.comp(P.proj.arr(f), theta) == y, name


def test_cartesian_lifts_of_isos_are_isos():
    for name, P in fibration_corpus():
        for f in cartesian_arrows(P.proj):
            if P.base.is_iso(P.proj.arr(f)):
                assert P.total.is_iso(f), name


def test_strict_indexed_category_iff_splitting():
    seen = set()
    for name, P in fibration_corpus():
        split = bool(is_splitting(P))
        assert indexed_of_fibration(P).is_strict() == split, name
        seen.add(split)
    assert seen == {True, False}


def test_grothendieck_cleavage_over_a_groupoid_is_not_split():
    # lifts of the non-identity isos of the base are not identities
    v = is_splitting(grothendieck(constant_indexed(free_iso(), two())))
    assert not v and v.witness[0] == "identity"


def test_discrete_indexed_gives_discrete_fibrations():
    for c in (two(), chain(3)):
        for P in presheaf_zoo(c):
            assert is_discrete_fibration(grothendieck(discrete_indexed(P)).proj)
    assert not is_discrete_fibration(grothendieck(fibre_arrow_indexed()).proj)


def test_grothendieck_total_sizes():
    G = grothendieck(fibre_arrow_indexed())
    assert len(G.total.objects) == 3
    # fibre arrows over 0 (three), the identity over 1, and lifts of t from 1 to x and x'
    assert len(G.total.arrows) == 3 + 1 + 2


def test_strict_fibre_of_grothendieck_is_the_fibre():
    D = fibre_arrow_indexed()
    G = grothendieck(D)
    assert len(strict_fibre(G, "0").arrows) == len(D.fibres["0"].arrows)


def test_non_fibration_is_rejected():
    c = two()
    # the inclusion of the object 1 into Two has no lift of t
    src = one()
    p = Functor(src, c, {"*": "1"}, {"id_*": "id_1"})
    assert not is_grothendieck_fibration(p)
    assert is_grothendieck_fibration(slice_fibration(c, "1").proj)
    P = TotalFibration.from_functor(p)
    with pytest.raises(ValueError):
        P.lift("t", "*")


def test_factor_is_unique_or_raises():
    P = grothendieck(fibre_arrow_indexed())
    D = P.total
    f = ("t", "id_x'", "*")
    assert factor(P.proj, f, f, "id_0") == D.identity[D.src(f)]
    with pytest.raises(ValueError):
        factor(P.proj, f, f, "t")


def test_indexed_of_fibration_validates():
    for name, P in fibration_corpus():
        assert validate_indexed(indexed_of_fibration(P)) == [], name


def test_broken_indexed_is_reported():
    D = fibre_two_indexed()
    bad = IndexedCategory(D.base, D.fibres, D.transitions, {}, D.comp_iso)
    assert any(i.kind == "unit-iso" for i in validate_indexed(bad))


def test_dual_is_involutive_and_valid():
    for D in (fibre_arrow_indexed(), fibre_two_indexed(), indexed_of_fibration(slice_fibration(two(), "1"))):
        assert validate_indexed(dual(D)) == []
        assert dual(dual(D)) == D


def test_indexed_json_round_trip():
    for D in (fibre_arrow_indexed(), fibre_two_indexed(), constant_indexed(chain(3), discrete(["p", "q"]))):
        data = indexed_to_json(D)
        again = indexed_from_json(data)
        assert validate_indexed(again) == [] and indexed_to_json(again) == data
    D = indexed_of_fibration(grothendieck(constant_indexed(free_iso(), two())))
    data = indexed_to_json(D)
    assert "comp_iso" in data
    assert indexed_to_json(indexed_from_json(data)) == data


def test_composite_with_trivial_fibres_is_equivalent():
    D = fibre_arrow_indexed()
    T = grothendieck(D).total
    E = constant_indexed(T, one())
    ED, theta = composite_fibration(D, E)
    assert validate_indexed(ED) == []
    assert is_equivalence(theta)


def test_limit_in_total_of_empty_diagram_is_terminal():
    D = constant_indexed(two(), one())
    E = empty_category()
    apex, legs = limit_in_total(D, Functor(E, grothendieck(D).total, {}, {}))
    assert apex == ("1", "*") and legs == {}


def test_postcomposing_with_cartesian_reflects_cartesian():
    for name, P in fibration_corpus():
        D, cart = P.total, cartesian_arrows(P.proj)
        for (f, g), fg in D.table.items():
            if f in cart:
                assert (fg in cart) == (g in cart), name


def test_fibre_two_total_counts():
    # two objects over 1 and one over 0; Two's three arrows over 1, the
    # identity over 0, and one arrow over t into each object over 1
    G = grothendieck(fibre_two_indexed())
    assert len(G.total.objects) == 3 and len(G.total.arrows) == 3 + 1 + 2
