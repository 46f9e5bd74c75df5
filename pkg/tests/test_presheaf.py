import itertools

from finsite.fincat import (Functor, UnionFind, category_from_json, category_to_json, chain, discrete, enumerate_functors, identity_functor,
                            one, preorder, two)
from finsite.fixtures import free_iso, presheaf_zoo
from finsite.presheaf import (Presheaf, PresheafMorphism, colimit_of_sets, compose_morphisms,
                              elements, empty_presheaf, find_iso, identity_morphism, is_iso, is_mono,
                              lan, lan_counit, lan_morphism, presheaf_from_json, presheaf_to_json,
                              representable, restrict, restrict_morphism, terminal_presheaf,
                              validate_morphism, validate_presheaf)

BASES = [one(), two(), chain(3), free_iso(), preorder(["a", "b", "c"], [("c", "a"), ("c", "b")])]


def test_zoo_presheaves_validate():
    for c in BASES:
        for P in presheaf_zoo(c):
            assert validate_presheaf(P) == []


def test_representable_values_are_hom_sets():
    c = chain(3)
    y = representable(c, "1")
    assert [len(y(x)) for x in c.objects] == [1, 1, 0]


def test_bad_action_is_reported():
    c = two()
    P = Presheaf(c, {"0": ["a"], "1": ["b"]}, {"t": {"b": "zzz"}})
    assert validate_presheaf(P)


def test_elements_category_counts():
    c = two()
    cat, proj = elements(representable(c, "1"))
    assert len(cat.objects) == 2 and len(cat.arrows) == 3


def _set_colimit_oracle(P):
    nodes = [(x, s) for x in P.base.objects for s in P(x)]
    uf = UnionFind(nodes)
    for f in P.base.arrow_ids:
        s_, d = P.base.arrows[f]
        for s in P(d):
            uf.union((d, s), (s_, P.act(f, s)))
    return {frozenset(cl) for cl in uf.classes()}


def test_colimit_of_sets_matches_union_find():
    for c in BASES:
        for P in presheaf_zoo(c):
            assert {frozenset(cl) for cl in colimit_of_sets(P)} == _set_colimit_oracle(P)


def test_find_iso_between_equal_presheaves_and_not_between_different():
    c = two()
    y0, y1 = representable(c, "0"), representable(c, "1")
    assert find_iso(y0, y0) is not None
    assert find_iso(y0, y1) is None
    assert find_iso(terminal_presheaf(c), representable(c, "1")) is not None


def test_identity_morphism_is_iso_and_mono():
    P = presheaf_zoo(chain(3))[-1]
    m = identity_morphism(P)
    assert validate_morphism(m) == [] and is_iso(m) and is_mono(m)


def test_morphism_into_terminal_is_not_mono_for_two_points():
    c = two()
    P = presheaf_zoo(c)[-1]
    T = terminal_presheaf(c)
    m = PresheafMorphism(P, T, {x: {s: T(x)[0] for s in P(x)} for x in c.objects})
    assert validate_morphism(m) == [] and not is_mono(m)


def test_lan_preserves_representables():
    for c, d in ((two(), chain(3)), (one(), two()), (chain(3), two()), (two(), free_iso())):
        for F in enumerate_functors(c, d):
            for x in c.objects:
                L, _ = lan(F, representable(c, x))
                assert find_iso(L, representable(d, F.obj(x))) is not None


def test_lan_along_identity_is_identity():
    for c in BASES:
        for P in presheaf_zoo(c):
            assert find_iso(lan(identity_functor(c), P)[0], P) is not None


def test_lan_restrict_triangle_identities():
    for c, d in ((two(), chain(3)), (one(), two()), (chain(3), two())):
        for F in enumerate_functors(c, d):
            for Q in presheaf_zoo(d):
                _, unit, eps = lan_counit(F, Q)
                back = compose_morphisms(restrict_morphism(eps, F), unit)
                assert back.components == identity_morphism(restrict(Q, F)).components
            for P in presheaf_zoo(c):
                L, u = lan(F, P)
                L2, u2, eps = lan_counit(F, L)
                lu = lan_morphism(F, u, (L, u), (L2, u2))
                assert compose_morphisms(eps, lu).components == identity_morphism(L).components


def test_empty_presheaf_is_handled():
    c = two()
    E = empty_presheaf(c)
    assert validate_presheaf(E) == [] and colimit_of_sets(E) == []
    assert len(elements(E)[0].objects) == 0


def test_json_round_trip():
    for c in BASES:
        base = category_from_json(category_to_json(c))
        for P in presheaf_zoo(c):
            data = presheaf_to_json(P)
            again = presheaf_from_json(data, base)
            assert validate_presheaf(again) == [] and presheaf_to_json(again) == data


def test_restriction_along_inclusion():
    c = chain(3)
    F = Functor(discrete(["0", "2"]), c, {"0": "0", "2": "2"}, {"id_0": ("0", "0"), "id_2": ("2", "2")})
    R = restrict(representable(c, "2"), F)
    assert [len(R(x)) for x in ("0", "2")] == [1, 1]
    assert list(itertools.chain.from_iterable(R(x) for x in ("0", "2")))
