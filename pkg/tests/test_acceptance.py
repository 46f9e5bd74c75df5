"""The fifteen acceptance criteria, one function each.

Run under pytest, or directly with ``python tests/test_acceptance.py`` for
one pass/fail line per criterion.
"""
import itertools
import sys
import time

import pytest

from conftest import (fibration_corpus, preorder_sites, presheaf_corpus, random_corpus,
                      subcanonical_sites, two_point_presheaf)
from finsite.coverage import (enumerate_topologies, is_separated, is_sheaf, is_subcanonical,
                              sheafify, trivial_topology)
from finsite.etalespace import (FiniteSpace, admits_etale_topology, basis_generates, check_dagger,
                                check_joint_surjectivity, close_sections, gf4, image_family,
                                is_local_homeo, local_bijection_family, lukasiewicz_chain,
                                mv_distance_identity, mv_spectrum, product_mv,
                                restricted_bundle, sections_continuous, sections_presheaf,
                                sierpinski_space, sigma_topology, site_comparison, tau_topology,
                                zariski_spectrum, zmod, global_section_ring_map)
from finsite.fincat import (FiniteCategory, chain, compose_functors, connected_components, discrete,
                            enumerate_functors, identity_functor, is_equivalence, one, preorder, two,
                            category_to_json)
from finsite.fixtures import diagonal_cover_fibration, empty_fibration, free_iso, presheaf_zoo
from finsite.fractions import (FractionsError, check_right_fractions, comparison_functor,
                               factor_through, inverted_arrows, lax_colimit, localize,
                               pseudo_colimit, slice_weight, weighted_ps_colimit)
from finsite.indexed import (essential_fibre, fibred_yoneda_phi, fibred_yoneda_psi,
                             grothendieck, indexed_of_fibration, round_trip_functor)
from finsite.localefr import sheafify_via_adjunction, sheafify_via_locale
from finsite.presheaf import (Presheaf, colimit_of_sets, discrete_indexed, find_iso, is_iso, lan,
                              representable)
from finsite.sitemaps import (direct_image_comparison, giraud_topology, inverse_image_classes,
                              is_comorphism, is_prestack, is_stack, min_comorphism_topology,
                              orthogonal_generation, prestack_iff_subcanonical_check)

BUDGET = 10.0


def covering(J):
    return {x: frozenset(J.covering[x]) for x in J.base.objects}


def c1_two_site_example():
    from finsite.fixtures import singleton_cover_site
    c, J = singleton_cover_site()
    assert not is_subcanonical(J)
    assert not is_sheaf(representable(c, "0"), J)
    E = empty_fibration(c)
    assert is_stack(E, J)
    G = giraud_topology(E, J)
    tops = enumerate_topologies(E.total)
    assert len(tops) == 1 and covering(tops[0]) == covering(G) == {}


def c2_prestack_iff_subcanonical():
    cases = 0
    seen = set()
    for name, c, J in subcanonical_sites():
        fibs = [grothendieck(discrete_indexed(P)) for P in presheaf_zoo(c)]
        fibs.append(grothendieck(discrete_indexed(two_point_presheaf(c))))
        for P in fibs:
            prestack, sub = prestack_iff_subcanonical_check(P, J)
            assert prestack == sub, name
            seen.add(prestack)
            cases += 1
    for name, P in fibration_corpus():
        J = trivial_topology(P.base)
        prestack, sub = prestack_iff_subcanonical_check(P, J)
        assert prestack == sub, name
        cases += 1
    assert cases >= 8 and seen == {True, False}


def c3_giraud_double_computation():
    compared = 0
    for name, P in fibration_corpus():
        for J in enumerate_topologies(P.base):
            G = giraud_topology(P, J)
            assert covering(G) == covering(min_comorphism_topology(P.proj, J)), name
            if len(P.total.arrows) <= 6:
                making = [K for K in enumerate_topologies(P.total) if is_comorphism(P.proj, K, J)]
                meet = {E: frozenset.intersection(*(frozenset(K.covering[E]) for K in making))
                        for E in P.total.objects}
                assert covering(G) == meet, name
                compared += 1
    assert compared >= 10


def c4_stack_iff_sheaf():
    sites = set()
    count = 0
    for name, P, J in presheaf_corpus():
        D = discrete_indexed(P)
        assert bool(is_stack(D, J)) == bool(is_sheaf(P, J)), name
        assert bool(is_prestack(D, J)) == bool(is_separated(P, J)), name
        sites.add(name)
        count += 1
    assert count >= 10 and len(sites) >= 3


def c5_fibred_yoneda():
    checked = 0
    for name, P in fibration_corpus():
        C, D, p = P.base, P.total, P.proj
        for x in C.objects:
            Fx = essential_fibre(P, x)
            # Φ∘Ψ ≅ id: the lift of α along 1_x gives the component
            comp = {}
            for obj in Fx.objects:
                A, a = obj
                back = fibred_yoneda_phi(P, x, fibred_yoneda_psi(P, x, obj))
                f, theta = P.lift(a, A)
                assert back[0] == D.src(f)
                eta = (f, back[1], a)
                assert eta in Fx.arrows and Fx.is_iso(eta), name
                comp[obj] = (back, eta)
            for g in Fx.arrow_ids:
                s, d = Fx.arrows[g]
                (bs, es), (bd, ed) = comp[s], comp[d]
                # the image of g under Φ∘Ψ is the unique arrow closing the square
                movers = [k for k in Fx.hom(bs, bd) if Fx.comp(ed, k) == Fx.comp(g, es)]
                assert len(movers) == 1, name
            # Ψ∘Φ ≅ id on every fibration morphism c/x → D that arises from the fibre
            for obj in Fx.objects:
                m = fibred_yoneda_psi(P, x, obj)
                m2 = fibred_yoneda_psi(P, x, fibred_yoneda_phi(P, x, m))
                sl = m.F.src
                eps = {}
                for y in sl.objects:
                    cands = [e for e in D.hom(m2.F.obj(y), m.F.obj(y)) if D.is_iso(e)
                             and C.comp(m.phi[y], p.arr(e)) == m2.phi[y]]
                    assert cands, name
                    eps[y] = cands[0]
                for h in sl.arrow_ids:
                    s, d = sl.arrows[h]
                    assert D.comp(eps[d], m2.F.arr(h)) == D.comp(m.F.arr(h), eps[s]), name
                checked += 1
    assert checked >= 10


def c6_grothendieck_round_trip():
    for name, P in fibration_corpus():
        S, iso = round_trip_functor(P)
        assert is_equivalence(S), name
        G = grothendieck(indexed_of_fibration(P))
        C, p = P.base, P.proj
        for o in G.total.objects:
            a = iso[o]
            assert C.arrows[a] == (G.proj.obj(o), p.obj(S.obj(o))) and C.is_iso(a), name
        for g in G.total.arrow_ids:
            s, d = G.total.arrows[g]
            assert C.comp(p.arr(S.arr(g)), iso[s]) == C.comp(iso[d], G.proj.arr(g)), name


def c7_colimit_identities():
    from finsite.fixtures import fibre_arrow_indexed, fibre_two_indexed
    from finsite.indexed import constant_indexed
    indexed = [fibre_arrow_indexed(), fibre_two_indexed(), constant_indexed(free_iso(), two()),
               constant_indexed(chain(3), discrete(["p", "q"]))]
    indexed += [discrete_indexed(P) for P in presheaf_zoo(two())]
    for D in indexed:
        total = lax_colimit(D)[0]
        assert category_to_json(total) == category_to_json(grothendieck(D).total)
        loc = weighted_ps_colimit(D, slice_weight(D.base))
        assert is_equivalence(comparison_functor(D, loc))
    for name, P, J in presheaf_corpus():
        loc = pseudo_colimit(discrete_indexed(P))
        ours = {frozenset(cl) for cl in connected_components(loc.category)}
        oracle = {frozenset(cl) for cl in colimit_of_sets(P)}
        assert ours == oracle, name


def c8_sheafification_agreement():
    sites = preorder_sites()
    assert len(sites) >= 6
    for name, P, J in presheaf_corpus():
        results = [sheafify(P, J), sheafify_via_locale(P, J), sheafify_via_adjunction(P, J)]
        for (Q1, u1), (Q2, u2) in itertools.combinations(results, 2):
            assert find_iso(Q1, Q2, (u1, u2)) is not None, name
        sheaf = bool(is_sheaf(P, J))
        for Q, u in results:
            assert is_iso(u) == sheaf, name
            assert is_sheaf(Q, J), name
        Q = results[0][0]
        QQ, uu = sheafify(Q, J)
        assert is_iso(uu) and find_iso(QQ, Q) is not None, name


def _ideals_brute(R):
    E = R.elements
    out = []
    for r in range(1, len(E) + 1):
        for sub in itertools.combinations(E, r):
            I = frozenset(sub)
            if R.zero in I and all(R.plus(a, b) in I for a in I for b in I) \
                    and all(R.times(r_, a) in I for r_ in E for a in I):
                out.append(I)
    return out


def _stalk_size(R, p):
    """|R_p| by brute force on pairs (a, s) with s outside p."""
    S = [s for s in R.elements if s not in p]
    pairs = [(a, s) for a in R.elements for s in S]

    def same(x, y):
        (a, s), (b, t) = x, y
        diff = R.plus(R.times(a, t), R.neg(R.times(b, s)))
        return any(R.times(u, diff) == R.zero for u in S)

    classes = []
    for x in pairs:
        if not any(same(x, c) for c in classes):
            classes.append(x)
    return len(classes)


def c9_zariski():
    R = zmod(6)
    spec = zariski_spectrum(R)
    primes = [I for I in _ideals_brute(R) if len(I) < len(R.elements) and all(
        a in I or b in I for a in R.elements for b in R.elements if R.times(a, b) in I)]
    assert set(spec.space.points) == set(primes) and len(primes) == 2
    sizes = sorted(len(spec.stalks[p].elements) for p in spec.space.points)
    assert sizes == [2, 3] == sorted(_stalk_size(R, p) for p in primes)
    S = spec.sections
    assert tau_topology(S) == sigma_topology(S)
    assert is_local_homeo(spec.bundle)
    Q = sections_presheaf(spec.bundle)
    assert len(Q(frozenset(spec.space.points))) == 6
    _, ok = global_section_ring_map(spec, R)
    assert ok
    for K in (zmod(2), zmod(3), zmod(5), zmod(7), gf4()):
        sp = zariski_spectrum(K)
        assert len(sp.space.points) == 1
        (p,) = sp.space.points
        assert len(sp.stalks[p].elements) == len(K.elements) == _stalk_size(K, p)
        assert global_section_ring_map(sp, K)[1]


def c10_mv():
    A = lukasiewicz_chain(3)
    spec = mv_spectrum(A)
    assert len(spec.space.points) == 1
    (p,) = spec.space.points
    assert len(set(spec.stalks[p].values())) == 3
    Q = sections_presheaf(spec.bundle)
    assert len(Q(frozenset(spec.space.points))) == 3
    L2 = lukasiewicz_chain(2)
    for B in (lukasiewicz_chain(2), A, lukasiewicz_chain(4), product_mv(L2, L2), product_mv(A, L2)):
        assert mv_distance_identity(B) is None, B.name


def c11_orthogonal_generation():
    P, J, Jp = diagonal_cover_fibration()
    _, verdict = orthogonal_generation(P, J, Jp)
    assert not verdict
    diag = ("t", "alpha", "*")
    assert any(E == ("1", "*") and S == frozenset({diag}) for E, S, *_ in verdict.witness)


def c12_etale_criteria():
    corpus = random_corpus(seed=7, size=150)
    assert len(corpus) >= 100
    for S in corpus:
        B = S.bundle
        tau, sigma = tau_topology(S), sigma_topology(S)
        # three-way equivalence
        assert bool(sections_continuous(S, sigma)) == bool(check_dagger(S)) == (sigma <= tau)
        # restriction to the joint image is étale once the two topologies agree
        if sigma == tau:
            assert is_local_homeo(restricted_bundle(S))
        # local-bijection criterion against every topology on E
        assert admits_etale_topology(B) == (local_bijection_family(B) is not None)
        # statements for families closed under subsections and gluings
        T = close_sections(S)
        assert tau_topology(T) == tau
        tau, sigma = tau_topology(T), sigma_topology(T)
        covers = frozenset().union(*image_family(T)) == frozenset(B.total)
        assert bool(check_joint_surjectivity(T)) == covers
        if covers:
            assert tau <= sigma
            if check_dagger(T):
                assert tau == sigma
                assert basis_generates(B.total, image_family(T), tau)


def _finite_space_presheaves():
    X = sierpinski_space()
    c = X.category()
    o, full = frozenset({"o"}), frozenset({"o", "c"})
    split = Presheaf(c, {frozenset(): ["*"], o: ["*"], full: ["a", "b"]},
                     {(o, full): {"a": "*", "b": "*"}, (frozenset(), full): {"a": "*", "b": "*"},
                      (frozenset(), o): {"*": "*"}})
    out = [(X, split)] + [(X, P) for P in presheaf_zoo(c)]
    D = FiniteSpace(["a", "b"], [[], ["a"], ["b"], ["a", "b"]])
    out += [(D, P) for P in presheaf_zoo(D.category())[:3]]
    T = FiniteSpace([0, 1, 2], [[], [0], [0, 1], [0, 2], [0, 1, 2]])
    out += [(T, two_point_presheaf(T.category())), (T, presheaf_zoo(T.category())[1])]
    return out


def c13_space_site_comparison():
    cases = _finite_space_presheaves()
    assert len(cases) >= 5
    for X, P in cases:
        r = site_comparison(P, X)
        assert r["morphism"] and r["comorphism"] and r["frame_iso"]


def c14_base_change():
    from finsite.fixtures import fibre_arrow_indexed, fibre_two_indexed
    targets = [grothendieck(fibre_arrow_indexed()), grothendieck(fibre_two_indexed())]
    for Q in targets:
        for c in (one(), two(), chain(3)):
            for F in enumerate_functors(c, Q.base):
                K, DI, Pre = direct_image_comparison(Q, F)
                assert is_equivalence(K)
                G = grothendieck(Pre)
                assert all(DI.proj.obj(K.obj(o)) == G.proj.obj(o) for o in G.total.objects)
                assert all(DI.proj.arr(K.arr(f)) == G.proj.arr(f) for f in G.total.arrow_ids)
    v = preorder(["a", "b", "c"], [("c", "a"), ("c", "b")], "Cospan")
    for c, d in ((two(), two()), (one(), two()), (two(), one()), (v, two()), (chain(3), two())):
        for P in presheaf_zoo(c):
            for F in enumerate_functors(c, d):
                L, _ = lan(F, P)
                for y in d.objects:
                    assert len(inverse_image_classes(discrete_indexed(P), F, y)) == len(L(y))
        for P in presheaf_zoo(c):
            assert find_iso(lan(identity_functor(c), P)[0], P) is not None


def _parallel_pair():
    return FiniteCategory(["0", "1"], {"id_0": ("0", "0"), "id_1": ("1", "1"),
                                       "f": ("0", "1"), "g": ("0", "1")},
                          {"0": "id_0", "1": "id_1"},
                          {("id_0", "id_0"): "id_0", ("id_1", "id_1"): "id_1",
                           ("f", "id_0"): "f", ("id_1", "f"): "f",
                           ("g", "id_0"): "g", ("id_1", "g"): "g"}, "Parallel")


def _panel():
    return [one(), two(), free_iso(), chain(3), discrete(["p", "q"]), _parallel_pair()]


def c15_localization():
    v = preorder(["a", "b", "c"], [("c", "a"), ("c", "b")], "Span")
    sources = [two(), chain(3), free_iso(), v, _parallel_pair()]
    panel = _panel()
    accepted = refused = 0
    for c in sources:
        arrows = list(c.arrow_ids)
        functors = {id(T): list(enumerate_functors(c, T)) for T in panel}
        for r in range(len(arrows) + 1):
            for W in itertools.combinations(arrows, r):
                W = frozenset(W)
                if not check_right_fractions(c, W):
                    with pytest.raises(FractionsError):
                        localize(c, W)
                    refused += 1
                    continue
                L = localize(c, W)
                accepted += 1
                saturation = set(c.arrow_ids)
                for T in panel:
                    for H in functors[id(T)]:
                        if not all(T.is_iso(H.arr(w)) for w in W):
                            continue
                        saturation &= {f for f in c.arrow_ids if T.is_iso(H.arr(f))}
                        Hb = factor_through(L, H)
                        assert compose_functors(Hb, L.functor).arrows == H.arrows
                        others = [K for K in enumerate_functors(L.category, T, dict(H.objects))
                                  if compose_functors(K, L.functor).arrows == H.arrows]
                        assert len(others) == 1
                assert inverted_arrows(L) == saturation, (c.name, W)
    assert accepted and refused


CRITERIA = [
    ("1 two-object site example", c1_two_site_example),
    ("2 prestack iff subcanonical", c2_prestack_iff_subcanonical),
    ("3 Giraud topology double computation", c3_giraud_double_computation),
    ("4 stack iff sheaf, prestack iff separated", c4_stack_iff_sheaf),
    ("5 fibred Yoneda round trips", c5_fibred_yoneda),
    ("6 Grothendieck and indexed round trip", c6_grothendieck_round_trip),
    ("7 colimit identities", c7_colimit_identities),
    ("8 sheafification triple agreement", c8_sheafification_agreement),
    ("9 Zariski spectrum of Z/6 and fields", c9_zariski),
    ("10 MV spectrum and distance identity", c10_mv),
    ("11 orthogonal generation gap", c11_orthogonal_generation),
    ("12 etale-space criteria on random bundles", c12_etale_criteria),
    ("13 space presheaf site comparison", c13_space_site_comparison),
    ("14 base change", c14_base_change),
    ("15 localization soundness", c15_localization),
]

RESULTS = {}


@pytest.mark.parametrize("title,check", CRITERIA, ids=[t for t, _ in CRITERIA])
def test_criterion(title, check):
    start = time.perf_counter()
    try:
        check()
    except BaseException:
        RESULTS[title] = (False, time.perf_counter() - start)
        raise
    elapsed = time.perf_counter() - start
    RESULTS[title] = (elapsed < BUDGET, elapsed)
    assert elapsed < BUDGET, f"took {elapsed:.1f}s"


def main():
    failed = 0
    for title, check in CRITERIA:
        start = time.perf_counter()
        try:
            check()
            ok, note = True, ""
        except Exception as e:
            ok, note = False, f" {type(e).__name__}: {e}"
        elapsed = time.perf_counter() - start
        ok = ok and elapsed < BUDGET
        failed += not ok
        print(f"criterion {title}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s){note}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
