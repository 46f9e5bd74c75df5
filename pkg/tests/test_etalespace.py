import json
import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_section_family, two_point_presheaf
from finsite.coverage import is_sheaf
from finsite.etalespace import (Bundle, FiniteSpace, Section, SectionFamily, SpaceError,
                                admits_etale_topology, all_topologies, check_dagger, close_sections,
                                dagger_witness, discrete_space, generated_topology, germ_bundle,
                                germ_unit, gf4, global_section_ring_map, indiscrete_space,
                                is_continuous_map, is_local_homeo, local_bijection_family,
                                locally_dotted_sections, lukasiewicz_chain, mv_from_json,
                                mv_ideals, mv_prime_ideals, mv_quotient_algebra, mv_spectrum,
                                mv_to_json, prime_ideals, product_mv, product_ring, ring_from_json,
                                ring_ideals, ring_to_json, sections_presheaf, sierpinski_space,
                                sigma_topology, site_comparison, space_from_json, space_to_json,
                                tau_topology, validate_bundle, validate_mv, validate_ring,
                                validate_sections, validate_space, zariski_spectrum, zmod)
from finsite.fixtures import join_cover_topology, presheaf_zoo
from finsite.presheaf import is_iso


def subsets(xs):
    xs = list(xs)
    for r in range(len(xs) + 1):
        for c in combinations(xs, r):
            yield frozenset(c)


def prime_ideals_brute(R):
    E = R.elements
    out = set()
    for I in subsets(E):
        if R.zero not in I or R.one in I:
            continue
        if any(R.plus(a, b) not in I for a in I for b in I):
            continue
        if any(R.times(r, a) not in I for r in E for a in I):
            continue
        if all(a in I or b in I for a in E for b in E if R.times(a, b) in I):
            out.add(I)
    return out


def topology_count_brute(n):
    pts = list(range(n))
    count = 0
    fam = list(subsets(pts))
    full, empty = frozenset(pts), frozenset()
    for T in subsets(fam):
        if full not in T or empty not in T:
            continue
        if all(a | b in T and a & b in T for a in T for b in T):
            count += 1
    return count


@pytest.fixture
def lower_open_line():
    return FiniteSpace([0, 1], [[], [1], [0, 1]])


def test_spaces_validate():
    for X in (sierpinski_space(), discrete_space([1, 2, 3]), indiscrete_space(["a", "b"])):
        assert validate_space(X) == []
    bad = FiniteSpace([0, 1, 2], [[], [0], [1], [0, 1, 2]])
    assert any(i.kind == "union" for i in validate_space(bad))


def test_generated_topology_is_a_topology():
    rng = random.Random(3)
    for _ in range(30):
        pts = list(range(rng.randint(1, 4)))
        sub = [[x for x in pts if rng.random() < 0.5] for _ in range(3)]
        assert validate_space(FiniteSpace(pts, generated_topology(pts, sub))) == []


def test_topology_counts_match_brute():
    # 1, 1, 4, 29 topologies on 0..3 points
    for n in range(4):
        assert len(all_topologies(range(n))) == topology_count_brute(n)
    assert len(all_topologies(range(4))) == 355


def test_continuous_maps_into_sierpinski():
    S = sierpinski_space()
    X = FiniteSpace([0, 1], [[], [1], [0, 1]])
    maps = [{0: a, 1: b} for a in S.points for b in S.points]
    good = [f for f in maps if is_continuous_map(f, X, S)]
    # one per open of X
    assert len(good) == len(X.opens)


def test_raw_family_where_dagger_and_tau_sigma_disagree(lower_open_line):
    X = lower_open_line
    B = Bundle(["e0", "e1"], X, {"e0": 1, "e1": 0})
    S = SectionFamily(B, [Section.of({0: "e1", 1: "e0"})])
    assert validate_bundle(B) == [] and validate_sections(S) == []
    tau, sigma = tau_topology(S), sigma_topology(S)
    assert frozenset({"e0"}) in tau and frozenset({"e0"}) not in sigma
    assert check_dagger(S) and not tau <= sigma
    T = close_sections(S)
    assert tau_topology(T) == sigma_topology(T) == tau


def test_sections_need_open_domains(lower_open_line):
    X = lower_open_line
    B = Bundle(["e", "f"], X, {"e": 0, "f": 1})
    s = Section.of({0: "e", 1: "f"})
    t = Section.of({1: "f"})
    S = SectionFamily(B, [s, t])
    assert check_dagger(S)
    u = Section.of({0: "e"})
    # {0} is not open, so u is not even a valid local section
    assert validate_sections(SectionFamily(B, [u]))[0].kind == "domain not open"


def test_dagger_witness_for_a_twisted_pair():
    Y = FiniteSpace([0, 1], [[], [0, 1]])
    B = Bundle(["a0", "a1", "b0", "b1"], Y, {"a0": 0, "b0": 0, "a1": 1, "b1": 1})
    s = Section.of({0: "a0", 1: "a1"})
    t = Section.of({0: "a0", 1: "b1"})
    S = SectionFamily(B, [s, t])
    assert not check_dagger(S)
    w = dagger_witness(S)
    assert w is not None and not Y.is_open(w[1].preimage(w[0].image))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_dagger_iff_sigma_below_tau(seed):
    S = random_section_family(random.Random(seed))
    assert check_dagger(S) == (sigma_topology(S) <= tau_topology(S))
    assert (dagger_witness(S) is None) == check_dagger(S)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_close_sections_is_idempotent(seed):
    S = random_section_family(random.Random(seed))
    T = close_sections(S)
    assert set(close_sections(T).sections) == set(T.sections)
    assert set(S.sections) <= set(T.sections)
    assert validate_sections(T) == []


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_admits_etale_iff_local_bijection_family(seed):
    B = random_section_family(random.Random(seed)).bundle
    assert admits_etale_topology(B) == (local_bijection_family(B) is not None)


def test_local_homeo_needs_a_topology():
    B = Bundle(["e"], sierpinski_space(), {"e": "o"})
    with pytest.raises(SpaceError):
        is_local_homeo(B)
    with pytest.raises(SpaceError):
        sections_presheaf(B)


def test_topology_enumeration_refuses_large_totals():
    X = discrete_space([0])
    B = Bundle(list(range(6)), X, {e: 0 for e in range(6)})
    with pytest.raises(SpaceError):
        admits_etale_topology(B)


def test_identity_bundle_is_etale():
    X = sierpinski_space()
    B = Bundle(X.points, X, {x: x for x in X.points}, X.opens)
    assert is_local_homeo(B)
    # covering the open point by the closed one breaks continuity of the inverse
    assert not is_local_homeo(B.with_topology([(), ("c",), ("o", "c")]))


def test_germ_bundle_of_sierpinski_presheaves():
    X = sierpinski_space()
    c = X.category()
    J = join_cover_topology(c)
    for P in presheaf_zoo(c):
        G = germ_bundle(P, X)
        assert validate_bundle(G.bundle) == []
        assert is_local_homeo(G.bundle)
        Q, unit = germ_unit(G)
        assert is_iso(unit) == bool(is_sheaf(P, J))
        assert is_sheaf(Q, J).holds
        for U in X.opens:
            assert {s.graph for s in locally_dotted_sections(G, U)} == set(Q(U))


def test_germ_unit_on_a_three_point_space():
    T = FiniteSpace([0, 1, 2], [[], [0], [0, 1], [0, 2], [0, 1, 2]])
    c = T.category()
    J = join_cover_topology(c)
    for P in [two_point_presheaf(c)] + presheaf_zoo(c):
        Q, unit = germ_unit(germ_bundle(P, T))
        assert is_iso(unit) == bool(is_sheaf(P, J))


def test_germ_bundle_rejects_a_foreign_presheaf():
    P = presheaf_zoo(discrete_space(["a"]).category())[0]
    with pytest.raises(SpaceError):
        germ_bundle(P, sierpinski_space())


def test_site_comparison_on_discrete_and_sierpinski():
    for X in (sierpinski_space(), discrete_space(["a", "b"])):
        for P in presheaf_zoo(X.category())[:3]:
            r = site_comparison(P, X)
            assert r["morphism"] and r["comorphism"] and r["frame_iso"]
            assert r["morphism_witness"] is None or r["morphism"]


def test_rings_validate():
    for R in (zmod(1), zmod(4), zmod(6), gf4(), product_ring(zmod(2), zmod(3))):
        assert validate_ring(R) == [], R.name
    R = zmod(3)
    R.mul[(2, 2)] = 2
    assert validate_ring(R)


@pytest.mark.parametrize("n", [2, 4, 6, 8, 9, 12])
def test_prime_ideals_match_brute(n):
    R = zmod(n)
    assert set(prime_ideals(R)) == prime_ideals_brute(R)
    # ideals of Z/n are indexed by divisors of n
    assert len(ring_ideals(R)) == sum(1 for d in range(1, n + 1) if n % d == 0)


def test_prime_ideals_of_products_and_fields():
    assert set(prime_ideals(gf4())) == prime_ideals_brute(gf4()) == {frozenset({0})}
    R = product_ring(zmod(2), zmod(2))
    assert len(prime_ideals(R)) == 2 == len(prime_ideals_brute(R))


def test_local_ring_spectrum():
    R = zmod(4)
    spec = zariski_spectrum(R)
    assert len(spec.space.points) == 1
    (p,) = spec.space.points
    # Z/4 is already local
    assert len(spec.stalks[p].elements) == 4
    assert global_section_ring_map(spec, R)[1]


def test_product_ring_spectrum_is_discrete():
    R = product_ring(zmod(2), zmod(3))
    spec = zariski_spectrum(R)
    assert len(spec.space.points) == 2
    assert set(spec.space.opens) == set(discrete_space(spec.space.points).opens)
    assert global_section_ring_map(spec, R)[1]


def test_zariski_refuses_a_non_ring():
    R = zmod(3)
    R.add[(1, 1)] = 0
    with pytest.raises(SpaceError):
        zariski_spectrum(R)


def test_mv_algebras_validate():
    for n in range(1, 6):
        assert validate_mv(lukasiewicz_chain(n)) == []
    assert validate_mv(product_mv(lukasiewicz_chain(2), lukasiewicz_chain(3))) == []


def test_mv_ideals_of_chains_are_trivial():
    for n in range(2, 6):
        A = lukasiewicz_chain(n)
        assert [len(I) for I in mv_ideals(A)] == [1, n]
        assert len(mv_prime_ideals(A)) == 1


def test_mv_spectrum_of_a_product():
    L2, L3 = lukasiewicz_chain(2), lukasiewicz_chain(3)
    A = product_mv(L2, L3)
    spec = mv_spectrum(A)
    assert len(spec.space.points) == 2
    sizes = sorted(len(mv_quotient_algebra(A, I).elements) for I in spec.space.points)
    assert sizes == [2, 3]
    assert is_local_homeo(spec.bundle)


def test_mv_spectrum_of_three_element_chain():
    spec = mv_spectrum(lukasiewicz_chain(3))
    (I,) = spec.space.points
    assert I == frozenset({0})
    assert sorted(set(spec.stalks[I].values())) == [0, 1, 2]


def test_space_json_round_trip():
    for X in (sierpinski_space(), discrete_space([0, 1, 2])):
        data = json.loads(json.dumps(space_to_json(X)))
        assert space_from_json(data) == X
    with pytest.raises(SpaceError):
        space_from_json({"points": [0, 1], "opens": [[0], [0, 1]]})


def test_ring_json_round_trip():
    for R in (zmod(6), gf4(), product_ring(zmod(2), zmod(3))):
        S = ring_from_json(json.loads(json.dumps(ring_to_json(R))))
        assert S.elements == R.elements and S.add == R.add and S.mul == R.mul
        assert (S.zero, S.one) == (R.zero, R.one)


def test_mv_json_round_trip():
    L2, L3 = lukasiewicz_chain(2), lukasiewicz_chain(3)
    for A in (L3, product_mv(L2, L3)):
        B = mv_from_json(json.loads(json.dumps(mv_to_json(A))))
        assert B.elements == A.elements and B.oplus_table == A.oplus_table
        assert B.neg_map == A.neg_map and B.zero == A.zero
    data = mv_to_json(L3)
    data["neg"] = [0, 1, 2]
    with pytest.raises(SpaceError):
        mv_from_json(data)
