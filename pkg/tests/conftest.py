import os
import random

import pytest

from finsite.coverage import saturate, trivial_topology
from finsite.etalespace import Bundle, FiniteSpace, Section, SectionFamily, generated_topology
from finsite.fincat import chain, discrete, preorder, two
from finsite.fixtures import (chain_frame, diamond_frame, fibre_arrow_indexed, fibre_two_indexed,
                              free_iso, join_cover_topology, open_set_poset, presheaf_zoo,
                              sierpinski_frame, singleton_cover_site)
from finsite.indexed import constant_indexed, grothendieck, slice_fibration
from finsite.presheaf import Presheaf, discrete_indexed

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture_path(name):
    return os.path.join(FIXTURES, name)


def preorder_sites():
    """(name, category, topology) for every preorder site in the corpus."""
    out = [("two_singleton_cover",) + singleton_cover_site(),
           ("two_trivial", two(), trivial_topology(two())),
           ("chain2_frame",) + chain_frame(2),
           ("chain3_frame",) + chain_frame(3),
           ("sierpinski_frame",) + sierpinski_frame(),
           ("diamond_frame",) + diamond_frame()]
    v = preorder(["a", "b", "c"], [("c", "a"), ("c", "b")], "Cospan")
    out.append(("cospan_dense", v, saturate(v, {"a": [[("c", "a")]], "b": [[("c", "b")]]})))
    three = open_set_poset([0, 1, 2], [[], [0], [0, 1], [0, 2], [0, 1, 2]])
    out.append(("three_point_opens", three, join_cover_topology(three)))
    return out


def subcanonical_sites():
    return [(n, c, J) for n, c, J in preorder_sites()
            if n in ("two_trivial", "chain3_frame", "sierpinski_frame", "diamond_frame",
                     "three_point_opens")]


def presheaf_corpus():
    """(site name, P, J) over every preorder site."""
    return [(n, P, J) for n, c, J in preorder_sites() for P in presheaf_zoo(c)]


def fibration_corpus():
    """(name, cloven fibration) pairs; every total has at most a handful of arrows."""
    c2 = two()
    out = [("fibre_arrow", grothendieck(fibre_arrow_indexed())),
           ("fibre_two", grothendieck(fibre_two_indexed())),
           ("slice_two_1", slice_fibration(c2, "1")),
           ("slice_two_0", slice_fibration(c2, "0")),
           ("constant_two_over_iso", grothendieck(constant_indexed(free_iso(), two()))),
           ("constant_pair_over_chain3", grothendieck(constant_indexed(chain(3), discrete(["p", "q"]))))]
    for i, P in enumerate(presheaf_zoo(c2)):
        out.append((f"discrete_two_{i}", grothendieck(discrete_indexed(P))))
    return out


def two_point_presheaf(c):
    return Presheaf(c, {x: ["a", "b"] for x in c.objects},
                    {f: {"a": "a", "b": "b"} for f in c.arrow_ids})


# random bundles with section families


def random_space(rng, n):
    pts = list(range(n))
    sub = [frozenset(x for x in pts if rng.random() < 0.5) for _ in range(rng.randint(0, 3))]
    return FiniteSpace(pts, generated_topology(pts, sub))


def random_section_family(rng, max_points=3, max_total=4, max_sections=4):
    X = random_space(rng, rng.randint(1, max_points))
    E = [f"e{i}" for i in range(rng.randint(1, max_total))]
    B = Bundle(E, X, {e: rng.choice(X.points) for e in E})
    sections = []
    for _ in range(rng.randint(0, max_sections)):
        U = rng.choice(X.opens)
        if all(B.fibre(x) for x in U):
            sections.append(Section.of({x: rng.choice(B.fibre(x)) for x in U}))
    return SectionFamily(B, sections)


def random_corpus(seed=7, size=150):
    rng = random.Random(seed)
    return [random_section_family(rng) for _ in range(size)]


@pytest.fixture(scope="session")
def bundle_corpus():
    return random_corpus()


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for title, _ in mod.CRITERIA:
        if title in results:
            ok, elapsed = results[title]
            terminalreporter.write_line(f"criterion {title}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s)")
