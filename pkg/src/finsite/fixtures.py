"""Small named sites, presheaves and fibrations used by the tests and the CLI."""
from .coverage import GrothendieckTopology, all_sieves, saturate
from .fincat import (FiniteCategory, Functor, chain, constant_functor, empty_category, one,
                     preorder, two)
from .indexed import IndexedCategory, TotalFibration, grothendieck
from .presheaf import Presheaf, representable, terminal_presheaf, empty_presheaf


def arrow_category():
    """x → x' with the arrow named alpha."""
    return FiniteCategory(
        ["x", "x'"],
        {"id_x": ("x", "x"), "id_x'": ("x'", "x'"), "alpha": ("x", "x'")},
        {"x": "id_x", "x'": "id_x'"},
        {("id_x", "id_x"): "id_x", ("id_x'", "id_x'"): "id_x'",
         ("alpha", "id_x"): "alpha", ("id_x'", "alpha"): "alpha"},
        "Arrow",
    )


def free_iso():
    """Two objects joined by an isomorphism f: 0 → 1 with inverse g."""
    table = {("id_0", "id_0"): "id_0", ("id_1", "id_1"): "id_1",
             ("f", "id_0"): "f", ("id_1", "f"): "f", ("g", "id_1"): "g", ("id_0", "g"): "g",
             ("g", "f"): "id_0", ("f", "g"): "id_1"}
    return FiniteCategory(["0", "1"], {"id_0": ("0", "0"), "id_1": ("1", "1"),
                                       "f": ("0", "1"), "g": ("1", "0")},
                          {"0": "id_0", "1": "id_1"}, table, "Iso")


def singleton_cover_site():
    """Two with {t} covering 1."""
    c = two()
    return c, saturate(c, {"1": [["t"]]})


def chain_frame(n):
    """The n-chain as a frame with the join-cover topology."""
    c = chain(n)
    return c, join_cover_topology(c)


def join_cover_topology(c):
    """On a finite lattice: a sieve on x covers iff the join of its sources is x."""
    from .localefr import frame_of_poset
    L = frame_of_poset(c)
    cov = {}
    for x in c.objects:
        cov[x] = set()
        for S in all_sieves(c, x):
            if L.join_all(c.src(f) for f in S) == x:
                cov[x].add(S)
    return GrothendieckTopology(c, cov)


def open_set_poset(points, opens):
    """Inclusion poset of a finite topology; opens are named by sorted tuples."""
    names = sorted({tuple(sorted(u)) for u in opens}, key=lambda u: (len(u), u))
    rel = [(a, b) for a in names for b in names if set(a) <= set(b)]
    return preorder(names, rel, "Opens")


def sierpinski_frame():
    """Opens of the Sierpiński space {o, c}: ∅ ⊂ {o} ⊂ {o, c}."""
    c = open_set_poset(["o", "c"], [[], ["o"], ["o", "c"]])
    return c, join_cover_topology(c)


def diamond_frame():
    """Opens of the two-point discrete space."""
    c = open_set_poset(["a", "b"], [[], ["a"], ["b"], ["a", "b"]])
    return c, join_cover_topology(c)


def fibre_arrow_indexed():
    """Over Two: fibre(0) = x → x', fibre(1) = One, t picks x'."""
    c = two()
    D0, D1 = arrow_category(), one()
    T = Functor(D1, D0, {"*": "x'"}, {"id_*": "id_x'"})
    return IndexedCategory.strict(c, {"0": D0, "1": D1}, {"t": T})


def fibre_two_indexed():
    """Over Two: fibre(1) = Two, fibre(0) = One, t the constant functor."""
    c = two()
    F1 = two()
    return IndexedCategory.strict(c, {"1": F1, "0": one()}, {"t": constant_functor(F1, one(), "*")})


def diagonal_cover_fibration():
    """The three-object total of fibre_arrow_indexed, with J on Two.

    Returns (fibration, J, Jp) where Jp assigns maximal sieves to (0, x)
    and (0, x') and {M, {(t, alpha)}, {(t, alpha), (t, 1)}} to (1, *).
    """
    D = fibre_arrow_indexed()
    P = grothendieck(D)
    c, J = singleton_cover_site()
    total = P.total
    top = ("1", "*")
    diag = ("t", "alpha", "*")
    horiz = ("t", "id_x'", "*")
    cov = {E: {frozenset(total.into(E))} for E in total.objects}
    cov[top] = {frozenset(total.into(top)), frozenset({diag}), frozenset({diag, horiz})}
    return P, J, GrothendieckTopology(total, cov)


def empty_fibration(c):
    E = empty_category()
    return TotalFibration(E, c, Functor(E, c, {}, {}))


def presheaf_zoo(c):
    """A spread of presheaves on c: representables, terminal, empty, two-point constant."""
    out = [representable(c, x) for x in c.objects]
    out.append(terminal_presheaf(c))
    out.append(empty_presheaf(c))
    out.append(Presheaf(c, {x: ["a", "b"] for x in c.objects},
                        {f: {"a": "a", "b": "b"} for f in c.arrow_ids}))
    return out
