"""Localization under a right calculus of fractions, and colimits of categories.

An arrow of c[W⁻¹] is a class of spans X ←v– Z –f→ Y with v in W, read
as f∘v⁻¹.  Two spans are identified when they have a common refinement
through W.
"""
from .fincat import (FiniteCategory, Functor, NatTransf, UnionFind, Verdict,
                     compose_functors, opposite, ordered, slice_category)
from .indexed import (FibrationMorphism, IndexedCategory, TotalFibration, cartesian_arrows,
                      dual, grothendieck)


class FractionsError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(f"{message}: {witness!r}")
        self.witness = witness


def check_right_fractions(c, W):
    """Identities, composition closure, right Ore and right cancellation."""
    W = frozenset(W)
    for f in W:
        if f not in c.arrows:
            return Verdict(False, ("unknown arrow", f))
    for x in c.objects:
        if c.identity[x] not in W:
            return Verdict(False, ("identity", x))
    for (g, f), gf in c.table.items():
        if g in W and f in W and gf not in W:
            return Verdict(False, ("composition", g, f))
    for w in ordered(W):
        for f in c.into(c.dst(w)):
            if _ore_square(c, W, f, w) is None:
                return Verdict(False, ("ore", f, w))
    for w in ordered(W):
        x = c.src(w)
        for z in c.objects:
            arrs = c.hom(z, x)
            for i, f in enumerate(arrs):
                for g in arrs[i + 1:]:
                    if c.comp(w, f) == c.comp(w, g) and not _equalized(c, W, f, g):
                        return Verdict(False, ("cancellation", w, f, g))
    return Verdict(True)


def _equalized(c, W, f, g):
    return any(c.comp(f, v) == c.comp(g, v) for v in c.into(c.src(f)) if v in W)


def _ore_square(c, W, f, w):
    """Least (u, h) with u in W and f∘u = w∘h."""
    z, zw = c.src(f), c.src(w)
    for u in c.into(z):
        if u not in W:
            continue
        for h in c.hom(c.src(u), zw):
            if c.comp(f, u) == c.comp(w, h):
                return u, h
    return None


class Localization:
    """c[W⁻¹] with its canonical functor; built by ``localize``.

    ``classes`` maps a pair (v, f) with v in W to its arrow in the
    localization: f∘v⁻¹ for right fractions, v⁻¹∘f for left ones.
    """

    def __init__(self, base, W, category, functor, classes, side="right", dual=None):
        self.base = base
        self.W = W
        self.category = category
        self.functor = functor
        self.classes = classes
        self.side = side
        self.dual = dual

    def fraction(self, T, arr, v, f):
        """The value of the class of (v, f) under a functor with arrow map ``arr`` into T."""
        if self.side == "right":
            return T.comp(arr(f), T.inverse(arr(v)))
        return T.comp(T.inverse(arr(v)), arr(f))

    def class_of(self, v, f):
        return self.classes[(v, f)]

    def spans(self, arrow):
        return [s for s, r in self.classes.items() if r == arrow]

    def inverse_of(self, w):
        """The class of w⁻¹ for w in W."""
        end = self.base.src(w) if self.side == "right" else self.base.dst(w)
        return self.classes[(w, self.base.identity[end])]


def localize(c, W):
    W = frozenset(W)
    verdict = check_right_fractions(c, W)
    if not verdict:
        raise FractionsError("no right calculus of fractions", verdict.witness)
    spans = [(v, f) for v in ordered(W) for f in c.out_of(c.src(v))]
    uf = UnionFind(spans)
    for (v, f) in spans:
        for u in c.into(c.src(v)):
            vu = c.comp(v, u)
            if vu in W:
                uf.union((v, f), (vu, c.comp(f, u)))
    classes = {s: uf.find(s) for s in spans}
    reps = ordered(set(classes.values()))
    arrows = {r: (c.dst(r[0]), c.dst(r[1])) for r in reps}
    identity = {x: classes[(c.identity[x], c.identity[x])] for x in c.objects}

    def compose(g, f):
        w, k = g
        v, h = f
        u, m = _ore_square(c, W, h, w)
        return classes[(c.comp(v, u), c.comp(k, m))]

    cat = FiniteCategory.build(list(c.objects), arrows, identity, compose)
    j = Functor(c, cat, {x: x for x in c.objects},
                {f: classes[(c.identity[c.src(f)], f)] for f in c.arrow_ids})
    return Localization(c, W, cat, j, classes)


def localize_left(c, W):
    """c[W⁻¹] for a class with a left calculus of fractions, computed on the opposite."""
    W = frozenset(W)
    dual = localize(opposite(c), W)
    cat = opposite(dual.category)
    j = Functor(c, cat, dual.functor.objects, dual.functor.arrows)
    return Localization(c, W, cat, j, dual.classes, "left", dual)


def localize_either(c, W):
    """Right fractions when available, otherwise left ones; refuses if neither holds."""
    W = frozenset(W)
    right = check_right_fractions(c, W)
    if right:
        return localize(c, W)
    if check_right_fractions(opposite(c), W):
        return localize_left(c, W)
    raise FractionsError("no calculus of fractions on either side", right.witness)


def composition_well_defined(L):
    """Composite class does not depend on representatives or Ore squares."""
    if L.side == "left":
        return composition_well_defined(L.dual)
    c, W = L.base, L.W
    by_class = {}
    for s, r in L.classes.items():
        by_class.setdefault(r, []).append(s)
    cat = L.category
    for (g, f), gf in cat.table.items():
        for (w, k) in by_class[g]:
            for (v, h) in by_class[f]:
                for u in c.into(c.src(h)):
                    if u not in W:
                        continue
                    for m in c.hom(c.src(u), c.src(w)):
                        if c.comp(h, u) == c.comp(w, m):
                            if L.classes[(c.comp(v, u), c.comp(k, m))] != gf:
                                return Verdict(False, (g, f, (w, k), (v, h), (u, m)))
    return Verdict(True)


def inverted_arrows(L):
    return frozenset(f for f in L.base.arrow_ids if L.category.is_iso(L.functor.arr(f)))


def factor_through(L, H):
    """H̄ with H̄∘j = H for a functor H inverting W."""
    T = H.dst
    for w in L.W:
        if not T.is_iso(H.arr(w)):
            raise ValueError(f"{w!r} is not inverted")
    amap = {}
    for (v, f), r in L.classes.items():
        if r not in amap:
            amap[r] = L.fraction(T, H.arr, v, f)
    return Functor(L.category, T, dict(H.objects), amap)


def localize_fibration(P, W):
    """p_W: c[W⁻¹] → base with j_W as a morphism of fibrations."""
    p, base = P.proj, P.base
    for w in ordered(W):
        if not base.is_identity(p.arr(w)):
            raise FractionsError("not vertical", w)
    L = localize(P.total, W)
    amap = {}
    for (v, f), r in L.classes.items():
        amap.setdefault(r, base.comp(p.arr(f), base.inverse(p.arr(v))))
    pw = Functor(L.category, base, dict(p.objects), amap)
    j = L.functor
    phi = NatTransf(compose_functors(pw, j), p, {x: base.identity[p.obj(x)] for x in P.total.objects})
    return TotalFibration(L.category, base, pw), FibrationMorphism(j, phi, p, pw), L


# colimits of categories


def _fibre_leg(D, G, x):
    c, F = D.base, D.fibres[x]
    omap = {U: (x, U) for U in F.objects}
    amap = {a: (c.identity[x], F.comp(D.unit(x, F.dst(a)), a), F.dst(a)) for a in F.arrow_ids}
    return Functor(F, G.total, omap, amap)


def lax_colimit(D):
    """Total of the Grothendieck construction with legs i_X and 2-cells i_y."""
    G = grothendieck(D)
    c = D.base
    legs = {x: _fibre_leg(D, G, x) for x in c.objects}
    cells = {}
    for y in c.arrow_ids:
        Y, X = c.arrows[y]
        T = D.trans(y)
        cells[y] = NatTransf(compose_functors(legs[Y], T), legs[X],
                             {U: (y, D.fibres[Y].identity[T.obj(U)], U) for U in D.fibres[X].objects})
    return G.total, legs, cells


def oplax_colimit(D):
    """Opposite of the total of the dual, with legs j_X and 2-cells j_y."""
    Dv = dual(D)
    total, legs, cells = lax_colimit(Dv)
    op = opposite(total)
    c = D.base
    jlegs = {}
    for x in c.objects:
        leg = legs[x]
        jlegs[x] = Functor(D.fibres[x], op, dict(leg.objects), dict(leg.arrows))
    jcells = {}
    for y in c.arrow_ids:
        Y, X = c.arrows[y]
        T = D.trans(y)
        jcells[y] = NatTransf(jlegs[X], compose_functors(jlegs[Y], T), dict(cells[y].components))
    return op, jlegs, jcells


def pseudo_colimit(D):
    """Localization of the lax colimit at its cartesian arrows."""
    G = grothendieck(D)
    return localize_either(G.total, cartesian_arrows(G.proj))


def triple_category(D, R):
    """Lax colimit of D∘p over the Grothendieck construction of R.

    R is a covariant pseudofunctor on the base of D, given as an indexed
    category over the opposite base.  Objects are (X, U, B) with U in D(X)
    and B in R(X); an arrow (y, a, b): (Y, V, B') → (X, U, B) has
    a: V → D(y)U and b: R(y)B' → B.  Its id is (y, a, b, U, B'), since a
    and b alone need not determine U and B'.
    """
    c = D.base
    if R.base != opposite(c):
        raise ValueError("R must be indexed over the opposite of D's base")
    objs = [(x, U, B) for x in c.objects for U in D.fibres[x].objects for B in R.fibres[x].objects]
    arrows = {}
    for y in c.arrow_ids:
        Y, X = c.arrows[y]
        FY, FX = D.fibres[Y], R.fibres[X]
        Dy, Ry = D.trans(y), R.trans(y)
        for U in D.fibres[X].objects:
            for a in FY.into(Dy.obj(U)):
                for B2 in R.fibres[Y].objects:
                    for b in FX.out_of(Ry.obj(B2)):
                        arrows[(y, a, b, U, B2)] = ((Y, FY.src(a), B2), (X, U, FX.dst(b)))
    identity = {(x, U, B): (c.identity[x], D.unit(x, U), R.fibres[x].inverse(R.unit(x, B)), U, B)
                for (x, U, B) in objs}

    def compose(g, f):
        y, a, b = g[:3]
        z, a2, b2 = f[:3]
        Z = c.src(z)
        (_, U, _) = arrows[g][1]
        (_, _, B3) = arrows[f][0]
        FZ = D.fibres[Z]
        first = FZ.comp(D.comp(y, z, U), D.trans(z).arr(a), a2)
        RX = R.fibres[c.dst(y)]
        third = RX.comp(b, R.trans(y).arr(b2), RX.inverse(R.comp(z, y, B3)))
        return (c.comp(y, z), first, third, U, B3)

    return FiniteCategory.build(objs, arrows, identity, compose)


def _invertible_parts(D, R, K):
    c = D.base
    S = set()
    for f in K.arrow_ids:
        y, a, b = f[:3]
        if D.fibres[c.src(y)].is_iso(a) and R.fibres[c.dst(y)].is_iso(b):
            S.add(f)
    return frozenset(S)


def weighted_ps_colimit(D, R):
    """Triple category localized at the arrows whose a and b are invertible."""
    K = triple_category(D, R)
    return localize_either(K, _invertible_parts(D, R, K))


def slice_weight(c):
    """The strict functor c/−, as an indexed category over the opposite of c."""
    cop = opposite(c)
    fibres = {x: slice_category(c, x)[0] for x in c.objects}
    transitions = {}
    for y in c.arrow_ids:
        Y, X = c.arrows[y]
        src, dst = fibres[Y], fibres[X]
        omap = {w: c.comp(y, w) for w in src.objects}
        amap = {a: (a[0], c.comp(y, a[1]), c.comp(y, a[2])) for a in src.arrow_ids}
        transitions[y] = Functor(src, dst, omap, amap)
    return IndexedCategory.strict(cop, fibres, transitions)


def comparison_functor(D, loc):
    """L: weighted_ps_colimit(D, c/−) → grothendieck(D).total.

    (X, U, w: W → X) goes to (W, D(w)U); the arrow (y, a, b) with b over
    h goes to (h, φ_{w,h}(U)⁻¹∘φ_{y,z}(U)∘D(z)(a)).
    """
    c = D.base
    G = grothendieck(D).total
    K = loc.base

    def L_obj(o):
        x, U, w = o
        return (c.src(w), D.trans(w).obj(U))

    def L_arr(f):
        y, a, b = f[:3]
        (Y, V, z), (X, U, w) = K.arrows[f]
        h = b[0]
        F = D.fibres[c.src(z)]
        val = F.comp(F.inverse(D.comp(w, h, U)), D.comp(y, z, U), D.trans(z).arr(a))
        return (h, val, D.trans(w).obj(U))

    omap = {o: L_obj(o) for o in K.objects}
    raw = {f: L_arr(f) for f in K.arrow_ids}
    amap = {}
    for (v, f), r in loc.classes.items():
        if r not in amap:
            amap[r] = loc.fraction(G, raw.__getitem__, v, f)
    return Functor(loc.category, G, omap, amap)


def groupoidify_fibres(D):
    """D with every fibre localized at all of its arrows."""
    c = D.base
    locs = {x: localize(F, F.arrow_ids) for x, F in D.fibres.items()}
    fibres = {x: L.category for x, L in locs.items()}
    transitions = {}
    for y in c.arrow_ids:
        Y, X = c.arrows[y]
        T = D.trans(y)
        LX, LY = locs[X], locs[Y]
        amap = {}
        for (v, f), r in LX.classes.items():
            amap.setdefault(r, LY.category.comp(LY.functor.arr(T.arr(f)),
                                                LY.category.inverse(LY.functor.arr(T.arr(v)))))
        transitions[y] = Functor(fibres[X], fibres[Y], dict(T.objects), amap)
    unit = {x: {U: locs[x].functor.arr(a) for U, a in D.unit_iso[x].items()} for x in c.objects}
    comp = {k: {U: locs[c.src(k[1])].functor.arr(a) for U, a in v.items()}
            for k, v in D.comp_iso.items()}
    return IndexedCategory(c, fibres, transitions, unit, comp)


def groupoidal_conification(D, R):
    """Pseudo colimit of R∘p_D: groupoidify the fibres, then invert the b-invertible arrows."""
    Dg = groupoidify_fibres(D)
    K = triple_category(Dg, R)
    c = D.base
    S = frozenset(f for f in K.arrow_ids if R.fibres[c.dst(f[0])].is_iso(f[2]))
    return localize_either(K, S)


def conification_direct(D, R):
    """Localize the triple category of D at the arrows whose b part is invertible."""
    K = triple_category(D, R)
    c = D.base
    S = frozenset(f for f in K.arrow_ids if R.fibres[c.dst(f[0])].is_iso(f[2]))
    return localize_either(K, S)
