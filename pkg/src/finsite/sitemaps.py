"""Functors between sites, Giraud topologies, stacks and base change."""
from dataclasses import dataclass

from .coverage import (GrothendieckTopology, all_sieves, generate, is_sheaf, is_subcanonical,
                       saturate, sheafify)
from .fincat import (BoundExceeded, FiniteCategory, Functor, NatTransf, UnionFind, Verdict,
                     comma, compose_functors, connected_components, env_bound, identity_functor, is_equivalence,
                     is_full_faithful, object_functor, order_key, ordered, slice_category, validate_functor,
                     validate_nat)
from .fractions import localize
from .indexed import (IndexedCategory, TotalFibration, cartesian_arrows, factor,
                      fibred_yoneda_psi, grothendieck, indexed_of_fibration,
                      is_street_fibration, PreconditionError)
from .presheaf import Presheaf, pi0_indexed


@dataclass(frozen=True)
class Site:
    category: FiniteCategory
    topology: GrothendieckTopology


def _image_sieve(c, x, arrows):
    return generate(c, x, arrows)


def preimage_sieve(p, D, S):
    """S_D = {f into D : p(f) ∈ S}."""
    return frozenset(f for f in p.src.into(D) if p.arr(f) in S)


# comorphisms and continuity


def is_comorphism(p, K, J):
    """Covering-lifting: every J-cover of p(D) contains the image of a K-cover of D."""
    for D in p.src.objects:
        for S in J.sieves(p.obj(D)):
            if not K.covers(D, preimage_sieve(p, D, S)):
                return Verdict(False, (D, S))
    return Verdict(True)


def min_comorphism_topology(p, J):
    """Least topology on the domain of p making p a comorphism into (c, J)."""
    cov = {D: [preimage_sieve(p, D, S) for S in J.sieves(p.obj(D))] for D in p.src.objects}
    return saturate(p.src, cov)


def is_cover_preserving(p, K, J):
    for D in p.src.objects:
        for S in K.sieves(D):
            image = _image_sieve(p.dst, p.obj(D), [p.arr(f) for f in S])
            if not J.covers(p.obj(D), image):
                return Verdict(False, (D, S))
    return Verdict(True)


def _comma_components(p, D, S, Y):
    """Components of (Y ↓ p∘π) for π: ∫S → dom(p); nodes are (e, k)."""
    c, d = p.dst, p.src
    nodes = [(e, k) for e in ordered(S) for k in c.hom(Y, p.obj(d.src(e)))]
    uf = UnionFind(nodes)
    for e in S:
        for e2 in S:
            for m in d.hom(d.src(e), d.src(e2)):
                if d.comp(e2, m) != e:
                    continue
                pm = p.arr(m)
                for k in c.hom(Y, p.obj(d.src(e))):
                    uf.union((e, k), (e2, c.comp(pm, k)))
    return uf


def is_continuous(p, K, J):
    """Cover preservation plus the cofinality condition on commuting squares."""
    cp = is_cover_preserving(p, K, J)
    if not cp:
        return Verdict(False, ("cover", cp.witness))
    c, d = p.dst, p.src
    for D in d.objects:
        for S in K.sieves(D):
            S_sorted = ordered(S)
            comps = {}
            for X in c.objects:
                for e in S_sorted:
                    for e2 in S_sorted:
                        pe, pe2 = p.arr(e), p.arr(e2)
                        for f in c.hom(X, p.obj(d.src(e))):
                            for g in c.hom(X, p.obj(d.src(e2))):
                                if c.comp(pe, f) != c.comp(pe2, g):
                                    continue
                                good = []
                                for y in c.into(X):
                                    Y = c.src(y)
                                    if Y not in comps:
                                        comps[Y] = _comma_components(p, D, S, Y)
                                    uf = comps[Y]
                                    if uf.find((e, c.comp(f, y))) == uf.find((e2, c.comp(g, y))):
                                        good.append(y)
                                if not J.covers(X, frozenset(good)):
                                    return Verdict(False, ("cofinality", D, S, X, e, e2, f, g))
    return Verdict(True)


def is_morphism_of_sites(F, J, K):
    """The four finite conditions for F: (c, J) → (d, K).

    Each condition asks that the sieve of arrows into an object of d along
    which the relevant data exists be K-covering.
    """
    c, d = F.src, F.dst
    cp = is_cover_preserving(F, J, K)
    if not cp:
        return Verdict(False, ("cover", cp.witness))
    for W in d.objects:
        good = frozenset(f for f in d.into(W)
                         if any(d.hom(d.src(f), F.obj(U)) for U in c.objects))
        if not K.covers(W, good):
            return Verdict(False, ("surjectivity", W))
    for U in c.objects:
        for V in c.objects:
            for W in d.objects:
                for g in d.hom(W, F.obj(U)):
                    for h in d.hom(W, F.obj(V)):
                        good = []
                        for f in d.into(W):
                            gf, hf = d.comp(g, f), d.comp(h, f)
                            src = d.src(f)
                            if any(d.comp(F.arr(u), k) == gf and d.comp(F.arr(v), k) == hf
                                   for Z in c.objects
                                   for u in c.hom(Z, U) for v in c.hom(Z, V)
                                   for k in d.hom(src, F.obj(Z))):
                                good.append(f)
                        if not K.covers(W, frozenset(good)):
                            return Verdict(False, ("span", U, V, g, h))
    for U in c.objects:
        for V in c.objects:
            pairs = [(u, v) for u in c.hom(U, V) for v in c.hom(U, V) if order_key(u) < order_key(v)]
            for u, v in pairs:
                for W in d.objects:
                    for h in d.hom(W, F.obj(U)):
                        if d.comp(F.arr(u), h) != d.comp(F.arr(v), h):
                            continue
                        good = []
                        for f in d.into(W):
                            hf = d.comp(h, f)
                            if any(c.comp(u, w) == c.comp(v, w) and d.comp(F.arr(w), k) == hf
                                   for w in c.into(U) for k in d.hom(d.src(f), F.obj(c.src(w)))):
                                good.append(f)
                        if not K.covers(W, frozenset(good)):
                            return Verdict(False, ("parallel", u, v, h))
    return Verdict(True)


# Giraud topology


def giraud_topology(P, J):
    """A sieve is covering iff its cartesian members project onto a J-cover."""
    if not is_street_fibration(P.proj):
        raise PreconditionError("not a fibration", None)
    p, total, c = P.proj, P.total, P.base
    cart = cartesian_arrows(p)
    cov = {}
    for E in total.objects:
        X = p.obj(E)
        cov[E] = set()
        for R in all_sieves(total, E):
            image = generate(c, X, [p.arr(f) for f in R if f in cart])
            if J.covers(X, image):
                cov[E].add(R)
    return GrothendieckTopology(total, cov)


# hom presheaves, prestacks and stacks


def _as_indexed(P):
    return P if isinstance(P, IndexedCategory) else indexed_of_fibration(P)


def slice_topology(J, X):
    """J_X: the least topology on c/X making the projection a comorphism."""
    cache = J.base.cache.setdefault("slice_topology", {})
    key = (id(J), X)
    if key not in cache:
        cat, proj = slice_category(J.base, X)
        cache[key] = (J, min_comorphism_topology(proj, J))
    return cache[key][1]


def hom_presheaf(P, X, U, V):
    """Hom(U, V) as a presheaf on c/X; P is a fibration or an indexed category."""
    D = _as_indexed(P)
    c = D.base
    F = D.fibres[X]
    if U not in F.identity or V not in F.identity:
        raise ValueError("objects must lie in the fibre at X")
    sl, _ = slice_category(c, X)
    values = {}
    for y in sl.objects:
        T = D.trans(y)
        values[y] = D.fibres[c.src(y)].hom(T.obj(U), T.obj(V))
    action = {}
    for arr in sl.arrow_ids:
        z, yz, y = arr
        FZ = D.fibres[c.src(z)]
        Tz = D.trans(z)
        action[arr] = {a: FZ.comp(D.comp(y, z, V), Tz.arr(a), FZ.inverse(D.comp(y, z, U)))
                       for a in values[y]}
    return Presheaf(sl, values, action)


def is_prestack(P, J):
    D = _as_indexed(P)
    for X in D.base.objects:
        JX = slice_topology(J, X)
        F = D.fibres[X]
        for U in F.objects:
            for V in F.objects:
                H = hom_presheaf(D, X, U, V)
                v = is_sheaf(H, JX)
                if not v:
                    return Verdict(False, (X, U, V, v.witness))
    return Verdict(True)


def _descent_data(D, X, S, bound, counter):
    c = D.base
    ys = ordered(S)
    zs = {y: c.into(c.src(y)) for y in ys}
    slots_U = ys
    results = []
    U = {}

    def tick():
        counter[0] += 1
        if counter[0] > bound:
            raise BoundExceeded(f"descent enumeration exceeded {bound} partial assignments")

    alpha_vars = [(y, z) for y in ys for z in zs[y] if not c.is_identity(z)]
    triples = {}
    for y in ys:
        for z in zs[y]:
            for w in c.into(c.src(z)):
                key = (y, z, w)
                for var in ((y, c.comp(z, w)), (y, z), (c.comp(y, z), w)):
                    triples.setdefault(var, []).append(key)

    def fibre(y):
        return D.fibres[c.src(y)]

    def cocycle(alpha, y, z, w):
        F = D.fibres[c.src(w)]
        zw, yz = c.comp(z, w), c.comp(y, z)
        lhs = F.comp(alpha[(y, zw)], D.comp(z, w, U[y]))
        rhs = F.comp(alpha[(yz, w)], D.trans(w).arr(alpha[(y, z)]))
        return lhs == rhs

    def walk_alpha(i, alpha):
        if i == len(alpha_vars):
            results.append(({y: U[y] for y in ys}, dict(alpha)))
            return
        y, z = alpha_vars[i]
        F = fibre(z)
        for a in F.isos(D.trans(z).obj(U[y]), U[c.comp(y, z)]):
            tick()
            alpha[(y, z)] = a
            ok = True
            for (y1, z1, w1) in triples.get((y, z), ()):
                needed = [(y1, c.comp(z1, w1)), (y1, z1), (c.comp(y1, z1), w1)]
                if all(v in alpha for v in needed) and not cocycle(alpha, y1, z1, w1):
                    ok = False
                    break
            if ok:
                walk_alpha(i + 1, alpha)
            del alpha[(y, z)]

    def walk_U(i):
        if i == len(slots_U):
            alpha = {}
            for y in ys:
                Y = c.src(y)
                alpha[(y, c.identity[Y])] = D.fibres[Y].inverse(D.unit(Y, U[y]))
            walk_alpha(0, alpha)
            return
        y = slots_U[i]
        for obj in fibre(y).objects:
            tick()
            U[y] = obj
            walk_U(i + 1)
        U.pop(y, None)

    walk_U(0)
    # triples made only of forced isos are never visited during the search
    keep = []
    for objs, alpha in results:
        U.clear()
        U.update(objs)
        if all(cocycle(alpha, y, z, w) for y in ys for z in zs[y] for w in c.into(c.src(z))):
            keep.append((objs, alpha))
    return keep


def _freeze_datum(objs, alpha):
    return (tuple(sorted(objs.items(), key=lambda kv: order_key(kv[0]))),
            tuple(sorted(alpha.items(), key=lambda kv: order_key(kv[0]))))


def descent_category(D, X, S, bound=None):
    """All descent data on the sieve S over X and their morphisms."""
    D = _as_indexed(D)
    bound = bound if bound is not None else env_bound("descent", 100000)
    counter = [0]
    c = D.base
    ys = ordered(S)
    data = _descent_data(D, X, S, bound, counter)
    objs = [_freeze_datum(o, a) for o, a in data]
    arrows = {}
    for A in objs:
        UA, aA = dict(A[0]), dict(A[1])
        for B in objs:
            UB, aB = dict(B[0]), dict(B[1])
            xi = {}

            def walk(i):
                if i == len(ys):
                    arrows[(A, B, tuple(xi[y] for y in ys))] = (A, B)
                    return
                y = ys[i]
                F = D.fibres[c.src(y)]
                for k in F.hom(UA[y], UB[y]):
                    counter[0] += 1
                    if counter[0] > bound:
                        raise BoundExceeded(f"descent enumeration exceeded {bound}")
                    xi[y] = k
                    ok = True
                    for y2 in ys[: i + 1]:
                        for z in c.into(c.src(y2)):
                            yz = c.comp(y2, z)
                            if yz not in xi:
                                continue
                            G = D.fibres[c.src(z)]
                            if G.comp(aB[(y2, z)], D.trans(z).arr(xi[y2])) != G.comp(xi[yz], aA[(y2, z)]):
                                ok = False
                                break
                        if not ok:
                            break
                    if ok:
                        walk(i + 1)
                    del xi[y]

            walk(0)
    identity = {A: (A, A, tuple(D.fibres[c.src(y)].identity[dict(A[0])[y]] for y in ys)) for A in objs}

    def compose(g, f):
        A, _, fx = f
        _, C, gx = g
        return (A, C, tuple(D.fibres[c.src(y)].comp(gk, fk) for y, gk, fk in zip(ys, gx, fx)))

    return FiniteCategory.build(objs, arrows, identity, compose)


def descent_functor(D, X, S, desc=None):
    """L_S: D(X) → Desc(S), U ↦ (D(y)U, φ_{y,z}(U))."""
    D = _as_indexed(D)
    c = D.base
    desc = desc if desc is not None else descent_category(D, X, S)
    ys = ordered(S)
    FX = D.fibres[X]
    omap = {}
    for U in FX.objects:
        objs = {y: D.trans(y).obj(U) for y in ys}
        alpha = {(y, z): D.comp(y, z, U) for y in ys for z in c.into(c.src(y))}
        omap[U] = _freeze_datum(objs, alpha)
    amap = {}
    for a in FX.arrow_ids:
        s, d = FX.arrows[a]
        amap[a] = (omap[s], omap[d], tuple(D.trans(y).arr(a) for y in ys))
    return Functor(FX, desc, omap, amap)


def is_stack(P, J, bound=None):
    D = _as_indexed(P)
    for X in D.base.objects:
        for S in J.sieves(X):
            L = descent_functor(D, X, S, descent_category(D, X, S, bound))
            v = is_equivalence(L)
            if not v:
                return Verdict(False, (X, S, v.witness))
    return Verdict(True)


def is_prestack_by_descent(P, J, bound=None):
    D = _as_indexed(P)
    for X in D.base.objects:
        for S in J.sieves(X):
            L = descent_functor(D, X, S, descent_category(D, X, S, bound))
            v = is_full_faithful(L)
            if not v:
                return Verdict(False, (X, S, v.witness))
    return Verdict(True)


def prestack_iff_subcanonical_check(P, J):
    if not is_subcanonical(J):
        raise PreconditionError("topology is not subcanonical", None)
    return bool(is_prestack(P, J)), bool(is_subcanonical(giraud_topology(P, J)))


# orthogonal generation


def orthogonal_generation(P, J, Jp):
    """Saturate the horizontal and vertical data of Jp and compare with Jp.

    Horizontal data: covering sieves generated by their cartesian members,
    whose projections generate a J-cover.  Vertical data: covering sieves
    generated by their vertical members.  Returns (generated, Verdict) where
    the verdict witness lists the sieves on which the two disagree.
    """
    p, total, c = P.proj, P.total, P.base
    giraud = giraud_topology(P, J)
    for E in total.objects:
        missing = giraud.covering[E] - Jp.covering[E]
        if missing:
            raise PreconditionError("topology does not contain the Giraud topology",
                                    (E, ordered(missing)[0]))
    cart = cartesian_arrows(p)
    coverage = {}
    for E in total.objects:
        X = p.obj(E)
        gens = []
        for R in Jp.sieves(E):
            horiz = [f for f in R if f in cart]
            if generate(total, E, horiz) == R and J.covers(X, generate(c, X, [p.arr(f) for f in horiz])):
                gens.append(R)
                continue
            vert = [f for f in R if c.is_identity(p.arr(f))]
            if generate(total, E, vert) == R:
                gens.append(R)
        coverage[E] = gens
    generated = saturate(total, coverage)
    gaps = []
    for E in total.objects:
        for R in ordered(Jp.covering[E] ^ generated.covering[E]):
            gaps.append((E, R, "missing" if R in Jp.covering[E] else "extra"))
    return generated, Verdict(not gaps, gaps or None)


# base change


def strict_pseudopullback(q, F):
    """Triples (X, E, f: F(X) ≅ q(E)) over the domain of F."""
    c, d, total = F.src, F.dst, q.src
    objs = [(X, E, f) for X in c.objects for E in total.objects for f in d.isos(F.obj(X), q.obj(E))]
    arrows = {}
    for o in objs:
        for o2 in objs:
            for x in c.hom(o[0], o2[0]):
                for e in total.hom(o[1], o2[1]):
                    if d.comp(q.arr(e), o[2]) == d.comp(o2[2], F.arr(x)):
                        arrows[(x, e, o[2], o2[2])] = (o, o2)
    identity = {o: (c.identity[o[0]], total.identity[o[1]], o[2], o[2]) for o in objs}
    cat = FiniteCategory.build(objs, arrows, identity,
                               lambda g, f: (c.comp(g[0], f[0]), total.comp(g[1], f[1]), f[2], g[3]))
    P1 = Functor(cat, c, {o: o[0] for o in objs}, {a: a[0] for a in arrows})
    P2 = Functor(cat, total, {o: o[1] for o in objs}, {a: a[1] for a in arrows})
    return cat, P1, P2


def direct_image(Q, F):
    """Base change of the fibration Q along F by strict pseudopullback."""
    if F.dst != Q.base:
        raise ValueError("direct_image: F must land in the base of Q")
    cat, P1, _ = strict_pseudopullback(Q.proj, F)
    return TotalFibration(cat, F.src, P1)


def precomposition(D, F):
    """D∘F^op as an indexed category over the domain of F."""
    c = F.src
    fibres = {x: D.fibres[F.obj(x)] for x in c.objects}
    transitions = {y: D.trans(F.arr(y)) for y in c.arrow_ids}
    unit = {}
    for x in c.objects:
        unit[x] = dict(D.unit_iso[F.obj(x)])
    comp = {}
    for (y, z), yz in c.table.items():
        comp[(y, z)] = dict(D.comp_iso[(F.arr(y), F.arr(z))])
    return IndexedCategory(c, fibres, transitions, unit, comp)


def direct_image_comparison(Q, F):
    """Functor grothendieck(precomposition(indexed(Q), F)).total → direct_image(Q, F).total.

    (X, (A, α)) ↦ (X, A, α); the arrow (y, a, (A, α)) goes to
    (y, lift(α∘F(y), A)∘a).  It commutes with the projections on the nose.
    """
    D = indexed_of_fibration(Q)
    Pre = precomposition(D, F)
    G = grothendieck(Pre).total
    DI = direct_image(Q, F)
    d = Q.base
    omap = {o: (o[0], o[1][0], o[1][1]) for o in G.objects}
    amap = {}
    for arr in G.arrow_ids:
        y, a, (A, alpha) = arr
        f1, _ = Q.lift(d.comp(alpha, F.arr(y)), A)
        src, dst = G.arrows[arr]
        amap[arr] = (y, Q.total.comp(f1, a[0]), omap[src][2], omap[dst][2])
    return Functor(G, DI.total, omap, amap), DI, Pre


def inverse_image_fibre(D, F, d_obj):
    """(d ↓ F∘p_D) localized at arrows whose total component is cartesian."""
    G = grothendieck(D)
    FpD = compose_functors(F, G.proj)
    pick = object_functor(F.dst, d_obj)
    cat, _, Q, _ = comma(pick, FpD)
    cart = cartesian_arrows(G.proj)
    S = frozenset(a for a in cat.arrow_ids if a[1] in cart)
    return localize(cat, S)


def inverse_image_classes(D, F, d_obj):
    """Connected components of the localized comma category, as object lists."""
    return connected_components(inverse_image_fibre(D, F, d_obj).category)


# generalized elements and cocones


def generalized_elements(F):
    """(1_c ↓ F) → c with the inclusion i^F: d ↦ (F(d), d, 1)."""
    c = F.dst
    cat, P, Q, _ = comma(identity_functor(c), F)
    P_fib = TotalFibration(cat, c, P)
    omap = {x: (F.obj(x), x, c.identity[F.obj(x)]) for x in F.src.objects}
    amap = {}
    for f in F.src.arrow_ids:
        s, t = F.src.arrows[f]
        Ff = F.arr(f)
        amap[f] = (Ff, f, c.identity[F.obj(s)], c.identity[F.obj(t)])
    return P_fib, Functor(F.src, cat, omap, amap)


def all_generalized_isos(F):
    c = F.dst
    return all(c.is_iso(a) for x in F.src.objects for a in c.into(F.obj(x)))


def universal_factorization(F, Q, G):
    """χ: (1 ↓ F) → total of Q with χ∘i^F ≅ G, for G with q∘G = F."""
    P_fib, iF = generalized_elements(F)
    c, total, q = F.dst, Q.total, Q.proj
    omap, lifts = {}, {}
    for o in P_fib.total.objects:
        x, dd, a = o
        f, theta = Q.lift(a, G.obj(dd))
        lifts[o] = (f, theta)
        omap[o] = total.src(f)
    amap = {}
    for arr in P_fib.total.arrow_ids:
        a, b, _, _ = arr
        s, t = P_fib.total.arrows[arr]
        fs, ts = lifts[s]
        ft, tt = lifts[t]
        amap[arr] = factor(q, ft, total.comp(G.arr(b), fs), c.comp(tt, a, c.inverse(ts)))
    return Functor(P_fib.total, total, omap, amap)


@dataclass
class Cocone:
    """Legs H[(X, obj)]: c/X → A; cells H[(X, γ)] and comparison isos H[(y, obj)]."""
    target: FiniteCategory
    legs: dict
    cells: dict
    pseudo: dict


def postcompose_functor(c, y):
    """Σ_y: c/Y → c/X for y: Y → X."""
    Y, X = c.arrows[y]
    src, _ = slice_category(c, Y)
    dst, _ = slice_category(c, X)
    return Functor(src, dst, {w: c.comp(y, w) for w in src.objects},
                   {a: (a[0], c.comp(y, a[1]), c.comp(y, a[2])) for a in src.arrow_ids})


def canonical_cocone(P):
    """The colimit cocone of fibred Yoneda legs for a cloven fibration P."""
    I = indexed_of_fibration(P)
    c, D, p = P.base, P.total, P.proj
    legs, cells, pseudo = {}, {}, {}
    for X in c.objects:
        F = I.fibres[X]
        for obj in F.objects:
            legs[(X, obj)] = fibred_yoneda_psi(P, X, obj).F
        for g in F.arrow_ids:
            gamma, _, _ = g
            (A, a), (B, b) = F.arrows[g]
            comps = {}
            for y in c.into(X):
                fA, tA = P.lift(c.comp(a, y), A)
                fB, tB = P.lift(c.comp(b, y), B)
                comps[y] = factor(p, fB, D.comp(gamma, fA), c.comp(tB, c.inverse(tA)))
            cells[(X, g)] = NatTransf(legs[(X, (A, a))], legs[(X, (B, b))], comps)
    for y in c.arrow_ids:
        Y, X = c.arrows[y]
        T = I.trans(y)
        sigma = postcompose_functor(c, y)
        for obj in I.fibres[X].objects:
            A, a = obj
            fy, ty = P.lift(c.comp(a, y), A)
            comps = {}
            for z in c.into(Y):
                fyz, tyz = P.lift(c.comp(a, y, z), A)
                f2, t2 = P.lift(c.comp(ty, z), D.src(fy))
                comps[z] = factor(p, D.comp(fy, f2), fyz, c.comp(t2, c.inverse(tyz)))
            pseudo[(y, obj)] = NatTransf(compose_functors(legs[(X, obj)], sigma),
                                         legs[(Y, T.obj(obj))], comps)
    return Cocone(D, legs, cells, pseudo)


def projection_cocone(P):
    """Legs the slice projections into the base; every 2-cell is an identity."""
    I = indexed_of_fibration(P)
    c = P.base
    legs, cells, pseudo = {}, {}, {}
    projs = {X: slice_category(c, X)[1] for X in c.objects}
    for X in c.objects:
        for obj in I.fibres[X].objects:
            legs[(X, obj)] = projs[X]
        for g in I.fibres[X].arrow_ids:
            s, t = I.fibres[X].arrows[g]
            cells[(X, g)] = NatTransf(projs[X], projs[X], {w: c.identity[c.src(w)] for w in c.into(X)})
    for y in c.arrow_ids:
        Y, X = c.arrows[y]
        sigma = postcompose_functor(c, y)
        for obj in I.fibres[X].objects:
            pseudo[(y, obj)] = NatTransf(compose_functors(projs[X], sigma), projs[Y],
                                         {z: c.identity[c.src(z)] for z in c.into(Y)})
    return Cocone(c, legs, cells, pseudo)


def validate_cocone(P, H):
    issues = []
    I = indexed_of_fibration(P)
    c = P.base
    for X in c.objects:
        F = I.fibres[X]
        for obj in F.objects:
            leg = H.legs.get((X, obj))
            if leg is None or leg.dst != H.target or validate_functor(leg):
                issues.append(("leg", X, obj))
        for g in F.arrow_ids:
            cell = H.cells.get((X, g))
            if cell is None or validate_nat(cell):
                issues.append(("cell", X, g))
        for U in F.objects:
            cell = H.cells.get((X, F.identity[U]))
            if cell is not None and any(not H.target.is_identity(a) for a in cell.components.values()):
                issues.append(("cell-identity", X, U))
        for (g, f), gf in F.table.items():
            A, B, C = H.cells.get((X, f)), H.cells.get((X, g)), H.cells.get((X, gf))
            if A and B and C:
                for w, k in C.components.items():
                    if H.target.comp(B[w], A[w]) != k:
                        issues.append(("cell-composition", X, g, f))
                        break
    for y in c.arrow_ids:
        Y, X = c.arrows[y]
        T = I.trans(y)
        for obj in I.fibres[X].objects:
            cell = H.pseudo.get((y, obj))
            if cell is None or validate_nat(cell) or any(not H.target.is_iso(a) for a in cell.components.values()):
                issues.append(("pseudo", y, obj))
        for g in I.fibres[X].arrow_ids:
            s, t = I.fibres[X].arrows[g]
            ps, pt = H.pseudo.get((y, s)), H.pseudo.get((y, t))
            cx, cy = H.cells.get((X, g)), H.cells.get((Y, T.arr(g)))
            if not (ps and pt and cx and cy):
                continue
            for z in c.into(Y):
                lhs = H.target.comp(pt[z], cx[c.comp(y, z)])
                rhs = H.target.comp(cy[z], ps[z])
                if lhs != rhs:
                    issues.append(("pseudo-naturality", y, g))
                    break
    return issues


def induced_from_cocone(P, H):
    """h: total → target with h(D) = H_(D,1)([1]) and the three-step arrow formula."""
    issues = validate_cocone(P, H)
    if issues:
        raise ValueError(f"invalid cocone: {issues[:3]}")
    c, D, p = P.base, P.total, P.proj
    A = H.target
    omap = {}
    for E in D.objects:
        X = p.obj(E)
        omap[E] = H.legs[(X, (E, c.identity[X]))].obj(c.identity[X])
    amap = {}
    for g in D.arrow_ids:
        Dd, E = D.arrows[g]
        XD, XE = p.obj(Dd), p.obj(E)
        pg = p.arr(g)
        f, theta = P.lift(pg, E)
        vg = factor(p, f, g, theta)
        objE = (E, c.identity[XE])
        v_arrow = (vg, c.identity[XD], theta)
        step1 = H.cells[(XD, v_arrow)][c.identity[XD]]
        step2 = A.inverse(H.pseudo[(pg, objE)][c.identity[XD]])
        slice_arrow = (pg, pg, c.identity[XE])
        step3 = H.legs[(XE, objE)].arr(slice_arrow)
        amap[g] = A.comp(step3, step2, step1)
    return Functor(D, A, omap, amap)


def truncate(D, J):
    """a_J(π₀∘D) with its unit."""
    return sheafify(pi0_indexed(D), J)
