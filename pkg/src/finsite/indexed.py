"""Indexed categories, fibrations and the Grothendieck construction."""
from dataclasses import dataclass

from .fincat import (FiniteCategory, Functor, Issue, NatTransf, Verdict, compose_functors,
                     find_limit, identity_functor, is_limit_cone, label, opposite,
                     opposite_functor, order_key, slice_category, validate_category, validate_functor,
                     category_from_json, category_to_json, functor_from_json,
                     functor_to_json)


class IndexedCategory:
    """A pseudofunctor base^op → FinCat.

    ``transitions[y]`` maps fibre(dst y) to fibre(src y); ``unit_iso[x][U]``
    is U → D(1_x)(U) and ``comp_iso[(y, z)][U]`` is D(z)D(y)(U) → D(yz)(U).
    """

    def __init__(self, base, fibres, transitions, unit_iso, comp_iso):
        self.base = base
        self.fibres = dict(fibres)
        self.transitions = dict(transitions)
        self.unit_iso = {x: dict(v) for x, v in unit_iso.items()}
        self.comp_iso = {k: dict(v) for k, v in comp_iso.items()}

    @classmethod
    def strict(cls, base, fibres, transitions):
        transitions = dict(transitions)
        for x in base.objects:
            transitions.setdefault(base.identity[x], identity_functor(fibres[x]))
        unit = {x: {U: fibres[x].identity[U] for U in fibres[x].objects} for x in base.objects}
        comp = {}
        for (y, z), yz in base.table.items():
            F = fibres[base.src(z)]
            T = transitions[yz]
            comp[(y, z)] = {U: F.identity[T.obj(U)] for U in fibres[base.dst(y)].objects}
        return cls(base, fibres, transitions, unit, comp)

    def fibre(self, x):
        return self.fibres[x]

    def trans(self, y):
        return self.transitions[y]

    def unit(self, x, U):
        return self.unit_iso[x][U]

    def comp(self, y, z, U):
        return self.comp_iso[(y, z)][U]

    def is_strict(self):
        c = self.base
        for x in c.objects:
            F = self.fibres[x]
            if any(not F.is_identity(a) for a in self.unit_iso[x].values()):
                return False
        for key, comps in self.comp_iso.items():
            F = self.fibres[c.src(key[1])]
            if any(not F.is_identity(a) for a in comps.values()):
                return False
        return True

    def __eq__(self, other):
        return (isinstance(other, IndexedCategory) and self.base == other.base
                and self.fibres == other.fibres and self.transitions == other.transitions
                and self.unit_iso == other.unit_iso and self.comp_iso == other.comp_iso)

    __hash__ = None


def constant_indexed(base, fibre):
    return IndexedCategory.strict(base, {x: fibre for x in base.objects},
                                  {f: identity_functor(fibre) for f in base.arrow_ids})


def validate_indexed(D):
    c = D.base
    issues = []
    for x in c.objects:
        if x not in D.fibres:
            issues.append(Issue("missing-fibre", x))
        elif validate_category(D.fibres[x]):
            issues.append(Issue("fibre", x))
    if issues:
        return issues
    for y in c.arrow_ids:
        T = D.transitions.get(y)
        s, d = c.arrows[y]
        if T is None:
            issues.append(Issue("missing-transition", y))
        elif T.src != D.fibres[d] or T.dst != D.fibres[s] or validate_functor(T):
            issues.append(Issue("transition", y))
    if issues:
        return issues

    def typed(F, a, s, d):
        return a in F.arrows and F.arrows[a] == (s, d) and F.is_iso(a)

    for x in c.objects:
        F, T = D.fibres[x], D.trans(c.identity[x])
        for U in F.objects:
            a = D.unit_iso.get(x, {}).get(U)
            if a is None or not typed(F, a, U, T.obj(U)):
                issues.append(Issue("unit-iso", (x, U)))
    for (y, z), yz in c.table.items():
        F = D.fibres[c.src(z)]
        Ty, Tz, Tyz = D.trans(y), D.trans(z), D.trans(yz)
        for U in D.fibres[c.dst(y)].objects:
            a = D.comp_iso.get((y, z), {}).get(U)
            if a is None or not typed(F, a, Tz.obj(Ty.obj(U)), Tyz.obj(U)):
                issues.append(Issue("comp-iso", (y, z, U)))
    if issues:
        return issues
    # naturality
    for x in c.objects:
        F, T = D.fibres[x], D.trans(c.identity[x])
        for g in F.arrow_ids:
            s, d = F.arrows[g]
            if F.comp(D.unit(x, d), g) != F.comp(T.arr(g), D.unit(x, s)):
                issues.append(Issue("unit-naturality", (x, g)))
    for (y, z), yz in c.table.items():
        F = D.fibres[c.src(z)]
        Ty, Tz, Tyz = D.trans(y), D.trans(z), D.trans(yz)
        for g in D.fibres[c.dst(y)].arrow_ids:
            s, d = D.fibres[c.dst(y)].arrows[g]
            if F.comp(D.comp(y, z, d), Tz.arr(Ty.arr(g))) != F.comp(Tyz.arr(g), D.comp(y, z, s)):
                issues.append(Issue("comp-naturality", (y, z, g)))
    # coherence
    for y in c.arrow_ids:
        Y, X = c.arrows[y]
        F = D.fibres[Y]
        Ty = D.trans(y)
        one_x, one_y = c.identity[X], c.identity[Y]
        for U in D.fibres[X].objects:
            left = F.comp(D.comp(one_x, y, U), Ty.arr(D.unit(X, U)))
            if left != F.identity[Ty.obj(U)]:
                issues.append(Issue("left-unit", (y, U)))
            right = F.comp(D.comp(y, one_y, U), D.unit(Y, Ty.obj(U)))
            if right != F.identity[Ty.obj(U)]:
                issues.append(Issue("right-unit", (y, U)))
    for (y, z), yz in c.table.items():
        for w in c.into(c.src(z)):
            zw = c.comp(z, w)
            F = D.fibres[c.src(w)]
            Ty, Tw = D.trans(y), D.trans(w)
            for U in D.fibres[c.dst(y)].objects:
                lhs = F.comp(D.comp(y, zw, U), D.comp(z, w, Ty.obj(U)))
                rhs = F.comp(D.comp(yz, w, U), Tw.arr(D.comp(y, z, U)))
                if lhs != rhs:
                    issues.append(Issue("cocycle", (y, z, w, U)))
    return issues


def check_indexed(D):
    issues = validate_indexed(D)
    if issues:
        raise ValueError(f"not a valid indexed category: {issues[:5]}")
    return D


# fibrations


class TotalFibration:
    """A functor with a cleavage.

    ``cleavage`` is an optional function (y, A) → (lift, θ) with
    proj(lift)∘θ = y; when absent the least cartesian lift (and least
    witnessing iso) is chosen.
    """

    def __init__(self, total, base, proj, cleavage=None):
        self.total = total
        self.base = base
        self.proj = proj
        self._cleavage = cleavage
        self._lifts = {}

    @classmethod
    def from_functor(cls, p, cleavage=None):
        return cls(p.src, p.dst, p, cleavage)

    def lift(self, y, A):
        key = (y, A)
        if key not in self._lifts:
            if self.base.dst(y) != self.proj.obj(A):
                raise ValueError(f"{y!r} does not end at p({A!r})")
            if self._cleavage is not None:
                self._lifts[key] = self._cleavage(y, A)
            else:
                self._lifts[key] = least_lift(self.proj, y, A)
            if self._lifts[key] is None:
                raise ValueError(f"no cartesian lift of {y!r} at {A!r}")
        return self._lifts[key]


def cartesian_arrows(p):
    cached = getattr(p, "_cartesian", None)
    if cached is None:
        cached = frozenset(f for f in p.src.arrow_ids if _cartesian(p, f))
        p._cartesian = cached
    return cached


def _cartesian(p, f):
    D, C = p.src, p.dst
    A, B = D.arrows[f]
    pf = p.arr(f)
    for X in D.objects:
        seen = set()
        for k in D.hom(X, A):
            key = (p.arr(k), D.comp(f, k))
            if key in seen:
                return False
            seen.add(key)
        needed = 0
        for h in D.hom(X, B):
            ph = p.arr(h)
            for g in C.hom(p.obj(X), p.obj(A)):
                if C.comp(pf, g) == ph:
                    needed += 1
        if needed != len(seen):
            return False
    return True


def is_cartesian(p, f):
    return f in cartesian_arrows(p)


def least_lift(p, y, A):
    D, C = p.src, p.dst
    Y = C.src(y)
    best = None
    for f in D.into(A):
        if f not in cartesian_arrows(p):
            continue
        for theta in C.isos(Y, p.obj(D.src(f))):
            if C.comp(p.arr(f), theta) == y:
                cand = (f, theta)
                if best is None or order_key(cand) < order_key(best):
                    best = cand
    return best


def is_grothendieck_fibration(p):
    D, C = p.src, p.dst
    cart = cartesian_arrows(p)
    for A in D.objects:
        images = {p.arr(f) for f in D.into(A) if f in cart}
        for y in C.into(p.obj(A)):
            if y not in images:
                return Verdict(False, (y, A))
    return Verdict(True)


def is_street_fibration(p):
    D, C = p.src, p.dst
    for A in D.objects:
        for y in C.into(p.obj(A)):
            if least_lift(p, y, A) is None:
                return Verdict(False, (y, A))
    return Verdict(True)


def is_discrete_fibration(p):
    """Every fibre is discrete and p is a fibration."""
    D = p.src
    if not is_grothendieck_fibration(p):
        return False
    return all(D.is_identity(f) for f in D.arrow_ids if p.dst.is_identity(p.arr(f)))


def factor(p, f, h, g):
    """The unique k with f∘k = h and p(k) = g."""
    D = p.src
    hits = [k for k in D.hom(D.src(h), D.src(f)) if D.comp(f, k) == h and p.arr(k) == g]
    if len(hits) != 1:
        raise ValueError(f"factorisation through {f!r} not unique: {len(hits)} candidates")
    return hits[0]


def essential_fibre(P, x):
    """Pairs (A, α: x ≅ p(A)) and arrows (γ, α, β) with p(γ)∘α = β."""
    D, C, p = P.total, P.base, P.proj
    objs = [(A, a) for A in D.objects for a in C.isos(x, p.obj(A))]
    arrows = {}
    for (A, a) in objs:
        for (B, b) in objs:
            for g in D.hom(A, B):
                if C.comp(p.arr(g), a) == b:
                    arrows[(g, a, b)] = ((A, a), (B, b))
    identity = {(A, a): (D.identity[A], a, a) for (A, a) in objs}
    return FiniteCategory.build(objs, arrows, identity,
                                lambda k, h: (D.comp(k[0], h[0]), h[1], k[2]))


def strict_fibre(P, x):
    D, p = P.total, P.proj
    objs = [A for A in D.objects if p.obj(A) == x]
    arrows = {f: D.arrows[f] for f in D.arrow_ids
              if D.arrows[f][0] in objs and p.arr(f) == P.base.identity[x]}
    table = {k: v for k, v in D.table.items() if k[0] in arrows and k[1] in arrows}
    return FiniteCategory(objs, arrows, {A: D.identity[A] for A in objs}, table)


def indexed_of_fibration(P):
    D, C, p = P.total, P.base, P.proj
    fibres = {x: essential_fibre(P, x) for x in C.objects}

    def apply(y, obj):
        A, a = obj
        f, theta = P.lift(C.comp(a, y), A)
        return f, theta

    transitions = {}
    for y in C.arrow_ids:
        Y, X = C.arrows[y]
        src, dst = fibres[X], fibres[Y]
        omap, amap = {}, {}
        for obj in src.objects:
            f, theta = apply(y, obj)
            omap[obj] = (D.src(f), theta)
        for g in src.arrow_ids:
            (A, a), (B, b) = src.arrows[g]
            fA, tA = apply(y, (A, a))
            fB, tB = apply(y, (B, b))
            k = factor(p, fB, D.comp(g[0], fA), C.comp(tB, C.inverse(tA)))
            amap[g] = (k, tA, tB)
        transitions[y] = Functor(src, dst, omap, amap)
    unit = {}
    for x in C.objects:
        unit[x] = {}
        for (A, a) in fibres[x].objects:
            f, theta = P.lift(a, A)
            unit[x][(A, a)] = (D.inverse(f), a, theta)
    comp = {}
    for (y, z), yz in C.table.items():
        comp[(y, z)] = {}
        for (A, a) in fibres[C.dst(y)].objects:
            f1, t1 = P.lift(C.comp(a, y), A)
            f2, t2 = P.lift(C.comp(t1, z), D.src(f1))
            f3, t3 = P.lift(C.comp(a, yz), A)
            k = factor(p, f3, D.comp(f1, f2), C.comp(t3, C.inverse(t2)))
            comp[(y, z)][(A, a)] = (k, t2, t3)
    return IndexedCategory(C, fibres, transitions, unit, comp)


def is_splitting(P):
    """Both splitting conditions on the cleavage of P."""
    D, C, p = P.total, P.base, P.proj
    for A in D.objects:
        for x in C.objects:
            for a in C.isos(x, p.obj(A)):
                if P.lift(a, A)[0] != D.identity[A]:
                    return Verdict(False, ("identity", a, A))
    for A in D.objects:
        for y in C.into(p.obj(A)):
            fy, ty = P.lift(y, A)
            for z in C.into(C.src(y)):
                fyz, tyz = P.lift(C.comp(y, z), A)
                g, tg = P.lift(C.comp(ty, z), D.src(fy))
                if fyz != D.comp(fy, g) or tyz != tg:
                    return Verdict(False, ("composite", y, z, A))
    return Verdict(True)


def grothendieck(D):
    """Total category of D with its projection and the (y, 1) cleavage.

    Objects are (X, U); an arrow (y, a, U): (Y, V) → (X, U) has
    a: V → D(y)(U) in the fibre over Y.
    """
    c = D.base
    objs = [(x, U) for x in c.objects for U in D.fibres[x].objects]
    arrows = {}
    for y in c.arrow_ids:
        Y, X = c.arrows[y]
        F, T = D.fibres[Y], D.trans(y)
        for U in D.fibres[X].objects:
            for a in F.into(T.obj(U)):
                arrows[(y, a, U)] = ((Y, F.src(a)), (X, U))
    identity = {(x, U): (c.identity[x], D.unit(x, U), U) for (x, U) in objs}

    def compose(g, f):
        y, a, U = g
        z, b, V = f
        F = D.fibres[c.src(z)]
        return (c.comp(y, z), F.comp(D.comp(y, z, U), D.trans(z).arr(a), b), U)

    total = FiniteCategory.build(objs, arrows, identity, compose)
    proj = Functor(total, c, {o: o[0] for o in objs}, {f: f[0] for f in arrows})

    def cleave(y, A):
        x, U = A
        return (y, D.fibres[c.src(y)].identity[D.trans(y).obj(U)], U), c.identity[c.src(y)]

    return TotalFibration(total, c, proj, cleave)


def dual(D):
    c = D.base
    fibres = {x: opposite(F) for x, F in D.fibres.items()}
    transitions = {y: opposite_functor(T) for y, T in D.transitions.items()}
    unit = {x: {U: D.fibres[x].inverse(a) for U, a in comps.items()}
            for x, comps in D.unit_iso.items()}
    comp = {k: {U: D.fibres[c.src(k[1])].inverse(a) for U, a in comps.items()}
            for k, comps in D.comp_iso.items()}
    return IndexedCategory(c, fibres, transitions, unit, comp)


@dataclass
class FibrationMorphism:
    """(F, φ) with φ: q∘F ⇒ p."""
    F: Functor
    phi: NatTransf
    source_proj: Functor
    target_proj: Functor


def validate_fibration_morphism(m):
    issues = []
    F = m.F
    if validate_functor(F):
        issues.append(Issue("functor", None))
        return issues
    cart_src = cartesian_arrows(m.source_proj)
    cart_dst = cartesian_arrows(m.target_proj)
    for f in cart_src:
        if F.arr(f) not in cart_dst:
            issues.append(Issue("cartesian", f))
    C = m.source_proj.dst
    for x, a in m.phi.components.items():
        want = (m.target_proj.obj(F.obj(x)), m.source_proj.obj(x))
        if C.arrows.get(a) != want or not C.is_iso(a):
            issues.append(Issue("phi-component", x))
    if issues:
        return issues
    for f in F.src.arrow_ids:
        s, d = F.src.arrows[f]
        if C.comp(m.phi[d], m.target_proj.arr(F.arr(f))) != C.comp(m.source_proj.arr(f), m.phi[s]):
            issues.append(Issue("phi-naturality", f))
    return issues


def slice_fibration(c, x):
    cat, proj = slice_category(c, x)
    return TotalFibration(cat, c, proj)


def fibred_yoneda_psi(P, x, obj):
    """Ψ(A, α): the fibration morphism c/x → total of P."""
    C, D, p = P.base, P.total, P.proj
    A, a = obj
    if not C.is_iso(a) or C.arrows[a] != (x, p.obj(A)):
        raise ValueError("not an object of the essential fibre")
    sl, sproj = slice_category(C, x)
    omap, phi = {}, {}
    lifts = {}
    for y in sl.objects:
        f, theta = P.lift(C.comp(a, y), A)
        lifts[y] = (f, theta)
        omap[y] = D.src(f)
        phi[y] = C.inverse(theta)
    amap = {}
    for arr in sl.arrow_ids:
        z, yz, y = arr
        fy, ty = lifts[y]
        fyz, tyz = lifts[yz]
        amap[arr] = factor(p, fy, fyz, C.comp(ty, z, C.inverse(tyz)))
    F = Functor(sl, D, omap, amap)
    nat = NatTransf(compose_functors(p, F), sproj, phi)
    return FibrationMorphism(F, nat, sproj, p)


def fibred_yoneda_phi(P, x, m):
    """Φ(F, φ) = (F([1_x]), φ_[1_x]⁻¹)."""
    one = P.base.identity[x]
    return m.F.obj(one), P.base.inverse(m.phi[one])


def round_trip_functor(P):
    """S: grothendieck(indexed_of_fibration(P)).total → P.total with p∘S ≅ proj.

    Returns (S, iso) where iso[(X, (A, α))] = α: X → p(A).
    """
    C, p = P.base, P.proj
    I = indexed_of_fibration(P)
    G = grothendieck(I)
    omap = {o: o[1][0] for o in G.total.objects}
    amap = {}
    for arr in G.total.arrow_ids:
        y, a, (A, alpha) = arr
        f1, _ = P.lift(C.comp(alpha, y), A)
        amap[arr] = P.total.comp(f1, a[0])
    S = Functor(G.total, P.total, omap, amap)
    iso = NatTransf(G.proj, compose_functors(p, S), {o: o[1][1] for o in G.total.objects})
    return S, iso


@dataclass
class DescentDatum:
    """Objects U_y over a sieve with comparison isos α_{y,z}: D(z)(U_y) → U_{yz}."""
    apex: object
    sieve: frozenset
    objects: dict
    isos: dict


# composite fibration


def _gd_helpers(D):
    c = D.base

    def cart(y, U):
        return (y, D.fibres[c.src(y)].identity[D.trans(y).obj(U)], U)

    def vert(x, a):
        """(1_x, φ_x(U)∘a, U) for a: U' → U in D(x)."""
        F = D.fibres[x]
        U = F.dst(a)
        return (c.identity[x], F.comp(D.unit(x, U), a), U)

    return cart, vert


def composite_fibration(D, E):
    """E_D over the base of D, for E indexed over the total of grothendieck(D).

    Returns (E_D, theta) where theta: grothendieck(E).total → grothendieck(E_D).total
    is the comparison functor.
    """
    G = grothendieck(D)
    T = G.total
    if E.base != T:
        raise ValueError("E must be indexed over the total category of grothendieck(D)")
    c = D.base
    cart, vert = _gd_helpers(D)

    def Ef(obj):
        return E.fibres[obj]

    fibres = {}
    for x in c.objects:
        Dx = D.fibres[x]
        objs = [(U, H) for U in Dx.objects for H in Ef((x, U)).objects]
        arrows = {}
        for (U, H) in objs:
            for a in Dx.into(U):
                U2 = Dx.src(a)
                v = vert(x, a)
                target = E.trans(v).obj(H)
                for h in Ef((x, U2)).into(target):
                    arrows[(a, h, H)] = ((U2, Ef((x, U2)).src(h)), (U, H))
        identity = {(U, H): (Dx.identity[U], E.unit((x, U), H), H) for (U, H) in objs}

        def compose(g, f, x=x, Dx=Dx):
            b, k, H = g
            a, h, H1 = f
            vb, va = vert(x, b), vert(x, a)
            Fx = Ef((x, Dx.src(a)))
            return (Dx.comp(b, a), Fx.comp(E.comp(vb, va, H), E.trans(va).arr(k), h), H)

        fibres[x] = FiniteCategory.build(objs, arrows, identity, compose)

    transitions = {}
    for y in c.arrow_ids:
        Y, X = c.arrows[y]
        Ty = D.trans(y)
        omap = {(U, H): (Ty.obj(U), E.trans(cart(y, U)).obj(H)) for (U, H) in fibres[X].objects}
        amap = {}
        for g in fibres[X].arrow_ids:
            a, h, H = g
            (U2, H2), (U, _) = fibres[X].arrows[g]
            c2, c1 = cart(y, U2), cart(y, U)
            Da = Ty.arr(a)
            v2 = vert(Y, Da)
            F = Ef((Y, Ty.obj(U2)))
            va = vert(X, a)
            h2 = F.comp(F.inverse(E.comp(c1, v2, H)), E.comp(va, c2, H), E.trans(c2).arr(h))
            amap[g] = (Da, h2, E.trans(c1).obj(H))
        transitions[y] = Functor(fibres[X], fibres[Y], omap, amap)

    unit = {}
    for x in c.objects:
        unit[x] = {}
        for (U, H) in fibres[x].objects:
            phiU = D.unit(x, U)
            one = c.identity[x]
            F = Ef((x, U))
            h = F.comp(F.inverse(E.comp(cart(one, U), vert(x, phiU), H)), E.unit((x, U), H))
            unit[x][(U, H)] = (phiU, h, E.trans(cart(one, U)).obj(H))
    comp = {}
    for (y, z), yz in c.table.items():
        comp[(y, z)] = {}
        Z = c.src(z)
        for (U, H) in fibres[c.dst(y)].objects:
            phi = D.comp(y, z, U)
            cy, cz, cyz = cart(y, U), cart(z, D.trans(y).obj(U)), cart(yz, U)
            F = Ef((Z, D.trans(z).obj(D.trans(y).obj(U))))
            h = F.comp(F.inverse(E.comp(cyz, vert(Z, phi), H)), E.comp(cy, cz, H))
            comp[(y, z)][(U, H)] = (phi, h, E.trans(cyz).obj(H))
    ED = IndexedCategory(c, fibres, transitions, unit, comp)

    GE = grothendieck(E).total
    GED = grothendieck(ED).total
    omap = {((x, U), H): (x, (U, H)) for ((x, U), H) in GE.objects}
    amap = {}
    for arr in GE.arrow_ids:
        (y, a, U), e, H = arr
        Y = c.src(y)
        cy = cart(y, U)
        v = vert(Y, a)
        F = Ef((Y, T.src((y, a, U))[1]))
        h = F.comp(F.inverse(E.comp(cy, v, H)), e)
        amap[arr] = (y, (a, h, E.trans(cy).obj(H)), (U, H))
    theta = Functor(GE, GED, omap, amap)
    return ED, theta


# limits


class PreconditionError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def limit_in_total(D, diagram):
    """Limit of a diagram in the total category, built base-first.

    Returns (apex, legs) or None when the base has no limit of the
    projected diagram.
    """
    G = grothendieck(D)
    c = D.base
    I = diagram.src
    base_diag = compose_functors(G.proj, diagram)
    found = find_limit(c, base_diag)
    if found is None:
        return None
    X, base_legs = found
    FX = D.fibres[X]
    omap, amap = {}, {}
    for i in I.objects:
        Xi, Ui = diagram.obj(i)
        omap[i] = D.trans(base_legs[i]).obj(Ui)
    for u in I.arrow_ids:
        i, j = I.arrows[u]
        y, a, Uj = diagram.arr(u)
        li = base_legs[i]
        amap[u] = FX.comp(D.comp(y, li, Uj), D.trans(li).arr(a))
    transported = Functor(I, FX, omap, amap)
    if validate_functor(transported):
        raise PreconditionError("transported diagram is not a functor", validate_functor(transported))
    fl = find_limit(FX, transported)
    if fl is None:
        raise PreconditionError("fibre has no limit of the transported diagram", X)
    L, fibre_legs = fl
    for y in c.into(X):
        T = D.trans(y)
        image = compose_functors(T, transported)
        if not is_limit_cone(T.dst, image, T.obj(L), {i: T.arr(a) for i, a in fibre_legs.items()}):
            raise PreconditionError("transition does not preserve the fibre limit", y)
    apex = (X, L)
    legs = {i: (base_legs[i], fibre_legs[i], diagram.obj(i)[1]) for i in I.objects}
    if not is_limit_cone(G.total, diagram, apex, legs):
        raise PreconditionError("constructed cone is not limiting", apex)
    return apex, legs


# JSON


def indexed_from_json(data, base=None):
    base = base or category_from_json(data["base"])
    fibres = {x: category_from_json(f) for x, f in data["fibres"].items()}
    transitions = {}
    for y, t in data.get("transitions", {}).items():
        s, d = base.arrows[y]
        transitions[y] = functor_from_json(t, fibres[d], fibres[s])
    if data.get("strict"):
        return IndexedCategory.strict(base, fibres, transitions)
    for x in base.objects:
        transitions.setdefault(base.identity[x], identity_functor(fibres[x]))
    unit = {x: dict(v) for x, v in data.get("unit_iso", {}).items()}
    for x in base.objects:
        unit.setdefault(x, {U: fibres[x].identity[U] for U in fibres[x].objects})
    comp = {}
    for entry in data.get("comp_iso", []):
        comp[(entry["y"], entry["z"])] = dict(entry["components"])
    for (y, z), yz in base.table.items():
        if (y, z) not in comp:
            F = fibres[base.src(z)]
            comp[(y, z)] = {U: F.identity[transitions[yz].obj(U)]
                            for U in fibres[base.dst(y)].objects}
    return IndexedCategory(base, fibres, transitions, unit, comp)


def indexed_to_json(D):
    c = D.base
    out = {"kind": "indexed", "base": category_to_json(c),
           "fibres": {label(x): category_to_json(D.fibres[x]) for x in c.objects},
           "transitions": {label(y): functor_to_json(D.transitions[y])
                           for y in c.arrow_ids if not c.is_identity(y)}}
    if D.is_strict() and all(D.transitions[c.identity[x]] == identity_functor(D.fibres[x])
                             for x in c.objects):
        out["strict"] = True
        return out
    out["transitions"] = {label(y): functor_to_json(D.transitions[y]) for y in c.arrow_ids}
    out["unit_iso"] = {label(x): {label(U): label(a) for U, a in D.unit_iso[x].items()}
                       for x in c.objects}
    out["comp_iso"] = [{"y": label(y), "z": label(z),
                        "components": {label(U): label(a) for U, a in comps.items()}}
                       for (y, z), comps in sorted(D.comp_iso.items(), key=lambda kv: order_key(kv[0]))]
    return out
