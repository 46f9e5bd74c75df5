"""Set-valued presheaves on finite categories."""
from .fincat import (FiniteCategory, Functor, Issue, UnionFind, label, ordered,
                     connected_components, discrete)


class Presheaf:
    def __init__(self, base, values, action):
        self.base = base
        self.values = {x: tuple(ordered(set(values.get(x, ())))) for x in base.objects}
        self.action = {}
        for f in base.arrow_ids:
            if f in action:
                self.action[f] = dict(action[f])
            elif base.is_identity(f):
                self.action[f] = {s: s for s in self.values[base.src(f)]}
            else:
                self.action[f] = {}

    def __call__(self, x):
        return self.values[x]

    def act(self, f, s):
        return self.action[f][s]

    def size(self):
        return sum(len(v) for v in self.values.values())

    def __eq__(self, other):
        if not isinstance(other, Presheaf):
            return NotImplemented
        return self.base == other.base and self.values == other.values and self.action == other.action

    __hash__ = None

    def __repr__(self):
        sizes = ", ".join(f"{label(x)}:{len(v)}" for x, v in self.values.items())
        return f"<Presheaf {sizes}>"


def validate_presheaf(P):
    c = P.base
    issues = []
    for f in c.arrow_ids:
        s, d = c.arrows[f]
        m = P.action.get(f, {})
        if set(m) != set(P.values[d]) or not set(m.values()) <= set(P.values[s]):
            issues.append(Issue("action-type", f))
    if issues:
        return issues
    for x in c.objects:
        if any(P.act(c.identity[x], s) != s for s in P.values[x]):
            issues.append(Issue("identity", x))
    for (g, f), gf in c.table.items():
        for s in P.values[c.dst(g)]:
            if P.act(gf, s) != P.act(f, P.act(g, s)):
                issues.append(Issue("contravariance", (g, f)))
                break
    return issues


class PresheafMorphism:
    def __init__(self, src, dst, components):
        self.src = src
        self.dst = dst
        self.components = {x: dict(components.get(x, {})) for x in src.base.objects}

    def __call__(self, x, s):
        return self.components[x][s]

    def __eq__(self, other):
        if not isinstance(other, PresheafMorphism):
            return NotImplemented
        return self.src == other.src and self.dst == other.dst and self.components == other.components

    __hash__ = None


def validate_morphism(m):
    P, Q = m.src, m.dst
    c = P.base
    issues = []
    for x in c.objects:
        comp = m.components[x]
        if set(comp) != set(P(x)) or not set(comp.values()) <= set(Q(x)):
            issues.append(Issue("component-type", x))
    if issues:
        return issues
    for f in c.arrow_ids:
        s, d = c.arrows[f]
        for a in P(d):
            if m(s, P.act(f, a)) != Q.act(f, m(d, a)):
                issues.append(Issue("naturality", f))
                break
    return issues


def identity_morphism(P):
    return PresheafMorphism(P, P, {x: {s: s for s in P(x)} for x in P.base.objects})


def compose_morphisms(n, m):
    """n∘m."""
    return PresheafMorphism(m.src, n.dst, {x: {s: n(x, m(x, s)) for s in m.src(x)}
                                           for x in m.src.base.objects})


def is_mono(m):
    return all(len(set(comp.values())) == len(comp) for comp in m.components.values())


def is_iso(m):
    return all(len(set(comp.values())) == len(comp) == len(m.dst(x))
               for x, comp in m.components.items())


def inverse_morphism(m):
    return PresheafMorphism(m.dst, m.src, {x: {b: a for a, b in comp.items()}
                                           for x, comp in m.components.items()})


def find_iso(P, Q, under=None):
    """A natural isomorphism P ≅ Q, or None.

    ``under`` is an optional pair of morphisms (u: R → P, v: R → Q) the iso
    must respect, which pins it down on the image of u.
    """
    c = P.base
    if any(len(P(x)) != len(Q(x)) for x in c.objects):
        return None
    assign = {x: {} for x in c.objects}
    if under is not None:
        u, v = under
        for x in c.objects:
            for r in u.src(x):
                a, b = u(x, r), v(x, r)
                if assign[x].get(a, b) != b:
                    return None
                assign[x][a] = b
    # constraint: m(src f)(P(f)(a)) = Q(f)(m(dst f)(a))
    slots = [(x, a) for x in c.objects for a in P(x)]

    def propagate(pending):
        while pending:
            x, a = pending.pop()
            b = assign[x][a]
            for f in c.into(x):
                y = c.src(f)
                a2, b2 = P.act(f, a), Q.act(f, b)
                cur = assign[y].get(a2)
                if cur is None:
                    assign[y][a2] = b2
                    pending.append((y, a2))
                elif cur != b2:
                    return False
        return True

    def injective():
        return all(len(set(m.values())) == len(m) for m in assign.values())

    start = [(x, a) for x in c.objects for a in assign[x]]
    if not propagate(list(start)) or not injective():
        return None

    def search(i):
        while i < len(slots) and slots[i][1] in assign[slots[i][0]]:
            i += 1
        if i == len(slots):
            return True
        x, a = slots[i]
        used = set(assign[x].values())
        for b in Q(x):
            if b in used:
                continue
            snapshot = {y: dict(m) for y, m in assign.items()}
            assign[x][a] = b
            if propagate([(x, a)]) and injective() and search(i + 1):
                return True
            assign.clear()
            assign.update(snapshot)
        return False

    if not search(0):
        return None
    m = PresheafMorphism(P, Q, assign)
    return m if not validate_morphism(m) else None


def representable(c, x):
    if x not in c.identity:
        raise KeyError(f"unknown object {x!r}")
    values = {y: c.hom(y, x) for y in c.objects}
    action = {f: {g: c.comp(g, f) for g in values[c.dst(f)]} for f in c.arrow_ids}
    return Presheaf(c, values, action)


def terminal_presheaf(c):
    return Presheaf(c, {x: ["*"] for x in c.objects}, {f: {"*": "*"} for f in c.arrow_ids})


def empty_presheaf(c):
    return Presheaf(c, {}, {})


def subpresheaf(P, values):
    """Restriction of P to subsets closed under the action."""
    values = {x: set(values.get(x, ())) for x in P.base.objects}
    for f in P.base.arrow_ids:
        s, d = P.base.arrows[f]
        if any(P.act(f, a) not in values[s] for a in values[d]):
            raise ValueError(f"not closed under {f!r}")
    sub = Presheaf(P.base, values, {f: {a: P.act(f, a) for a in values[P.base.dst(f)]}
                                    for f in P.base.arrow_ids})
    incl = PresheafMorphism(sub, P, {x: {a: a for a in sub(x)} for x in P.base.objects})
    return sub, incl


def elements(P):
    """Category of elements with its projection."""
    c = P.base
    objs = [(x, s) for x in c.objects for s in P(x)]
    arrows = {}
    for f in c.arrow_ids:
        y, x = c.arrows[f]
        for s in P(x):
            arrows[(f, s)] = ((y, P.act(f, s)), (x, s))
    identity = {(x, s): (c.identity[x], s) for (x, s) in objs}
    cat = FiniteCategory.build(objs, arrows, identity, lambda g, f: (c.comp(g[0], f[0]), g[1]))
    proj = Functor(cat, c, {o: o[0] for o in objs}, {a: a[0] for a in arrows})
    return cat, proj


def restrict(P, F):
    if F.dst != P.base:
        raise ValueError("restrict: codomain mismatch")
    A = F.src
    return Presheaf(A, {x: P(F.obj(x)) for x in A.objects},
                    {f: P.action[F.arr(f)] for f in A.arrow_ids})


def restrict_morphism(m, F):
    A = F.src
    return PresheafMorphism(restrict(m.src, F), restrict(m.dst, F),
                            {x: m.components[F.obj(x)] for x in A.objects})


def lan(F, P):
    """Left Kan extension along F with its unit P → restrict(lan(F, P), F)."""
    if F.src != P.base:
        raise ValueError("lan: presheaf must live on the domain of F")
    A, B = F.src, F.dst
    nodes = {d: [] for d in B.objects}
    for x in A.objects:
        fx = F.obj(x)
        for s in P(x):
            for d in B.objects:
                for y in B.hom(d, fx):
                    nodes[d].append((y, x, s))
    reps = {}
    for d in B.objects:
        uf = UnionFind(nodes[d])
        for f in A.arrow_ids:
            xs, xd = A.arrows[f]
            Ff = F.arr(f)
            for s in P(xd):
                t = P.act(f, s)
                for y in B.hom(d, F.obj(xs)):
                    uf.union((y, xs, t), (B.comp(Ff, y), xd, s))
        for n in nodes[d]:
            reps[(d, n)] = uf.find(n)
    values = {d: {reps[(d, n)] for n in nodes[d]} for d in B.objects}
    action = {}
    for g in B.arrow_ids:
        d2, d = B.arrows[g]
        action[g] = {r: reps[(d2, (B.comp(r[0], g), r[1], r[2]))] for r in values[d]}
    Q = Presheaf(B, values, action)
    unit = PresheafMorphism(P, restrict(Q, F),
                            {x: {s: reps[(F.obj(x), (B.identity[F.obj(x)], x, s))] for s in P(x)}
                             for x in A.objects})
    return Q, unit


def lan_morphism(F, m, source, target):
    """lan(F, m) given the extensions (Q, unit) of m's source and target.

    The class of (y, x, s) is the restriction along y of the unit image of s.
    """
    (Qs, _), (Qd, unit_d) = source, target
    comps = {d: {r: Qd.act(r[0], unit_d(r[1], m(r[1], r[2]))) for r in Qs(d)}
             for d in F.dst.objects}
    return PresheafMorphism(Qs, Qd, comps)


def lan_counit(F, Q):
    """ε: lan(F, restrict(Q, F)) → Q, with the extension and its unit."""
    L, unit = lan(F, restrict(Q, F))
    eps = PresheafMorphism(L, Q, {d: {r: Q.act(r[0], r[2]) for r in L(d)} for d in F.dst.objects})
    return L, unit, eps


def pi0_indexed(D):
    """Presheaf of connected components of the fibres of an indexed category."""
    c = D.base
    values, rep = {}, {}
    for x in c.objects:
        comps = connected_components(D.fibre(x))
        values[x] = [cl[0] for cl in comps]
        for cl in comps:
            for u in cl:
                rep[(x, u)] = cl[0]
    action = {}
    for f in c.arrow_ids:
        y, x = c.arrows[f]
        T = D.trans(f)
        action[f] = {u: rep[(y, T.obj(u))] for u in values[x]}
    return Presheaf(c, values, action)


def discrete_indexed(P):
    """A presheaf viewed as an indexed category with discrete fibres."""
    from .indexed import IndexedCategory
    c = P.base
    fibres = {x: discrete(P(x)) for x in c.objects}
    trans = {}
    for f in c.arrow_ids:
        y, x = c.arrows[f]
        src, dst = fibres[x], fibres[y]
        trans[f] = Functor(src, dst, {s: P.act(f, s) for s in P(x)},
                           {src.identity[s]: dst.identity[P.act(f, s)] for s in P(x)})
    return IndexedCategory.strict(c, fibres, trans)


def colimit_of_sets(P):
    """Set colimit of P (connected components of its elements)."""
    cat, _ = elements(P)
    return connected_components(cat)


def presheaf_from_json(data, base):
    values = {x: list(v) for x, v in data.get("values", {}).items()}
    action = {f: dict(m) for f, m in data.get("action", {}).items()}
    return Presheaf(base, values, action)


def presheaf_to_json(P):
    return {
        "values": {label(x): [label(s) for s in P(x)] for x in P.base.objects},
        "action": {label(f): {label(s): label(P.act(f, s)) for s in P(P.base.dst(f))}
                   for f in P.base.arrow_ids},
    }
