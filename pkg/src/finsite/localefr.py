"""Finite frames, J-ideals of preorder sites, étale maps and locale-hom sheafification."""
from dataclasses import dataclass

from .fincat import (BoundExceeded, Functor, Issue, env_bound, label, order_key, ordered,
                     preorder, slice_category)
from .presheaf import Presheaf, PresheafMorphism, elements


class FrameError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class FiniteFrame:
    """A finite lattice given by its order; joins and meets are tabulated on demand.

    ``leq`` is either a predicate or an iterable of pairs (closed reflexively
    and transitively).  ``join``/``meet`` may be supplied when they are known
    in closed form, e.g. for frames of ideals.
    """

    def __init__(self, elements, leq, join=None, meet=None, name=None):
        self.elements = tuple(ordered(set(elements)))
        self.name = name
        if callable(leq):
            rel = {(a, b) for a in self.elements for b in self.elements if leq(a, b)}
        else:
            rel = {(a, a) for a in self.elements} | {tuple(p) for p in leq}
            changed = True
            while changed:
                changed = False
                for (a, b) in list(rel):
                    for (b2, c) in list(rel):
                        if b == b2 and (a, c) not in rel:
                            rel.add((a, c))
                            changed = True
        self._rel = frozenset(rel)
        self._up = {a: frozenset(b for b in self.elements if (a, b) in rel) for a in self.elements}
        self._down = {a: frozenset(b for b in self.elements if (b, a) in rel) for a in self.elements}
        self._join_fn, self._meet_fn = join, meet
        self._joins, self._meets = {}, {}
        tops = [a for a in self.elements if self._down[a] == set(self.elements)]
        bottoms = [a for a in self.elements if self._up[a] == set(self.elements)]
        if not tops or not bottoms:
            raise FrameError("no top or bottom element")
        self.top, self.bottom = tops[0], bottoms[0]
        self._irr = None

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, a):
        return a in self._up

    def __eq__(self, other):
        return isinstance(other, FiniteFrame) and self._rel == other._rel

    def __hash__(self):
        return hash(self._rel)

    def __repr__(self):
        return f"<FiniteFrame {self.name or ''} |{len(self)}|>"

    def leq(self, a, b):
        return (a, b) in self._rel

    def down(self, a):
        return ordered(self._down[a])

    def _extremal(self, cands, pool):
        best = [x for x in cands if all(x in pool[y] for y in cands)]
        return best[0] if best else None

    def join(self, a, b):
        key = (a, b) if order_key(a) <= order_key(b) else (b, a)
        if key not in self._joins:
            if self._join_fn is not None:
                v = self._join_fn(a, b)
            else:
                v = self._extremal(self._up[a] & self._up[b], self._down)
                if v is None:
                    raise FrameError("join does not exist", (a, b))
            self._joins[key] = v
        return self._joins[key]

    def meet(self, a, b):
        key = (a, b) if order_key(a) <= order_key(b) else (b, a)
        if key not in self._meets:
            if self._meet_fn is not None:
                v = self._meet_fn(a, b)
            else:
                v = self._extremal(self._down[a] & self._down[b], self._up)
                if v is None:
                    raise FrameError("meet does not exist", (a, b))
            self._meets[key] = v
        return self._meets[key]

    def join_all(self, items):
        out = self.bottom
        for a in items:
            out = self.join(out, a)
        return out

    def meet_all(self, items):
        out = self.top
        for a in items:
            out = self.meet(out, a)
        return out

    @property
    def irreducibles(self):
        """Join-irreducible elements: not bottom, not the join of what lies strictly below."""
        if self._irr is None:
            self._irr = tuple(a for a in self.elements if a != self.bottom
                              and self.join_all(b for b in self._down[a] if b != a) != a)
        return self._irr

    def as_category(self):
        return preorder(self.elements, [p for p in self._rel], self.name or "Frame")

    def sub(self, members, name=None):
        """The induced subposet on ``members`` (e.g. a down-set a↓)."""
        members = set(members)
        return FiniteFrame(members, lambda a, b: self.leq(a, b),
                           join=self._join_fn, meet=self._meet_fn, name=name)


def validate_frame(L):
    """Lattice laws and distributivity, checked on all pairs and triples."""
    issues = []
    els = L.elements
    for a in els:
        for b in els:
            try:
                j, m = L.join(a, b), L.meet(a, b)
            except FrameError as e:
                issues.append(Issue("not a lattice", e.witness))
                return issues
            if j not in L or m not in L:
                issues.append(Issue("operation leaves carrier", (a, b)))
                return issues
            ups = [c for c in els if L.leq(a, c) and L.leq(b, c)]
            downs = [c for c in els if L.leq(c, a) and L.leq(c, b)]
            if j not in ups or any(not L.leq(j, c) for c in ups):
                issues.append(Issue("join", (a, b)))
            if m not in downs or any(not L.leq(c, m) for c in downs):
                issues.append(Issue("meet", (a, b)))
    if issues:
        return issues
    for a in els:
        for b in els:
            for c in els:
                if L.meet(a, L.join(b, c)) != L.join(L.meet(a, b), L.meet(a, c)):
                    issues.append(Issue("distributivity", (a, b, c)))
                    return issues
    return issues


def check_frame(L):
    issues = validate_frame(L)
    if issues:
        raise FrameError(f"not a frame: {issues[0].kind}", issues[0].at)
    return L


def frame_of_poset(c, name=None):
    """The lattice whose order is the posetal category c."""
    if not c.is_posetal():
        raise FrameError("category is not posetal")
    return FiniteFrame(c.objects, lambda a, b: bool(c.hom(a, b)), name=name or c.name)


def chain_lattice(n):
    return FiniteFrame(range(n), lambda a, b: a <= b, name=f"Chain{n}")


def one_point_frame():
    return FiniteFrame(["*"], [], name="One")


# homomorphisms


@dataclass(frozen=True)
class FrameHom:
    src: FiniteFrame
    dst: FiniteFrame
    map: tuple

    def __post_init__(self):
        object.__setattr__(self, "_d", dict(self.map))

    def __call__(self, a):
        return self._d[a]

    @classmethod
    def of(cls, src, dst, mapping):
        return cls(src, dst, tuple((a, mapping[a]) for a in src.elements))

    def as_dict(self):
        return dict(self._d)


def validate_frame_hom(h):
    L, M, m = h.src, h.dst, h.as_dict()
    issues = []
    if set(m) != set(L.elements) or any(v not in M for v in m.values()):
        return [Issue("not a map", None)]
    if m[L.top] != M.top:
        issues.append(Issue("top", L.top))
    if m[L.bottom] != M.bottom:
        issues.append(Issue("bottom", L.bottom))
    for a in L.elements:
        for b in L.elements:
            if m[L.join(a, b)] != M.join(m[a], m[b]):
                issues.append(Issue("join", (a, b)))
            if m[L.meet(a, b)] != M.meet(m[a], m[b]):
                issues.append(Issue("meet", (a, b)))
    return issues


def identity_hom(L):
    return FrameHom.of(L, L, {a: a for a in L.elements})


def compose_homs(g, f):
    return FrameHom.of(f.src, g.dst, {a: g(f(a)) for a in f.src.elements})


def is_frame_iso(h):
    m = h.as_dict()
    return len(set(m.values())) == len(h.dst) and len(h.src) == len(h.dst)


def frame_homs(L, M, fixing=()):
    """All frame homomorphisms L → M, via monotone maps J(M) → J(L).

    A hom h corresponds to φ with m ≤ h(a) iff φ(m) ≤ a, so that
    h(a) = ⋁{m ∈ J(M) : φ(m) ≤ a}.  ``fixing`` lists pairs (a, b) with
    h(a) = b required; they prune the candidates for each φ(m).
    """
    JL, JM = L.irreducibles, M.irreducibles
    cands = []
    for m in JM:
        ok = [j for j in JL if all(L.leq(j, a) == M.leq(m, b) for a, b in fixing)]
        cands.append(ok)
    below = [[i for i in range(k) if M.leq(JM[i], JM[k]) or M.leq(JM[k], JM[i])] for k in range(len(JM))]
    out = []
    phi = [None] * len(JM)

    def walk(k):
        if k == len(JM):
            out.append(FrameHom.of(L, M, {a: M.join_all(JM[i] for i in range(len(JM))
                                                        if L.leq(phi[i], a))
                                          for a in L.elements}))
            return
        for j in cands[k]:
            good = True
            for i in below[k]:
                if M.leq(JM[i], JM[k]) and not L.leq(phi[i], j):
                    good = False
                    break
                if M.leq(JM[k], JM[i]) and not L.leq(j, phi[i]):
                    good = False
                    break
            if good:
                phi[k] = j
                walk(k + 1)
        phi[k] = None

    walk(0)
    if fixing:
        # the filter is exact for homs; keep a guard for non-distributive input
        out = [h for h in out if all(h(a) == b for a, b in fixing)]
    return sorted(out, key=lambda h: tuple(order_key(v) for _, v in h.map))


def frame_homs_brute(L, M, bound=None):
    """Reference enumeration by backtracking over all maps; raises past ``bound`` nodes."""
    bound = bound if bound is not None else env_bound("frames", 200000)
    els = L.elements
    out, m, count = [], {}, [0]

    def consistent(a):
        for b in m:
            jb, mb = L.join(a, b), L.meet(a, b)
            if jb in m and m[jb] != M.join(m[a], m[b]):
                return False
            if mb in m and m[mb] != M.meet(m[a], m[b]):
                return False
        return True

    def walk(i):
        count[0] += 1
        if count[0] > bound:
            raise BoundExceeded(f"frame hom search exceeded {bound} nodes")
        if i == len(els):
            out.append(FrameHom.of(L, M, dict(m)))
            return
        a = els[i]
        if a == L.top == L.bottom:
            choices = [M.top] if M.top == M.bottom else []
        elif a == L.top:
            choices = [M.top]
        elif a == L.bottom:
            choices = [M.bottom]
        else:
            choices = M.elements
        for v in choices:
            m[a] = v
            if consistent(a):
                walk(i + 1)
            del m[a]

    walk(0)
    return sorted(out, key=lambda h: tuple(order_key(v) for _, v in h.map))


def find_frame_iso(L, M):
    if len(L) != len(M):
        return None
    for h in frame_homs(L, M):
        if is_frame_iso(h):
            return h
    return None


# J-ideals


def _posetal(c):
    if not c.is_posetal():
        raise FrameError("base is not posetal", c.name)


def _cover_sources(c, J):
    """For each object, the source sets of its covering sieves (minimal ones suffice)."""
    cache = c.cache.setdefault("cover_sources", {})
    if J not in cache:
        out = {}
        for x in c.objects:
            srcs = {frozenset(c.src(f) for f in S) for S in J.sieves(x)}
            out[x] = [s for s in srcs if not any(t < s for t in srcs)]
        cache[J] = out
    return cache[J]


def ideal_closure(c, J, seed):
    """Smallest J-ideal containing ``seed``."""
    cov = _cover_sources(c, J)
    I = set()
    for x in seed:
        I.update(y for y in c.objects if c.hom(y, x))
    changed = True
    while changed:
        changed = False
        for x in c.objects:
            if x not in I and any(s <= I for s in cov[x]):
                I.update(y for y in c.objects if c.hom(y, x))
                changed = True
    return frozenset(I)


def is_j_ideal(c, J, I):
    I = frozenset(I)
    if any(c.hom(y, x) and y not in I for x in I for y in c.objects):
        return False
    return ideal_closure(c, J, I) == I


def principal_ideal(c, J, x):
    return ideal_closure(c, J, [x])


def principal_by_covers(c, J, x):
    """⟨x⟩ read directly: y belongs iff some J-cover of y has every source below x."""
    return frozenset(y for y in c.objects
                     if any(all(c.hom(w, x) for w in s) for s in _cover_sources(c, J)[y]))


def j_ideals(c, J):
    """The frame of J-ideals of a preorder site, ordered by inclusion."""
    _posetal(c)
    cache = c.cache.setdefault("j_ideals", {})
    if J in cache:
        return cache[J]
    bottom = ideal_closure(c, J, ())
    seen = {bottom}
    frontier = [bottom]
    while frontier:
        nxt = []
        for I in frontier:
            for x in c.objects:
                if x not in I:
                    K = ideal_closure(c, J, I | {x})
                    if K not in seen:
                        seen.add(K)
                        nxt.append(K)
        frontier = nxt
    L = FiniteFrame(seen, lambda a, b: a <= b,
                    join=lambda a, b: ideal_closure(c, J, a | b),
                    meet=lambda a, b: a & b, name=f"Id({c.name})")
    cache[J] = L
    return L


def preimage_ideal(f, I):
    return frozenset(a for a in f.src.objects if f.obj(a) in I)


def preimage_hom(f, J, K):
    """f⁻¹ : Id_J(C) → Id_K(P) for a monotone f: P → C; raises when an image is not an ideal."""
    IC, IP = j_ideals(f.dst, J), j_ideals(f.src, K)
    m = {}
    for I in IC.elements:
        pre = preimage_ideal(f, I)
        if pre not in IP:
            raise FrameError("preimage is not an ideal", I)
        m[I] = pre
    return FrameHom.of(IC, IP, m)


def giraud_of_presheaf(P, J):
    """(∫P, J_P, projection): J_P makes the projection a comorphism, minimally."""
    from .sitemaps import min_comorphism_topology
    cat, proj = elements(P)
    return cat, min_comorphism_topology(proj, J), proj


def structure_hom(P, J):
    """π_P⁻¹ : Id_J(C) → Id_{J_P}(∫P)."""
    cat, JP, proj = giraud_of_presheaf(P, J)
    return preimage_hom(proj, J, JP)


# étale monotone maps


def _pseudoinverse(f, a):
    P, C = f.src, f.dst
    A = [b for b in P.objects if P.hom(b, a)]
    X = [x for x in C.objects if C.hom(x, f.obj(a))]
    iso = lambda cat, u, v: bool(cat.hom(u, v)) and bool(cat.hom(v, u))
    cands = {x: [b for b in A if iso(C, f.obj(b), x)] for x in X}
    if any(not v for v in cands.values()):
        return None
    g = {}

    def walk(i):
        if i == len(X):
            return all(iso(P, g[f.obj(b)], b) if f.obj(b) in g else False for b in A)
        x = X[i]
        for b in cands[x]:
            if all((not C.hom(y, x) or P.hom(g[y], b)) and (not C.hom(x, y) or P.hom(b, g[y]))
                   for y in X[:i]):
                g[x] = b
                if walk(i + 1):
                    return True
                del g[x]
        return False

    return dict(g) if walk(0) else None


def is_etale_poset_map(f):
    """Every restriction a↓ → f(a)↓ has a two-sided pseudoinverse."""
    _posetal(f.src)
    _posetal(f.dst)
    for a in f.src.objects:
        if _pseudoinverse(f, a) is None:
            return False
    return True


def fibre_presheaf(f):
    """P̄(X) = {a : f(a) = X}, restricting a along Y ≤ X to the element of a↓ over Y."""
    P, C = f.src, f.dst
    values = {x: [a for a in P.objects if f.obj(a) == x] for x in C.objects}
    action = {}
    for u in C.arrow_ids:
        y, x = C.arrows[u]
        m = {}
        for a in values[x]:
            below = [b for b in values[y] if P.hom(b, a)]
            if len(below) != 1:
                raise FrameError("not étale", (u, a))
            m[a] = below[0]
        action[u] = m
    return Presheaf(C, values, action)


def is_J_etale(f, J):
    """Unique gluing for every covering sieve, by direct enumeration over P."""
    if not is_etale_poset_map(f):
        raise FrameError("map is not étale")
    P, C = f.src, f.dst
    fibre = {x: [a for a in P.objects if f.obj(a) == x] for x in C.objects}
    for x in C.objects:
        for S in J.sieves(x):
            ys = ordered({C.src(g) for g in S})
            choice = {}

            def walk(i):
                if i == len(ys):
                    glue = [a for a in fibre[x] if all(P.hom(choice[y], a) for y in ys)]
                    return len(glue) == 1
                y = ys[i]
                for a in fibre[y]:
                    if all(P.hom(choice[z], a) for z in ys[:i] if C.hom(z, y)) and \
                       all(P.hom(a, choice[z]) for z in ys[:i] if C.hom(y, z)):
                        choice[y] = a
                        if not walk(i + 1):
                            return False
                        del choice[y]
                return True

            if not walk(0):
                return False
    return True


def discrete_lambda(P):
    """Λ(P): the projection ∫P → C."""
    return elements(P)[1]


def _sections_over(f, x):
    P, C = f.src, f.dst
    X = [y for y in C.objects if C.hom(y, x)]
    out, s = [], {}

    def walk(i):
        if i == len(X):
            out.append(tuple((y, s[y]) for y in X))
            return
        y = X[i]
        for a in P.objects:
            if f.obj(a) != y:
                continue
            if all((not C.hom(z, y) or P.hom(s[z], a)) and (not C.hom(y, z) or P.hom(a, s[z]))
                   for z in X[:i]):
                s[y] = a
                walk(i + 1)
                del s[y]

    walk(0)
    return out


def discrete_gamma(f):
    """Γ(f)(X): monotone maps X↓ → P over C; restriction shrinks the domain."""
    C = f.dst
    values = {x: _sections_over(f, x) for x in C.objects}
    action = {}
    for u in C.arrow_ids:
        y, x = C.arrows[u]
        action[u] = {s: tuple((z, a) for z, a in s if C.hom(z, y)) for s in values[x]}
    return Presheaf(C, values, action)


def discrete_unit(P):
    """P → ΓΛ(P), s ↦ (Y ↦ (Y, s|Y))."""
    C = P.base
    G = discrete_gamma(discrete_lambda(P))
    comps = {}
    for x in C.objects:
        comps[x] = {}
        for s in P(x):
            sec = tuple((y, (y, P.act(C.hom(y, x)[0], s))) for y in C.objects if C.hom(y, x))
            comps[x][s] = sec
    return PresheafMorphism(P, G, comps)


def discrete_counit(f):
    """ΛΓ(f) → f over C, (X, s) ↦ s(X), as a functor on total posets."""
    G = discrete_gamma(f)
    cat, proj = elements(G)
    obj = {(x, s): dict(s)[x] for (x, s) in cat.objects}
    arr = {}
    for a in cat.arrow_ids:
        u, v = cat.arrows[a]
        arr[a] = f.src.hom(obj[u], obj[v])[0]
    return Functor(cat, f.src, obj, arr)


def is_poset_iso(F):
    objs = F.src.objects
    if len(set(F.obj(o) for o in objs)) != len(objs) or len(objs) != len(F.dst.objects):
        return False
    return all(bool(F.src.hom(a, b)) == bool(F.dst.hom(F.obj(a), F.obj(b)))
               for a in objs for b in objs)


# locale-hom sheafification


def _sub_frame(IC, K):
    return IC.sub([I for I in IC.elements if I <= K], name="Sub")


def _hom_key(h):
    return tuple(v for _, v in h.map)


def sheafify_via_locale(P, J):
    """a(P)(X) = frame homs h: Id_{J_P}(∫P) → Sub(⟨X⟩) with h(π⁻¹I) = I ∩ ⟨X⟩.

    Returns (Q, unit); each element of Q(X) is the tuple of values of h,
    listed in the element order of Id_{J_P}(∫P).
    """
    C = P.base
    _posetal(C)
    cat, JP, proj = giraud_of_presheaf(P, J)
    IC, IP = j_ideals(C, J), j_ideals(cat, JP)
    pi = preimage_hom(proj, J, JP)
    princ = {x: principal_ideal(C, J, x) for x in C.objects}
    values, homs = {}, {}
    for x in C.objects:
        K = princ[x]
        fixing = [(pi(I), I & K) for I in IC.elements]
        hs = frame_homs(IP, _sub_frame(IC, K), fixing)
        homs[x] = {_hom_key(h): h for h in hs}
        values[x] = list(homs[x])
    action = {}
    for u in C.arrow_ids:
        y, x = C.arrows[u]
        Ky = princ[y]
        action[u] = {s: tuple(v & Ky for v in s) for s in values[x]}
    Q = Presheaf(C, values, action)
    unit = {}
    for x in C.objects:
        unit[x] = {}
        for s in P(x):
            img = {}
            for I in IP.elements:
                seed = [y for y in C.objects if C.hom(y, x) and (y, P.act(C.hom(y, x)[0], s)) in I]
                img[I] = ideal_closure(C, J, seed)
            unit[x][s] = tuple(img[I] for I in IP.elements)
    return Q, PresheafMorphism(P, Q, unit)


def slice_ideals(c, J, x):
    """(C/x, J_x, projection, Id_{J_x}(C/x))."""
    from .sitemaps import slice_topology
    cat, proj = slice_category(c, x)
    Jx = slice_topology(J, x)
    Jx_here = type(Jx)(cat, Jx.covering)
    return cat, Jx_here, proj, j_ideals(cat, Jx_here)


def sheafify_via_adjunction(P, J):
    """Γ∘Λ: frame homs h: Id_{J_P}(∫P) → Id_{J_X}(C/X) over Id_J(C).

    The section condition is h∘π_P⁻¹ = p_X⁻¹; restriction along y: Y → X
    composes with the inverse image of y∘− : C/Y → C/X.
    """
    C = P.base
    _posetal(C)
    cat, JP, proj = giraud_of_presheaf(P, J)
    IC, IP = j_ideals(C, J), j_ideals(cat, JP)
    pi = preimage_hom(proj, J, JP)
    slices = {x: slice_ideals(C, J, x) for x in C.objects}
    values = {}
    for x in C.objects:
        scat, Jx, sproj, Ix = slices[x]
        fixing = [(pi(I), preimage_ideal(sproj, I)) for I in IC.elements]
        values[x] = [_hom_key(h) for h in frame_homs(IP, Ix, fixing)]
    action = {}
    for u in C.arrow_ids:
        y, x = C.arrows[u]
        action[u] = {s: tuple(frozenset(g for g in C.into(y) if C.comp(u, g) in v) for v in s)
                     for s in values[x]}
    Q = Presheaf(C, values, action)
    unit = {}
    for x in C.objects:
        scat, Jx, sproj, Ix = slices[x]
        unit[x] = {}
        for s in P(x):
            row = []
            for I in IP.elements:
                seed = [g for g in C.into(x) if (C.src(g), P.act(g, s)) in I]
                row.append(ideal_closure(scat, Jx, seed))
            unit[x][s] = tuple(row)
    return Q, PresheafMorphism(P, Q, unit)


def open_sublocale_maps(c, J, x):
    """R: Sub(⟨x⟩) → Id_{J_x}(C/x) and its inverse, as dicts, with both frames."""
    IC = j_ideals(c, J)
    K = principal_ideal(c, J, x)
    sub = _sub_frame(IC, K)
    scat, Jx, sproj, Ix = slice_ideals(c, J, x)
    R = {I: preimage_ideal(sproj, I) for I in sub.elements}
    Rinv = {}
    for I in Ix.elements:
        parts = [Kp for Kp in sub.elements if preimage_ideal(sproj, Kp) <= I]
        Rinv[I] = frozenset().union(*parts) if parts else frozenset()
    return sub, Ix, R, Rinv


def check_open_sublocale(c, J, x):
    """R and R⁻¹ land in the right frames, are mutually inverse and monotone both ways."""
    sub, Ix, R, Rinv = open_sublocale_maps(c, J, x)
    if any(v not in Ix for v in R.values()) or any(v not in sub for v in Rinv.values()):
        return False
    if any(Rinv[R[K]] != K for K in sub.elements) or any(R[Rinv[I]] != I for I in Ix.elements):
        return False
    return all(sub.leq(a, b) == Ix.leq(R[a], R[b]) for a in sub.elements for b in sub.elements)


def is_etale_locale_map(h):
    """h: M → L read as a locale map L → M.

    Étale when the x ∈ L admitting some y ∈ M with m ↦ h(m) ∧ x a bijection
    y↓ → x↓ (and x ≤ h(y)) join to the top of L.
    """
    L, M = h.dst, h.src
    good = []
    for x in L.elements:
        xdown = set(L.down(x))
        for y in M.elements:
            if not L.leq(x, h(y)):
                continue
            img = [L.meet(h(m), x) for m in M.down(y)]
            if len(set(img)) == len(img) and set(img) == xdown:
                good.append(x)
                break
    return L.join_all(good) == L.top


def internal_locale(h, site=None):
    """H(h)(a) = {m ≤ h(a)}, restriction by meet with h(b).

    Indexed by the elements of h.src, or, when ``site`` = (C, J) is given and
    h.src is Id_J(C), by objects Z of C through ⟨Z⟩.
    """
    L, M = h.src, h.dst
    if site is None:
        cat = L.as_category()
        at = {a: a for a in L.elements}
    else:
        cat, J = site
        at = {z: principal_ideal(cat, J, z) for z in cat.objects}
    values = {z: [m for m in M.elements if M.leq(m, h(at[z]))] for z in cat.objects}
    action = {}
    for u in cat.arrow_ids:
        y, x = cat.arrows[u]
        action[u] = {m: M.meet(m, h(at[y])) for m in values[x]}
    return Presheaf(cat, values, action)


def internal_locale_of_presheaf(P, J):
    """Λ̄(P)(Z) = {I ∈ Id_{J_P}(∫P) : π_P(I) ⊆ ⟨Z⟩}."""
    C = P.base
    cat, JP, proj = giraud_of_presheaf(P, J)
    IP = j_ideals(cat, JP)
    values, princ = {}, {z: principal_ideal(C, J, z) for z in C.objects}
    for z in C.objects:
        values[z] = [I for I in IP.elements if all(proj.obj(e) in princ[z] for e in I)]
    action = {}
    for u in C.arrow_ids:
        y, x = C.arrows[u]
        action[u] = {I: frozenset(e for e in I if proj.obj(e) in princ[y]) for I in values[x]}
    return Presheaf(C, values, action)


def values_are_frames(H, M):
    """Each H(a), with the order of M, is a frame."""
    for x in H.base.objects:
        try:
            if validate_frame(M.sub(H(x))):
                return False
        except FrameError:
            return False
    return True


# JSON


def frame_from_json(data):
    leq = [tuple(p) for p in data.get("leq", [])]
    L = FiniteFrame(data["elements"], leq, name=data.get("name"))
    return check_frame(L)


def frame_to_json(L):
    els = L.elements
    cover = [[label(a), label(b)] for a in els for b in els
             if a != b and L.leq(a, b)
             and not any(c not in (a, b) and L.leq(a, c) and L.leq(c, b) for c in els)]
    return {"kind": "frame", "elements": [label(a) for a in els], "leq": cover}
