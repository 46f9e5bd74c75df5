"""Finite spaces, bundles with families of local sections, germ bundles and spectra."""
from collections import namedtuple
from dataclasses import dataclass, field
from itertools import combinations, product

from .fincat import Functor, Issue, UnionFind, label, order_key, ordered, preorder
from .presheaf import Presheaf, PresheafMorphism


class SpaceError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def _subsets(xs):
    xs = list(xs)
    for r in range(len(xs) + 1):
        for c in combinations(xs, r):
            yield frozenset(c)


def _close_unions(family):
    out = set(family)
    changed = True
    while changed:
        changed = False
        for a in list(out):
            for b in list(out):
                if a | b not in out:
                    out.add(a | b)
                    changed = True
    return out


def _close_meets(family, top):
    out = set(family) | {top}
    changed = True
    while changed:
        changed = False
        for a in list(out):
            for b in list(out):
                if a & b not in out:
                    out.add(a & b)
                    changed = True
    return out


def generated_topology(points, subbase):
    """Finite intersections of the subbase, then unions, plus ∅ and everything."""
    top = frozenset(points)
    return frozenset(_close_unions(_close_meets({frozenset(s) for s in subbase}, top)) | {frozenset()})


class FiniteSpace:
    def __init__(self, points, opens, name=None):
        self.points = tuple(ordered(set(points)))
        self.opens = tuple(sorted({frozenset(u) for u in opens}, key=lambda u: (len(u), order_key(u))))
        self.name = name
        self._cat = None

    def __eq__(self, other):
        return isinstance(other, FiniteSpace) and set(self.points) == set(other.points) \
            and set(self.opens) == set(other.opens)

    def __hash__(self):
        return hash(frozenset(self.opens))

    def __repr__(self):
        return f"<FiniteSpace {len(self.points)} points, {len(self.opens)} opens>"

    def is_open(self, u):
        return frozenset(u) in self._open_set

    @property
    def _open_set(self):
        return frozenset(self.opens)

    def minimal_open(self, x):
        u = frozenset(self.points)
        for v in self.opens:
            if x in v:
                u &= v
        return u

    def opens_within(self, u):
        return [v for v in self.opens if v <= u]

    def category(self):
        """The inclusion poset of opens, objects the open sets themselves."""
        if self._cat is None:
            rel = [(a, b) for a in self.opens for b in self.opens if a <= b]
            self._cat = preorder(self.opens, rel, self.name or "Opens")
        return self._cat

    def subspace(self, subset):
        subset = frozenset(subset)
        return FiniteSpace(subset, {u & subset for u in self.opens})


def validate_space(X):
    issues = []
    pts = frozenset(X.points)
    if frozenset() not in X._open_set:
        issues.append(Issue("missing empty set", None))
    if pts not in X._open_set:
        issues.append(Issue("missing whole space", None))
    for u in X.opens:
        if not u <= pts:
            issues.append(Issue("stray points", u))
    for a in X.opens:
        for b in X.opens:
            if a | b not in X._open_set:
                issues.append(Issue("union", (a, b)))
            if a & b not in X._open_set:
                issues.append(Issue("intersection", (a, b)))
    return issues


def check_space(X):
    issues = validate_space(X)
    if issues:
        raise SpaceError(f"not a topology: {issues[0].kind}", issues[0].at)
    return X


def discrete_space(points):
    return FiniteSpace(points, _subsets(points))


def indiscrete_space(points):
    return FiniteSpace(points, [(), points])


def sierpinski_space():
    return FiniteSpace(["o", "c"], [(), ("o",), ("o", "c")], "Sierpinski")


def is_continuous_map(f, X, Y):
    """f: dict of points; preimages of opens are open."""
    return all(X.is_open(frozenset(x for x in X.points if f[x] in v)) for v in Y.opens)


# bundles and local sections


class Section(namedtuple("Section", "domain graph")):
    """A set-section: the graph is a sorted tuple of (point, element) pairs."""

    @classmethod
    def of(cls, mapping):
        return cls(frozenset(mapping), tuple(sorted(mapping.items(), key=order_key)))

    def at(self, x):
        return dict(self.graph)[x]

    @property
    def image(self):
        return frozenset(e for _, e in self.graph)

    def preimage(self, W):
        return frozenset(x for x, e in self.graph if e in W)

    def restrict(self, V):
        return Section.of({x: e for x, e in self.graph if x in V})


@dataclass
class Bundle:
    total: tuple
    base: FiniteSpace
    proj: dict
    topology: frozenset = None

    def __post_init__(self):
        self.total = tuple(ordered(set(self.total)))
        if self.topology is not None:
            self.topology = frozenset(frozenset(w) for w in self.topology)

    def fibre(self, x):
        return [e for e in self.total if self.proj[e] == x]

    def image(self, W):
        return frozenset(self.proj[e] for e in W)

    def with_topology(self, topology):
        return Bundle(self.total, self.base, self.proj, topology)


def validate_bundle(B):
    issues = []
    if set(B.proj) != set(B.total) or not set(B.proj.values()) <= set(B.base.points):
        issues.append(Issue("projection", None))
        return issues
    if B.topology is not None:
        T = FiniteSpace(B.total, B.topology)
        issues += [Issue("total " + i.kind, i.at) for i in validate_space(T)]
        if not issues and not is_continuous_map(B.proj, T, B.base):
            issues.append(Issue("projection not continuous", None))
    return issues


@dataclass
class SectionFamily:
    bundle: Bundle
    sections: list = field(default_factory=list)

    def __post_init__(self):
        self.sections = sorted(set(self.sections), key=order_key)


def validate_sections(S):
    B = S.bundle
    issues = []
    for s in S.sections:
        if not B.base.is_open(s.domain):
            issues.append(Issue("domain not open", s))
        elif any(B.proj.get(e) != x for x, e in s.graph):
            issues.append(Issue("not a section", s))
    return issues


def all_set_sections(B, U):
    U = ordered(U)
    for choice in product(*[B.fibre(x) for x in U]):
        yield Section.of(dict(zip(U, choice)))


def tau_topology(S):
    """Every W ⊆ E whose preimage under each section is open."""
    B = S.bundle
    return frozenset(W for W in _subsets(B.total)
                     if all(B.base.is_open(s.preimage(W)) for s in S.sections))


def sigma_topology(S):
    """Generated by the images s(U)."""
    return generated_topology(S.bundle.total, [s.image for s in S.sections])


def image_family(S):
    return frozenset(s.image for s in S.sections)


def check_dagger(S):
    """t⁻¹(s(U)) is open for every pair of sections."""
    X = S.bundle.base
    return all(X.is_open(t.preimage(s.image)) for s in S.sections for t in S.sections)


def dagger_witness(S):
    X = S.bundle.base
    for s in S.sections:
        for t in S.sections:
            if not X.is_open(t.preimage(s.image)):
                return (s, t)
    return None


def check_joint_surjectivity(S):
    covered = set()
    for s in S.sections:
        covered |= s.image
    return covered == set(S.bundle.total)


def sections_continuous(S, topology):
    X = S.bundle.base
    return all(X.is_open(s.preimage(W)) for s in S.sections for W in topology)


def is_open_map_section(s, B):
    """Images of opens inside the domain are open in the total space."""
    top = B.topology
    return all(frozenset(s.at(x) for x in V) in top for V in B.base.opens_within(s.domain))


def is_local_homeo(B):
    """Each point of E has an open W with π|W injective, π(W) open and π|W open."""
    if B.topology is None:
        raise SpaceError("bundle has no total topology")
    T = FiniteSpace(B.total, B.topology)
    if not is_continuous_map(B.proj, T, B.base):
        return False
    good = _homeo_opens(B)
    return set().union(*good) == set(B.total) if good else not B.total


def _homeo_opens(B):
    out = []
    for W in B.topology:
        if not W:
            continue
        if len(B.image(W)) != len(W) or not B.base.is_open(B.image(W)):
            continue
        if all(B.base.is_open(B.image(V)) for V in B.topology if V <= W):
            out.append(W)
    return out


def local_bijection_family(B):
    """Sets W_i covering E with π|W_i bijective onto an open and every π(W_i ∩ W_j) open.

    Returns the family or None; search over candidates with backtracking.
    """
    X = B.base
    cands = [W for W in _subsets(B.total)
             if W and len(B.image(W)) == len(W) and X.is_open(B.image(W))]
    chosen = []

    def ok(W):
        return X.is_open(B.image(W)) and all(X.is_open(B.image(W & V)) for V in chosen)

    def walk():
        covered = set().union(*chosen) if chosen else set()
        rest = [e for e in B.total if e not in covered]
        if not rest:
            return True
        e = rest[0]
        for W in cands:
            if e in W and ok(W):
                chosen.append(W)
                if walk():
                    return True
                chosen.pop()
        return False

    return list(chosen) if walk() else None


_TOPOLOGY_CACHE = {}


def all_topologies(points):
    """Every topology on a small set, via preorders (opens = down-sets)."""
    points = tuple(ordered(points))
    n = len(points)
    if n not in _TOPOLOGY_CACHE:
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
        tops = set()
        for bits in product([0, 1], repeat=len(pairs)):
            rel = {p for p, b in zip(pairs, bits) if b}
            if any((i, k) not in rel for (i, j) in rel for (j2, k) in rel if j == j2 and i != k):
                continue
            opens = frozenset(frozenset(S) for S in _subsets(range(n))
                              if all(i in S for (i, j) in rel if j in S))
            tops.add(opens)
        _TOPOLOGY_CACHE[n] = sorted(tops, key=lambda t: (len(t), sorted(order_key(u) for u in t)))
    return [frozenset(frozenset(points[i] for i in u) for u in t) for t in _TOPOLOGY_CACHE[n]]


def admits_etale_topology(B):
    """Exhaustive: some topology on E makes π a local homeomorphism."""
    if len(B.total) > 5:
        raise SpaceError("too many points for topology enumeration", len(B.total))
    return any(is_local_homeo(B.with_topology(t)) for t in all_topologies(B.total))


def restricted_bundle(S):
    """π restricted to the joint image of S, topologised by σ restricted there."""
    B = S.bundle
    Ebar = frozenset().union(*[s.image for s in S.sections]) if S.sections else frozenset()
    sigma = sigma_topology(S)
    top = frozenset(W & Ebar for W in sigma)
    return Bundle(Ebar, B.base, {e: B.proj[e] for e in Ebar}, top)


def close_sections(S):
    """Close under restriction to open subsets and gluing of compatible sections."""
    B = S.bundle
    secs = set(S.sections)
    changed = True
    while changed:
        changed = False
        for s in list(secs):
            for V in B.base.opens_within(s.domain):
                r = s.restrict(V)
                if r not in secs:
                    secs.add(r)
                    changed = True
        for s in list(secs):
            for t in list(secs):
                if all(s.at(x) == t.at(x) for x in s.domain & t.domain):
                    g = Section.of({**dict(s.graph), **dict(t.graph)})
                    if g.domain in B.base._open_set and g not in secs:
                        secs.add(g)
                        changed = True
    return SectionFamily(B, list(secs))


def basis_generates(points, basis, topology):
    """``basis`` is a basis of ``topology``: unions of basis members give exactly it."""
    basis = {frozenset(b) for b in basis}
    if not basis <= set(topology):
        return False
    return all(W == frozenset().union(*[b for b in basis if b <= W]) for W in topology)


# germ bundles and sections


def _arrow(c, a, b):
    return c.hom(a, b)[0]


class GermBundle:
    """E_P = ⊔ P_x with P_x = P(minimal open at x), basis the images ṡ(U)."""

    def __init__(self, P, space):
        self.presheaf, self.space = P, space
        X = space
        self.minimal = {x: X.minimal_open(x) for x in X.points}
        total, proj = [], {}
        for x in X.points:
            for g in P(self.minimal[x]):
                total.append((x, g))
                proj[(x, g)] = x
        self.dots = {}
        for U in X.opens:
            for s in P(U):
                self.dots[(U, s)] = Section.of({x: (x, self.germ(U, s, x)) for x in U})
        bundle = Bundle(total, X, proj)
        self.sections = SectionFamily(bundle, list(self.dots.values()))
        self.bundle = bundle.with_topology(sigma_topology(self.sections))
        self.sections.bundle = self.bundle

    def germ(self, U, s, x):
        c = self.presheaf.base
        return self.presheaf.act(_arrow(c, self.minimal[x], U), s)

    def dot(self, U, s):
        return self.dots[(U, s)]


def germ_bundle(P, space):
    if P.base != space.category():
        raise SpaceError("presheaf is not on the opens of this space")
    return GermBundle(P, space)


def continuous_sections(B, U):
    T = B.topology
    return [s for s in all_set_sections(B, U)
            if all(B.base.is_open(s.preimage(W)) for W in T)]


def sections_presheaf(B):
    """U ↦ continuous sections over U; restriction shrinks the domain."""
    if B.topology is None:
        raise SpaceError("bundle has no total topology")
    X = B.base
    c = X.category()
    values = {U: [s.graph for s in continuous_sections(B, U)] for U in X.opens}
    action = {}
    for f in c.arrow_ids:
        V, U = c.arrows[f]
        action[f] = {g: tuple((x, e) for x, e in g if x in V) for g in values[U]}
    return Presheaf(c, values, action)


def locally_dotted_sections(G, U):
    """Set-sections over U that agree near each point with some ṫ."""
    out = []
    for s in all_set_sections(G.bundle, U):
        ok = True
        for x in U:
            if not any(x in V and all(s.at(y) == d.at(y) for y in V)
                       for (V, t), d in G.dots.items() if V <= U):
                ok = False
                break
        if ok:
            out.append(s)
    return out


def germ_unit(G):
    """P → Γ(E_P), s ↦ ṡ."""
    P = G.presheaf
    Q = sections_presheaf(G.bundle)
    comps = {U: {s: G.dot(U, s).graph for s in P(U)} for U in G.space.opens}
    return Q, PresheafMorphism(P, Q, comps)


def site_comparison(P, space, J=None):
    """f_P: ∫P → 𝒪(E_P), (U, s) ↦ ṡ(U), checked as morphism and comorphism of sites,
    and I ↦ ⋃ ṡ(U) checked as a frame iso Id_{J_P}(∫P) ≅ 𝒪(E_P)."""
    from .fixtures import join_cover_topology
    from .localefr import giraud_of_presheaf, j_ideals
    from .sitemaps import is_comorphism, is_morphism_of_sites
    G = germ_bundle(P, space)
    c = space.category()
    J = J or join_cover_topology(c)
    cat, JP, proj = giraud_of_presheaf(P, J)
    OE = sorted(G.bundle.topology, key=lambda u: (len(u), order_key(u)))
    ecat = preorder(OE, [(a, b) for a in OE for b in OE if a <= b], "OpensE")
    K = join_cover_topology(ecat)
    obj = {(U, s): G.dot(U, s).image for (U, s) in cat.objects}
    arr = {a: _arrow(ecat, obj[cat.src(a)], obj[cat.dst(a)]) for a in cat.arrow_ids}
    fP = Functor(cat, ecat, obj, arr)
    morph = is_morphism_of_sites(fP, JP, K)
    comorph = is_comorphism(fP, JP, K)
    IP = j_ideals(cat, JP)
    phi = {I: frozenset().union(*[obj[e] for e in I]) if I else frozenset() for I in IP.elements}
    bij = len(set(phi.values())) == len(phi) == len(OE) and set(phi.values()) == set(OE)
    order = all((a <= b) == (phi[a] <= phi[b]) for a in IP.elements for b in IP.elements)
    return {"morphism": bool(morph), "comorphism": bool(comorph), "frame_iso": bij and order,
            "functor": fP, "ideal_map": phi, "morphism_witness": morph.witness,
            "comorphism_witness": comorph.witness}


# finite commutative rings


class FiniteRing:
    def __init__(self, elements, add, mul, zero, one, name=None):
        self.elements = tuple(elements)
        self.add, self.mul = add, mul
        self.zero, self.one = zero, one
        self.name = name
        self._neg = None

    def plus(self, a, b):
        return self.add[(a, b)]

    def times(self, a, b):
        return self.mul[(a, b)]

    def neg(self, a):
        if self._neg is None:
            self._neg = {x: next(y for y in self.elements if self.add[(x, y)] == self.zero)
                         for x in self.elements}
        return self._neg[a]

    def minus(self, a, b):
        return self.plus(a, self.neg(b))

    def power(self, a, n):
        out = self.one
        for _ in range(n):
            out = self.times(out, a)
        return out

    def powers(self, a):
        """Distinct powers a⁰, a¹, ... until they repeat."""
        seen, out, x = set(), [], self.one
        while x not in seen:
            seen.add(x)
            out.append(x)
            x = self.times(x, a)
        return out

    def is_unit(self, a):
        return any(self.times(a, b) == self.one for b in self.elements)


def validate_ring(R):
    issues = []
    E = R.elements
    for t, name in ((R.add, "add"), (R.mul, "mul")):
        if any((a, b) not in t or t[(a, b)] not in E for a in E for b in E):
            return [Issue(f"{name} table incomplete", None)]
    if R.zero not in E or R.one not in E:
        return [Issue("constants", None)]
    for a in E:
        if R.plus(a, R.zero) != a:
            issues.append(Issue("additive identity", a))
        if R.times(a, R.one) != a:
            issues.append(Issue("unit", a))
        if not any(R.plus(a, b) == R.zero for b in E):
            issues.append(Issue("additive inverse", a))
        for b in E:
            if R.plus(a, b) != R.plus(b, a):
                issues.append(Issue("additive commutativity", (a, b)))
            if R.times(a, b) != R.times(b, a):
                issues.append(Issue("commutativity", (a, b)))
            for c in E:
                if R.plus(R.plus(a, b), c) != R.plus(a, R.plus(b, c)):
                    issues.append(Issue("additive associativity", (a, b, c)))
                if R.times(R.times(a, b), c) != R.times(a, R.times(b, c)):
                    issues.append(Issue("associativity", (a, b, c)))
                if R.times(a, R.plus(b, c)) != R.plus(R.times(a, b), R.times(a, c)):
                    issues.append(Issue("distributivity", (a, b, c)))
            if len(issues) > 20:
                return issues
    return issues


def zmod(n):
    E = list(range(n))
    return FiniteRing(E, {(a, b): (a + b) % n for a in E for b in E},
                      {(a, b): (a * b) % n for a in E for b in E}, 0, 1 % n, f"Z/{n}")


def gf4():
    """The field with four elements, a + bω with ω² = ω + 1, encoded as 2b + a."""
    E = [0, 1, 2, 3]

    def mul(x, y):
        a, b, c, d = x & 1, x >> 1, y & 1, y >> 1
        # (a + bω)(c + dω) = ac + (ad + bc)ω + bd(ω + 1)
        r0 = (a * c + b * d) % 2
        r1 = (a * d + b * c + b * d) % 2
        return r0 + 2 * r1

    return FiniteRing(E, {(x, y): x ^ y for x in E for y in E},
                      {(x, y): mul(x, y) for x in E for y in E}, 0, 1, "GF(4)")


def product_ring(R, S):
    E = [(a, b) for a in R.elements for b in S.elements]
    return FiniteRing(E, {(x, y): (R.plus(x[0], y[0]), S.plus(x[1], y[1])) for x in E for y in E},
                      {(x, y): (R.times(x[0], y[0]), S.times(x[1], y[1])) for x in E for y in E},
                      (R.zero, S.zero), (R.one, S.one), f"{R.name}x{S.name}")


def ring_ideals(R):
    """Ideals, as closures of the subsets generated one element at a time."""
    def closure(seed):
        I = {R.zero} | set(seed)
        changed = True
        while changed:
            changed = False
            for a in list(I):
                for r in R.elements:
                    for v in (R.times(r, a),):
                        if v not in I:
                            I.add(v)
                            changed = True
                for b in list(I):
                    v = R.plus(a, b)
                    if v not in I:
                        I.add(v)
                        changed = True
        return frozenset(I)

    seen = {closure(())}
    frontier = list(seen)
    while frontier:
        nxt = []
        for I in frontier:
            for a in R.elements:
                if a not in I:
                    K = closure(I | {a})
                    if K not in seen:
                        seen.add(K)
                        nxt.append(K)
        frontier = nxt
    return sorted(seen, key=lambda I: (len(I), order_key(I)))


def prime_ideals(R):
    out = []
    for p in ring_ideals(R):
        if R.one in p:
            continue
        if all(R.times(a, b) not in p or a in p or b in p for a in R.elements for b in R.elements):
            out.append(p)
    return out


class Localization:
    """R_p as fraction classes r/s with s ∉ p; r/s = r'/s' iff w(rs' − r's) = 0 for some w ∉ p."""

    def __init__(self, R, p):
        self.ring, self.prime = R, p
        S = [s for s in R.elements if s not in p]
        self.denominators = S
        pairs = [(r, s) for r in R.elements for s in S]
        uf = UnionFind(pairs)
        for (r, s) in pairs:
            for (r2, s2) in pairs:
                d = R.minus(R.times(r, s2), R.times(r2, s))
                if any(R.times(w, d) == R.zero for w in S):
                    uf.union((r, s), (r2, s2))
        groups = {}
        for x in pairs:
            groups.setdefault(uf.find(x), []).append(x)
        self.cls = {}
        for members in groups.values():
            rep = min(members, key=order_key)
            for m in members:
                self.cls[m] = rep
        self.elements = ordered(set(self.cls.values()))

    def of(self, r, s):
        return self.cls[(r, s)]

    def plus(self, x, y):
        R = self.ring
        return self.of(R.plus(R.times(x[0], y[1]), R.times(y[0], x[1])), R.times(x[1], y[1]))

    def times(self, x, y):
        R = self.ring
        return self.of(R.times(x[0], y[0]), R.times(x[1], y[1]))

    def as_ring(self):
        E = self.elements
        return FiniteRing(E, {(a, b): self.plus(a, b) for a in E for b in E},
                          {(a, b): self.times(a, b) for a in E for b in E},
                          self.of(self.ring.zero, self.ring.one), self.of(self.ring.one, self.ring.one))


@dataclass
class Spectrum:
    space: FiniteSpace
    bundle: Bundle
    sections: SectionFamily
    stalks: dict
    basic: dict


def _spectrum_space(points, basic):
    return FiniteSpace(points, generated_topology(points, basic.values()) | {frozenset(points)})


def zariski_spectrum(R):
    """Spec R with the D(a) basis, E = ⊔ R_p and the sections s_{x/aⁿ} over D(a)."""
    issues = validate_ring(R)
    if issues:
        raise SpaceError(f"not a commutative ring with unit: {issues[0].kind}", issues[0].at)
    primes = prime_ideals(R)
    D = {a: frozenset(p for p in primes if a not in p) for a in R.elements}
    X = _spectrum_space(primes, D)
    stalks = {p: Localization(R, p) for p in primes}
    total = [(p, c) for p in primes for c in stalks[p].elements]
    proj = {e: e[0] for e in total}
    B = Bundle(total, X, proj)
    secs = set()
    for a in R.elements:
        for an in R.powers(a):
            for x in R.elements:
                secs.add(Section.of({p: (p, stalks[p].of(x, an)) for p in D[a]}))
    S = SectionFamily(B, list(secs))
    B = B.with_topology(tau_topology(S))
    S.bundle = B
    return Spectrum(X, B, S, stalks, D)


def global_section_ring_map(spec, R):
    """r ↦ (p ↦ [r/1]_p), with a check that it is a bijection onto global sections
    and preserves the pointwise operations."""
    Q = sections_presheaf(spec.bundle)
    top = frozenset(spec.space.points)
    glob = set(Q(top))
    m = {r: Section.of({p: (p, spec.stalks[p].of(r, R.one)) for p in spec.space.points}).graph
         for r in R.elements}
    bij = len(set(m.values())) == len(m) and set(m.values()) == glob

    def pointwise(op, g, h):
        dg, dh = dict(g), dict(h)
        return Section.of({p: (p, getattr(spec.stalks[p], op)(dg[p][1], dh[p][1]))
                           for p in dg}).graph

    hom = all(pointwise("plus", m[a], m[b]) == m[R.plus(a, b)] and
              pointwise("times", m[a], m[b]) == m[R.times(a, b)]
              for a in R.elements for b in R.elements)
    return m, bij and hom


# finite MV-algebras


class FiniteMV:
    def __init__(self, elements, oplus, neg, zero, name=None):
        self.elements = tuple(elements)
        self.oplus_table, self.neg_map, self.zero = oplus, neg, zero
        self.name = name

    def oplus(self, a, b):
        return self.oplus_table[(a, b)]

    def neg(self, a):
        return self.neg_map[a]

    @property
    def one(self):
        return self.neg(self.zero)

    def ominus(self, x, y):
        return self.neg(self.oplus(self.neg(x), y))

    def dist(self, x, y):
        return self.oplus(self.ominus(x, y), self.ominus(y, x))

    def leq(self, x, y):
        return self.ominus(x, y) == self.zero


def validate_mv(A):
    E = A.elements
    if any((a, b) not in A.oplus_table or A.oplus(a, b) not in E for a in E for b in E):
        return [Issue("oplus table incomplete", None)]
    if any(A.neg_map.get(a) not in E for a in E) or A.zero not in E:
        return [Issue("negation or zero", None)]
    issues = []
    one = A.one
    for x in E:
        if A.oplus(x, A.zero) != x:
            issues.append(Issue("zero", x))
        if A.neg(A.neg(x)) != x:
            issues.append(Issue("double negation", x))
        if A.oplus(x, one) != one:
            issues.append(Issue("absorption", x))
        for y in E:
            if A.oplus(x, y) != A.oplus(y, x):
                issues.append(Issue("commutativity", (x, y)))
            if A.oplus(A.neg(A.oplus(A.neg(x), y)), y) != A.oplus(A.neg(A.oplus(A.neg(y), x)), x):
                issues.append(Issue("lukasiewicz", (x, y)))
            for z in E:
                if A.oplus(A.oplus(x, y), z) != A.oplus(x, A.oplus(y, z)):
                    issues.append(Issue("associativity", (x, y, z)))
        if len(issues) > 20:
            break
    return issues


def lukasiewicz_chain(n):
    """{0, ..., n-1} read as {0, 1/(n-1), ..., 1}."""
    E = list(range(n))
    return FiniteMV(E, {(a, b): min(a + b, n - 1) for a in E for b in E},
                    {a: n - 1 - a for a in E}, 0, f"L{n}")


def product_mv(A, B):
    E = [(a, b) for a in A.elements for b in B.elements]
    return FiniteMV(E, {(x, y): (A.oplus(x[0], y[0]), B.oplus(x[1], y[1])) for x in E for y in E},
                    {x: (A.neg(x[0]), B.neg(x[1])) for x in E}, (A.zero, B.zero),
                    f"{A.name}x{B.name}")


def mv_ideals(A):
    """Down-closed, ⊕-closed subsets containing 0."""
    out = []
    for I in _subsets(A.elements):
        if A.zero not in I:
            continue
        if any(A.oplus(a, b) not in I for a in I for b in I):
            continue
        if any(A.leq(x, y) and x not in I for y in I for x in A.elements):
            continue
        out.append(I)
    return sorted(out, key=lambda I: (len(I), order_key(I)))


def mv_prime_ideals(A):
    return [I for I in mv_ideals(A) if A.one not in I
            and all(A.ominus(x, y) in I or A.ominus(y, x) in I for x in A.elements for y in A.elements)]


def mv_quotient(A, I):
    """Classes of x ~ y iff d(x, y) ∈ I, labelled by their least member."""
    uf = UnionFind(A.elements)
    for x in A.elements:
        for y in A.elements:
            if A.dist(x, y) in I:
                uf.union(x, y)
    groups = {}
    for x in A.elements:
        groups.setdefault(uf.find(x), []).append(x)
    return {x: min(g, key=order_key) for g in groups.values() for x in g}


def mv_quotient_algebra(A, I):
    q = mv_quotient(A, I)
    E = ordered(set(q.values()))
    return FiniteMV(E, {(a, b): q[A.oplus(a, b)] for a in E for b in E},
                    {a: q[A.neg(a)] for a in E}, q[A.zero])


def mv_spectrum(A):
    """Spec A with the W(a) basis, E = ⊔ A/I and the global sections ā."""
    issues = validate_mv(A)
    if issues:
        raise SpaceError(f"not an MV-algebra: {issues[0].kind}", issues[0].at)
    primes = mv_prime_ideals(A)
    W = {a: frozenset(I for I in primes if a in I) for a in A.elements}
    X = _spectrum_space(primes, W)
    quots = {I: mv_quotient(A, I) for I in primes}
    total = [(I, c) for I in primes for c in sorted(set(quots[I].values()), key=order_key)]
    proj = {e: e[0] for e in total}
    B = Bundle(total, X, proj)
    bars = {a: Section.of({I: (I, quots[I][a]) for I in primes}) for a in A.elements}
    S = SectionFamily(B, list(bars.values()))
    B = B.with_topology(tau_topology(S))
    S.bundle = B
    spec = Spectrum(X, B, S, quots, W)
    spec.bars = bars
    return spec


def mv_distance_identity(A, spec=None):
    """b̄⁻¹(ā(Spec)) = W(d(a, b)) for all a, b; returns the first failing pair or None."""
    spec = spec or mv_spectrum(A)
    for a in A.elements:
        for b in A.elements:
            if spec.bars[b].preimage(spec.bars[a].image) != spec.basic[A.dist(a, b)]:
                return (a, b)
    return None


# JSON


def space_from_json(data):
    return check_space(FiniteSpace(data["points"], data["opens"], data.get("name")))


def _point_json(x):
    # ints and strings survive JSON as they are; anything else gets its label
    return x if isinstance(x, (int, str)) else label(x)


def space_to_json(X):
    return {"kind": "space", "points": [_point_json(x) for x in X.points],
            "opens": [[_point_json(x) for x in ordered(u)] for u in X.opens]}


def _h(x):
    # JSON turns tuple elements (from product algebras) into lists
    return tuple(_h(y) for y in x) if isinstance(x, list) else x


def _table(data, key, E):
    rows = data[key]
    return {(a, b): _h(rows[i][j]) for i, a in enumerate(E) for j, b in enumerate(E)}


def ring_from_json(data):
    E = [_h(x) for x in data["elements"]]
    R = FiniteRing(E, _table(data, "add", E), _table(data, "mul", E), _h(data["zero"]), _h(data["one"]),
                   data.get("name"))
    issues = validate_ring(R)
    if issues:
        raise SpaceError(f"not a commutative ring with unit: {issues[0].kind}", issues[0].at)
    return R


def mv_from_json(data):
    E = [_h(x) for x in data["elements"]]
    A = FiniteMV(E, _table(data, "oplus", E), dict(zip(E, map(_h, data["neg"]))), _h(data["zero"]),
                 data.get("name"))
    issues = validate_mv(A)
    if issues:
        raise SpaceError(f"not an MV-algebra: {issues[0].kind}", issues[0].at)
    return A


def ring_to_json(R):
    E = list(R.elements)
    return {"kind": "ring", "name": R.name, "elements": E, "zero": R.zero, "one": R.one,
            "add": [[R.plus(a, b) for b in E] for a in E],
            "mul": [[R.times(a, b) for b in E] for a in E]}


def mv_to_json(A):
    E = list(A.elements)
    return {"kind": "mv", "name": A.name, "elements": E, "zero": A.zero,
            "oplus": [[A.oplus(a, b) for b in E] for a in E], "neg": [A.neg(a) for a in E]}
