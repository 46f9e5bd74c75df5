"""Sieves, Grothendieck topologies, sheaf conditions and sheafification."""

from .fincat import (BoundExceeded, Issue, UnionFind, Verdict, env_bound, label,
                     order_key, ordered)
from .presheaf import (Presheaf, PresheafMorphism, compose_morphisms, is_iso, is_mono,
                       representable, validate_morphism)


def _sieve_key(S):
    return (len(S), tuple(sorted(order_key(f) for f in S)))


class Sieve:
    """A sieve on ``apex``; the arrow set is closed on construction."""

    def __init__(self, base, apex, arrows):
        arrows = set(arrows)
        for f in arrows:
            if base.dst(f) != apex:
                raise ValueError(f"arrow {f!r} does not target {apex!r}")
        self.base = base
        self.apex = apex
        self.arrows = generate(base, apex, arrows)

    def __contains__(self, f):
        return f in self.arrows

    def __eq__(self, other):
        return isinstance(other, Sieve) and self.apex == other.apex and self.arrows == other.arrows

    def __hash__(self):
        return hash((self.apex, self.arrows))

    def __repr__(self):
        return f"Sieve({label(self.apex)}: {label(self.arrows)})"


def generate(c, x, family):
    out = set()
    for f in family:
        if c.dst(f) != x:
            raise ValueError(f"arrow {f!r} does not target {x!r}")
        for h in c.into(c.src(f)):
            out.add(c.comp(f, h))
    return frozenset(out)


def sieve_generated(c, x, family):
    return Sieve(c, x, family)


def maximal_sieve(c, x):
    return frozenset(c.into(x))


def pullback(c, f, S):
    """f*S = {g : f∘g ∈ S} as a frozenset of arrows."""
    cache = c.cache.setdefault("pullback", {})
    key = (f, S)
    if key not in cache:
        cache[key] = frozenset(g for g in c.into(c.src(f)) if c.comp(f, g) in S)
    return cache[key]


def pullback_sieve(S, f):
    if S.base.dst(f) != S.apex:
        raise ValueError("pullback_sieve: target mismatch")
    return Sieve(S.base, S.base.src(f), pullback(S.base, f, S.arrows))


def all_sieves(c, x):
    """Every sieve on x, smallest first.

    Arrows into x are grouped by the sieve they generate; a group can be
    added once everything strictly below it is present.
    """
    cache = c.cache.setdefault("all_sieves", {})
    if x in cache:
        return cache[x]
    gen = {f: generate(c, x, [f]) for f in c.into(x)}
    groups = {}
    for f, g in gen.items():
        groups.setdefault(g, []).append(f)
    blocks = sorted(groups.items(), key=lambda kv: _sieve_key(kv[0]))
    result = []

    def walk(i, current):
        if i == len(blocks):
            result.append(frozenset(current))
            return
        principal, members = blocks[i]
        walk(i + 1, current)
        below = principal - set(members)
        if below <= current:
            walk(i + 1, current | set(members))

    walk(0, frozenset())
    result = sorted(set(result), key=_sieve_key)
    cache[x] = result
    return result


class GrothendieckTopology:
    def __init__(self, base, covering):
        self.base = base
        self.covering = {x: frozenset(frozenset(S) for S in covering.get(x, ()))
                         for x in base.objects}

    def covers(self, x, S):
        return frozenset(S) in self.covering[x]

    def sieves(self, x):
        return sorted(self.covering[x], key=_sieve_key)

    def __eq__(self, other):
        return (isinstance(other, GrothendieckTopology) and self.base == other.base
                and self.covering == other.covering)

    def __hash__(self):
        return hash(frozenset((x, v) for x, v in self.covering.items()))

    def __le__(self, other):
        return all(self.covering[x] <= other.covering[x] for x in self.base.objects)

    def key(self):
        return tuple((order_key(x), tuple(_sieve_key(S) for S in self.sieves(x)))
                     for x in self.base.objects)

    def __repr__(self):
        parts = "; ".join(f"{label(x)}: {len(v)}" for x, v in self.covering.items())
        return f"<GrothendieckTopology {parts}>"


def validate_topology(J):
    c = J.base
    issues = []
    for x in c.objects:
        if maximal_sieve(c, x) not in J.covering[x]:
            issues.append(Issue("maximality", x))
        for S in J.sieves(x):
            if generate(c, x, S) != S:
                issues.append(Issue("not-a-sieve", (x, S)))
    if issues:
        return issues
    for x in c.objects:
        for S in J.sieves(x):
            for f in c.into(x):
                if pullback(c, f, S) not in J.covering[c.src(f)]:
                    issues.append(Issue("stability", (x, S, f)))
    for x in c.objects:
        for R in all_sieves(c, x):
            if R in J.covering[x]:
                continue
            for S in J.sieves(x):
                if all(pullback(c, f, R) in J.covering[c.src(f)] for f in S):
                    issues.append(Issue("transitivity", (x, R, S)))
                    break
    return issues


def saturate(c, coverage=None):
    """Least topology containing the generating sieves."""
    J = {x: {maximal_sieve(c, x)} for x in c.objects}
    for x, families in (coverage or {}).items():
        for fam in families:
            J[x].add(generate(c, x, fam))
    return _close(c, J)


def _close(c, J):
    changed = True
    while changed:
        changed = False
        for x in c.objects:
            for S in list(J[x]):
                for f in c.into(x):
                    P = pullback(c, f, S)
                    if P not in J[c.src(f)]:
                        J[c.src(f)].add(P)
                        changed = True
        for x in c.objects:
            for R in all_sieves(c, x):
                if R in J[x]:
                    continue
                for S in J[x]:
                    if all(pullback(c, f, R) in J[c.src(f)] for f in S):
                        J[x].add(R)
                        changed = True
                        break
    return GrothendieckTopology(c, J)


def trivial_topology(c):
    return saturate(c, {})


def join_topology(J, K):
    return saturate(J.base, {x: list(J.covering[x] | K.covering[x]) for x in J.base.objects})


def meet_topology(J, K):
    return GrothendieckTopology(J.base, {x: J.covering[x] & K.covering[x] for x in J.base.objects})


def enumerate_topologies(c, bound=None):
    """All topologies on c, sorted by size then content."""
    bound = bound if bound is not None else env_bound("topologies", 10)
    if len(c.arrows) > bound:
        raise BoundExceeded(f"{len(c.arrows)} arrows exceeds topology enumeration bound {bound}")
    start = trivial_topology(c)
    seen = {start}
    frontier = [start]
    candidates = [(x, S) for x in c.objects for S in all_sieves(c, x)]
    while frontier:
        nxt = []
        for T in frontier:
            for x, S in candidates:
                if S in T.covering[x]:
                    continue
                cov = {y: set(T.covering[y]) for y in c.objects}
                cov[x].add(S)
                U = _close(c, cov)
                if U not in seen:
                    seen.add(U)
                    nxt.append(U)
        frontier = nxt
    return sorted(seen, key=lambda T: (sum(len(v) for v in T.covering.values()), T.key()))


# matching families and sheaf conditions


def matching_families(P, S, x=None):
    """Every matching family for P on the sieve S, as dicts arrow → element."""
    c = P.base
    arrows = ordered(S)
    fam = {}

    def assign(f, v, trail):
        for g in c.into(c.src(f)):
            fg = c.comp(f, g)
            w = P.act(g, v)
            cur = fam.get(fg)
            if cur is None:
                fam[fg] = w
                trail.append(fg)
            elif cur != w:
                return False
        return True

    def walk(i):
        while i < len(arrows) and arrows[i] in fam:
            i += 1
        if i == len(arrows):
            yield dict(fam)
            return
        f = arrows[i]
        for v in P(c.src(f)):
            trail = []
            if assign(f, v, trail):
                yield from walk(i + 1)
            for a in trail:
                del fam[a]

    yield from walk(0)


def amalgamations(P, x, S, family):
    return [s for s in P(x) if all(P.act(f, s) == v for f, v in family.items())]


def _check_sheaf(P, J, at_most_one):
    if P.base != J.base:
        raise ValueError("base mismatch")
    c = P.base
    for x in c.objects:
        for S in J.sieves(x):
            if S == maximal_sieve(c, x):
                continue
            for fam in matching_families(P, S):
                n = len(amalgamations(P, x, S, fam))
                if n > 1 or (n == 0 and not at_most_one):
                    return Verdict(False, (x, S, fam, n))
    return Verdict(True)


def is_sheaf(P, J):
    return _check_sheaf(P, J, at_most_one=False)


def is_separated(P, J):
    return _check_sheaf(P, J, at_most_one=True)


def is_subcanonical(J):
    for x in J.base.objects:
        v = is_sheaf(representable(J.base, x), J)
        if not v:
            return Verdict(False, (x, v.witness))
    return Verdict(True)


def _freeze(fam):
    return tuple(sorted(fam.items(), key=lambda kv: order_key(kv[0])))


def plus(P, J):
    """One step of the plus construction, with its unit P → P⁺.

    An element of P⁺(x) is a pair (covering sieve, frozen matching family),
    the least one in its class.
    """
    c = P.base
    rep = {}
    values = {}
    for x in c.objects:
        nodes = []
        for S in J.sieves(x):
            for fam in matching_families(P, S):
                nodes.append((S, _freeze(fam)))
        uf = UnionFind(nodes)
        node_set = set(nodes)
        for S, fam in nodes:
            d = dict(fam)
            for R in J.sieves(x):
                if R < S:
                    r = (R, _freeze({f: d[f] for f in R}))
                    if r in node_set:
                        uf.union((S, fam), r)
        classes = {}
        for n in nodes:
            classes.setdefault(uf.find(n), []).append(n)
        for members in classes.values():
            best = min(members, key=lambda n: (_sieve_key(n[0]), order_key(n[1])))
            for n in members:
                rep[(x, n)] = best
        values[x] = {rep[(x, n)] for n in nodes}
    action = {}
    for f in c.arrow_ids:
        y, x = c.arrows[f]
        action[f] = {}
        for (S, fam) in values[x]:
            d = dict(fam)
            R = pullback(c, f, S)
            action[f][(S, fam)] = rep[(y, (R, _freeze({g: d[c.comp(f, g)] for g in R})))]
    Q = Presheaf(c, values, action)
    unit = {}
    for x in c.objects:
        M = maximal_sieve(c, x)
        unit[x] = {s: rep[(x, (M, _freeze({f: P.act(f, s) for f in M})))] for s in P(x)}
    return Q, PresheafMorphism(P, Q, unit)


def plus_morphism(m, J, src_plus, dst_plus):
    """m⁺ between already computed plus constructions."""
    c = m.src.base
    Qs, Qd = src_plus, dst_plus
    comps = {}
    for x in c.objects:
        lookup = {}
        for S, fam in Qd(x):
            lookup[(S, fam)] = (S, fam)
        comps[x] = {}
        for S, fam in Qs(x):
            image = {f: m(c.src(f), v) for f, v in fam}
            comps[x][(S, fam)] = _plus_class(Qd, J, x, S, image)
    return PresheafMorphism(Qs, Qd, comps)


def _plus_class(Q, J, x, S, fam):
    """The element of Q = P⁺ at x represented by (S, fam)."""
    for R, rfam in Q(x):
        d = dict(rfam)
        common = S & R
        for T in J.sieves(x):
            if T <= common and all(fam[f] == d[f] for f in T):
                return (R, rfam)
    raise ValueError("no plus class found")


def sheafify(P, J):
    """a_J(P) by two plus steps, with the unit P → a_J(P)."""
    if P.base != J.base:
        raise ValueError("base mismatch")
    P1, u1 = plus(P, J)
    P2, u2 = plus(P1, J)
    return P2, compose_morphisms(u2, u1)


def sheafify_morphism(m, J):
    """a_J(m) together with both sheafifications."""
    P1, _ = plus(m.src, J)
    Q1, _ = plus(m.dst, J)
    m1 = plus_morphism(m, J, P1, Q1)
    P2, _ = plus(P1, J)
    Q2, _ = plus(Q1, J)
    return plus_morphism(m1, J, P2, Q2)


def is_dense_mono(m, J):
    if validate_morphism(m):
        raise ValueError("not a presheaf morphism")
    if not is_mono(m):
        raise ValueError("is_dense_mono expects a monomorphism")
    am = sheafify_morphism(m, J)
    return Verdict(is_iso(am), None if is_iso(am) else am)


def topology_from_json(data, c):
    cov = {x: [list(fam) for fam in fams] for x, fams in data.get("coverage", {}).items()}
    return saturate(c, cov)


def topology_to_json(J):
    return {label(x): [[label(f) for f in ordered(S)] for S in J.sieves(x)]
            for x in J.base.objects}
