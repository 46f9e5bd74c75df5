"""Finite categories, functors and natural transformations.

Identifiers are arbitrary hashable values (strings when loaded from JSON,
tuples for constructed categories).  Every enumeration walks them in the
order given by ``order_key`` so results are reproducible.
"""
import os
from collections import namedtuple
from dataclasses import dataclass
from itertools import product


def order_key(x):
    if x is None:
        return (0,)
    if isinstance(x, bool):
        return (1, int(x))
    if isinstance(x, int):
        return (1, x)
    if isinstance(x, str):
        return (2, x)
    if isinstance(x, tuple):
        return (3, tuple(order_key(y) for y in x))
    if isinstance(x, frozenset):
        return (4, tuple(sorted(order_key(y) for y in x)))
    return (5, repr(x))


def ordered(xs):
    return sorted(xs, key=order_key)


def label(x):
    """Flat string form of an identifier, used for JSON output."""
    if isinstance(x, str):
        return x
    if isinstance(x, tuple):
        return "(" + ",".join(label(y) for y in x) + ")"
    if isinstance(x, frozenset):
        return "{" + ",".join(label(y) for y in ordered(x)) + "}"
    return str(x)


def env_bound(name, default):
    """Bound override from FINSITE_BOUND.

    Accepts a bare integer (applies to every bound) or a list such as
    ``descent=500,topologies=12``.
    """
    raw = os.environ.get("FINSITE_BOUND", "").strip()
    if not raw:
        return default
    if raw.isdigit():
        return int(raw)
    for part in raw.split(","):
        key, _, val = part.partition("=")
        if key.strip() == name and val.strip().isdigit():
            return int(val)
    return default


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: object = None

    def __bool__(self):
        return self.holds


Issue = namedtuple("Issue", "kind at")


class BoundExceeded(RuntimeError):
    pass


class FiniteCategory:
    def __init__(self, objects, arrows, identity, compose, name=None):
        self.objects = tuple(ordered(set(objects)))
        self.arrows = dict(arrows)
        self.identity = dict(identity)
        self.table = dict(compose)
        self.name = name
        self.arrow_ids = tuple(ordered(self.arrows))
        self.cache = {}
        hom, into, out = {}, {}, {}
        for a in self.arrow_ids:
            s, d = self.arrows[a]
            hom.setdefault((s, d), []).append(a)
            into.setdefault(d, []).append(a)
            out.setdefault(s, []).append(a)
        self._hom = {k: tuple(v) for k, v in hom.items()}
        self._into = {k: tuple(v) for k, v in into.items()}
        self._out = {k: tuple(v) for k, v in out.items()}

    @classmethod
    def build(cls, objects, arrows, identity, compose_fn, name=None):
        """Fill the composition table from a function on composable pairs."""
        table = {}
        by_src = {}
        for f, (s, d) in arrows.items():
            by_src.setdefault(s, []).append(f)
        for f, (s, d) in arrows.items():
            for g in by_src.get(d, ()):
                table[(g, f)] = compose_fn(g, f)
        return cls(objects, arrows, identity, table, name)

    def src(self, f):
        return self.arrows[f][0]

    def dst(self, f):
        return self.arrows[f][1]

    def id(self, x):
        return self.identity[x]

    def hom(self, x, y):
        return self._hom.get((x, y), ())

    def into(self, y):
        return self._into.get(y, ())

    def out_of(self, x):
        return self._out.get(x, ())

    def comp(self, *fs):
        """comp(h, g, f) = h∘g∘f."""
        result = fs[-1]
        for g in reversed(fs[:-1]):
            try:
                result = self.table[(g, result)]
            except KeyError:
                raise ValueError(f"cannot compose {g!r} after {result!r}") from None
        return result

    def is_identity(self, f):
        s, d = self.arrows[f]
        return s == d and self.identity.get(s) == f

    def inverse(self, f):
        inv = self.cache.setdefault("inverse", {})
        if f not in inv:
            s, d = self.arrows[f]
            inv[f] = None
            for g in self.hom(d, s):
                if self.table[(g, f)] == self.identity[s] and self.table[(f, g)] == self.identity[d]:
                    inv[f] = g
                    break
        return inv[f]

    def is_iso(self, f):
        return self.inverse(f) is not None

    def isos(self, x, y):
        return tuple(f for f in self.hom(x, y) if self.is_iso(f))

    def is_posetal(self):
        return all(len(v) <= 1 for v in self._hom.values())

    def is_discrete(self):
        return all(self.is_identity(f) for f in self.arrow_ids)

    def is_groupoid(self):
        return all(self.is_iso(f) for f in self.arrow_ids)

    def __eq__(self, other):
        if not isinstance(other, FiniteCategory):
            return NotImplemented
        return (self.objects == other.objects and self.arrows == other.arrows
                and self.identity == other.identity and self.table == other.table)

    def __hash__(self):
        return hash((self.objects, len(self.arrows)))

    def __repr__(self):
        tag = f" {self.name}" if self.name else ""
        return f"<FiniteCategory{tag}: {len(self.objects)} objects, {len(self.arrows)} arrows>"


def validate_category(c):
    issues = []
    objs = set(c.objects)
    for f in c.arrow_ids:
        s, d = c.arrows[f]
        if s not in objs or d not in objs:
            issues.append(Issue("dangling", f))
    for x in c.objects:
        i = c.identity.get(x)
        if i is None or i not in c.arrows:
            issues.append(Issue("dangling", ("identity", x)))
        elif c.arrows[i] != (x, x):
            issues.append(Issue("identity-type", x))
    for (g, f), gf in c.table.items():
        if g not in c.arrows or f not in c.arrows or gf not in c.arrows:
            issues.append(Issue("dangling", (g, f, gf)))
    if issues:
        return issues
    for (g, f), gf in sorted(c.table.items(), key=lambda kv: order_key(kv[0])):
        if c.dst(f) != c.src(g):
            issues.append(Issue("not-composable", (g, f)))
        elif c.is_identity(g) and gf != f:
            issues.append(Issue("identity-law", (g, f)))
        elif c.is_identity(f) and gf != g:
            issues.append(Issue("identity-law", (g, f)))
        elif c.arrows[gf] != (c.src(f), c.dst(g)):
            issues.append(Issue("composite-type", (g, f)))
    for f in c.arrow_ids:
        for g in c.out_of(c.dst(f)):
            if (g, f) not in c.table:
                issues.append(Issue("missing-composite", (g, f)))
    table = c.table
    for f in c.arrow_ids:
        for g in c.out_of(c.dst(f)):
            gf = table.get((g, f))
            for h in c.out_of(c.dst(g)):
                hg = table.get((h, g))
                if gf is None or hg is None:
                    continue
                left, right = table.get((hg, f)), table.get((h, gf))
                if left is None or right is None:
                    continue
                if left != right:
                    issues.append(Issue("associativity", (h, g, f)))
    return issues


def check_category(c):
    issues = validate_category(c)
    if issues:
        raise ValueError(f"not a category: {issues[:5]}")
    return c


def _identity_name(x):
    return "id_" + x if isinstance(x, str) else ("id", x)


def discrete(objects, name=None):
    objects = ordered(set(objects))
    ids = {x: _identity_name(x) for x in objects}
    arrows = {ids[x]: (x, x) for x in objects}
    table = {(ids[x], ids[x]): ids[x] for x in objects}
    return FiniteCategory(objects, arrows, ids, table, name)


def one():
    return discrete(["*"], "One")


def empty_category():
    return discrete([], "Empty")


def two():
    return FiniteCategory(
        ["0", "1"],
        {"id_0": ("0", "0"), "id_1": ("1", "1"), "t": ("0", "1")},
        {"0": "id_0", "1": "id_1"},
        {("id_0", "id_0"): "id_0", ("id_1", "id_1"): "id_1",
         ("t", "id_0"): "t", ("id_1", "t"): "t"},
        "Two",
    )


def preorder(elements, leq, name=None):
    """Posetal category from a relation; closed reflexively and transitively.

    The arrow x ≤ y has id (x, y).
    """
    elements = ordered(set(elements))
    rel = {(x, x) for x in elements} | {tuple(p) for p in leq}
    changed = True
    while changed:
        changed = False
        for (a, b) in list(rel):
            for (c, d) in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    arrows = {(a, b): (a, b) for (a, b) in rel}
    identity = {x: (x, x) for x in elements}
    return FiniteCategory.build(elements, arrows, identity,
                                lambda g, f: (f[0], g[1]), name)


def chain(n, name=None):
    names = [str(i) for i in range(n)]
    return preorder(names, [(names[i], names[i + 1]) for i in range(n - 1)],
                    name or f"Chain{n}")


def leq(c, x, y):
    """Order relation of a posetal category."""
    return bool(c.hom(x, y))


def down_set(c, x):
    return tuple(y for y in c.objects if c.hom(y, x))


def opposite(c):
    op = c.cache.get("opposite")
    if op is None:
        op = FiniteCategory(c.objects, {f: (d, s) for f, (s, d) in c.arrows.items()},
                            c.identity, {(f, g): h for (g, f), h in c.table.items()},
                            c.name and c.name + "^op")
        op.cache["opposite"] = c
        c.cache["opposite"] = op
    return op


def full_subcategory(c, objects):
    keep = set(objects)
    arrows = {f: sd for f, sd in c.arrows.items() if sd[0] in keep and sd[1] in keep}
    table = {k: v for k, v in c.table.items() if k[0] in arrows and k[1] in arrows}
    return FiniteCategory(keep, arrows, {x: c.identity[x] for x in keep}, table)


def disjoint_union(c, d):
    objs = [(0, x) for x in c.objects] + [(1, x) for x in d.objects]
    arrows = {(0, f): ((0, s), (0, t)) for f, (s, t) in c.arrows.items()}
    arrows.update({(1, f): ((1, s), (1, t)) for f, (s, t) in d.arrows.items()})
    identity = {(0, x): (0, c.identity[x]) for x in c.objects}
    identity.update({(1, x): (1, d.identity[x]) for x in d.objects})
    table = {((0, g), (0, f)): (0, h) for (g, f), h in c.table.items()}
    table.update({((1, g), (1, f)): (1, h) for (g, f), h in d.table.items()})
    return FiniteCategory(objs, arrows, identity, table)


def product_category(c, d):
    objs = list(product(c.objects, d.objects))
    arrows = {(f, g): ((c.src(f), d.src(g)), (c.dst(f), d.dst(g)))
              for f in c.arrow_ids for g in d.arrow_ids}
    identity = {(x, y): (c.identity[x], d.identity[y]) for x, y in objs}
    return FiniteCategory.build(objs, arrows, identity,
                                lambda k, h: (c.comp(k[0], h[0]), d.comp(k[1], h[1])))


class Functor:
    def __init__(self, src, dst, objects, arrows, name=None):
        self.src = src
        self.dst = dst
        self.objects = dict(objects)
        self.arrows = dict(arrows)
        self.name = name

    def obj(self, x):
        return self.objects[x]

    def arr(self, f):
        return self.arrows[f]

    def __eq__(self, other):
        if not isinstance(other, Functor):
            return NotImplemented
        return (self.src == other.src and self.dst == other.dst
                and self.objects == other.objects and self.arrows == other.arrows)

    def __hash__(self):
        return hash(tuple(sorted(map(order_key, self.objects.items()))))

    def __repr__(self):
        return f"<Functor {self.name or ''} {self.src!r} -> {self.dst!r}>"


def validate_functor(F):
    issues = []
    A, B = F.src, F.dst
    for x in A.objects:
        if F.objects.get(x) not in B.identity:
            issues.append(Issue("object-map", x))
    for f in A.arrow_ids:
        if F.arrows.get(f) not in B.arrows:
            issues.append(Issue("arrow-map", f))
    if issues:
        return issues
    for f in A.arrow_ids:
        s, d = A.arrows[f]
        if B.arrows[F.arrows[f]] != (F.objects[s], F.objects[d]):
            issues.append(Issue("endpoints", f))
    for x in A.objects:
        if F.arrows[A.identity[x]] != B.identity[F.objects[x]]:
            issues.append(Issue("identity", x))
    if issues:
        return issues
    for (g, f), gf in A.table.items():
        if B.comp(F.arrows[g], F.arrows[f]) != F.arrows[gf]:
            issues.append(Issue("composition", (g, f)))
    return issues


def identity_functor(c):
    return Functor(c, c, {x: x for x in c.objects}, {f: f for f in c.arrow_ids}, "id")


def compose_functors(G, F):
    """G∘F."""
    return Functor(F.src, G.dst,
                   {x: G.objects[F.objects[x]] for x in F.src.objects},
                   {f: G.arrows[F.arrows[f]] for f in F.src.arrow_ids})


def opposite_functor(F):
    return Functor(opposite(F.src), opposite(F.dst), F.objects, F.arrows)


def constant_functor(c, d, x):
    return Functor(c, d, {y: x for y in c.objects}, {f: d.identity[x] for f in c.arrow_ids})


def object_functor(c, x):
    """The functor One → c picking x."""
    return Functor(one(), c, {"*": x}, {"id_*": c.identity[x]})


class NatTransf:
    def __init__(self, src, dst, components):
        self.src = src
        self.dst = dst
        self.components = dict(components)

    def __getitem__(self, x):
        return self.components[x]

    def __eq__(self, other):
        if not isinstance(other, NatTransf):
            return NotImplemented
        return self.src == other.src and self.dst == other.dst and self.components == other.components

    __hash__ = None


def validate_nat(alpha):
    F, G = alpha.src, alpha.dst
    A, B = F.src, F.dst
    issues = []
    for x in A.objects:
        a = alpha.components.get(x)
        if a not in B.arrows or B.arrows[a] != (F.objects[x], G.objects[x]):
            issues.append(Issue("component", x))
    if issues:
        return issues
    for f in A.arrow_ids:
        s, d = A.arrows[f]
        if B.comp(alpha[d], F.arrows[f]) != B.comp(G.arrows[f], alpha[s]):
            issues.append(Issue("naturality", f))
    return issues


def is_natural_iso(alpha):
    return not validate_nat(alpha) and all(alpha.dst.dst.is_iso(a) for a in alpha.components.values())


def invert_nat(alpha):
    B = alpha.src.dst
    return NatTransf(alpha.dst, alpha.src, {x: B.inverse(a) for x, a in alpha.components.items()})


def identity_nat(F):
    return NatTransf(F, F, {x: F.dst.identity[F.objects[x]] for x in F.src.objects})


def _arrow_tuple(name, *parts):
    return (name,) + parts


def slice_category(c, x):
    """c/x: objects are arrows into x; arrow (h, f, g): [f] → [g] with g∘h = f."""
    if x not in c.identity:
        raise KeyError(f"unknown object {x!r}")
    objs = c.into(x)
    arrows = {}
    for f in objs:
        for g in objs:
            for h in c.hom(c.src(f), c.src(g)):
                if c.comp(g, h) == f:
                    arrows[(h, f, g)] = (f, g)
    identity = {f: (c.identity[c.src(f)], f, f) for f in objs}
    cat = FiniteCategory.build(objs, arrows, identity,
                               lambda k, h: (c.comp(k[0], h[0]), h[1], k[2]))
    proj = Functor(cat, c, {f: c.src(f) for f in objs}, {a: a[0] for a in arrows})
    return cat, proj


def comma(F, G):
    """(F ↓ G) with projections and the canonical transformation F∘P ⇒ G∘Q."""
    if F.dst != G.dst:
        raise ValueError("comma: codomain mismatch")
    A, B, C = F.src, G.src, F.dst
    objs = [(x, y, f) for x in A.objects for y in B.objects
            for f in C.hom(F.objects[x], G.objects[y])]
    arrows = {}
    for (x, y, f) in objs:
        for (x2, y2, f2) in objs:
            for a in A.hom(x, x2):
                for b in B.hom(y, y2):
                    if C.comp(G.arrows[b], f) == C.comp(f2, F.arrows[a]):
                        arrows[(a, b, f, f2)] = ((x, y, f), (x2, y2, f2))
    identity = {o: (A.identity[o[0]], B.identity[o[1]], o[2], o[2]) for o in objs}
    cat = FiniteCategory.build(objs, arrows, identity,
                               lambda k, h: (A.comp(k[0], h[0]), B.comp(k[1], h[1]), h[2], k[3]))
    P = Functor(cat, A, {o: o[0] for o in objs}, {a: a[0] for a in arrows})
    Q = Functor(cat, B, {o: o[1] for o in objs}, {a: a[1] for a in arrows})
    phi = NatTransf(compose_functors(F, P), compose_functors(G, Q), {o: o[2] for o in objs})
    return cat, P, Q, phi


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if order_key(rb) < order_key(ra):
            ra, rb = rb, ra
        self.parent[rb] = ra

    def classes(self):
        groups = {}
        for x in self.parent:
            groups.setdefault(self.find(x), []).append(x)
        return sorted((ordered(g) for g in groups.values()), key=lambda g: order_key(g[0]))



def connected_components(c):
    uf = UnionFind(c.objects)
    for f in c.arrow_ids:
        uf.union(*c.arrows[f])
    return uf.classes()


def is_full_faithful(F):
    A, B = F.src, F.dst
    for x in A.objects:
        for y in A.objects:
            image = [F.arrows[f] for f in A.hom(x, y)]
            if len(set(image)) != len(image):
                return Verdict(False, ("not faithful", x, y))
            if len(image) != len(B.hom(F.objects[x], F.objects[y])):
                return Verdict(False, ("not full", x, y))
    return Verdict(True)


def is_equivalence(F):
    ff = is_full_faithful(F)
    if not ff:
        return ff
    A, B = F.src, F.dst
    assignment = {}
    for d in B.objects:
        found = None
        for x in A.objects:
            isos = B.isos(F.objects[x], d)
            if isos:
                found = (x, isos[0])
                break
        if found is None:
            return Verdict(False, ("not essentially surjective", d))
        assignment[d] = found
    return Verdict(True, assignment)


def quasi_inverse(F):
    """Quasi-inverse G with the counit F∘G ≅ 1 as a NatTransf."""
    v = is_equivalence(F)
    if not v:
        raise ValueError(f"not an equivalence: {v.witness}")
    A, B = F.src, F.dst
    assign = v.witness
    arrows = {}
    for g in B.arrow_ids:
        s, d = B.arrows[g]
        (xs, es), (xd, ed) = assign[s], assign[d]
        target = B.comp(B.inverse(ed), g, es)
        arrows[g] = next(k for k in A.hom(xs, xd) if F.arrows[k] == target)
    G = Functor(B, A, {d: assign[d][0] for d in B.objects}, arrows)
    counit = NatTransf(compose_functors(F, G), identity_functor(B),
                       {d: assign[d][1] for d in B.objects})
    return G, counit


def enumerate_functors(A, B, object_map=None, limit=None):
    """All functors A → B, optionally with a fixed partial object map.

    Objects are assigned one at a time; every non-identity arrow is
    assigned as soon as both endpoints are, and composites are checked
    as soon as all three arrows are known.
    """
    fixed = dict(object_map or {})
    objs = list(A.objects)
    pending = {}
    seen = set()
    for x in objs:
        seen.add(x)
        pending[x] = [f for f in A.arrow_ids if not A.is_identity(f)
                      and x in A.arrows[f] and set(A.arrows[f]) <= seen
                      and not (set(A.arrows[f]) <= seen - {x})]
    plan = []
    for x in objs:
        plan.append(("obj", x))
        plan.extend(("arr", f) for f in pending[x])
    omap, amap = {}, {}
    count = [0]

    def consistent(f):
        for (k, h), kh in _pairs_with(A, f):
            if k in amap and h in amap and kh in amap:
                if B.comp(amap[k], amap[h]) != amap[kh]:
                    return False
        return True

    def walk(i):
        if i == len(plan):
            yield Functor(A, B, dict(omap), dict(amap))
            return
        kind, item = plan[i]
        if kind == "obj":
            choices = [fixed[item]] if item in fixed else B.objects
            for y in choices:
                omap[item] = y
                amap[A.identity[item]] = B.identity[y]
                if consistent(A.identity[item]):
                    yield from walk(i + 1)
                del amap[A.identity[item]]
                del omap[item]
        else:
            s, d = A.arrows[item]
            for g in B.hom(omap[s], omap[d]):
                amap[item] = g
                if consistent(item):
                    yield from walk(i + 1)
                del amap[item]

    for F in walk(0):
        yield F
        count[0] += 1
        if limit is not None and count[0] >= limit:
            return


def _pairs_with(A, f):
    cache = A.cache.setdefault("pairs_with", {})
    if f not in cache:
        cache[f] = [((k, h), kh) for (k, h), kh in A.table.items() if f in (k, h, kh)]
    return cache[f]


def skeleton(c):
    """Full subcategory on the least representative of each iso class."""
    reps = []
    for x in c.objects:
        if not any(c.isos(r, x) for r in reps):
            reps.append(x)
    return full_subcategory(c, reps)


def find_isomorphism(A, B):
    """An isomorphism of categories A → B, or None."""
    if len(A.objects) != len(B.objects) or len(A.arrows) != len(B.arrows):
        return None

    def profile(c, x):
        return (len(c.hom(x, x)), len(c.into(x)), len(c.out_of(x)))

    objs = list(A.objects)
    cands = {x: [y for y in B.objects if profile(B, y) == profile(A, x)] for x in objs}
    omap = {}
    used = set()

    def assign_objects(i):
        if i == len(objs):
            yield dict(omap)
            return
        x = objs[i]
        for y in cands[x]:
            if y in used:
                continue
            if any(len(A.hom(x, z)) != len(B.hom(y, omap[z])) or
                   len(A.hom(z, x)) != len(B.hom(omap[z], y)) for z in omap):
                continue
            omap[x] = y
            used.add(y)
            yield from assign_objects(i + 1)
            used.discard(y)
            del omap[x]

    for om in assign_objects(0):
        for F in enumerate_functors(A, B, om):
            if len(set(F.arrows.values())) == len(F.arrows):
                return F
    return None


def equivalent(A, B):
    return find_isomorphism(skeleton(A), skeleton(B)) is not None


def category_from_json(data):
    objects = list(data["objects"])
    arrows = {a["id"]: (a["src"], a["dst"]) for a in data["arrows"]}
    identity = dict(data["identities"])
    for x in objects:
        arrows.setdefault(identity[x], (x, x))
    table = {(g, f): gf for g, f, gf in data.get("compose", [])}
    for f, (s, d) in arrows.items():
        if d in identity:
            table.setdefault((identity[d], f), f)
        if s in identity:
            table.setdefault((f, identity[s]), f)
    return FiniteCategory(objects, arrows, identity, table, data.get("name"))


def category_to_json(c):
    return {
        "objects": [label(x) for x in c.objects],
        "arrows": [{"id": label(f), "src": label(c.src(f)), "dst": label(c.dst(f))}
                   for f in c.arrow_ids],
        "identities": {label(x): label(c.identity[x]) for x in c.objects},
        "compose": [[label(g), label(f), label(h)]
                    for (g, f), h in sorted(c.table.items(), key=lambda kv: order_key(kv[0]))],
    }


def functor_from_json(data, src, dst):
    return Functor(src, dst, data["objects"], data["arrows"])


def functor_to_json(F):
    return {"objects": {label(x): label(y) for x, y in sorted(F.objects.items(), key=lambda kv: order_key(kv[0]))},
            "arrows": {label(f): label(g) for f, g in sorted(F.arrows.items(), key=lambda kv: order_key(kv[0]))}}


def cones(c, diagram, apex):
    """All cones over ``diagram`` (a Functor into c) with the given apex."""
    I = diagram.src
    objs = list(I.objects)
    legs = {}

    def walk(i):
        if i == len(objs):
            yield dict(legs)
            return
        j = objs[i]
        for a in c.hom(apex, diagram.obj(j)):
            legs[j] = a
            ok = True
            for u in I.arrow_ids:
                s, d = I.arrows[u]
                if s in legs and d in legs and c.comp(diagram.arr(u), legs[s]) != legs[d]:
                    ok = False
                    break
            if ok:
                yield from walk(i + 1)
            del legs[j]

    yield from walk(0)


def is_limit_cone(c, diagram, apex, legs):
    """Every cone factors uniquely through (apex, legs)."""
    objs = diagram.src.objects
    for u in diagram.src.arrow_ids:
        s, d = diagram.src.arrows[u]
        if c.comp(diagram.arr(u), legs[s]) != legs[d]:
            return False
    for x in c.objects:
        for cone in cones(c, diagram, x):
            hits = [k for k in c.hom(x, apex)
                    if all(c.comp(legs[j], k) == cone[j] for j in objs)]
            if len(hits) != 1:
                return False
    return True


def find_limit(c, diagram):
    """The least limit cone (apex, legs) of a diagram, or None."""
    for x in c.objects:
        for cone in cones(c, diagram, x):
            if is_limit_cone(c, diagram, x, cone):
                return x, cone
    return None
