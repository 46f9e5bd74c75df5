"""The ``finsite`` command line.

Reports go to stdout as JSON, a one-line summary to stderr.  Exit codes:
0 holds, 1 fails, 2 undecided (an enumeration bound was hit), 3 input error.
"""
import argparse
import json
import os
import sys
import time

from .coverage import (GrothendieckTopology, generate, is_separated, is_sheaf, is_subcanonical,
                       sheafify, topology_from_json, topology_to_json, validate_topology,
                       enumerate_topologies)
from .etalespace import (SpaceError, check_dagger, check_joint_surjectivity, is_local_homeo,
                         mv_distance_identity, mv_from_json, mv_spectrum, ring_from_json,
                         sections_presheaf, sigma_topology, tau_topology, validate_space,
                         zariski_spectrum, global_section_ring_map, FiniteSpace)
from .fincat import (BoundExceeded, Verdict, category_from_json, category_to_json, functor_from_json,
                     is_equivalence,
                     label, ordered, validate_category, validate_functor)
from .fractions import (FractionsError, comparison_functor, lax_colimit, oplax_colimit,
                        pseudo_colimit, slice_weight, weighted_ps_colimit)
from .indexed import (PreconditionError, grothendieck, indexed_from_json, validate_indexed)
from .localefr import (FiniteFrame, FrameError, sheafify_via_adjunction,
                       sheafify_via_locale, validate_frame)
from .presheaf import (find_iso, is_iso, presheaf_from_json, presheaf_to_json, validate_presheaf,
                       discrete_indexed)
from .sitemaps import (giraud_topology, is_comorphism, is_continuous, is_cover_preserving,
                       is_morphism_of_sites, is_prestack, is_stack, min_comorphism_topology,
                       orthogonal_generation)

EXIT = {"holds": 0, "fails": 1, "undecided": 2, "error": 3}


class InputError(Exception):
    pass


def jsonable(x):
    """Plain JSON form of identifiers, verdict witnesses and nested containers."""
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    if isinstance(x, Verdict):
        return {"holds": x.holds, "witness": jsonable(x.witness)}
    if isinstance(x, dict):
        return {label(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (frozenset, set)):
        return [jsonable(y) for y in ordered(x)]
    if isinstance(x, tuple) and hasattr(x, "_fields"):
        return {k: jsonable(v) for k, v in zip(x._fields, x)}
    if isinstance(x, (list, tuple)):
        return [jsonable(y) for y in x]
    return label(x)


# fixture loading


class Loader:
    """Reads fixture files; string references resolve relative to the referring file."""

    def __init__(self):
        self.cache = {}

    def read(self, path, here=None):
        if here and not os.path.isabs(path):
            path = os.path.join(os.path.dirname(here), path)
        path = os.path.normpath(path)
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, ValueError) as e:
            raise InputError(f"{path}: {e}")
        return path, data

    def resolve(self, ref, here):
        if isinstance(ref, str):
            path, data = self.read(ref, here)
            return data, path
        return ref, here

    def kind(self, data):
        if "kind" in data:
            return data["kind"]
        for key, kind in (("src", "functor"), ("indexed", "relsite"), ("objects", "category"),
                          ("coverage", "site"), ("fibres", "indexed"),
                          ("points", "space"), ("oplus", "mv"), ("mul", "ring"),
                          ("leq", "frame"), ("values", "presheaf")):
            if key in data:
                return kind
        raise InputError("cannot tell the fixture kind")

    def category(self, ref, here):
        data, here = self.resolve(ref, here)
        kind = self.kind(data)
        if kind == "site":
            return self.site(data, here)[0]
        if kind != "category":
            raise InputError(f"expected a category, got {kind}")
        key = json.dumps(data, sort_keys=True)
        if key not in self.cache:
            c = category_from_json(data)
            issues = validate_category(c)
            if issues:
                raise InputError(f"invalid category: {issues[0]}")
            self.cache[key] = c
        return self.cache[key]

    def site(self, ref, here):
        data, here = self.resolve(ref, here)
        c = self.category(data["category"], here)
        J = topology_from_json(data, c)
        issues = validate_topology(J)
        if issues:
            raise InputError(f"invalid topology: {issues[0]}")
        return c, J

    def presheaf(self, ref, here):
        data, here = self.resolve(ref, here)
        c = self.category(data["base"], here)
        P = presheaf_from_json(data, c)
        issues = validate_presheaf(P)
        if issues:
            raise InputError(f"invalid presheaf: {issues[0]}")
        return P

    def indexed(self, ref, here):
        data, here = self.resolve(ref, here)
        c = self.category(data["base"], here)
        D = indexed_from_json(data, c)
        issues = validate_indexed(D)
        if issues:
            raise InputError(f"invalid indexed category: {issues[0]}")
        return D

    def functor(self, ref, here):
        """Returns (F, source site, target site); the ends are site references."""
        data, here = self.resolve(ref, here)
        src, dst = self.site(data["src"], here), self.site(data["dst"], here)
        F = functor_from_json(data, src[0], dst[0])
        issues = validate_functor(F)
        if issues:
            raise InputError(f"invalid functor: {issues[0]}")
        return F, src[1], dst[1]

    def relsite(self, ref, here):
        """(fibration, J, literal Jp) for a total category given by labels."""
        data, here = self.resolve(ref, here)
        D = self.indexed(data["indexed"], here)
        c, J = self.site(data["site"], here)
        P = grothendieck(D)
        if P.base != c:
            raise InputError("indexed base and site category differ")
        total = P.total
        objs = {label(x): x for x in total.objects}
        arrs = {label(f): f for f in total.arrow_ids}
        cov = {}
        try:
            for E, fams in data["coverage"].items():
                E = objs[E]
                cov[E] = {generate(total, E, [arrs[f] for f in fam]) for fam in fams}
        except KeyError as e:
            raise InputError(f"unknown label {e}")
        for E in total.objects:
            cov.setdefault(E, set()).add(frozenset(total.into(E)))
        return P, J, GrothendieckTopology(total, cov)

    def validate(self, path):
        """Per-file verdict for ``validate``: (verdict, detail)."""
        path, data = self.read(path)
        kind = self.kind(data)
        try:
            if kind == "category":
                issues = validate_category(category_from_json(data))
            elif kind == "site":
                c = self.category(data["category"], path)
                issues = validate_topology(topology_from_json(data, c))
            elif kind == "presheaf":
                issues = validate_presheaf(presheaf_from_json(data, self.category(data["base"], path)))
            elif kind == "indexed":
                issues = validate_indexed(indexed_from_json(data, self.category(data["base"], path)))
            elif kind == "functor":
                src, dst = self.category(data["src"], path), self.category(data["dst"], path)
                issues = validate_functor(functor_from_json(data, src, dst))
            elif kind == "frame":
                issues = validate_frame(FiniteFrame(data["elements"], [tuple(p) for p in data.get("leq", [])]))
            elif kind == "space":
                issues = validate_space(FiniteSpace(data["points"], data["opens"]))
            elif kind == "ring":
                issues = ring_from_json(data) and []
            elif kind == "mv":
                issues = mv_from_json(data) and []
            elif kind == "relsite":
                self.relsite(data, path)
                issues = []
            else:
                raise InputError(f"unknown kind {kind}")
        except (FrameError, SpaceError) as e:
            issues = [str(e)]
        except (KeyError, TypeError, ValueError) as e:
            issues = [f"malformed: {e}"]
        return kind, issues


# commands


def _verdict(v):
    return "holds" if v else "fails"


def _fibration_arg(args, L):
    if args.indexed:
        return L.indexed(args.indexed, None)
    if args.presheaf:
        return discrete_indexed(L.presheaf(args.presheaf, None))
    raise InputError("give --indexed or --presheaf")


def cmd_validate(args, L):
    files = []
    worst = "holds"
    for path in args.paths:
        try:
            kind, issues = L.validate(path)
        except InputError as e:
            files.append({"path": path, "verdict": "error", "issues": [str(e)]})
            worst = "error"
            continue
        verdict = "fails" if issues else "holds"
        if issues and worst == "holds":
            worst = "fails"
        files.append({"path": path, "kind": kind, "verdict": verdict, "issues": jsonable(issues)})
    return worst, {"files": files}


def cmd_sheafify(args, L):
    c, J = L.site(args.site, None)
    P = L.presheaf(args.presheaf, None)
    if P.base != c:
        raise InputError("presheaf and site have different base categories")
    methods = {"plus": sheafify, "locale": sheafify_via_locale, "adjunction": sheafify_via_adjunction}
    if args.method != "plus" or args.cross_check:
        if not c.is_posetal():
            raise InputError(f"method {args.method} needs a preorder site")
    Q, unit = methods[args.method](P, J)
    out = {"sheaf": presheaf_to_json(Q), "unit_iso": is_iso(unit), "is_sheaf": bool(is_sheaf(Q, J))}
    verdict = "holds"
    if args.cross_check:
        agree = {}
        for name, fn in methods.items():
            if name == args.method:
                continue
            Q2, u2 = fn(P, J)
            agree[name] = find_iso(Q, Q2, (unit, u2)) is not None
        out["cross_check"] = agree
        verdict = "holds" if all(agree.values()) else "fails"
    return verdict, out


def cmd_check(args, L):
    what = args.what
    if what in ("sheaf", "separated"):
        c, J = L.site(args.site, None)
        P = L.presheaf(args.presheaf, None)
        v = (is_sheaf if what == "sheaf" else is_separated)(P, J)
    elif what == "subcanonical":
        c, J = L.site(args.site, None)
        v = is_subcanonical(J)
    elif what in ("comorphism", "continuous", "morphism", "cover-preserving"):
        if not args.functor:
            raise InputError("--functor is required")
        F, K, J = L.functor(args.functor, None)
        if args.site:
            c, J = L.site(args.site, None)
            if c != F.dst:
                raise InputError("--site is not on the functor's target category")
        fn = {"comorphism": is_comorphism, "continuous": is_continuous,
              "morphism": is_morphism_of_sites, "cover-preserving": is_cover_preserving}[what]
        v = fn(F, K, J)
    elif what in ("stack", "prestack"):
        c, J = L.site(args.site, None)
        D = _fibration_arg(args, L)
        v = is_stack(D, J) if what == "stack" else is_prestack(D, J)
    elif what == "orthogonal":
        if not args.relsite:
            raise InputError("--relsite is required")
        P, J, Jp = L.relsite(args.relsite, None)
        _, v = orthogonal_generation(P, J, Jp)
    else:
        raise InputError(f"unknown check {what}")
    return _verdict(v), {"what": what, "witness": jsonable(v.witness)}


def cmd_giraud(args, L):
    c, J = L.site(args.site, None)
    D = _fibration_arg(args, L)
    P = grothendieck(D)
    G = giraud_topology(P, J)
    M = min_comorphism_topology(P.proj, J)
    return _verdict(G == M), {"total": category_to_json(P.total), "topology": topology_to_json(G),
                              "equals_min_comorphism": G == M}


def cmd_colimit(args, L):
    D = L.indexed(args.indexed, None)
    out = {"kind": args.kind}
    if args.kind == "lax":
        total, legs, cells = lax_colimit(D)
        out["category"] = category_to_json(total)
        out["legs"] = {label(x): jsonable(F.objects) for x, F in legs.items()}
        return "holds", out
    if args.kind == "oplax":
        total, legs, cells = oplax_colimit(D)
        out["category"] = category_to_json(total)
        out["legs"] = {label(x): jsonable(F.objects) for x, F in legs.items()}
        return "holds", out
    try:
        if args.kind == "pseudo":
            loc = pseudo_colimit(D)
        else:
            R = L.indexed(args.weight, None) if args.weight else slice_weight(D.base)
            loc = weighted_ps_colimit(D, R)
    except FractionsError as e:
        out["refused"] = str(e)
        out["witness"] = jsonable(e.witness)
        return "fails", out
    out["category"] = category_to_json(loc.category)
    out["functor"] = jsonable(loc.functor.objects)
    if args.kind == "weighted" and not args.weight:
        v = is_equivalence(comparison_functor(D, loc))
        out["comparison_equivalence"] = bool(v)
        return _verdict(v), out
    return "holds", out


def cmd_spectrum(args, L):
    _, data = L.read(args.input)
    if args.kind == "ring":
        R = ring_from_json(data)
        spec = zariski_spectrum(R)
        checks = {"ring_iso": global_section_ring_map(spec, R)[1]}
    else:
        A = mv_from_json(data)
        spec = mv_spectrum(A)
        checks = {"distance_identity": mv_distance_identity(A, spec) is None}
    S = spec.sections
    checks.update({"dagger": check_dagger(S), "jointly_surjective": check_joint_surjectivity(S),
                   "tau_equals_sigma": tau_topology(S) == sigma_topology(S),
                   "local_homeomorphism": is_local_homeo(spec.bundle)})
    Q = sections_presheaf(spec.bundle)
    sheaf = presheaf_to_json(Q)
    out = {"points": [label(p) for p in spec.space.points],
           "stalk_sizes": [len(set(spec.stalks[p].elements if hasattr(spec.stalks[p], "elements")
                                    else spec.stalks[p].values())) for p in spec.space.points],
           "checks": checks, "sheaf": sheaf}
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(sheaf, fh, indent=2)
    return _verdict(all(checks.values())), out


def cmd_compare_topologies(args, L):
    P, J, Jp = L.relsite(args.relsite, None)
    generated, v = orthogonal_generation(P, J, Jp)
    out = {"equal": bool(v), "gaps": jsonable(v.witness), "generated": topology_to_json(generated)}
    try:
        tops = enumerate_topologies(P.total)
        out["topologies_on_total"] = len(tops)
        out["literal_is_topology"] = Jp in tops
    except BoundExceeded as e:
        out["topologies_on_total"] = None
        out["bound"] = str(e)
    return _verdict(v), out


COMMANDS = {"validate": cmd_validate, "sheafify": cmd_sheafify, "check": cmd_check,
            "giraud": cmd_giraud, "colimit": cmd_colimit, "spectrum": cmd_spectrum,
            "compare-topologies": cmd_compare_topologies}


def build_parser():
    ap = argparse.ArgumentParser(prog="finsite", description="Finite sites, sheaves, stacks and spectra.")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("validate", help="validate fixture files")
    p.add_argument("paths", nargs="+")
    p = sub.add_parser("sheafify", help="sheafify a presheaf on a site")
    p.add_argument("--site", required=True)
    p.add_argument("--presheaf", required=True)
    p.add_argument("--method", choices=["plus", "locale", "adjunction"], default="plus")
    p.add_argument("--cross-check", action="store_true")
    p = sub.add_parser("check", help="decide a property of a site, functor or fibration")
    p.add_argument("--what", required=True,
                   choices=["sheaf", "separated", "subcanonical", "comorphism", "continuous",
                            "morphism", "cover-preserving", "prestack", "stack", "orthogonal"])
    p.add_argument("--site")
    p.add_argument("--functor")
    p.add_argument("--presheaf")
    p.add_argument("--indexed")
    p.add_argument("--relsite")
    p = sub.add_parser("giraud", help="Giraud topology of a fibration")
    p.add_argument("--site", required=True)
    p.add_argument("--indexed")
    p.add_argument("--presheaf")
    p = sub.add_parser("colimit", help="lax, oplax, pseudo or weighted colimit of an indexed category")
    p.add_argument("--kind", choices=["lax", "oplax", "pseudo", "weighted"], default="lax")
    p.add_argument("--indexed", required=True)
    p.add_argument("--weight", "--weightR", dest="weight")
    p = sub.add_parser("spectrum", help="structure sheaf of a finite ring or MV-algebra")
    p.add_argument("--kind", choices=["ring", "mv"], required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p = sub.add_parser("compare-topologies", help="orthogonal generation of a relative site")
    p.add_argument("--relsite", required=True)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    L = Loader()
    try:
        verdict, body = COMMANDS[args.command](args, L)
    except InputError as e:
        verdict, body = "error", {"error": str(e)}
    except BoundExceeded as e:
        verdict, body = "undecided", {"bound": str(e)}
    except (PreconditionError, FrameError, SpaceError) as e:
        verdict, body = "error", {"error": str(e), "witness": jsonable(getattr(e, "witness", None))}
    except (KeyError, TypeError, ValueError) as e:
        verdict, body = "error", {"error": f"malformed input: {e}"}
    report = {"command": args.command, "verdict": verdict}
    report.update(body)
    json.dump(report, sys.stdout, indent=2, ensure_ascii=False)
    sys.stdout.write("\n")
    sys.stderr.write(f"finsite {args.command}: {verdict} ({time.perf_counter() - start:.2f}s)\n")
    return EXIT[verdict]


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
