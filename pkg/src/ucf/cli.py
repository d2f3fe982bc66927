"""Command-line front end: `ucf <noun> <verb> [file] [flags]`.

Exit codes: 0 the checked property holds, 1 it fails, 2 usage or parse
error, 3 a resource cap was exceeded.  `--json` switches to a stable-ordered
JSON document; every rational is rendered exactly as "p/q", and any family
in a payload is printed in the family text format, which re-parses to an
identical value.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from ucf import catalog, conjecture, density, fileio, pdensity, wojcik
from ucf.core import ElementSet, SetFamily
from ucf.errors import CapExceededError, ParseError, UcfError, ValidationError
from ucf.lattice import LatticeView, order_of_family

EXIT_CODES = {"holds": 0, "fails": 1, "error": 2, "cap_exceeded": 3}


@dataclass
class CommandResult:
    status: str
    payload: dict
    human_text: str


def _rat(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return x


def _set_text(s: ElementSet) -> str:
    labels = s.labels()
    return " ".join(labels) if labels else fileio.EMPTY_TOKEN


def _family_text(f: SetFamily) -> str:
    return fileio.format_family(f)


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}")


def _load_family(path: str) -> SetFamily:
    return fileio.parse_family(_read(path))


def _elements_arg(f: SetFamily, text: str) -> ElementSet:
    labels = [t for t in text.replace(",", " ").split() if t]
    return f.universe.subset(*labels)


def _load_poset(spec: str):
    if spec.startswith("chain:"):
        return catalog.chain_poset(int(spec.split(":", 1)[1]))
    if spec.startswith("antichain:"):
        return catalog.antichain_poset(int(spec.split(":", 1)[1]))
    if spec.startswith("[") and spec.endswith("]"):
        return catalog.chain_poset(int(spec[1:-1]))
    return fileio.parse_poset(_read(spec))


def _load_lattice(path: str) -> tuple[LatticeView, SetFamily]:
    f = _load_family(path)
    if not f.is_union_closed:
        raise ValidationError("lattice input must be a union-closed family")
    if not f.contains_empty:
        f = SetFamily(f.universe, f.masks + (0,))
    return order_of_family(f), f


def _find_member(f: SetFamily, lv: LatticeView, text: str) -> int:
    target = _elements_arg(f, text).bits
    for i, m in enumerate(f.masks):
        if m == target:
            return i
    raise ValidationError(f"{text!r} is not a member of the family")


# ---------------------------------------------------------------- fam


def _cmd_fam(args) -> CommandResult:
    f = _load_family(args.file)
    if args.verb == "stats":
        from ucf.core import graph_of, simple_graph

        gen_family = SetFamily(f.universe, f.generator_masks)
        payload = {
            "members": len(f),
            "universe": list(f.universe.names),
            "union_closed": f.is_union_closed,
            "intersection_closed": f.is_intersection_closed,
            "contains_empty": f.contains_empty,
            "total_size": wojcik.total_size(f),
            "generators": [_set_text(ElementSet(f.universe, m))
                           for m in f.generator_masks],
            "graph_generated": graph_of(gen_family),
            "simple_graph_generated": simple_graph(gen_family),
        }
        text = (f"{len(f)} members over {f.universe.width} elements; "
                f"union-closed: {f.is_union_closed}")
        return CommandResult("holds", payload, text)
    if args.verb == "check-closed":
        ok = f.is_union_closed
        payload = {"union_closed": ok,
                   "intersection_closed": f.is_intersection_closed}
        return CommandResult("holds" if ok else "fails", payload,
                             f"union-closed: {ok}")
    if args.verb == "irreducibles":
        from ucf.lattice import join_irreducibles

        mode = "generators" if args.generators else "irreducibles"
        out = join_irreducibles(f, mode)
        payload = {mode: [_set_text(s) for s in out]}
        return CommandResult("holds", payload,
                             f"{mode}: {', '.join(payload[mode]) or '(none)'}")
    if args.verb == "transpose":
        from ucf.core import transpose

        t = transpose(f)
        rows = {f.universe.label(i): sorted(r.labels())
                for i, r in enumerate(t.rows)}
        payload = {
            "rows": rows,
            "simple": t.is_simple,
            "primitive": t.is_primitive,
        }
        return CommandResult("holds", payload,
                             f"simple: {t.is_simple}, primitive: {t.is_primitive}")
    raise ValidationError(f"unknown fam verb {args.verb!r}")


# ------------------------------------------------------------- density


def _cmd_density(args) -> CommandResult:
    f = _load_family(args.file)
    if args.verb == "closure":
        x = _elements_arg(f, args.x)
        closed, isolated = density.closure(f, x)
        payload = {"closure": _set_text(closed), "isolated": _set_text(isolated)}
        return CommandResult("holds", payload,
                             f"closure {payload['closure']}; isolated {payload['isolated']}")
    u = _elements_arg(f, args.u)
    if args.verb == "esets":
        if args.x is not None:
            xs = [_elements_arg(f, args.x)]
        else:
            away = sorted({m & ~u.bits for m in f.masks})
            xs = [ElementSet(f.universe, m) for m in away]
        listing = {}
        for x in xs:
            e = density.guaranteed_completions(f, u, x, args.method)
            listing[_set_text(x)] = [_set_text(s) for s in e]
        payload = {"u": _set_text(u), "esets": listing}
        lines = [f"E({k}) = {{{'; '.join(v) or ''}}}" for k, v in listing.items()]
        return CommandResult("holds", payload, "\n".join(lines))
    if args.verb == "mu":
        if args.ext:
            h = fileio.parse_family(_read(args.ext))
            combined = f.universe.extended(h.universe.names)
            f = f.embed(combined)
            h = h.embed(combined)
            u = combined.subset(*u.labels())
        else:
            h = SetFamily(f.universe, [0])
        ext = density.ExtensionSpec.create(f, h)
        rep = density.completion_average(f, ext, u)
        payload = {
            "mu": _rat(rep.mu),
            "rho": _rat(rep.rho),
            "one_over_rho": "unbounded" if rep.one_over_rho is None
                            else _rat(rep.one_over_rho),
            "e_sizes": {_set_text(k): v for k, v in sorted(
                rep.e_sizes.items(), key=lambda kv: kv[0].bits)},
        }
        return CommandResult("holds", payload,
                             f"mu = {payload['mu']} (~{float(rep.mu):.4f}); "
                             f"rho = {payload['rho']}")
    if args.verb == "min-mu":
        if args.fast:
            under = density.undercut_below_two(f, u, args.cap)
            payload = {"below_two_possible": under}
            return CommandResult("holds", payload,
                                 f"an extension below 2 exists: {under}")
        rep = density.min_completion_average(f, u, args.cap)
        payload = {"min_mu": _rat(rep.value),
                   "witness_filter": _family_text(rep.witness)}
        return CommandResult("holds", payload,
                             f"min mu = {payload['min_mu']} "
                             f"(~{float(rep.value):.4f}); witness filter:\n"
                             + payload["witness_filter"].rstrip())
    if args.verb == "bound":
        value = density.kleitman_bound(f, u, brute=args.brute)
        payload = {"bound": _rat(value), "brute": args.brute}
        return CommandResult("holds", payload,
                             f"bound = {payload['bound']} (~{float(value):.4f})")
    if args.verb == "local":
        gprime = "auto" if args.gprime is None else _load_family(args.gprime)
        cert = density.local_degree_certificate(f, u, gprime)
        payload = {
            "min_degree_hypothesis": cert.min_degree_hypothesis,
            "subgraph_hypothesis": cert.subgraph_hypothesis,
            "guaranteed": cert.guaranteed,
            "rho": _rat(cert.rho),
        }
        status = "holds" if cert.guaranteed else "fails"
        return CommandResult(status, payload,
                             f"guaranteed: {cert.guaranteed}; rho = {payload['rho']}")
    raise ValidationError(f"unknown density verb {args.verb!r}")


# --------------------------------------------------------------- check


def _cmd_check(args) -> CommandResult:
    f = _load_family(args.file)
    if args.verb == "conjecture":
        rep = conjecture.find_witness(f, args.form)
        payload = {
            "form": rep.kind,
            "witness": _set_text(rep.witness),
            "degree": rep.degree,
            "threshold": _rat(rep.threshold),
            "satisfied": rep.satisfied,
        }
        status = "holds" if rep.satisfied else "fails"
        return CommandResult(status, payload,
                             f"witness {payload['witness']} with degree {rep.degree} "
                             f"against {payload['threshold']}: {rep.satisfied}")
    if args.verb == "sufficient":
        g = f
        transformed = False
        if not f.is_intersection_closed and f.is_union_closed:
            g = conjecture.complement_family(f)
            transformed = True
        rep = conjecture.sufficient_conditions(g)
        payload = {
            "complemented_first": transformed,
            "cofull_member": rep.cofull_member,
            "small_average": rep.small_average,
            "applies": rep.applies,
            "average_size": _rat(rep.average_size),
            "ground_half": _rat(rep.ground_half),
            "witness": None if rep.witness is None else _set_text(rep.witness),
            "witness_degree": rep.witness_degree,
        }
        status = "holds" if rep.applies else "fails"
        return CommandResult(status, payload,
                             f"conditions apply: {rep.applies}; witness {payload['witness']}")
    if args.verb == "equivalences":
        rep = conjecture.check_equivalences(f)
        payload = {
            "element_form": rep.element_form,
            "complement_form": rep.complement_form,
            "semilattice_form": rep.semilattice_form,
            "generator_form": rep.generator_form,
            "agree": rep.agree,
        }
        status = "holds" if rep.agree else "fails"
        return CommandResult(status, payload, f"all four forms agree: {rep.agree}")
    raise ValidationError(f"unknown check verb {args.verb!r}")


# --------------------------------------------------------------- cover


def _cmd_cover(args) -> CommandResult:
    f = _load_family(args.file)
    if args.verb == "greedy":
        if not f.contains_empty:
            f = SetFamily(f.universe, f.masks + (0,))
        cover = conjecture.greedy_cover(f)
        bound = len(f).bit_length()
        payload = {"cover": list(cover), "size": len(cover), "bound": bound}
        return CommandResult("holds", payload,
                             f"cover {{{' '.join(cover)}}} of size {len(cover)} <= {bound}")
    if args.verb == "minimal":
        rep = conjecture.minimal_cover_report(f)
        payload = {
            "covers": [_set_text(y) for y in rep.covers],
            "all_boolean": rep.all_boolean,
            "max_size": rep.max_size,
            "within_log_bound": rep.within_log_bound,
        }
        ok = rep.all_boolean and rep.within_log_bound
        return CommandResult("holds" if ok else "fails", payload,
                             f"{len(rep.covers)} minimal covers; Boolean restriction: "
                             f"{rep.all_boolean}")
    raise ValidationError(f"unknown cover verb {args.verb!r}")


# ---------------------------------------------------------------- scan


def _scan_payload(rep: dict) -> dict:
    payload = {}
    for key, value in rep.items():
        if key == "violation_index":
            continue
        payload[key] = _rat(value) if isinstance(value, Fraction) else value
    return payload


def _cmd_scan(args) -> CommandResult:
    if args.verb == "graphs":
        rep = conjecture.scan_graph_families(
            args.max_vertices, include_singletons=args.singletons,
            threads=args.threads)
    elif args.verb == "families":
        rep = conjecture.scan_small_families(args.max_universe,
                                             threads=args.threads)
    else:
        raise ValidationError(f"unknown scan verb {args.verb!r}")
    payload = _scan_payload(rep)
    ok = rep.get("witness_family") is None
    text = (f"scanned {rep['scanned']}, analyzed {rep['analyzed']}, "
            f"passed {rep['passed']}")
    if not ok:
        text += "\nviolating family:\n" + rep["witness_family"]
    return CommandResult("holds" if ok else "fails", payload, text)


# ------------------------------------------------------------- pdensity


def _cmd_pdensity(args) -> CommandResult:
    lv, fam = _load_lattice(args.lattice)
    p = _load_poset(args.poset)
    threshold = Fraction(1, pdensity.filter_count(p))
    if args.witness is not None:
        a = _find_member(fam, lv, args.witness)
        value = pdensity.p_density(lv, a, p)
        payload = {
            "witness": args.witness,
            "density": _rat(value),
            "threshold": _rat(threshold),
            "holds": value <= threshold,
        }
        status = "holds" if value <= threshold else "fails"
        return CommandResult(status, payload,
                             f"density {payload['density']} vs threshold "
                             f"{payload['threshold']}: {payload['holds']}")
    a = pdensity.has_p_density_property(lv, p)
    payload = {
        "witness": None if a is None else lv.element_name(a),
        "threshold": _rat(threshold),
        "holds": a is not None,
    }
    status = "holds" if a is not None else "fails"
    return CommandResult(status, payload,
                         f"density property witness: {payload['witness']}")


def _cmd_matching(args) -> CommandResult:
    lv, fam = _load_lattice(args.l)
    p = _load_poset(args.p)
    if args.a is not None:
        a = _find_member(fam, lv, args.a)
        verdict = pdensity.matching_property(lv, a, p, full=args.full)
        payload = {"a": args.a, "full": args.full, "holds": verdict.holds}
        return CommandResult("holds" if verdict.holds else "fails", payload,
                             f"matching at {args.a}: {verdict.holds}")
    sweep = pdensity.matching_sweep(lv, p, full=args.full)
    per_a = {lv.element_name(a): v.holds for a, v in sweep.items()}
    any_holds = any(per_a.values())
    payload = {"full": args.full, "per_witness": per_a, "holds": any_holds}
    if args.all_a:
        text = "\n".join(f"{name}: {ok}" for name, ok in per_a.items())
    else:
        text = f"some witness has the matching property: {any_holds}"
    return CommandResult("holds" if any_holds else "fails", payload, text)


# --------------------------------------------------------------- wojcik


def _cmd_wojcik(args) -> CommandResult:
    if args.verb == "un":
        s = wojcik.set_of_index(args.n)
        payload = {"n": args.n, "set": _set_text(s)}
        return CommandResult("holds", payload, f"U({args.n}) = {{{payload['set']}}}")
    if args.verb == "family":
        f = wojcik.index_family(args.n)
        payload = {
            "n": args.n,
            "family": _family_text(f),
            "total_size": wojcik.total_size(f),
            "union_closed": f.is_union_closed,
        }
        return CommandResult("holds", payload, payload["family"].rstrip())
    if args.verb == "tn":
        caps = [args.cap] if args.cap is not None else [3, 4]
        segment = wojcik.total_size(wojcik.index_family(args.n))
        runs = {}
        last = None
        for cap in caps:
            value, minimizer = wojcik.min_total_size(args.n, cap)
            runs[str(cap)] = {
                "minimum": value,
                "consistent_with_segment": value == segment,
                "minimizer": _family_text(minimizer),
            }
            last = value
        payload = {
            "n": args.n,
            "segment_value": segment,
            "per_cap": runs,
            "cap_soundness_gap": "optimum over larger universes is not ruled out",
        }
        text = "; ".join(
            f"cap {cap}: minimum {run['minimum']}"
            f" ({'consistent' if run['consistent_with_segment'] else 'differs'}"
            f" with segment {segment})"
            for cap, run in runs.items())
        return CommandResult("holds", payload, f"t_{args.n}: {text}")
    if args.verb == "sm":
        value, minimizer = wojcik.min_size_density(args.m, args.strategy)
        payload = {
            "m": args.m,
            "strategy": args.strategy,
            "minimum": _rat(value),
            "minimizer": _family_text(minimizer),
        }
        return CommandResult("holds", payload,
                             f"s_{args.m} = {payload['minimum']} (~{float(value):.4f})")
    if args.verb == "order-check":
        ok = wojcik.check_union_order(args.bound)
        payload = {"bound": args.bound, "holds": ok}
        return CommandResult("holds" if ok else "fails", payload,
                             f"union order law on [0, {args.bound}): {ok}")
    raise ValidationError(f"unknown wojcik verb {args.verb!r}")


# ---------------------------------------------------------------- wiring


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ucf",
        description="Union-closed set family toolkit",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    sub = parser.add_subparsers(dest="noun", required=True)

    fam = sub.add_parser("fam", parents=[common]).add_subparsers(
        dest="verb", required=True)
    for verb in ("stats", "check-closed", "irreducibles", "transpose"):
        sp = fam.add_parser(verb, parents=[common])
        sp.add_argument("file")
        if verb == "irreducibles":
            sp.add_argument("--generators", action="store_true")
        sp.set_defaults(func=_cmd_fam, verb=verb)

    dens = sub.add_parser("density", parents=[common]).add_subparsers(
        dest="verb", required=True)
    for verb in ("closure", "esets", "mu", "min-mu", "bound", "local"):
        sp = dens.add_parser(verb, parents=[common])
        sp.add_argument("file")
        if verb == "closure":
            sp.add_argument("--x", required=True, help="set, e.g. a,b")
        else:
            sp.add_argument("--u", required=True, help="the set u, e.g. a,b")
        if verb == "esets":
            sp.add_argument("--x", help="one set to analyse (default: all)")
            sp.add_argument("--method", default="generators",
                            choices=("generators", "closure"))
        if verb == "mu":
            sp.add_argument("--ext", help="extension family file")
        if verb == "min-mu":
            sp.add_argument("--cap", type=int, default=density.FILTER_CAP)
            sp.add_argument("--fast", action="store_true",
                            help="only decide whether the minimum is below 2")
        if verb == "bound":
            sp.add_argument("--brute", action="store_true")
        if verb == "local":
            sp.add_argument("--gprime", help="simple-graph family file")
        sp.set_defaults(func=_cmd_density, verb=verb)

    chk = sub.add_parser("check", parents=[common]).add_subparsers(
        dest="verb", required=True)
    for verb in ("conjecture", "sufficient", "equivalences"):
        sp = chk.add_parser(verb, parents=[common])
        sp.add_argument("file")
        if verb == "conjecture":
            sp.add_argument("--form", default="element",
                            choices=("element", "generator"))
        sp.set_defaults(func=_cmd_check, verb=verb)

    cov = sub.add_parser("cover", parents=[common]).add_subparsers(
        dest="verb", required=True)
    for verb in ("greedy", "minimal"):
        sp = cov.add_parser(verb, parents=[common])
        sp.add_argument("file")
        sp.set_defaults(func=_cmd_cover, verb=verb)

    scan = sub.add_parser("scan", parents=[common]).add_subparsers(
        dest="verb", required=True)
    sp = scan.add_parser("graphs", parents=[common])
    sp.add_argument("--max-vertices", type=int, required=True)
    sp.add_argument("--singletons", action="store_true")
    sp.add_argument("--threads", type=int, default=1)
    sp.set_defaults(func=_cmd_scan, verb="graphs")
    sp = scan.add_parser("families", parents=[common])
    sp.add_argument("--max-universe", type=int, required=True)
    sp.add_argument("--threads", type=int, default=1)
    sp.set_defaults(func=_cmd_scan, verb="families")

    sp = sub.add_parser("pdensity", parents=[common])
    sp.add_argument("--lattice", required=True, help="family file")
    sp.add_argument("--poset", required=True,
                    help="poset file, chain:K, [K], or antichain:K")
    sp.add_argument("--witness", help="member to test, e.g. a,b")
    sp.set_defaults(func=_cmd_pdensity)

    sp = sub.add_parser("matching", parents=[common])
    sp.add_argument("--l", required=True, help="family file")
    sp.add_argument("--p", required=True, help="poset spec")
    sp.add_argument("--full", action="store_true")
    sp.add_argument("--all-a", action="store_true")
    sp.add_argument("--a", help="single witness member, e.g. a,b")
    sp.set_defaults(func=_cmd_matching)

    woj = sub.add_parser("wojcik", parents=[common]).add_subparsers(
        dest="verb", required=True)
    sp = woj.add_parser("un", parents=[common])
    sp.add_argument("n", type=int)
    sp.set_defaults(func=_cmd_wojcik, verb="un")
    sp = woj.add_parser("family", parents=[common])
    sp.add_argument("n", type=int)
    sp.set_defaults(func=_cmd_wojcik, verb="family")
    sp = woj.add_parser("tn", parents=[common])
    sp.add_argument("n", type=int)
    sp.add_argument("--cap", type=int, default=None,
                    help="single universe cap (default: run caps 3 and 4)")
    sp.set_defaults(func=_cmd_wojcik, verb="tn")
    sp = woj.add_parser("sm", parents=[common])
    sp.add_argument("m", type=int)
    sp.add_argument("--strategy", default="flat",
                    choices=("flat", "recursive"))
    sp.set_defaults(func=_cmd_wojcik, verb="sm")
    sp = woj.add_parser("order-check", parents=[common])
    sp.add_argument("bound", type=int)
    sp.set_defaults(func=_cmd_wojcik, verb="order-check")
    return parser


def run(argv: list[str]) -> CommandResult:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
        raise
    try:
        return args.func(args)
    except ParseError as exc:
        return CommandResult("error", {"error": str(exc)}, f"parse error: {exc}")
    except CapExceededError as exc:
        return CommandResult("cap_exceeded", {"error": str(exc)},
                             f"cap exceeded: {exc}")
    except ValidationError as exc:
        return CommandResult("error", {"error": str(exc)}, f"error: {exc}")
    except UcfError as exc:
        return CommandResult("error", {"error": str(exc)}, f"error: {exc}")


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        result = run(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    wants_json = "--json" in argv
    if wants_json:
        document = {"status": result.status}
        document.update(result.payload)
        print(json.dumps(document, indent=2, default=str))
    else:
        print(result.human_text)
        if result.status not in ("holds",):
            print(f"status: {result.status}", file=sys.stderr)
    return EXIT_CODES[result.status]


if __name__ == "__main__":
    sys.exit(main())
