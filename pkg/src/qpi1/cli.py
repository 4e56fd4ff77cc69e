"""Command line front end: ``qpi1 COMMAND FILE [options]``.

Exit status is 0 when a result was computed (a refuted verdict included),
1 for usage and input errors and 2 when the budget ran out before a verdict.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from collections import Counter
from pathlib import Path

from . import catalog
from .covering import (CoverError, CoveringCandidate, GroupAction, QuiverMorphism,
                       check_galois, is_simply_connected, is_strongly_simply_connected,
                       load_json, quotient, universal_cover_ball)
from .cycles import (contour_reducible, cycle_irreducible, enumerate_contours, interlaced,
                     lemma21_case, naturally_contractible, random_theta)
from .dot import cover_fibers, export_dot
from .dsl import ParseError, load, serialize
from .groups import word_str
from .homotopy import (Verdict, contour_class, contractible, freeness, homotopic,
                       naturally_homotopic, pi1_presentation, torsion_free_scan)
from .quiver import (QuiverError, Walk, classify_cycle, is_reduced_cycle, is_simple_cycle,
                     sigma)
from .relations import BoundQuiver, RelationError, check_presentation, format_combo, \
    minimal_relations


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


class _Context:
    def __init__(self, args):
        self.args = args
        self.budget_hit = False

    def verdict(self, v: Verdict) -> dict:
        if v.unknown:
            self.budget_hit = True
        return v.to_json()


def _walk(B: BoundQuiver, text: str) -> Walk:
    text = text.replace(".", " ").strip()
    if text.startswith("e_") and text[2:] in B.quiver.vertices:
        return Walk(text[2:])
    return B.quiver.walk(text)


def _path(B: BoundQuiver, text: str) -> Walk:
    w = _walk(B, text)
    if not w.is_path:
        raise QuiverError(f"{text} is not a path")
    return w


# -- commands --------------------------------------------------------------------

def cmd_check(ctx, B):
    rep = check_presentation(B)
    mins = minimal_relations(B)
    result = {
        "name": B.name,
        "vertices": len(B.quiver.vertices), "arrows": len(B.quiver.arrows),
        "generators": [format_combo(g) for g in B.generators],
        "connected": rep.connected, "triangular": rep.triangular,
        "diagnostics": [f"{d.severity}: {d.message}" for d in rep.diagnostics],
        "hom_dimensions": {f"{a},{b}": d for (a, b), d in rep.hom_dimensions.items()},
        "minimal_relations": [format_combo(m.relation) for m in mins.relations],
        "minimal_partial": mins.partial,
        "ok": rep.ok,
    }
    lines = [f"{B.name}: {result['vertices']} vertices, {result['arrows']} arrows, "
             f"{len(B.generators)} relations; " + ("ok" if rep.ok else "problems found")]
    lines += [f"  {d}" for d in result["diagnostics"]]
    lines += [f"  minimal: {m}" for m in result["minimal_relations"]]
    return result, lines


def cmd_pi1(ctx, B):
    P = pi1_presentation(B, ctx.args.base)
    F = freeness(P, ctx.args.budget)
    if F.verdict == "unknown":
        ctx.budget_hit = True
    result = {"base": P.base, "tree": list(P.tree), "generators": list(P.generators),
              "relators": [word_str(r, P.generators) for r in P.relators],
              "freeness": F.to_json(), "summary": str(F)}
    return result, [f"pi_1({B.name}, {P.base}) = {P}", f"freeness: {F}"]


def cmd_homotopic(ctx, B):
    w1, w2 = _walk(B, ctx.args.walk1), _walk(B, ctx.args.walk2)
    v = homotopic(B, w1, w2, ctx.args.budget)
    return ({"walks": [str(w1), str(w2)], "verdict": ctx.verdict(v)},
            [f"{w1} ~ {w2}: {v.status.value}"])


def cmd_contractible(ctx, B):
    C = _walk(B, " ".join(ctx.args.cycle))
    v = contractible(B, C, ctx.args.budget)
    return {"cycle": str(C), "verdict": ctx.verdict(v)}, [f"{C} contractible: {v.status.value}"]


def cmd_nat_homotopic(ctx, B):
    p, q = _path(B, ctx.args.path1), _path(B, ctx.args.path2)
    r = naturally_homotopic(B, p, q)
    return {"paths": [str(p), str(q)], "naturally_homotopic": r}, \
        [f"{p} naturally homotopic to {q}: {str(r).lower()}"]


def _contour_json(Q, c):
    red = contour_reducible(Q, c)
    return {"p": str(c.p), "q": str(c.q), "from": c.start, "to": c.end,
            "interlaced": interlaced(c), "reducible": red.reducible,
            "chain": [str(w) for w in red.chain] if red.chain else None}


def cmd_contours(ctx, B):
    out = [_contour_json(B.quiver, c) for c in enumerate_contours(B.quiver)]
    lines = [f"{len(out)} contours"]
    lines += [f"  ({c['p']}, {c['q']}): interlaced={c['interlaced']}, "
              f"reducible={c['reducible']}" for c in out]
    return {"contours": out}, lines


def cmd_contour_class(ctx, B):
    a, b = ctx.args.from_, ctx.args.to
    out, lines = [], []
    for c in enumerate_contours(B.quiver):
        if (a and c.start != a) or (b and c.end != b):
            continue
        k = contour_class(B, c, ctx.args.nmax, ctx.args.budget)
        if k.kind == "unknown":
            ctx.budget_hit = True
        out.append({"p": str(c.p), "q": str(c.q), "class": k.to_json(), "summary": str(k)})
        lines.append(f"({c.p}, {c.q}): {k}")
    if not out and (a or b):
        raise QuiverError(f"no contours from {a or '*'} to {b or '*'}")
    return {"contours": out}, lines


def cmd_cycle_class(ctx, B):
    C = _walk(B, " ".join(ctx.args.cycle))
    cls = classify_cycle(C)
    result = {"cycle": str(C), "reduced": cls.reduced, "simple": cls.simple,
              "oriented": cls.oriented}
    if cls.reduced:
        s = sigma(C)
        result["sigma"] = s
        if s > 0:
            if cls.simple:
                result["irreducible"] = cycle_irreducible(B.quiver, C, ctx.args.bound)
            result["naturally_contractible"] = naturally_contractible(B, C)
        result["contractible"] = ctx.verdict(contractible(B, C, ctx.args.budget))
    lines = [f"{C}: " + ", ".join(f"{k}={v if not isinstance(v, dict) else v['status']}"
                                  for k, v in result.items() if k != "cycle")]
    return result, lines


def cmd_nat_contractible(ctx, B):
    C = _walk(B, " ".join(ctx.args.cycle))
    r = naturally_contractible(B, C)
    return {"cycle": str(C), "naturally_contractible": r}, \
        [f"{C} naturally contractible: {str(r).lower()}"]


def cmd_sc(ctx, B):
    v = is_simply_connected(B, ctx.args.budget)
    return {"verdict": ctx.verdict(v)}, [f"{B.name} simply connected: {v.status.value}"]


def cmd_ssc(ctx, B):
    r = is_strongly_simply_connected(B, ctx.args.budget, ctx.args.cap)
    ctx.verdict(r.verdict)
    line = f"{B.name} strongly simply connected: {r.verdict.status.value}"
    if r.witness:
        line += f" (witness {{{', '.join(r.witness)}}})"
    return r.to_json(), [line]


def cmd_cover(ctx, B):
    base = ctx.args.base or B.quiver.vertices[0]
    ball = universal_cover_ball(B, base, ctx.args.radius, ctx.args.budget)
    C = ball.cover
    result = {
        "base_point": base, "radius": ctx.args.radius,
        "vertices": len(C.quiver.vertices), "arrows": len(C.quiver.arrows),
        "classes": {v: str(w) for v, w in ball.classes.items()},
        "interior": sorted(ball.interior, key=C.quiver.vertex_position),
        "local_bijectivity_problems": ball.local_bijectivity(),
        "deck_free": ball.deck_free(),
        "deck": {g: dict(sorted(p.items())) for g, p in sorted(ball.deck.items())},
        "cover": serialize(C),
        "map": ball.morphism.to_json(),
        "dot": export_dot(C, cover_fibers(ball.morphism)),
    }
    lines = [f"ball of radius {ctx.args.radius} at {base}: {result['vertices']} classes, "
             f"{result['arrows']} arrows, {len(C.generators)} lifted relations",
             serialize(C).rstrip()]
    return result, lines


def cmd_quotient(ctx, B):
    G = GroupAction.from_json(B, load_json(catalog.resolve(ctx.args.action)))
    cand = quotient(B, G)
    rep = check_galois(cand)
    return ({"order": G.order, "base": serialize(cand.base), "map": cand.morphism.to_json(),
             "galois": rep.to_json()},
            [serialize(cand.base).rstrip(), f"galois check: {'pass' if rep.verdict else 'fail'}"])


def cmd_galois_check(ctx, B):
    base = load(catalog.resolve(ctx.args.base_file))
    F = QuiverMorphism.from_json(B, base, load_json(catalog.resolve(ctx.args.map)))
    if ctx.args.action:
        G = GroupAction.from_json(B, load_json(catalog.resolve(ctx.args.action)))
    else:
        G = GroupAction.trivial(B)
    rep = check_galois(CoveringCandidate(B, base, F, G))
    lines = [f"axiom 1: {rep.axiom1}", f"axiom 2: {rep.axiom2}", f"axiom 3: {rep.axiom3}",
             f"ideal: {rep.ideal_compat}", f"verdict: {'pass' if rep.verdict else 'fail'}"]
    return rep.to_json(), lines + [f"  {p}" for p in rep.problems]


def cmd_lemma21(ctx, B):
    rng = random.Random(ctx.args.seed)
    counts: Counter = Counter()
    failures, refused = [], 0
    for i in range(ctx.args.trials):
        Q, S = random_theta(rng, inadmissible=rng.random() < 0.1)
        try:
            r = lemma21_case(Q, S)
        except QuiverError:
            refused += 1
            continue
        counts[r.case] += 1
        if not r.holds:
            failures.append({"trial": i, "splitting": str(S), "lhs": r.lhs, "rhs": r.rhs})
    result = {"trials": ctx.args.trials, "seed": ctx.args.seed,
              "cases": dict(sorted(counts.items())), "refused": refused,
              "failures": failures}
    return result, [f"cases {dict(sorted(counts.items()))}, refused {refused}, "
                    f"failures {len(failures)}"]


def cmd_torsion_scan(ctx, B):
    r = torsion_free_scan(B, ctx.args.nmax, ctx.args.budget)
    if r.unknown:
        ctx.budget_hit = True
    out = r.to_json()
    return out, [f"{out['contours']} contours, {len(out['torsion'])} torsion, "
                 f"{out['unknown']} unknown; {out['counts']}"]


def cmd_dot(ctx, B):
    text = export_dot(B)
    return {"dot": text}, [text.rstrip()]


COMMANDS = {
    "check": (cmd_check, "validate a presentation and list minimal relations"),
    "pi1": (cmd_pi1, "fundamental group presentation and freeness"),
    "homotopic": (cmd_homotopic, "decide whether two walks are homotopic"),
    "contractible": (cmd_contractible, "decide whether a cycle is contractible"),
    "nat-homotopic": (cmd_nat_homotopic, "natural homotopy of two paths"),
    "contours": (cmd_contours, "list contours with interlacing and reducibility"),
    "contour-class": (cmd_contour_class, "contractible / torsion classification"),
    "cycle-class": (cmd_cycle_class, "classify a cycle"),
    "nat-contractible": (cmd_nat_contractible, "natural contractibility of a cycle"),
    "sc": (cmd_sc, "simple connectedness of this presentation"),
    "ssc": (cmd_ssc, "strong simple connectedness over convex subquivers"),
    "cover": (cmd_cover, "truncated universal cover"),
    "quotient": (cmd_quotient, "quotient by a free group action"),
    "galois-check": (cmd_galois_check, "check the Galois covering axioms"),
    "lemma21": (cmd_lemma21, "random theta-graph checks of the splitting identity"),
    "torsion-scan": (cmd_torsion_scan, "classify every contour"),
    "dot": (cmd_dot, "Graphviz export"),
}
BATCH = {"check", "pi1", "contours", "contour-class", "sc", "ssc", "torsion-scan", "dot"}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--budget", type=int, default=None, help="work budget (QPI1_BUDGET)")
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("--seed", type=int, default=0)
    parser = _Parser(prog="qpi1", description="bound quiver homotopy toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name != "lemma21":
            p.add_argument("file", nargs="?" if name in BATCH else None)
        if name in BATCH:
            p.add_argument("--all-fixtures", action="store_true")
        if name == "homotopic":
            p.add_argument("walk1")
            p.add_argument("walk2")
        elif name in ("contractible", "cycle-class", "nat-contractible"):
            p.add_argument("cycle", nargs="+", help="steps, e.g. alpha1 alpha2 beta2^-1 beta1^-1")
        elif name == "nat-homotopic":
            p.add_argument("path1")
            p.add_argument("path2")
        if name == "pi1":
            p.add_argument("--base", default=None)
        if name == "contour-class":
            p.add_argument("--from", dest="from_", default=None)
            p.add_argument("--to", default=None)
        if name in ("contour-class", "torsion-scan"):
            p.add_argument("--nmax", type=int, default=6)
        if name == "cycle-class":
            p.add_argument("--bound", choices=("length", "sigma"), default="length")
        if name == "ssc":
            p.add_argument("--cap", type=int, default=10_000)
        if name == "cover":
            p.add_argument("--radius", type=int, required=True)
            p.add_argument("--base", default=None)
        if name == "quotient":
            p.add_argument("--action", required=True)
        if name == "galois-check":
            p.add_argument("base_file")
            p.add_argument("--map", required=True)
            p.add_argument("--action", default=None)
        if name == "lemma21":
            p.add_argument("--trials", type=int, default=1000)
    return parser


def _digest(paths: list[Path], extra: str = "") -> str:
    h = hashlib.sha256()
    for p in paths:
        h.update(p.read_bytes())
    h.update(extra.encode())
    return h.hexdigest()


def run(argv: list[str] | None = None) -> tuple[dict, list[str], int]:
    """Parse arguments and compute; returns (report, text lines, exit code)."""
    args = build_parser().parse_args(argv)
    handler = COMMANDS[args.command][0]
    ctx = _Context(args)
    start = time.perf_counter()
    inputs: list[Path] = []
    for attr in ("file", "base_file", "map", "action"):
        value = getattr(args, attr, None)
        if value:
            inputs.append(catalog.resolve(value))
    if getattr(args, "all_fixtures", False):
        result, lines = {}, []
        for name in catalog.FIXTURES:
            path = catalog.resolve(name)
            inputs.append(path)
            res, text = handler(ctx, load(path))
            result[name] = res
            lines += [f"[{name}]"] + text
    elif args.command == "lemma21":
        result, lines = handler(ctx, None)
    else:
        if not args.file:
            raise UsageError("a .qv file is required (or --all-fixtures)")
        result, lines = handler(ctx, load(catalog.resolve(args.file)))
    extra = json.dumps({k: v for k, v in sorted(vars(args).items())
                        if k not in ("json",)}, sort_keys=True, default=str)
    report = {"command": args.command, "input_digest": _digest(inputs, extra),
              "result": result,
              "timing": {"seconds": round(time.perf_counter() - start, 6)}}
    return report, lines, 2 if ctx.budget_hit else 0


def report_json(report: dict, timing: bool = True) -> str:
    data = report if timing else {k: v for k, v in report.items() if k != "timing"}
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False)


def main(argv: list[str] | None = None) -> int:
    try:
        report, lines, code = run(argv)
    except UsageError as e:
        print(f"qpi1: error: {e}", file=sys.stderr)
        return 1
    except ParseError as e:
        print(e, file=sys.stderr)
        return 1
    except (QuiverError, RelationError, FileNotFoundError, KeyError, ValueError) as e:
        print(f"qpi1: error: {e}", file=sys.stderr)
        return 1
    except CoverError as e:
        print(f"qpi1: {e}", file=sys.stderr)
        return 2
    args_json = "--json" in (argv if argv is not None else sys.argv[1:])
    print(report_json(report) if args_json else "\n".join(lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
