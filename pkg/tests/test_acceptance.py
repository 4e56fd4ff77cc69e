"""Acceptance suite: one PASS/FAIL line per criterion.

Run with pytest (``pytest tests/test_acceptance.py -s`` shows the lines
inline; they are also printed with capture disabled) or directly with
``python3 tests/test_acceptance.py``.

Tolerances: every check is exact. Counts (instances, fixtures, radii) are
pinned below.
"""

from __future__ import annotations

import itertools
import json
import os
import random
import subprocess
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from oracles import cycle_rank, homotopy_partition  # noqa: E402

from qpi1 import (Contour, CoveringCandidate, GroupAction, QuiverMorphism,  # noqa: E402
                  check_galois, contour_class, cycle_irreducible, enumerate_paths,
                  freeness, homotopic, is_simply_connected, is_strongly_simply_connected,
                  isomorphism, naturally_homotopic, pi1_presentation, quotient, sigma,
                  torsion_free_scan, universal_cover_ball)
from qpi1.catalog import FIXTURES, load_fixture, load_json_fixture  # noqa: E402
from qpi1.covering import identity_morphism  # noqa: E402
from qpi1.cycles import contour_reducible, lemma21_case, random_theta  # noqa: E402
from qpi1.quiver import Arrow, Quiver, QuiverError, Step, Walk  # noqa: E402
from qpi1.relations import BoundQuiver, minimal_relations  # noqa: E402

LEMMA_TRIALS = 1200          # admissible theta splittings
LEMMA_INADMISSIBLE = 200
ORACLE_LENGTH = 6
RANDOM_QUIVERS = 200
MAX_VERTICES, MAX_ARROWS = 8, 14
TORSION_NMAX = 6
COVER_AUDITS = (("kron", 4), ("square", 3), ("f19", 4))
DETERMINISM_SEEDS = ("0", "1", "12345")


# -- criteria ----------------------------------------------------------------------

def criterion_fixtures():
    checks = {}

    for name in ("f19", "f19-prime"):
        f = freeness(pi1_presentation(load_fixture(name)))
        checks[f"{name} pi1 Free(0)"] = (f.verdict, f.rank) == ("free", 0)

    B = load_fixture("f19")
    r = is_strongly_simply_connected(B)
    double = r.witness is not None and len(r.witness) == 2 and \
        len([a for a in B.quiver.arrows if {a.source, a.target} == set(r.witness)]) == 2
    checks["f19 ssc refuted at a double arrow"] = r.verdict.refuted and double
    checks["f19 sc proven"] = is_simply_connected(B).proven

    for name, reducible, chain in (("f11a", True, 5), ("f11b", False, None)):
        Q = load_fixture(name).quiver
        ps = enumerate_paths(Q, "a", "b")
        red = contour_reducible(Q, Contour(ps[0], ps[-1]))
        ok = red.reducible == reducible
        if chain is not None:
            ok = ok and red.chain is not None and len(red.chain) == chain
        checks[f"{name} contour reducible={reducible}"] = ok

    Q = load_fixture("f13").quiver
    C = Q.walk("alpha0 alpha1^-1 alpha2 beta2 beta1 beta0^-1")
    checks["f13 reducible, sigma 2"] = sigma(C) == 2 and not cycle_irreducible(Q, C)

    B = load_fixture("f15")
    a, b = B.quiver.path("alpha"), B.quiver.path("beta")
    checks["f15 homotopic proven"] = homotopic(B, a, b).proven
    checks["f15 not naturally homotopic"] = not naturally_homotopic(B, a, b)

    B = load_fixture("f17a")
    Q = B.quiver
    w1 = Q.path("alpha1", "alpha2", "alpha3", "alpha4")
    w2 = Q.path("gamma1", "gamma2", "gamma3", "gamma4")
    v = homotopic(B, w1, w2)
    P = pi1_presentation(B)
    checks["f17a routes refuted, certificate verified"] = (
        v.refuted and v.certificate.verify(P.group, P.word(w1 * w2.inverse())))

    for name, kind in (("f17b", "no-torsion-found"), ("f17c", "contractible")):
        B = load_fixture(name)
        Q = B.quiver
        c = Contour(Q.path("alpha1", "alpha2"), Q.path("beta1", "beta2"))
        checks[f"{name} irreducible and {kind}"] = (
            cycle_irreducible(Q, c.cycle()) and contour_class(B, c).kind == kind)

    bad = [k for k, ok in checks.items() if not ok]
    return not bad, f"{len(checks) - len(bad)}/{len(checks)} checks" + \
        (f"; failed: {bad}" if bad else "")


def criterion_splitting():
    rng = random.Random(2024)
    cases = {"a": 0, "b": 0, "c": 0}
    failures = 0
    for _ in range(LEMMA_TRIALS):
        Q, S = random_theta(rng)
        r = lemma21_case(Q, S)
        cases[r.case] += 1
        failures += not r.holds
    refused = 0
    for _ in range(LEMMA_INADMISSIBLE):
        Q, S = random_theta(rng, inadmissible=True)
        try:
            lemma21_case(Q, S)
        except QuiverError:
            refused += 1
    ok = (failures == 0 and all(cases.values()) and refused == LEMMA_INADMISSIBLE)
    return ok, (f"{LEMMA_TRIALS} admissible {cases}, {failures} failures; "
                f"{refused}/{LEMMA_INADMISSIBLE} inadmissible refused")


def criterion_oracle():
    pairs = disagreements = 0
    for name in FIXTURES:
        B = load_fixture(name)
        Q = B.quiver
        rels = [[p.labels() for p in m.support] for m in minimal_relations(B).relations]
        depth = ORACLE_LENGTH + max((len(p) for r in rels for p in r), default=0)
        for x in Q.vertices:
            T, find = homotopy_partition(Q, rels, x, depth)
            short = [n for n, w in enumerate(T.words) if len(w) <= ORACLE_LENGTH]
            walks = {n: Walk(x, tuple(Step(Q.arrow(l), s < 0) for l, s in T.words[n]))
                     for n in short}
            by_end: dict[str, list[int]] = {}
            for n in short:
                by_end.setdefault(T.ends[n], []).append(n)
            for ns in by_end.values():
                for i, j in itertools.combinations(ns, 2):
                    pairs += 1
                    v = homotopic(B, walks[i], walks[j])
                    if v.unknown or v.proven != (find(i) == find(j)):
                        disagreements += 1
    return disagreements == 0, f"{pairs} pairs, {disagreements} disagreements"


def random_acyclic_quiver(rng: random.Random) -> Quiver:
    n = rng.randint(1, MAX_VERTICES)
    order = [f"v{i}" for i in range(n)]
    rng.shuffle(order)
    arrows = []
    for i in range(1, n):                      # a random spanning tree
        j = rng.randrange(i)
        arrows.append((order[j], order[i]) if rng.random() < 0.5 else (order[i], order[j]))
    for _ in range(rng.randint(0, MAX_ARROWS - len(arrows))):
        if n < 2:
            break
        i, j = sorted(rng.sample(range(n), 2))
        arrows.append((order[i], order[j]))
    # orient by position in ``order`` so the quiver stays acyclic
    pos = {v: k for k, v in enumerate(order)}
    oriented = [(u, v) if pos[u] < pos[v] else (v, u) for u, v in arrows]
    return Quiver(tuple(sorted(order)),
                  tuple(Arrow(f"x{k}", u, v) for k, (u, v) in enumerate(oriented)))


def criterion_free_rank():
    rng = random.Random(7)
    wrong = 0
    for _ in range(RANDOM_QUIVERS):
        Q = random_acyclic_quiver(rng)
        index = {v: i for i, v in enumerate(Q.vertices)}
        expected = cycle_rank(len(Q.vertices),
                              [(index[a.source], index[a.target]) for a in Q.arrows])
        f = freeness(pi1_presentation(BoundQuiver(Q, (), "rand")))
        wrong += (f.verdict, f.rank) != ("free", expected)
    return wrong == 0, f"{RANDOM_QUIVERS} quivers, {wrong} wrong"


def criterion_galois():
    checks = {}
    for name in FIXTURES:
        B = load_fixture(name)
        c = CoveringCandidate(B, B, identity_morphism(B), GroupAction.trivial(B))
        checks[f"identity {name}"] = check_galois(c).verdict

    for cover, action, base in (("crown", "crown-z2.json", "kron"),
                                ("a3line-twice", "a3line-twice-swap.json", "a3line")):
        B = load_fixture(cover)
        c = quotient(B, GroupAction.from_json(B, load_json_fixture(action)))
        checks[f"quotient {cover}"] = (check_galois(c).verdict
                                      and isomorphism(c.base, load_fixture(base)) is not None)

    crown, kron = load_fixture("crown"), load_fixture("kron")
    F = QuiverMorphism.from_json(crown, kron, load_json_fixture("crown-to-kron.json"))
    rep = check_galois(CoveringCandidate(crown, kron, F, GroupAction.trivial(crown)))
    checks["wrong fiber fails only axiom 2"] = (
        rep.axiom1 and not rep.axiom2 and rep.axiom3 and rep.ideal_compat)

    one = BoundQuiver(Quiver(("a", "b"), (Arrow("nu", "a", "b"),)), (), "one")
    swap = QuiverMorphism(kron, kron, {"a": "a", "b": "b"}, {"mu": "lambda", "lambda": "mu"})
    fold = QuiverMorphism(kron, one, {"a": "a", "b": "b"}, {"mu": "nu", "lambda": "nu"})
    rep = check_galois(CoveringCandidate(kron, one, fold, GroupAction.generate(kron, [swap])))
    checks["non-free action fails only axiom 3"] = (
        rep.axiom1 and rep.axiom2 and not rep.axiom3 and rep.ideal_compat)

    bad = [k for k, ok in checks.items() if not ok]
    return not bad, f"{len(checks) - len(bad)}/{len(checks)} checks" + \
        (f"; failed: {bad}" if bad else "")


def criterion_cover_audit():
    notes, ok = [], True
    for name, R in COVER_AUDITS:
        B = load_fixture(name)
        ball = universal_cover_ball(B, B.quiver.vertices[0], R)
        local = not ball.local_bijectivity()
        free = ball.deck_free()
        trivial = is_simply_connected(ball.interior_quiver()).proven
        good = local and free and trivial
        if name in ("square", "f19"):
            good = good and isomorphism(ball.cover, B) is not None
        ok = ok and good
        notes.append(f"{name} R={R}: {len(ball.cover.quiver.vertices)} classes "
                     f"{'ok' if good else 'FAILED'}")
    return ok, "; ".join(notes)


def criterion_torsion():
    torsion = unknown = covered = 0
    not_free = []
    for name in FIXTURES:
        B = load_fixture(name)
        scan = torsion_free_scan(B, TORSION_NMAX)
        torsion += len(scan.torsion)
        unknown += scan.unknown
        ball = universal_cover_ball(B, B.quiver.vertices[0], 3)
        if not ball.local_bijectivity() and ball.deck_free():
            covered += 1
            f = freeness(pi1_presentation(B))
            if f.verdict != "free":
                not_free.append(name)
    ok = torsion == 0 and unknown == 0 and not not_free
    return ok, (f"{len(FIXTURES)} fixtures: {torsion} torsion contours, {unknown} unknown, "
                f"{covered} pass the cover check, non-free among them {not_free}")


DETERMINISM_RUNS = (
    ["pi1", "--all-fixtures"],
    ["ssc", "--all-fixtures"],
    ["torsion-scan", "--all-fixtures"],
    ["contours", "--all-fixtures"],
    ["check", "--all-fixtures"],
    ["dot", "--all-fixtures"],
    ["homotopic", "fixtures/f17a", "alpha1.alpha2.alpha3.alpha4", "gamma1.gamma2.gamma3.gamma4"],
    ["cover", "fixtures/f19", "--radius", "4"],
    ["quotient", "fixtures/crown", "--action", "fixtures/crown-z2.json"],
    ["lemma21", "--trials", "300", "--seed", "3"],
)

_SNIPPET = ("import json, sys\n"
            "from qpi1.cli import run, report_json\n"
            "for argv in json.loads(sys.argv[1]):\n"
            "    print(report_json(run(argv)[0], timing=False))\n")


def criterion_determinism():
    outputs = []
    for seed in DETERMINISM_SEEDS:
        env = dict(os.environ, PYTHONHASHSEED=seed)
        proc = subprocess.run([sys.executable, "-c", _SNIPPET, json.dumps(DETERMINISM_RUNS)],
                              capture_output=True, env=env, check=True)
        outputs.append(proc.stdout)
    same = all(o == outputs[0] for o in outputs)
    return same, (f"{len(DETERMINISM_RUNS)} reports x {len(DETERMINISM_SEEDS)} hash seeds, "
                  f"{len(outputs[0])} bytes, {'identical' if same else 'DIFFERENT'}")


CRITERIA = (
    (1, "fixture exactness", criterion_fixtures),
    (2, "splitting identity on theta graphs", criterion_splitting),
    (3, "homotopy oracle equivalence", criterion_oracle),
    (4, "free-rank law", criterion_free_rank),
    (5, "covering axioms", criterion_galois),
    (6, "universal cover audits", criterion_cover_audit),
    (7, "torsion scan and freeness", criterion_torsion),
    (8, "deterministic reports", criterion_determinism),
)


def _line(n, name, ok, detail) -> str:
    return f"[{'PASS' if ok else 'FAIL'}] {n} {name}: {detail}"


# -- pytest ------------------------------------------------------------------------

def _check(capsys, n):
    _, name, fn = CRITERIA[n - 1]
    ok, detail = fn()
    with capsys.disabled():
        print("\n" + _line(n, name, ok, detail))
    assert ok, detail


def test_criterion_1_fixture_exactness(capsys):
    _check(capsys, 1)


def test_criterion_2_splitting_identity(capsys):
    _check(capsys, 2)


def test_criterion_3_oracle_equivalence(capsys):
    _check(capsys, 3)


def test_criterion_4_free_rank(capsys):
    _check(capsys, 4)


def test_criterion_5_covering_axioms(capsys):
    _check(capsys, 5)


def test_criterion_6_cover_audits(capsys):
    _check(capsys, 6)


def test_criterion_7_torsion_and_freeness(capsys):
    _check(capsys, 7)


def test_criterion_8_determinism(capsys):
    _check(capsys, 8)


if __name__ == "__main__":
    failed = 0
    for n, name, fn in CRITERIA:
        ok, detail = fn()
        failed += not ok
        print(_line(n, name, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
