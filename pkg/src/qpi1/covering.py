"""Galois coverings of bound quivers as finite, checkable data.

Coverings run cover -> base. A candidate is a morphism ``F`` together with a
finite group ``G`` of automorphisms of the cover; :func:`check_galois`
reports each covering axiom separately.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .groups import Budget, BudgetExhausted, free_reduce
from .homotopy import (ProofTrace, Status, Verdict, _tietze, decide_word, default_budget,
                       homotopic, homotopy_key, pi1_presentation, spanning_tree)
from .quiver import (Arrow, Quiver, QuiverError, Step, Walk, convex_subsets, reduce_walk,
                     reduced_walks_from)
from .relations import BoundQuiver, LinearCombo, RelationError, induce_on_convex, \
    minimal_relations


class CoverError(RuntimeError):
    """Construction had to stop; class equality could not be decided."""


# -- morphisms and actions -------------------------------------------------------

@dataclass(frozen=True)
class QuiverMorphism:
    source: BoundQuiver
    target: BoundQuiver
    vertices: Mapping[str, str]
    arrows: Mapping[str, str]

    def __post_init__(self):
        S, T = self.source.quiver, self.target.quiver
        missing = [v for v in S.vertices if v not in self.vertices]
        missing += [a.label for a in S.arrows if a.label not in self.arrows]
        if missing:
            raise QuiverError(f"morphism is not total; unmapped: {', '.join(missing)}")
        tv, ta = set(T.vertices), {a.label for a in T.arrows}
        for v, w in self.vertices.items():
            if w not in tv:
                raise QuiverError(f"vertex {v} maps to unknown vertex {w}")
        for a in S.arrows:
            image = self.arrows[a.label]
            if image not in ta:
                raise QuiverError(f"arrow {a.label} maps to unknown arrow {image}")
            b = T.arrow(image)
            if (self.vertices[a.source], self.vertices[a.target]) != (b.source, b.target):
                raise QuiverError(f"arrow {a.label}: {a.source}->{a.target} maps to "
                                  f"{b.label}: {b.source}->{b.target}, breaking incidence")

    def walk(self, w: Walk) -> Walk:
        T = self.target.quiver
        steps = tuple(Step(T.arrow(self.arrows[s.arrow.label]), s.inverse) for s in w.steps)
        return Walk(self.vertices[w.base], steps)

    def combo(self, rho: LinearCombo) -> LinearCombo:
        return LinearCombo.build(((self.walk(p), c) for p, c in rho.terms),
                                 self.vertices[rho.start], self.vertices[rho.end])

    def __call__(self, x: str) -> str:
        return self.vertices[x]

    def to_json(self) -> dict:
        return {"vertices": dict(self.vertices), "arrows": dict(self.arrows)}

    @classmethod
    def from_json(cls, source: BoundQuiver, target: BoundQuiver, data: dict):
        return cls(source, target, dict(data["vertices"]), dict(data["arrows"]))


def identity_morphism(B: BoundQuiver) -> QuiverMorphism:
    Q = B.quiver
    return QuiverMorphism(B, B, {v: v for v in Q.vertices}, {a.label: a.label for a in Q.arrows})


def _compose(g: QuiverMorphism, h: QuiverMorphism) -> QuiverMorphism:
    """``h`` after ``g``."""
    return QuiverMorphism(g.source, h.target,
                          {v: h.vertices[w] for v, w in g.vertices.items()},
                          {a: h.arrows[b] for a, b in g.arrows.items()})


def _key(g: QuiverMorphism) -> tuple:
    return (tuple(sorted(g.vertices.items())), tuple(sorted(g.arrows.items())))


@dataclass(frozen=True)
class GroupAction:
    """A finite group of automorphisms, listed element by element."""

    quiver: BoundQuiver
    elements: tuple[QuiverMorphism, ...]

    @classmethod
    def generate(cls, B: BoundQuiver, generators: Iterable[QuiverMorphism]) -> "GroupAction":
        """Close the generators under composition; checks each is an
        automorphism preserving the ideal."""
        gens = list(generators)
        for g in gens:
            _check_automorphism(B, g)
        ident = identity_morphism(B)
        elements = {_key(ident): ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = _compose(x, g)
                    k = _key(y)
                    if k not in elements:
                        elements[k] = y
                        nxt.append(y)
            frontier = nxt
        ordered = [ident] + sorted((e for k, e in elements.items() if k != _key(ident)),
                                   key=_key)
        return cls(B, tuple(ordered))

    @classmethod
    def trivial(cls, B: BoundQuiver) -> "GroupAction":
        return cls(B, (identity_morphism(B),))

    @classmethod
    def from_json(cls, B: BoundQuiver, data: dict) -> "GroupAction":
        return cls.generate(B, [QuiverMorphism.from_json(B, B, g)
                                for g in data.get("generators", [])])

    @property
    def order(self) -> int:
        return len(self.elements)

    def orbit(self, x: str, kind: str = "vertex") -> frozenset[str]:
        table = "vertices" if kind == "vertex" else "arrows"
        return frozenset(getattr(g, table)[x] for g in self.elements)

    def is_identity(self, g: QuiverMorphism) -> bool:
        return all(k == v for k, v in g.vertices.items()) and \
            all(k == v for k, v in g.arrows.items())


def _check_automorphism(B: BoundQuiver, g: QuiverMorphism):
    if g.source is not B or g.target is not B:
        raise QuiverError("group elements must map the quiver to itself")
    if len(set(g.vertices.values())) != len(g.vertices) or \
            len(set(g.arrows.values())) != len(g.arrows):
        raise QuiverError("group elements must be bijective")
    for rho in B.generators:
        if not B.contains(g.combo(rho)):
            raise QuiverError(f"automorphism does not preserve the ideal: "
                              f"image of {rho} is not in it")


@dataclass(frozen=True)
class CoveringCandidate:
    cover: BoundQuiver
    base: BoundQuiver
    morphism: QuiverMorphism
    action: GroupAction


@dataclass
class GaloisReport:
    axiom1: bool
    axiom2: bool
    axiom3: bool
    ideal_compat: bool
    problems: list[str] = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return self.axiom1 and self.axiom2 and self.axiom3 and self.ideal_compat

    def to_json(self) -> dict:
        return {"axiom1": self.axiom1, "axiom2": self.axiom2, "axiom3": self.axiom3,
                "ideal_compat": self.ideal_compat, "verdict": self.verdict,
                "problems": list(self.problems)}


def check_galois(c: CoveringCandidate) -> GaloisReport:
    F, G = c.morphism, c.action
    cover, base = c.cover.quiver, c.base.quiver
    problems: list[str] = []

    ax1 = True
    for g in G.elements:
        for v in cover.vertices:
            if F.vertices[g.vertices[v]] != F.vertices[v]:
                ax1 = False
                problems.append(f"axiom 1: F(g({v})) != F({v})")
        for a in cover.arrows:
            if F.arrows[g.arrows[a.label]] != F.arrows[a.label]:
                ax1 = False
                problems.append(f"axiom 1: F(g({a.label})) != F({a.label})")

    ax2 = True
    for kind, items, images, targets in (
            ("vertex", cover.vertices, F.vertices, base.vertices),
            ("arrow", [a.label for a in cover.arrows], F.arrows, [a.label for a in base.arrows])):
        fibers: dict[str, set[str]] = {t: set() for t in targets}
        for x in items:
            fibers[images[x]].add(x)
        for t, fiber in fibers.items():
            if not fiber:
                ax2 = False
                problems.append(f"axiom 2: empty fiber over {kind} {t}")
                continue
            orbit = G.orbit(min(fiber), kind)
            if orbit != fiber:
                ax2 = False
                problems.append(f"axiom 2: fiber over {kind} {t} is {sorted(fiber)}, "
                                f"not the single orbit {sorted(orbit)}")

    ax3 = True
    for g in G.elements:
        if G.is_identity(g):
            continue
        fixed = [v for v in cover.vertices if g.vertices[v] == v]
        if fixed:
            ax3 = False
            problems.append(f"axiom 3: a non-identity element fixes {', '.join(fixed)}")

    ideal = True
    for rho in c.cover.generators:
        if not c.base.contains(F.combo(rho)):
            ideal = False
            problems.append(f"ideal: image of {rho} is not in the base ideal")
    return GaloisReport(ax1, ax2, ax3, ideal, problems)


def quotient(B: BoundQuiver, G: GroupAction, name: str | None = None) -> CoveringCandidate:
    """Orbit quiver of a free action; orbits are named by their least member."""
    Q = B.quiver
    for g in G.elements:
        if not G.is_identity(g) and any(g.vertices[v] == v for v in Q.vertices):
            raise QuiverError("the action is not free on vertices")
    vrep = {v: min(G.orbit(v), key=Q.vertex_position) for v in Q.vertices}
    arep = {a.label: min(G.orbit(a.label, "arrow"), key=Q.arrow_position) for a in Q.arrows}
    vertices = tuple(v for v in Q.vertices if vrep[v] == v)
    arrows = tuple(Arrow(a.label, vrep[a.source], vrep[a.target])
                   for a in Q.arrows if arep[a.label] == a.label)
    base_q = Quiver(vertices, arrows)
    provisional = BoundQuiver(base_q, (), name or f"{B.name}_mod", validate=False)
    F = QuiverMorphism(B, provisional, vrep, arep)
    gens: list[LinearCombo] = []
    for rho in B.generators:
        image = F.combo(rho)
        current = BoundQuiver(base_q, gens, validate=False)
        if not image.is_zero() and not current.contains(image):
            gens.append(image)
    base = BoundQuiver(base_q, gens, name or f"{B.name}_mod")
    return CoveringCandidate(B, base, QuiverMorphism(B, base, vrep, arep), G)


def cyclic_cover(B: BoundQuiver, voltages: Mapping[str, int], n: int,
                 name: str | None = None) -> CoveringCandidate:
    """The ``Z/n`` cover with arrow ``alpha_i: (s, i) -> (t, i + v(alpha))``.

    Every relation must be homogeneous: all paths in its support carry the
    same total voltage.
    """
    Q = B.quiver

    def volt(p: Walk) -> int:
        return sum(voltages.get(s.arrow.label, 0) for s in p.steps) % n

    for rho in B.generators:
        if len({volt(p) for p in rho.support}) > 1:
            raise RelationError(f"relation {rho} is not homogeneous for the voltages")
    vname = lambda v, i: f"{v}_{i}"
    aname = lambda a, i: f"{a}_{i}"
    vertices = tuple(vname(v, i) for i in range(n) for v in Q.vertices)
    arrows = tuple(Arrow(aname(a.label, i), vname(a.source, i),
                         vname(a.target, (i + voltages.get(a.label, 0)) % n))
                   for i in range(n) for a in Q.arrows)
    CQ = Quiver(vertices, arrows)

    def lift(p: Walk, i: int) -> Walk:
        steps, level = [], i
        for s in p.steps:
            steps.append(Step(CQ.arrow(aname(s.arrow.label, level))))
            level = (level + voltages.get(s.arrow.label, 0)) % n
        return Walk(vname(p.start, i), tuple(steps))

    gens = [LinearCombo.build([(lift(p, i), c) for p, c in rho.terms])
            for i in range(n) for rho in B.generators]
    cover = BoundQuiver(CQ, gens, name or f"{B.name}_cover{n}")
    F = QuiverMorphism(cover, B, {vname(v, i): v for i in range(n) for v in Q.vertices},
                       {aname(a.label, i): a.label for i in range(n) for a in Q.arrows})
    shift = QuiverMorphism(cover, cover,
                           {vname(v, i): vname(v, (i + 1) % n) for i in range(n)
                            for v in Q.vertices},
                           {aname(a.label, i): aname(a.label, (i + 1) % n)
                            for i in range(n) for a in Q.arrows})
    return CoveringCandidate(cover, B, F, GroupAction.generate(cover, [shift]))


# -- isomorphism -----------------------------------------------------------------

def isomorphism(B1: BoundQuiver, B2: BoundQuiver) -> QuiverMorphism | None:
    """A bound-quiver isomorphism ``B1 -> B2`` (the ideal is carried onto the
    ideal), found by backtracking; None if there is none."""
    Q1, Q2 = B1.quiver, B2.quiver
    if len(Q1.vertices) != len(Q2.vertices) or len(Q1.arrows) != len(Q2.arrows):
        return None

    def mult(Q):
        out: dict[tuple[str, str], list[str]] = {}
        for a in Q.arrows:
            out.setdefault((a.source, a.target), []).append(a.label)
        return out

    m1, m2 = mult(Q1), mult(Q2)

    def degree(Q, v):
        return (len(Q.out_arrows(v)), len(Q.in_arrows(v)))

    order = list(Q1.vertices)
    vmap: dict[str, str] = {}

    def consistent(v: str, w: str) -> bool:
        for u, x in vmap.items():
            if len(m1.get((u, v), [])) != len(m2.get((x, w), [])):
                return False
            if len(m1.get((v, u), [])) != len(m2.get((w, x), [])):
                return False
        return len(m1.get((v, v), [])) == len(m2.get((w, w), []))

    def arrow_maps():
        groups = [(labels, m2[(vmap[s], vmap[t])]) for (s, t), labels in sorted(m1.items())]
        for choice in itertools.product(*(itertools.permutations(t) for _, t in groups)):
            amap = {}
            for (labels, _), perm in zip(groups, choice):
                amap.update(zip(labels, perm))
            yield amap

    def ideal_ok(F: QuiverMorphism) -> bool:
        if any(not B2.contains(F.combo(rho)) for rho in B1.generators):
            return False
        return all(B1.ideal_dimension(a, b) == B2.ideal_dimension(F(a), F(b))
                   for a in Q1.vertices for b in Q1.vertices)

    def search(i: int):
        if i == len(order):
            for amap in arrow_maps():
                F = QuiverMorphism(B1, B2, dict(vmap), amap)
                if ideal_ok(F):
                    return F
            return None
        v = order[i]
        used = set(vmap.values())
        for w in Q2.vertices:
            if w in used or degree(Q1, v) != degree(Q2, w) or not consistent(v, w):
                continue
            vmap[v] = w
            found = search(i + 1)
            if found is not None:
                return found
            del vmap[v]
        return None

    return search(0)


# -- universal cover balls -------------------------------------------------------

@dataclass
class CoverBall:
    """The radius-R ball of the universal cover around a base point.

    Vertices are homotopy classes of reduced walks from the base point;
    classes whose shortest representative has length ``< radius`` are
    interior, the rest are boundary.
    """

    base: BoundQuiver
    point: str
    radius: int
    cover: BoundQuiver
    morphism: QuiverMorphism
    classes: dict[str, Walk]
    interior: frozenset[str]
    deck: dict[str, dict[str, str]]

    def local_bijectivity(self) -> list[str]:
        """Interior vertices whose incident arrows do not biject with the
        arrows at their image."""
        problems = []
        C, Q, F = self.cover.quiver, self.base.quiver, self.morphism
        for v in sorted(self.interior, key=C.vertex_position):
            x = F(v)
            for kind, up, down in (("out", C.out_arrows(v), Q.out_arrows(x)),
                                   ("in", C.in_arrows(v), Q.in_arrows(x))):
                images = sorted(F.arrows[a.label] for a in up)
                expected = sorted(a.label for a in down)
                if images != expected:
                    problems.append(f"{v}: {kind}-arrows map to {images}, expected {expected}")
        return problems

    def deck_free(self) -> bool:
        """No deck generator fixes an interior class."""
        return all(perm.get(v, None) != v for perm in self.deck.values() for v in self.interior)

    def interior_quiver(self) -> BoundQuiver:
        C = self.cover.quiver
        keep = [v for v in C.vertices if v in self.interior]
        sub = C.full_subquiver(keep)
        labels = {a.label for a in sub.arrows}
        gens = [rho for rho in self.cover.generators
                if all(set(p.labels()) <= labels for p in rho.support)]
        return BoundQuiver(sub, gens, name=f"{self.cover.name}_interior", validate=False)


def _generator_loop(B: BoundQuiver, x: str, label: str) -> Walk:
    """Tree path to the source of ``label``, the arrow, tree path back."""
    tree = set(spanning_tree(B, x))
    Q = B.quiver
    parent: dict[str, Step | None] = {x: None}
    frontier = [x]
    while frontier:
        nxt = []
        for v in frontier:
            for s in sorted((Step(a) for a in Q.out_arrows(v)),
                            key=lambda s: Q.arrow_position(s.arrow.label)) + \
                    [Step(a, True) for a in Q.in_arrows(v)]:
                if s.arrow.label in tree and s.end not in parent:
                    parent[s.end] = s
                    nxt.append(s.end)
        frontier = nxt

    def route(v: str) -> Walk:
        steps = []
        while parent[v] is not None:
            steps.append(parent[v])
            v = parent[v].start
        return Walk(x, tuple(reversed(steps)))

    a = Q.arrow(label)
    return reduce_walk(route(a.source) * Walk(a.source, (Step(a),)) * route(a.target).inverse())


def universal_cover_ball(B: BoundQuiver, x: str, R: int,
                         budget: int | None = None) -> CoverBall:
    Q = B.quiver
    if not Q.is_connected():
        raise QuiverError(f"{B.name} is not connected")
    if x not in Q.vertices:
        raise QuiverError(f"unknown vertex {x!r}")
    if R < 1:
        raise ValueError(f"the radius must be at least 1, got {R}")
    free = _tietze(B).is_free
    limit = budget or default_budget()
    reps: list[Walk] = []
    by_key: dict = {}
    by_end: dict[str, list[int]] = {}

    def find(w: Walk) -> int | None:
        if free:
            return by_key.get(homotopy_key(B, w))
        for i in by_end.get(w.end, []):
            v = homotopic(B, w, reps[i], limit)
            if v.proven:
                return i
            if v.unknown:
                raise CoverError(f"undecided class equality at budget {limit}: "
                                 f"{w} vs {reps[i]}")
        return None

    for w in reduced_walks_from(Q, x, R):
        if find(w) is None:
            by_end.setdefault(w.end, []).append(len(reps))
            if free:
                by_key[homotopy_key(B, w)] = len(reps)
            reps.append(w)

    counts: dict[str, int] = {}
    names = []
    for w in reps:
        k = counts.get(w.end, 0)
        counts[w.end] = k + 1
        names.append(f"{w.end}_{k}")
    arrows, amap = [], {}
    acount: dict[str, int] = {}
    lifted: dict[tuple[int, str], int] = {}
    for i, w in enumerate(reps):
        for a in Q.out_arrows(w.end):
            j = find(reduce_walk(w * Walk(w.end, (Step(a),))))
            if j is None:
                continue
            k = acount.get(a.label, 0)
            acount[a.label] = k + 1
            label = f"{a.label}_{k}"
            arrows.append(Arrow(label, names[i], names[j]))
            amap[label] = a.label
            lifted[(i, a.label)] = j
    CQ = Quiver(tuple(names), tuple(arrows))
    alabel = {(names.index(ar.source), amap[ar.label]): ar.label for ar in arrows}

    def lift(p: Walk, i: int) -> Walk | None:
        start = names[i]
        steps = []
        for s in p.steps:
            label = alabel.get((i, s.arrow.label))
            if label is None:
                return None
            steps.append(Step(CQ.arrow(label)))
            i = lifted[(i, s.arrow.label)]
        return Walk(start, tuple(steps))

    gens = []
    for rel in minimal_relations(B).relations:
        for i, w in enumerate(reps):
            if w.end != rel.relation.start:
                continue
            terms = [(lift(p, i), c) for p, c in rel.relation.terms]
            if all(t is not None for t, _ in terms):
                gens.append(LinearCombo.build(terms))
    cover = BoundQuiver(CQ, gens, name=f"{B.name}_ball{R}", validate=False)
    F = QuiverMorphism(cover, B, {names[i]: w.end for i, w in enumerate(reps)}, amap)
    interior = frozenset(names[i] for i, w in enumerate(reps) if len(w) < R)

    deck: dict[str, dict[str, str]] = {}
    P = pi1_presentation(B, x)
    T = _tietze(B) if P.base == Q.vertices[0] else None
    for g, label in enumerate(P.generators, start=1):
        loop = _generator_loop(B, x, label)
        trivial = decide_word(P.group, (g,), Budget(limit), T)
        if trivial.proven:
            continue
        perm = {}
        for i, w in enumerate(reps):
            j = find(reduce_walk(loop * w))
            if j is not None:
                perm[names[i]] = names[j]
        deck[label] = perm
    return CoverBall(B, x, R, cover, F, {names[i]: w for i, w in enumerate(reps)},
                     interior, deck)


# -- simple connectedness --------------------------------------------------------

def is_simply_connected(B: BoundQuiver, budget: int | None = None) -> Verdict:
    """Triviality of pi_1 for this presentation.

    Proven when every generator is shown trivial, Refuted with the
    certificate separating the first non-trivial generator.
    """
    P = pi1_presentation(B)
    limit = budget or default_budget()
    if not P.generators:
        return Verdict(Status.PROVEN, ProofTrace("free-reduction"), 0)
    T = _tietze(B) if P.base == B.quiver.vertices[0] else None
    spent, unknown = 0, None
    for g in range(1, len(P.generators) + 1):
        v = decide_word(P.group, (g,), Budget(limit), T)
        spent += v.spent
        if v.refuted:
            return Verdict(Status.REFUTED, v.certificate, spent, (g,))
        if v.unknown:
            unknown = v
    if unknown is not None:
        return Verdict(Status.UNKNOWN, None, spent)
    if T is not None and T.is_free:
        return Verdict(Status.PROVEN, ProofTrace("tietze", tietze=T), spent)
    return Verdict(Status.PROVEN, ProofTrace("generators"), spent)


@dataclass
class StrongReport:
    verdict: Verdict
    witness: tuple[str, ...] | None
    checked: int
    truncated: bool

    def to_json(self) -> dict:
        return {"verdict": self.verdict.to_json(),
                "witness": list(self.witness) if self.witness else None,
                "checked": self.checked, "truncated": self.truncated}


def is_strongly_simply_connected(B: BoundQuiver, budget: int | None = None,
                                 cap: int = 10_000) -> StrongReport:
    """Simple connectedness of every connected convex subquiver with its
    induced ideal; the first failure is returned as the witness."""
    subsets = convex_subsets(B.quiver, cap, connected=True)
    unknown = False
    spent = 0
    for k, V in enumerate(subsets.subsets, start=1):
        sub = induce_on_convex(B, V)
        v = is_simply_connected(sub, budget)
        spent += v.spent
        if v.refuted:
            return StrongReport(Verdict(Status.REFUTED, v.certificate, spent, v.word),
                                tuple(sorted(V, key=B.quiver.vertex_position)), k, False)
        unknown = unknown or v.unknown
    if unknown or subsets.truncated:
        return StrongReport(Verdict(Status.UNKNOWN, None, spent), None,
                            len(subsets.subsets), subsets.truncated)
    return StrongReport(Verdict(Status.PROVEN, ProofTrace("convex-subsets"), spent), None,
                        len(subsets.subsets), False)


def load_json(path: str | Path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))
