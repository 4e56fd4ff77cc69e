"""The homotopy relation of a bound quiver as a finitely presented group.

Homotopy questions reduce to the word problem in pi_1(Q, I), presented by
one generator per arrow outside a breadth-first spanning tree and one
relator per pair of paths sharing a minimal relation. The word problem is
only semi-decidable in general, so answers come as a :class:`Verdict`:
``proven`` with a replayable trace, ``refuted`` with a finite-quotient
certificate, or ``unknown`` once the budget runs out.
"""

from __future__ import annotations

import enum
import os
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .groups import (AbelianCertificate, Budget, BudgetExhausted, CosetCertificate,
                     CosetTable, PermutationCertificate, Presentation, TietzeResult,
                     Word, abelian_invariants, abelian_separator, acts_trivially,
                     apply_word, free_reduce, free_separator, invert, random_quotient_search,
                     substitute, tietze, todd_coxeter, word_str)
from .quiver import Contour, QuiverError, Walk, is_reduced_cycle
from .relations import BoundQuiver, minimal_relations

DEFAULT_BUDGET = 10 ** 6


def default_budget() -> int:
    return int(os.environ.get("QPI1_BUDGET", DEFAULT_BUDGET))


class Status(str, enum.Enum):
    PROVEN = "proven"
    REFUTED = "refuted"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ProofTrace:
    """Why a word is trivial: free reduction, a Tietze rewriting or a
    complete coset enumeration of the trivial subgroup."""

    kind: str
    tietze: TietzeResult | None = None
    table: CosetTable | None = None

    def replay(self, P: Presentation, w: Sequence[int]) -> bool:
        if self.kind == "free-reduction":
            return free_reduce(w) == ()
        if self.kind == "tietze":
            T = self.tietze
            return T.original == P and T.replay() and T.image(w) == ()
        if self.kind == "coset-enumeration":
            perms = self.table.permutations()
            return (all(acts_trivially(perms, r) for r in P.relators)
                    and acts_trivially(perms, w))
        return False

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.tietze is not None:
            names = self.tietze.original.generators
            out["eliminations"] = [
                {"generator": names[e.generator - 1],
                 "image": word_str(e.image, names),
                 "relator": word_str(e.relator, names)}
                for e in self.tietze.eliminations]
        if self.table is not None:
            out["index"] = self.table.index
        return out


@dataclass(frozen=True)
class Verdict:
    status: Status
    certificate: object = None
    spent: int = 0
    word: Word = ()

    @property
    def proven(self) -> bool:
        return self.status is Status.PROVEN

    @property
    def refuted(self) -> bool:
        return self.status is Status.REFUTED

    @property
    def unknown(self) -> bool:
        return self.status is Status.UNKNOWN

    def to_json(self) -> dict:
        out = {"status": self.status.value, "budget_spent": self.spent}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out


# -- the presentation -----------------------------------------------------------

@dataclass(frozen=True)
class GroupPresentation:
    """pi_1(Q, I, x) presented over the arrows outside a spanning tree."""

    generators: tuple[str, ...]
    relators: tuple[Word, ...]
    base: str
    tree: tuple[str, ...]

    @property
    def group(self) -> Presentation:
        return Presentation(self.generators, self.relators)

    def word(self, w: Walk) -> Word:
        index = {g: i + 1 for i, g in enumerate(self.generators)}
        out = []
        for s in w.steps:
            g = index.get(s.arrow.label)
            if g is not None:
                out.append(-g if s.inverse else g)
        return free_reduce(out)

    def __str__(self) -> str:
        return str(self.group)


def spanning_tree(B: BoundQuiver, x: str) -> list[str]:
    """Breadth-first spanning tree from ``x``; incident arrows taken in
    declaration order."""
    Q = B.quiver
    seen = {x}
    tree = []
    queue = deque([x])
    while queue:
        v = queue.popleft()
        incident = sorted(Q.out_arrows(v) + Q.in_arrows(v),
                          key=lambda a: Q.arrow_position(a.label))
        for a in incident:
            other = a.target if a.source == v else a.source
            if other not in seen:
                seen.add(other)
                tree.append(a.label)
                queue.append(other)
    if len(seen) != len(Q.vertices):
        raise QuiverError(f"{B.name} is not connected; pi_1 needs a connected quiver")
    return tree


def pi1_presentation(B: BoundQuiver, x: str | None = None) -> GroupPresentation:
    x = B.quiver.vertices[0] if x is None else x
    cache = _cache(B)
    if ("pres", x) in cache:
        return cache[("pres", x)]
    tree = spanning_tree(B, x)
    in_tree = set(tree)
    gens = tuple(a.label for a in B.quiver.arrows if a.label not in in_tree)
    partial = GroupPresentation(gens, (), x, tuple(tree))
    rels = []
    for rel in minimal_relations(B).relations:
        paths = rel.support
        for i in range(len(paths)):
            for j in range(i + 1, len(paths)):
                r = free_reduce(partial.word(paths[i]) + invert(partial.word(paths[j])))
                if r:
                    rels.append(r)
    P = GroupPresentation(gens, tuple(rels), x, tuple(tree))
    cache[("pres", x)] = P
    return P


def _cache(B: BoundQuiver) -> dict:
    if not hasattr(B, "_homotopy_cache"):
        B._homotopy_cache = {}
    return B._homotopy_cache


def _tietze(B: BoundQuiver) -> TietzeResult:
    cache = _cache(B)
    if "tietze" not in cache:
        cache["tietze"] = tietze(pi1_presentation(B).group)
    return cache["tietze"]


# -- deciding words --------------------------------------------------------------

def _lift_free_certificate(T: TietzeResult, image: Word) -> PermutationCertificate:
    """Permutations for the original generators from a separating
    representation of the free group on the kept generators."""
    renumber = {g: i + 1 for i, g in enumerate(T.kept)}
    local = tuple(renumber[abs(x)] * (1 if x > 0 else -1) for x in image)
    perms = free_separator(local, len(T.kept))
    return _extend_to_original(T, perms)


def _extend_to_original(T: TietzeResult, perms: list[list[int]]) -> PermutationCertificate:
    renumber = {g: i + 1 for i, g in enumerate(T.kept)}
    degree = len(perms[0]) if perms else 1
    images = []
    for g in range(1, T.original.ngens + 1):
        if g in renumber:
            images.append(tuple(perms[renumber[g] - 1]))
        else:
            word = tuple(renumber[abs(x)] * (1 if x > 0 else -1)
                         for x in T.substitution[g])
            images.append(tuple(apply_word(perms, word, i) for i in range(degree)))
    return PermutationCertificate(tuple(images))


def decide_word(P: Presentation, w: Sequence[int], budget: Budget,
                T: TietzeResult | None = None, seed: int = 0) -> Verdict:
    """Is ``w`` trivial in the group presented by ``P``?"""
    w = free_reduce(w)
    if not w:
        return Verdict(Status.PROVEN, ProofTrace("free-reduction"), budget.spent, w)
    try:
        budget.charge(len(w))
        cert = abelian_separator(P, w)
        if cert is not None:
            return Verdict(Status.REFUTED, cert, budget.spent, w)
        T = T if T is not None else tietze(P, budget)
        if T.is_free:
            image = T.image(w)
            budget.charge(len(image) + 1)
            if not image:
                return Verdict(Status.PROVEN, ProofTrace("tietze", tietze=T),
                               budget.spent, w)
            return Verdict(Status.REFUTED, _lift_free_certificate(T, image),
                           budget.spent, w)
        simple = T.presentation()
        renumber = {g: i + 1 for i, g in enumerate(T.kept)}
        image = tuple(renumber[abs(x)] * (1 if x > 0 else -1) for x in T.image(w))
        try:
            table = todd_coxeter(simple, (), budget)
        except BudgetExhausted:
            if budget.remaining <= 0:
                raise
            table = None
        if table is not None:
            perms = table.permutations()
            if acts_trivially(perms, image):
                full = CosetTable(P.ngens, _table_for(T, table))
                return Verdict(Status.PROVEN, ProofTrace("coset-enumeration", table=full),
                               budget.spent, w)
            cert = _extend_to_original(T, perms)
            return Verdict(Status.REFUTED, CosetCertificate(cert.images), budget.spent, w)
        rng = random.Random(seed)
        cert = random_quotient_search(simple, image, (2, 3, 4, 5, 6), 200, rng, budget)
        if cert is not None:
            return Verdict(Status.REFUTED, _extend_to_original(T, [list(p) for p in cert.images]),
                           budget.spent, w)
    except BudgetExhausted:
        pass
    return Verdict(Status.UNKNOWN, None, budget.spent, w)


def _table_for(T: TietzeResult, table: CosetTable) -> list[list[int]]:
    """Coset table columns for the original generators."""
    cert = _extend_to_original(T, table.permutations())
    n = table.index
    out = []
    for c in range(n):
        row = []
        for p in cert.images:
            inv = [0] * n
            for i, j in enumerate(p):
                inv[j] = i
            row.extend([p[c], inv[c]])
        out.append(row)
    return out


def homotopic(B: BoundQuiver, w1: Walk, w2: Walk, budget: int | None = None) -> Verdict:
    """Decide ``w1 ~ w2`` for walks with common endpoints."""
    if (w1.start, w1.end) != (w2.start, w2.end):
        raise QuiverError(f"walks {w1} ({w1.start}->{w1.end}) and {w2} "
                          f"({w2.start}->{w2.end}) are not parallel")
    P = pi1_presentation(B)
    word = P.word(w1 * w2.inverse())
    return decide_word(P.group, word, Budget(budget or default_budget()), _tietze(B))


def contractible(B: BoundQuiver, C: Walk, budget: int | None = None) -> Verdict:
    if not C.is_closed:
        raise QuiverError(f"{C} is not closed")
    return homotopic(B, C, Walk(C.start), budget)


def homotopy_key(B: BoundQuiver, w: Walk) -> tuple | None:
    """A complete invariant of the homotopy class of ``w`` (with its
    endpoints), available when pi_1 simplifies to a free group."""
    T = _tietze(B)
    if not T.is_free:
        return None
    P = pi1_presentation(B)
    return (w.start, w.end, T.image(P.word(w)))


# -- natural homotopy ------------------------------------------------------------

def _substitutions(B: BoundQuiver) -> dict[tuple[str, ...], set[tuple[str, ...]]]:
    cache = _cache(B)
    if "subst" not in cache:
        table: dict[tuple[str, ...], set[tuple[str, ...]]] = {}
        for rel in minimal_relations(B).relations:
            labels = [p.labels() for p in rel.support]
            for v in labels:
                table.setdefault(v, set()).update(u for u in labels if u != v)
        cache["subst"] = table
    return cache["subst"]


def natural_class(B: BoundQuiver, p: Walk) -> set[tuple[str, ...]]:
    """All paths (as label tuples) naturally homotopic to ``p``."""
    table = _substitutions(B)
    start = p.labels()
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        n = len(cur)
        for i in range(n):
            for j in range(i + 1, n + 1):
                for alt in table.get(cur[i:j], ()):
                    nxt = cur[:i] + alt + cur[j:]
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
    return seen


def naturally_homotopic(B: BoundQuiver, p: Walk, q: Walk) -> bool:
    """Closure of single subpath substitutions within minimal relations."""
    if not (p.is_path and q.is_path):
        raise QuiverError("natural homotopy is defined on paths")
    if (p.start, p.end) != (q.start, q.end):
        return False
    if p.steps == q.steps:
        return True
    return q.labels() in natural_class(B, p)


# -- contours and torsion --------------------------------------------------------

@dataclass(frozen=True)
class ContourClass:
    kind: str                 # contractible | torsion | no-torsion-found | unknown
    order: int | None = None  # for torsion
    bound: int | None = None  # for no-torsion-found

    def __str__(self) -> str:
        if self.kind == "torsion":
            return f"Torsion({self.order})"
        if self.kind == "no-torsion-found":
            return f"NoTorsionFound({self.bound})"
        return self.kind.capitalize()

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.order is not None:
            out["order"] = self.order
        if self.bound is not None:
            out["bound"] = self.bound
        return out


def contour_class(B: BoundQuiver, c: Contour, n_max: int = 6,
                  budget: int | None = None) -> ContourClass:
    """Contractible, torsion of least order n <= n_max, or neither.

    A contractible contour trivially satisfies every power; it is reported
    as contractible, never as torsion of order 2.
    """
    cyc = c.cycle()
    first = contractible(B, cyc, budget)
    if first.proven:
        return ContourClass("contractible")
    all_refuted = first.refuted
    for n in range(2, n_max + 1):
        v = contractible(B, cyc ** n, budget)
        if v.proven:
            if first.refuted:
                return ContourClass("torsion", order=n)
            return ContourClass("unknown")
        all_refuted = all_refuted and v.refuted
    return ContourClass("no-torsion-found", bound=n_max) if all_refuted \
        else ContourClass("unknown")


@dataclass(frozen=True)
class Freeness:
    verdict: str                 # free | not-free | unknown
    rank: int | None = None
    certificate: object = None

    def __str__(self) -> str:
        return f"Free({self.rank})" if self.verdict == "free" else self.verdict

    def to_json(self) -> dict:
        out: dict = {"verdict": self.verdict}
        if self.rank is not None:
            out["rank"] = self.rank
        if self.certificate is not None:
            out["certificate"] = self.certificate
        return out


def freeness(P: GroupPresentation | Presentation, budget: int | None = None) -> Freeness:
    """Tietze-simplify; no relators left means free of the remaining rank.

    Non-freeness is only claimed with torsion evidence: torsion in the
    abelianization, or a complete enumeration showing a finite non-trivial
    group.
    """
    group = P.group if isinstance(P, GroupPresentation) else P
    b = Budget(budget or default_budget())
    T = tietze(group, b)
    if T.is_free:
        return Freeness("free", rank=T.rank)
    torsion, free_rank = abelian_invariants(group)
    if torsion:
        return Freeness("not-free", certificate={"kind": "abelian-torsion",
                                                 "invariants": torsion,
                                                 "free_rank": free_rank})
    try:
        table = todd_coxeter(T.presentation(), (), b)
    except BudgetExhausted:
        return Freeness("unknown")
    if table.index > 1:
        return Freeness("not-free", certificate={"kind": "finite-group",
                                                 "order": table.index})
    return Freeness("free", rank=0)


@dataclass
class TorsionScan:
    n_max: int
    classes: list[tuple[Contour, ContourClass]]

    @property
    def torsion(self) -> list[tuple[Contour, ContourClass]]:
        return [(c, k) for c, k in self.classes if k.kind == "torsion"]

    @property
    def unknown(self) -> int:
        return sum(1 for _, k in self.classes if k.kind == "unknown")

    def to_json(self) -> dict:
        return {"n_max": self.n_max, "contours": len(self.classes),
                "torsion": [{"contour": str(c), "class": k.to_json()}
                            for c, k in self.torsion],
                "unknown": self.unknown,
                "counts": _count_kinds(self.classes)}


def _count_kinds(classes) -> dict:
    out: dict[str, int] = {}
    for _, k in classes:
        out[k.kind] = out.get(k.kind, 0) + 1
    return dict(sorted(out.items()))


def torsion_free_scan(B: BoundQuiver, n_max: int = 6,
                      budget: int | None = None) -> TorsionScan:
    from .cycles import enumerate_contours

    return TorsionScan(n_max, [(c, contour_class(B, c, n_max, budget))
                               for c in enumerate_contours(B.quiver)])
