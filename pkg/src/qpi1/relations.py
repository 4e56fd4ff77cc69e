"""Bound quivers over the rationals: ideal spaces, minimal relations and
induced ideals on convex subquivers."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from . import linalg
from .quiver import (Quiver, QuiverError, Walk, enumerate_paths, is_convex,
                     is_triangular, sorted_vertices)


class RelationError(ValueError):
    pass


@dataclass(frozen=True)
class LinearCombo:
    """A finite sum of parallel paths with non-zero rational coefficients.

    Terms are kept in insertion order; equality ignores that order.
    """

    terms: tuple[tuple[Walk, Fraction], ...]
    start: str
    end: str

    @classmethod
    def build(cls, terms: Iterable[tuple[Walk, object]], start: str | None = None,
              end: str | None = None) -> "LinearCombo":
        acc: dict[Walk, Fraction] = {}
        order: list[Walk] = []
        for path, coeff in terms:
            if not path.is_path:
                raise RelationError(f"{path} is not a path")
            if path not in acc:
                order.append(path)
                acc[path] = Fraction(0)
            acc[path] += Fraction(coeff)
        kept = tuple((p, acc[p]) for p in order if acc[p] != 0)
        ends = {(p.start, p.end) for p in order}
        if len(ends) > 1:
            raise RelationError("terms of a relation must be parallel paths, got "
                                + ", ".join(f"{p}: {p.start}->{p.end}" for p in order))
        if ends:
            start, end = next(iter(ends))
        if start is None or end is None:
            raise RelationError("an empty combination needs explicit endpoints")
        return cls(kept, start, end)

    @property
    def support(self) -> tuple[Walk, ...]:
        return tuple(p for p, _ in self.terms)

    def coefficient(self, path: Walk) -> Fraction:
        return dict(self.terms).get(path, Fraction(0))

    def restrict(self, paths: Iterable[Walk]) -> "LinearCombo":
        keep = set(paths)
        return LinearCombo(tuple(t for t in self.terms if t[0] in keep),
                           self.start, self.end)

    def scale(self, c) -> "LinearCombo":
        return LinearCombo.build([(p, Fraction(c) * x) for p, x in self.terms],
                                 self.start, self.end)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, LinearCombo):
            return NotImplemented
        return ((self.start, self.end) == (other.start, other.end)
                and dict(self.terms) == dict(other.terms))

    def __hash__(self):
        return hash((self.start, self.end, frozenset(self.terms)))

    def __str__(self) -> str:
        return format_combo(self)


def format_combo(rho: LinearCombo) -> str:
    """Signed sum of dot-separated path terms, e.g. ``alpha.beta - 2*gamma.delta``."""
    if not rho.terms:
        return "0"
    parts = []
    for i, (p, c) in enumerate(rho.terms):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        coeff = "" if mag == 1 else f"{mag}*"
        body = coeff + ".".join(p.labels())
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


def compose_paths(u: Walk, p: Walk, v: Walk) -> Walk:
    return u * p * v


@dataclass(frozen=True)
class MinimalRelation:
    """A minimal relation together with the witnesses of its minimality.

    ``witnesses`` maps each proper non-empty sub-support (as a tuple of
    coordinate indices into ``relation.support``) to the non-zero residue of
    the restricted combination modulo the ideal space.
    """

    relation: LinearCombo
    witnesses: tuple[tuple[tuple[int, ...], tuple[Fraction, ...]], ...]

    @property
    def support(self) -> tuple[Walk, ...]:
        return self.relation.support


@dataclass
class MinimalRelations:
    relations: list[MinimalRelation]
    partial: bool


class BoundQuiver:
    """A finite quiver with an admissible ideal given by generators.

    Ideal spaces ``I(a, b)`` are computed on demand and cached; after
    construction the object is treated as immutable.
    """

    def __init__(self, quiver: Quiver, generators: Iterable[LinearCombo] = (),
                 name: str = "Q", validate: bool = True):
        self.quiver = quiver
        self.generators: tuple[LinearCombo, ...] = tuple(generators)
        self.name = name
        self._paths: dict[tuple[str, str], list[Walk]] = {}
        self._ideal: dict[tuple[str, str], tuple[list[list[Fraction]], list[int]]] = {}
        self._minimal: MinimalRelations | None = None
        if validate:
            problems = admissibility_problems(self)
            if problems:
                raise RelationError("; ".join(problems))

    def __repr__(self):
        return (f"BoundQuiver({self.name!r}, {len(self.quiver.vertices)} vertices, "
                f"{len(self.quiver.arrows)} arrows, {len(self.generators)} generators)")

    def paths(self, a: str, b: str) -> list[Walk]:
        key = (a, b)
        if key not in self._paths:
            self._paths[key] = enumerate_paths(self.quiver, a, b)
        return self._paths[key]

    def coordinates(self, rho: LinearCombo) -> list[Fraction]:
        index = {p: i for i, p in enumerate(self.paths(rho.start, rho.end))}
        v = [Fraction(0)] * len(index)
        for p, c in rho.terms:
            if p not in index:
                raise RelationError(f"{p} is not a path of {self.name}")
            v[index[p]] = c
        return v

    def combo(self, a: str, b: str, vector) -> LinearCombo:
        return LinearCombo.build(
            [(p, c) for p, c in zip(self.paths(a, b), vector) if c != 0], a, b)

    def _ideal_rref(self, a: str, b: str):
        key = (a, b)
        if key not in self._ideal:
            rows = []
            for g in self.generators:
                left = self.paths(a, g.start) if self._reaches(a, g.start) else []
                right = self.paths(g.end, b) if self._reaches(g.end, b) else []
                for u in left:
                    for v in right:
                        rows.append(self.coordinates(LinearCombo.build(
                            [(u * p * v, c) for p, c in g.terms], a, b)))
            self._ideal[key] = linalg.rref(rows, len(self.paths(a, b)))
        return self._ideal[key]

    def _reaches(self, a: str, b: str) -> bool:
        return bool(self.paths(a, b))

    def ideal_space(self, a: str, b: str) -> list[LinearCombo]:
        """Reduced-echelon basis of ``I(a, b)`` in path coordinates."""
        basis, _ = self._ideal_rref(a, b)
        return [self.combo(a, b, row) for row in basis]

    def ideal_dimension(self, a: str, b: str) -> int:
        return len(self._ideal_rref(a, b)[1])

    def residue(self, rho: LinearCombo) -> list[Fraction]:
        basis, pivots = self._ideal_rref(rho.start, rho.end)
        return linalg.residue(basis, pivots, self.coordinates(rho))

    def contains(self, rho: LinearCombo) -> bool:
        return not any(self.residue(rho))

    def hom_dimension(self, a: str, b: str) -> int:
        """``dim kQ(a,b) / I(a,b)``."""
        return len(self.paths(a, b)) - self.ideal_dimension(a, b)

    def vertex_pairs(self) -> list[tuple[str, str]]:
        V = self.quiver.vertices
        return [(a, b) for a in V for b in V if self.paths(a, b)]


def ideal_space(B: BoundQuiver, a: str, b: str) -> list[LinearCombo]:
    return B.ideal_space(a, b)


def membership(B: BoundQuiver, rho: LinearCombo) -> bool:
    """True iff ``rho`` lies in ``I(s(rho), e(rho))``."""
    if rho.is_zero():
        return True
    return B.contains(rho)


def admissibility_problems(B: BoundQuiver) -> list[str]:
    out = []
    for i, g in enumerate(B.generators):
        for p in g.support:
            if len(p) < 2:
                out.append(f"relation {i + 1} ({g}) has the path {p} of length "
                           f"{len(p)}; generators must lie in the square of the arrow ideal")
            for s in p.steps:
                if s.arrow not in B.quiver.arrows:
                    out.append(f"relation {i + 1} uses arrow {s.arrow.label!r} "
                               f"not in the quiver")
    if not is_triangular(B.quiver):
        out.append("the quiver has an oriented cycle (only triangular quivers are supported)")
    return out


def minimal_relations(B: BoundQuiver, cap: int = 1 << 16) -> MinimalRelations:
    """All minimal relations, one normalised representative per support.

    A support ``S`` qualifies when the elements of ``I(a, b)`` supported
    inside ``S`` form a line spanned by a vector with full support ``S``;
    then no proper sub-sum of that vector lies in the ideal. Supports are
    scanned by increasing size, ``cap`` subset tests per endpoint pair.
    """
    if B._minimal is not None and cap == 1 << 16:
        return B._minimal
    found: list[MinimalRelation] = []
    partial = False
    for a, b in B.vertex_pairs():
        basis, pivots = B._ideal_rref(a, b)
        if not basis:
            continue
        paths = B.paths(a, b)
        coords = [i for i, p in enumerate(paths) if len(p) >= 2]
        tests = 0
        done = False
        for size in range(2, len(coords) + 1):
            if done:
                break
            for S in itertools.combinations(coords, size):
                tests += 1
                if tests > cap:
                    partial = done = True
                    break
                vec = _line_with_support(basis, S, len(paths))
                if vec is None:
                    continue
                rho = B.combo(a, b, vec)
                found.append(MinimalRelation(rho, _witnesses(B, rho)))
    result = MinimalRelations(found, partial)
    if cap == 1 << 16:
        B._minimal = result
    return result


def _line_with_support(basis, S, n):
    """The normalised vector spanning ``I ∩ span(S)`` if that is a line with
    full support ``S``; otherwise None."""
    outside = [c for c in range(n) if c not in S]
    # combinations x of basis rows vanishing outside S
    rows = [[basis[r][c] for r in range(len(basis))] for c in outside]
    kernel = linalg.nullspace(rows, len(basis))
    if len(kernel) != 1:
        return None
    x = kernel[0]
    vec = [sum(x[r] * basis[r][c] for r in range(len(basis))) for c in range(n)]
    if any(vec[c] == 0 for c in S):
        return None
    lead = vec[S[0]]
    return [v / lead for v in vec]


def _witnesses(B: BoundQuiver, rho: LinearCombo):
    out = []
    n = len(rho.terms)
    for size in range(1, n):
        for J in itertools.combinations(range(n), size):
            sub = rho.restrict(rho.support[j] for j in J)
            out.append((J, tuple(B.residue(sub))))
    return tuple(out)


def verify_minimal(B: BoundQuiver, rel: MinimalRelation) -> bool:
    """Re-check membership and that every proper sub-sum leaves the ideal."""
    rho = rel.relation
    if len(rho.terms) < 2 or any(len(p) < 2 for p in rho.support):
        return False
    if not membership(B, rho):
        return False
    n = len(rho.terms)
    for size in range(1, n):
        for J in itertools.combinations(range(n), size):
            if membership(B, rho.restrict(rho.support[j] for j in J)):
                return False
    return True


def induce_on_convex(B: BoundQuiver, vertex_set: Iterable[str]) -> BoundQuiver:
    """Full convex bound subquiver with ideal ``kQ' ∩ I``.

    Convexity means every path between two chosen vertices already lies in
    the subquiver, so each ``I'(a, b)`` is all of ``I(a, b)``. Generators are
    taken pair by pair (shortest pairs first), keeping only the basis vectors
    not already generated.
    """
    V = sorted_vertices(B.quiver, vertex_set)
    if not is_convex(B.quiver, V):
        raise RelationError(f"{{{', '.join(V)}}} is not convex")
    sub = B.quiver.full_subquiver(V)
    from .quiver import distance
    pairs = [(a, b) for a in V for b in V if a != b and B.paths(a, b)]
    pairs.sort(key=lambda ab: (distance(sub, *ab), V.index(ab[0]), V.index(ab[1])))
    gens: list[LinearCombo] = []
    current = BoundQuiver(sub, (), name=f"{B.name}_{'_'.join(V)}", validate=False)
    for a, b in pairs:
        for rho in B.ideal_space(a, b):
            if not current.contains(rho):
                gens.append(rho)
                current = BoundQuiver(sub, gens, name=current.name, validate=False)
    return BoundQuiver(sub, gens, name=current.name, validate=False)


@dataclass
class Diagnostic:
    severity: str      # "error" | "warning"
    message: str
    relation: int | None = None   # index of the offending generator


@dataclass
class PresentationReport:
    connected: bool
    triangular: bool
    diagnostics: list[Diagnostic]
    hom_dimensions: dict[tuple[str, str], int]

    @property
    def ok(self) -> bool:
        return not any(d.severity == "error" for d in self.diagnostics)


def check_presentation(B: BoundQuiver) -> PresentationReport:
    """Validate a presentation and report ``dim kQ(a,b)/I(a,b)``; never raises."""
    diags: list[Diagnostic] = []
    Q = B.quiver
    connected = Q.is_connected()
    if not connected:
        diags.append(Diagnostic("warning", "the underlying graph is not connected"))
    triangular = is_triangular(Q)
    if not triangular:
        diags.append(Diagnostic("error", "the quiver has an oriented cycle"))
    for i, g in enumerate(B.generators):
        if g.is_zero():
            diags.append(Diagnostic("warning", f"relation {i + 1} is zero", i))
        for p in g.support:
            if len(p) < 2:
                diags.append(Diagnostic(
                    "error", f"relation {i + 1} contains {p} of length {len(p)}; "
                    "admissible relations use paths of length at least 2", i))
    dims = {}
    if triangular:
        for a, b in B.vertex_pairs():
            dims[(a, b)] = B.hom_dimension(a, b)
    return PresentationReport(connected, triangular, diags, dims)
