"""Finite quivers, walks and the purely graph-theoretic operations on them.

Nothing in this module knows about ideals: paths, cycles, sources,
longest-path distance and convexity depend on the quiver alone.

Walks are written left to right, so ``alpha beta`` means "first alpha,
then beta".
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Sequence


class QuiverError(ValueError):
    """Raised for structurally invalid quivers or walks."""


class Arrow(NamedTuple):
    label: str
    source: str
    target: str


@dataclass(frozen=True, order=True)
class Step:
    """An arrow traversed forwards or backwards (formal inverse)."""

    arrow: Arrow
    inverse: bool = False

    @property
    def start(self) -> str:
        return self.arrow.target if self.inverse else self.arrow.source

    @property
    def end(self) -> str:
        return self.arrow.source if self.inverse else self.arrow.target

    def invert(self) -> "Step":
        return Step(self.arrow, not self.inverse)

    def __str__(self) -> str:
        return self.arrow.label + ("^-1" if self.inverse else "")


@dataclass(frozen=True)
class Walk:
    """A trivial path at ``base`` or an endpoint-compatible sequence of steps."""

    base: str
    steps: tuple[Step, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if self.steps and self.steps[0].start != self.base:
            raise QuiverError(
                f"walk base {self.base!r} differs from start of {self.steps[0]}")
        for left, right in zip(self.steps, self.steps[1:]):
            if left.end != right.start:
                raise QuiverError(f"steps {left} and {right} are not composable")

    @classmethod
    def of(cls, steps: Sequence[Step]) -> "Walk":
        if not steps:
            raise QuiverError("use Walk(base) for a trivial walk")
        return cls(steps[0].start, tuple(steps))

    @property
    def start(self) -> str:
        return self.base

    @property
    def end(self) -> str:
        return self.steps[-1].end if self.steps else self.base

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def is_trivial(self) -> bool:
        return not self.steps

    @property
    def is_path(self) -> bool:
        """True for trivial walks and walks made only of forward steps."""
        return all(not s.inverse for s in self.steps)

    @property
    def is_closed(self) -> bool:
        return self.start == self.end

    def is_reduced(self) -> bool:
        return all(b != a.invert() for a, b in zip(self.steps, self.steps[1:]))

    def inverse(self) -> "Walk":
        return Walk(self.end, tuple(s.invert() for s in reversed(self.steps)))

    def __mul__(self, other: "Walk") -> "Walk":
        if self.end != other.start:
            raise QuiverError(f"cannot compose walk ending at {self.end!r} "
                              f"with walk starting at {other.start!r}")
        return Walk(self.base, self.steps + other.steps)

    def __pow__(self, n: int) -> "Walk":
        if not self.is_closed:
            raise QuiverError("only closed walks can be raised to a power")
        if n < 0:
            return self.inverse() ** (-n)
        return Walk(self.base, self.steps * n)

    def vertices(self) -> list[str]:
        """Visited vertices, including both endpoints."""
        return [self.base] + [s.end for s in self.steps]

    def labels(self) -> tuple[str, ...]:
        return tuple(s.arrow.label for s in self.steps)

    def __str__(self) -> str:
        if not self.steps:
            return f"e_{self.base}"
        if self.is_path:
            return ".".join(self.labels())
        return " ".join(str(s) for s in self.steps)


def reduce_walk(w: Walk) -> Walk:
    """Cancel adjacent ``c c^-1`` pairs until none remain."""
    out: list[Step] = []
    for step in w.steps:
        if out and out[-1] == step.invert():
            out.pop()
        else:
            out.append(step)
    return Walk(w.base, tuple(out))


# -- cycles ------------------------------------------------------------------

def is_cycle(w: Walk) -> bool:
    return not w.is_trivial and w.is_closed


def is_reduced_cycle(w: Walk) -> bool:
    """Reduced as a walk and additionally ``c_1 != c_n^-1``."""
    return is_cycle(w) and w.is_reduced() and w.steps[0] != w.steps[-1].invert()


def is_simple_cycle(w: Walk) -> bool:
    starts = [s.start for s in w.steps]
    return is_cycle(w) and len(set(starts)) == len(starts)


def rotate(w: Walk, k: int) -> Walk:
    """The same cycle read from its ``k``-th step onwards."""
    if not is_cycle(w):
        raise QuiverError("only cycles can be rotated")
    k %= len(w.steps)
    return Walk.of(w.steps[k:] + w.steps[:k])


def rotations(w: Walk) -> Iterator[Walk]:
    for k in range(len(w.steps)):
        yield rotate(w, k)


def _corner_kinds(w: Walk) -> list[tuple[int, str]]:
    # corner i sits between steps i and i+1 (cyclically)
    n = len(w.steps)
    out = []
    for i in range(n):
        left, right = w.steps[i], w.steps[(i + 1) % n]
        if left.inverse and not right.inverse:
            out.append((i, "source"))
        elif not left.inverse and right.inverse:
            out.append((i, "sink"))
    return out


def sigma(C: Walk) -> int:
    """Number of sources of a reduced cycle.

    A corner between consecutive steps ``c_i c_{i+1}`` is a source when both
    underlying arrows start at the shared vertex.
    """
    if not is_reduced_cycle(C):
        raise QuiverError(f"sigma is defined on reduced cycles only, got {C}")
    return sum(1 for _, kind in _corner_kinds(C) if kind == "source")


def source_positions(C: Walk) -> list[int]:
    """Indices ``i`` such that the vertex ``e(c_i)`` is a source of ``C``."""
    return [i for i, kind in _corner_kinds(C) if kind == "source"]


def sink_positions(C: Walk) -> list[int]:
    return [i for i, kind in _corner_kinds(C) if kind == "sink"]


@dataclass(frozen=True)
class CycleClass:
    reduced: bool
    simple: bool
    oriented: bool


def classify_cycle(C: Walk) -> CycleClass:
    if not is_cycle(C):
        raise QuiverError(f"{C} is not a cycle")
    oriented = C.is_path or C.inverse().is_path
    return CycleClass(reduced=is_reduced_cycle(C), simple=is_simple_cycle(C),
                      oriented=oriented)


def formed_contour(C: Walk) -> "Contour":
    """For a reduced cycle with one source, the contour ``(p, q)`` it forms.

    The cycle is rotated to start at its source so that it reads ``p q^-1``.
    """
    positions = source_positions(C) if is_reduced_cycle(C) else []
    if len(positions) != 1:
        raise QuiverError(f"{C} does not form a contour (needs exactly one source)")
    D = rotate(C, positions[0] + 1)
    split = next(i for i, s in enumerate(D.steps) if s.inverse)
    p = Walk.of(D.steps[:split])
    q = Walk.of(D.steps[split:]).inverse()
    return Contour(p, q)


# -- quivers -----------------------------------------------------------------

@dataclass(frozen=True)
class Contour:
    """Two distinct non-trivial parallel paths."""

    p: Walk
    q: Walk

    def __post_init__(self):
        for w in (self.p, self.q):
            if w.is_trivial or not w.is_path:
                raise QuiverError(f"contour members must be non-trivial paths, got {w}")
        if (self.p.start, self.p.end) != (self.q.start, self.q.end):
            raise QuiverError("contour paths must share start and end")
        if self.p.steps == self.q.steps:
            raise QuiverError("contour paths must differ")

    @property
    def start(self) -> str:
        return self.p.start

    @property
    def end(self) -> str:
        return self.p.end

    def cycle(self) -> Walk:
        """The cycle ``p q^-1`` based at the common start."""
        return self.p * self.q.inverse()

    def __str__(self) -> str:
        return f"({self.p}, {self.q})"


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]
    _index: dict = field(default=None, init=False, repr=False, compare=False,
                         hash=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "arrows", tuple(Arrow(*a) for a in self.arrows))
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex")
        known = set(self.vertices)
        labels = {}
        for a in self.arrows:
            if a.label in labels:
                raise QuiverError(f"duplicate arrow label {a.label!r}")
            for v in (a.source, a.target):
                if v not in known:
                    raise QuiverError(f"arrow {a.label!r} uses unknown vertex {v!r}")
            labels[a.label] = a
        out = {v: [] for v in self.vertices}
        inc = {v: [] for v in self.vertices}
        for a in self.arrows:
            out[a.source].append(a)
            inc[a.target].append(a)
        object.__setattr__(self, "_index", {
            "arrow": labels,
            "out": {v: tuple(xs) for v, xs in out.items()},
            "in": {v: tuple(xs) for v, xs in inc.items()},
            "arrow_pos": {a.label: i for i, a in enumerate(self.arrows)},
            "vertex_pos": {v: i for i, v in enumerate(self.vertices)},
        })

    @classmethod
    def from_edges(cls, vertices: Iterable[str], edges: Iterable[tuple[str, str, str]]):
        return cls(tuple(vertices), tuple(Arrow(*e) for e in edges))

    def arrow(self, label: str) -> Arrow:
        try:
            return self._index["arrow"][label]
        except KeyError:
            raise QuiverError(f"unknown arrow {label!r}") from None

    def out_arrows(self, v: str) -> tuple[Arrow, ...]:
        return self._index["out"][v]

    def in_arrows(self, v: str) -> tuple[Arrow, ...]:
        return self._index["in"][v]

    def arrow_position(self, label: str) -> int:
        return self._index["arrow_pos"][label]

    def vertex_position(self, v: str) -> int:
        return self._index["vertex_pos"][v]

    def path_key(self, w: Walk) -> tuple[int, ...]:
        """Sort key realising the lexicographic order on arrow sequences."""
        return tuple(self.arrow_position(s.arrow.label) for s in w.steps)

    def path(self, *labels: str, start: str | None = None) -> Walk:
        """A path given by arrow labels; ``start`` is needed only when trivial."""
        if not labels:
            if start is None:
                raise QuiverError("a trivial path needs its vertex")
            return Walk(start)
        return Walk.of([Step(self.arrow(l)) for l in labels])

    def walk(self, text: str | Sequence[str], start: str | None = None) -> Walk:
        """Parse ``"mu lambda^-1"`` style walk literals."""
        tokens = text.split() if isinstance(text, str) else list(text)
        steps = []
        for tok in tokens:
            inverse = tok.endswith("^-1")
            label = tok[:-3] if inverse else tok
            steps.append(Step(self.arrow(label), inverse))
        if not steps:
            if start is None:
                raise QuiverError("empty walk literal needs a start vertex")
            return Walk(start)
        return Walk.of(steps)

    def neighbours(self, v: str) -> list[str]:
        return ([a.target for a in self.out_arrows(v)]
                + [a.source for a in self.in_arrows(v)])

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        seen = {self.vertices[0]}
        todo = [self.vertices[0]]
        while todo:
            v = todo.pop()
            for u in self.neighbours(v):
                if u not in seen:
                    seen.add(u)
                    todo.append(u)
        return len(seen) == len(self.vertices)

    def full_subquiver(self, vertex_set: Iterable[str]) -> "Quiver":
        keep = set(vertex_set)
        return Quiver(tuple(v for v in self.vertices if v in keep),
                      tuple(a for a in self.arrows
                            if a.source in keep and a.target in keep))

    def cycle_rank(self) -> int:
        """First Betti number of the underlying graph."""
        return len(self.arrows) - len(self.vertices) + self._components()

    def _components(self) -> int:
        seen: set[str] = set()
        count = 0
        for root in self.vertices:
            if root in seen:
                continue
            count += 1
            seen.add(root)
            todo = [root]
            while todo:
                v = todo.pop()
                for u in self.neighbours(v):
                    if u not in seen:
                        seen.add(u)
                        todo.append(u)
        return count


# -- acyclic structure -------------------------------------------------------

def topological_order(Q: Quiver) -> list[str] | None:
    """Kahn's algorithm, ties broken by declaration order; None if cyclic."""
    indeg = {v: len(Q.in_arrows(v)) for v in Q.vertices}
    ready = deque(v for v in Q.vertices if indeg[v] == 0)
    order = []
    while ready:
        v = ready.popleft()
        order.append(v)
        for a in Q.out_arrows(v):
            indeg[a.target] -= 1
            if indeg[a.target] == 0:
                ready.append(a.target)
    return order if len(order) == len(Q.vertices) else None


def is_triangular(Q: Quiver) -> bool:
    """True iff ``Q`` has no oriented cycle."""
    return topological_order(Q) is not None


def _require_acyclic(Q: Quiver, what: str) -> list[str]:
    order = topological_order(Q)
    if order is None:
        raise QuiverError(f"{what} needs an acyclic quiver; this one has an "
                          "oriented cycle (supply max_length to bound the search)")
    return order


def enumerate_paths(Q: Quiver, a: str, b: str,
                    max_length: int | None = None) -> list[Walk]:
    """All directed paths from ``a`` to ``b`` in lexicographic arrow order.

    The trivial path is included when ``a == b``. On a quiver with oriented
    cycles a ``max_length`` cap is mandatory.
    """
    if max_length is None:
        _require_acyclic(Q, "unbounded path enumeration")
    out: list[Walk] = []

    def extend(v: str, steps: list[Step]):
        if v == b:
            out.append(Walk(a, tuple(steps)) if steps else Walk(a))
        if max_length is not None and len(steps) >= max_length:
            return
        for arrow in Q.out_arrows(v):
            steps.append(Step(arrow))
            extend(arrow.target, steps)
            steps.pop()

    extend(a, [])
    out.sort(key=Q.path_key)
    return out


def count_paths_by_matrix(Q: Quiver, a: str, b: str) -> int:
    """Independent path count: sum of adjacency matrix powers (acyclic Q)."""
    import numpy as np

    n = len(Q.vertices)
    A = np.zeros((n, n), dtype=object)
    for arrow in Q.arrows:
        A[Q.vertex_position(arrow.source), Q.vertex_position(arrow.target)] += 1
    i, j = Q.vertex_position(a), Q.vertex_position(b)
    total = 1 if a == b else 0
    power = np.identity(n, dtype=object)
    for _ in range(n):
        power = power.dot(A)
        total += power[i, j]
    return int(total)


def distance(Q: Quiver, x: str, y: str) -> int | None:
    """Length of a longest path ``x -> y``, or None when there is none."""
    order = _require_acyclic(Q, "distance")
    best: dict[str, int] = {x: 0}
    for v in order[order.index(x):]:
        if v not in best:
            continue
        for arrow in Q.out_arrows(v):
            cand = best[v] + 1
            if cand > best.get(arrow.target, -1):
                best[arrow.target] = cand
    return best.get(y)


def descendants(Q: Quiver) -> dict[str, frozenset[str]]:
    """Strict descendants of every vertex (acyclic Q)."""
    order = _require_acyclic(Q, "reachability")
    desc: dict[str, frozenset[str]] = {}
    for v in reversed(order):
        acc: set[str] = set()
        for arrow in Q.out_arrows(v):
            acc.add(arrow.target)
            acc |= desc[arrow.target]
        desc[v] = frozenset(acc)
    return desc


def is_convex(Q: Quiver, vertex_set: Iterable[str], _desc=None) -> bool:
    """Every directed path between members of the set stays inside it."""
    S = set(vertex_set)
    desc = _desc if _desc is not None else descendants(Q)
    for v in S:
        for w in desc[v]:
            if w not in S and desc[w] & S:
                return False
    return True


@dataclass
class ConvexSubsets:
    subsets: list[frozenset[str]]
    truncated: bool


def convex_subsets(Q: Quiver, cap: int = 10_000, connected: bool = False,
                   ) -> ConvexSubsets:
    """Non-empty convex vertex sets by cardinality, then lexicographically.

    Lexicographic order refers to the declaration order of vertices. At most
    ``cap`` sets are emitted; ``truncated`` reports whether more existed.
    """
    desc = descendants(Q)
    out: list[frozenset[str]] = []
    for size in range(1, len(Q.vertices) + 1):
        for combo in itertools.combinations(Q.vertices, size):
            if not is_convex(Q, combo, desc):
                continue
            if connected and not Q.full_subquiver(combo).is_connected():
                continue
            if len(out) == cap:
                return ConvexSubsets(out, True)
            out.append(frozenset(combo))
    return ConvexSubsets(out, False)


def sorted_vertices(Q: Quiver, vertex_set: Iterable[str]) -> list[str]:
    return sorted(vertex_set, key=Q.vertex_position)


def reduced_walks_from(Q: Quiver, x: str, max_length: int) -> list[Walk]:
    """Every reduced walk starting at ``x`` of length at most ``max_length``.

    Breadth-first, so shorter walks come first; ties follow arrow order with
    forward steps before inverse ones.
    """
    out = [Walk(x)]
    frontier = [Walk(x)]
    for _ in range(max_length):
        nxt = []
        for w in frontier:
            last = w.steps[-1] if w.steps else None
            for step in incident_steps(Q, w.end):
                if last is not None and step == last.invert():
                    continue
                nxt.append(Walk(w.base, w.steps + (step,)))
        out.extend(nxt)
        frontier = nxt
    return out


def incident_steps(Q: Quiver, v: str) -> list[Step]:
    """Steps leaving ``v``: arrows out of ``v``, then inverses of arrows into it."""
    steps = [Step(a) for a in Q.out_arrows(v)] + [Step(a, True) for a in Q.in_arrows(v)]
    steps.sort(key=lambda s: (s.inverse, Q.arrow_position(s.arrow.label)))
    return steps
