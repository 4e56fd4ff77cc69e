"""Contours and cycles: interlacing, reducibility, natural contractibility and
the source arithmetic of splitting a cycle along a path."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Iterator

from .quiver import (Arrow, Contour, Quiver, QuiverError, Step, Walk, enumerate_paths,
                     formed_contour, is_reduced_cycle, is_simple_cycle, rotate, sigma,
                     sink_positions, source_positions)
from .relations import BoundQuiver


def enumerate_contours(Q: Quiver) -> list[Contour]:
    """Every unordered pair of distinct parallel non-trivial paths.

    Grouped by endpoints in vertex order; within a group pairs follow the
    lexicographic path order.
    """
    out = []
    for a in Q.vertices:
        for b in Q.vertices:
            if a == b:
                continue
            paths = enumerate_paths(Q, a, b)
            for i in range(len(paths)):
                for j in range(i + 1, len(paths)):
                    out.append(Contour(paths[i], paths[j]))
    return out


def _interior(w: Walk) -> set[str]:
    return set(w.vertices()[1:-1])


def interlaced(c: Contour) -> bool:
    return bool(_interior(c.p) & _interior(c.q))


@dataclass(frozen=True)
class Reducibility:
    reducible: bool
    chain: tuple[Walk, ...] | None = None


def contour_reducible(Q: Quiver, c: Contour) -> Reducibility:
    """Search for a chain ``p = p_0, ..., p_n = q`` of paths with consecutive
    members interlaced; the shortest one is returned."""
    paths = enumerate_paths(Q, c.start, c.end)
    interiors = [_interior(w) for w in paths]
    index = {w.steps: i for i, w in enumerate(paths)}
    src, dst = index[c.p.steps], index[c.q.steps]
    parent = {src: None}
    queue = deque([src])
    while queue:
        i = queue.popleft()
        if i == dst:
            chain = []
            while i is not None:
                chain.append(paths[i])
                i = parent[i]
            return Reducibility(True, tuple(reversed(chain)))
        for j in range(len(paths)):
            if j not in parent and interiors[i] & interiors[j]:
                parent[j] = i
                queue.append(j)
    return Reducibility(False)


# -- splittings ------------------------------------------------------------------

@dataclass(frozen=True)
class Splitting:
    """A cycle read as ``w1 w2^-1`` with both arcs running from ``a`` to
    ``b``, together with a connecting path ``p: a -> b``."""

    cycle: Walk
    a: str
    b: str
    p: Walk
    w1: Walk
    w2: Walk

    def __post_init__(self):
        if (self.p.start, self.p.end) != (self.a, self.b) or not self.p.is_path:
            raise QuiverError(f"{self.p} is not a path from {self.a} to {self.b}")
        for w in (self.w1, self.w2):
            if (w.start, w.end) != (self.a, self.b):
                raise QuiverError(f"arc {w} does not run from {self.a} to {self.b}")

    def left(self) -> Walk:
        """``w1 p^-1``."""
        return self.w1 * self.p.inverse()

    def right(self) -> Walk:
        """``w2 p^-1``."""
        return self.w2 * self.p.inverse()

    def __str__(self) -> str:
        return f"{self.a}->{self.b} via {self.p}: w1={self.w1}, w2={self.w2}"


def arcs(C: Walk) -> Iterator[tuple[Walk, Walk]]:
    """All ways of reading ``C = w1 w2^-1`` with non-trivial arcs."""
    n = len(C)
    for i in range(n):
        D = rotate(C, i)
        for k in range(1, n):
            w1 = Walk.of(D.steps[:k])
            w2 = Walk.of(D.steps[k:]).inverse()
            yield w1, w2


def splittings(Q: Quiver, C: Walk, allow_trivial: bool = False) -> Iterator[Splitting]:
    cache: dict[tuple[str, str], list[Walk]] = {}
    for w1, w2 in arcs(C):
        a, b = w1.start, w1.end
        if a == b and not allow_trivial:
            continue
        if (a, b) not in cache:
            cache[(a, b)] = [w for w in enumerate_paths(Q, a, b)
                             if allow_trivial or not w.is_trivial]
        for p in cache[(a, b)]:
            yield Splitting(C, a, b, p, w1, w2)


def reducing_splitting(Q: Quiver, C: Walk, bound: str = "length") -> Splitting | None:
    """A splitting with both sub-cycles reduced and of fewer sources than
    the bound: the cycle length (``bound="length"``) or ``sigma(C)``
    (``bound="sigma"``)."""
    n = len(C) if bound == "length" else sigma(C)
    for S in splittings(Q, C):
        X, Y = S.left(), S.right()
        if is_reduced_cycle(X) and is_reduced_cycle(Y) and sigma(X) < n and sigma(Y) < n:
            return S
    return None


def cycle_irreducible(Q: Quiver, C: Walk, bound: str = "length") -> bool:
    """Irreducibility of a simple cycle.

    With one source the cycle is irreducible when its contour is. With more
    sources it is reducible when some path ``p`` between two of its vertices
    splits it into reduced cycles with fewer sources than ``n``. Read
    literally, ``n`` is the length of ``C``; ``bound="sigma"`` compares
    against ``sigma(C)`` instead.
    """
    if bound not in ("length", "sigma"):
        raise ValueError(f"bound must be 'length' or 'sigma', got {bound!r}")
    if not is_simple_cycle(C) or not is_reduced_cycle(C):
        raise QuiverError(f"{C} is not a reduced simple cycle")
    s = sigma(C)
    if s == 0:
        raise QuiverError(f"{C} is oriented; irreducibility needs a source")
    if s == 1:
        return not contour_reducible(Q, formed_contour(C)).reducible
    return reducing_splitting(Q, C, bound) is None


# -- natural contractibility -----------------------------------------------------

def canonical_cycle(Q: Quiver, C: Walk) -> tuple:
    """Least rotation of the cycle or of its inverse, as arrow positions."""
    def key(w: Walk):
        return tuple((Q.arrow_position(s.arrow.label), s.inverse) for s in w.steps)
    keys = []
    for D in (C, C.inverse()):
        keys.extend(key(rotate(D, k)) for k in range(len(D)))
    return min(keys)


def naturally_contractible(B: BoundQuiver, C: Walk, _memo: dict | None = None) -> bool:
    """Natural contractibility of a reduced non-oriented cycle.

    One source: the formed contour has naturally homotopic paths. More
    sources: some splitting, possibly along a trivial path, yields two
    non-oriented reduced cycles with fewer sources, both naturally
    contractible.
    """
    from .homotopy import naturally_homotopic

    if not is_reduced_cycle(C):
        raise QuiverError(f"{C} is not a reduced cycle")
    s = sigma(C)
    if s == 0:
        raise QuiverError(f"{C} is oriented")
    memo = {} if _memo is None else _memo
    key = canonical_cycle(B.quiver, C)
    if key in memo:
        return memo[key]
    if s == 1:
        c = formed_contour(C)
        result = naturally_homotopic(B, c.p, c.q)
    else:
        result = False
        for S in splittings(B.quiver, C, allow_trivial=True):
            X, Y = S.left(), S.right()
            if not (is_reduced_cycle(X) and is_reduced_cycle(Y)):
                continue
            sx, sy = sigma(X), sigma(Y)
            if not (0 < sx < s and 0 < sy < s):
                continue
            if naturally_contractible(B, X, memo) and naturally_contractible(B, Y, memo):
                result = True
                break
    memo[key] = result
    return result


def lemma16_compose(B: BoundQuiver, C: Walk, i: int, j: int) -> bool:
    """Check one instance of: if ``c_i..c_j`` and the complementary arc are
    naturally contractible cycles, then so is ``C`` (1-based indices)."""
    r = len(C)
    if not (1 <= i < j < r):
        raise QuiverError(f"need 1 <= i < j < {r}, got i={i}, j={j}")
    steps = C.steps
    inner = Walk.of(steps[i - 1:j])
    outer = Walk.of(steps[j:] + steps[:i - 1])
    for w in (inner, outer):
        if not is_reduced_cycle(w):
            raise QuiverError(f"{w} is not a reduced cycle")
    if not is_reduced_cycle(C):
        raise QuiverError(f"{C} is not a reduced cycle")

    def nc(w: Walk) -> bool:
        return sigma(w) > 0 and naturally_contractible(B, w)

    if nc(inner) and nc(outer):
        return nc(C)
    return True


# -- source counts of split cycles ------------------------------------------------

@dataclass(frozen=True)
class SigmaCase:
    case: str   # a | b | c
    lhs: int    # sigma(w1 p^-1) + sigma(w2 p^-1)
    rhs: int    # sigma(gamma) + offset
    holds: bool


def _vertex_at(C: Walk, positions: list[int]) -> set[str]:
    return {C.steps[i].end for i in positions}


def lemma21_case(Q: Quiver, S: Splitting) -> SigmaCase:
    """Classify a splitting by (a sink?, b source?) and compare the source
    counts of the two sub-cycles with ``sigma(gamma) - 1``, ``sigma(gamma)``
    or ``sigma(gamma) + 1``."""
    gamma = S.cycle
    if not is_reduced_cycle(gamma):
        raise QuiverError(f"{gamma} is not a reduced cycle")
    if S.p.is_trivial:
        raise QuiverError("the connecting path must be non-trivial")
    problems = [name for name, w in (("w1 p^-1", S.left()), ("w2 p^-1", S.right()))
                if not is_reduced_cycle(w)]
    if problems:
        raise QuiverError(f"{' and '.join(problems)} not a reduced cycle; "
                          "the identity assumes both sub-cycles are reduced")
    a_sink = S.a in _vertex_at(gamma, sink_positions(gamma))
    b_source = S.b in _vertex_at(gamma, source_positions(gamma))
    if a_sink and b_source:
        case, offset = "a", -1
    elif a_sink or b_source:
        case, offset = "b", 0
    else:
        case, offset = "c", 1
    lhs = sigma(S.left()) + sigma(S.right())
    rhs = sigma(gamma) + offset
    return SigmaCase(case, lhs, rhs, lhs == rhs)


def random_theta(rng: random.Random, max_arc: int = 4,
                 inadmissible: bool = False) -> tuple[Quiver, Splitting]:
    """A theta graph: arcs ``w1``, ``w2`` and a directed path ``p`` from a to b.

    Arrows are oriented by random vertex ranks so the quiver is acyclic and
    both ends take every source/sink pattern. With ``inadmissible`` the arc
    ``w1`` begins with the first arrow of ``p``, so ``w1 p^-1`` is not
    reduced.
    """
    rank = {"a": 0.4, "b": 0.6}
    a_sink, b_source = rng.random() < 0.5, rng.random() < 0.5
    arrows: list[Arrow] = []
    counter = [0]

    def fresh_vertex(prefix: str, near: str | None) -> str:
        name = f"{prefix}{len(rank)}"
        if near == "a" and a_sink:
            rank[name] = 0.4 * rng.random()
        elif near == "b" and b_source:
            rank[name] = 0.6 + 0.4 * rng.random()
        else:
            rank[name] = rng.random()
        return name

    def connect(u: str, v: str) -> Step:
        counter[0] += 1
        label = f"x{counter[0]}"
        if rank[u] < rank[v]:
            arrows.append(Arrow(label, u, v))
            return Step(arrows[-1])
        arrows.append(Arrow(label, v, u))
        return Step(arrows[-1], inverse=True)

    # p: a directed path with interior ranks strictly between a and b
    plen = rng.randint(1, max_arc)
    inner = sorted(rank["a"] + (rank["b"] - rank["a"]) * rng.random()
                   for _ in range(plen - 1))
    pv = ["a"]
    for r in inner:
        name = f"p{len(rank)}"
        rank[name] = r
        pv.append(name)
    pv.append("b")
    p_steps = [connect(u, v) for u, v in zip(pv, pv[1:])]

    def arc(prefix: str, head: list[Step]) -> list[Step]:
        steps = list(head)
        here = steps[-1].end if steps else "a"
        length = rng.randint(1, max_arc)
        for k in range(length - 1):
            near = "a" if not steps and k == 0 else ("b" if k == length - 2 else None)
            v = fresh_vertex(prefix, near)
            steps.append(connect(here, v))
            here = v
        steps.append(connect(here, "b"))
        return steps

    if inadmissible:
        w1_steps = [p_steps[0]] if plen == 1 else arc("u", [p_steps[0]])
    else:
        w1_steps = arc("u", [])
    w2_steps = arc("v", [])
    vertices = tuple(sorted(rank, key=lambda v: (v not in ("a", "b"), v)))
    Q = Quiver(vertices, tuple(arrows))
    w1, w2, p = Walk.of(w1_steps), Walk.of(w2_steps), Walk.of(p_steps)
    return Q, Splitting(w1 * w2.inverse(), "a", "b", p, w1, w2)
