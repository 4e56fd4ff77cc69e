"""Finitely presented groups: words, Tietze simplification, abelianization,
coset enumeration and finite-quotient certificates.

Words are tuples of non-zero integers: ``i`` stands for generator ``i - 1``
and ``-i`` for its inverse.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .linalg import invariant_factors, lattice_separator

Word = tuple[int, ...]


class BudgetExhausted(Exception):
    pass


class Budget:
    """Shared work counter; one unit per coset deduction or rewriting step."""

    def __init__(self, limit: int):
        self.limit = limit
        self.spent = 0

    def charge(self, n: int = 1):
        self.spent += n
        if self.spent > self.limit:
            raise BudgetExhausted(self.spent)

    @property
    def remaining(self) -> int:
        return max(self.limit - self.spent, 0)


def free_reduce(w: Iterable[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(w: Iterable[int]) -> Word:
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def invert(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def power(w: Sequence[int], n: int) -> Word:
    if n < 0:
        return free_reduce(invert(w) * (-n))
    return free_reduce(tuple(w) * n)


def substitute(w: Sequence[int], images: dict[int, Word]) -> Word:
    """Replace each generator ``g`` (1-based) by ``images[g]`` where given."""
    out: list[int] = []
    for x in w:
        g = abs(x)
        if g in images:
            out.extend(images[g] if x > 0 else invert(images[g]))
        else:
            out.append(x)
    return free_reduce(out)


def exponent_vector(w: Sequence[int], ngens: int) -> list[int]:
    v = [0] * ngens
    for x in w:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return v


def word_str(w: Sequence[int], names: Sequence[str]) -> str:
    if not w:
        return "1"
    return " ".join(names[abs(x) - 1] + ("^-1" if x < 0 else "") for x in w)


def _canonical_relator(w: Word) -> Word:
    """Least cyclic permutation of ``w`` or its inverse (for deduplication)."""
    w = cyclic_reduce(w)
    if not w:
        return w
    cands = []
    for u in (w, invert(w)):
        cands.extend(u[k:] + u[:k] for k in range(len(u)))
    return min(cands, key=lambda u: (len(u), u))


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def relator_matrix(self) -> list[list[int]]:
        return [exponent_vector(r, self.ngens) for r in self.relators]

    def __str__(self) -> str:
        rels = ", ".join(word_str(r, self.generators) for r in self.relators)
        return f"< {' '.join(self.generators)} | {rels} >"


# -- Tietze simplification -----------------------------------------------------

@dataclass(frozen=True)
class Elimination:
    """Generator ``generator`` was solved for from ``relator``.

    ``relator`` is the relator as it read at that moment (after earlier
    substitutions); ``image`` is the word it yields for the generator.
    """

    generator: int
    image: Word
    relator: Word


@dataclass
class TietzeResult:
    original: Presentation
    kept: tuple[int, ...]          # original generator ids that survive
    relators: tuple[Word, ...]     # over original ids in ``kept``
    eliminations: tuple[Elimination, ...]
    substitution: dict[int, Word]  # original id -> word over kept ids
    complete: bool                 # reached a fixpoint within budget

    @property
    def is_free(self) -> bool:
        return self.complete and not self.relators

    @property
    def rank(self) -> int:
        return len(self.kept)

    def image(self, w: Sequence[int]) -> Word:
        """Image of a word of the original presentation over the kept generators."""
        return substitute(w, self.substitution)

    def presentation(self) -> Presentation:
        """The simplified presentation, generators renumbered from 1."""
        renumber = {g: i + 1 for i, g in enumerate(self.kept)}
        rels = tuple(tuple(renumber[abs(x)] * (1 if x > 0 else -1) for x in r)
                     for r in self.relators)
        names = tuple(self.original.generators[g - 1] for g in self.kept)
        return Presentation(names, rels)

    def replay(self) -> bool:
        """Re-derive every elimination from the original relators.

        Each step must solve its generator from a relator that, after the
        earlier substitutions, contains that generator exactly once.
        """
        images: dict[int, Word] = {}
        current = [cyclic_reduce(r) for r in self.original.relators]
        for el in self.eliminations:
            rel = el.relator
            if _canonical_relator(rel) not in {_canonical_relator(r) for r in current}:
                return False
            if [abs(x) for x in rel].count(el.generator) != 1:
                return False
            if _solve(rel, el.generator) != el.image:
                return False
            images = {g: substitute(w, {el.generator: el.image}) for g, w in images.items()}
            images[el.generator] = el.image
            current = [cyclic_reduce(substitute(r, {el.generator: el.image}))
                       for r in current]
        leftover = {_canonical_relator(r) for r in current} - {()}
        return (images == self.substitution
                and leftover == {_canonical_relator(r) for r in self.relators})


def _solve(rel: Word, g: int) -> Word:
    """Solve ``rel = 1`` for generator ``g`` occurring exactly once in it."""
    k = next(i for i, x in enumerate(rel) if abs(x) == g)
    rotated = rel[k:] + rel[:k]          # g^e * rest = 1
    rest = rotated[1:]
    return free_reduce(invert(rest)) if rotated[0] > 0 else free_reduce(rest)


def tietze(P: Presentation, budget: Budget | None = None) -> TietzeResult:
    """Simplify by dropping trivial/duplicate relators and eliminating generators.

    A generator is eliminated when some relator uses it exactly once; the
    shortest such relator (then the lowest generator) is chosen so the result
    is deterministic.
    """
    rels: list[Word] = []
    seen: set[Word] = set()
    for r in P.relators:
        c = _canonical_relator(r)
        if c and c not in seen:
            seen.add(c)
            rels.append(cyclic_reduce(r))
    kept = list(range(1, P.ngens + 1))
    substitution: dict[int, Word] = {}
    eliminations: list[Elimination] = []
    complete = True
    try:
        while True:
            choice = None
            for r in sorted(rels, key=lambda r: (len(r), _canonical_relator(r))):
                counts: dict[int, int] = {}
                for x in r:
                    counts[abs(x)] = counts.get(abs(x), 0) + 1
                once = sorted(g for g, c in counts.items() if c == 1)
                if once:
                    choice = (r, once[0])
                    break
            if choice is None:
                break
            r, g = choice
            image = _solve(r, g)
            if budget is not None:
                budget.charge(1 + sum(len(x) for x in rels))
            eliminations.append(Elimination(g, image, r))
            substitution = {h: substitute(w, {g: image}) for h, w in substitution.items()}
            substitution[g] = image
            kept.remove(g)
            new_rels, seen = [], set()
            for s in rels:
                t = cyclic_reduce(substitute(s, {g: image}))
                c = _canonical_relator(t)
                if c and c not in seen:
                    seen.add(c)
                    new_rels.append(t)
            rels = new_rels
    except BudgetExhausted:
        complete = False
    return TietzeResult(P, tuple(kept), tuple(rels), tuple(eliminations),
                        substitution, complete)


# -- abelianization ------------------------------------------------------------

@dataclass(frozen=True)
class AbelianCertificate:
    """A homomorphism ``G -> Z/modulus`` sending generator ``i`` to ``functional[i]``.

    It kills every relator; a word whose image is non-zero is non-trivial in G.
    """

    functional: tuple[int, ...]
    modulus: int
    value: int

    kind = "abelian"

    def verify(self, P: Presentation, w: Sequence[int]) -> bool:
        def ev(u):
            return sum(f * e for f, e in zip(self.functional,
                                             exponent_vector(u, P.ngens))) % self.modulus
        return (self.modulus >= 2
                and all(ev(r) == 0 for r in P.relators)
                and ev(w) != 0 and ev(w) == self.value % self.modulus)

    def to_json(self) -> dict:
        return {"kind": self.kind, "functional": list(self.functional),
                "modulus": self.modulus, "value": self.value}


def abelian_separator(P: Presentation, w: Sequence[int]) -> AbelianCertificate | None:
    v = exponent_vector(w, P.ngens)
    found = lattice_separator(P.relator_matrix(), P.ngens, v)
    if found is None:
        return None
    f, m = found
    value = sum(a * b for a, b in zip(f, v)) % m
    return AbelianCertificate(tuple(x % m for x in f), m, value)


def abelian_invariants(P: Presentation) -> tuple[list[int], int]:
    """Torsion coefficients and free rank of the abelianization."""
    return invariant_factors(P.relator_matrix(), P.ngens)


# -- permutation quotients -----------------------------------------------------

def apply_word(perms: Sequence[Sequence[int]], w: Sequence[int], point: int) -> int:
    """Right action: follow the word left to right starting at ``point``."""
    inverses: dict[int, list[int]] = {}
    for x in w:
        g = abs(x) - 1
        if x > 0:
            point = perms[g][point]
        else:
            if g not in inverses:
                inv = [0] * len(perms[g])
                for i, j in enumerate(perms[g]):
                    inv[j] = i
                inverses[g] = inv
            point = inverses[g][point]
    return point


def acts_trivially(perms: Sequence[Sequence[int]], w: Sequence[int]) -> bool:
    n = len(perms[0]) if perms else 1
    return all(apply_word(perms, w, i) == i for i in range(n))


@dataclass(frozen=True)
class PermutationCertificate:
    """Generator images in a symmetric group that satisfy every relator.

    If the word acts non-trivially the word is non-trivial in the group.
    """

    images: tuple[tuple[int, ...], ...]

    kind = "permutation"

    def verify(self, P: Presentation, w: Sequence[int]) -> bool:
        if len(self.images) != P.ngens:
            return False
        if P.ngens == 0:
            return False
        degree = len(self.images[0])
        for p in self.images:
            if sorted(p) != list(range(degree)):
                return False
        return (all(acts_trivially(self.images, r) for r in P.relators)
                and not acts_trivially(self.images, w))

    def to_json(self) -> dict:
        return {"kind": self.kind, "degree": len(self.images[0]) if self.images else 0,
                "images": [list(p) for p in self.images]}


def free_separator(w: Word, ngens: int) -> list[list[int]]:
    """Permutations of ``len(w)+1`` points on which a reduced word moves point 0.

    The word is traced as the path ``0 -> 1 -> ... -> len(w)``; the partial
    maps this prescribes are injective because the word is reduced, and are
    completed to permutations in the least-index way.
    """
    w = free_reduce(w)
    n = len(w) + 1
    fwd: list[dict[int, int]] = [dict() for _ in range(ngens)]
    for i, x in enumerate(w):
        g = abs(x) - 1
        a, b = (i, i + 1) if x > 0 else (i + 1, i)
        fwd[g][a] = b
    perms = []
    for g in range(ngens):
        mapping = dict(fwd[g])
        free_targets = sorted(set(range(n)) - set(mapping.values()))
        for p in range(n):
            if p not in mapping:
                mapping[p] = free_targets.pop(0)
        perms.append([mapping[p] for p in range(n)])
    return perms


# -- coset enumeration -----------------------------------------------------------

@dataclass
class CosetTable:
    """Complete coset table of a subgroup; ``table[c][j]`` for column j.

    Columns alternate generator/inverse: column ``2g`` is generator g+1 and
    ``2g+1`` its inverse.
    """

    ngens: int
    table: list[list[int]]

    @property
    def index(self) -> int:
        return len(self.table)

    def permutations(self) -> list[list[int]]:
        return [[row[2 * g] for row in self.table] for g in range(self.ngens)]

    def act(self, coset: int, w: Sequence[int]) -> int:
        for x in w:
            col = 2 * (abs(x) - 1) + (0 if x > 0 else 1)
            coset = self.table[coset][col]
        return coset


def _col(x: int) -> int:
    return 2 * (abs(x) - 1) + (0 if x > 0 else 1)


def todd_coxeter(P: Presentation, subgroup: Sequence[Word] = (),
                 budget: Budget | None = None,
                 max_cosets: int = 20_000) -> CosetTable:
    """HLT coset enumeration with coincidence processing.

    Raises ``BudgetExhausted`` when the budget or ``max_cosets`` is exceeded.
    """
    ncols = 2 * P.ngens
    table: list[list[int | None]] = [[None] * ncols]
    parent = [0]

    def find(c: int) -> int:
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    def charge():
        if budget is not None:
            budget.charge()

    def define(c: int, x: int) -> int:
        if len(table) >= max_cosets:
            raise BudgetExhausted(len(table))
        charge()
        d = len(table)
        table.append([None] * ncols)
        parent.append(d)
        table[c][_col(x)] = d
        table[d][_col(-x)] = c
        return d

    def merge(k: int, l: int, queue: list[int]):
        k, l = find(k), find(l)
        if k == l:
            return
        if k > l:
            k, l = l, k
        parent[l] = k
        queue.append(l)

    def coincidence(a: int, b: int):
        queue: list[int] = []
        merge(a, b, queue)
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            for j in range(ncols):
                f = table[e][j]
                if f is None:
                    continue
                charge()
                table[f][j ^ 1] = None
                e1, f1 = find(e), find(f)
                if table[e1][j] is not None:
                    merge(f1, table[e1][j], queue)
                elif table[f1][j ^ 1] is not None:
                    merge(e1, table[f1][j ^ 1], queue)
                else:
                    table[e1][j] = f1
                    table[f1][j ^ 1] = e1

    def scan_and_fill(alpha: int, w: Word):
        if not w:
            return
        r = len(w)
        f, i, b, j = alpha, 0, alpha, r - 1
        while True:
            while i <= j and table[f][_col(w[i])] is not None:
                f = table[f][_col(w[i])]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][_col(-w[j])] is not None:
                b = table[b][_col(-w[j])]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][_col(w[i])] = b
                table[b][_col(-w[i])] = f
                charge()
                return
            define(f, w[i])

    for h in subgroup:
        scan_and_fill(0, free_reduce(h))
    rels = [cyclic_reduce(r) for r in P.relators]
    c = 0
    while c < len(table):
        if find(c) == c:
            for r in rels:
                if find(c) != c:
                    break
                scan_and_fill(c, r)
            if find(c) == c:
                for j in range(ncols):
                    if table[c][j] is None:
                        x = j // 2 + 1
                        define(c, x if j % 2 == 0 else -x)
        c += 1
    live = [c for c in range(len(table)) if find(c) == c]
    renumber = {c: i for i, c in enumerate(live)}
    out = [[renumber[find(table[c][j])] for j in range(ncols)] for c in live]
    return CosetTable(P.ngens, out)


@dataclass(frozen=True)
class CosetCertificate:
    """A complete coset table consistent with the relators on which the word
    moves some coset; this gives a finite permutation quotient."""

    table: tuple[tuple[int, ...], ...]

    kind = "coset-table"

    def verify(self, P: Presentation, w: Sequence[int]) -> bool:
        perms = [list(p) for p in self.table]
        return PermutationCertificate(tuple(tuple(p) for p in perms)).verify(P, w)

    def to_json(self) -> dict:
        return {"kind": self.kind, "index": len(self.table[0]) if self.table else 1,
                "permutations": [list(p) for p in self.table]}


def random_quotient_search(P: Presentation, w: Word, degrees: Sequence[int],
                           tries: int, rng: random.Random,
                           budget: Budget | None = None) -> PermutationCertificate | None:
    """Look for random permutation images satisfying the relators but not ``w``."""
    if P.ngens == 0:
        return None
    for _ in range(tries):
        for n in degrees:
            if budget is not None:
                budget.charge(1 + sum(len(r) for r in P.relators))
            perms = []
            for _g in range(P.ngens):
                p = list(range(n))
                rng.shuffle(p)
                perms.append(p)
            if all(acts_trivially(perms, r) for r in P.relators) and \
                    not acts_trivially(perms, w):
                return PermutationCertificate(tuple(tuple(p) for p in perms))
    return None
