"""Counting sources when a cycle is cut along a path.

A cycle C = w1 w2^-1 (arcs from a to b) and a path p from a to b give two
smaller cycles w1 p^-1 and w2 p^-1. Their source counts add up to
sigma(C) - 1, sigma(C) or sigma(C) + 1 depending on whether a is a sink
of C and b a source. Random theta graphs exercise all three cases.

    python3 demos/splitting_identity.py
"""

import random
from collections import Counter

from qpi1 import QuiverError, lemma21_case, sigma
from qpi1.cycles import random_theta

rng = random.Random(1)
Q, S = random_theta(rng)
for a in Q.arrows:
    print(f"  {a.label}: {a.source} -> {a.target}")
print("cycle:", S.cycle, " sigma =", sigma(S.cycle))
print("split:", S)
r = lemma21_case(Q, S)
print(f"case {r.case}: {sigma(S.left())} + {sigma(S.right())} = {r.lhs}, expected {r.rhs}")

tally = Counter()
for _ in range(2000):
    Q, S = random_theta(rng)
    r = lemma21_case(Q, S)
    tally[(r.case, r.holds)] += 1
print("\n2000 random splittings (case, holds):", dict(sorted(tally.items())))

# when w1 starts along p the sub-cycle w1 p^-1 backtracks, and the count is refused
Q, S = random_theta(rng, inadmissible=True)
try:
    lemma21_case(Q, S)
except QuiverError as e:
    print("\nrefused:", e)
