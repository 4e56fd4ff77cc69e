"""A bound quiver whose fundamental group is trivial while a convex piece
of it (the double arrow) is not simply connected.

    python3 demos/simply_connected_but_not_strongly.py
"""

from qpi1 import (freeness, induce_on_convex, is_simply_connected,
                  is_strongly_simply_connected, load_fixture, minimal_relations,
                  pi1_presentation, serialize)

B = load_fixture("f19")
print(serialize(B))

print("\nminimal relations (these are what the homotopy relation uses):")
for m in minimal_relations(B).relations:
    print("   ", m.relation)

P = pi1_presentation(B)
print(f"\npi_1 at {P.base}: {P}")
print("simplifies to", freeness(P))
print("simply connected:", is_simply_connected(B).status.value)

report = is_strongly_simply_connected(B)
print(f"\nchecked {report.checked} connected convex subsets")
print("strongly simply connected:", report.verdict.status.value)
print("first failing subset:", report.witness)

sub = induce_on_convex(B, report.witness)
print(f"induced on it: {len(sub.quiver.arrows)} arrows, {len(sub.generators)} relations,",
      freeness(pi1_presentation(sub)))

# the same quiver with the other presentation of the ideal
B2 = load_fixture("f19-prime")
print("\nwith the second presentation:", freeness(pi1_presentation(B2)))
