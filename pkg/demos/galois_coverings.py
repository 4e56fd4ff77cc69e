"""Quotients by free actions and truncated universal covers.

    python3 demos/galois_coverings.py
"""

from qpi1 import (GroupAction, check_galois, cyclic_cover, export_dot, freeness,
                  is_simply_connected, isomorphism, load_fixture, pi1_presentation,
                  quotient, serialize, universal_cover_ball)
from qpi1.catalog import load_json_fixture
from qpi1.dot import cover_fibers

crown = load_fixture("crown")
G = GroupAction.from_json(crown, load_json_fixture("crown-z2.json"))
c = quotient(crown, G)
print(serialize(c.base))
print("isomorphic to the Kronecker quiver:", isomorphism(c.base, load_fixture("kron")) is not None)
print("Galois axioms:", check_galois(c).to_json())

# the other direction: a Z/3 voltage cover of the Kronecker quiver is a hexagon
kron = load_fixture("kron")
hexagon = cyclic_cover(kron, {"mu": 1}, 3)
print("\nZ/3 cover:", len(hexagon.cover.quiver.vertices), "vertices,",
      freeness(pi1_presentation(hexagon.cover)))

# pi_1(kron) = Z, so its universal cover is an infinite zigzag; look at a ball
ball = universal_cover_ball(kron, "a", 4)
print(f"\nball of radius 4: {len(ball.cover.quiver.vertices)} classes, "
      f"{len(ball.interior)} interior")
print("local bijectivity problems:", ball.local_bijectivity())
print("deck action free:", ball.deck_free())
print("interior simply connected:", is_simply_connected(ball.interior_quiver()).status.value)
print()
print(export_dot(ball.cover, cover_fibers(ball.morphism)))
