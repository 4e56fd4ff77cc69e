"""Homotopy uses every minimal relation at once; natural homotopy only
substitutes one subpath at a time. Two small examples pull them apart.

    python3 demos/homotopy_versus_natural_homotopy.py
"""

from qpi1 import Contour, contour_class, homotopic, load_fixture, naturally_homotopic
from qpi1.cycles import contour_reducible, cycle_irreducible, interlaced

B = load_fixture("f15")
Q = B.quiver
alpha, beta = Q.path("alpha"), Q.path("beta")
v = homotopic(B, alpha, beta)
print("f15: alpha ~ beta?", v.status.value)
print("     proof:", v.to_json()["certificate"])
print("     naturally homotopic?", naturally_homotopic(B, alpha, beta))
print("     but alpha.gamma and beta.gamma are:",
      naturally_homotopic(B, Q.path("alpha", "gamma"), Q.path("beta", "gamma")))

B = load_fixture("f17a")
Q = B.quiver
top = Q.path("alpha1", "alpha2", "alpha3", "alpha4")
bottom = Q.path("gamma1", "gamma2", "gamma3", "gamma4")
c = Contour(top, bottom)
print("\nf17a: the outer contour")
print("     interlaced:", interlaced(c))
chain = contour_reducible(Q, c).chain
print("     reducible through", " | ".join(str(p) for p in chain))
v = homotopic(B, top, bottom)
print("     homotopic?", v.status.value, "certificate", v.to_json()["certificate"])

for name in ("f17b", "f17c"):
    B = load_fixture(name)
    Q = B.quiver
    c = Contour(Q.path("alpha1", "alpha2"), Q.path("beta1", "beta2"))
    print(f"\n{name}: irreducible={cycle_irreducible(Q, c.cycle())}, class {contour_class(B, c)}")
