"""Quasi-kernels and strata of the two spaces built from the order 25 Dickson near-field."""
from nearvec import (
    canonical_isomorphism,
    distributive_decomposition,
    quasi_kernel,
    registry_space,
    stratum,
)

V = registry_space("dickson25-self")
for u in ("1", "g", "1+g", "2+g"):
    Q = stratum(V, V.parse(u))
    print(f"Q_{u} =", "{" + ", ".join(V.label(v) for v in Q) + "}")

dec = distributive_decomposition(V, 1)
print("F25 splits as", " + ".join("Q_" + V.label(s.base_point) for s in dec.summands))

W = registry_space("dickson25-sq")
print("|Q((F25)^2)| =", len(quasi_kernel(W)))
u = W.parse("(1,1)")
dec = distributive_decomposition(W, u)
for s in dec.summands:
    print(f"Q_{W.label(s.base_point)}: {len(s)} vectors, e.g.", [W.label(v) for v in list(s)[:6]])

iso = canonical_isomorphism(W, u)
print("coordinate basis:", [W.label(b) for b in iso.basis], "verified:", iso.check())
