"""A space that is not regular, and how it splits into regular pieces."""
from nearvec import (
    check_dimension_corollary,
    compatible,
    condition1_regular,
    dim_element,
    maximal_regular_decomposition,
    regular_components,
    twisted_space,
)

V = twisted_space(5, [1, 3])
e1, e2 = V.parse("(1,0)"), V.parse("(0,1)")
print("quasi-kernel size:", len(V.q_star) + 1)
print("(1,0) and (0,1) compatible?", compatible(V, e1, e2)[0])

r = condition1_regular(V)
print("regular:", r.holds, "witness:", [V.label(w) for w in r.witness])

dec = maximal_regular_decomposition(V)
for s in dec.summands:
    print("summand:", sorted(V.label(v) for v in s.members))

v = V.parse("(2,3)")
print(V.label(v), "=", " + ".join(V.label(c) for c in regular_components(V, v)), " dim", dim_element(V, v))

rep = check_dimension_corollary(V, e1)
print(f"dim V = {rep.dim_space}, dim of the stratum at (1,0) = {rep.dim_stratum}")

W = twisted_space(5, [1, 1, 3])
print("twisted-5-1-1-3 summand sizes:", [len(s.members) for s in maximal_regular_decomposition(W).summands])
