"""The Dickson near-field of order 25: its table, squares and distributive part."""
import numpy as np

from nearvec import dickson_p2, distributive_elements, gf_p2, squares, verify_nearfield
from nearvec.formats import format_table

F = dickson_p2(5)
print(format_table(F))

# the twist: multiply normally when the left factor is a square in GF(25)
S = squares(gf_p2(5))
print("squares:", " ".join(F.label(x) for x in sorted(S)))

# left distributive always, right distributive only for the prime field
print(verify_nearfield(F).text())
print("distributive elements:", " ".join(distributive_elements(F).labels()))

# not a field: some products do not commute
g, x = F.parse("g"), F.parse("1+g")
print(f"g*(1+g) = {F.label(F.mul[g, x])}, (1+g)*g = {F.label(F.mul[x, g])}")
print("commuting pairs:", int((F.mul == F.mul.T).sum()), "of", F.size**2)
