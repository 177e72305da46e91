"""
Bertini involution on a random pencil
-------------------------------------

Draw a pencil of cubics over F_p with p = 2^61 - 1, push a few points
through the involution and check that applying it twice returns them.
"""

from involutions import MERSENNE61, GF, ProjPoint, apply_bertini
from involutions.bertini import DegeneratePoint, random_spec
from involutions.verify import HashRNG

F = GF(MERSENNE61)
spec = random_spec(F, HashRNG(0, "demo"))
print("pencil coefficients:", {k: int(spec[k].constant_value()) for k in ("a1", "a2", "c1", "c1p")})

for coords in [(1, 2, 3), (5, 7, 11), (1, 1, 0)]:
    y = ProjPoint.of(coords, F)
    image = apply_bertini(spec, y)
    back = apply_bertini(spec, image)
    print(coords, "->", image.coords, "| back home:", back == y)

try:
    apply_bertini(spec, ProjPoint.of((0, 0, 1), F))
except DegeneratePoint as exc:
    print("(0:0:1):", exc)
