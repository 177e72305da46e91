"""
The branch data of the double cover
-----------------------------------

The cone map sends a point of the plane to (phi6 : w^2 : w wp : wp^2), a
point of the quadric cone z1 z3 = z2^2.  The involution swaps the two
sheets over the cone, and the branch curve is the trigonal curve

    -4 y^3 + y^2 P2(x) + y Q4(x) + R3(x)^2 = 0

in the chart x = w/wp, y = phi6/wp^2.  Generic points map off it; points
fixed by the involution map onto it.
"""

from involutions import GF, MERSENNE61, ProjPoint, ram_closed_form
from involutions.bertini import random_spec
from involutions.ring import canonical_text
from involutions.sigma2 import cone_map, sigma2_chart, trigonal_residual
from involutions.verify import HashRNG, fixed_locus_sample

generic = ram_closed_form()
print("s0 =", canonical_text(generic.s[0]))
print("r0 =", canonical_text(generic.r[0]))

F = GF(MERSENNE61)
spec = random_spec(F, HashRNG(1, "demo"))
ram = ram_closed_form(F).specialize(spec)

for coords in [(1, 2, 3), (4, 9, 2)]:
    y = ProjPoint.of(coords, F)
    pt = sigma2_chart(spec, y)
    print(coords, "on cone:", cone_map(spec, y).on_cone(),
          "| on branch curve:", trigonal_residual(ram, pt) == 0)

report = fixed_locus_sample(spec, 10, seed=1)
print("fixed points on the branch curve:", report.trials, report.status)
