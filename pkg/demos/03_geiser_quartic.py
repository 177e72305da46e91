"""
Geiser specialisation
---------------------

When both cubics pass through (0:0:1) with a1 = a2 = 0 the pencil
degenerates into a net and the involution becomes the Geiser involution.
Its anticanonical image is a quartic plane curve, and points fixed by the
involution lie on it.
"""

from involutions import GF, MERSENNE61, ProjPoint, geiser_apply
from involutions.bertini import random_spec
from involutions.verify import HashRNG, fixed_locus_sample

F = GF(MERSENNE61)
spec = random_spec(F, HashRNG(2, "demo"), geiser=True)

y = ProjPoint.of((2, 3, 5), F)
img = geiser_apply(spec, y)
print("geiser(2:3:5) =", img.coords)
print("twice returns (2:3:5):", geiser_apply(spec, img) == y)

report = fixed_locus_sample(spec, 10, seed=2, geiser=True)
print("fixed points sampled:", report.trials, "status:", report.status)
