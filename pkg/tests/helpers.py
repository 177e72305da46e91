from involutions.bertini import ProjPoint
from involutions.ring import Polynomial
from involutions.roots import roots_mod_p

Y = ("y1", "y2", "y3")


def points_on(f, F, rng, count):
    """At least ``count`` points of ``f = 0``, as roots along random lines."""
    s = Polynomial.var("t1", F)
    out = []
    while len(out) < count:
        P = [F.random(rng) for _ in range(3)]
        Q = [F.random(rng) for _ in range(3)]
        g = f.substitute({Y[i]: P[i] * s + Q[i] for i in range(3)})
        coeffs = [0] * (g.degree() + 1)
        for (e,), c in g.coefficients(("t1",)).items():
            coeffs[e] = c.constant_value()
        out += [ProjPoint.of([P[i] * r + Q[i] for i in range(3)], F) for r in roots_mod_p(coeffs, F.p)]
    return out
