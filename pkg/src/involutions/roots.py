"""Roots in F_p of univariate polynomials.

``gcd(f, s^p - s)`` isolates the product of the distinct linear factors,
which is then split by the equal-degree method: for random ``a`` the gcd
with ``(s + a)^((p-1)/2) - 1`` separates roots by quadratic character.
"""

from __future__ import annotations

import random

import flint


def _ring(p: int):
    if p < 2**64:
        return lambda coeffs: flint.nmod_poly(coeffs, p)
    ctx = flint.fmpz_mod_poly_ctx(p)
    return lambda coeffs: ctx(coeffs)


def _monic(f):
    return f / f.leading_coefficient() if f.degree() > 0 else f


def _split(f, p, make, rng, out):
    d = f.degree()
    if d <= 0:
        return
    if d == 1:
        c0, c1 = (int(c) for c in f.coeffs())
        out.append(-c0 * pow(c1, -1, p) % p)
        return
    while True:
        a = rng.randrange(p)
        h = make([a, 1]).pow_mod((p - 1) // 2, f) - 1
        g = f.gcd(h)
        if 0 < g.degree() < d:
            break
    _split(_monic(g), p, make, rng, out)
    _split(_monic(f // g), p, make, rng, out)


def roots_mod_p(coeffs, p: int, rng: random.Random | None = None) -> list:
    """Sorted distinct roots in ``[0, p)`` of ``sum(coeffs[i] s^i)``.

    ``p`` must be an odd prime.  The zero polynomial raises ``ValueError``.
    """
    if p == 2:
        raise ValueError("p must be odd")
    make = _ring(p)
    f = make([int(c) % p for c in coeffs])
    if f.is_zero():
        raise ValueError("the zero polynomial has every element as a root")
    if f.degree() <= 0:
        return []
    rng = rng or random.Random(0)
    s = make([0, 1])
    lin = f.gcd(s.pow_mod(p, f) - s)
    out: list = []
    _split(_monic(lin), p, make, rng, out)
    return sorted(out)


__all__ = ["roots_mod_p"]
