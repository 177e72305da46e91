"""Partial priming of coefficient monomials.

``brace(e, m)`` replaces ``m`` of the ``n`` coefficient factors of each
monomial of ``e`` by their primed partners, summing over every choice.
Choices that coincide as monomials are collected, so repeated factors give
binomial multiplicities: ``brace(b2**2, 1) == 2*b2*b2p``.
"""

from __future__ import annotations

from math import comb

from .ring import INDEX, PRIMED, UNPRIMED, Y, T, Polynomial

_UIDX = [INDEX[v] for v in UNPRIMED]
_PIDX = [INDEX[v] for v in PRIMED]
_FORBIDDEN = [INDEX[v] for v in PRIMED + Y + T]


class AlreadyPrimed(ValueError):
    pass


def _splits(exps, m):
    """Yield tuples ``k`` with ``0 <= k[i] <= exps[i]`` and ``sum(k) == m``."""
    if not exps:
        if m == 0:
            yield ()
        return
    head, rest = exps[0], exps[1:]
    cap = sum(rest)
    for k in range(max(0, m - cap), min(head, m) + 1):
        for tail in _splits(rest, m - k):
            yield (k,) + tail


def brace(p: Polynomial, m: int) -> Polynomial:
    """The partial-priming operator, extended linearly.

    ``u2`` and ``u3`` are inert: they are never primed and do not count
    toward the degree ``n``.  Input with primed, ``y`` or ``t`` variables is
    rejected.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    out: dict = {}
    for mono, c in p.terms().items():
        if any(mono[i] for i in _FORBIDDEN):
            raise AlreadyPrimed("brace input must be free of primed, y and t variables")
        exps = [mono[i] for i in _UIDX]
        for k in _splits(exps, m):
            mult = 1
            new = list(mono)
            for slot, (e, kk) in enumerate(zip(exps, k)):
                if kk:
                    mult *= comb(e, kk)
                    new[_UIDX[slot]] = e - kk
                    new[_PIDX[slot]] = kk
            key = tuple(new)
            out[key] = out.get(key, 0) + mult * c
    return Polynomial.from_terms(out, p.domain)


def signed_braces(p0: Polynomial, count: int) -> tuple:
    """``((-1)**i * brace(p0, i) for i in range(count))`` as a tuple."""
    return tuple(brace(p0, i) if i % 2 == 0 else -brace(p0, i) for i in range(count))


def expand_priming(p: Polynomial) -> Polynomial:
    """Substitute ``v -> v + v'`` for every unprimed coefficient variable.

    Used to check the binomial structure: for a monomial of degree ``n``
    this equals ``sum(brace(p, m) for m in range(n + 1))``.
    """
    dom = p.domain
    return p.substitute(
        {v: Polynomial.var(v, dom) + Polynomial.var(v + "p", dom) for v in UNPRIMED}
    )


__all__ = ["brace", "signed_braces", "expand_priming", "AlreadyPrimed"]
