"""Certificates for ``W3(r) = 0`` and ``W3(z) = 0``.

Expanding ``W3(z)`` directly means cubing degree-17 polynomials in 17
variables, which is out of reach.  Both identities already hold in a much
smaller ring: treat ``A1, A2, B1, B2, B3, C1`` and ``kappa`` as free
variables, invert ``y1`` and ``y2``, and eliminate ``C2`` with the pencil
relation ``W3(y) = 0``, i.e. ``C2 = -G / (y1 y2^2)``.  The evaluation map
into the fraction field of the real coefficient ring is a ring
homomorphism (it sends ``W3(y)`` to zero), so an identity that holds here
holds for every pencil.
"""

from __future__ import annotations

import flint

from .bertini import involution_formulas

NAMES = ("A1", "A2", "B1", "B2", "B3", "C1", "kappa", "y1", "y2", "y3")
_CTX = flint.fmpq_mpoly_ctx.get(NAMES, "deglex")
_GEN = dict(zip(NAMES, _CTX.gens()))
_I1, _I2 = NAMES.index("y1"), NAMES.index("y2")


class Laurent:
    """``num / (y1^a y2^b)``, kept with the smallest possible ``a, b``."""

    __slots__ = ("num", "a", "b")

    def __init__(self, num, a=0, b=0):
        if num == 0:
            a = b = 0
        elif a or b:
            mono = num.term_content().monoms()[0]
            k1, k2 = min(mono[_I1], a), min(mono[_I2], b)
            if k1 or k2:
                num = num / (_GEN["y1"] ** k1 * _GEN["y2"] ** k2)
                a, b = a - k1, b - k2
        self.num, self.a, self.b = num, a, b

    @classmethod
    def coerce(cls, x) -> "Laurent":
        if isinstance(x, Laurent):
            return x
        if isinstance(x, flint.fmpq_mpoly):
            return cls(x)
        return cls(_CTX.constant(x))

    def _lift(self, a, b):
        return self.num * _GEN["y1"] ** (a - self.a) * _GEN["y2"] ** (b - self.b)

    def __add__(self, other):
        o = Laurent.coerce(other)
        a, b = max(self.a, o.a), max(self.b, o.b)
        return Laurent(self._lift(a, b) + o._lift(a, b), a, b)

    __radd__ = __add__

    def __neg__(self):
        return Laurent(-self.num, self.a, self.b)

    def __sub__(self, other):
        return self + (-Laurent.coerce(other))

    def __rsub__(self, other):
        return Laurent.coerce(other) + (-self)

    def __mul__(self, other):
        o = Laurent.coerce(other)
        return Laurent(self.num * o.num, self.a + o.a, self.b + o.b)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Laurent.coerce(1)
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return self.num == 0


def _div(e: Laurent, name: str) -> Laurent:
    return Laurent(e.num, e.a + (name == "y1"), e.b + (name == "y2"))


def _setup():
    g = {n: Laurent(_GEN[n]) for n in NAMES}
    A1, A2, B1, B2, B3, C1 = (g[n] for n in ("A1", "A2", "B1", "B2", "B3", "C1"))
    y1, y2, y3 = g["y1"], g["y2"], g["y3"]
    G = y3**2 * (A1 * y1 + A2 * y2) + y3 * (B1 * y1**2 + B2 * y1 * y2 + B3 * y2**2) + C1 * y1**2 * y2
    C2 = Laurent(-G.num, 1, 2)
    return (A1, A2), (B1, B2, B3), (C1, C2), g["kappa"], (y1, y2, y3)


def W3(A, B, C, x) -> Laurent:
    A1, A2 = A
    B1, B2, B3 = B
    C1, C2 = C
    x1, x2, x3 = x
    return (x3**2 * (A1 * x1 + A2 * x2) + x3 * (B1 * x1**2 + B2 * x1 * x2 + B3 * x2**2)
            + C1 * x1**2 * x2 + C2 * x1 * x2**2)


def w3_residuals(corrupt: str | None = None) -> dict:
    """``W3(y)``, ``W3(r)`` and ``W3(z)`` in the universal ring."""
    A, B, C, kappa, y = _setup()
    f = involution_formulas(A, B, C, kappa, y, _div, corrupt)
    return {
        "y": W3(A, B, C, y),
        "r": W3(A, B, C, (f["r1"], f["r2"], f["r3"])),
        "z": W3(A, B, C, (f["z1"], f["z2"], f["z3"])),
    }


__all__ = ["Laurent", "W3", "w3_residuals", "NAMES"]
