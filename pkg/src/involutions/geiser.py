"""The Geiser specialization ``a1 = a2 = 0``.

When ``w`` is singular at ``(0:0:1)`` most of the Bertini formulas acquire
powers of ``w`` as common factors.  This module builds the reduced degree-8
formulas directly, maps the plane two-to-one onto itself by
``y -> (phi3, w, wp)`` and describes the branch quartic.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .bertini import (
    DegeneratePoint,
    PencilSpec,
    ProjPoint,
    SpecNotConcrete,
    cubic,
    image,
    reject_basepoint,
    w_coefficients,
)
from .ring import Polynomial, evaluate, exact_div
from .sigma2 import RamData, basepoint_section, binary_form


class SpecNotGeiser(ValueError):
    pass


class NonzeroFreeTerm(ArithmeticError):
    """``s0``, ``q0`` or ``r0`` survived the specialization ``a1 = a2 = 0``."""


@dataclass(frozen=True)
class GeiserBundle:
    spec: PencilSpec
    w: Polynomial
    wp: Polynomial
    gamma1: Polynomial
    rt_p1: Polynomial
    rt_p3: Polynomial
    rt1: Polynomial
    rt2: Polynomial
    rt3: Polynomial
    Ct: Polynomial
    phi3: Polynomial
    psi3: Polynomial
    z1: Polynomial
    z2: Polynomial
    z3: Polynomial
    Kt: Polynomial

    @property
    def z(self):
        return (self.z1, self.z2, self.z3)

    @property
    def rt(self):
        return (self.rt1, self.rt2, self.rt3)


def build_geiser(spec: PencilSpec) -> GeiserBundle:
    if not spec.is_geiser:
        raise SpecNotGeiser("a1 and a2 must vanish")
    dom = spec.domain
    y1, y2, y3 = (Polynomial.var(n, dom) for n in ("y1", "y2", "y3"))
    w, wp = cubic(spec), cubic(spec, primed=True)
    co = w_coefficients(spec, w, wp)
    B1, B2, B3, C1, C2 = (co[n] for n in ("B1", "B2", "B3", "C1", "C2"))
    a1p, a2p, b1 = spec["a1p"], spec["a2p"], spec["b1"]

    gamma1 = -(a1p * y1 + a2p * y2)
    rt_p1 = a2p**2 * B1 - a1p * a2p * B2 + a1p**2 * B3
    rt_p3 = a1p * C2 - a2p * C1
    Ct = (-a2p * exact_div(B1 - a1p * b1 * y1 * y3**2, y2)
          + a1p * exact_div(a2p * y3 * (w - b1 * y1**2 * y3) - B3 * y2, y1 * y2))
    phi3 = -a1p * C2 + y3 * Ct
    psi3 = -a2p * C1 + y3 * Ct
    z1 = phi3 * exact_div(a2p**2 * w * phi3 + B3 * rt_p1, y1)
    z2 = psi3 * exact_div(a1p**2 * w * psi3 + B1 * rt_p1, y2)
    z3 = psi3 * phi3 * Ct
    Kt = (psi3 * exact_div(-a1p * w * y3 + B1 * y1, y2)
          - phi3 * exact_div(-a2p * w * y3 + B3 * y2, y1))
    return GeiserBundle(
        spec=spec, w=w, wp=wp, gamma1=gamma1, rt_p1=rt_p1, rt_p3=rt_p3,
        rt1=-a2p * rt_p1, rt2=a1p * rt_p1, rt3=a1p * a2p * rt_p3,
        Ct=Ct, phi3=phi3, psi3=psi3, z1=z1, z2=z2, z3=z3, Kt=Kt,
    )


@functools.lru_cache(maxsize=64)
def _cached_geiser(spec: PencilSpec) -> GeiserBundle:
    return build_geiser(spec)


@dataclass(frozen=True)
class GeiserRamData:
    """``S~1`` (s1, s2), ``P2`` (p0..p2), ``Q~3`` (q1..q4), ``R~2`` (r1..r3)."""

    st: tuple
    p: tuple
    qt: tuple
    rt: tuple

    def forms(self, t1, t2) -> dict:
        return {
            "St": binary_form(self.st, t1, t2),
            "P": binary_form(self.p, t1, t2),
            "Qt": binary_form(self.qt, t1, t2),
            "Rt": binary_form(self.rt, t1, t2),
        }

    def scalars(self) -> dict:
        return {n: [c.constant_value() for c in getattr(self, n)] for n in ("st", "p", "qt", "rt")}


def geiser_ram(ram: RamData, spec: PencilSpec | None = None) -> GeiserRamData:
    """Shift generic ramification data by one after ``a1 = a2 = 0``.

    ``ram`` must be the generic data (braces taken before any
    substitution).  With ``spec`` the result is further specialized.
    """
    dom = ram.s[0].domain
    zero = {"a1": Polynomial.const(0, dom), "a2": Polynomial.const(0, dom)}
    sp = ram.map(lambda c: c.substitute(zero))
    if spec is not None:
        if not spec.is_geiser:
            raise SpecNotGeiser("a1 and a2 must vanish")
        sp = sp.specialize(spec)
    for name in ("s", "q", "r"):
        if not getattr(sp, name)[0].is_zero():
            raise NonzeroFreeTerm(f"{name}0 does not vanish; was the brace taken after substitution?")
    return GeiserRamData(st=sp.s[1:], p=sp.p, qt=sp.q[1:], rt=sp.r[1:])


def _concrete_values(spec, y, polys):
    if not spec.is_concrete:
        raise SpecNotConcrete("needs a concrete pencil")
    return [evaluate(p, y.assignment()) for p in polys]


def anticanonical_map(spec: PencilSpec, y: ProjPoint) -> ProjPoint:
    """``(phi3(y), w(y), wp(y))``, normalized."""
    b = _cached_geiser(spec)
    try:
        return ProjPoint.of(_concrete_values(spec, y, (b.phi3, b.w, b.wp)), spec.domain)
    except DegeneratePoint:
        raise DegeneratePoint("degenerate: basepoint or contracted locus") from None


def quartic_residual(gram: GeiserRamData, zbar: ProjPoint):
    """``4 z0^3 z1 - z0^2 P2(z1,z2) - z0 Q~3(z1,z2) - R~2(z1,z2)^2``."""
    dom = zbar.domain
    z0, z1, z2 = zbar.coords
    c = gram.scalars()

    def form(coeffs):
        d = len(coeffs) - 1
        return dom.scalar(sum(dom.scalar(a) * z1**i * z2 ** (d - i) for i, a in enumerate(coeffs)))

    P, Q, R = form(c["p"]), form(c["qt"]), form(c["rt"])
    return dom.scalar(4 * z0**3 * z1 - z0 * z0 * P - z0 * Q - R * R)


def geiser_apply(spec: PencilSpec, y: ProjPoint) -> ProjPoint:
    if not spec.is_concrete:
        raise SpecNotConcrete("geiser_apply needs a concrete pencil")
    if not spec.is_geiser:
        raise SpecNotGeiser("a1 and a2 must vanish")
    reject_basepoint(spec, y)
    return image(_cached_geiser(spec).z, y)


@dataclass(frozen=True)
class GeiserSection:
    u2: object
    u3: object
    st: tuple

    def S(self, t1, t2):
        return binary_form(self.st, t1, t2)

    def psi(self, bundle: GeiserBundle) -> Polynomial:
        """``phi3 + S~1^u(w, wp)``."""
        return bundle.phi3 + self.S(bundle.w, bundle.wp)


def basepoint_section_geiser(spec: PencilSpec, u2, u3, check: bool = True) -> GeiserSection:
    if not spec.is_geiser:
        raise SpecNotGeiser("a1 and a2 must vanish")
    sec = basepoint_section(spec, u2, u3, check=check)
    if not sec.su[0].is_zero():
        raise NonzeroFreeTerm("s^u_0 does not vanish under a1 = a2 = 0")
    return GeiserSection(u2, u3, sec.su[1:])


__all__ = [
    "GeiserBundle", "GeiserRamData", "GeiserSection", "SpecNotGeiser", "NonzeroFreeTerm",
    "build_geiser", "geiser_ram", "anticanonical_map", "quartic_residual", "geiser_apply",
    "basepoint_section_geiser",
]
