"""Pencils of plane cubics and the Bertini involution.

A pencil is spanned by two cubics ``w`` and ``wp`` that vanish at the
coordinate vertices::

    w(x) = x3^2 (a1 x1 + a2 x2) + x3 (b1 x1^2 + b2 x1 x2 + b3 x2^2)
           + c1 x1^2 x2 + c2 x1 x2^2

and likewise for ``wp`` with primed coefficients.  ``(0:0:1)`` is the
distinguished basepoint.  :func:`build_bundle` computes every named
polynomial of the involution from a :class:`PencilSpec`, checking each
bracket division for exactness.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, fields
from typing import Callable, Mapping

from .ring import (
    COEFFICIENTS,
    PRIMED,
    QQ,
    UNPRIMED,
    NotDivisible,
    Polynomial,
    evaluate,
    exact_div,
    substitute,
)


class DegeneratePoint(ValueError):
    """The map is undefined at the point (basepoint or contracted curve)."""


class SpecNotConcrete(ValueError):
    pass


@dataclass(frozen=True)
class PencilSpec:
    """The fourteen pencil coefficients, each a polynomial over ``domain``.

    In generic mode the entries are the coefficient variables themselves; in
    concrete mode they are constants.  Mixed specs (for instance the generic
    Geiser pencil with ``a1 = a2 = 0``) are allowed.
    """

    entries: tuple
    domain: object = QQ

    def __post_init__(self):
        if len(self.entries) != 14:
            raise ValueError("a pencil needs 14 coefficients")
        for e in self.entries:
            if e.domain is not self.domain:
                raise ValueError("all entries must share the spec's domain")

    @classmethod
    def generic(cls, domain=QQ) -> "PencilSpec":
        return cls(tuple(Polynomial.var(v, domain) for v in COEFFICIENTS), domain)

    @classmethod
    def geiser_generic(cls, domain=QQ) -> "PencilSpec":
        return cls.generic(domain).specialize({"a1": 0, "a2": 0})

    @classmethod
    def concrete(cls, values: Mapping[str, object], domain=QQ) -> "PencilSpec":
        """From ``{"a1": ..., "c2p": ...}``; every key must be present."""
        missing = set(COEFFICIENTS) - set(values)
        if missing:
            raise ValueError(f"missing coefficients: {sorted(missing)}")
        return cls(tuple(Polynomial.const(values[v], domain) for v in COEFFICIENTS), domain)

    @classmethod
    def from_cubics(cls, w: Mapping[str, object], wp: Mapping[str, object], domain=QQ):
        values = dict(w)
        values.update({k + "p": v for k, v in wp.items()})
        return cls.concrete(values, domain)

    def __getitem__(self, name: str) -> Polynomial:
        return self.entries[COEFFICIENTS.index(name)]

    def bindings(self) -> dict:
        return dict(zip(COEFFICIENTS, self.entries))

    def specialize(self, values: Mapping[str, object]) -> "PencilSpec":
        """Replace some entries by constants (keyed by coefficient name)."""
        new = list(self.entries)
        for name, v in values.items():
            new[COEFFICIENTS.index(name)] = Polynomial.const(v, self.domain)
        return PencilSpec(tuple(new), self.domain)

    @property
    def is_concrete(self) -> bool:
        return all(e.is_constant() for e in self.entries)

    @property
    def is_geiser(self) -> bool:
        return self["a1"].is_zero() and self["a2"].is_zero()

    def values(self) -> dict:
        if not self.is_concrete:
            raise SpecNotConcrete("spec has symbolic entries")
        return {n: e.constant_value() for n, e in zip(COEFFICIENTS, self.entries)}

    def apply(self, p: Polynomial) -> Polynomial:
        """Specialize a generic polynomial to this pencil."""
        return substitute(p, self.bindings())


@dataclass(frozen=True)
class ProjPoint:
    """A point of the projective plane, first nonzero coordinate scaled to 1."""

    coords: tuple
    domain: object = QQ

    @classmethod
    def of(cls, coords, domain=QQ) -> "ProjPoint":
        cs = [domain.scalar(c) for c in coords]
        for c in cs:
            if c != 0:
                inv = domain.inv(c)
                return cls(tuple(domain.scalar(x * inv) for x in cs), domain)
        raise DegeneratePoint("all coordinates vanish")

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def assignment(self, names=("y1", "y2", "y3")) -> dict:
        return dict(zip(names, self.coords))

    def text(self) -> str:
        return ",".join(str(c) for c in self.coords)


def cubic(spec: PencilSpec, primed: bool = False, point=None) -> Polynomial:
    """``w`` (or ``wp``) as a polynomial in ``y``, or evaluated at ``point``.

    ``point`` may be a triple of polynomials; then ``w(point)`` is returned.
    """
    dom = spec.domain
    if point is None:
        point = tuple(Polynomial.var(v, dom) for v in ("y1", "y2", "y3"))
    x1, x2, x3 = point
    names = PRIMED if primed else UNPRIMED
    a1, a2, b1, b2, b3, c1, c2 = (spec[n] for n in names)
    return (x3**2 * (a1 * x1 + a2 * x2) + x3 * (b1 * x1**2 + b2 * x1 * x2 + b3 * x2**2)
            + c1 * x1**2 * x2 + c2 * x1 * x2**2)


#: sign-corruption hooks for negative controls; each flips one term
CORRUPTIONS = ("C5", "K", "rp1")


def involution_formulas(A, B, C, kappa, y, div: Callable, corrupt: str | None = None) -> dict:
    """The r, C5, phi6, psi6, z and K formulas over any commutative ring.

    ``A, B, C`` are the coefficient tuples of ``W3`` (2, 3 and 2 entries),
    ``y`` the point and ``div(e, name)`` removes the factor ``y1``/``y2``.
    Elements only need ``+ - * **``; :mod:`involutions.universal` reuses this
    with rational functions.
    """
    A1, A2 = A
    B1, B2, B3 = B
    C1, C2 = C
    y1, y2, y3 = y
    flip = -1 if corrupt == "rp1" else 1
    rp1 = B1 * A2**2 - B2 * A1 * A2 + flip * B3 * A1**2
    rp3 = A2 * C1 - A1 * C2
    r1 = A2 * rp1
    r2 = -(A1 * rp1)
    r3 = A1 * A2 * rp3
    gamma4 = y1 * A1 + y2 * A2
    flip = -1 if corrupt == "C5" else 1
    C5 = (A2 * div(B1 + kappa * y1 * y3**2, "y2")
          + div(A1 - kappa * y1**2 * y3, "y2") * div(A2 * y3 + B3 * y2, "y1")
          + flip * kappa * B3 * y1 * y3)
    phi6 = A1 * C2 + y3 * C5
    psi6 = A2 * C1 + y3 * C5
    z1 = phi6 * div(A2**2 * phi6 + B3 * rp1, "y1")
    z2 = psi6 * div(A1**2 * psi6 + B1 * rp1, "y2")
    z3 = psi6 * phi6 * C5
    flip = -1 if corrupt == "K" else 1
    K = psi6 * div(A1 * y3 + B1 * y1, "y2") - flip * phi6 * div(A2 * y3 + B3 * y2, "y1")
    return dict(rp1=rp1, rp3=rp3, r1=r1, r2=r2, r3=r3, gamma4=gamma4, C5=C5,
                phi6=phi6, psi6=psi6, z1=z1, z2=z2, z3=z3, K=K)


@dataclass(frozen=True)
class BertiniBundle:
    spec: PencilSpec
    w: Polynomial
    wp: Polynomial
    A1: Polynomial
    A2: Polynomial
    B1: Polynomial
    B2: Polynomial
    B3: Polynomial
    C1: Polynomial
    C2: Polynomial
    kappa: Polynomial
    gamma4: Polynomial
    rp1: Polynomial
    rp3: Polynomial
    r1: Polynomial
    r2: Polynomial
    r3: Polynomial
    C5: Polynomial
    phi6: Polynomial
    psi6: Polynomial
    z1: Polynomial
    z2: Polynomial
    z3: Polynomial
    K: Polynomial

    @property
    def y(self) -> tuple:
        return tuple(Polynomial.var(v, self.spec.domain) for v in ("y1", "y2", "y3"))

    @property
    def r(self) -> tuple:
        return (self.r1, self.r2, self.r3)

    @property
    def z(self) -> tuple:
        return (self.z1, self.z2, self.z3)

    def named(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name != "spec"}


def _bracket(dom):
    def div(e, name):
        return exact_div(e, Polynomial.var(name, dom))
    return div


def w_coefficients(spec: PencilSpec, w: Polynomial, wp: Polynomial) -> dict:
    """``A_i = a_i wp - a_i' w`` and likewise for ``B_i``, ``C_i``."""
    return {n.upper(): spec[n] * wp - spec[n + "p"] * w for n in UNPRIMED}


def build_bundle(spec: PencilSpec, corrupt: str | None = None) -> BertiniBundle:
    """All named polynomials of the involution for ``spec``.

    ``corrupt`` flips one sign in ``C5``, ``K`` or ``rp1`` (negative controls
    only).  Raises :class:`NotDivisible` if a bracket division is not exact.
    """
    if corrupt is not None and corrupt not in CORRUPTIONS:
        raise ValueError(f"unknown corruption {corrupt!r}")
    dom = spec.domain
    w = cubic(spec)
    wp = cubic(spec, primed=True)
    co = w_coefficients(spec, w, wp)
    kappa = spec["a1"] * spec["b1p"] - spec["a1p"] * spec["b1"]
    y = tuple(Polynomial.var(v, dom) for v in ("y1", "y2", "y3"))
    A = (co["A1"], co["A2"])
    B = (co["B1"], co["B2"], co["B3"])
    C = (co["C1"], co["C2"])
    f = involution_formulas(A, B, C, kappa, y, _bracket(dom), corrupt)
    return BertiniBundle(spec=spec, w=w, wp=wp, kappa=kappa, **co, **f)


@functools.lru_cache(maxsize=64)
def _cached_bundle(spec: PencilSpec) -> BertiniBundle:
    return build_bundle(spec)


def W3_of(bundle: BertiniBundle, v) -> Polynomial:
    """``w(v) wp(y) - wp(v) w(y)`` for a triple ``v`` of polynomials."""
    spec = bundle.spec
    return cubic(spec, point=v) * bundle.wp - cubic(spec, primed=True, point=v) * bundle.w


def image(polys, y: ProjPoint) -> ProjPoint:
    """Evaluate a triple of polynomials in ``y`` at a point, normalized."""
    vals = [evaluate(p, y.assignment()) for p in polys]
    try:
        return ProjPoint.of(vals, y.domain)
    except DegeneratePoint:
        raise DegeneratePoint("degenerate: basepoint or contracted locus") from None


def is_basepoint(spec: PencilSpec, y: ProjPoint) -> bool:
    a = y.assignment()
    return evaluate(cubic(spec), a) == 0 and evaluate(cubic(spec, primed=True), a) == 0


def reject_basepoint(spec: PencilSpec, y: ProjPoint):
    """Basepoints have no well-defined member of the pencil through them.

    The formulas still extend continuously to ``(0:0:1)`` (they return
    ``(0:0:1)``, a fixed point), but the construction does not apply there.
    """
    if is_basepoint(spec, y):
        raise DegeneratePoint("degenerate: basepoint or contracted locus")


def apply_bertini(spec: PencilSpec, y: ProjPoint) -> ProjPoint:
    """The Bertini involution at ``y`` for a concrete pencil."""
    if not spec.is_concrete:
        raise SpecNotConcrete("apply_bertini needs a concrete pencil")
    if y.domain is not spec.domain:
        raise ValueError("point and pencil live over different fields")
    reject_basepoint(spec, y)
    return image(_cached_bundle(spec).z, y)


def random_spec(domain, rng, geiser: bool = False) -> PencilSpec:
    """A pencil with independent uniform coefficients from ``rng``."""
    values = {n: domain.random(rng) for n in COEFFICIENTS}
    if geiser:
        values["a1"] = values["a2"] = 0
    return PencilSpec.concrete(values, domain)


__all__ = [
    "PencilSpec", "ProjPoint", "BertiniBundle", "DegeneratePoint", "SpecNotConcrete",
    "NotDivisible", "build_bundle", "W3_of", "apply_bertini", "is_basepoint", "reject_basepoint", "cubic", "image",
    "involution_formulas", "w_coefficients", "random_spec", "CORRUPTIONS",
]
