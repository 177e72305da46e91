"""The double cover of the quadric cone and its ramification data.

The anti-bicanonical map ``y -> (phi6, w^2, w wp, wp^2)`` sends the plane to
the cone ``z1 z3 = z2^2``; in the chart ``x = w/wp``, ``y = phi6/wp^2`` it
becomes a two-to-one map to the Hirzebruch surface Sigma_2.  The binary
forms ``S2, P2, Q4, R3`` in ``(w, wp)`` describe the contracted sextic
``psi6 = phi6 + S2(w, wp)`` and the branch curve

    K^2 = -4 phi6^3 + phi6^2 P2(w, wp) + phi6 Q4(w, wp) + R3(w, wp)^2.

Two independent routes produce their coefficients: :func:`ram_closed_form`
(short displayed formulas plus the sign/brace rule) and :func:`ram_oracle`
(an exact linear solve from the bundle, with a perfect-square certificate).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .bertini import (
    BertiniBundle,
    DegeneratePoint,
    PencilSpec,
    ProjPoint,
    SpecNotConcrete,
    _cached_bundle,
    cubic,
)
from .brace import signed_braces
from .ring import (
    INDEX,
    QQ,
    NotAPerfectSquare,
    NotDivisible,
    Polynomial,
    evaluate,
    exact_div,
    sqrt_exact,
    substitute,
)


class InconsistentSystem(ArithmeticError):
    """The coefficient-matching system has no solution."""


class ChartUndefined(ValueError):
    """``wp(y) = 0``: the affine Sigma_2 coordinate does not exist."""


class NotABasepoint(ValueError):
    pass


def v(name, dom=QQ):
    return Polynomial.var(name, dom)


def binary_form(coeffs, t1, t2):
    """``sum(c_i * t1**i * t2**(d - i))`` with ``d = len(coeffs) - 1``."""
    d = len(coeffs) - 1
    total = 0 * t1
    for i, c in enumerate(coeffs):
        total = total + c * t1**i * t2 ** (d - i)
    return total


def univariate(coeffs, x, dom):
    """``sum(c_i x^i)`` for scalar coefficients, in the field ``dom``."""
    acc = 0
    for c in reversed(coeffs):
        acc = dom.scalar(acc * x + c)
    return acc


@dataclass(frozen=True)
class RamData:
    """Coefficients of ``S2`` (3), ``P2`` (3), ``Q4`` (5) and ``R3`` (4).

    Entries are polynomials in the coefficient variables (constants for a
    concrete pencil).  ``r_sign`` records which global sign of ``R3`` the
    oracle matched against the closed form (``R3`` only enters squared).
    """

    s: tuple
    p: tuple
    q: tuple
    r: tuple
    r_sign: int = 1

    def forms(self, t1, t2) -> dict:
        return {
            "S": binary_form(self.s, t1, t2),
            "P": binary_form(self.p, t1, t2),
            "Q": binary_form(self.q, t1, t2),
            "R": binary_form(self.r, t1, t2),
        }

    def specialize(self, spec: PencilSpec) -> "RamData":
        return self.map(spec.apply)

    def map(self, f) -> "RamData":
        return RamData(*(tuple(f(c) for c in getattr(self, n)) for n in "spqr"),
                       r_sign=self.r_sign)

    def scalars(self) -> dict:
        return {n: [c.constant_value() for c in getattr(self, n)] for n in "spqr"}

    def entries(self):
        for n in "spqr":
            for i, c in enumerate(getattr(self, n)):
                yield f"{n}{i}", c


def closed_form_leading(dom=QQ) -> dict:
    """``s0, r0, q0, p0`` exactly as displayed (q0 expanded)."""
    a1, a2, b1, b2, b3, c1, c2 = (v(n, dom) for n in ("a1", "a2", "b1", "b2", "b3", "c1", "c2"))
    s0 = a2 * c1 - a1 * c2
    r0 = -a1 * b2 * c2 + a1 * b3 * c1 + a2 * b1 * c2
    q0 = 4 * (a1 * c2 - b1 * b3) * s0 + 2 * b2 * r0
    p0 = b2**2 - 4 * a2 * c1 - 4 * b1 * b3 + 8 * a1 * c2
    return {"s0": s0, "r0": r0, "q0": q0, "p0": p0}


def ram_closed_form(dom=QQ) -> RamData:
    """Generic coefficients from the closed forms and the sign/brace rule."""
    lead = closed_form_leading(dom)
    return RamData(
        s=signed_braces(lead["s0"], 3),
        p=signed_braces(lead["p0"], 3),
        q=signed_braces(lead["q0"], 5),
        r=signed_braces(lead["r0"], 4),
    )


# oracle: exact solve ordered by vanishing order at the distinguished basepoint

_IY = [INDEX[n] for n in ("y1", "y2", "y3")]


def _order_and_lead(f: Polynomial):
    """Vanishing order at (0:0:1) and the lowest-order binary form of ``f``.

    ``f`` is homogeneous in y; the order is ``deg_y - max exponent of y3``
    and the lead collects the terms with that ``y3`` exponent, ``y3 -> 1``.
    """
    groups = f.coefficients(("y3",))
    e3 = max(k[0] for k in groups)
    lead = groups[(e3,)]
    return lead.degree(("y1", "y2")), lead


def _det(rows):
    """Fraction-free (Bareiss) determinant of a square polynomial matrix."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return None
    sign = 1
    prev = None
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0 * m[0][0]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num if prev is None else exact_div(num, prev)
        prev = m[k][k]
    d = m[n - 1][n - 1]
    return d if sign > 0 else -d


def _binary_coeffs(form: Polynomial, degree: int) -> list:
    groups = form.coefficients(("y1", "y2"))
    zero = 0 * form
    return [groups.get((k, degree - k), zero) for k in range(degree + 1)]


def _solve_block(leads, target, degree):
    """Solve ``sum(x_j * leads[j]) == target`` among binary forms exactly."""
    cols = [_binary_coeffs(f, degree) for f in leads]
    rhs = _binary_coeffs(target, degree)
    n = len(leads)
    nrows = degree + 1
    if n > nrows:
        raise InconsistentSystem("more unknowns than equations in a block")
    for chosen in itertools.combinations(range(nrows), n):
        mat = [[cols[j][i] for j in range(n)] for i in chosen]
        d = _det(mat)
        if d.is_zero():
            continue
        xs = []
        for j in range(n):
            mj = [row[:j] + [rhs[i]] + row[j + 1:] for row, i in zip(mat, chosen)]
            try:
                xs.append(exact_div(_det(mj), d))
            except NotDivisible:
                raise InconsistentSystem("Cramer quotient is not a polynomial") from None
        return xs
    raise InconsistentSystem("lead forms are linearly dependent")


def solve_decomposition(target: Polynomial, basis: dict) -> dict:
    """Find coefficient polynomials ``x`` with ``target == sum(x_k * basis[k])``.

    Each basis element is homogeneous in ``y`` of the target's degree and the
    unknowns are free of ``y``.  Unknowns are determined block by block in
    increasing order of vanishing at ``(0:0:1)``; the full identity is then
    checked, so any returned solution is exact.
    """
    info = {k: _order_and_lead(b) for k, b in basis.items()}
    residual = target
    solution = {}
    for order in sorted({o for o, _ in info.values()}):
        keys = [k for k in basis if info[k][0] == order]
        if not residual.is_zero():
            ro, rlead = _order_and_lead(residual)
            if ro < order:
                raise InconsistentSystem(f"residual of order {ro} below next unknown order {order}")
            if ro > order:
                rlead = 0 * rlead
        else:
            rlead = residual
        xs = _solve_block([info[k][1] for k in keys], rlead, order)
        for k, x in zip(keys, xs):
            solution[k] = x
            residual = residual - x * basis[k]
    if not residual.is_zero():
        raise InconsistentSystem(f"residual with {len(residual)} terms remains")
    return solution


def _forms_basis(phi, w, wp, power, degree):
    return {(power, i): phi**power * w**i * wp ** (degree - i) for i in range(degree + 1)}


def ram_oracle(bundle: BertiniBundle) -> RamData:
    """Re-derive every coefficient from the bundle alone.

    ``S`` from ``psi6 - phi6``; ``P``, ``Q`` and a free sextic ``U`` from
    ``K^2 + 4 phi6^3``; then ``U`` is certified to be ``R^2``.
    """
    w, wp, phi, psi, K = bundle.w, bundle.wp, bundle.phi6, bundle.psi6, bundle.K
    s_sol = solve_decomposition(psi - phi, _forms_basis(phi, w, wp, 0, 2))
    s = tuple(s_sol[(0, i)] for i in range(3))

    target = K**2 + 4 * phi**3
    basis = {}
    basis.update({("P",) + k: b for k, b in _forms_basis(phi, w, wp, 2, 2).items()})
    basis.update({("Q",) + k: b for k, b in _forms_basis(phi, w, wp, 1, 4).items()})
    basis.update({("U",) + k: b for k, b in _forms_basis(phi, w, wp, 0, 6).items()})
    sol = solve_decomposition(target, basis)
    p = tuple(sol[("P", 2, i)] for i in range(3))
    q = tuple(sol[("Q", 1, i)] for i in range(5))
    u = [sol[("U", 0, i)] for i in range(7)]
    r = square_root_sextic(u)

    ref = bundle.spec.apply(closed_form_leading(bundle.spec.domain)["r0"])
    sign = 1
    if r[0] != ref:
        ref_r = ram_closed_form(bundle.spec.domain).specialize(bundle.spec).r
        for mine, theirs in zip(r, ref_r):
            if not theirs.is_zero() or not mine.is_zero():
                if mine == -theirs:
                    sign = -1
                break
    if sign < 0:
        r = tuple(-c for c in r)
    return RamData(s=s, p=p, q=q, r=tuple(r), r_sign=sign)


def square_root_sextic(u) -> tuple:
    """Coefficients ``(r0..r3)`` of a cubic form with ``R^2 == U``.

    ``u[i]`` is the coefficient of ``t1^i t2^(6-i)``.  Starts from the
    ``t1^6`` coefficient (``u6 = r3^2``) and peels off the rest by exact
    division, then certifies by one squaring.
    """
    u = list(u)
    zero = 0 * u[0]
    if all(c.is_zero() for c in u):
        return (zero,) * 4
    top = max(i for i in range(7) if not u[i].is_zero())
    if top % 2:
        raise NotAPerfectSquare("odd top degree")
    # R has t1-degree top/2; solve from the top coefficient downwards
    h = top // 2
    lead = sqrt_exact(u[top])
    rr = {h: lead}
    two_lead = 2 * lead
    for k in range(h - 1, -1, -1):
        # t1^(h+k) coefficient of R^2: 2 r_h r_k plus the pairs strictly inside
        acc = u[h + k]
        for i in range(k + 1, h):
            acc = acc - rr[i] * rr[h + k - i]
        try:
            rr[k] = exact_div(acc, two_lead)
        except NotDivisible:
            raise NotAPerfectSquare("peeling step is not exact") from None
    r = tuple(rr.get(i, zero) for i in range(4))
    t1, t2 = v("t1", zero.domain), v("t2", zero.domain)
    if binary_form(r, t1, t2) ** 2 != binary_form(u, t1, t2):
        raise NotAPerfectSquare("U is not the square of a cubic form")
    return r


# maps


@dataclass(frozen=True)
class ConePoint:
    coords: tuple
    domain: object

    def on_cone(self) -> bool:
        z0, z1, z2, z3 = self.coords
        return self.domain.scalar(z1 * z3 - z2 * z2) == 0


@dataclass(frozen=True)
class Sigma2Point:
    """``x`` as the projective pair ``(w : wp)`` and the affine ``y``."""

    x: tuple
    y: object
    domain: object

    @property
    def x_affine(self):
        w, wp = self.x
        if wp == 0:
            raise ChartUndefined("x is at infinity")
        return self.domain.scalar(w * self.domain.inv(wp))


def _values(spec: PencilSpec, y: ProjPoint, polys):
    if not spec.is_concrete:
        raise SpecNotConcrete("needs a concrete pencil")
    return [evaluate(p, y.assignment()) for p in polys]


def cone_map(spec: PencilSpec, y: ProjPoint) -> ConePoint:
    b = _cached_bundle(spec)
    phi, w, wp = _values(spec, y, (b.phi6, b.w, b.wp))
    dom = spec.domain
    try:
        pt = ProjPoint.of((phi, w * w, w * wp, wp * wp), dom)
    except DegeneratePoint:
        raise DegeneratePoint("degenerate: basepoint or contracted locus") from None
    return ConePoint(pt.coords, dom)


def sigma2_chart(spec: PencilSpec, y: ProjPoint) -> Sigma2Point:
    """``x = w(y) : wp(y)`` and ``y = phi6(y) / wp(y)^2``."""
    b = _cached_bundle(spec)
    phi, w, wp = _values(spec, y, (b.phi6, b.w, b.wp))
    dom = spec.domain
    if w == 0 and wp == 0:
        raise DegeneratePoint("degenerate: basepoint or contracted locus")
    if wp == 0:
        raise ChartUndefined("wp(y) = 0; x is (1:0)")
    inv = dom.inv(wp)
    x = (dom.scalar(w * inv), 1)
    return Sigma2Point(x, dom.scalar(phi * inv * inv), dom)


def trigonal_residual(ram: RamData, pt: Sigma2Point):
    """``-4 y^3 + y^2 P2(x) + y Q4(x) + R3(x)^2`` with scalar ``ram``."""
    dom = pt.domain
    x, yy = pt.x_affine, pt.y
    c = ram.scalars()
    P = univariate([dom.scalar(a) for a in c["p"]], x, dom)
    Q = univariate([dom.scalar(a) for a in c["q"]], x, dom)
    R = univariate([dom.scalar(a) for a in c["r"]], x, dom)
    return dom.scalar(-4 * yy**3 + yy * yy * P + yy * Q + R * R)


def S2_at(ram: RamData, x, dom):
    return univariate([dom.scalar(a) for a in ram.scalars()["s"]], x, dom)


# basepoint sections


@dataclass(frozen=True)
class BasepointSection:
    u2: object
    u3: object
    su: tuple

    def S(self, t1, t2):
        return binary_form(self.su, t1, t2)

    def psi(self, bundle: BertiniBundle) -> Polynomial:
        """``phi6 + S^u(w, wp)``."""
        return bundle.phi6 + self.S(bundle.w, bundle.wp)


def su0_leading(dom=QQ) -> Polynomial:
    """``s^u_0`` with ``u2, u3`` as inert variables."""
    a1, a2, b2, b3, c2 = (v(n, dom) for n in ("a1", "a2", "b2", "b3", "c2"))
    u2, u3 = v("u2", dom), v("u3", dom)
    s0 = closed_form_leading(dom)["s0"]
    return s0 + (a2 * c2 * u2 + (a2 * b2 - a1 * b3) * u3) + a2 * b3 * u2 * u3 + a2**2 * u3**2


def basepoint_section(spec: PencilSpec, u2, u3, check: bool = True) -> BasepointSection:
    """Section for the basepoint ``(1, u2, u3)``.

    ``u2, u3`` may be scalars or polynomials (``v("u2")`` for the symbolic
    version).  For a concrete pencil and scalar ``u`` the basepoint
    condition is checked unless ``check`` is false.
    """
    dom = spec.domain
    U2 = u2 if isinstance(u2, Polynomial) else Polynomial.const(u2, dom)
    U3 = u3 if isinstance(u3, Polynomial) else Polynomial.const(u3, dom)
    if check and spec.is_concrete and U2.is_constant() and U3.is_constant():
        pt = (Polynomial.const(1, dom), U2, U3)
        if not (cubic(spec, point=pt).is_zero() and cubic(spec, primed=True, point=pt).is_zero()):
            raise NotABasepoint(f"(1, {u2}, {u3}) is not a basepoint of the pencil")
    generic = signed_braces(su0_leading(dom), 3)
    bind = spec.bindings()
    bind.update({"u2": U2, "u3": U3})
    su = tuple(substitute(c, bind) for c in generic)
    return BasepointSection(u2, u3, su)


def section_relations(dom=QQ) -> tuple:
    """``w(1, u2, u3)`` and ``wp(1, u2, u3)`` for the generic pencil."""
    spec = PencilSpec.generic(dom)
    pt = (Polynomial.const(1, dom), v("u2", dom), v("u3", dom))
    return cubic(spec, point=pt), cubic(spec, primed=True, point=pt)


def eliminate_linear(f: Polynomial, name: str, num: Polynomial, den: Polynomial) -> Polynomial:
    """``den^d * f(name -> num/den)`` where ``d = deg_name f``."""
    if f.is_zero():
        return f
    groups = f.coefficients((name,))
    d = max(k[0] for k in groups)
    total = 0 * f
    for (k,), c in groups.items():
        total = total + c * num**k * den ** (d - k)
    return total


def reduce_mod_basepoint(f: Polynomial) -> Polynomial:
    """Reduce ``f`` modulo ``w(1,u) = wp(1,u) = 0`` by eliminating ``c1, c1'``.

    Both relations are linear in ``c1`` (resp. ``c1'``) with coefficient
    ``u2``; the result is zero iff ``f`` vanishes on the basepoint locus
    (away from ``u2 = 0``).
    """
    rel, relp = section_relations(f.domain)
    u2 = v("u2", f.domain)
    for name, r in (("c1", rel), ("c1p", relp)):
        c = v(name, f.domain)
        rest = r - c * u2
        f = eliminate_linear(f, name, -rest, u2)
    return f


__all__ = [
    "RamData", "ConePoint", "Sigma2Point", "BasepointSection", "InconsistentSystem",
    "ChartUndefined", "NotABasepoint", "NotAPerfectSquare", "ram_closed_form", "ram_oracle",
    "closed_form_leading", "solve_decomposition", "square_root_sextic", "cone_map",
    "sigma2_chart", "trigonal_residual", "basepoint_section", "su0_leading",
    "section_relations", "reduce_mod_basepoint", "eliminate_linear", "binary_form", "S2_at",
]
