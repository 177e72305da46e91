"""Exact sparse multivariate polynomials over Q and prime fields.

Every polynomial lives in one fixed ring of 21 variables (the pencil
coefficients, their primed partners, the point ``y``, the binary-form
variables ``t1, t2`` and the basepoint coordinates ``u2, u3``).  Arithmetic
is delegated to FLINT through ``python-flint``; this module owns the
variable universe, the canonical text format, exact division with a
remainder check, substitution, evaluation and the prime swap.

Scalars are plain Python objects: :class:`fractions.Fraction` over Q and
``int`` residues in ``[0, p)`` over F_p.
"""

from __future__ import annotations

import functools
import math
import re
from fractions import Fraction
from typing import Iterable, Mapping

import flint

UNPRIMED = ("a1", "a2", "b1", "b2", "b3", "c1", "c2")
PRIMED = tuple(v + "p" for v in UNPRIMED)
COEFFICIENTS = UNPRIMED + PRIMED
Y = ("y1", "y2", "y3")
T = ("t1", "t2")
U = ("u2", "u3")
VARIABLES = COEFFICIENTS + Y + T + U
INDEX = {name: i for i, name in enumerate(VARIABLES)}
NVARS = len(VARIABLES)

MERSENNE61 = 2**61 - 1


class DomainMismatch(ValueError):
    pass


class NotDivisible(ArithmeticError):
    """Raised when an exact division leaves a nonzero remainder."""


class NotAPerfectSquare(ArithmeticError):
    pass


class MissingBinding(KeyError):
    pass


class ParseError(ValueError):
    pass


class Rationals:
    """The field Q."""

    name = "QQ"
    characteristic = 0

    def __init__(self):
        self.ctx = flint.fmpq_mpoly_ctx.get(VARIABLES, "deglex")

    def __repr__(self):
        return "QQ"

    def __reduce__(self):
        return (_rationals, ())

    def scalar(self, x) -> Fraction:
        if isinstance(x, flint.fmpq):
            return Fraction(int(x.p), int(x.q))
        if isinstance(x, str):
            return Fraction(x.strip())
        return Fraction(x)

    def to_flint(self, x):
        x = self.scalar(x)
        return flint.fmpq(x.numerator, x.denominator)

    def inv(self, x) -> Fraction:
        x = self.scalar(x)
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / x

    def format(self, c) -> str:
        return str(self.scalar(c))

    def random(self, rng):
        return Fraction(rng.randrange(-9, 10))


class PrimeField:
    """The field F_p for a prime ``p``; elements are ints in ``[0, p)``."""

    characteristic: int

    def __init__(self, p: int):
        p = int(p)
        if p < 2 or not flint.fmpz(p).is_prime():
            raise ValueError(f"{p} is not a prime")
        self.p = self.characteristic = p
        self.name = f"GF({p})"
        if p < 2**64:
            self.ctx = flint.nmod_mpoly_ctx.get(VARIABLES, ordering="deglex", modulus=p)
        else:
            self.ctx = flint.fmpz_mod_mpoly_ctx.get(VARIABLES, ordering="deglex", modulus=p)

    def __repr__(self):
        return self.name

    def __reduce__(self):
        return (GF, (self.p,))

    def scalar(self, x) -> int:
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        if isinstance(x, str):
            x = x.strip()
            if "/" in x:
                return self.scalar(Fraction(x))
        return int(x) % self.p

    def to_flint(self, x):
        return self.scalar(x)

    def inv(self, x) -> int:
        x = self.scalar(x)
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def format(self, c) -> str:
        return str(self.scalar(c))

    def random(self, rng):
        return rng.randrange(self.p)


QQ = Rationals()


def _rationals():
    return QQ


@functools.lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def _check_same(a: "Polynomial", b: "Polynomial"):
    if a.domain is not b.domain:
        raise DomainMismatch(f"{a.domain!r} vs {b.domain!r}")


class Polynomial:
    """Immutable sparse polynomial in the fixed variable universe."""

    __slots__ = ("raw", "domain")

    def __init__(self, raw, domain=QQ):
        self.raw = raw
        self.domain = domain

    # construction

    @classmethod
    def var(cls, name: str, domain=QQ) -> "Polynomial":
        if name not in INDEX:
            raise ValueError(f"unknown variable {name!r}")
        return cls(domain.ctx.gen(INDEX[name]), domain)

    @classmethod
    def const(cls, c, domain=QQ) -> "Polynomial":
        return cls(domain.ctx.constant(domain.to_flint(c)), domain)

    @classmethod
    def zero(cls, domain=QQ) -> "Polynomial":
        return cls(domain.ctx.constant(0), domain)

    @classmethod
    def from_terms(cls, terms: Mapping[tuple, object], domain=QQ) -> "Polynomial":
        """Build from ``{exponent_tuple: coefficient}`` with 21-long tuples."""
        data = {}
        for exps, c in terms.items():
            if len(exps) != NVARS:
                raise ValueError("exponent tuple must have one entry per variable")
            c = domain.to_flint(c)
            if c != 0:
                data[tuple(exps)] = c
        if not data:
            return cls.zero(domain)
        return cls(domain.ctx.from_dict(data), domain)

    def _wrap(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            _check_same(self, other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.const(other, self.domain)
        return NotImplemented

    # arithmetic

    def __add__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.raw + other.raw, self.domain)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.raw - other.raw, self.domain)

    def __rsub__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        return Polynomial(other.raw - self.raw, self.domain)

    def __mul__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.raw * other.raw, self.domain)

    __rmul__ = __mul__

    def __neg__(self):
        return Polynomial(-self.raw, self.domain)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        return Polynomial(self.raw**k, self.domain)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(other, self.domain)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.domain is other.domain and self.raw == other.raw

    def __hash__(self):
        return hash((self.domain.name, frozenset(self.raw.to_dict().items())))

    def __bool__(self):
        return not self.raw.is_zero()

    def __repr__(self):
        text = canonical_text(self)
        if len(text) > 200:
            text = text[:200] + " ..."
        return f"Polynomial({text!r}, {self.domain!r})"

    def __str__(self):
        return canonical_text(self)

    # inspection

    def __len__(self):
        return len(self.raw)

    def is_zero(self) -> bool:
        return self.raw.is_zero()

    def is_constant(self) -> bool:
        return self.raw.is_constant()

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return self.domain.scalar(_const_coeff(self))

    def terms(self) -> dict:
        """``{exponent_tuple: scalar}`` for every nonzero term."""
        sc = self.domain.scalar
        return {m: sc(c) for m, c in self.raw.to_dict().items()}

    def variables(self) -> set:
        degs = self.raw.degrees()
        return {VARIABLES[i] for i, d in enumerate(degs) if d > 0}

    def degree(self, among: Iterable[str] | None = None) -> int:
        """Total degree, optionally counting only the variables ``among``."""
        if self.is_zero():
            return -1
        if among is None:
            return int(self.raw.total_degree())
        idx = [INDEX[v] for v in among]
        return max(sum(m[i] for i in idx) for m in self.raw.monoms())

    def degrees(self, among: Iterable[str]) -> set:
        """Set of partial total degrees over ``among`` occurring in the terms."""
        idx = [INDEX[v] for v in among]
        return {sum(m[i] for i in idx) for m in self.raw.monoms()}

    def is_homogeneous(self, among: Iterable[str]) -> bool:
        return len(self.degrees(among)) <= 1

    def coefficients(self, among: Iterable[str]) -> dict:
        """Group terms by their exponents in ``among``.

        Returns ``{exps_in_among: Polynomial}`` where each value is free of
        the ``among`` variables.
        """
        idx = [INDEX[v] for v in among]
        groups: dict = {}
        for m, c in self.raw.to_dict().items():
            key = tuple(m[i] for i in idx)
            rest = list(m)
            for i in idx:
                rest[i] = 0
            groups.setdefault(key, {})[tuple(rest)] = c
        ctx = self.domain.ctx
        return {k: Polynomial(ctx.from_dict(v), self.domain) for k, v in groups.items()}

    def derivative(self, name: str) -> "Polynomial":
        return Polynomial(self.raw.derivative(INDEX[name]), self.domain)

    # named operations as methods

    def substitute(self, bindings):
        return substitute(self, bindings)

    def evaluate(self, assignment):
        return evaluate(self, assignment)

    def exact_div(self, d):
        return exact_div(self, d)

    def swap_primes(self):
        return swap_primes(self)

    def reduce(self, domain) -> "Polynomial":
        return reduce_mod(self, domain)


def _const_coeff(p: Polynomial):
    d = p.raw.to_dict()
    return d.get((0,) * NVARS, 0)


def var(name: str, domain=QQ) -> Polynomial:
    return Polynomial.var(name, domain)


def const(c, domain=QQ) -> Polynomial:
    return Polynomial.const(c, domain)


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    _check_same(p, q)
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    _check_same(p, q)
    return p * q


def substitute(p: Polynomial, bindings: Mapping[str, Polynomial]) -> Polynomial:
    """Simultaneously replace variables by polynomials; others are unchanged."""
    if not bindings:
        return p
    ctx = p.domain.ctx
    gens = list(ctx.gens())
    for name, value in bindings.items():
        if name not in INDEX:
            raise ValueError(f"unknown variable {name!r}")
        if not isinstance(value, Polynomial):
            value = Polynomial.const(value, p.domain)
        _check_same(p, value)
        gens[INDEX[name]] = value.raw
    return Polynomial(p.raw.compose(*gens), p.domain)


def exact_div(p: Polynomial, d: Polynomial) -> Polynomial:
    """Quotient ``q`` with ``p == q * d``; raises :class:`NotDivisible` otherwise."""
    _check_same(p, d)
    if d.is_zero():
        raise ZeroDivisionError("exact_div by the zero polynomial")
    q, r = divmod(p.raw, d.raw)
    if not r.is_zero():
        raise NotDivisible(f"remainder has {len(r)} terms")
    return Polynomial(q, p.domain)


def evaluate(p: Polynomial, assignment: Mapping[str, object]):
    missing = p.variables() - set(assignment)
    if missing:
        raise MissingBinding(", ".join(sorted(missing, key=INDEX.get)))
    dom = p.domain
    args = [dom.to_flint(0)] * NVARS
    for name, value in assignment.items():
        if name in INDEX:
            args[INDEX[name]] = dom.to_flint(value)
    if isinstance(dom, PrimeField):
        # nmod/fmpz_mod evaluation wants plain ints
        args = [int(a) for a in args]
    return dom.scalar(p.raw(*args))


_SWAP = [INDEX[v] for v in PRIMED + UNPRIMED + Y + T + U]


def swap_primes(p: Polynomial) -> Polynomial:
    """Exchange every coefficient variable with its primed partner."""
    gens = p.domain.ctx.gens()
    return Polynomial(p.raw.compose(*[gens[i] for i in _SWAP]), p.domain)


def reduce_mod(p: Polynomial, domain) -> Polynomial:
    """Map a rational polynomial into ``domain`` coefficientwise."""
    if p.domain is domain:
        return p
    if p.domain is not QQ:
        raise DomainMismatch("only rational polynomials can be reduced")
    return Polynomial.from_terms(p.terms(), domain)


def sqrt_exact(p: Polynomial) -> Polynomial:
    """Square root of a perfect square, by leading-term extraction.

    Repeatedly takes the leading term of the remainder ``p - r**2`` and
    divides it by twice the leading term of ``r``.  The result is then
    certified by one squaring; :class:`NotAPerfectSquare` otherwise.
    """
    if p.is_zero():
        return p
    dom = p.domain
    key = _deglex_key
    terms = p.terms()
    lead = max(terms, key=key)
    c = terms[lead]
    if any(e % 2 for e in lead):
        raise NotAPerfectSquare("leading monomial has an odd exponent")
    root_c = _scalar_sqrt(dom, c)
    half = tuple(e // 2 for e in lead)
    root = Polynomial.from_terms({half: root_c}, dom)
    two_lead = 2 * root_c
    while True:
        rem = p - root * root
        if rem.is_zero():
            return root
        rt = rem.terms()
        m = max(rt, key=key)
        q = tuple(a - b for a, b in zip(m, half))
        # candidates strictly decrease in a well-order, so this terminates
        if any(e < 0 for e in q) or key(q) >= key(half):
            raise NotAPerfectSquare("remainder leading term not reachable")
        root = root + Polynomial.from_terms({q: rt[m] * dom.inv(two_lead)}, dom)


def _deglex_key(m):
    # total degree, then lex with u3 as the largest variable
    return (sum(m),) + tuple(reversed(m))


def _scalar_sqrt(dom, c):
    if dom is QQ:
        c = Fraction(c)
        if c < 0:
            raise NotAPerfectSquare("negative leading coefficient")
        n, d = _isqrt_exact(c.numerator), _isqrt_exact(c.denominator)
        return Fraction(n, d)
    s = flint.fmpz_mod_ctx(dom.p)(c).sqrt() if c else 0
    return int(s)


def _isqrt_exact(n: int) -> int:
    r = math.isqrt(n)
    if r * r != n:
        raise NotAPerfectSquare(f"{n} is not a square")
    return r


# canonical text

def _monomial_text(m) -> str:
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(VARIABLES[i])
        elif e > 1:
            parts.append(f"{VARIABLES[i]}^{e}")
    return "*".join(parts)


def canonical_text(p: Polynomial) -> str:
    """Graded-lex ascending text, ``coef*var^e*...`` joined by `` + ``/`` - ``.

    The variable order is ``a1 < a2 < ... < c2p < y1 < y2 < y3 < t1 < t2 <
    u2 < u3``.
    """
    terms = p.terms()
    if not terms:
        return "0"
    out = []
    for k, m in enumerate(sorted(terms, key=_deglex_key)):
        c = terms[m]
        neg = p.domain is QQ and c < 0
        mag = p.domain.format(-c if neg else c)
        mono = _monomial_text(m)
        body = f"{mag}*{mono}" if mono else mag
        if k == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


_TERM = re.compile(r"^(\d+(?:/\d+)?)((?:\*[a-z][a-z0-9]*(?:\^\d+)?)*)$")
_FACTOR = re.compile(r"\*([a-z][a-z0-9]*)(?:\^(\d+))?")


def parse_text(text: str, domain=QQ) -> Polynomial:
    """Strict inverse of :func:`canonical_text`."""
    if text == "0":
        return Polynomial.zero(domain)
    if not text or text != text.strip():
        raise ParseError("empty or padded input")
    pieces = re.split(r" ([+-]) ", text)
    signs = ["+"] + pieces[1::2]
    bodies = pieces[0::2]
    if bodies[0].startswith("-"):
        signs[0] = "-"
        bodies[0] = bodies[0][1:]
    terms: dict = {}
    for sign, body in zip(signs, bodies):
        mt = _TERM.match(body)
        if not mt:
            raise ParseError(f"malformed term {body!r}")
        coef = Fraction(mt.group(1))
        if coef == 0:
            raise ParseError("zero coefficient")
        exps = [0] * NVARS
        for name, e in _FACTOR.findall(mt.group(2)):
            if name not in INDEX:
                raise ParseError(f"unknown variable {name!r}")
            e = int(e) if e else 1
            if exps[INDEX[name]]:
                raise ParseError(f"repeated variable {name!r}")
            exps[INDEX[name]] = e
        key = tuple(exps)
        if key in terms:
            raise ParseError("repeated monomial")
        terms[key] = -coef if sign == "-" else coef
    poly = Polynomial.from_terms(terms, domain)
    if canonical_text(poly) != text:
        raise ParseError("input is not in canonical form")
    return poly
