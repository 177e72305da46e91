"""Identity verification: exact, modular, roundtrips and fixed-locus sampling.

Every catalogue entry is an :class:`IdentityCheck` whose ``residuals``
recipe builds a list of polynomials that must all vanish.  In symbolic
mode the recipe runs on the generic pencil over Q.  In modular mode it runs
on seeded random pencils over F_p and each residual is evaluated at seeded
random values of its remaining variables (Schwartz-Zippel).

Random values come from :class:`HashRNG`: the ``n``-th draw for a label is
``int(sha256(f"{seed}:{label}:{n}").hexdigest(), 16) % bound``, so reports
are reproducible bit for bit and do not depend on check order.
"""

from __future__ import annotations

import functools
import hashlib
import itertools
import time
from dataclasses import dataclass, field
from typing import Callable

from .bertini import (
    CORRUPTIONS,
    DegeneratePoint,
    PencilSpec,
    ProjPoint,
    W3_of,
    apply_bertini,
    build_bundle,
    cubic,
    random_spec,
)
from .brace import brace
from .geiser import (
    anticanonical_map,
    basepoint_section_geiser,
    build_geiser,
    geiser_apply,
    geiser_ram,
    quartic_residual,
)
from .ring import (
    COEFFICIENTS,
    MERSENNE61,
    GF,
    NotAPerfectSquare,
    NotDivisible,
    Polynomial,
    evaluate,
    swap_primes,
)
from .roots import roots_mod_p
from .sigma2 import (
    ChartUndefined,
    InconsistentSystem,
    basepoint_section,
    closed_form_leading,
    ram_closed_form,
    ram_oracle,
    reduce_mod_basepoint,
    sigma2_chart,
    trigonal_residual,
)
from .universal import w3_residuals

SUITES = ("bertini", "sigma2", "geiser")
DEFAULT_MEM_BUDGET = 8 * 2**30
FALLBACK_TRIALS = 40
#: rough cost of one term of a K^2 product (exponent vector plus coefficient)
BYTES_PER_TERM = 64


class ExcessiveDegeneracy(RuntimeError):
    """Too many samples hit the degenerate locus; re-randomize the pencil."""


class SamplingExhausted(RuntimeError):
    pass


class HashRNG:
    """Counter-based generator: ``sha256(f"{seed}:{label}:{n}") mod bound``."""

    def __init__(self, seed: int, label: str):
        self.seed, self.label, self.n = seed, label, 0

    def randrange(self, start, stop=None):
        if stop is None:
            start, stop = 0, start
        digest = hashlib.sha256(f"{self.seed}:{self.label}:{self.n}".encode()).hexdigest()
        self.n += 1
        return start + int(digest, 16) % (stop - start)


# contexts


class Context:
    """Lazily built objects for one pencil (generic or concrete)."""

    def __init__(self, spec: PencilSpec, corrupt: str | None = None):
        self.spec, self.corrupt, self.domain = spec, corrupt, spec.domain

    @functools.cached_property
    def bundle(self):
        return build_bundle(self.spec, self.corrupt)

    @functools.cached_property
    def ram(self):
        return ram_closed_form(self.domain).specialize(self.spec)

    @functools.cached_property
    def geiser(self):
        return build_geiser(self.spec)

    @functools.cached_property
    def gram(self):
        return geiser_ram(ram_closed_form(self.domain), self.spec)

    def y(self):
        return tuple(Polynomial.var(n, self.domain) for n in ("y1", "y2", "y3"))


def basepoint_spec(domain, rng, geiser: bool = False):
    """A random pencil through ``(1, u2, u3)``, solved for ``c1`` and ``c1'``."""
    while True:
        u2, u3 = domain.random(rng), domain.random(rng)
        if u2 != 0:
            break
    values = {n: domain.random(rng) for n in COEFFICIENTS}
    if geiser:
        values["a1"] = values["a2"] = 0
    for suffix in ("", "p"):
        values["c1" + suffix] = 0
        pt = (1, u2, u3)
        spec = PencilSpec.concrete(values, domain)
        rest = cubic(spec, primed=bool(suffix), point=tuple(Polynomial.const(c, domain) for c in pt))
        values["c1" + suffix] = domain.scalar(-rest.constant_value() * domain.inv(u2))
    return PencilSpec.concrete(values, domain), u2, u3


# catalogue


@dataclass(frozen=True)
class IdentityCheck:
    """A named identity: every polynomial from ``residuals(ctx)`` must vanish.

    ``geiser`` selects Geiser pencils (``a1 = a2 = 0``).  ``certify``
    replaces plain expansion in symbolic mode.  ``pencil`` overrides how a
    modular trial picks its pencil (``"basepoint"``); ``fixed`` marks checks
    that do not depend on a pencil and always run symbolically.
    """

    name: str
    residuals: Callable
    geiser: bool = False
    certify: Callable | None = None
    pencil: str = "random"
    fixed: bool = False


def _partials(f: Polynomial, order: int):
    names = ("y1", "y2", "y3")
    out = [f]
    for k in range(1, order):
        for combo in itertools.combinations_with_replacement(names, k):
            g = f
            for n in combo:
                g = g.derivative(n)
            out.append(g)
    return out


def _at(fs, point):
    bind = dict(zip(("y1", "y2", "y3"), point))
    return [f.substitute(bind) for f in fs]


def _vertices(ctx):
    dom = ctx.domain
    one, zero = Polynomial.const(1, dom), Polynomial.const(0, dom)
    b = ctx.bundle
    out = []
    for vertex in ((one, zero, zero), (zero, one, zero)):
        for f in (b.phi6, b.psi6):
            out += _at(_partials(f, 2), vertex)
    return out


def _bertini_checks():
    def ident(name, fn, **kw):
        return IdentityCheck(name, lambda ctx: [fn(ctx.bundle, *ctx.y())], **kw)

    def w3_cert(which):
        return lambda corrupt: w3_residuals(corrupt)[which].is_zero()

    return [
        ident("bertini_r_phi", lambda b, y1, y2, y3: y3 * b.r1 - y1 * b.r3 - b.A2 * b.gamma4 * b.phi6),
        ident("bertini_r_psi", lambda b, y1, y2, y3: y2 * b.r3 - y3 * b.r2 - b.A1 * b.gamma4 * b.psi6),
        ident("bertini_r_gamma", lambda b, y1, y2, y3: y1 * b.r2 - y2 * b.r1 + b.rp1 * b.gamma4),
        ident("bertini_z_phi", lambda b, y1, y2, y3: y3 * b.z1 - y1 * b.z3 + b.phi6 * b.K * b.A2),
        ident("bertini_z_psi", lambda b, y1, y2, y3: y2 * b.z3 - y3 * b.z2 + b.psi6 * b.K * b.A1),
        ident("tangency", lambda b, *_: b.A1 * b.r1 + b.A2 * b.r2),
        IdentityCheck("W3_r", lambda ctx: [W3_of(ctx.bundle, ctx.bundle.r)], certify=w3_cert("r")),
        IdentityCheck("W3_z", lambda ctx: [W3_of(ctx.bundle, ctx.bundle.z)], certify=w3_cert("z")),
        IdentityCheck("phi6_psi6_double_vertices", _vertices),
    ]


def _psi_relation(ctx):
    b = ctx.bundle
    return [b.psi6 - b.phi6 - ctx.ram.forms(b.w, b.wp)["S"]]


def _k2_relation(ctx):
    b = ctx.bundle
    f = ctx.ram.forms(b.w, b.wp)
    phi = b.phi6
    return [b.K**2 + 4 * phi**3 - phi**2 * f["P"] - phi * f["Q"] - f["R"] ** 2]


def _symmetry(ctx):
    dom = ctx.domain
    t1, t2 = Polynomial.var("t1", dom), Polynomial.var("t2", dom)
    forms = ram_closed_form(dom).forms(t1, t2)
    swapped = {k: swap_primes(f).substitute({"t1": t2, "t2": t1}) for k, f in forms.items()}
    out = [swapped[k] - forms[k] for k in ("S", "P", "Q")]
    out.append(swapped["R"] + forms["R"])
    return [ctx.spec.apply(f) for f in out]


def _oracle(ctx):
    got = ram_oracle(ctx.bundle)
    return [a - b for (_, a), (_, b) in zip(got.entries(), ctx.ram.entries())]


def _section_residuals(ctx, psi_of, order, geiser=False):
    dom = ctx.domain
    if ctx.spec.is_concrete:
        spec, u2, u3 = ctx.spec, ctx.u[0], ctx.u[1]
        one = Polynomial.const(1, dom)
        sec = psi_of(spec, u2, u3)
        point = (one, Polynomial.const(u2, dom), Polynomial.const(u3, dom))
        return _at(_partials(sec, order), point)
    u2, u3 = Polynomial.var("u2", dom), Polynomial.var("u3", dom)
    # generic: reduce modulo the basepoint relations (then a1 = a2 = 0 for Geiser)
    spec = ctx.spec
    sec = psi_of(spec, u2, u3)
    point = (Polynomial.const(1, dom), u2, u3)
    out = [reduce_mod_basepoint(f) for f in _at(_partials(sec, order), point)]
    if geiser:
        zero = {"a1": Polynomial.const(0, dom), "a2": Polynomial.const(0, dom)}
        out = [f.substitute(zero) for f in out]
    return out


def _psi_u(spec, u2, u3):
    return basepoint_section(spec, u2, u3).psi(build_bundle(spec))


def _psi3_u(spec, u2, u3):
    return basepoint_section_geiser(spec, u2, u3).psi(build_geiser(spec))


def _sigma2_checks():
    return [
        IdentityCheck("psi_relation", _psi_relation),
        IdentityCheck("K2_relation", _k2_relation),
        IdentityCheck("prime_swap_symmetry", _symmetry, fixed=True),
        IdentityCheck("oracle_vs_closed_form", _oracle),
        IdentityCheck("basepoint_section",
                      lambda ctx: _section_residuals(ctx, _psi_u, 2), pencil="basepoint"),
        IdentityCheck("basepoint_triple_point",
                      lambda ctx: _section_residuals(ctx, _psi_u, 3), pencil="basepoint"),
    ]


def _splittings(ctx):
    b, g = ctx.bundle, ctx.geiser
    w = g.w
    pairs = [
        (b.gamma4, w * g.gamma1), (b.rp1, w**2 * g.rt_p1), (b.rp3, w * g.rt_p3),
        (b.phi6, w * g.phi3), (b.psi6, w * g.psi3), (b.C5, w * g.Ct), (b.K, w * g.Kt),
    ]
    pairs += [(ri, w**3 * rti) for ri, rti in zip(b.r, g.rt)]
    return [x - y for x, y in pairs]


def _geiser_ident(name, fn):
    return IdentityCheck(name, lambda ctx: [fn(ctx.geiser, ctx.spec, *ctx.y())], geiser=True)


def _geiser_psi(ctx):
    g = ctx.geiser
    return [g.psi3 - g.phi3 - ctx.gram.forms(g.w, g.wp)["St"]]


def _geiser_k2(ctx):
    g = ctx.geiser
    f = ctx.gram.forms(g.w, g.wp)
    phi = g.phi3
    return [g.Kt**2 + 4 * phi**3 * g.w - phi**2 * f["P"] - phi * f["Qt"] - f["Rt"] ** 2]


def _free_terms(ctx):
    zero = {"a1": Polynomial.const(0, ctx.domain), "a2": Polynomial.const(0, ctx.domain)}
    ram = ram_closed_form(ctx.domain)
    return [ctx.spec.apply(getattr(ram, n)[0].substitute(zero)) for n in "sqr"]


def _w3_reduction(ctx):
    b, g = ctx.bundle, ctx.geiser
    return [zb - g.w**3 * zg for zb, zg in zip(b.z, g.z)]


def _brace_guard(ctx):
    """Bracing after ``a1 = a2 = 0`` must give a different ``s1``.

    The residual is the indicator ``1`` if the two orders agree, so a
    passing check means the guard tells them apart.
    """
    dom = ctx.domain
    zero = {"a1": Polynomial.const(0, dom), "a2": Polynomial.const(0, dom)}
    s0 = closed_form_leading(dom)["s0"]
    before = (-brace(s0, 1)).substitute(zero)
    after = -brace(s0.substitute(zero), 1)
    return [Polynomial.const(int(before == after), dom)]


def _geiser_checks():
    # the first two carry the sign forced by A2 = -a2p w in the Bertini identities
    return [
        IdentityCheck("geiser_splittings", _splittings, geiser=True),
        _geiser_ident("geiser_r_phi", lambda g, s, y1, y2, y3:
                      y3 * g.rt1 - y1 * g.rt3 + s["a2p"] * g.gamma1 * g.phi3),
        _geiser_ident("geiser_r_psi", lambda g, s, y1, y2, y3:
                      y2 * g.rt3 - y3 * g.rt2 + s["a1p"] * g.gamma1 * g.psi3),
        _geiser_ident("geiser_r_gamma", lambda g, s, y1, y2, y3:
                      y1 * g.rt2 - y2 * g.rt1 + g.rt_p1 * g.gamma1),
        _geiser_ident("geiser_z_phi", lambda g, s, y1, y2, y3:
                      y3 * g.z1 - y1 * g.z3 - s["a2p"] * g.phi3 * g.Kt),
        _geiser_ident("geiser_z_psi", lambda g, s, y1, y2, y3:
                      y2 * g.z3 - y3 * g.z2 - s["a1p"] * g.psi3 * g.Kt),
        IdentityCheck("geiser_psi_relation", _geiser_psi, geiser=True),
        IdentityCheck("geiser_K2_relation", _geiser_k2, geiser=True),
        IdentityCheck("q0r0s0_vanish", _free_terms, geiser=True),
        IdentityCheck("w3_reduction", _w3_reduction, geiser=True),
        IdentityCheck("brace_order_guard", _brace_guard, fixed=True),
        IdentityCheck("geiser_basepoint_section",
                      lambda ctx: _section_residuals(ctx, _psi3_u, 2, geiser=True),
                      geiser=True, pencil="basepoint"),
    ]


def catalogue(which: str = "all") -> list:
    table = {"bertini": _bertini_checks, "sigma2": _sigma2_checks, "geiser": _geiser_checks}
    names = SUITES if which == "all" else (which,)
    for n in names:
        if n not in table:
            raise ValueError(f"unknown suite {which!r}")
    return [c for n in names for c in table[n]()]


# running checks


@dataclass
class Entry:
    name: str
    status: str
    mode: str
    trials: int
    ms: float | None = None
    witness: dict | None = None

    def as_json(self, timings: bool = False) -> dict:
        out = {"name": self.name, "status": self.status, "mode": self.mode, "trials": self.trials}
        if self.witness is not None:
            out["witness"] = self.witness
        out["ms"] = round(self.ms, 1) if timings and self.ms is not None else None
        return out


@dataclass
class Report:
    suite: str
    mode: str
    prime: int
    seed: int
    checks: list = field(default_factory=list)

    @property
    def status(self) -> str:
        return "pass" if all(c.status == "pass" for c in self.checks) else "fail"

    def as_json(self, timings: bool = False) -> dict:
        return {
            "suite": self.suite, "mode": self.mode, "prime": self.prime, "seed": self.seed,
            "checks": [c.as_json(timings) for c in sorted(self.checks, key=lambda c: c.name)],
            "status": self.status,
        }

    def __getitem__(self, name: str) -> Entry:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


_FAILURES = (NotDivisible, InconsistentSystem, NotAPerfectSquare, ArithmeticError)


class _Trials:
    """Per-run cache of modular trial contexts, keyed by pencil kind and index."""

    def __init__(self, prime, seed, corrupt):
        self.dom, self.seed, self.corrupt = GF(prime), seed, corrupt
        self.cache: dict = {}

    def get(self, check: IdentityCheck, i: int) -> Context:
        key = (check.pencil, check.geiser, i)
        if key not in self.cache:
            label = f"{check.pencil}:{'geiser' if check.geiser else 'bertini'}:{i}"
            rng = HashRNG(self.seed, label)
            if check.pencil == "basepoint":
                spec, u2, u3 = basepoint_spec(self.dom, rng, check.geiser)
                ctx = Context(spec, self.corrupt)
                ctx.u = (u2, u3)
            else:
                ctx = Context(random_spec(self.dom, rng, check.geiser), self.corrupt)
            self.cache[key] = ctx
        return self.cache[key]


@functools.lru_cache(maxsize=8)
def _shared_generic(geiser: bool, corrupt):
    return Context(PencilSpec.geiser_generic() if geiser else PencilSpec.generic(), corrupt)


def _symbolic(check: IdentityCheck, corrupt) -> Entry:
    if check.certify is not None:
        ok = check.certify(corrupt)
        return Entry(check.name, "pass" if ok else "fail", "symbolic", 0)
    ctx = _shared_generic(check.geiser, corrupt)
    res = check.residuals(ctx)
    bad = [i for i, r in enumerate(res) if not r.is_zero()]
    if bad:
        return Entry(check.name, "fail", "symbolic", 0, witness={"residual": bad[0]})
    return Entry(check.name, "pass", "symbolic", 0)


def _modular(check: IdentityCheck, trials: _Trials, n: int, mode="modular") -> Entry:
    dom = trials.dom
    for i in range(n):
        ctx = trials.get(check, i)
        rng = HashRNG(trials.seed, f"point:{check.name}:{i}")
        for k, r in enumerate(check.residuals(ctx)):
            point = {v: dom.random(rng) for v in sorted(r.variables())}
            if evaluate(r, point) != 0:
                witness = {n_: str(x) for n_, x in ctx.spec.values().items()}
                witness.update({n_: str(x) for n_, x in point.items()})
                if hasattr(ctx, "u"):
                    witness.update(u2=str(ctx.u[0]), u3=str(ctx.u[1]))
                witness.update(trial=i, residual=k)
                return Entry(check.name, "fail", mode, i + 1, witness=witness)
    return Entry(check.name, "pass", mode, n)


def k2_estimate() -> int:
    """Bytes needed to expand ``K^2`` generically (product-of-sizes bound)."""
    k = _shared_generic(False, None).bundle.K
    return len(k) ** 2 * BYTES_PER_TERM


def check_identity(check: IdentityCheck, mode: str = "symbolic", trials: int = 20,
                   prime: int = MERSENNE61, seed: int = 0, corrupt: str | None = None,
                   mem_budget: int = DEFAULT_MEM_BUDGET, _pool: _Trials | None = None) -> Entry:
    """Run one check and return its report entry."""
    if corrupt is not None and corrupt not in CORRUPTIONS:
        raise ValueError(f"unknown corruption {corrupt!r}")
    pool = _pool or _Trials(prime, seed, corrupt)
    start = time.perf_counter()
    try:
        if mode == "symbolic" or check.fixed:
            if check.name == "K2_relation" and k2_estimate() > mem_budget:
                entry = _modular(check, pool, max(trials, FALLBACK_TRIALS), "modular-fallback")
            else:
                entry = _symbolic(check, corrupt)
        elif mode == "modular":
            entry = _modular(check, pool, trials)
        else:
            raise ValueError(f"unknown mode {mode!r}")
    except _FAILURES as exc:
        entry = Entry(check.name, "fail", mode, 0, witness={"error": f"{type(exc).__name__}: {exc}"})
    entry.ms = (time.perf_counter() - start) * 1000
    return entry


def run_suite(which: str = "all", mode: str = "symbolic", trials: int = 20,
              prime: int = MERSENNE61, seed: int = 0, corrupt: str | None = None,
              mem_budget: int = DEFAULT_MEM_BUDGET) -> Report:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    pool = _Trials(prime, seed, corrupt)
    report = Report(which, mode, prime, seed)
    for check in catalogue(which):
        report.checks.append(check_identity(check, mode, trials, prime, seed, corrupt,
                                            mem_budget, _pool=pool))
    return report


# sampling


def _apply(spec, y, geiser):
    return geiser_apply(spec, y) if geiser else apply_bertini(spec, y)


def _random_point(dom, rng):
    return ProjPoint.of([dom.random(rng) for _ in range(3)], dom)


def involution_roundtrip(spec: PencilSpec, n: int = 100, seed: int = 0,
                         geiser: bool = False, max_skip: float = 0.2) -> Entry:
    """Apply the involution twice to ``n`` random points; skips degenerate ones."""
    dom = spec.domain
    rng = HashRNG(seed, "roundtrip")
    start = time.perf_counter()
    skipped = 0
    for i in range(n):
        try:
            y = _random_point(dom, rng)
            back = _apply(spec, _apply(spec, y, geiser), geiser)
        except DegeneratePoint:
            skipped += 1
            continue
        if back != y:
            return Entry("involution_roundtrip", "fail", "modular", i + 1,
                         witness={"point": y.text(), "image": back.text()})
    if skipped > max_skip * n:
        raise ExcessiveDegeneracy(f"{skipped} of {n} samples were degenerate")
    entry = Entry("involution_roundtrip", "pass", "modular", n,
                  witness={"skipped": skipped}, ms=(time.perf_counter() - start) * 1000)
    return entry


def fixed_locus_sample(spec: PencilSpec, n: int = 50, seed: int = 0, geiser: bool = False,
                       max_lines: int = 200) -> Entry:
    """Sample ``n`` points of ``K = 0`` (or ``K~ = 0``) and test that they are fixed.

    Each point is also pushed to the quotient: its ``Sigma_2`` image must
    satisfy the trigonal equation (Bertini), or its plane image the quartic
    (Geiser).  Points where the chart is undefined skip that second test.
    """
    dom = spec.domain
    start = time.perf_counter()
    if geiser:
        K = build_geiser(spec).Kt
        gram = geiser_ram(ram_closed_form(dom), spec)
    else:
        K = build_bundle(spec).K
        ram = ram_closed_form(dom).specialize(spec)
    rng = HashRNG(seed, "fixed")
    s = Polynomial.var("t1", dom)
    found = 0
    for _ in range(max_lines):
        P, Q = _random_point(dom, rng), _random_point(dom, rng)
        line = {f"y{i + 1}": P[i] * s + Q[i] for i in range(3)}
        restricted = K.substitute(line)
        if restricted.is_zero():
            continue
        coeffs = [0] * (restricted.degree() + 1)
        for (e,), c in restricted.coefficients(("t1",)).items():
            coeffs[e] = c.constant_value()
        for root in roots_mod_p(coeffs, dom.p, HashRNG(seed, "split")):
            try:
                y = ProjPoint.of([P[i] * root + Q[i] for i in range(3)], dom)
                z = _apply(spec, y, geiser)
            except DegeneratePoint:
                continue
            if z != y:
                return Entry("fixed_locus", "fail", "modular", found,
                             witness={"point": y.text(), "image": z.text()})
            try:
                if geiser:
                    residual = quartic_residual(gram, anticanonical_map(spec, y))
                else:
                    residual = trigonal_residual(ram, sigma2_chart(spec, y))
            except (ChartUndefined, DegeneratePoint):
                residual = 0
            if residual != 0:
                return Entry("fixed_locus", "fail", "modular", found,
                             witness={"point": y.text(), "branch_residual": str(residual)})
            found += 1
            if found >= n:
                return Entry("fixed_locus", "pass", "modular", found,
                             ms=(time.perf_counter() - start) * 1000)
    raise SamplingExhausted(f"only {found} of {n} fixed points found in {max_lines} lines")


def basepoint_numeric(n: int = 10, seed: int = 0, prime: int = MERSENNE61,
                      geiser: bool = False) -> Entry:
    """``psi^u`` (or ``psi3^u``) is singular at sampled basepoints over F_p."""
    dom = GF(prime)
    fn = _psi3_u if geiser else _psi_u
    for i in range(n):
        spec, u2, u3 = basepoint_spec(dom, HashRNG(seed, f"basepoint-numeric:{i}"), geiser)
        one = Polynomial.const(1, dom)
        point = (one, Polynomial.const(u2, dom), Polynomial.const(u3, dom))
        vals = _at(_partials(fn(spec, u2, u3), 2), point)
        if any(not x.is_zero() for x in vals):
            return Entry("basepoint_numeric", "fail", "modular", i + 1,
                         witness={"u2": str(u2), "u3": str(u3)})
    return Entry("basepoint_numeric", "pass", "modular", n)


__all__ = [
    "IdentityCheck", "Entry", "Report", "HashRNG", "Context", "ExcessiveDegeneracy",
    "SamplingExhausted", "catalogue", "check_identity", "run_suite", "involution_roundtrip",
    "fixed_locus_sample", "basepoint_numeric", "basepoint_spec", "k2_estimate", "SUITES",
]
