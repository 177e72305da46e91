import itertools

import pytest

from involutions.bertini import PencilSpec, ProjPoint, build_bundle, cubic, random_spec
from involutions.brace import brace
from involutions.ring import NotAPerfectSquare, Polynomial, canonical_text, evaluate
from involutions.sigma2 import (
    ChartUndefined,
    InconsistentSystem,
    NotABasepoint,
    S2_at,
    basepoint_section,
    closed_form_leading,
    cone_map,
    ram_closed_form,
    ram_oracle,
    reduce_mod_basepoint,
    sigma2_chart,
    solve_decomposition,
    square_root_sextic,
    trigonal_residual,
)
from involutions.verify import HashRNG, basepoint_spec

from helpers import points_on

Y = ("y1", "y2", "y3")


def v(n, dom=None):
    return Polynomial.var(n) if dom is None else Polynomial.var(n, dom)


def test_displayed_leading_coefficients():
    lead = closed_form_leading()
    assert canonical_text(lead["s0"]) == "1*a2*c1 - 1*a1*c2"
    a1, a2, b1, b2, b3, c1, c2 = (v(n) for n in ("a1", "a2", "b1", "b2", "b3", "c1", "c2"))
    assert lead["r0"] == -a1 * b2 * c2 + a1 * b3 * c1 + a2 * b1 * c2
    assert lead["p0"] == b2**2 - 4 * a2 * c1 - 4 * b1 * b3 + 8 * a1 * c2


def test_closed_form_shape():
    ram = ram_closed_form()
    assert [len(x) for x in (ram.s, ram.p, ram.q, ram.r)] == [3, 3, 5, 4]
    assert ram.s[1] == -brace(ram.s[0], 1)
    assert ram.r[3] == -brace(ram.r[0], 3)
    # the last coefficient is the fully primed version
    assert ram.s[2] == ram.s[0].swap_primes()


def test_oracle_matches_closed_form_mod_p(F):
    for i in range(4):
        spec = random_spec(F, HashRNG(i, "oracle"))
        got = ram_oracle(build_bundle(spec))
        want = ram_closed_form(F).specialize(spec)
        assert got.scalars() == want.scalars()


def test_solve_decomposition_small():
    y1, y2, y3 = (v(n) for n in Y)
    a, b = v("a1"), v("b1")
    basis = {"x": y3 * y1, "y": y1 * y2, "z": y2**2}
    target = a * basis["x"] + (a - b) * basis["y"] + 3 * basis["z"]
    assert solve_decomposition(target, basis) == {"x": a, "y": a - b, "z": 3}


def test_solve_decomposition_inconsistent():
    y1, y2, y3 = (v(n) for n in Y)
    with pytest.raises(InconsistentSystem):
        solve_decomposition(y3**2, {"x": y1 * y2})
    with pytest.raises(InconsistentSystem):
        solve_decomposition(y1 * y3 + y2 * y3, {"x": y1 * y3, "y": 2 * y1 * y3})


def test_square_root_sextic():
    t1, t2 = v("t1"), v("t2")
    a, b = v("a1"), v("b1")
    r = (a, b, 0 * a, a + b)
    R = sum((c * t1**i * t2 ** (3 - i) for i, c in enumerate(r)), 0 * a)
    U = R * R
    u = [U.coefficients(("t1", "t2")).get((i, 6 - i), 0 * a) for i in range(7)]
    got = square_root_sextic(u)
    assert tuple(got) == r or tuple(-c for c in got) == r
    u[0] = u[0] + 1
    with pytest.raises(NotAPerfectSquare):
        square_root_sextic(u)


def test_cone_and_chart(pencil, F):
    y = ProjPoint.of((2, 3, 5), F)
    assert cone_map(pencil, y).on_cone()
    pt = sigma2_chart(pencil, y)
    w = evaluate(cubic(pencil), y.assignment())
    wp = evaluate(cubic(pencil, primed=True), y.assignment())
    assert pt.x_affine == F.scalar(w * F.inv(wp))


def test_trigonal_residual_is_not_trivially_zero(pencil, F):
    ram = ram_closed_form(F).specialize(pencil)
    assert trigonal_residual(ram, sigma2_chart(pencil, ProjPoint.of((2, 3, 5), F))) != 0


def test_contracted_sextics_go_to_the_sections(pencil, F):
    b = build_bundle(pencil)
    ram = ram_closed_form(F).specialize(pencil)
    rng = HashRNG(4, "sections")
    for y in points_on(b.phi6, F, rng, 3):
        assert sigma2_chart(pencil, y).y == 0
    for y in points_on(b.psi6, F, rng, 3):
        pt = sigma2_chart(pencil, y)
        assert pt.y == F.scalar(-S2_at(ram, pt.x_affine, F))


def test_chart_undefined_on_wp_zero(F):
    # wp(1, 1, 0) = c1p + c2p = 0 while w(1, 1, 0) = c1 + c2 = 2
    values = {n: 1 for n in ("a1", "a2", "b1", "b2", "b3", "c1", "c2")}
    values.update({"a1p": 1, "a2p": 2, "b1p": 3, "b2p": 4, "b3p": 5, "c1p": 1, "c2p": -1})
    spec = PencilSpec.concrete(values, F)
    with pytest.raises(ChartUndefined):
        sigma2_chart(spec, ProjPoint.of((1, 1, 0), F))


# basepoint sections


def test_section_at_the_origin_is_psi6(bundle):
    sec = basepoint_section(PencilSpec.generic(), 0, 0)
    assert sec.psi(bundle) == bundle.psi6


def test_section_rejects_non_basepoints(pencil):
    with pytest.raises(NotABasepoint):
        basepoint_section(pencil, 1, 1)


def _partials_at(f, point, order):
    out = []
    for k in range(order):
        for combo in itertools.combinations_with_replacement(Y, k):
            g = f
            for n in combo:
                g = g.derivative(n)
            out.append(g.substitute(dict(zip(Y, point))))
    return out


def test_generic_section_has_a_triple_point(bundle):
    sec = basepoint_section(PencilSpec.generic(), v("u2"), v("u3"))
    point = (Polynomial.const(1), v("u2"), v("u3"))
    assert all(reduce_mod_basepoint(f).is_zero() for f in _partials_at(sec.psi(bundle), point, 3))
    # every anti-bicanonical sextic is double there, so order 2 alone says little
    assert all(reduce_mod_basepoint(f).is_zero() for f in _partials_at(bundle.phi6, point, 2))
    second = [reduce_mod_basepoint(f) for f in _partials_at(bundle.phi6, point, 3)[4:]]
    assert not any(f.is_zero() for f in second)


def test_numeric_section_over_fp(F):
    for i in range(3):
        spec, u2, u3 = basepoint_spec(F, HashRNG(i, "bp"))
        b = build_bundle(spec)
        psi = basepoint_section(spec, u2, u3).psi(b)
        point = tuple(Polynomial.const(c, F) for c in (1, u2, u3))
        assert all(f.is_zero() for f in _partials_at(psi, point, 3))
        # a wrong free term breaks it
        bad = psi + (b.w * b.w)
        assert not all(f.is_zero() for f in _partials_at(bad, point, 3))
