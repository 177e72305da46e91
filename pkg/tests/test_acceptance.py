"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import subprocess
import sys
import time

import pytest

from involutions.bertini import CORRUPTIONS, PencilSpec, build_bundle, random_spec
from involutions.ring import GF, MERSENNE61
from involutions.sigma2 import ram_closed_form, ram_oracle
from involutions.verify import (
    DEFAULT_MEM_BUDGET,
    HashRNG,
    basepoint_numeric,
    catalogue,
    check_identity,
    fixed_locus_sample,
    involution_roundtrip,
    k2_estimate,
    run_suite,
)

BERTINI = {"bertini_r_phi", "bertini_r_psi", "bertini_r_gamma", "bertini_z_phi", "bertini_z_psi",
           "tangency", "W3_r", "W3_z", "phi6_psi6_double_vertices"}
GEISER = {"geiser_splittings", "w3_reduction", "geiser_r_phi", "geiser_r_psi", "geiser_r_gamma",
          "geiser_z_phi", "geiser_z_psi", "geiser_psi_relation", "geiser_K2_relation",
          "q0r0s0_vanish", "brace_order_guard"}


@pytest.fixture(scope="module")
def symbolic():
    return run_suite("all", "symbolic")


def _ms(report, names):
    return sum(report[n].ms for n in names)


def test_criterion_01_bertini_identities(symbolic, criterion):
    names = {c.name for c in catalogue("bertini")}
    ok = names == BERTINI and all(symbolic[n].status == "pass" and symbolic[n].mode == "symbolic"
                                  for n in names)
    secs = _ms(symbolic, names) / 1000
    assert criterion(1, ok and secs < 120, f"{len(names)} Bertini checks exact over generic coefficients ({secs:.1f} s)")


def test_criterion_02_psi_relation(symbolic, criterion):
    e = symbolic["psi_relation"]
    assert criterion(2, e.status == "pass" and e.mode == "symbolic", "psi6 - phi6 - S2(w,wp) = 0 exactly")


def test_criterion_03_K2_relation(symbolic, criterion):
    e = symbolic["K2_relation"]
    est = k2_estimate()
    expected_mode = "symbolic" if est <= DEFAULT_MEM_BUDGET else "modular-fallback"
    ok = e.status == "pass" and e.mode == expected_mode
    # the fallback path must hold up as well: 40 trials at 2^61 - 1
    check = {c.name: c for c in catalogue("sigma2")}["K2_relation"]
    forced = check_identity(check, "symbolic", mem_budget=1)
    ok = ok and forced.status == "pass" and forced.mode == "modular-fallback" and forced.trials >= 40
    assert criterion(3, ok, f"K^2 relation ran {e.mode} (estimate {est / 2**30:.2f} GiB of 8 GiB), "
                            f"forced fallback: {forced.trials} modular trials pass")


def test_criterion_04_oracle(criterion):
    start = time.perf_counter()
    got = ram_oracle(build_bundle(PencilSpec.generic()))
    want = ram_closed_form()
    pairs = list(zip(got.entries(), want.entries()))
    ok = len(pairs) == 15 and all(a == b and na == nb for (na, a), (nb, b) in pairs)
    secs = time.perf_counter() - start
    assert criterion(4, ok, f"oracle reproduces all 15 coefficients exactly, R3 sign {got.r_sign:+d} ({secs:.0f} s)")


def test_criterion_05_symmetry(symbolic, criterion):
    e = symbolic["prime_swap_symmetry"]
    assert criterion(5, e.status == "pass", "S2, P2, Q4 invariant and R3 negated under prime swap with w <-> wp")


def test_criterion_06_geiser(symbolic, criterion):
    names = {c.name for c in catalogue("geiser")} - {"geiser_basepoint_section"}
    ok = names == GEISER and all(symbolic[n].status == "pass" for n in names)
    secs = _ms(symbolic, names) / 1000
    assert criterion(6, ok and secs < 120, f"{len(names)} Geiser checks exact incl. brace-order guard ({secs:.1f} s)")


def test_criterion_07_roundtrips(criterion):
    F = GF(MERSENNE61)
    worst = 0.0
    ok = True
    for geiser in (False, True):
        for i in range(5):
            spec = random_spec(F, HashRNG(i, f"acceptance-roundtrip-{geiser}"), geiser)
            e = involution_roundtrip(spec, 100, seed=i, geiser=geiser)
            worst = max(worst, e.witness["skipped"] / 100)
            ok = ok and e.status == "pass"
    ok = ok and worst < 0.05
    assert criterion(7, ok, f"5 Bertini + 5 Geiser pencils x 100 points, worst degeneracy {worst:.0%}")


def test_criterion_08_fixed_locus(criterion):
    F = GF(MERSENNE61)
    b = fixed_locus_sample(random_spec(F, HashRNG(0, "acceptance-fixed")), 50)
    g = fixed_locus_sample(random_spec(F, HashRNG(0, "acceptance-fixed-g"), geiser=True), 50, geiser=True)
    ok = b.status == g.status == "pass" and b.trials >= 50 and g.trials >= 50
    assert criterion(8, ok, f"{b.trials} points on K fixed + trigonal, {g.trials} on K~ fixed + quartic")


def test_criterion_09_basepoint_sections(symbolic, criterion):
    generic = all(symbolic[n].status == "pass"
                  for n in ("basepoint_section", "basepoint_triple_point", "geiser_basepoint_section"))
    bert = basepoint_numeric(10, seed=0)
    geis = basepoint_numeric(10, seed=0, geiser=True)
    ok = generic and bert.status == geis.status == "pass"
    assert criterion(9, ok, "psi^u and psi3^u singular at (1,u2,u3): generic mod relations and 10+10 sampled over F_p")


def test_criterion_10_negative_controls(criterion):
    caught = {}
    for c in CORRUPTIONS:
        mod = run_suite("all", "modular", trials=3, corrupt=c)
        sym = run_suite("bertini", "symbolic", corrupt=c)
        caught[c] = mod.status == "fail" and sym.status == "fail"
    assert criterion(10, all(caught.values()), f"corruptions detected: {caught}")


def test_criterion_11_determinism(criterion):
    cmd = [sys.executable, "-m", "involutions", "verify", "--mode", "modular", "--seed", "0"]
    one = subprocess.run(cmd, capture_output=True)
    two = subprocess.run(cmd, capture_output=True)
    ok = one.returncode == two.returncode == 0 and one.stdout == two.stdout and len(one.stdout) > 0
    assert criterion(11, ok, f"two modular runs byte-identical ({len(one.stdout)} bytes)")
