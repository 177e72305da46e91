import functools

import pytest

from involutions.bertini import PencilSpec, build_bundle, random_spec
from involutions.geiser import build_geiser
from involutions.ring import GF, MERSENNE61
from involutions.verify import HashRNG

CRITERIA = []


@functools.lru_cache(maxsize=None)
def generic_bundle():
    return build_bundle(PencilSpec.generic())


@functools.lru_cache(maxsize=None)
def generic_geiser():
    return build_geiser(PencilSpec.geiser_generic())


@pytest.fixture(scope="session")
def F():
    return GF(MERSENNE61)


@pytest.fixture(scope="session")
def bundle():
    return generic_bundle()


@pytest.fixture(scope="session")
def gbundle():
    return generic_geiser()


@pytest.fixture
def pencil(F):
    return random_spec(F, HashRNG(11, "fixture"))


@pytest.fixture
def gpencil(F):
    return random_spec(F, HashRNG(11, "fixture-geiser"), geiser=True)


@pytest.fixture
def criterion():
    """Record an acceptance line; printed again in the terminal summary."""

    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(line)
        CRITERIA.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(CRITERIA, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
