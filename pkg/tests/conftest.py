import pytest

from cprojective import modrep
from cprojective.corpus import load_ring

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def r1():
    return load_ring("r1")


@pytest.fixture(scope="session")
def r2():
    return load_ring("r2")


@pytest.fixture(scope="session")
def r3():
    return load_ring("r3")


@pytest.fixture(scope="session")
def gf2():
    return load_ring("gf2")


@pytest.fixture(scope="session")
def gf3():
    return load_ring("gf3")


@pytest.fixture(scope="session")
def r2_gf3():
    return load_ring("r2_gf3")


@pytest.fixture(scope="session")
def omega3(r3):
    return modrep.dual_of_ring(r3)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
