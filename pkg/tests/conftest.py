import pytest

from nlfg.gf import FieldSpec


def clmul_mod(a: int, b: int, mod: int) -> int:
    """Carry-less product of bit-packed GF(2) polynomials, reduced by ``mod``."""
    prod = 0
    while b:
        if b & 1:
            prod ^= a
        a <<= 1
        b >>= 1
    dm = mod.bit_length() - 1
    while prod.bit_length() - 1 >= dm:
        prod ^= mod << (prod.bit_length() - 1 - dm)
    return prod


ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


@pytest.fixture(scope="session")
def gf2():
    return FieldSpec.create(2)


@pytest.fixture(scope="session")
def gf3():
    return FieldSpec.create(3)


@pytest.fixture(scope="session")
def gf8_words():
    """GF(2)^3 viewed as GF(8) via x^3+x+1."""
    return FieldSpec.create(2, 1, 3, outer_poly="x^3+x+1")


@pytest.fixture(scope="session")
def gf4_words():
    return FieldSpec.create(2, 1, 2, outer_poly="x^2+x+1")
