"""End-to-end acceptance checks; each records one PASS/FAIL line for the summary."""

import time
from collections import Counter
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE_RESULTS
from nlfg.analysis import berlekamp_massey, component_sequences, default_register
from nlfg.generator import ELEMENTWISE, FIELD, NlfgGenerator, TapAssembly, full_period_output, generate
from nlfg.gf import FieldSpec, WordVector, build_q_matrix, default_primitive, word_mul
from nlfg.oracle import (
    CountParams,
    balance_deviation,
    brute_assembly_census,
    n_elementwise,
    partition_count,
    partition_count_brute,
    partition_count_recursive,
)
from nlfg.registers import LfsrConfig, audit_primitive, construct_sigma


@pytest.fixture
def record(request):
    """Store the outcome of the calling test under ``name`` with a detail string."""
    state = {"detail": ""}
    yield state
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    ACCEPTANCE_RESULTS.append((state["name"], ok, state["detail"]))


def test_sigma_full_period_counts(record):
    record["name"] = "1 sigma-LFSR q=2 r=3 L=5 m=2 counts (exact, <2 s)"
    spec = FieldSpec.create(2, 1, 3, outer_poly="x^3+x+1")
    t0 = time.perf_counter()
    reg = construct_sigma(spec, default_primitive(spec.ext, 5))
    elem = Counter(full_period_output(NlfgGenerator(reg, TapAssembly.default(2, ELEMENTWISE))))
    field = Counter(full_period_output(NlfgGenerator(reg, TapAssembly.default(2, FIELD))))
    elapsed = time.perf_counter() - t0
    record["detail"] = (f"elementwise zero={elem[0]} k1={elem[1]} k3={elem[7]}; "
                        f"field zero={field[0]} nonzero={sorted(set(field[c] for c in range(1, 8)))}; "
                        f"{elapsed:.2f}s")
    assert elem[0] == 7999
    assert all(elem[c] == 4800 for c in range(1, 8) if spec.kappa(c) == 1)
    assert elem[0b111] == 1728
    assert field[0] == 4543
    assert all(field[c] == 4032 for c in range(1, 8))
    assert elapsed < 2.0


def test_assembly_counts_by_exhaustion(record):
    record["name"] = "2 multiplier-assembly census (exact, <10 s)"
    t0 = time.perf_counter()
    cases = 0
    for q in (2, 3, 4, 5, 8):
        for m in (1, 2, 3):
            if q ** (2 * m) > 1 << 16:
                continue
            census = brute_assembly_census(m, q, spec=FieldSpec.for_order(q, 1))
            assert census[0] == q ** (m - 1) * (q**m + q - 1), (q, m)
            for v in range(1, q):
                assert census[v] == q ** (m - 1) * (q**m - 1), (q, m, v)
            cases += 1
    elapsed = time.perf_counter() - t0
    record["detail"] = f"{cases} (q, m) cases; {elapsed:.2f}s"
    assert elapsed < 10.0


def test_scalar_full_period_counts(record):
    record["name"] = "3 scalar full-period counts + sum identity (exact)"
    gf2, gf3 = FieldSpec.create(2), FieldSpec.create(3)
    binary = Counter(full_period_output(
        NlfgGenerator(LfsrConfig.from_char_poly(gf2, "x^5+x^2+1"), TapAssembly.default(2))))
    ternary = Counter(full_period_output(
        NlfgGenerator(default_register(gf3, 4), TapAssembly.default(2))))
    record["detail"] = f"q=2 {dict(sorted(binary.items()))}; q=3 {dict(sorted(ternary.items()))}"
    assert binary == {1: 12, 0: 19}
    assert ternary == {0: 32, 1: 24, 2: 24}
    assert binary[0] + 1 * binary[1] == 2**5 - 1
    assert ternary[0] + 2 * ternary[1] == 3**4 - 1


def test_q_matrix_example(record):
    record["name"] = "4 Q matrix and word product (exact)"
    spec = FieldSpec.create(2, 1, 3, outer_poly="x^3+x+1")
    Q = build_q_matrix(spec)
    prod = word_mul(WordVector(spec, (1, 1, 0)), WordVector(spec, (1, 0, 1)))
    record["detail"] = f"Q={[list(r) for r in Q.rows]} product={list(prod.entries)}"
    assert Q.rows == ((1, 0, 0, 1, 0), (0, 1, 0, 1, 1), (0, 0, 1, 0, 1))
    assert prod.entries == (0, 0, 1)


def test_partition_counts(record):
    record["name"] = "5 partition count: closed form = recursion = enumeration (exact)"
    for q in (2, 3, 4, 5, 7, 8, 9, 16, 101):
        for m in range(31):
            assert partition_count(m, q) == partition_count_recursive(m, q), (q, m)
    enumerated = 0
    for q in (2, 3, 4, 5):
        for m in range(1, 5):
            for target in range(1, q):
                assert partition_count_brute(m, q, target) == partition_count(m, q)
                enumerated += 1
    record["detail"] = f"recursion m<=30 over 9 fields; {enumerated} enumerations"


def test_component_sequences(record):
    record["name"] = "6 component sequences: LC=15, char poly recovered (exact)"
    spec = FieldSpec.create(2, 1, 3, outer_poly="x^3+x+1")
    reg = construct_sigma(spec, default_primitive(spec.ext, 5))
    cp = audit_primitive(reg)
    reports = [berlekamp_massey(seq, 2) for seq in component_sequences(reg, 40)]
    record["detail"] = f"LC={[r.linear_complexity for r in reports]} poly={cp}"
    for rep in reports:
        assert rep.linear_complexity == 15
        assert rep.minimal_poly == cp


def test_elementwise_by_exhaustion(record):
    record["name"] = "7 element-wise full-period counts q=2 r=2 L=4 (exact, <1 s)"
    spec = FieldSpec.create(2, 1, 2, outer_poly="x^2+x+1")
    t0 = time.perf_counter()
    reg = construct_sigma(spec, default_primitive(spec.ext, 4))
    seen = []
    for m in (1, 2):
        counts = Counter(full_period_output(NlfgGenerator(reg, TapAssembly.default(m, ELEMENTWISE))))
        for code in range(4):
            want = n_elementwise(CountParams(2, 4, m, 2, spec.kappa(code)))
            assert counts[code] == want, (m, code)
        seen.append([counts[c] for c in range(4)])
    elapsed = time.perf_counter() - t0
    record["detail"] = f"m=1 {seen[0]} m=2 {seen[1]}; {elapsed:.3f}s"
    assert elapsed < 1.0


def test_balance_trend(record):
    record["name"] = "8 balance deviation decreasing, < 2^-19 at m=20"
    devs = [balance_deviation(CountParams(2, 2 * m + 1, m)) for m in range(1, 21)]
    record["detail"] = f"m=1 {float(devs[0]):.3e} m=20 {float(devs[-1]):.3e}"
    assert all(a > b for a, b in zip(devs, devs[1:]))
    assert devs[-1] < Fraction(1, 2**19)


def test_nlfg_linear_complexity(record):
    record["name"] = "9 NLFG linear complexity exceeds L"
    gf2 = FieldSpec.create(2)
    found = []
    for L in (5, 7):
        for m in (1, 2):
            gen = NlfgGenerator(default_register(gf2, L), TapAssembly.default(m))
            rep = berlekamp_massey(list(generate(gen, 4 * L)), 2)
            found.append(f"L={L} m={m} LC={rep.linear_complexity}"
                         f"{'' if rep.certified else ' (lower bound)'}")
            assert rep.linear_complexity > L, found[-1]
    record["detail"] = "; ".join(found)
