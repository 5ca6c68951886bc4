import itertools
import json
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlfg.analysis import (
    DistributionTable,
    berlekamp_massey,
    compare_schemes,
    component_sequences,
    default_register,
    measure_distribution,
    reconcile,
)
from nlfg.errors import BoundExceededError, NotPrimitiveError, SpecificationError
from nlfg.generator import ELEMENTWISE, FIELD, NlfgGenerator, TapAssembly, generate
from nlfg.gf import FieldSpec, Poly, default_primitive
from nlfg.oracle import CountParams
from nlfg.registers import LfsrConfig, audit_primitive, construct_sigma, iter_states


def brute_lc(seq, q):
    """Shortest recurrence s_n = sum c_i s_{n-i} found by trying every tap vector (prime q)."""
    for L in range(len(seq) + 1):
        for taps in itertools.product(range(q), repeat=L):
            if all(sum(c * seq[n - 1 - i] for i, c in enumerate(taps)) % q == seq[n]
                   for n in range(L, len(seq))):
                return L
    raise AssertionError("unreachable")


def enumerate_states(gen):
    """Count outputs over every nonzero register state, with no stepping at all."""
    W, L = gen.spec.word_order, gen.L
    counts = Counter()
    for state in itertools.product(range(W), repeat=L):
        if any(state):
            counts[gen.output_of(state)] += 1
    return counts


@pytest.fixture(scope="module")
def gf8_r3_spec():
    return FieldSpec.create(2, 1, 3, outer_poly="x^3+x+1")


@pytest.fixture(scope="module")
def gf8_r3_register(gf8_r3_spec):
    return construct_sigma(gf8_r3_spec, default_primitive(gf8_r3_spec.ext, 5))


class TestMeasure:
    def test_scalar(self, gf2):
        gen = NlfgGenerator(LfsrConfig.from_char_poly(gf2, "x^5+x^2+1"), TapAssembly.default(2))
        table = measure_distribution(gen)
        assert table.counts == {0: 19, 1: 12} and table.period == 31

    def test_gf8_l5_both_modes(self, gf8_r3_spec, gf8_r3_register):
        field = measure_distribution(NlfgGenerator(gf8_r3_register, TapAssembly.default(2)))
        assert field.count(0) == 4543
        assert all(field.count(c) == 4032 for c in range(1, 8))
        elem = measure_distribution(
            NlfgGenerator(gf8_r3_register, TapAssembly.default(2, ELEMENTWISE)))
        assert elem.count(0) == 7999
        for c in range(1, 8):
            want = {1: 4800, 2: 2880, 3: 1728}[gf8_r3_spec.kappa(c)]
            assert elem.count(c) == want

    @pytest.mark.parametrize("q,r,L,m,mode", [
        (2, 1, 6, 3, FIELD), (3, 1, 4, 2, FIELD), (2, 2, 4, 2, FIELD), (2, 2, 4, 1, ELEMENTWISE),
        (3, 2, 3, 1, ELEMENTWISE), (4, 1, 4, 2, FIELD), (2, 3, 4, 2, ELEMENTWISE)])
    def test_matches_state_enumeration(self, q, r, L, m, mode):
        spec = FieldSpec.for_order(q, r)
        gen = NlfgGenerator(default_register(spec, L), TapAssembly.default(m, mode))
        table = measure_distribution(gen)
        assert table.counts == dict(enumerate_states(gen))
        assert reconcile(table, CountParams(q, L, m, r)).passed

    def test_workers_do_not_change_the_table(self, gf8_r3_register):
        gen = NlfgGenerator(gf8_r3_register, TapAssembly.default(2, ELEMENTWISE))
        one = measure_distribution(gen)
        for workers in (2, 3):
            assert measure_distribution(gen, workers=workers).counts == one.counts

    def test_rejections(self, gf2):
        bad = NlfgGenerator(LfsrConfig.from_char_poly(gf2, "x^4+x^3+x^2+x+1"),
                            TapAssembly.default(2))
        with pytest.raises(NotPrimitiveError):
            measure_distribution(bad)
        with pytest.raises(NotPrimitiveError):
            measure_distribution(bad, workers=2)
        big = NlfgGenerator(default_register(gf2, 20), TapAssembly.default(2))
        with pytest.raises(BoundExceededError):
            measure_distribution(big, max_states=1 << 16)

    def test_table_sum_invariant(self, gf2):
        with pytest.raises(SpecificationError):
            DistributionTable(gf2, 5, 2, FIELD, {0: 19, 1: 11}, 31)


class TestReconcile:
    def test_gf8_l5_elementwise(self, gf8_r3_register):
        gen = NlfgGenerator(gf8_r3_register, TapAssembly.default(2, ELEMENTWISE))
        report = reconcile(measure_distribution(gen), CountParams(2, 5, 2, 3))
        assert report.passed and len(report.rows) == 8

    def test_ternary(self, gf3):
        gen = NlfgGenerator(default_register(gf3, 4), TapAssembly.default(2))
        report = reconcile(measure_distribution(gen), CountParams(3, 4, 2))
        assert report.passed
        assert [row.measured for row in report.rows] == [32, 24, 24]

    def test_wrong_m_is_flagged(self, gf2):
        gen = NlfgGenerator(LfsrConfig.from_char_poly(gf2, "x^5+x^2+1"), TapAssembly.default(2))
        report = reconcile(measure_distribution(gen), CountParams(2, 5, 1))
        assert not report.passed
        assert "verdict: FAIL" in report.to_text()

    def test_provenance_mismatch(self, gf2):
        gen = NlfgGenerator(LfsrConfig.from_char_poly(gf2, "x^5+x^2+1"), TapAssembly.default(2))
        with pytest.raises(SpecificationError):
            reconcile(measure_distribution(gen), CountParams(2, 6, 2))

    def test_serialisations(self, gf2):
        gen = NlfgGenerator(LfsrConfig.from_char_poly(gf2, "x^5+x^2+1"), TapAssembly.default(2))
        report = reconcile(measure_distribution(gen), CountParams(2, 5, 2))
        data = json.loads(json.dumps(report.to_json()))
        assert data["passed"] and data["rows"][0]["measured"] == 19
        lines = report.to_csv().splitlines()
        assert lines[0] == "value,kappa,measured,oracle,match"
        assert lines[1:] == ["0,0,19,19,true", "1,1,12,12,true"]
        assert report.to_text().rstrip().endswith("verdict: PASS")


class TestBerlekampMassey:
    def test_lfsr_output(self, gf2):
        cfg = LfsrConfig.from_char_poly(gf2, "x^5+x^2+1")
        seq = [s[0] for s in iter_states(cfg, 64)]
        rep = berlekamp_massey(seq, 2)
        assert rep.linear_complexity == 5 and rep.certified
        assert rep.minimal_poly == Poly.parse("x^5+x^2+1", gf2.base)

    def test_zero_sequence(self):
        rep = berlekamp_massey([0] * 20, 2)
        assert rep.linear_complexity == 0 and rep.minimal_poly.coeffs == (1,)

    def test_empty(self):
        with pytest.raises(SpecificationError):
            berlekamp_massey([], 2)

    def test_component_sequences(self, gf8_r3_register):
        cp = audit_primitive(gf8_r3_register)
        for comp in component_sequences(gf8_r3_register, 2 * 15 + 10):
            rep = berlekamp_massey(comp, 2)
            assert rep.linear_complexity == 15
            assert rep.minimal_poly == cp

    def test_component_sequences_odd_characteristic(self):
        spec = FieldSpec.create(3, 1, 2)
        reg = construct_sigma(spec, default_primitive(spec.ext, 3))
        cp = audit_primitive(reg)
        for comp in component_sequences(reg, 40):
            rep = berlekamp_massey(comp, 3)
            assert rep.linear_complexity == 6 and rep.minimal_poly == cp

    @settings(max_examples=40, deadline=None)
    @given(st.sampled_from([2, 3]), st.integers(0, 2**32))
    def test_matches_brute_force(self, q, seed):
        rng = random.Random(seed)
        n = 9 if q == 2 else 6
        seq = [rng.randrange(q) for _ in range(n)]
        assert berlekamp_massey(seq, q).linear_complexity == brute_lc(seq, q)

    @settings(max_examples=40, deadline=None)
    @given(st.sampled_from([2, 3, 4, 5]), st.lists(st.integers(0, 100), min_size=1, max_size=60))
    def test_regenerates_prefix(self, q, raw):
        seq = [x % q for x in raw]
        rep = berlekamp_massey(seq, q)
        F = rep.minimal_poly.field
        c = rep.minimal_poly.coeffs
        L = rep.linear_complexity
        assert len(c) == L + 1 and c[-1] == 1
        for n in range(L, len(seq)):
            acc = 0
            for i in range(L):
                acc = F.sub(acc, F.mul(c[i], seq[n - L + i]))
            assert acc == seq[n]

    @pytest.mark.parametrize("L,m", [(5, 1), (5, 2), (7, 1), (7, 2), (9, 3)])
    def test_nlfg_exceeds_register_length(self, gf2, L, m):
        gen = NlfgGenerator(default_register(gf2, L), TapAssembly.default(m))
        rep = berlekamp_massey(list(generate(gen, 4 * L)), 2)
        assert rep.linear_complexity > L


class TestCompare:
    def test_q2_r3_l5_m2(self):
        rep = compare_schemes(CountParams(2, 5, 2, 3))
        assert rep.passed
        assert [row.elementwise_oracle for row in rep.rows] == [7999, 4800, 2880, 1728]
        assert [row.proposed_oracle for row in rep.rows] == [4543, 4032, 4032, 4032]
        assert rep.spread(FIELD) == 0 and rep.spread(ELEMENTWISE) == 3072
        assert rep.max_deviation(FIELD) < rep.max_deviation(ELEMENTWISE)
        text = rep.to_text()
        for number in ("7999", "4800", "1728", "4543", "4032"):
            assert number in text

    def test_r1_identical(self):
        rep = compare_schemes(CountParams(3, 4, 2))
        assert rep.spread(FIELD) == rep.spread(ELEMENTWISE) == 0
        assert rep.max_deviation(FIELD) == rep.max_deviation(ELEMENTWISE)

    def test_elementwise_ordering(self):
        rep = compare_schemes(CountParams(2, 4, 2, 2))
        counts = [row.elementwise_oracle for row in rep.rows]
        assert counts[2] < counts[1] < counts[0]
        assert rep.passed

    def test_oracle_only(self):
        rep = compare_schemes(CountParams(2, 40, 10, 8), measure=False)
        assert not rep.measured and rep.spread(FIELD) == 0
        assert rep.to_json()["rows"][0]["proposed_measured"] is None
        assert rep.to_csv().splitlines()[0].startswith("kappa,words")
