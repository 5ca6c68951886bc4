"""Full-period measurement, oracle reconciliation, Berlekamp-Massey, scheme comparison."""

from __future__ import annotations

import csv
import io
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import SpecificationError
from .generator import ELEMENTWISE, FIELD, NlfgGenerator, TapAssembly, full_period_output, output_code
from .gf import Field, FieldSpec, Poly, WordVector, default_base_field, default_primitive, prime_power
from .oracle import CountParams, n_elementwise, n_proposed, words_with_kappa
from .registers import (
    DEFAULT_MAX_STATES,
    LfsrConfig,
    audit_primitive,
    check_state_bound,
    construct_sigma,
    iter_states,
    state_after,
)


@dataclass
class DistributionTable:
    """Per-value occurrence counts over one full period of an NLFG."""

    spec: FieldSpec
    L: int
    m: int
    mode: str
    counts: dict[int, int]
    period: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.period:
            raise SpecificationError("counts do not sum to the period")

    def count(self, value: int) -> int:
        return self.counts.get(value, 0)

    def params(self) -> CountParams:
        return CountParams(self.spec.q, self.L, self.m, self.spec.r)


def _count_chunk(gen: NlfgGenerator, start: tuple[int, ...], count: int) -> Counter:
    spec, asm = gen.spec, gen.assembly
    return Counter(output_code(spec, asm, s) for s in iter_states(gen.sigma, count, start))


def measure_distribution(gen: NlfgGenerator, max_states: int = DEFAULT_MAX_STATES,
                         workers: int = 1) -> DistributionTable:
    """Exact per-value output counts over one full period.

    With ``workers > 1`` the period is split into contiguous chunks whose
    start states are obtained from powers of the transition matrix; the
    merged table does not depend on ``workers``.
    """
    check_state_bound(gen.sigma, max_states)
    period = gen.sigma.period_bound
    if workers <= 1:
        counts = Counter(full_period_output(gen, max_states))
    else:
        if not any(gen.register.state):
            raise SpecificationError("full-period measurement needs a nonzero seed")
        audit_primitive(gen.sigma)
        chunk = -(-period // workers)
        jobs = [(k * chunk, min(chunk, period - k * chunk)) for k in range(workers)
                if k * chunk < period]
        starts = [state_after(gen.sigma, off) for off, _ in jobs]
        counts = Counter()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_count_chunk, [gen] * len(jobs), starts, [n for _, n in jobs]):
                counts.update(part)
    return DistributionTable(gen.spec, gen.L, gen.m, gen.mode,
                             dict(sorted(counts.items())), period)


@dataclass
class ReconcileRow:
    value: int
    entries: str
    kappa: int
    measured: int
    oracle: int

    @property
    def match(self) -> bool:
        return self.measured == self.oracle


def oracle_count(params: CountParams, mode: str, kappa: int) -> int:
    """Closed-form count of one word with ``kappa`` nonzero entries."""
    zero = kappa == 0
    if mode == FIELD or params.r == 1:
        return n_proposed(params, zero)
    p = CountParams(params.q, params.L, params.m, params.r, kappa)
    return n_elementwise(p, zero)


@dataclass
class ReconcileReport:
    params: CountParams
    mode: str
    rows: list[ReconcileRow]

    @property
    def passed(self) -> bool:
        return all(row.match for row in self.rows)

    def to_json(self) -> dict:
        return {
            "params": {"q": self.params.q, "r": self.params.r, "L": self.params.L,
                       "m": self.params.m},
            "mode": self.mode,
            "passed": self.passed,
            "rows": [{"value": row.entries, "kappa": row.kappa, "measured": row.measured,
                      "oracle": row.oracle, "match": row.match} for row in self.rows],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["value", "kappa", "measured", "oracle", "match"])
        for row in self.rows:
            w.writerow([row.entries, row.kappa, row.measured, row.oracle, str(row.match).lower()])
        return buf.getvalue()

    def to_text(self) -> str:
        p = self.params
        head = [f"q={p.q} r={p.r} L={p.L} m={p.m} mode={self.mode}"]
        table = [("value", "kappa", "measured", "oracle", "match")]
        table += [(row.entries, str(row.kappa), str(row.measured), str(row.oracle),
                   "yes" if row.match else "NO") for row in self.rows]
        return "\n".join(head + _align(table) + [f"verdict: {'PASS' if self.passed else 'FAIL'}"]) + "\n"


def _align(rows: Sequence[Sequence[str]]) -> list[str]:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return ["  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in rows]


def reconcile(table: DistributionTable, params: CountParams, mode: str | None = None) -> ReconcileReport:
    """Compare every value's measured count with its closed-form count."""
    spec = table.spec
    if (params.q, params.r, params.L) != (spec.q, spec.r, table.L):
        raise SpecificationError(
            f"params (q={params.q}, r={params.r}, L={params.L}) do not match the table "
            f"(q={spec.q}, r={spec.r}, L={table.L})")
    mode = mode or table.mode
    rows = []
    for code in range(spec.word_order):
        kappa = spec.kappa(code)
        rows.append(ReconcileRow(code, str(WordVector.from_code(spec, code)), kappa,
                                 table.count(code), oracle_count(params, mode, kappa)))
    return ReconcileReport(params, mode, rows)


# ---------------------------------------------------------------------------
# linear complexity


@dataclass
class LcReport:
    linear_complexity: int
    minimal_poly: Poly
    length: int
    certified: bool

    def to_json(self) -> dict:
        return {"linear_complexity": self.linear_complexity,
                "minimal_poly": str(self.minimal_poly),
                "length": self.length, "certified": self.certified}


def _field_for(q) -> Field:
    if isinstance(q, int):
        p, n = prime_power(q)
        return default_base_field(p, n)
    return q


def berlekamp_massey(seq: Sequence[int], q=2) -> LcReport:
    """Shortest LFSR generating ``seq`` over GF(q).

    ``q`` is a field order (default field) or a field object.  The minimal
    polynomial is returned in characteristic form x^LC - ... (the
    reciprocal of the connection polynomial).  The result is certified
    when the complexity stopped changing within the first half of the
    sequence.
    """
    F = _field_for(q)
    s = [int(x) for x in seq]
    if not s:
        raise SpecificationError("berlekamp_massey needs a non-empty sequence")
    C, B = [1], [1]
    lc, shift, b = 0, 1, 1
    last_change = 0
    for n, sn in enumerate(s):
        d = sn
        for i in range(1, lc + 1):
            if C[i] and s[n - i]:
                d = F.add(d, F.mul(C[i], s[n - i]))
        if d == 0:
            shift += 1
            continue
        coef = F.div(d, b)
        T = list(C)
        need = len(B) + shift
        if len(C) < need:
            C = C + [0] * (need - len(C))
        for i, bi in enumerate(B):
            if bi:
                C[i + shift] = F.sub(C[i + shift], F.mul(coef, bi))
        if 2 * lc <= n:
            lc = n + 1 - lc
            B, b, shift = T, d, 1
            last_change = n
        else:
            shift += 1
    C = (C + [0] * (lc + 1))[:lc + 1]
    # re-simulate the connection polynomial over the whole prefix
    for n in range(lc, len(s)):
        acc = 0
        for i in range(1, lc + 1):
            acc = F.sub(acc, F.mul(C[i], s[n - i]))
        if acc != s[n]:
            raise AssertionError("Berlekamp-Massey result does not regenerate the sequence")
    minimal = Poly(F, tuple(reversed(C)))
    certified = last_change < len(s) // 2 and 2 * lc <= len(s)
    return LcReport(lc, minimal, len(s), certified)


def component_sequences(cfg, length: int) -> list[list[int]]:
    """The r scalar sequences read off the emitted words of a register."""
    from .registers import as_sigma

    cfg = as_sigma(cfg)
    spec = cfg.spec
    words = [spec.word_entries(s[0]) for s in iter_states(cfg, length)]
    return [[w[i] for w in words] for i in range(spec.r)]


# ---------------------------------------------------------------------------
# scheme comparison


def default_register(spec: FieldSpec, L: int):
    """Deterministic primitive register of length L (table / search polynomial)."""
    if spec.r == 1:
        return LfsrConfig.from_char_poly(spec, default_primitive(spec.base, L))
    return construct_sigma(spec, default_primitive(spec.ext, L))


@dataclass
class SchemeRow:
    kappa: int
    n_words: int
    proposed_oracle: int
    elementwise_oracle: int
    proposed_measured: tuple[int, int] | None = None  # (min, max) over words
    elementwise_measured: tuple[int, int] | None = None


@dataclass
class ComparisonReport:
    params: CountParams
    rows: list[SchemeRow]
    measured: bool
    proposed_table: DistributionTable | None = field(default=None, repr=False)
    elementwise_table: DistributionTable | None = field(default=None, repr=False)

    def _counts(self, scheme: str) -> list[int]:
        """Per-word counts for every nonzero word (measured if available)."""
        table = self.proposed_table if scheme == FIELD else self.elementwise_table
        if table is not None:
            return [table.count(c) for c in range(1, table.spec.word_order)]
        out = []
        for row in self.rows:
            if row.kappa:
                val = row.proposed_oracle if scheme == FIELD else row.elementwise_oracle
                out += [val] * row.n_words
        return out

    def spread(self, scheme: str) -> int:
        counts = self._counts(scheme)
        return max(counts) - min(counts)

    def max_deviation(self, scheme: str) -> Fraction:
        """max over all words of |count / period - 1/q^r|."""
        Q = self.params.q**self.params.r
        total = self.params.period
        zero_row = self.rows[0]
        zero = zero_row.proposed_oracle if scheme == FIELD else zero_row.elementwise_oracle
        table = self.proposed_table if scheme == FIELD else self.elementwise_table
        if table is not None:
            zero = table.count(0)
        return max(abs(Fraction(c, total) - Fraction(1, Q)) for c in [zero] + self._counts(scheme))

    @property
    def passed(self) -> bool:
        if not self.measured:
            return True
        return all(row.proposed_measured == (row.proposed_oracle,) * 2
                   and row.elementwise_measured == (row.elementwise_oracle,) * 2
                   for row in self.rows)

    def to_json(self) -> dict:
        return {
            "params": {"q": self.params.q, "r": self.params.r, "L": self.params.L,
                       "m": self.params.m},
            "measured": self.measured,
            "passed": self.passed,
            "rows": [{
                "kappa": row.kappa, "words": row.n_words,
                "proposed_oracle": row.proposed_oracle,
                "elementwise_oracle": row.elementwise_oracle,
                "proposed_measured": list(row.proposed_measured) if row.proposed_measured else None,
                "elementwise_measured": list(row.elementwise_measured) if row.elementwise_measured else None,
            } for row in self.rows],
            "spread": {FIELD: self.spread(FIELD), ELEMENTWISE: self.spread(ELEMENTWISE)},
            "max_deviation": {FIELD: str(self.max_deviation(FIELD)),
                              ELEMENTWISE: str(self.max_deviation(ELEMENTWISE))},
        }

    def _fmt(self, rng):
        if rng is None:
            return "-"
        lo, hi = rng
        return str(lo) if lo == hi else f"{lo}..{hi}"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kappa", "words", "proposed_oracle", "proposed_measured",
                    "elementwise_oracle", "elementwise_measured"])
        for row in self.rows:
            w.writerow([row.kappa, row.n_words, row.proposed_oracle, self._fmt(row.proposed_measured),
                        row.elementwise_oracle, self._fmt(row.elementwise_measured)])
        return buf.getvalue()

    def to_text(self) -> str:
        p = self.params
        table = [("kappa", "words", "proposed", "measured", "elementwise", "measured")]
        for row in self.rows:
            table.append((str(row.kappa), str(row.n_words), str(row.proposed_oracle),
                          self._fmt(row.proposed_measured), str(row.elementwise_oracle),
                          self._fmt(row.elementwise_measured)))
        lines = [f"q={p.q} r={p.r} L={p.L} m={p.m} period={p.period}"] + _align(table)
        for scheme in (FIELD, ELEMENTWISE):
            dev = self.max_deviation(scheme)
            lines.append(f"{scheme}: nonzero spread {self.spread(scheme)}, "
                         f"max deviation {dev} ({float(dev):.3e})")
        if self.measured:
            lines.append(f"verdict: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def compare_schemes(params: CountParams, spec: FieldSpec | None = None, measure: bool = True,
                    max_states: int = DEFAULT_MAX_STATES, workers: int = 1,
                    register=None) -> ComparisonReport:
    """Field-product vs element-wise NLFG on the same primitive register."""
    if spec is None:
        spec = FieldSpec.for_order(params.q, params.r)
    if (spec.q, spec.r) != (params.q, params.r):
        raise SpecificationError("spec does not match params")
    rows = []
    for kappa in range(params.r + 1):
        rows.append(SchemeRow(kappa, words_with_kappa(params.q, params.r, kappa),
                              oracle_count(params, FIELD, kappa),
                              oracle_count(params, ELEMENTWISE, kappa)))
    tables = {}
    if measure:
        reg = register if register is not None else default_register(spec, params.L)
        for mode in (FIELD, ELEMENTWISE):
            gen = NlfgGenerator(reg, TapAssembly.default(params.m, mode))
            table = measure_distribution(gen, max_states, workers)
            tables[mode] = table
            by_kappa: dict[int, list[int]] = {}
            for code in range(spec.word_order):
                by_kappa.setdefault(spec.kappa(code), []).append(table.count(code))
            for row in rows:
                rng = (min(by_kappa[row.kappa]), max(by_kappa[row.kappa]))
                if mode == FIELD:
                    row.proposed_measured = rng
                else:
                    row.elementwise_measured = rng
    return ComparisonReport(params, rows, measure, tables.get(FIELD), tables.get(ELEMENTWISE))
