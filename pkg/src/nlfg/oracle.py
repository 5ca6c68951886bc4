"""Exact counting formulas for NLFG output distributions, plus brute force.

Notation: ``q`` is the field order, ``r`` the word width, ``L`` the number
of delay blocks, ``m`` the number of multipliers and ``kappa`` the number
of nonzero coordinates of a target word.  All counts are Python integers.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import BoundExceededError, ConsistencyError, SpecificationError
from .gf import FieldSpec, default_base_field, prime_power

DEFAULT_CENSUS_BOUND = 1 << 24


@dataclass(frozen=True)
class CountParams:
    q: int
    L: int
    m: int
    r: int = 1
    kappa: int = 0

    def __post_init__(self):
        if self.q < 2:
            raise SpecificationError(f"q must be >= 2, got {self.q}")
        prime_power(self.q)
        if self.r < 1:
            raise SpecificationError(f"r must be >= 1, got {self.r}")
        if self.m < 1:
            raise SpecificationError("m must be >= 1")
        if self.m > self.L // 2:
            raise SpecificationError(f"m = {self.m} exceeds floor(L/2) = {self.L // 2}")
        if not 0 <= self.kappa <= self.r:
            raise SpecificationError(f"kappa must lie in [0, {self.r}]")

    @property
    def psi_z(self) -> int:
        return 2 * self.q - 1

    @property
    def psi_nz(self) -> int:
        return self.q - 1

    @property
    def period(self) -> int:
        return self.q ** (self.r * self.L) - 1


def _exact_div(num: int, den: int) -> int:
    quo, rem = divmod(num, den)
    if rem:
        raise ConsistencyError(f"{num} is not divisible by {den}")
    return quo


def partition_count(m: int, q: int) -> int:
    """Number of m-tuples of nonzero elements of GF(q) summing to a fixed K != 0."""
    if m < 0:
        raise SpecificationError("m must be >= 0")
    if m == 0:
        return 0
    return _exact_div((q - 1) ** m - (-1) ** m, q)


def partition_count_recursive(m: int, q: int) -> int:
    """Same count via |S_m| = (q-1)^(m-1) - |S_{m-1}|, |S_0| = 0."""
    s = 0
    for k in range(1, m + 1):
        s = (q - 1) ** (k - 1) - s
    return s


def partition_count_brute(m: int, q: int, target: int = 1) -> int:
    """Enumerate nonzero m-tuples over GF(q) summing to ``target`` (a code)."""
    p, n = prime_power(q)
    F = default_base_field(p, n)
    count = 0
    for ys in itertools.product(range(1, q), repeat=m):
        acc = 0
        for y in ys:
            acc = F.add(acc, y)
        count += acc == target
    return count


def psi_m(m: int, q: int, zero_target: bool) -> int:
    """Number of multiplier-assembly inputs yielding a zero / fixed nonzero output."""
    if m < 1:
        raise SpecificationError("m must be >= 1")
    if zero_target:
        return q ** (m - 1) * (q**m + q - 1)
    return q ** (m - 1) * (q**m - 1)


def psi_m_sum(m: int, q: int) -> int:
    """Nonzero-target count by summing over how many multipliers output zero."""
    psi_z, psi_nz = 2 * q - 1, q - 1
    return sum(comb(m, i) * psi_z**i * psi_nz ** (m - i) * partition_count(m - i, q)
               for i in range(m))


def n_scalar(params: CountParams, zero_target: bool) -> int:
    """Occurrences of 0 / of each K != 0 in one period of a scalar NLFG."""
    if params.r != 1:
        raise SpecificationError("n_scalar requires r = 1")
    q, L, m = params.q, params.L, params.m
    if zero_target:
        return q ** (L - m - 1) * (q**m + q - 1) - 1
    return q ** (L - m - 1) * (q**m - 1)


def n_proposed(params: CountParams, zero_target: bool) -> int:
    """Field-product scheme: the scalar count with q replaced by q^r."""
    Q = params.q**params.r
    return n_scalar(CountParams(Q, params.L, params.m), zero_target)


def psi_elementwise(m: int, q: int, r: int, kappa: int) -> int:
    if not 0 <= kappa <= r:
        raise SpecificationError(f"kappa must lie in [0, {r}]")
    return (q ** (m - 1)) ** r * (q**m - 1) ** kappa * (q**m + q - 1) ** (r - kappa)


def n_elementwise(params: CountParams, zero_target: bool | None = None) -> int:
    """Element-wise scheme count for a word with ``params.kappa`` nonzeros.

    ``zero_target`` defaults to ``params.kappa == 0``.
    """
    q, L, m, r, kappa = params.q, params.L, params.m, params.r, params.kappa
    if zero_target is None:
        zero_target = kappa == 0
    if zero_target:
        return q ** (r * (L - m - 1)) * (q**m + q - 1) ** r - 1
    if kappa == 0:
        raise SpecificationError("a nonzero target needs kappa >= 1")
    return q ** (r * (L - m - 1)) * (q**m - 1) ** kappa * (q**m + q - 1) ** (r - kappa)


def words_with_kappa(q: int, r: int, kappa: int) -> int:
    return comb(r, kappa) * (q - 1) ** kappa


def balance_deviation(params: CountParams) -> Fraction:
    """max over value classes of |N / (Q^L - 1) - 1/Q|, Q = q^r, field-product scheme."""
    Q = params.q**params.r
    total = Q**params.L - 1
    return max(abs(Fraction(n_proposed(params, z), total) - Fraction(1, Q))
               for z in (True, False))


def brute_assembly_census(m: int, q: int, r: int = 1, mode: str = "field",
                          spec: FieldSpec | None = None,
                          bound: int = DEFAULT_CENSUS_BOUND) -> Counter:
    """Tally assembly outputs (word codes) over all q^(2rm) inputs."""
    from .generator import TapAssembly, output_code

    if spec is None:
        spec = FieldSpec.for_order(q, r)
    elif spec.q != q or spec.r != r:
        raise SpecificationError("spec does not match q and r")
    total = spec.word_order ** (2 * m)
    if total > bound:
        raise BoundExceededError(f"census needs {total} inputs, bound is {bound}")
    asm = TapAssembly.default(m, mode)
    census: Counter = Counter()
    for inputs in itertools.product(range(spec.word_order), repeat=2 * m):
        census[output_code(spec, asm, inputs)] += 1
    return census
