"""Nonlinear feedforward generators (NLFGs).

A :class:`TapAssembly` wires ``m`` two-input multipliers to disjoint pairs
of delay blocks; the products are summed to form each output.  In
``"field"`` mode the words are multiplied as elements of GF(q^r) (the
convolution / Q-matrix route); in ``"elementwise"`` mode they are
multiplied coordinate by coordinate.  The two modes coincide for r = 1.

Outputs are word codes (GF(q) codes when r = 1); decode with
:meth:`nlfg.gf.WordVector.from_code`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Iterator, Sequence

from .errors import SpecificationError
from .gf import FieldElement, FieldSpec, WordVector
from .registers import (
    DEFAULT_MAX_STATES,
    LfsrConfig,
    SigmaLfsrConfig,
    as_sigma,
    full_period_states,
    iter_states,
)

FIELD = "field"
ELEMENTWISE = "elementwise"
MODES = (FIELD, ELEMENTWISE)


@dataclass(frozen=True)
class TapAssembly:
    """m disjoint ordered pairs of delay-block indices and a product mode."""

    pairs: tuple[tuple[int, int], ...]
    mode: str = FIELD

    def __post_init__(self):
        pairs = tuple((int(i), int(j)) for i, j in self.pairs)
        if not pairs:
            raise SpecificationError("an NLFG needs at least one multiplier (m >= 1)")
        flat = [i for pair in pairs for i in pair]
        if any(i < 0 for i in flat):
            raise SpecificationError("tap indices must be non-negative")
        if len(set(flat)) != len(flat):
            raise SpecificationError("each delay block may feed at most one multiplier")
        if self.mode not in MODES:
            raise SpecificationError(f"mode must be one of {MODES}, got {self.mode!r}")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def default(cls, m: int, mode: str = FIELD) -> "TapAssembly":
        """Pairs (0,1), (2,3), ..., (2m-2, 2m-1)."""
        return cls(tuple((2 * k, 2 * k + 1) for k in range(m)), mode)

    @property
    def m(self) -> int:
        return len(self.pairs)

    def check_length(self, L: int) -> None:
        if self.m > L // 2:
            raise SpecificationError(f"m = {self.m} exceeds floor(L/2) = {L // 2}")
        bad = [i for pair in self.pairs for i in pair if i >= L]
        if bad:
            raise SpecificationError(f"tap index {bad[0]} out of range for L = {L}")

    def to_json(self) -> dict:
        return {"pairs": [list(p) for p in self.pairs], "mode": self.mode}


@lru_cache(maxsize=32)
def _product_table(spec: FieldSpec, mode: str):
    if spec.word_order > 256:
        return None
    W = range(spec.word_order)
    if mode == FIELD:
        return [[spec.word_mul_code(a, b) for b in W] for a in W]
    return [[spec.word_mul_elementwise_code(a, b) for b in W] for a in W]


def product_function(spec: FieldSpec, mode: str) -> Callable[[int, int], int]:
    """Two-input multiplier on word codes for ``mode``."""
    table = _product_table(spec, mode)
    if table is not None:
        return lambda a, b: table[a][b]
    return spec.word_mul_code if mode == FIELD else spec.word_mul_elementwise_code


def output_code(spec: FieldSpec, assembly: TapAssembly, state: Sequence[int]) -> int:
    mul = product_function(spec, assembly.mode)
    acc = 0
    for i, j in assembly.pairs:
        a, b = state[i], state[j]
        if a and b:
            acc = spec.word_add_code(acc, mul(a, b))
    return acc


def _decode(spec: FieldSpec, code: int):
    if spec.r == 1:
        return FieldElement(spec, code)
    return WordVector.from_code(spec, code)


def assembly_output(assembly: TapAssembly, state, spec: FieldSpec | None = None):
    """Sum over pairs of the product of the two tapped blocks.

    ``state`` is a register config, or a sequence of WordVector /
    FieldElement values, or of raw word codes together with ``spec``.
    Returns a FieldElement when r = 1, otherwise a WordVector.
    """
    if isinstance(state, (LfsrConfig, SigmaLfsrConfig)):
        spec, codes = state.spec, state.state
    else:
        items = list(state)
        if items and isinstance(items[0], (WordVector, FieldElement)):
            spec = items[0].spec
            if any(getattr(x, "spec", None) != spec for x in items):
                raise SpecificationError("state values from different field specs")
            codes = tuple(x.code if isinstance(x, WordVector) else x.value for x in items)
        elif spec is None:
            raise SpecificationError("raw state codes need a field spec")
        else:
            codes = tuple(int(x) for x in items)
    flat = [i for pair in assembly.pairs for i in pair]
    if max(flat) >= len(codes):
        raise SpecificationError(f"tap index {max(flat)} out of range for L = {len(codes)}")
    return _decode(spec, output_code(spec, assembly, codes))


@dataclass(frozen=True)
class NlfgGenerator:
    register: LfsrConfig | SigmaLfsrConfig
    assembly: TapAssembly

    def __post_init__(self):
        if not isinstance(self.register, (LfsrConfig, SigmaLfsrConfig)):
            raise SpecificationError("register must be an LfsrConfig or SigmaLfsrConfig")
        self.assembly.check_length(self.register.L)

    @property
    def spec(self) -> FieldSpec:
        return self.register.spec

    @property
    def L(self) -> int:
        return self.register.L

    @property
    def m(self) -> int:
        return self.assembly.m

    @property
    def mode(self) -> str:
        return self.assembly.mode

    @cached_property
    def sigma(self) -> SigmaLfsrConfig:
        return as_sigma(self.register)

    def output_of(self, state: Sequence[int]) -> int:
        return output_code(self.spec, self.assembly, state)

    def with_state(self, state: Sequence[int]) -> "NlfgGenerator":
        reg = self.register
        if isinstance(reg, LfsrConfig):
            return NlfgGenerator(LfsrConfig(reg.spec, reg.taps, tuple(state)), self.assembly)
        return NlfgGenerator(reg.with_state(state), self.assembly)


def nlfg_step(gen: NlfgGenerator):
    """Output for the current state, then the generator advanced one step."""
    out = _decode(gen.spec, gen.output_of(gen.register.state))
    return out, gen.with_state(gen.sigma.next_state(gen.register.state))


def generate(gen: NlfgGenerator, count: int) -> Iterator[int]:
    """First ``count`` output codes from the current state (no primitivity needed)."""
    spec, asm = gen.spec, gen.assembly
    for s in iter_states(gen.sigma, count):
        yield output_code(spec, asm, s)


def full_period_output(gen: NlfgGenerator, max_states: int = DEFAULT_MAX_STATES,
                       audit: bool = True) -> Iterator[int]:
    """One output code per state of a full register period, in state order."""
    mul = product_function(gen.spec, gen.mode)
    add = gen.spec.word_add_code
    pairs = gen.assembly.pairs
    for s in full_period_states(gen.sigma, max_states, audit):
        acc = 0
        for i, j in pairs:
            a, b = s[i], s[j]
            if a and b:
                acc = add(acc, mul(a, b))
        yield acc
