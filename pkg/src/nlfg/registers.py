"""Scalar LFSRs over GF(q) and word-based sigma-LFSRs over GF(q)^r.

Register states are tuples of word codes (see :mod:`nlfg.gf`), block 0
first.  Block 0 is the oldest symbol and is what a register emits; each
step shifts the blocks down by one and appends the feedback word

    s_L = B_0 s_0 + B_1 s_1 + ... + B_{L-1} s_{L-1}

so the stacked state evolves as ``s(k+1) = A s(k)`` with ``A`` the block
companion matrix returned by :func:`transition_matrix`.  For ``r == 1`` the
gain matrices are 1x1 and everything reduces to the scalar LFSR.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import BoundExceededError, NotPrimitiveError, SpecificationError
from .gf import Field, FieldElement, FieldSpec, Poly, WordVector, is_primitive

DEFAULT_MAX_STATES = 1 << 26
CHAR_POLY_MAX_SIZE = 64

Matrix = tuple[tuple[int, ...], ...]

# ---------------------------------------------------------------------------
# dense linear algebra over a field of codes


def mat_vec(F: Field, A: Sequence[Sequence[int]], v: Sequence[int]) -> tuple[int, ...]:
    out = []
    for row in A:
        acc = 0
        for a, x in zip(row, v):
            if a and x:
                acc = F.add(acc, F.mul(a, x))
        out.append(acc)
    return tuple(out)


def mat_mul(F: Field, A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    cols = list(zip(*B))
    return tuple(mat_vec(F, cols, row) for row in A)


def mat_pow(F: Field, A: Matrix, e: int) -> Matrix:
    n = len(A)
    result: Matrix = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    sq = A
    while e:
        if e & 1:
            result = mat_mul(F, result, sq)
        e >>= 1
        if e:
            sq = mat_mul(F, sq, sq)
    return result


def mat_rank(F: Field, A: Sequence[Sequence[int]]) -> int:
    M = [list(row) for row in A]
    rank = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = F.inv(M[rank][c])
        for i in range(len(M)):
            if i != rank and M[i][c]:
                f = F.mul(M[i][c], inv)
                M[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(M[i], M[rank])]
        rank += 1
    return rank


def char_poly_matrix(F: Field, A: Sequence[Sequence[int]],
                     max_size: int = CHAR_POLY_MAX_SIZE) -> Poly:
    """det(xI - A) by reduction to Hessenberg form (Cohen, Alg. 2.2.9)."""
    n = len(A)
    if n > max_size:
        raise BoundExceededError(f"matrix size {n} exceeds char_poly bound {max_size}")
    H = [list(row) for row in A]
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if H[i][m - 1]), None)
        if piv is None:
            continue
        if piv != m:
            H[piv], H[m] = H[m], H[piv]
            for row in H:
                row[piv], row[m] = row[m], row[piv]
        t_inv = F.inv(H[m][m - 1])
        for i in range(m + 1, n):
            u = F.mul(H[i][m - 1], t_inv)
            if u == 0:
                continue
            for j in range(n):
                H[i][j] = F.sub(H[i][j], F.mul(u, H[m][j]))
            for row in H:
                row[m] = F.add(row[m], F.mul(u, row[i]))
    polys: list[Poly] = [Poly(F, (1,))]
    x = Poly(F, (0, 1))
    for m in range(1, n + 1):
        pm = (x - Poly(F, (H[m - 1][m - 1],))) * polys[m - 1]
        t = 1
        for i in range(m - 1, 0, -1):
            t = F.mul(t, H[i][i - 1])
            c = F.mul(H[i - 1][m - 1], t)
            if c:
                pm = pm - Poly(F, (c,)) * polys[i - 1]
        polys.append(pm)
    return polys[n]


# ---------------------------------------------------------------------------
# register configurations


@lru_cache(maxsize=64)
def _gain_tables(spec: FieldSpec, gains: tuple[Matrix, ...]):
    # word code -> B_i w, one lookup list per gain matrix
    if spec.word_order > 1 << 16:
        return None
    words = [spec.word_entries(c) for c in range(spec.word_order)]
    return [[spec.word_code(mat_vec(spec.base, B, w)) for w in words] for B in gains]


def _as_matrix(spec: FieldSpec, B) -> Matrix:
    M = tuple(tuple(int(x) for x in row) for row in B)
    if len(M) != spec.r or any(len(row) != spec.r for row in M):
        raise SpecificationError(f"gain matrices must be {spec.r}x{spec.r}")
    if any(not 0 <= x < spec.q for row in M for x in row):
        raise SpecificationError(f"gain entry outside GF({spec.q})")
    return M


@dataclass(frozen=True)
class SigmaLfsrConfig:
    """Gain matrices B_0 .. B_{L-1} over GF(q) plus the current state.

    ``state`` holds L word codes; :attr:`words` gives them as WordVectors.
    """

    spec: FieldSpec
    gains: tuple[Matrix, ...]
    state: tuple[int, ...]

    def __post_init__(self):
        spec = self.spec
        if len(self.gains) < 1:
            raise SpecificationError("register length L must be >= 1")
        gains = tuple(_as_matrix(spec, B) for B in self.gains)
        state = tuple(int(s) for s in self.state)
        if len(state) != len(gains):
            raise SpecificationError(f"state needs {len(gains)} words, got {len(state)}")
        if any(not 0 <= s < spec.word_order for s in state):
            raise SpecificationError("state word outside GF(q)^r")
        if mat_rank(spec.base, gains[0]) != spec.r:
            raise SpecificationError("B_0 must be invertible")
        object.__setattr__(self, "gains", gains)
        object.__setattr__(self, "state", state)

    @property
    def L(self) -> int:
        return len(self.gains)

    @property
    def words(self) -> tuple[WordVector, ...]:
        return tuple(WordVector.from_code(self.spec, s) for s in self.state)

    @property
    def period_bound(self) -> int:
        """Number of nonzero states, the period of a primitive register."""
        return self.spec.word_order**self.L - 1

    def with_state(self, state: Sequence[int]) -> "SigmaLfsrConfig":
        return SigmaLfsrConfig(self.spec, self.gains, tuple(state))

    def stacked(self, state: Sequence[int] | None = None) -> tuple[int, ...]:
        """Stacked state vector in GF(q)^(rL): block 0 entries first."""
        state = self.state if state is None else state
        return tuple(e for s in state for e in self.spec.word_entries(s))

    def unstack(self, vec: Sequence[int]) -> tuple[int, ...]:
        r = self.spec.r
        return tuple(self.spec.word_code(vec[i * r:(i + 1) * r]) for i in range(self.L))

    @property
    def _gain_tables(self):
        return _gain_tables(self.spec, self.gains)

    def feedback(self, state: Sequence[int]) -> int:
        spec = self.spec
        tables = self._gain_tables
        acc = 0
        if tables is not None:
            for tab, s in zip(tables, state):
                if s:
                    acc = spec.word_add_code(acc, tab[s])
            return acc
        for B, s in zip(self.gains, state):
            if s:
                acc = spec.word_add_code(
                    acc, spec.word_code(mat_vec(spec.base, B, spec.word_entries(s))))
        return acc

    def next_state(self, state: Sequence[int]) -> tuple[int, ...]:
        return tuple(state[1:]) + (self.feedback(state),)


@dataclass(frozen=True)
class LfsrConfig:
    """Scalar LFSR: ``s_{j+L} = a_0 s_j + ... + a_{L-1} s_{j+L-1}`` over GF(q)."""

    spec: FieldSpec
    taps: tuple[int, ...]
    state: tuple[int, ...]

    def __post_init__(self):
        if self.spec.r != 1:
            raise SpecificationError("scalar LFSRs need a field spec with r = 1")
        taps = tuple(int(a) for a in self.taps)
        state = tuple(int(s) for s in self.state)
        if len(taps) < 1 or len(state) != len(taps):
            raise SpecificationError("taps and state must have the same length L >= 1")
        if any(not 0 <= x < self.spec.q for x in taps + state):
            raise SpecificationError(f"tap or state symbol outside GF({self.spec.q})")
        if taps[0] == 0:
            raise SpecificationError("a_0 must be nonzero")
        object.__setattr__(self, "taps", taps)
        object.__setattr__(self, "state", state)

    @classmethod
    def from_char_poly(cls, spec: FieldSpec, poly, seed: Sequence[int] | None = None) -> "LfsrConfig":
        """Taps ``a_i = -p_i`` for ``p(x) = x^L - a_{L-1} x^{L-1} - ... - a_0``."""
        p = Poly.coerce(poly, spec.base)
        if not p.is_monic() or p.degree < 1:
            raise SpecificationError("characteristic polynomial must be monic of degree >= 1")
        taps = tuple(spec.base.neg(c) for c in p.coeffs[:-1])
        return cls(spec, taps, tuple(seed) if seed is not None else default_seed(spec, len(taps)))

    @property
    def L(self) -> int:
        return len(self.taps)

    def to_sigma(self) -> SigmaLfsrConfig:
        return SigmaLfsrConfig(self.spec, tuple(((a,),) for a in self.taps), self.state)


def as_sigma(cfg) -> SigmaLfsrConfig:
    if isinstance(cfg, LfsrConfig):
        return cfg.to_sigma()
    if isinstance(cfg, SigmaLfsrConfig):
        return cfg
    raise SpecificationError(f"not a register configuration: {cfg!r}")


def default_seed(spec: FieldSpec, L: int) -> tuple[int, ...]:
    """Stacked state (1, 0, ..., 0): word 1 in block 0, zero elsewhere."""
    return (1,) + (0,) * (L - 1)


def lfsr_step(cfg: LfsrConfig) -> tuple[FieldElement, LfsrConfig]:
    out = FieldElement(cfg.spec, cfg.state[0])
    F = cfg.spec.base
    acc = 0
    for a, s in zip(cfg.taps, cfg.state):
        acc = F.add(acc, F.mul(a, s))
    return out, LfsrConfig(cfg.spec, cfg.taps, cfg.state[1:] + (acc,))


def sigma_step(cfg: SigmaLfsrConfig) -> tuple[WordVector, SigmaLfsrConfig]:
    out = WordVector.from_code(cfg.spec, cfg.state[0])
    return out, cfg.with_state(cfg.next_state(cfg.state))


@dataclass(frozen=True)
class TransitionMatrix:
    spec: FieldSpec
    entries: Matrix

    @property
    def size(self) -> int:
        return len(self.entries)

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        return mat_vec(self.spec.base, self.entries, vec)

    def power(self, e: int) -> "TransitionMatrix":
        return TransitionMatrix(self.spec, mat_pow(self.spec.base, self.entries, e))


def transition_matrix(cfg) -> TransitionMatrix:
    """Block companion matrix: identity superdiagonal, gains in the last block row."""
    cfg = as_sigma(cfg)
    r, L = cfg.spec.r, cfg.L
    n = r * L
    A = [[0] * n for _ in range(n)]
    for blk in range(L - 1):
        for i in range(r):
            A[blk * r + i][(blk + 1) * r + i] = 1
    for blk, B in enumerate(cfg.gains):
        for i in range(r):
            for j in range(r):
                A[(L - 1) * r + i][blk * r + j] = B[i][j]
    return TransitionMatrix(cfg.spec, tuple(tuple(row) for row in A))


def char_poly(A: TransitionMatrix, max_size: int = CHAR_POLY_MAX_SIZE) -> Poly:
    """Characteristic polynomial det(xI - A) over GF(q)."""
    return char_poly_matrix(A.spec.base, A.entries, max_size)


@lru_cache(maxsize=256)
def _audit(spec: FieldSpec, gains) -> Poly:
    cfg = SigmaLfsrConfig(spec, gains, (1,) + (0,) * (len(gains) - 1))
    cp = char_poly(transition_matrix(cfg))
    if not is_primitive(cp):
        raise NotPrimitiveError(f"register characteristic polynomial {cp} is not primitive")
    return cp


def audit_primitive(cfg) -> Poly:
    """Return the register's characteristic polynomial; raise unless primitive."""
    cfg = as_sigma(cfg)
    return _audit(cfg.spec, cfg.gains)


def regular_representation(spec: FieldSpec, a: int) -> Matrix:
    """r x r matrix over GF(q) of ``w -> a w`` on GF(q^r) in the M basis."""
    cols = [spec.word_entries(spec.word_mul_code(a, spec.q**j)) for j in range(spec.r)]
    return tuple(tuple(col[i] for col in cols) for i in range(spec.r))


def construct_sigma(spec: FieldSpec, g, seed: Sequence[int] | None = None) -> SigmaLfsrConfig:
    """Primitive sigma-LFSR realising the LFSR over GF(q^r) with char. poly ``g``.

    ``g`` is a monic primitive polynomial over GF(q^r) (coefficients are
    word codes).  Each feedback coefficient ``-g_i`` is replaced by its
    regular representation, so the transition acts as multiplication by a
    root of ``g`` and the char. poly over GF(q) is primitive of degree rL.
    """
    g = Poly.coerce(g, spec.ext)
    if not g.is_monic() or g.degree < 1:
        raise SpecificationError("g must be monic of degree >= 1")
    if not is_primitive(g):
        raise NotPrimitiveError(f"{g} is not primitive over GF({spec.word_order})")
    gains = tuple(regular_representation(spec, spec.ext.neg(c)) for c in g.coeffs[:-1])
    state = tuple(seed) if seed is not None else default_seed(spec, g.degree)
    return SigmaLfsrConfig(spec, gains, state)


def check_state_bound(cfg, max_states: int = DEFAULT_MAX_STATES) -> None:
    cfg = as_sigma(cfg)
    total = cfg.spec.word_order**cfg.L
    if total > max_states:
        raise BoundExceededError(
            f"q^(rL) = {total} states exceeds the bound max_states = {max_states}")


def iter_states(cfg, count: int, start: Sequence[int] | None = None) -> Iterator[tuple[int, ...]]:
    """Yield ``count`` consecutive states starting at ``start`` (default: cfg.state)."""
    cfg = as_sigma(cfg)
    s = tuple(cfg.state if start is None else start)
    nxt = cfg.next_state
    for _ in range(count):
        yield s
        s = nxt(s)


def state_after(cfg, k: int, start: Sequence[int] | None = None) -> tuple[int, ...]:
    """State reached after ``k`` steps, via the k-th power of the transition matrix."""
    cfg = as_sigma(cfg)
    start = cfg.state if start is None else start
    vec = transition_matrix(cfg).power(k).apply(cfg.stacked(start))
    return cfg.unstack(vec)


def full_period_states(cfg, max_states: int = DEFAULT_MAX_STATES,
                       audit: bool = True) -> Iterator[tuple[int, ...]]:
    """Yield the q^(rL) - 1 states of one full period from the seed.

    Raises for a zero seed, an oversize state space, a non-primitive
    register (audit) or a cycle that fails to close after exactly one
    period.
    """
    cfg = as_sigma(cfg)
    check_state_bound(cfg, max_states)
    if not any(cfg.state):
        raise SpecificationError("full-period iteration needs a nonzero seed")
    if audit:
        audit_primitive(cfg)
    seed = cfg.state
    s = seed
    nxt = cfg.next_state
    for i in range(cfg.period_bound):
        if i and s == seed:
            raise NotPrimitiveError(f"state cycle closed early after {i} steps")
        yield s
        s = nxt(s)
    if s != seed:
        raise NotPrimitiveError("state cycle did not close after q^(rL) - 1 steps")
