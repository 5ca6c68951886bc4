"""Finite field arithmetic for the tower GF(p) < GF(q = p^n) < GF(q^r).

Elements at every level are encoded as non-negative integers ("codes").  An
element of a degree-d extension over a base field of order b, with
coefficient vector (c_0, ..., c_{d-1}) in the polynomial basis, has code
``sum(c_i * b**i)``.  Base codes are themselves base-p digit strings, so a
code at any level is the concatenation of the base-p digits of every
coefficient over GF(p).  Addition is therefore digitwise mod p at every
level (plain XOR in characteristic 2).

Polynomials are stored as tuples of codes in ascending powers with no
trailing zeros; the zero polynomial is the empty tuple.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence, Union

from .errors import CertificationError, ConsistencyError, NotPrimitiveError, SpecificationError

# ---------------------------------------------------------------------------
# integer helpers


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
# Miller-Rabin with the bases above is deterministic below this value.
_MR_DETERMINISTIC_LIMIT = 3317044064679887385961981


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    if n >= _MR_DETERMINISTIC_LIMIT:
        raise CertificationError(f"primality of {n} cannot be decided deterministically")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


DEFAULT_TRIAL_LIMIT = 1 << 20


def factorize(n: int, trial_limit: int = DEFAULT_TRIAL_LIMIT) -> dict[int, int]:
    """Factor ``n`` by trial division up to ``trial_limit``.

    A cofactor left over after trial division is accepted only if it is
    provably prime; otherwise :class:`CertificationError` is raised.
    """
    if n < 1:
        raise SpecificationError(f"cannot factor {n}")
    factors: dict[int, int] = {}
    d = 2
    while d * d <= n and d <= trial_limit:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        if d * d > n or is_prime(n):
            factors[n] = factors.get(n, 0) + 1
        else:
            raise CertificationError(
                f"composite cofactor {n} exceeds trial-division bound {trial_limit}; "
                "too large to certify")
    return factors


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, n)`` with ``q == p**n``; raise if ``q`` is not a prime power."""
    if q < 2:
        raise SpecificationError(f"field order must be >= 2, got {q}")
    for p in range(2, q + 1):
        if q % p == 0:
            n, rest = 0, q
            while rest % p == 0:
                rest //= p
                n += 1
            if rest != 1:
                raise SpecificationError(f"{q} is not a prime power")
            return p, n
    raise AssertionError("unreachable")


def _digit_add(a: int, b: int, p: int) -> int:
    if p == 2:
        return a ^ b
    res, place = 0, 1
    while a or b:
        res += ((a % p + b % p) % p) * place
        a //= p
        b //= p
        place *= p
    return res


def _digit_neg(a: int, p: int) -> int:
    if p == 2:
        return a
    res, place = 0, 1
    while a:
        res += ((p - a % p) % p) * place
        a //= p
        place *= p
    return res


# ---------------------------------------------------------------------------
# fields


@dataclass(frozen=True)
class PrimeField:
    """GF(p) on the integers ``0 .. p-1``."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise SpecificationError(f"{self.p!r} is not prime")

    @property
    def order(self) -> int:
        return self.p

    @property
    def characteristic(self) -> int:
        return self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(a, self.p - 2, self.p)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    def digits(self, a: int) -> tuple[int, ...]:
        return (a,)

    def __str__(self):
        return f"GF({self.p})"


@dataclass(frozen=True)
class GaloisField:
    """Extension ``base[x] / (modulus)`` of degree ``len(modulus) - 1``.

    ``modulus`` is a monic coefficient tuple over ``base``.  When the class
    of ``x`` generates the multiplicative group (modulus primitive),
    multiplication goes through exp/log tables; otherwise it falls back to
    :meth:`mul_reduce`.
    """

    base: Union[PrimeField, "GaloisField"]
    modulus: tuple[int, ...]

    def __post_init__(self):
        if len(self.modulus) < 2 or self.modulus[-1] != 1:
            raise SpecificationError("modulus must be monic of degree >= 1")

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1

    @cached_property
    def order(self) -> int:
        return self.base.order ** self.degree

    @property
    def characteristic(self) -> int:
        return self.base.characteristic

    # codes <-> coefficient vectors over ``base``
    def digits(self, a: int) -> tuple[int, ...]:
        b = self.base.order
        out = []
        for _ in range(self.degree):
            a, c = divmod(a, b)
            out.append(c)
        return tuple(out)

    def from_digits(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.degree:
            raise SpecificationError("too many coefficients for this field")
        b = self.base.order
        code = 0
        for c in reversed(coeffs):
            code = code * b + c
        return code

    def add(self, a: int, b: int) -> int:
        return _digit_add(a, b, self.characteristic)

    def neg(self, a: int) -> int:
        return _digit_neg(a, self.characteristic)

    def sub(self, a: int, b: int) -> int:
        return _digit_add(a, _digit_neg(b, self.characteristic), self.characteristic)

    def mul_reduce(self, a: int, b: int) -> int:
        """Schoolbook polynomial product followed by reduction mod ``modulus``."""
        prod = poly_mul(self.base, self.digits(a), self.digits(b))
        rem = poly_mod(self.base, prod, self.modulus)
        return self.from_digits(rem)

    @cached_property
    def _log_tables(self):
        if self.order > 1 << 20:
            return None
        x =self.from_digits((0, 1)) if self.degree > 1 else self.from_digits(
            (self.base.neg(self.modulus[0]),))
        n = self.order - 1
        exp = [0] * n
        log = {}
        e = 1
        for i in range(n):
            if e in log:
                return None
            exp[i] = e
            log[e] = i
            e = self.mul_reduce(e, x)
        if e != 1:
            return None
        return exp, [log.get(a, -1) for a in range(self.order)]

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        tables = self._log_tables
        if tables is None:
            return self.mul_reduce(a, b)
        exp, log = tables
        return exp[(log[a] + log[b]) % (self.order - 1)]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e <= 0:
                raise ZeroDivisionError("zero has no inverse")
            return 0
        tables = self._log_tables
        if tables is not None:
            exp, log = tables
            return exp[(log[a] * e) % (self.order - 1)]
        e %= self.order - 1
        result, sq = 1, a
        while e:
            if e & 1:
                result = self.mul_reduce(result, sq)
            sq = self.mul_reduce(sq, sq)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self.pow(a, -1)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def __str__(self):
        return f"GF({self.order})"


Field = Union[PrimeField, GaloisField]

# ---------------------------------------------------------------------------
# polynomial arithmetic on coefficient tuples


def _trim(c: Sequence[int]) -> tuple[int, ...]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_add(F: Field, a, b) -> tuple[int, ...]:
    n = max(len(a), len(b))
    a = tuple(a) + (0,) * (n - len(a))
    b = tuple(b) + (0,) * (n - len(b))
    return _trim(F.add(x, y) for x, y in zip(a, b))


def poly_sub(F: Field, a, b) -> tuple[int, ...]:
    return poly_add(F, a, tuple(F.neg(y) for y in b))


def poly_mul(F: Field, a, b) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return _trim(out)


def poly_divmod(F: Field, a, b) -> tuple[tuple[int, ...], tuple[int, ...]]:
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(_trim(a))
    db = len(b) - 1
    if len(rem) - 1 < db:
        return (), tuple(rem)
    lead_inv = F.inv(b[-1])
    quot = [0] * (len(rem) - db)
    for k in range(len(rem) - 1 - db, -1, -1):
        c = rem[k + db]
        if c == 0:
            continue
        c = F.mul(c, lead_inv)
        quot[k] = c
        for j, y in enumerate(b):
            if y:
                rem[k + j] = F.sub(rem[k + j], F.mul(c, y))
    return _trim(quot), _trim(rem[:db])


def poly_mod(F: Field, a, b) -> tuple[int, ...]:
    return poly_divmod(F, a, b)[1]


def poly_powmod(F: Field, a, e: int, mod) -> tuple[int, ...]:
    result: tuple[int, ...] = poly_mod(F, (1,), mod)
    sq = poly_mod(F, a, mod)
    while e:
        if e & 1:
            result = poly_mod(F, poly_mul(F, result, sq), mod)
        e >>= 1
        if e:
            sq = poly_mod(F, poly_mul(F, sq, sq), mod)
    return result


def poly_gcd(F: Field, a, b) -> tuple[int, ...]:
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, poly_mod(F, a, b)
    if a:
        lead_inv = F.inv(a[-1])
        a = tuple(F.mul(c, lead_inv) for c in a)
    return a


def convolve(F: Field, u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
    """Full linear convolution, length ``len(u) + len(v) - 1`` (untrimmed)."""
    out = [0] * (len(u) + len(v) - 1)
    for i, x in enumerate(u):
        if x == 0:
            continue
        for j, y in enumerate(v):
            if y:
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return tuple(out)


# ---------------------------------------------------------------------------
# Poly


_TERM_RE = re.compile(r"^(?P<coef>\d+)?\*?(?:(?P<x>x)(?:\^(?P<exp>\d+))?)?$")


@dataclass(frozen=True)
class Poly:
    """A polynomial over ``field`` with ascending coefficient codes."""

    field: Field
    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        coeffs = _trim(int(c) for c in self.coeffs)
        for c in coeffs:
            if not 0 <= c < self.field.order:
                raise SpecificationError(f"coefficient {c} not in {self.field}")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def parse(cls, text: str, field: Field) -> "Poly":
        """Parse ``"1,0,1,1"`` (ascending) or ``"x^3+x^2+1"`` into a Poly.

        Coefficients are element codes of ``field``; a leading ``-`` on a
        term negates its coefficient.
        """
        s = text.replace(" ", "")
        if not s:
            raise SpecificationError("empty polynomial text")
        if "x" not in s:
            try:
                return cls(field, tuple(int(t) for t in s.split(",")))
            except ValueError as exc:
                raise SpecificationError(f"bad coefficient list {text!r}") from exc
        acc: dict[int, int] = {}
        for term in s.replace("-", "+-").split("+"):
            if not term:
                continue
            negate = term.startswith("-")
            term = term.lstrip("-")
            m = _TERM_RE.match(term)
            if not m or not term:
                raise SpecificationError(f"cannot parse term {term!r} in {text!r}")
            coef = int(m["coef"]) if m["coef"] else 1
            if not 0 <= coef < field.order:
                raise SpecificationError(f"coefficient {coef} not in {field}")
            exp = (int(m["exp"]) if m["exp"] else 1) if m["x"] else 0
            if negate:
                coef = field.neg(coef)
            acc[exp] = field.add(acc.get(exp, 0), coef)
        deg = max(acc)
        return cls(field, tuple(acc.get(i, 0) for i in range(deg + 1)))

    @classmethod
    def coerce(cls, value, field: Field) -> "Poly":
        if isinstance(value, Poly):
            if value.field != field:
                raise SpecificationError(f"polynomial over {value.field}, expected {field}")
            return value
        if isinstance(value, str):
            return cls.parse(value, field)
        return cls(field, tuple(value))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def _check(self, other: "Poly"):
        if not isinstance(other, Poly) or other.field != self.field:
            raise SpecificationError("polynomials over different fields")

    def __add__(self, other):
        self._check(other)
        return Poly(self.field, poly_add(self.field, self.coeffs, other.coeffs))

    def __sub__(self, other):
        self._check(other)
        return Poly(self.field, poly_sub(self.field, self.coeffs, other.coeffs))

    def __mul__(self, other):
        self._check(other)
        return Poly(self.field, poly_mul(self.field, self.coeffs, other.coeffs))

    def __divmod__(self, other):
        self._check(other)
        q, r = poly_divmod(self.field, self.coeffs, other.coeffs)
        return Poly(self.field, q), Poly(self.field, r)

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = self.field.add(self.field.mul(acc, x), c)
        return acc

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
                continue
            mono = "x" if k == 1 else f"x^{k}"
            terms.append(mono if c == 1 else f"{c}*{mono}")
        return "+".join(terms)

    def to_list(self) -> list[int]:
        return list(self.coeffs)


# ---------------------------------------------------------------------------
# primitivity


def is_primitive(f: Poly, trial_limit: int = DEFAULT_TRIAL_LIMIT) -> bool:
    """True iff monic ``f`` is irreducible and ``x`` has order ``Q**d - 1``.

    ``Q`` is the order of ``f.field`` (the base field) and ``d = deg f``.
    Irreducibility uses Ben-Or's gcd test; the order check needs the prime
    factors of ``Q**d - 1`` and raises :class:`CertificationError` when
    trial division up to ``trial_limit`` cannot provide them.
    """
    F = f.field
    d = f.degree
    if d < 1 or not f.is_monic():
        raise SpecificationError("primitivity is defined for monic polynomials of degree >= 1")
    if f.coeffs[0] == 0:
        return False
    Q = F.order
    N = Q**d - 1
    primes = factorize(N, trial_limit)
    x = (0, 1)
    h = poly_mod(F, x, f.coeffs)
    for _ in range(d // 2):
        h = poly_powmod(F, h, Q, f.coeffs)
        if len(poly_gcd(F, poly_sub(F, h, x), f.coeffs)) > 1:
            return False
    if poly_powmod(F, x, N, f.coeffs) != (1,):
        return False
    return all(poly_powmod(F, x, N // ell, f.coeffs) != (1,) for ell in primes)


def find_primitive(F: Field, degree: int) -> Poly:
    """Smallest monic primitive polynomial of ``degree`` over ``F``.

    Candidates are ordered by the integer whose base-``|F|`` digits are the
    low coefficients ``c_0 .. c_{d-1}`` (ascending).
    """
    if degree < 1:
        raise SpecificationError("degree must be >= 1")
    Q = F.order
    for k in range(1, Q**degree):
        low = []
        for _ in range(degree):
            k, c = divmod(k, Q)
            low.append(c)
        if low[0] == 0:
            continue
        cand = Poly(F, tuple(low) + (1,))
        if is_primitive(cand):
            return cand
    raise NotPrimitiveError(f"no primitive polynomial of degree {degree} over {F}")


# Known primitive polynomials, ascending coefficient codes, keyed by
# (p, n, degree).  GF(4) codes assume the inner polynomial x^2+x+1
# (code 2 is the class of x).  Every entry is re-certified in the tests.
PRIMITIVE_TABLE: dict[tuple[int, int, int], tuple[int, ...]] = {
    (2, 1, 1): (1, 1),
    (2, 1, 2): (1, 1, 1),
    (2, 1, 3): (1, 1, 0, 1),
    (2, 1, 4): (1, 1, 0, 0, 1),
    (2, 1, 5): (1, 0, 1, 0, 0, 1),
    (2, 1, 6): (1, 1, 0, 0, 0, 0, 1),
    (2, 1, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 1, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (2, 1, 9): (1, 0, 0, 0, 1, 0, 0, 0, 0, 1),
    (2, 1, 10): (1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1),
    (2, 1, 11): (1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 1, 12): (1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1),
    (2, 1, 13): (1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 1, 14): (1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1),
    (2, 1, 15): (1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 1, 16): (1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1),
    (3, 1, 1): (1, 1),
    (3, 1, 2): (2, 1, 1),
    (3, 1, 3): (1, 2, 0, 1),
    (3, 1, 4): (2, 1, 0, 0, 1),
    (3, 1, 5): (1, 2, 0, 0, 0, 1),
    (3, 1, 6): (2, 1, 0, 0, 0, 0, 1),
    (5, 1, 1): (3, 1),
    (5, 1, 2): (2, 1, 1),
    (5, 1, 3): (2, 3, 0, 1),
    (5, 1, 4): (2, 2, 1, 0, 1),
    (5, 1, 5): (2, 4, 0, 0, 0, 1),
    (4, 1, 1): (2, 1),
    (4, 1, 2): (2, 1, 1),
    (4, 1, 3): (2, 1, 1, 1),
    (4, 1, 4): (3, 2, 1, 0, 1),
}


@lru_cache(maxsize=None)
def default_primitive(F: Field, degree: int) -> Poly:
    """Primitive polynomial of ``degree`` over ``F``: table entry or search."""
    p = F.characteristic
    key = None
    if isinstance(F, PrimeField):
        key = (p, 1, degree)
    elif F == default_base_field(p, prime_power(F.order)[1]):
        key = (F.order, 1, degree)
    if key in PRIMITIVE_TABLE:
        return Poly(F, PRIMITIVE_TABLE[key])
    return find_primitive(F, degree)


@lru_cache(maxsize=None)
def default_base_field(p: int, n: int) -> GaloisField:
    """GF(p^n) over GF(p) defined by the default primitive polynomial."""
    prime = PrimeField(p)
    return GaloisField(prime, default_primitive(prime, n).coeffs)


@lru_cache(maxsize=None)
def _certified_primitive(f: Poly) -> bool:
    return is_primitive(f)


# ---------------------------------------------------------------------------
# FieldSpec and value types


@dataclass(frozen=True)
class FieldSpec:
    """The tower GF(p) < GF(q) < GF(q^r) fixed by two primitive polynomials.

    ``inner_poly`` is over GF(p) with degree ``n``; ``outer_poly`` is over
    GF(q) with degree ``r``.  For ``n == 1`` and ``r == 1`` the polynomials
    are linear (``x - g`` for a generator ``g``) and the layer is trivial.
    """

    p: int
    n: int
    inner_poly: Poly
    r: int
    outer_poly: Poly

    def __post_init__(self):
        if self.n < 1 or self.r < 1:
            raise SpecificationError("n and r must be >= 1")
        prime = PrimeField(self.p)
        if self.inner_poly.field != prime or self.inner_poly.degree != self.n:
            raise SpecificationError(f"inner_poly must have degree {self.n} over GF({self.p})")
        if not _certified_primitive(self.inner_poly):
            raise NotPrimitiveError(f"inner_poly {self.inner_poly} is not primitive over GF({self.p})")
        if self.outer_poly.field != self.base or self.outer_poly.degree != self.r:
            raise SpecificationError(f"outer_poly must have degree {self.r} over GF({self.q})")
        if not _certified_primitive(self.outer_poly):
            raise NotPrimitiveError(f"outer_poly {self.outer_poly} is not primitive over GF({self.q})")

    @classmethod
    def create(cls, p: int, n: int = 1, r: int = 1, inner_poly=None, outer_poly=None) -> "FieldSpec":
        """Build a spec, filling missing polynomials from the default table.

        Polynomials may be given as :class:`Poly`, text or coefficient lists.
        """
        prime = PrimeField(p)
        inner = (default_primitive(prime, n) if inner_poly is None
                 else Poly.coerce(inner_poly, prime))
        base = GaloisField(prime, inner.coeffs)
        outer = (default_primitive(base, r) if outer_poly is None
                 else Poly.coerce(outer_poly, base))
        return cls(p, n, inner, r, outer)

    @classmethod
    def for_order(cls, q: int, r: int = 1) -> "FieldSpec":
        p, n = prime_power(q)
        return cls.create(p, n, r)

    @cached_property
    def base(self) -> GaloisField:
        """GF(q)."""
        return GaloisField(PrimeField(self.p), self.inner_poly.coeffs)

    @cached_property
    def ext(self) -> GaloisField:
        """GF(q^r) as GF(q)[x]/(outer_poly), arithmetic by mod-reduction."""
        return GaloisField(self.base, self.outer_poly.coeffs)

    @property
    def q(self) -> int:
        return self.p**self.n

    @property
    def word_order(self) -> int:
        return self.q**self.r

    # word codes
    def word_code(self, entries: Sequence[int]) -> int:
        code = 0
        for e in reversed(entries):
            code = code * self.q + e
        return code

    def word_entries(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.r):
            code, e = divmod(code, self.q)
            out.append(e)
        return tuple(out)

    def word_add_code(self, a: int, b: int) -> int:
        return _digit_add(a, b, self.p)

    @cached_property
    def q_matrix(self) -> "QMatrix":
        return build_q_matrix(self)

    def _word_mul_entries(self, u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
        return self.q_matrix.apply(convolve(self.base, u, v))

    @cached_property
    def _word_mul_table(self):
        if self.word_order > 256:
            return None
        # outer_poly is primitive, so the word x generates the nonzero words:
        # W - 1 products along the Q route give exp/log, the table follows
        W = self.word_order
        if self.r == 1:
            ents = [self.word_entries(c) for c in range(W)]
            return [[self.word_code(self._word_mul_entries(ents[a], ents[b]))
                     for b in range(W)] for a in range(W)]
        gen = self.word_entries(self.q)
        exp, log = [1] * (W - 1), {1: 0}
        for i in range(1, W - 1):
            exp[i] = self.word_code(self._word_mul_entries(self.word_entries(exp[i - 1]), gen))
            log[exp[i]] = i
        if len(log) != W - 1:
            raise ConsistencyError("outer polynomial failed to generate GF(q^r)*")
        table = [[0] * W for _ in range(W)]
        for a in range(1, W):
            la, row = log[a], table[a]
            for b in range(1, W):
                row[b] = exp[(la + log[b]) % (W - 1)]
        return table

    def word_mul_code(self, a: int, b: int) -> int:
        """Field product of two word codes via convolution and the Q matrix."""
        table = self._word_mul_table
        if table is not None:
            return table[a][b]
        return self.word_code(self._word_mul_entries(self.word_entries(a), self.word_entries(b)))

    def word_mul_elementwise_code(self, a: int, b: int) -> int:
        F = self.base
        return self.word_code(tuple(F.mul(x, y) for x, y in
                                    zip(self.word_entries(a), self.word_entries(b))))

    def kappa(self, code: int) -> int:
        """Number of nonzero entries of a word."""
        return sum(1 for e in self.word_entries(code) if e)

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n, "inner_poly": str(self.inner_poly),
                "r": self.r, "outer_poly": str(self.outer_poly)}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldSpec":
        try:
            return cls.create(int(obj["p"]), int(obj.get("n", 1)), int(obj.get("r", 1)),
                              obj.get("inner_poly"), obj.get("outer_poly"))
        except KeyError as exc:
            raise SpecificationError(f"field spec missing key {exc}") from exc

    def __str__(self):
        return (f"GF({self.p}) < GF({self.q}) [{self.inner_poly}] "
                f"< GF({self.q}^{self.r}) [{self.outer_poly}]")


@dataclass(frozen=True)
class FieldElement:
    """An element of GF(q) of a given spec, held as its code."""

    spec: FieldSpec
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.spec.q:
            raise SpecificationError(f"{self.value} is not an element of GF({self.spec.q})")

    @property
    def rep(self) -> tuple[int, ...]:
        """Coefficient vector over GF(p), length n, ascending powers."""
        return self.spec.base.digits(self.value)

    def _other(self, other) -> int:
        if not isinstance(other, FieldElement) or other.spec != self.spec:
            raise SpecificationError("field elements from different field specs")
        return other.value

    def __add__(self, other):
        return FieldElement(self.spec, self.spec.base.add(self.value, self._other(other)))

    def __sub__(self, other):
        return FieldElement(self.spec, self.spec.base.sub(self.value, self._other(other)))

    def __mul__(self, other):
        return FieldElement(self.spec, self.spec.base.mul(self.value, self._other(other)))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.base.neg(self.value))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.base.inv(self.value))


def fe_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def fe_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


@dataclass(frozen=True)
class WordVector:
    """An element of GF(q)^r, entries as GF(q) codes."""

    spec: FieldSpec
    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(e) for e in self.entries)
        if len(entries) != self.spec.r:
            raise SpecificationError(f"word needs {self.spec.r} entries, got {len(entries)}")
        if any(not 0 <= e < self.spec.q for e in entries):
            raise SpecificationError(f"entry outside GF({self.spec.q}) in {entries}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_code(cls, spec: FieldSpec, code: int) -> "WordVector":
        return cls(spec, spec.word_entries(code))

    @property
    def code(self) -> int:
        return self.spec.word_code(self.entries)

    @property
    def kappa(self) -> int:
        return sum(1 for e in self.entries if e)

    def _other(self, other) -> "WordVector":
        if not isinstance(other, WordVector) or other.spec != self.spec:
            raise SpecificationError("word vectors from different field specs")
        return other

    def __add__(self, other):
        other = self._other(other)
        F = self.spec.base
        return WordVector(self.spec, tuple(F.add(a, b) for a, b in zip(self.entries, other.entries)))

    def __mul__(self, other):
        return word_mul(self, other)

    def __str__(self):
        return ",".join(map(str, self.entries))


def map_M(f: Poly, spec: FieldSpec) -> WordVector:
    """Stack the coefficients of ``f`` (degree < r) into a word vector."""
    if f.field != spec.base:
        raise SpecificationError(f"polynomial must be over GF({spec.q})")
    if f.degree >= spec.r:
        raise SpecificationError(f"degree {f.degree} >= r = {spec.r}")
    return WordVector(spec, f.coeffs + (0,) * (spec.r - len(f.coeffs)))


def map_M_inv(v: WordVector) -> Poly:
    return Poly(v.spec.base, v.entries)


@dataclass(frozen=True)
class QMatrix:
    """r x (2r-1) matrix reducing a product's coefficient vector mod outer_poly."""

    spec: FieldSpec
    rows: tuple[tuple[int, ...], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        F = self.spec.base
        if len(vec) != self.shape[1]:
            raise SpecificationError(f"Q expects length {self.shape[1]}, got {len(vec)}")
        out = []
        for row in self.rows:
            acc = 0
            for a, b in zip(row, vec):
                if a and b:
                    acc = F.add(acc, F.mul(a, b))
            out.append(acc)
        return tuple(out)

    def __str__(self):
        return "\n".join(" ".join(map(str, row)) for row in self.rows)


def build_q_matrix(spec: FieldSpec) -> QMatrix:
    r, F = spec.r, spec.base
    cols = [tuple(1 if i == j else 0 for i in range(r)) for j in range(r)]
    for k in range(r, 2 * r - 1):
        xk = (0,) * k + (1,)
        red = poly_mod(F, xk, spec.outer_poly.coeffs)
        cols.append(red + (0,) * (r - len(red)))
    rows = tuple(tuple(col[i] for col in cols) for i in range(r))
    return QMatrix(spec, rows)


def word_mul(v1: WordVector, v2: WordVector) -> WordVector:
    """Product in GF(q^r): ``Q (v1 * v2)`` with ``*`` the convolution."""
    v2 = v1._other(v2)
    return WordVector(v1.spec, v1.spec._word_mul_entries(v1.entries, v2.entries))


def word_mul_elementwise(v1: WordVector, v2: WordVector) -> WordVector:
    v2 = v1._other(v2)
    F = v1.spec.base
    return WordVector(v1.spec, tuple(F.mul(a, b) for a, b in zip(v1.entries, v2.entries)))


def all_words(spec: FieldSpec) -> Iterable[tuple[int, ...]]:
    return itertools.product(range(spec.q), repeat=spec.r)
