"""GF(2^m) arithmetic, binary BCH construction and bounded-distance decoding."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache, cached_property
import logging

import numpy as np
import numpy.typing as npt

from .const import MAX_FIELD_DEGREE, MIN_FIELD_DEGREE, PRIMITIVE_POLYNOMIALS
from .errors import DimensionMismatchError, InvalidArgumentsError, UnsupportedDegreeError
from .gf2 import BitMatrix, as_bits

_LOGGER = logging.getLogger(__name__)

# -------------------------------
# region Binary Polynomials
# -------------------------------
# Polynomials over GF(2) are ints, bit i holding the coefficient of x^i.


def _degree(poly: int) -> int:
    return poly.bit_length() - 1


def _clmul(a: int, b: int) -> int:
    """Carry-less product of two binary polynomials."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


def _clmod(a: int, b: int) -> int:
    """Remainder of a divided by b over GF(2)."""
    db = _degree(b)
    while a and _degree(a) >= db:
        a ^= b << (_degree(a) - db)
    return a


# -------------------------------
# region Field
# -------------------------------


class FieldGF2m:
    """GF(2^m) built from a primitive polynomial, with log/antilog tables."""

    def __init__(self, m: int, primitive_poly: int) -> None:
        """Build the tables and check that the polynomial is primitive."""
        self.m = m
        self.primitive_poly = primitive_poly
        self.order = (1 << m) - 1
        exp = np.zeros(self.order, dtype=np.int64)
        log = np.full(1 << m, -1, dtype=np.int64)
        x = 1
        for i in range(self.order):
            if log[x] != -1:
                raise ValueError(f"Polynomial {primitive_poly:#b} is not primitive")
            exp[i] = x
            log[x] = i
            x <<= 1
            if x >> m:
                x ^= primitive_poly
        if x != 1:
            raise ValueError(f"Polynomial {primitive_poly:#b} is not primitive")
        exp.flags.writeable = False
        log.flags.writeable = False
        self.exp = exp
        self.log = log

    @classmethod
    @cache
    def for_degree(cls, m: int) -> FieldGF2m:
        """Return the field for degree m using the built-in primitive polynomial."""
        if not MIN_FIELD_DEGREE <= m <= MAX_FIELD_DEGREE:
            raise UnsupportedDegreeError(m)
        return cls(m, PRIMITIVE_POLYNOMIALS[m])

    def alpha_pow(self, e: int) -> int:
        """Return α^e."""
        return int(self.exp[e % self.order])

    def mul(self, a: int, b: int) -> int:
        """Multiply two field elements."""
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(self.log[a] + self.log[b]) % self.order])

    def inv(self, a: int) -> int:
        """Return the multiplicative inverse."""
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in GF(2^m)")
        return int(self.exp[(-self.log[a]) % self.order])

    def cyclotomic_coset(self, i: int) -> tuple[int, ...]:
        """Return the coset {i·2^j mod n} in increasing order."""
        coset = set()
        e = i % self.order
        while e not in coset:
            coset.add(e)
            e = (e * 2) % self.order
        return tuple(sorted(coset))

    def minimal_polynomial(self, i: int) -> int:
        """Return the minimal polynomial of α^i over GF(2) as a bitmask."""
        coeffs = [1]
        for e in self.cyclotomic_coset(i):
            root = self.alpha_pow(e)
            # multiply by (x + root)
            shifted = [0, *coeffs]
            scaled = [self.mul(c, root) for c in coeffs] + [0]
            coeffs = [s ^ t for s, t in zip(shifted, scaled, strict=True)]
        if any(c > 1 for c in coeffs):
            raise ArithmeticError(f"Minimal polynomial of α^{i} is not binary")
        return sum(c << d for d, c in enumerate(coeffs))


# -------------------------------
# region BCH Code
# -------------------------------


@dataclass(frozen=True)
class BchSpec:
    """Narrow-sense primitive binary BCH code."""

    m: int
    t: int
    n: int
    k: int
    generator_poly: int

    def __post_init__(self) -> None:
        """Check the generator polynomial against n and k."""
        if self.k != self.n - _degree(self.generator_poly):
            raise ValueError("k does not match the generator polynomial degree")
        if _clmod((1 << self.n) | 1, self.generator_poly):
            raise ValueError("Generator polynomial does not divide x^n + 1")

    @property
    def field(self) -> FieldGF2m:
        """Field the code is defined over."""
        return FieldGF2m.for_degree(self.m)

    @cached_property
    def generator_matrix(self) -> BitMatrix:
        """Cyclic k x n generator matrix, row i = x^i·g(x)."""
        g = np.array(
            [(self.generator_poly >> d) & 1 for d in range(self.n - self.k + 1)],
            dtype=np.uint8,
        )
        rows = np.zeros((self.k, self.n), dtype=np.uint8)
        for i in range(self.k):
            rows[i, i : i + g.size] = g
        return BitMatrix.from_array(rows)

    def __str__(self) -> str:
        """Return the conventional BCH(n,k) name."""
        return f"BCH({self.n},{self.k})"


@cache
def build_bch(m: int, t: int) -> BchSpec:
    """Construct the t-error-correcting primitive BCH code of length 2^m - 1.

    The generator is the product of the distinct minimal polynomials of
    α, α², ..., α^{2t}, one per cyclotomic coset.

    Raises:
        UnsupportedDegreeError: m outside the primitive polynomial table.
        InvalidArgumentsError: t < 1 or a designed distance that leaves no
            information bits.
    """
    field = FieldGF2m.for_degree(m)
    if t < 1:
        raise InvalidArgumentsError(f"BCH capability t must be at least 1, got {t}")
    seen: set[int] = set()
    generator = 1
    for i in range(1, 2 * t + 1):
        leader = min(field.cyclotomic_coset(i))
        if leader in seen:
            continue
        seen.add(leader)
        generator = _clmul(generator, field.minimal_polynomial(leader))
    n = field.order
    k = n - _degree(generator)
    if k < 1:
        raise InvalidArgumentsError(f"BCH code with m={m}, t={t} has no information bits")
    _LOGGER.debug("Built BCH(%d,%d) with t=%d, g=%#x", n, k, t, generator)
    return BchSpec(m=m, t=t, n=n, k=k, generator_poly=generator)


# -------------------------------
# region Decoding
# -------------------------------


def _syndromes(field: FieldGF2m, support: npt.NDArray[np.intp], count: int) -> list[int]:
    """S_j = r(α^j) for j = 1..count."""
    out = []
    for j in range(1, count + 1):
        if support.size:
            out.append(int(np.bitwise_xor.reduce(field.exp[(j * support) % field.order])))
        else:
            out.append(0)
    return out


def _berlekamp_massey(field: FieldGF2m, syndromes: list[int]) -> tuple[list[int], int]:
    """Return the error-locator coefficients (lowest degree first) and its length L."""
    c = [1]
    b = [1]
    length = 0
    shift = 1
    last = 1
    for r, s in enumerate(syndromes):
        d = s
        for i in range(1, length + 1):
            if i < len(c):
                d ^= field.mul(c[i], syndromes[r - i])
        if d == 0:
            shift += 1
            continue
        coef = field.mul(d, field.inv(last))
        update = [0] * shift + [field.mul(coef, x) for x in b]
        size = max(len(c), len(update))
        new_c = [
            (c[i] if i < len(c) else 0) ^ (update[i] if i < len(update) else 0)
            for i in range(size)
        ]
        if 2 * length <= r:
            b = c
            length = r + 1 - length
            last = d
            shift = 1
        else:
            shift += 1
        c = new_c
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c, length


def _chien_roots(field: FieldGF2m, locator: list[int]) -> npt.NDArray[np.intp]:
    """Positions j in [0, n) with Λ(α^{-j}) = 0."""
    positions = np.arange(field.order, dtype=np.int64)
    acc = np.zeros(field.order, dtype=np.int64)
    for i, coef in enumerate(locator):
        if coef:
            acc ^= field.exp[(field.log[coef] - i * positions) % field.order]
    return np.flatnonzero(acc == 0)


def syndrome_decode(
    word: npt.ArrayLike, spec: BchSpec
) -> npt.NDArray[np.uint8] | None:
    """Decode to the codeword within distance t of `word`.

    Args:
        word: hard-decision word of length n.
        spec: the BCH code.

    Returns:
        The corrected codeword, or None when no codeword lies within the
        decoding radius (locator degree above t, missing roots, or a
        correction that does not clear the syndrome).
    """
    bits = as_bits(word)
    if bits.size != spec.n:
        raise DimensionMismatchError(f"Word of length {bits.size} for {spec}")
    field = spec.field
    syndromes = _syndromes(field, np.flatnonzero(bits), 2 * spec.t)
    if not any(syndromes):
        return bits.copy()
    locator, length = _berlekamp_massey(field, syndromes)
    degree = len(locator) - 1
    if length > spec.t or degree != length:
        return None
    roots = _chien_roots(field, locator)
    if roots.size != degree:
        return None
    corrected = bits.copy()
    corrected[roots] ^= 1
    if any(_syndromes(field, np.flatnonzero(corrected), 2 * spec.t)):
        return None
    return corrected
