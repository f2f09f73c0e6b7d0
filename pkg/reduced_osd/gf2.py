"""Dense GF(2) matrices with word-packed rows, permutations and Gaussian elimination."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from functools import cached_property
import itertools
import logging

import numpy as np
import numpy.typing as npt

from .const import ROW_SPACE_MAX_ROWS, WORD_BITS
from .errors import DimensionMismatchError, RankDeficientError

_LOGGER = logging.getLogger(__name__)

_WORD_DTYPE = np.dtype("<u8")
_ONE = np.uint64(1)

type BitVector = npt.NDArray[np.uint8]

# -------------------------------
# region Packing Helpers
# -------------------------------


def _pack(bits: npt.NDArray[np.uint8]) -> npt.NDArray[np.uint64]:
    """Pack a (rows, cols) 0/1 array into little-endian 64-bit words per row."""
    rows, cols = bits.shape
    width = max(1, -(-cols // WORD_BITS))
    packed = np.zeros((rows, width * 8), dtype=np.uint8)
    packed[:, : -(-cols // 8)] = np.packbits(bits, axis=1, bitorder="little")
    return packed.view(_WORD_DTYPE)


def _unpack(words: npt.NDArray[np.uint64], cols: int) -> npt.NDArray[np.uint8]:
    """Inverse of _pack."""
    as_bytes = np.ascontiguousarray(words).view(np.uint8)
    return np.unpackbits(as_bytes, axis=1, count=cols, bitorder="little")


def _column_bits(words: npt.NDArray[np.uint64], col: int) -> npt.NDArray[np.uint64]:
    """Return bit `col` of every row as a 0/1 word vector."""
    return (words[:, col // WORD_BITS] >> np.uint64(col % WORD_BITS)) & _ONE


def as_bits(v: Sequence[int] | npt.ArrayLike) -> BitVector:
    """Coerce a binary sequence to a uint8 vector, rejecting non-binary entries."""
    arr = np.asarray(v)
    if arr.ndim != 1:
        raise DimensionMismatchError(f"Expected a vector, got shape {arr.shape}")
    out = arr.astype(np.uint8)
    if out.size and (out > 1).any():
        raise ValueError("Binary sequence contains entries other than 0/1")
    return out


# -------------------------------
# region BitMatrix
# -------------------------------


class BitMatrix:
    """Immutable dense binary matrix stored as word-packed rows."""

    def __init__(self, words: npt.NDArray[np.uint64], cols: int) -> None:
        """Wrap packed row words; use the from_* constructors instead."""
        words = np.array(words, dtype=_WORD_DTYPE, copy=True)
        words.flags.writeable = False
        self._words = words
        self._rows = words.shape[0]
        self._cols = cols

    @classmethod
    def from_array(cls, bits: npt.ArrayLike) -> BitMatrix:
        """Build from a 2-D array of 0/1 entries."""
        arr = np.asarray(bits)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise DimensionMismatchError(f"Expected a 2-D array, got shape {arr.shape}")
        arr = arr.astype(np.uint8)
        if arr.size and (arr > 1).any():
            raise ValueError("Matrix contains entries other than 0/1")
        return cls(_pack(arr), arr.shape[1])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        """Return the all-zero rows x cols matrix."""
        return cls.from_array(np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, size: int) -> BitMatrix:
        """Return the size x size identity."""
        return cls.from_array(np.eye(size, dtype=np.uint8))

    @property
    def rows(self) -> int:
        """Number of rows."""
        return self._rows

    @property
    def cols(self) -> int:
        """Number of columns."""
        return self._cols

    @property
    def shape(self) -> tuple[int, int]:
        """Return (rows, cols)."""
        return (self._rows, self._cols)

    @property
    def words(self) -> npt.NDArray[np.uint64]:
        """Read-only packed row words."""
        return self._words

    @cached_property
    def _dense(self) -> npt.NDArray[np.uint8]:
        dense = _unpack(self._words, self._cols)
        dense.flags.writeable = False
        return dense

    def to_array(self) -> npt.NDArray[np.uint8]:
        """Return a writable dense copy."""
        return self._dense.copy()

    def view(self) -> npt.NDArray[np.uint8]:
        """Return the cached read-only dense view."""
        return self._dense

    def __getitem__(self, index: tuple[int, int]) -> int:
        """Return the entry at (row, col)."""
        row, col = index
        if not (0 <= row < self._rows and 0 <= col < self._cols):
            raise IndexError(f"Index ({row}, {col}) out of range for {self.shape}")
        return int(
            (self._words[row, col // WORD_BITS] >> np.uint64(col % WORD_BITS)) & _ONE
        )

    def row(self, index: int) -> BitVector:
        """Return row `index` as a 0/1 vector."""
        return self._dense[index].copy()

    def take_columns(self, order: Sequence[int] | npt.ArrayLike) -> BitMatrix:
        """Return the matrix whose column j is column order[j] of this one."""
        return BitMatrix.from_array(self._dense[:, np.asarray(order, dtype=np.intp)])

    def take_rows(self, order: Sequence[int] | npt.ArrayLike) -> BitMatrix:
        """Return the matrix whose row i is row order[i] of this one."""
        idx = np.asarray(order, dtype=np.intp)
        return BitMatrix(self._words[idx], self._cols)

    def transpose(self) -> BitMatrix:
        """Return the transpose."""
        return BitMatrix.from_array(self._dense.T)

    def multiply(self, other: BitMatrix) -> BitMatrix:
        """Return the GF(2) product self · other."""
        if self._cols != other.rows:
            raise DimensionMismatchError(
                f"Cannot multiply {self.shape} by {other.shape}"
            )
        prod = self._dense.astype(np.int64) @ other.view().astype(np.int64)
        return BitMatrix.from_array(prod & 1)

    def is_zero(self) -> bool:
        """Return True if every entry is 0."""
        return not self._words.any()

    def rank(self) -> int:
        """Return the GF(2) rank."""
        work = self._words.copy()
        result = _eliminate(
            work,
            col_order=range(self._cols),
            pivot_rows=range(self._rows),
            clear_rows=range(self._rows),
        )
        return len(result.pivot_cols)

    def row_space(self) -> frozenset[bytes]:
        """Enumerate the row span (each vector as bytes of its 0/1 entries)."""
        if self._rows > ROW_SPACE_MAX_ROWS:
            raise ValueError(f"Row space of {self._rows} rows is too large to enumerate")
        coeffs = np.array(
            list(itertools.product((0, 1), repeat=self._rows)), dtype=np.int64
        ).reshape(-1, self._rows)
        span = (coeffs @ self._dense.astype(np.int64)) & 1
        return frozenset(row.astype(np.uint8).tobytes() for row in span)

    def __eq__(self, other: object) -> bool:
        """Return True for equal shape and entries."""
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self._words, other.words)

    def __hash__(self) -> int:
        """Hash on shape and packed content."""
        return hash((self.shape, self._words.tobytes()))

    def __repr__(self) -> str:
        """Return a compact representation."""
        return f"BitMatrix(rows={self._rows}, cols={self._cols})"


# -------------------------------
# region Permutation
# -------------------------------


class Direction(StrEnum):
    """Direction in which a permutation is applied."""

    FORWARD = "forward"
    INVERSE = "inverse"


class Permutation:
    """Bijection on [0, size) with its inverse.

    Applying the permutation forward maps v to u with u[i] = v[forward[i]].
    """

    def __init__(self, forward: Sequence[int] | npt.ArrayLike) -> None:
        """Validate and store the forward map."""
        fwd = np.array(forward, dtype=np.intp).reshape(-1)
        size = fwd.size
        if not np.array_equal(np.sort(fwd), np.arange(size)):
            raise ValueError("Forward map is not a bijection on [0, size)")
        inv = np.empty(size, dtype=np.intp)
        inv[fwd] = np.arange(size)
        fwd.flags.writeable = False
        inv.flags.writeable = False
        self._forward = fwd
        self._inverse = inv

    @classmethod
    def identity(cls, size: int) -> Permutation:
        """Return the identity on [0, size)."""
        return cls(np.arange(size))

    @property
    def size(self) -> int:
        """Number of permuted positions."""
        return self._forward.size

    @property
    def forward(self) -> npt.NDArray[np.intp]:
        """Forward index map."""
        return self._forward

    @property
    def inverse(self) -> npt.NDArray[np.intp]:
        """Inverse index map."""
        return self._inverse

    def is_identity(self) -> bool:
        """Return True if the map is the identity."""
        return bool(np.array_equal(self._forward, np.arange(self.size)))

    def apply(self, v: npt.ArrayLike, direction: Direction = Direction.FORWARD) -> np.ndarray:
        """Apply to a sequence; see apply_permutation."""
        arr = np.asarray(v)
        if arr.shape[-1:] != (self.size,):
            raise DimensionMismatchError(
                f"Sequence of length {arr.shape[-1:]} does not fit permutation of size {self.size}"
            )
        index = self._forward if direction is Direction.FORWARD else self._inverse
        return arr[..., index]

    def compose(self, other: Permutation) -> Permutation:
        """Return p such that p.apply(v) == self.apply(other.apply(v))."""
        if other.size != self.size:
            raise DimensionMismatchError("Cannot compose permutations of different sizes")
        return Permutation(other.forward[self._forward])

    def inverted(self) -> Permutation:
        """Return the inverse permutation."""
        return Permutation(self._inverse)

    def __eq__(self, other: object) -> bool:
        """Return True for identical maps."""
        if not isinstance(other, Permutation):
            return NotImplemented
        return np.array_equal(self._forward, other.forward)

    def __hash__(self) -> int:
        """Hash on the forward map."""
        return hash(self._forward.tobytes())

    def __len__(self) -> int:
        """Return the size."""
        return self.size

    def __repr__(self) -> str:
        """Return a compact representation."""
        return f"Permutation({self._forward.tolist()})"


def apply_permutation(
    v: npt.ArrayLike, p: Permutation, direction: Direction = Direction.FORWARD
) -> np.ndarray:
    """Permute a sequence: output[i] = v[p(i)] (forward) or v[p^-1(i)] (inverse)."""
    return p.apply(v, direction)


# -------------------------------
# region Elimination
# -------------------------------


@dataclass(frozen=True)
class EliminationReport:
    """What an elimination did: pivots found, dependent columns, row operations."""

    pivot_cols: tuple[int, ...]
    dependent_cols: tuple[int, ...]
    row_add_count: int
    row_swap_count: int
    modified_rows: frozenset[int] = field(default_factory=frozenset)

    @property
    def rank(self) -> int:
        """Number of pivots found."""
        return len(self.pivot_cols)


def _eliminate(
    words: npt.NDArray[np.uint64],
    col_order: Sequence[int] | range,
    pivot_rows: range,
    clear_rows: range | Sequence[int],
    max_pivots: int | None = None,
) -> EliminationReport:
    """Gauss-Jordan elimination in place on packed rows.

    Pivot rows are drawn from `pivot_rows` and placed at its start in order of
    discovery; each pivot column is cleared in every row of `clear_rows`.
    """
    limit = len(pivot_rows) if max_pivots is None else min(max_pivots, len(pivot_rows))
    clear = np.asarray(clear_rows, dtype=np.intp)
    pivots: list[int] = []
    dependent: list[int] = []
    modified: set[int] = set()
    adds = 0
    swaps = 0
    next_row = pivot_rows.start
    for col in col_order:
        if len(pivots) == limit:
            break
        candidates = np.flatnonzero(
            _column_bits(words[next_row : pivot_rows.stop], col)
        )
        if candidates.size == 0:
            dependent.append(col)
            continue
        pivot = next_row + int(candidates[0])
        if pivot != next_row:
            words[[next_row, pivot]] = words[[pivot, next_row]]
            swaps += 1
            modified.update((next_row, pivot))
        hits = clear[_column_bits(words[clear], col).astype(bool)]
        targets = hits[hits != next_row]
        if targets.size:
            words[targets] ^= words[next_row]
            adds += int(targets.size)
            modified.update(targets.tolist())
        pivots.append(col)
        next_row += 1
    return EliminationReport(
        pivot_cols=tuple(pivots),
        dependent_cols=tuple(dependent),
        row_add_count=adds,
        row_swap_count=swaps,
        modified_rows=frozenset(modified),
    )


def _check_columns(m: BitMatrix, col_order: Sequence[int]) -> list[int]:
    cols = [int(c) for c in col_order]
    if len(set(cols)) != len(cols):
        raise ValueError("Column order lists a column twice")
    if any(not 0 <= c < m.cols for c in cols):
        raise IndexError("Column order lists a column outside the matrix")
    return cols


def _check_range(m: BitMatrix, row_range: range) -> None:
    if row_range.step != 1 or row_range.start < 0 or row_range.stop > m.rows:
        raise IndexError(f"Row range {row_range} outside matrix with {m.rows} rows")


def rref_full(m: BitMatrix) -> tuple[BitMatrix, Permutation, EliminationReport]:
    """Full left-to-right Gauss-Jordan elimination into systematic form.

    Returns the reduced matrix with its columns permuted so the pivot columns
    come first (identity in the leftmost rows x rows block) followed by every
    other column in original order, the column permutation that does so, and
    the report in original column indices.
    """
    work = m.words.copy()
    report = _eliminate(
        work,
        col_order=range(m.cols),
        pivot_rows=range(m.rows),
        clear_rows=range(m.rows),
    )
    if report.rank < m.rows:
        raise RankDeficientError(report.rank, m.rows)
    pivots = set(report.pivot_cols)
    order = list(report.pivot_cols) + [c for c in range(m.cols) if c not in pivots]
    perm = Permutation(order)
    reduced = BitMatrix(work, m.cols)
    _LOGGER.debug(
        "rref_full %s: %d dependent columns, %d row additions",
        m.shape,
        len(report.dependent_cols),
        report.row_add_count,
    )
    return reduced.take_columns(perm.forward), perm, report


def eliminate_restricted(
    m: BitMatrix,
    row_range: range,
    col_order: Sequence[int],
    max_pivots: int | None = None,
) -> tuple[BitMatrix, EliminationReport]:
    """Elimination confined to the rows of `row_range`.

    Pivot search walks `col_order`; swaps and row additions only use and touch
    rows in the range, so every other row is returned bit-identical. The
    physical column layout is kept; report.pivot_cols[i] is the identity
    column of row row_range.start + i. With `max_pivots` the elimination stops
    after that many pivots (the remaining rows of the range are still cleared
    at the pivots found).
    """
    _check_range(m, row_range)
    cols = _check_columns(m, col_order)
    work = m.words.copy()
    report = _eliminate(
        work,
        col_order=cols,
        pivot_rows=row_range,
        clear_rows=row_range,
        max_pivots=max_pivots,
    )
    required = len(row_range) if max_pivots is None else min(max_pivots, len(row_range))
    if report.rank < required:
        raise RankDeficientError(report.rank, required)
    return BitMatrix(work, m.cols), report


def eliminate_extended(
    m: BitMatrix, pivot_range: range, col_order: Sequence[int]
) -> tuple[BitMatrix, EliminationReport]:
    """Elimination with pivots drawn from `pivot_range` but cleared in all rows."""
    _check_range(m, pivot_range)
    cols = _check_columns(m, col_order)
    work = m.words.copy()
    report = _eliminate(
        work,
        col_order=cols,
        pivot_rows=pivot_range,
        clear_rows=range(m.rows),
    )
    if report.rank < len(pivot_range):
        raise RankDeficientError(report.rank, len(pivot_range))
    return BitMatrix(work, m.cols), report


def mat_vec_encode(v: Sequence[int] | npt.ArrayLike, m: BitMatrix) -> BitVector:
    """Return v · M over GF(2)."""
    bits = as_bits(v)
    if bits.size != m.rows:
        raise DimensionMismatchError(
            f"Vector of length {bits.size} does not fit matrix with {m.rows} rows"
        )
    acc = np.zeros(m.words.shape[1], dtype=_WORD_DTYPE)
    selected = m.words[bits.astype(bool)]
    if selected.shape[0]:
        acc = np.bitwise_xor.reduce(selected, axis=0)
    return _unpack(acc.reshape(1, -1), m.cols)[0]
