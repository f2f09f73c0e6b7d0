"""Linear block codes: loading, reduced echelon form and parity-check matrices."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
import itertools
import logging
from pathlib import Path
import re
from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt

from .bch import BchSpec, build_bch
from .const import ML_MAX_K
from .data import CodeSource
from .errors import CodeParseError, DimensionMismatchError, RankDeficientError
from .gf2 import BitMatrix, eliminate_restricted, rref_full

if TYPE_CHECKING:
    from .staged import StagedForm

_LOGGER = logging.getLogger(__name__)

_HEADER = re.compile(r"(\d+) (\d+)")
_ROW = re.compile(r"[01]*")


@dataclass(frozen=True)
class LinearCode:
    """An (n, k) binary linear block code with generator and parity-check matrices."""

    n: int
    k: int
    generator: BitMatrix
    parity_check: BitMatrix
    name: str = ""
    bch: BchSpec | None = None

    @property
    def rate(self) -> float:
        """Code rate k/n."""
        return self.k / self.n

    @cached_property
    def ref(self) -> RefForm:
        """Reduced echelon form, computed once per code."""
        return compute_ref(self)

    def is_codeword(self, word: npt.ArrayLike) -> bool:
        """Return True if H · wordᵀ = 0."""
        bits = np.asarray(word, dtype=np.int64)
        if bits.shape != (self.n,):
            raise DimensionMismatchError(f"Word of shape {bits.shape} for n={self.n}")
        return not ((self.parity_check.view().astype(np.int64) @ bits) & 1).any()

    def encode(self, info: npt.ArrayLike) -> npt.NDArray[np.uint8]:
        """Return info · G."""
        bits = np.asarray(info, dtype=np.int64)
        if bits.shape != (self.k,):
            raise DimensionMismatchError(f"Information word of shape {bits.shape} for k={self.k}")
        return ((bits @ self.generator.view().astype(np.int64)) & 1).astype(np.uint8)

    @cached_property
    def codewords(self) -> npt.NDArray[np.uint8]:
        """All 2^k codewords, row i = binary expansion of i (MSB first) times G."""
        if self.k > ML_MAX_K:
            raise ValueError(f"Codebook of k={self.k} is too large to enumerate")
        info = np.array(list(itertools.product((0, 1), repeat=self.k)), dtype=np.int64)
        info = info.reshape(-1, self.k)
        words = ((info @ self.generator.view().astype(np.int64)) & 1).astype(np.uint8)
        words.flags.writeable = False
        return words

    def __str__(self) -> str:
        """Return the code name."""
        return self.name or f"({self.n},{self.k})"


@dataclass(frozen=True)
class RefForm:
    """Reduced echelon form G_REF with its pivot and parity location sets."""

    g_ref: BitMatrix
    b_k: tuple[int, ...]
    p_nk: tuple[int, ...]


# -------------------------------
# region Loading
# -------------------------------


def parse_generator_file(text: str) -> BitMatrix:
    """Parse the `N K` header plus K rows of N characters 0/1.

    Raises:
        CodeParseError: any deviation from the format.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise CodeParseError("Empty generator matrix file")
    header = _HEADER.fullmatch(lines[0])
    if header is None:
        raise CodeParseError(f"Bad header line {lines[0]!r}, expected 'N K'")
    n, k = int(header.group(1)), int(header.group(2))
    if n < 1 or not 1 <= k <= n:
        raise CodeParseError(f"Header declares an invalid code size N={n}, K={k}")
    rows = lines[1:]
    if len(rows) != k:
        raise CodeParseError(f"Expected {k} matrix rows, found {len(rows)}")
    for index, row in enumerate(rows, start=2):
        if len(row) != n or _ROW.fullmatch(row) is None:
            raise CodeParseError(f"Line {index} is not {n} characters of 0/1")
    bits = np.frombuffer("".join(rows).encode("ascii"), dtype=np.uint8) - ord("0")
    return BitMatrix.from_array(bits.reshape(k, n))


def code_from_generator(generator: BitMatrix, name: str = "", bch: BchSpec | None = None) -> LinearCode:
    """Build a LinearCode, deriving H = [Pᵀ | I] from a systematic form of G.

    Raises:
        RankDeficientError: G does not have full row rank.
    """
    k, n = generator.shape
    systematic, perm, report = rref_full(generator)
    parity = systematic.view()[:, k:]
    h_perm = np.hstack([parity.T, np.eye(n - k, dtype=np.uint8)])
    h = BitMatrix.from_array(h_perm).take_columns(perm.inverse)
    if report.dependent_cols:
        _LOGGER.debug(
            "Generator of %s has %d dependent leading columns", name or (n, k), len(report.dependent_cols)
        )
    return LinearCode(n=n, k=k, generator=generator, parity_check=h, name=name, bch=bch)


def load_code(source: Path | str | BchSpec | CodeSource) -> LinearCode:
    """Load a code from a generator-matrix file or construct it from a BCH spec.

    Raises:
        CodeParseError: malformed file.
        RankDeficientError: generator rows are linearly dependent.
        OSError: the file cannot be read.
    """
    if isinstance(source, CodeSource):
        source = build_bch(source.m, source.t) if source.is_bch else source.path
    if isinstance(source, BchSpec):
        return code_from_generator(source.generator_matrix, name=str(source), bch=source)
    path = Path(source)
    raw = path.read_bytes()
    try:
        text = raw.decode("ascii")
    except UnicodeDecodeError as err:
        raise CodeParseError(f"{path} contains non-ASCII characters") from err
    generator = parse_generator_file(text)
    try:
        code = code_from_generator(generator, name=path.name)
    except RankDeficientError:
        _LOGGER.debug("Generator matrix in %s is rank deficient", path)
        raise
    _LOGGER.info("Loaded (%d,%d) code from %s", code.n, code.k, path)
    return code


def compute_ref(code: LinearCode) -> RefForm:
    """Left-to-right elimination of G in its original column layout."""
    g_ref, report = eliminate_restricted(code.generator, range(code.k), range(code.n))
    b_k = report.pivot_cols
    pivots = set(b_k)
    p_nk = tuple(c for c in range(code.n) if c not in pivots)
    return RefForm(g_ref=g_ref, b_k=b_k, p_nk=p_nk)


# -------------------------------
# region Staged Duals
# -------------------------------


def dual_of_staged(staged: StagedForm) -> BitMatrix:
    """Parity-check matrix of a staged generator, in the staged column order.

    Each row belongs to one non-basis column of the staged form and holds the
    identity there. For a two-stage form whose third group is as wide as the
    stage-2 block and whose stage-2 block over that group is invertible, the
    rows of the fourth group are further combined with those of the third so
    that they vanish on the second group; otherwise the systematic dual is
    returned.
    """
    k, n = staged.matrix.shape
    pivots = list(staged.pivot_cols)
    if len(pivots) != k:
        raise DimensionMismatchError(f"Staged form lists {len(pivots)} pivots for {k} rows")
    systematic, _ = eliminate_restricted(staged.matrix, range(k), pivots)
    sys_bits = systematic.view()
    pivot_set = set(pivots)
    parity_cols = [c for c in range(n) if c not in pivot_set]
    h = np.zeros((n - k, n), dtype=np.uint8)
    for row, col in enumerate(parity_cols):
        h[row, col] = 1
        h[row, pivots] = sys_bits[:, col]

    bounds = staged.group_bounds
    if len(bounds) != 5 or len(staged.stage_row_bounds) != 2:
        return BitMatrix.from_array(h)
    stage2 = staged.stage_row_bounds[1]
    width = len(stage2)
    g2 = range(bounds[1], bounds[2])
    g3 = range(bounds[2], bounds[3])
    g4 = range(bounds[3], bounds[4])
    if width == 0 or len(g3) != width or not set(g2) <= pivot_set or pivot_set & set(g3):
        return BitMatrix.from_array(h)
    block = staged.matrix.view()[stage2.start : stage2.stop]
    try:
        solved, _ = eliminate_restricted(
            BitMatrix.from_array(np.hstack([block[:, g3.start : g3.stop], block[:, g4.start : g4.stop]])),
            range(width),
            range(width),
        )
    except RankDeficientError:
        _LOGGER.debug("Stage-2 block over group 3 is singular, returning the systematic dual")
        return BitMatrix.from_array(h)
    y = solved.view()[:, width:].T.astype(np.int64)
    row_of = {col: row for row, col in enumerate(parity_cols)}
    top = h[[row_of[c] for c in g3]].astype(np.int64)
    bottom_rows = [row_of[c] for c in g4]
    h[bottom_rows] = ((h[bottom_rows].astype(np.int64) + y @ top) & 1).astype(np.uint8)
    return BitMatrix.from_array(h)
