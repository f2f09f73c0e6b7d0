"""Reduced Gaussian elimination: staged generator forms, cascade decoding and GE cost.

A staged form is λ₁(G_REF) with its columns regrouped and only a small block
of rows re-eliminated per received word. Column groups are contiguous; rows
are split into stages, each holding an identity on its own pivot columns and
zeros on the pivot columns of every earlier stage, so a codeword is encoded
stage by stage (each stage's input corrected by what earlier stages already
put on its pivots).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import StrEnum
import logging

import numpy as np
import numpy.typing as npt

from .channel import NoisyWord
from .code import RefForm
from .data import DecodeOutcome, GeCost
from .errors import (
    DimensionMismatchError,
    InvalidAlphaError,
    InvalidArgumentsError,
    InvalidBmaxError,
    PartitionInvariantError,
)
from .gf2 import (
    BitMatrix,
    Permutation,
    as_bits,
    eliminate_extended,
    eliminate_restricted,
)
from .osd import MrbSystematic, candidate_count, finish_candidate, search_patterns

_LOGGER = logging.getLogger(__name__)


class StagedLayout(StrEnum):
    """Block layout a staged form follows."""

    TILDE = "tilde"
    BMAX_TILDE = "bmax_tilde"
    TWO_STAGE = "two_stage"
    ONE_PASS = "one_pass"
    THREE_STAGE = "three_stage"


# -------------------------------
# region Types
# -------------------------------


@dataclass(frozen=True)
class BasisPartition:
    """Pivot and parity locations split at position K of the reliability order.

    All sets hold λ₁ positions in increasing order.
    """

    b_k_mr: tuple[int, ...]
    b_k_lr: tuple[int, ...]
    p_nk_mr: tuple[int, ...]
    p_nk_lr: tuple[int, ...]

    @property
    def b_lr(self) -> int:
        """|B_K,LR|, the number of rows to re-eliminate."""
        return len(self.b_k_lr)


@dataclass(frozen=True)
class StagedForm:
    """A staged generator matrix with its bookkeeping.

    col_perm maps staged column j to original position col_perm.forward[j];
    pivot_cols[r] is the staged column holding row r's identity entry.
    group_bounds lists the start of every column group followed by n.
    """

    matrix: BitMatrix
    col_perm: Permutation
    lambda1: Permutation
    group_bounds: tuple[int, ...]
    stage_row_bounds: tuple[range, ...]
    pivot_cols: tuple[int, ...]
    layout: StagedLayout
    dependency_count: int = 0
    stage2_row_ops: int = 0
    stage1_rows_modified: int = 0

    @property
    def k(self) -> int:
        """Number of rows."""
        return self.matrix.rows

    @property
    def n(self) -> int:
        """Number of columns."""
        return self.matrix.cols

    @property
    def stages(self) -> int:
        """Number of row stages."""
        return len(self.stage_row_bounds)

    def group(self, index: int) -> range:
        """Staged columns of group `index` (0-based)."""
        return range(self.group_bounds[index], self.group_bounds[index + 1])

    def positions(self) -> npt.NDArray[np.intp]:
        """λ₁ position of every staged column."""
        return self.lambda1.inverse[self.col_perm.forward]


@dataclass(frozen=True)
class StagePlan:
    """How a frame is staged: number of stages, three-stage split and B_max."""

    stages: int = 2
    alpha: int | None = None
    b_max: int | None = None

    def __post_init__(self) -> None:
        """Validate the plan."""
        if self.stages not in (2, 3):
            raise InvalidArgumentsError(f"stages must be 2 or 3, got {self.stages}")
        if self.b_max is not None and self.b_max < 1:
            raise InvalidBmaxError(f"B_max must be at least 1, got {self.b_max}")
        if self.alpha is not None and self.alpha < 1:
            raise InvalidArgumentsError(f"alpha must be at least 1, got {self.alpha}")


# -------------------------------
# region Partition and Tilde Form
# -------------------------------


def partition_basis(ref: RefForm, lambda1: Permutation, k: int) -> BasisPartition:
    """Split the λ₁ images of B_K and P_N-K at position K.

    Raises:
        PartitionInvariantError: |B_K,LR| != |P_N-K,MR|.
    """
    b_pos = np.sort(lambda1.inverse[list(ref.b_k)])
    p_pos = np.sort(lambda1.inverse[list(ref.p_nk)])
    part = BasisPartition(
        b_k_mr=tuple(int(p) for p in b_pos[b_pos < k]),
        b_k_lr=tuple(int(p) for p in b_pos[b_pos >= k]),
        p_nk_mr=tuple(int(p) for p in p_pos[p_pos < k]),
        p_nk_lr=tuple(int(p) for p in p_pos[p_pos >= k]),
    )
    if len(part.b_k_lr) != len(part.p_nk_mr):
        raise PartitionInvariantError(len(part.b_k_lr), len(part.p_nk_mr))
    return part


def build_tilde_g2(ref: RefForm, lambda1: Permutation, part: BasisPartition) -> StagedForm:
    """Regroup λ₁(G_REF) as (B_K,MR | P_N-K,MR | B_K,LR | P_N-K,LR) by permutation only."""
    k, n = ref.g_ref.shape
    pivot_pos = lambda1.inverse[list(ref.b_k)]
    row_order = np.argsort(pivot_pos, kind="stable")
    positions = np.concatenate(
        [part.b_k_mr, part.p_nk_mr, part.b_k_lr, part.p_nk_lr]
    ).astype(np.intp)
    col_perm = Permutation(lambda1.forward[positions])
    matrix = ref.g_ref.take_rows(row_order).take_columns(col_perm.forward)
    b1 = len(part.b_k_mr)
    b_lr = part.b_lr
    bounds = (0, b1, k, k + b_lr, n)
    pivots = tuple(range(b1)) + tuple(range(k, k + b_lr))
    return StagedForm(
        matrix=matrix,
        col_perm=col_perm,
        lambda1=lambda1,
        group_bounds=bounds,
        stage_row_bounds=(range(0, b1), range(b1, k)),
        pivot_cols=pivots,
        layout=StagedLayout.TILDE,
    )


def _reliability_order(sf: StagedForm, reliabilities: npt.ArrayLike, cols: range | list[int]) -> list[int]:
    """Sort staged columns by decreasing reliability, ties by lower λ₁ position."""
    rel = np.asarray(reliabilities, dtype=np.float64)
    if rel.shape != (sf.n,):
        raise DimensionMismatchError(f"Expected {sf.n} reliabilities, got {rel.shape}")
    cols_arr = np.asarray(list(cols), dtype=np.intp)
    if cols_arr.size == 0:
        return []
    staged_rel = rel[sf.col_perm.forward[cols_arr]]
    staged_pos = sf.positions()[cols_arr]
    order = np.lexsort((staged_pos, -staged_rel))
    return [int(c) for c in cols_arr[order]]


def _target_order(sf: StagedForm, reliabilities: npt.ArrayLike) -> list[int]:
    """Stage-2 pivot search order: group 2 first, then every other column outside group 1."""
    preferred = _reliability_order(sf, reliabilities, sf.group(1))
    rest = [c for c in range(sf.group_bounds[1], sf.n) if c not in sf.group(1)]
    return preferred + _reliability_order(sf, reliabilities, rest)


def _regroup(
    sf: StagedForm,
    matrix: BitMatrix,
    leading: list[list[int]],
    order: list[int],
) -> tuple[BitMatrix, Permutation, tuple[int, ...]]:
    """Place group 1, then `leading` groups, then the rest of `order`."""
    head = list(sf.group(0))
    bounds = [0, len(head)]
    for cols in leading:
        head.extend(cols)
        bounds.append(len(head))
    placed = set(head)
    tail = [c for c in order if c not in placed]
    new_order = head + tail
    bounds.append(len(new_order))
    if len(new_order) != sf.n:
        raise DimensionMismatchError("Regrouped columns do not cover the matrix")
    col_perm = Permutation(sf.col_perm.forward[new_order])
    return matrix.take_columns(new_order), col_perm, tuple(bounds)


# -------------------------------
# region Stage-2 Elimination
# -------------------------------


def reduce_stage2(tg2: StagedForm, reliabilities: npt.ArrayLike) -> StagedForm:
    """Eliminate only the stage-2 rows, pivoting on the most reliable columns.

    Columns end up as (group 1 | stage-2 pivots | former stage-2 identity
    columns that did not become pivots | everything else by reliability).
    Stage-1 rows are returned bit-identical.
    """
    stage1, stage2 = tg2.stage_row_bounds
    b1 = len(stage1)
    order = _target_order(tg2, reliabilities)
    if len(stage2) == 0:
        matrix, col_perm, bounds = _regroup(tg2, tg2.matrix, [[], []], order)
        return replace(
            tg2,
            matrix=matrix,
            col_perm=col_perm,
            group_bounds=bounds,
            pivot_cols=tuple(range(b1)),
            layout=StagedLayout.TWO_STAGE,
        )
    reduced, report = eliminate_restricted(tg2.matrix, stage2, order)
    pivots = list(report.pivot_cols)
    old_identity = [tg2.pivot_cols[r] for r in stage2]
    zero_group = [c for c in old_identity if c not in set(pivots)]
    matrix, col_perm, bounds = _regroup(tg2, reduced, [pivots, zero_group], order)
    _LOGGER.debug(
        "Stage-2 elimination on %d rows: %d dependencies, %d row additions",
        len(stage2),
        len(report.dependent_cols),
        report.row_add_count,
    )
    return replace(
        tg2,
        matrix=matrix,
        col_perm=col_perm,
        group_bounds=bounds,
        pivot_cols=tuple(range(b1)) + tuple(range(b1, b1 + len(stage2))),
        layout=StagedLayout.TWO_STAGE,
        dependency_count=len(report.dependent_cols),
        stage2_row_ops=report.row_add_count,
        stage1_rows_modified=len(report.modified_rows & set(stage1)),
    )


def reduce_onepass(tg2: StagedForm, reliabilities: npt.ArrayLike) -> StagedForm:
    """Pivot on the stage-2 rows but clear every row: a fully systematic form."""
    stage1, stage2 = tg2.stage_row_bounds
    b1 = len(stage1)
    order = _target_order(tg2, reliabilities)
    reduced, report = eliminate_extended(tg2.matrix, stage2, order)
    pivots = list(report.pivot_cols)
    matrix, col_perm, bounds = _regroup(tg2, reduced, [pivots], order)
    return replace(
        tg2,
        matrix=matrix,
        col_perm=col_perm,
        group_bounds=bounds,
        stage_row_bounds=(range(0, tg2.k),),
        pivot_cols=tuple(range(tg2.k)),
        layout=StagedLayout.ONE_PASS,
        dependency_count=len(report.dependent_cols),
        stage2_row_ops=report.row_add_count,
        stage1_rows_modified=len(report.modified_rows & set(stage1)),
    )


def build_three_stage(tg2: StagedForm, reliabilities: npt.ArrayLike, alpha: int) -> StagedForm:
    """Split the stage-2 rows into |B_K,LR|-alpha and alpha rows eliminated in turn.

    Raises:
        InvalidAlphaError: alpha outside (0, |B_K,LR|).
    """
    stage1, stage2 = tg2.stage_row_bounds
    b_lr = len(stage2)
    if not 0 < alpha < b_lr:
        raise InvalidAlphaError(alpha, b_lr)
    b1 = len(stage1)
    order = _target_order(tg2, reliabilities)
    first, report_a = eliminate_restricted(tg2.matrix, stage2, order, max_pivots=b_lr - alpha)
    scanned = len(report_a.pivot_cols) + len(report_a.dependent_cols)
    stage3 = range(stage2.start + b_lr - alpha, stage2.stop)
    second, report_b = eliminate_restricted(first, stage3, order[scanned:])
    p2 = list(report_a.pivot_cols)
    p3 = list(report_b.pivot_cols)
    used = set(p2) | set(p3)
    zero_group = [tg2.pivot_cols[r] for r in stage2 if tg2.pivot_cols[r] not in used]
    matrix, col_perm, bounds = _regroup(tg2, second, [p2, p3, zero_group], order)
    split = b1 + b_lr - alpha
    return replace(
        tg2,
        matrix=matrix,
        col_perm=col_perm,
        group_bounds=bounds,
        stage_row_bounds=(stage1, range(b1, split), range(split, tg2.k)),
        pivot_cols=tuple(range(tg2.k)),
        layout=StagedLayout.THREE_STAGE,
        dependency_count=len(report_a.dependent_cols) + len(report_b.dependent_cols),
        stage2_row_ops=report_a.row_add_count + report_b.row_add_count,
        stage1_rows_modified=0,
    )


# -------------------------------
# region B_max
# -------------------------------


def build_bmax_tilde(tg2: StagedForm, reliabilities: npt.ArrayLike, b_max: int) -> StagedForm:
    """Regroup the tilde form so only the b_max least reliable pivot rows form stage 2.

    Groups become (K-B_max most reliable pivots | B_max most reliable
    non-pivots | B_max least reliable pivots | remaining non-pivots).

    Raises:
        InvalidBmaxError: b_max <= 0 or b_max >= |B_K,LR|.
    """
    b_lr = len(tg2.stage_row_bounds[1])
    if b_max <= 0:
        raise InvalidBmaxError(f"B_max must be at least 1, got {b_max}")
    if b_max >= b_lr:
        raise InvalidBmaxError(f"B_max={b_max} does not restrict |B_K,LR|={b_lr}")
    k = tg2.k
    positions = tg2.positions()
    pivots = np.asarray(tg2.pivot_cols, dtype=np.intp)
    rows_by_reliability = [int(r) for r in np.argsort(positions[pivots], kind="stable")]
    keep = rows_by_reliability[: k - b_max]
    moved = rows_by_reliability[k - b_max :]
    pivot_set = set(tg2.pivot_cols)
    non_pivots = _reliability_order(tg2, reliabilities, [c for c in range(tg2.n) if c not in pivot_set])
    new_order = (
        [tg2.pivot_cols[r] for r in keep]
        + non_pivots[:b_max]
        + [tg2.pivot_cols[r] for r in moved]
        + non_pivots[b_max:]
    )
    matrix = tg2.matrix.take_rows(keep + moved).take_columns(new_order)
    s1 = k - b_max
    return replace(
        tg2,
        matrix=matrix,
        col_perm=Permutation(tg2.col_perm.forward[new_order]),
        group_bounds=(0, s1, k, k + b_max, tg2.n),
        stage_row_bounds=(range(0, s1), range(s1, k)),
        pivot_cols=tuple(range(s1)) + tuple(range(k, k + b_max)),
        layout=StagedLayout.BMAX_TILDE,
    )


def restrict_bmax(tg2: StagedForm, reliabilities: npt.ArrayLike, b_max: int) -> StagedForm:
    """reduce_stage2 on at most b_max rows."""
    if b_max <= 0:
        raise InvalidBmaxError(f"B_max must be at least 1, got {b_max}")
    if len(tg2.stage_row_bounds[1]) <= b_max:
        return reduce_stage2(tg2, reliabilities)
    return reduce_stage2(build_bmax_tilde(tg2, reliabilities, b_max), reliabilities)


# -------------------------------
# region Cascade Encoding and Decoding
# -------------------------------


def _stage_blocks(sf: StagedForm) -> list[tuple[range, npt.NDArray[np.intp], npt.NDArray[np.uint8]]]:
    dense = sf.matrix.view()
    pivots = np.asarray(sf.pivot_cols, dtype=np.intp)
    return [(rows, pivots[rows.start : rows.stop], dense[rows.start : rows.stop]) for rows in sf.stage_row_bounds]


def encode_staged(bits: npt.ArrayLike, sf: StagedForm) -> npt.NDArray[np.uint8]:
    """Encode k basis bits through the stage cascade."""
    info = as_bits(bits)
    if info.size != sf.k:
        raise DimensionMismatchError(f"Expected {sf.k} bits, got {info.size}")
    word = np.zeros(sf.n, dtype=np.uint8)
    for rows, pivots, block in _stage_blocks(sf):
        stage_input = info[rows.start : rows.stop] ^ word[pivots]
        word ^= ((stage_input.astype(np.int64) @ block.astype(np.int64)) & 1).astype(np.uint8)
    return word


def decode_staged(sf: StagedForm, w: NoisyWord, order: int) -> DecodeOutcome:
    """Order-i reprocessing through the stage cascade.

    `w` is in original position order. Patterns range over the k basis
    coordinates in row order; the stage-1 part of each pattern is encoded by
    XOR of its rows and every later stage by its corrected input.
    """
    k = sf.k
    candidate_count(k, order)
    y = w.permuted(sf.col_perm)
    pivots = np.asarray(sf.pivot_cols, dtype=np.intp)
    base = encode_staged(y.hard[pivots], sf)
    blocks = _stage_blocks(sf)
    first_rows = blocks[0][0]
    stage1_rows = np.zeros((k, sf.n), dtype=np.uint8)
    stage1_rows[first_rows.start : first_rows.stop] = blocks[0][2]
    later = [(rows, piv, block.astype(np.float32)) for rows, piv, block in blocks[1:]]

    def deltas(block: npt.NDArray[np.intp]) -> npt.NDArray[np.uint8]:
        delta = np.bitwise_xor.reduce(stage1_rows[block], axis=1)
        if not later:
            return delta
        flips = np.zeros((block.shape[0], k), dtype=np.uint8)
        np.put_along_axis(flips, block, 1, axis=1)
        for rows, piv, dense in later:
            stage_input = flips[:, rows.start : rows.stop] ^ delta[:, piv]
            delta ^= ((stage_input.astype(np.float32) @ dense) % 2).astype(np.uint8)
        return delta

    pattern, codeword, evaluated = search_patterns(k, order, base, y, deltas)
    best = finish_candidate(k, pattern, codeword, sf.col_perm, w)
    return DecodeOutcome(
        best=best,
        candidates_evaluated=evaluated,
        dependency_count=sf.dependency_count,
        stage2_row_ops=sf.stage2_row_ops,
        stage1_rows_modified=sf.stage1_rows_modified,
    )


def as_systematic(sf: StagedForm) -> tuple[MrbSystematic, Permutation]:
    """Move the basis of a fully systematic form to the left for classic reprocessing.

    Returns the systematic generator and the map from its positions to
    original positions.
    """
    pivots = list(sf.pivot_cols)
    if not np.array_equal(sf.matrix.view()[:, pivots], np.eye(sf.k, dtype=np.uint8)):
        raise ValueError(f"{sf.layout} form is not systematic on its pivot columns")
    pivot_set = set(pivots)
    order = pivots + [c for c in range(sf.n) if c not in pivot_set]
    ms = MrbSystematic(
        g2=sf.matrix.take_columns(order),
        mrb_size=sf.k,
        dependency_count=sf.dependency_count,
    )
    return ms, Permutation(sf.col_perm.forward[order])


# -------------------------------
# region Layout Predicates
# -------------------------------


def _block(sf: StagedForm, rows: range, cols: range) -> npt.NDArray[np.uint8]:
    return sf.matrix.view()[rows.start : rows.stop, cols.start : cols.stop]


def _union(first: range, second: range) -> range:
    if first.stop != second.start:
        raise ValueError("Row ranges are not adjacent")
    return range(first.start, second.stop)


def layout_violations(sf: StagedForm) -> list[str]:
    """List every identity or zero block of the form's layout that does not hold."""
    issues: list[str] = []

    def identity(label: str, rows: range, cols: range) -> None:
        block = _block(sf, rows, cols)
        if block.shape[0] != block.shape[1]:
            issues.append(f"{label}: block {block.shape} is not square")
        elif not np.array_equal(block, np.eye(block.shape[0], dtype=np.uint8)):
            issues.append(f"{label}: not an identity")

    def zero(label: str, rows: range, cols: range) -> None:
        if _block(sf, rows, cols).any():
            issues.append(f"{label}: not zero")

    layout = sf.layout
    if layout is StagedLayout.ONE_PASS:
        if not np.array_equal(sf.matrix.view()[:, list(sf.pivot_cols)], np.eye(sf.k, dtype=np.uint8)):
            issues.append("pivot columns: not an identity")
        return issues

    if layout is StagedLayout.THREE_STAGE:
        s1, s2, s3 = sf.stage_row_bounds
        identity("stage 1 x group 1", s1, sf.group(0))
        zero("stages 2-3 x group 1", _union(s2, s3), sf.group(0))
        identity("stage 2 x group 2", s2, sf.group(1))
        zero("stage 3 x group 2", s3, sf.group(1))
        identity("stage 3 x group 3", s3, sf.group(2))
        zero("stage 1 x group 4", s1, sf.group(3))
        return issues

    s1, s2 = sf.stage_row_bounds
    identity("stage 1 x group 1", s1, sf.group(0))
    zero("stage 2 x group 1", s2, sf.group(0))
    zero("stage 1 x group 3", s1, sf.group(2))
    if layout is StagedLayout.TWO_STAGE:
        identity("stage 2 x group 2", s2, sf.group(1))
    else:
        identity("stage 2 x group 3", s2, sf.group(2))
    if layout is StagedLayout.BMAX_TILDE:
        b_max = len(s2)
        widths = [len(sf.group(i)) for i in range(4)]
        expected = [sf.k - b_max, b_max, b_max, sf.n - sf.k - b_max]
        if widths != expected:
            issues.append(f"group widths {widths} differ from {expected}")
    return issues


# -------------------------------
# region Cost Model
# -------------------------------


def _three_stage_cost(n: int, k: int, b_lr: int, alpha: int) -> int:
    return (n - (k - b_lr)) * (b_lr - alpha) * b_lr + (n - k + alpha) * alpha * alpha


def ge_cost(n: int, k: int, b_lr: int, alpha: int | None = None) -> GeCost:
    """Elimination cost of the full, two-stage and (with alpha) three-stage reductions.

    Raises:
        InvalidArgumentsError: sizes out of range, b_lr > min(k, n-k) or
            alpha outside (0, b_lr).
    """
    if not 0 < k < n:
        raise InvalidArgumentsError(f"Expected 0 < k < n, got n={n}, k={k}")
    if not 0 <= b_lr <= min(k, n - k):
        raise InvalidArgumentsError(f"b_lr must lie in [0, {min(k, n - k)}], got {b_lr}")
    if alpha is not None and not 0 < alpha < b_lr:
        raise InvalidArgumentsError(f"alpha must satisfy 0 < alpha < {b_lr}, got {alpha}")
    full = n * min(k, n - k) ** 2
    two_stage = (n - (k - b_lr)) * b_lr * b_lr
    three_stage = None if alpha is None else _three_stage_cost(n, k, b_lr, alpha)
    return GeCost(full=full, two_stage=two_stage, three_stage=three_stage, alpha=alpha)


def optimize_alpha(n: int, k: int, b_lr: int) -> int:
    """Alpha in [1, b_lr-1] minimising the three-stage cost, ties to the smaller value."""
    if b_lr < 2:
        raise InvalidArgumentsError(f"Three stages need b_lr >= 2, got {b_lr}")
    ge_cost(n, k, b_lr)
    return min(range(1, b_lr), key=lambda a: _three_stage_cost(n, k, b_lr, a))
