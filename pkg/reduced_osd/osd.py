"""Classic ordered-statistics decoding: reliability order, MRB and order-i reprocessing."""

from __future__ import annotations

from collections.abc import Callable, Iterator
from dataclasses import dataclass
from functools import cache
import itertools
import logging
import math

import numpy as np
import numpy.typing as npt

from .channel import NoisyWord, discrepancy
from .code import LinearCode
from .const import MAX_CANDIDATE_COUNT, PATTERN_CACHE_LIMIT, PATTERN_CHUNK
from .data import Candidate, DecodeOutcome
from .errors import CandidateCountOverflowError, InvalidArgumentsError
from .gf2 import BitMatrix, Direction, Permutation, rref_full

_LOGGER = logging.getLogger(__name__)

type PatternDeltas = Callable[[npt.NDArray[np.intp]], npt.NDArray[np.uint8]]


@dataclass(frozen=True)
class OrderedReception:
    """A received word with its reliability order and MRB order applied."""

    lambda1: Permutation
    lambda2: Permutation
    y2: NoisyWord
    original: NoisyWord

    @property
    def col_perm(self) -> Permutation:
        """Map from doubly permuted positions to original positions."""
        return self.lambda2.compose(self.lambda1)


@dataclass(frozen=True)
class MrbSystematic:
    """Systematic generator over the most reliable basis."""

    g2: BitMatrix
    mrb_size: int
    dependency_count: int


def order_reception(w: NoisyWord) -> tuple[Permutation, NoisyWord]:
    """Sort positions by non-increasing reliability, ties by lower index."""
    lambda1 = Permutation(np.argsort(-w.reliability, kind="stable"))
    return lambda1, w.permuted(lambda1)


def build_mrb(code: LinearCode, lambda1: Permutation) -> tuple[MrbSystematic, Permutation]:
    """Full elimination of λ₁(G); returns the systematic form and λ₂."""
    g1 = code.generator.take_columns(lambda1.forward)
    g2, lambda2, report = rref_full(g1)
    return MrbSystematic(g2=g2, mrb_size=code.k, dependency_count=len(report.dependent_cols)), lambda2


def candidate_count(k: int, order: int) -> int:
    """L(i) = sum of C(k, l) for l = 0..i."""
    if not 0 <= order <= k:
        raise InvalidArgumentsError(f"Order must satisfy 0 <= order <= k={k}, got {order}")
    total = sum(math.comb(k, l) for l in range(order + 1))
    if total > MAX_CANDIDATE_COUNT:
        raise CandidateCountOverflowError(k, order)
    return total


# -------------------------------
# region Pattern Search
# -------------------------------


def _combination_chunks(k: int, weight: int) -> Iterator[npt.NDArray[np.intp]]:
    combos = itertools.combinations(range(k), weight)
    while True:
        block = list(itertools.islice(combos, PATTERN_CHUNK))
        if not block:
            return
        yield np.array(block, dtype=np.intp).reshape(len(block), weight)


@cache
def _cached_chunks(k: int, weight: int) -> tuple[npt.NDArray[np.intp], ...]:
    chunks = tuple(_combination_chunks(k, weight))
    for chunk in chunks:
        chunk.flags.writeable = False
    return chunks


def pattern_chunks(k: int, weight: int) -> Iterator[npt.NDArray[np.intp]]:
    """Weight-`weight` index sets over range(k) in lexicographic order, in blocks."""
    if weight == 0:
        yield np.zeros((1, 0), dtype=np.intp)
        return
    if math.comb(k, weight) <= PATTERN_CACHE_LIMIT:
        yield from _cached_chunks(k, weight)
    else:
        yield from _combination_chunks(k, weight)


def search_patterns(
    k: int,
    order: int,
    base: npt.NDArray[np.uint8],
    word: NoisyWord,
    deltas: PatternDeltas,
) -> tuple[tuple[int, ...], npt.NDArray[np.uint8], int]:
    """Score base + deltas(pattern) for every pattern of weight <= order.

    `deltas` maps a (P, l) block of index sets to the (P, n) codeword offsets
    they produce. The first pattern reaching the minimum discrepancy wins.

    Returns:
        The winning index set, its codeword and the number of patterns scored.
    """
    offset = base ^ word.hard
    base_metric = float(offset @ word.reliability)
    best_metric = base_metric
    best_pattern: tuple[int, ...] = ()
    best_word = base
    evaluated = 1
    for weight in range(1, order + 1):
        for block in pattern_chunks(k, weight):
            delta = deltas(block)
            metrics = (delta ^ offset) @ word.reliability
            evaluated += block.shape[0]
            idx = int(np.argmin(metrics))
            if metrics[idx] < best_metric:
                best_metric = float(metrics[idx])
                best_pattern = tuple(int(i) for i in block[idx])
                best_word = base ^ delta[idx]
    return best_pattern, best_word, evaluated


def finish_candidate(
    k: int,
    pattern: tuple[int, ...],
    codeword_permuted: npt.NDArray[np.uint8],
    col_perm: Permutation,
    original: NoisyWord,
) -> Candidate:
    """Map a winning codeword back to original order and score it there."""
    error = np.zeros(k, dtype=np.uint8)
    error[list(pattern)] = 1
    codeword_original = col_perm.apply(codeword_permuted, Direction.INVERSE)
    return Candidate(
        error_pattern=error,
        codeword_permuted=codeword_permuted,
        codeword_original=codeword_original,
        metric=discrepancy(codeword_original, original),
    )


# -------------------------------
# region Reprocessing
# -------------------------------


def reprocess(
    ms: MrbSystematic,
    y2: NoisyWord,
    order: int,
    col_perm: Permutation | None = None,
) -> DecodeOutcome:
    """Order-i reprocessing over the systematic MRB generator.

    Every pattern of weight <= order on the k basis bits flips the hard
    decisions there and is re-encoded through g2; the codeword with the
    smallest discrepancy is returned in original order through `col_perm`
    (the map from y2 positions to original positions, identity if omitted).
    """
    k = ms.mrb_size
    candidate_count(k, order)
    if col_perm is None:
        col_perm = Permutation.identity(y2.n)
    rows = ms.g2.view()
    base = ((y2.hard[:k].astype(np.int64) @ rows.astype(np.int64)) & 1).astype(np.uint8)

    def deltas(block: npt.NDArray[np.intp]) -> npt.NDArray[np.uint8]:
        return np.bitwise_xor.reduce(rows[block], axis=1)

    pattern, codeword, evaluated = search_patterns(k, order, base, y2, deltas)
    original = NoisyWord.from_soft(col_perm.apply(y2.soft, Direction.INVERSE))
    best = finish_candidate(k, pattern, codeword, col_perm, original)
    return DecodeOutcome(
        best=best,
        candidates_evaluated=evaluated,
        dependency_count=ms.dependency_count,
    )


def decode_classic(code: LinearCode, w: NoisyWord, order: int) -> DecodeOutcome:
    """Full classic OSD of one received word."""
    lambda1, y1 = order_reception(w)
    ms, lambda2 = build_mrb(code, lambda1)
    y2 = y1.permuted(lambda2)
    _LOGGER.debug("Classic OSD frame: %d dependencies", ms.dependency_count)
    return reprocess(ms, y2, order, col_perm=lambda2.compose(lambda1))
