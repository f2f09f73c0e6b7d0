"""Chase algorithm-2 on the least reliable positions with a BCH inner decoder."""

from __future__ import annotations

from dataclasses import dataclass
import logging

import numpy as np

from .bch import BchSpec, syndrome_decode
from .channel import NoisyWord, discrepancy
from .const import CHASE_MAX_P, DEFAULT_CHASE_P
from .data import Candidate, DecodeOutcome
from .errors import DimensionMismatchError, InvalidArgumentsError

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChaseConfig:
    """Number of least reliable positions spanned by the test patterns."""

    p: int = DEFAULT_CHASE_P

    def __post_init__(self) -> None:
        """Guard the 2^p enumeration."""
        if not 0 <= self.p <= CHASE_MAX_P:
            raise InvalidArgumentsError(f"Chase p must lie in [0, {CHASE_MAX_P}], got {self.p}")


def chase2_decode(w: NoisyWord, spec: BchSpec, cfg: ChaseConfig) -> DecodeOutcome:
    """Try all 2^p flips of the p least reliable hard decisions.

    Each test word goes through the bounded-distance decoder; the decoded
    codeword with the smallest discrepancy wins, the first one on ties. When
    every test word fails, the hard decisions come back flagged as a
    non-codeword.
    """
    if w.n != spec.n:
        raise DimensionMismatchError(f"Word of length {w.n} for {spec}")
    if cfg.p > w.n:
        raise InvalidArgumentsError(f"Chase p={cfg.p} exceeds the code length {w.n}")
    lrps = np.argsort(w.reliability, kind="stable")[: cfg.p]
    shifts = np.arange(cfg.p)
    best: Candidate | None = None
    failures = 0
    for index in range(1 << cfg.p):
        pattern = ((index >> shifts) & 1).astype(np.uint8)
        test = w.hard.copy()
        test[lrps[pattern.astype(bool)]] ^= 1
        decoded = syndrome_decode(test, spec)
        if decoded is None:
            failures += 1
            continue
        metric = discrepancy(decoded, w)
        if best is None or metric < best.metric:
            best = Candidate(
                error_pattern=pattern,
                codeword_permuted=decoded,
                codeword_original=decoded,
                metric=metric,
            )
    evaluated = 1 << cfg.p
    if best is None:
        _LOGGER.debug("Chase-2 with p=%d: all %d inner decodings failed", cfg.p, evaluated)
        return DecodeOutcome(
            best=Candidate(
                error_pattern=np.zeros(cfg.p, dtype=np.uint8),
                codeword_permuted=w.hard.copy(),
                codeword_original=w.hard.copy(),
                metric=0.0,
            ),
            candidates_evaluated=evaluated,
            is_codeword=False,
        )
    _LOGGER.debug("Chase-2 with p=%d: %d of %d inner decodings failed", cfg.p, failures, evaluated)
    return DecodeOutcome(best=best, candidates_evaluated=evaluated)
