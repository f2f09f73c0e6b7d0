"""Holds the values passed between the decoders and the simulation harness."""

from __future__ import annotations

from dataclasses import dataclass
import math
from pathlib import Path

import numpy as np
import numpy.typing as npt

from .const import (
    ALPHA_AUTO,
    DEFAULT_CHUNK_SIZE,
    DEFAULT_MAX_ERRORS,
    DEFAULT_ORDER,
    DEFAULT_SEED,
    DEFAULT_STAGES,
    DEFAULT_WORKERS,
    TRANSMIT_ZERO,
)
from .errors import ConfigError, ReducedOsdError


@dataclass(frozen=True)
class Candidate:
    """A decoded codeword and how it was reached."""

    error_pattern: npt.NDArray[np.uint8]
    codeword_permuted: npt.NDArray[np.uint8]
    codeword_original: npt.NDArray[np.uint8]
    metric: float


@dataclass(frozen=True)
class DecodeOutcome:
    """Result of decoding one frame."""

    best: Candidate
    candidates_evaluated: int
    dependency_count: int = 0
    stage2_row_ops: int = 0
    stage1_rows_modified: int = 0
    # False when a bounded-distance decoder gave up and best holds the hard decisions
    is_codeword: bool = True
    is_ml_error_vs: bool | None = None


@dataclass(frozen=True)
class ChannelConfig:
    """BPSK/AWGN operating point."""

    ebn0_db: float
    rate: float
    seed: int

    def __post_init__(self) -> None:
        """Validate the operating point."""
        if not math.isfinite(self.ebn0_db):
            raise ConfigError(f"Eb/N0 must be finite, got {self.ebn0_db}")
        if not 0 < self.rate < 1:
            raise ConfigError(f"Code rate must lie in (0, 1), got {self.rate}")


@dataclass(frozen=True)
class CodeSource:
    """Where a code comes from: a BCH construction or a generator-matrix file."""

    m: int | None = None
    t: int | None = None
    path: Path | None = None

    @property
    def is_bch(self) -> bool:
        """Return True for a BCH construction."""
        return self.m is not None

    def __str__(self) -> str:
        """Return the command-line spelling."""
        if self.is_bch:
            return f"bch:{self.m},{self.t}"
        return f"file:{self.path}"


@dataclass(frozen=True)
class SimConfig:
    """A validated simulation request."""

    code: CodeSource
    decoder: str
    snr_points: tuple[float, ...]
    max_frames: int
    order: int = DEFAULT_ORDER
    b_max: int | None = None
    stages: int = DEFAULT_STAGES
    alpha: int | str | None = None
    p: int | None = None
    max_word_errors: int = DEFAULT_MAX_ERRORS
    seed: int = DEFAULT_SEED
    workers: int = DEFAULT_WORKERS
    transmit: str = TRANSMIT_ZERO
    chunk_size: int = DEFAULT_CHUNK_SIZE

    def __post_init__(self) -> None:
        """Validate the run-length and worker settings."""
        if not self.snr_points:
            raise ConfigError("At least one SNR point is required")
        for name in ("max_frames", "max_word_errors", "workers", "chunk_size"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be at least 1, got {getattr(self, name)}")

    @property
    def alpha_is_auto(self) -> bool:
        """Return True when alpha is chosen per frame by the cost model."""
        return self.alpha == ALPHA_AUTO


@dataclass(frozen=True)
class FrameResult:
    """Counters contributed by one decoded frame."""

    frame_index: int
    word_error: bool
    ml_error: bool
    bit_errors: int
    candidates: int
    dependencies: int
    stage2_row_ops: int


@dataclass
class SnrResult:
    """Accumulated counters for one SNR point."""

    snr_db: float
    n: int
    frames: int = 0
    word_errors: int = 0
    bit_errors: int = 0
    ml_errors: int = 0
    candidates_total: int = 0
    dependencies_total: int = 0
    stage2_row_ops_total: int = 0

    def add(self, frame: FrameResult) -> None:
        """Merge the next frame's counters; frames must arrive in index order."""
        if frame.frame_index != self.frames:
            raise ReducedOsdError(
                f"Frame {frame.frame_index} merged out of order, expected {self.frames}"
            )
        self.frames += 1
        self.word_errors += int(frame.word_error)
        self.ml_errors += int(frame.ml_error)
        self.bit_errors += frame.bit_errors
        self.candidates_total += frame.candidates
        self.dependencies_total += frame.dependencies
        self.stage2_row_ops_total += frame.stage2_row_ops

    def _per_frame(self, total: int) -> float:
        return total / self.frames if self.frames else 0.0

    @property
    def wer(self) -> float:
        """Word error rate."""
        return self._per_frame(self.word_errors)

    @property
    def mld_lb_wer(self) -> float:
        """Lower bound on the ML word error rate."""
        return self._per_frame(self.ml_errors)

    @property
    def ber(self) -> float:
        """Bit error rate over all transmitted code bits."""
        return self.bit_errors / (self.frames * self.n) if self.frames else 0.0

    @property
    def mean_candidates(self) -> float:
        """Mean number of candidates evaluated per frame."""
        return self._per_frame(self.candidates_total)

    @property
    def mean_dependencies(self) -> float:
        """Mean number of dependency occurrences per frame."""
        return self._per_frame(self.dependencies_total)

    @property
    def mean_stage2_rowops(self) -> float:
        """Mean number of stage-2 row additions per frame."""
        return self._per_frame(self.stage2_row_ops_total)

    def wer_interval(self, z: float = 1.96) -> tuple[float, float]:
        """Return the Wilson score interval of the word error rate."""
        if not self.frames:
            return (0.0, 1.0)
        n = self.frames
        p_hat = self.word_errors / n
        denom = 1 + z * z / n
        centre = (p_hat + z * z / (2 * n)) / denom
        half = z * math.sqrt(p_hat * (1 - p_hat) / n + z * z / (4 * n * n)) / denom
        return (max(0.0, centre - half), min(1.0, centre + half))


@dataclass(frozen=True)
class GeCost:
    """Gaussian-elimination cost of the full, two-stage and three-stage reductions."""

    full: int
    two_stage: int
    three_stage: int | None = None
    alpha: int | None = None
