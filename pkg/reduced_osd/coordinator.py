"""Monte-Carlo coordinator: runs frames over SNR points and writes the CSV."""

from __future__ import annotations

from collections import deque
from collections.abc import Callable, Generator, Iterator
from concurrent.futures import Future, ProcessPoolExecutor
import csv
from dataclasses import replace
from functools import lru_cache
import io
import logging
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt

from .channel import NoisyWord, discrepancy, transmit
from .code import LinearCode, load_code
from .const import CSV_COLUMNS, TRANSMIT_RANDOM
from .data import ChannelConfig, CodeSource, DecodeOutcome, FrameResult, SimConfig, SnrResult
from .decoders import Decoder, build_decoder
from .errors import ReducedOsdError

_LOGGER = logging.getLogger(__name__)

# Chunks kept in flight per worker process
PREFETCH_PER_WORKER = 2


@lru_cache(maxsize=8)
def _code_for(source: CodeSource) -> LinearCode:
    return load_code(source)


@lru_cache(maxsize=8)
def _decoder_for(cfg: SimConfig) -> Decoder:
    return build_decoder(cfg, _code_for(cfg.code))


def _decoder_config(cfg: SimConfig) -> SimConfig:
    """Strip the run-length fields so one decoder serves every SNR point."""
    return SimConfig(
        code=cfg.code,
        decoder=cfg.decoder,
        snr_points=(0.0,),
        max_frames=1,
        order=cfg.order,
        b_max=cfg.b_max,
        stages=cfg.stages,
        alpha=cfg.alpha,
        p=cfg.p,
    )


def transmitted_codeword(code: LinearCode, mode: str, seed: int, frame_index: int) -> npt.NDArray[np.uint8]:
    """Return the codeword sent in a frame: all-zero, or random info bits encoded."""
    if mode == TRANSMIT_RANDOM:
        rng = np.random.default_rng([seed, frame_index, 1])
        return code.encode(rng.integers(0, 2, size=code.k, dtype=np.uint8))
    return np.zeros(code.n, dtype=np.uint8)


def score_outcome(
    outcome: DecodeOutcome, sent: npt.NDArray[np.uint8], word: NoisyWord
) -> DecodeOutcome:
    """Flag the outcome as an ML error against the transmitted word."""
    decoded = outcome.best.codeword_original
    # an error is an ML error when the decoder found something at least as likely as the sent word
    ml_error = (
        bool(np.any(decoded != sent))
        and outcome.is_codeword
        and discrepancy(decoded, word) <= discrepancy(sent, word)
    )
    return replace(outcome, is_ml_error_vs=ml_error)


def simulate_frame(
    code: LinearCode,
    decoder: Decoder,
    channel: ChannelConfig,
    frame_index: int,
    mode: str,
) -> FrameResult:
    """Transmit, decode and score one frame."""
    sent = transmitted_codeword(code, mode, channel.seed, frame_index)
    word = transmit(sent, channel, frame_index)
    outcome = score_outcome(_call(frame_index, decoder.decode, word), sent, word)
    bit_errors = int(np.count_nonzero(outcome.best.codeword_original != sent))
    return FrameResult(
        frame_index=frame_index,
        word_error=bit_errors > 0,
        ml_error=bool(outcome.is_ml_error_vs),
        bit_errors=bit_errors,
        candidates=outcome.candidates_evaluated,
        dependencies=outcome.dependency_count,
        stage2_row_ops=outcome.stage2_row_ops,
    )


def simulate_frames(
    code: LinearCode, decoder: Decoder, cfg: SimConfig, snr_db: float, start: int, stop: int
) -> list[FrameResult]:
    """Simulate frames [start, stop) of one SNR point."""
    channel = ChannelConfig(ebn0_db=snr_db, rate=code.rate, seed=cfg.seed)
    return [simulate_frame(code, decoder, channel, i, cfg.transmit) for i in range(start, stop)]


def run_chunk(cfg: SimConfig, snr_db: float, start: int, stop: int) -> list[FrameResult]:
    """Worker entry point: load the code and decoder once per process."""
    code = _code_for(cfg.code)
    return simulate_frames(code, _decoder_for(_decoder_config(cfg)), cfg, snr_db, start, stop)


def _call(frame_index: int, func: Callable[..., Any], *args: Any) -> Any:
    """Execute a decoder call and tag failures with the frame index."""
    try:
        return func(*args)
    except ReducedOsdError as err:
        _LOGGER.debug("_call ReducedOsdError in frame %d: %s", frame_index, err)
        raise
    except Exception as err:
        _LOGGER.debug("_call Exception in frame %d: %s", frame_index, repr(err))
        raise ReducedOsdError(f"Decoding frame {frame_index} failed: {err!r}") from err


class SimulationCoordinator:
    """Runs a SimConfig point by point with a deterministic frame order."""

    # -------------------------------
    # region Setup
    # -------------------------------

    def __init__(self, cfg: SimConfig, code: LinearCode | None = None) -> None:
        """Load the code and check the decoder can be built for it."""
        _LOGGER.debug("Startup coordinator with %s", cfg)
        self.cfg = cfg
        self.code = code if code is not None else _code_for(cfg.code)
        # raises ConfigError before any worker starts
        self.decoder = build_decoder(cfg, self.code)

    def _chunks(self) -> Iterator[tuple[int, int]]:
        size = self.cfg.chunk_size
        for start in range(0, self.cfg.max_frames, size):
            yield start, min(start + size, self.cfg.max_frames)

    # -------------------------------
    # region Run
    # -------------------------------

    def run_point(self, snr_db: float) -> SnrResult:
        """Simulate one SNR point until max_frames or max_word_errors.

        Frames are merged in index order so the counters only depend on the
        configuration and seed, not on how many workers ran them.
        """
        _LOGGER.info("Starting %s at %.3g dB", self.cfg.decoder, snr_db)
        result = SnrResult(snr_db=snr_db, n=self.code.n)
        if self.cfg.workers == 1:
            batches: Generator[list[FrameResult]] = (
                simulate_frames(self.code, self.decoder, self.cfg, snr_db, start, stop)
                for start, stop in self._chunks()
            )
            self._merge(result, batches)
        else:
            with ProcessPoolExecutor(max_workers=self.cfg.workers) as pool:
                self._merge(result, self._parallel(pool, snr_db))
        _LOGGER.info(
            "Finished %.3g dB: %d frames, %d word errors, %d ML errors",
            snr_db,
            result.frames,
            result.word_errors,
            result.ml_errors,
        )
        return result

    def _parallel(self, pool: ProcessPoolExecutor, snr_db: float) -> Generator[list[FrameResult]]:
        pending: deque[Future[list[FrameResult]]] = deque()
        chunks = self._chunks()
        window = self.cfg.workers * PREFETCH_PER_WORKER
        try:
            for start, stop in chunks:
                pending.append(pool.submit(run_chunk, self.cfg, snr_db, start, stop))
                if len(pending) >= window:
                    yield pending.popleft().result()
            while pending:
                yield pending.popleft().result()
        finally:
            for future in pending:
                future.cancel()

    def _merge(self, result: SnrResult, batches: Generator[list[FrameResult]]) -> None:
        for batch in batches:
            for frame in batch:
                result.add(frame)
                if result.word_errors >= self.cfg.max_word_errors:
                    _LOGGER.debug("Early stop after %d frames", result.frames)
                    batches.close()
                    return

    def run_sweep(self, out: Path | None = None) -> list[SnrResult]:
        """Run every SNR point and write the CSV when `out` is given.

        Raises:
            OSError: the CSV cannot be written.
        """
        results = [self.run_point(snr) for snr in self.cfg.snr_points]
        if out is not None:
            write_csv(results, out)
        return results


def run_point(cfg: SimConfig, snr_db: float) -> SnrResult:
    """Simulate one SNR point of a configuration."""
    return SimulationCoordinator(cfg).run_point(snr_db)


def run_sweep(cfg: SimConfig, out: Path | None = None) -> list[SnrResult]:
    """Simulate all SNR points of a configuration."""
    return SimulationCoordinator(cfg).run_sweep(out)


# -------------------------------
# region CSV
# -------------------------------


def csv_row(result: SnrResult) -> list[str]:
    """Format one SNR point with fixed precision."""
    return [
        f"{result.snr_db:g}",
        str(result.frames),
        str(result.word_errors),
        str(result.ml_errors),
        f"{result.wer:.6e}",
        f"{result.mld_lb_wer:.6e}",
        f"{result.ber:.6e}",
        f"{result.mean_candidates:.4f}",
        f"{result.mean_dependencies:.4f}",
        f"{result.mean_stage2_rowops:.4f}",
    ]


def format_csv(results: list[SnrResult]) -> str:
    """Return the CSV text: header row plus one row per SNR point."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    writer.writerows(csv_row(result) for result in results)
    return buffer.getvalue()


def write_csv(results: list[SnrResult], out: Path) -> None:
    """Write the CSV file."""
    out.write_text(format_csv(results), encoding="ascii")
    _LOGGER.info("Wrote %d SNR points to %s", len(results), out)
