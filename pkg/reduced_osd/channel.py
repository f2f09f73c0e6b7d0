"""BPSK over AWGN: noisy words, reliabilities and the correlation discrepancy."""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np
import numpy.typing as npt

from .data import ChannelConfig
from .errors import DimensionMismatchError
from .gf2 import Permutation, as_bits


def noise_sigma(ebn0_db: float, rate: float) -> float:
    """Noise standard deviation for unit-energy BPSK at the given Eb/N0."""
    return math.sqrt(1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0)))


@dataclass(frozen=True)
class NoisyWord:
    """Channel output with its reliabilities and hard decisions."""

    soft: npt.NDArray[np.float64]
    reliability: npt.NDArray[np.float64]
    hard: npt.NDArray[np.uint8]

    @classmethod
    def from_soft(cls, soft: npt.ArrayLike) -> NoisyWord:
        """Derive reliabilities and hard decisions (soft >= 0 decides 0)."""
        values = np.array(soft, dtype=np.float64).reshape(-1)
        values.flags.writeable = False
        reliability = np.abs(values)
        reliability.flags.writeable = False
        hard = (values < 0).astype(np.uint8)
        hard.flags.writeable = False
        return cls(soft=values, reliability=reliability, hard=hard)

    @property
    def n(self) -> int:
        """Word length."""
        return self.soft.size

    def permuted(self, p: Permutation) -> NoisyWord:
        """Return the word with positions reordered by p (forward)."""
        return NoisyWord.from_soft(p.apply(self.soft))


def transmit(codeword: npt.ArrayLike, cfg: ChannelConfig, frame_index: int) -> NoisyWord:
    """Modulate and add noise drawn from the stream keyed by (seed, frame_index)."""
    bits = as_bits(codeword)
    rng = np.random.default_rng([cfg.seed, frame_index])
    sigma = noise_sigma(cfg.ebn0_db, cfg.rate)
    symbols = 1.0 - 2.0 * bits.astype(np.float64)
    return NoisyWord.from_soft(symbols + sigma * rng.standard_normal(bits.size))


def discrepancy(candidate: npt.ArrayLike, w: NoisyWord) -> float:
    """Sum of reliabilities where candidate disagrees with the hard decisions."""
    bits = np.asarray(candidate)
    if bits.shape != w.hard.shape:
        raise DimensionMismatchError(
            f"Candidate of length {bits.size} for a word of length {w.n}"
        )
    return float(np.sum(w.reliability[bits != w.hard]))
