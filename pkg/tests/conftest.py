"""Common test fixtures for reduced-GE OSD tests."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from reduced_osd.bch import build_bch
from reduced_osd.channel import NoisyWord, transmit
from reduced_osd.code import LinearCode, code_from_generator, load_code
from reduced_osd.data import ChannelConfig
from reduced_osd.gf2 import BitMatrix


def random_code(n: int, k: int, seed: int) -> LinearCode:
    """Return a full-rank random code whose pivots are not the leading columns."""
    rng = np.random.default_rng(seed)
    parity = rng.integers(0, 2, size=(k, n - k), dtype=np.uint8)
    g = np.hstack([np.eye(k, dtype=np.uint8), parity])
    for _ in range(3 * k):
        a, b = rng.choice(k, size=2, replace=False)
        g[a] ^= g[b]
    g = g[:, rng.permutation(n)]
    return code_from_generator(BitMatrix.from_array(g), name=f"random({n},{k})")


def noisy_frames(code: LinearCode, ebn0_db: float, count: int, seed: int = 7) -> list[NoisyWord]:
    """All-zero codeword through the channel, one word per frame index."""
    channel = ChannelConfig(ebn0_db=ebn0_db, rate=code.rate, seed=seed)
    zero = np.zeros(code.n, dtype=np.uint8)
    return [transmit(zero, channel, i) for i in range(count)]


def write_generator(path: Path, code: LinearCode) -> Path:
    """Write a code's generator matrix in the `N K` text format."""
    rows = ["".join(str(b) for b in row) for row in code.generator.view()]
    path.write_text("\n".join([f"{code.n} {code.k}", *rows]) + "\n", encoding="ascii")
    return path


@pytest.fixture(name="bch15_7")
def bch15_7_fixture() -> LinearCode:
    """Return the (15,7) double-error-correcting BCH code."""
    return load_code(build_bch(4, 2))


@pytest.fixture(name="bch127_113")
def bch127_113_fixture() -> LinearCode:
    """Return the (127,113) BCH code."""
    return load_code(build_bch(7, 2))


@pytest.fixture(name="code16_8")
def code16_8_fixture() -> LinearCode:
    """Return a random (16,8) code."""
    return random_code(16, 8, seed=11)


@pytest.fixture(name="code24_12")
def code24_12_fixture() -> LinearCode:
    """Return a random (24,12) code."""
    return random_code(24, 12, seed=5)


@pytest.fixture(name="rng")
def rng_fixture() -> np.random.Generator:
    """Return a seeded generator."""
    return np.random.default_rng(1234)
