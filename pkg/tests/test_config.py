"""Tests for option validation."""

from __future__ import annotations

from pathlib import Path

import pytest

from reduced_osd.config import parse_cost_options, parse_inspect_options, parse_sim_config
from reduced_osd.const import (
    ALPHA_AUTO,
    CONF_ALPHA,
    CONF_BLR,
    CONF_BMAX,
    CONF_CODE,
    CONF_DECODER,
    CONF_FRAMES,
    CONF_K,
    CONF_N,
    CONF_ORDER,
    CONF_OUT,
    CONF_P,
    CONF_SAMPLES,
    CONF_SEED,
    CONF_SNR,
    CONF_STAGES,
    CONF_TRANSMIT,
    DEFAULT_FRAMES,
    DEFAULT_MAX_ERRORS,
    DEFAULT_SEED,
)
from reduced_osd.data import CodeSource
from reduced_osd.errors import ConfigError


def _sim(**options):
    return {CONF_CODE: "bch:7,2", CONF_SNR: "3.0,3.5", **options}


def test_parse_sim_defaults():
    """Test a minimal sim request gets the documented defaults."""
    cfg, out = parse_sim_config(_sim())
    assert cfg.code == CodeSource(m=7, t=2)
    assert cfg.decoder == "staged"
    assert cfg.snr_points == (3.0, 3.5)
    assert cfg.order == 2
    assert cfg.max_frames == DEFAULT_FRAMES
    assert cfg.max_word_errors == DEFAULT_MAX_ERRORS
    assert cfg.seed == DEFAULT_SEED
    assert cfg.transmit == "zero"
    assert cfg.alpha is None
    assert out is None


def test_parse_sim_coerces_strings():
    """Test command-line strings are coerced to their types."""
    cfg, out = parse_sim_config(
        _sim(**{CONF_ORDER: "3", CONF_BMAX: "12", CONF_FRAMES: "500", CONF_OUT: "wer.csv"})
    )
    assert cfg.order == 3
    assert cfg.b_max == 12
    assert cfg.max_frames == 500
    assert out == Path("wer.csv")


def test_parse_sim_file_code():
    """Test a file source keeps its path."""
    cfg, _ = parse_sim_config(_sim(**{CONF_CODE: "file:codes/g.txt"}))
    assert cfg.code == CodeSource(path=Path("codes/g.txt"))
    assert str(cfg.code) == "file:codes/g.txt"


def test_parse_sim_three_stage_alpha():
    """Test three stages default to the cost-optimal split."""
    cfg, _ = parse_sim_config(_sim(**{CONF_STAGES: "3"}))
    assert cfg.alpha == ALPHA_AUTO
    assert cfg.alpha_is_auto
    cfg, _ = parse_sim_config(_sim(**{CONF_STAGES: "3", CONF_ALPHA: "4"}))
    assert cfg.alpha == 4


def test_parse_sim_chase():
    """Test the chase decoder takes p."""
    cfg, _ = parse_sim_config(_sim(**{CONF_DECODER: "chase", CONF_P: "9"}))
    assert cfg.p == 9


@pytest.mark.parametrize(
    ("options", "match"),
    [
        ({CONF_CODE: "hamming:7"}, "bch:m,t"),
        ({CONF_CODE: "bch:2,1"}, "degree"),
        ({CONF_CODE: "bch:7,0"}, "at least 1"),
        ({CONF_SNR: ""}, "SNR"),
        ({CONF_SNR: "1,two"}, "numbers"),
        ({CONF_DECODER: "viterbi"}, "decoder"),
        ({CONF_ORDER: "-1"}, "order"),
        ({CONF_STAGES: "4"}, "stages"),
        ({CONF_FRAMES: "0"}, "frames"),
        ({CONF_SEED: "-5"}, "seed"),
        ({CONF_TRANSMIT: "ones"}, "transmit"),
        ({CONF_STAGES: "3", CONF_BMAX: "6"}, "cannot be combined"),
        ({CONF_ALPHA: "3"}, "--alpha"),
        ({CONF_DECODER: "classic", CONF_BMAX: "6"}, "--bmax"),
        ({CONF_P: "4"}, "--p"),
        ({CONF_DECODER: "chase", CONF_CODE: "file:g.txt"}, "BCH"),
        ({CONF_DECODER: "chase", CONF_P: "21"}, "p"),
        ({CONF_DECODER: "chase", CONF_CODE: "bch:3,1", CONF_P: "8"}, "exceeds"),
    ],
)
def test_parse_sim_errors(options, match):
    """Test invalid or conflicting options raise ConfigError."""
    with pytest.raises(ConfigError, match=match):
        parse_sim_config(_sim(**options))


def test_parse_sim_missing_required():
    """Test code and snr are required."""
    with pytest.raises(ConfigError):
        parse_sim_config({CONF_SNR: "1.0"})
    with pytest.raises(ConfigError):
        parse_sim_config({CONF_CODE: "bch:4,2"})


def test_parse_cost_options():
    """Test the cost options and alpha spellings."""
    opts = parse_cost_options({CONF_N: "256", CONF_K: "128", CONF_BLR: "64"})
    assert (opts[CONF_N], opts[CONF_K], opts[CONF_BLR], opts[CONF_ALPHA]) == (256, 128, 64, None)
    opts = parse_cost_options({CONF_N: "256", CONF_K: "128", CONF_BLR: "64", CONF_ALPHA: "auto"})
    assert opts[CONF_ALPHA] == ALPHA_AUTO
    with pytest.raises(ConfigError):
        parse_cost_options({CONF_N: "256", CONF_K: "128", CONF_BLR: "-1"})


def test_parse_inspect_options():
    """Test inspect defaults and coercion."""
    opts = parse_inspect_options({CONF_CODE: "bch:4,2", CONF_SAMPLES: "50"})
    assert opts[CONF_CODE] == CodeSource(m=4, t=2)
    assert opts[CONF_SAMPLES] == 50
    assert opts[CONF_SEED] == DEFAULT_SEED
