"""Validation of the sim, cost and inspect options."""

from __future__ import annotations

import logging
from pathlib import Path
import re
from typing import Any

import voluptuous as vol

from .const import (
    ALPHA_AUTO,
    CHASE_MAX_P,
    CONF_ALPHA,
    CONF_BLR,
    CONF_BMAX,
    CONF_CHUNK_SIZE,
    CONF_CODE,
    CONF_DECODER,
    CONF_FRAMES,
    CONF_K,
    CONF_MAX_ERRORS,
    CONF_N,
    CONF_ORDER,
    CONF_OUT,
    CONF_P,
    CONF_SAMPLES,
    CONF_SEED,
    CONF_SNR,
    CONF_STAGES,
    CONF_TRANSMIT,
    CONF_WORKERS,
    DECODER_CHASE,
    DECODER_STAGED,
    DECODERS,
    DEFAULT_CHUNK_SIZE,
    DEFAULT_CHASE_P,
    DEFAULT_DECODER,
    DEFAULT_FRAMES,
    DEFAULT_INSPECT_SAMPLES,
    DEFAULT_MAX_ERRORS,
    DEFAULT_ORDER,
    DEFAULT_SEED,
    DEFAULT_STAGES,
    DEFAULT_WORKERS,
    MAX_FIELD_DEGREE,
    MIN_FIELD_DEGREE,
    TRANSMIT_RANDOM,
    TRANSMIT_ZERO,
)
from .data import CodeSource, SimConfig
from .errors import ConfigError

_LOGGER = logging.getLogger(__name__)

_BCH_SOURCE = re.compile(r"bch:(\d+),(\d+)")
_FILE_SOURCE = re.compile(r"file:(.+)")


def _code_source(value: Any) -> CodeSource:
    """Parse `bch:m,t` or `file:PATH`."""
    if isinstance(value, CodeSource):
        return value
    text = str(value).strip()
    if match := _BCH_SOURCE.fullmatch(text):
        m, t = int(match.group(1)), int(match.group(2))
        if not MIN_FIELD_DEGREE <= m <= MAX_FIELD_DEGREE:
            raise vol.Invalid(f"BCH degree m must lie in [{MIN_FIELD_DEGREE}, {MAX_FIELD_DEGREE}]")
        if t < 1:
            raise vol.Invalid("BCH capability t must be at least 1")
        return CodeSource(m=m, t=t)
    if match := _FILE_SOURCE.fullmatch(text):
        return CodeSource(path=Path(match.group(1)))
    raise vol.Invalid(f"Code must be 'bch:m,t' or 'file:PATH', got {text!r}")


def _snr_points(value: Any) -> tuple[float, ...]:
    """Parse a comma-separated list (or a sequence) of Eb/N0 values in dB."""
    items = value.split(",") if isinstance(value, str) else list(value)
    try:
        points = tuple(float(item) for item in items if str(item).strip())
    except ValueError as err:
        raise vol.Invalid(f"SNR list must hold numbers, got {value!r}") from err
    if not points:
        raise vol.Invalid("At least one SNR point is required")
    return points


_POSITIVE = vol.All(vol.Coerce(int), vol.Range(min=1))

SIM_SCHEMA = vol.Schema(
    {
        vol.Required(CONF_CODE): _code_source,
        vol.Optional(CONF_DECODER, default=DEFAULT_DECODER): vol.In(DECODERS),
        vol.Optional(CONF_ORDER, default=DEFAULT_ORDER): vol.All(vol.Coerce(int), vol.Range(min=0)),
        vol.Optional(CONF_BMAX, default=None): vol.Any(None, _POSITIVE),
        vol.Optional(CONF_STAGES, default=DEFAULT_STAGES): vol.All(vol.Coerce(int), vol.In([2, 3])),
        vol.Optional(CONF_ALPHA, default=None): vol.Any(None, ALPHA_AUTO, _POSITIVE),
        vol.Optional(CONF_P, default=None): vol.Any(
            None, vol.All(vol.Coerce(int), vol.Range(min=0, max=CHASE_MAX_P))
        ),
        vol.Required(CONF_SNR): _snr_points,
        vol.Optional(CONF_FRAMES, default=DEFAULT_FRAMES): _POSITIVE,
        vol.Optional(CONF_MAX_ERRORS, default=DEFAULT_MAX_ERRORS): _POSITIVE,
        vol.Optional(CONF_SEED, default=DEFAULT_SEED): vol.All(
            vol.Coerce(int), vol.Range(min=0, max=2**64 - 1)
        ),
        vol.Optional(CONF_WORKERS, default=DEFAULT_WORKERS): _POSITIVE,
        vol.Optional(CONF_OUT, default=None): vol.Any(None, vol.Coerce(Path)),
        vol.Optional(CONF_TRANSMIT, default=TRANSMIT_ZERO): vol.In([TRANSMIT_ZERO, TRANSMIT_RANDOM]),
        vol.Optional(CONF_CHUNK_SIZE, default=DEFAULT_CHUNK_SIZE): _POSITIVE,
    }
)

COST_SCHEMA = vol.Schema(
    {
        vol.Required(CONF_N): _POSITIVE,
        vol.Required(CONF_K): _POSITIVE,
        vol.Required(CONF_BLR): vol.All(vol.Coerce(int), vol.Range(min=0)),
        vol.Optional(CONF_ALPHA, default=None): vol.Any(None, ALPHA_AUTO, _POSITIVE),
    }
)

INSPECT_SCHEMA = vol.Schema(
    {
        vol.Required(CONF_CODE): _code_source,
        vol.Optional(CONF_SAMPLES, default=DEFAULT_INSPECT_SAMPLES): _POSITIVE,
        vol.Optional(CONF_SEED, default=DEFAULT_SEED): vol.All(
            vol.Coerce(int), vol.Range(min=0, max=2**64 - 1)
        ),
    }
)


def _validate(schema: vol.Schema, data: dict[str, Any]) -> dict[str, Any]:
    try:
        return schema(data)
    except vol.Invalid as err:
        raise ConfigError(str(err)) from err


def parse_sim_config(data: dict[str, Any]) -> tuple[SimConfig, Path | None]:
    """Validate sim options; returns the config and the CSV path (if any).

    Raises:
        ConfigError: invalid or conflicting options.
    """
    opts = _validate(SIM_SCHEMA, data)
    decoder = opts[CONF_DECODER]
    if opts[CONF_STAGES] == 3 and opts[CONF_BMAX] is not None:
        raise ConfigError("--stages 3 cannot be combined with --bmax")
    if opts[CONF_ALPHA] is not None and (decoder != DECODER_STAGED or opts[CONF_STAGES] != 3):
        raise ConfigError("--alpha only applies to the staged decoder with --stages 3")
    if opts[CONF_BMAX] is not None and decoder != DECODER_STAGED:
        raise ConfigError("--bmax only applies to the staged decoder")
    if opts[CONF_P] is not None and decoder != DECODER_CHASE:
        raise ConfigError("--p only applies to the chase decoder")
    if decoder == DECODER_CHASE and not opts[CONF_CODE].is_bch:
        raise ConfigError("The chase decoder needs a BCH code")
    if decoder == DECODER_CHASE:
        p = DEFAULT_CHASE_P if opts[CONF_P] is None else opts[CONF_P]
        n = (1 << opts[CONF_CODE].m) - 1
        if p > n:
            raise ConfigError(f"--p {p} exceeds the code length {n}")
    alpha = opts[CONF_ALPHA]
    if opts[CONF_STAGES] == 3 and alpha is None:
        alpha = ALPHA_AUTO
    cfg = SimConfig(
        code=opts[CONF_CODE],
        decoder=decoder,
        snr_points=opts[CONF_SNR],
        max_frames=opts[CONF_FRAMES],
        order=opts[CONF_ORDER],
        b_max=opts[CONF_BMAX],
        stages=opts[CONF_STAGES],
        alpha=alpha,
        p=opts[CONF_P],
        max_word_errors=opts[CONF_MAX_ERRORS],
        seed=opts[CONF_SEED],
        workers=opts[CONF_WORKERS],
        transmit=opts[CONF_TRANSMIT],
        chunk_size=opts[CONF_CHUNK_SIZE],
    )
    _LOGGER.debug("Validated simulation config %s", cfg)
    return cfg, opts[CONF_OUT]


def parse_cost_options(data: dict[str, Any]) -> dict[str, Any]:
    """Validate cost options."""
    return _validate(COST_SCHEMA, data)


def parse_inspect_options(data: dict[str, Any]) -> dict[str, Any]:
    """Validate inspect options."""
    return _validate(INSPECT_SCHEMA, data)
