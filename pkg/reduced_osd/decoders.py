"""Per-frame decoders selectable from a simulation configuration."""

from __future__ import annotations

from abc import ABC, abstractmethod
import logging

import numpy as np

from .channel import NoisyWord, discrepancy
from .chase import ChaseConfig, chase2_decode
from .code import LinearCode
from .const import (
    DECODER_CHASE,
    DECODER_CLASSIC,
    DECODER_ML,
    DECODER_ONEPASS,
    DECODER_STAGED,
    DEFAULT_CHASE_P,
    ML_MAX_K,
)
from .data import Candidate, DecodeOutcome, SimConfig
from .errors import ConfigError
from .osd import candidate_count, decode_classic, order_reception, reprocess
from .staged import (
    StagedForm,
    StagePlan,
    as_systematic,
    build_three_stage,
    build_tilde_g2,
    decode_staged,
    optimize_alpha,
    partition_basis,
    reduce_onepass,
    reduce_stage2,
    restrict_bmax,
)

_LOGGER = logging.getLogger(__name__)


class Decoder(ABC):
    """Decodes one received word of a fixed code."""

    name: str

    def __init__(self, code: LinearCode) -> None:
        """Bind the decoder to its code."""
        self.code = code

    @abstractmethod
    def decode(self, w: NoisyWord) -> DecodeOutcome:
        """Decode a received word given in original position order."""


class ClassicDecoder(Decoder):
    """OSD with a full elimination per frame."""

    name = DECODER_CLASSIC

    def __init__(self, code: LinearCode, order: int) -> None:
        """Initialize ClassicDecoder."""
        super().__init__(code)
        candidate_count(code.k, order)
        self.order = order

    def decode(self, w: NoisyWord) -> DecodeOutcome:
        """Decode with classic OSD."""
        return decode_classic(self.code, w, self.order)


class StagedDecoder(Decoder):
    """OSD over G_REF with reduced elimination of the stage-2 rows."""

    name = DECODER_STAGED

    def __init__(self, code: LinearCode, order: int, plan: StagePlan, alpha_auto: bool = False) -> None:
        """Initialize StagedDecoder."""
        super().__init__(code)
        candidate_count(code.k, order)
        if plan.stages == 3 and plan.b_max is not None:
            raise ConfigError("Three-stage decoding cannot be combined with B_max")
        self.order = order
        self.plan = plan
        self.alpha_auto = alpha_auto or (plan.stages == 3 and plan.alpha is None)
        # computed once per code
        self.ref = code.ref

    def stage(self, w: NoisyWord) -> StagedForm:
        """Build this frame's staged generator."""
        lambda1, _ = order_reception(w)
        part = partition_basis(self.ref, lambda1, self.code.k)
        tg2 = build_tilde_g2(self.ref, lambda1, part)
        rel = w.reliability
        if self.plan.stages == 3:
            b_lr = part.b_lr
            alpha = self.plan.alpha
            if self.alpha_auto and b_lr >= 2:
                alpha = optimize_alpha(self.code.n, self.code.k, b_lr)
            if alpha is not None and 0 < alpha < b_lr:
                return build_three_stage(tg2, rel, alpha)
            _LOGGER.debug("|B_K,LR|=%d too small for three stages (alpha=%s), using two", b_lr, alpha)
            return reduce_stage2(tg2, rel)
        if self.plan.b_max is not None:
            return restrict_bmax(tg2, rel, self.plan.b_max)
        return reduce_stage2(tg2, rel)

    def decode(self, w: NoisyWord) -> DecodeOutcome:
        """Decode with the stage cascade."""
        return decode_staged(self.stage(w), w, self.order)


class OnePassDecoder(StagedDecoder):
    """Reduced elimination over all K rows, then classic reprocessing."""

    name = DECODER_ONEPASS

    def __init__(self, code: LinearCode, order: int) -> None:
        """Initialize OnePassDecoder."""
        super().__init__(code, order, StagePlan())

    def stage(self, w: NoisyWord) -> StagedForm:
        """Build this frame's fully systematic form."""
        lambda1, _ = order_reception(w)
        part = partition_basis(self.ref, lambda1, self.code.k)
        return reduce_onepass(build_tilde_g2(self.ref, lambda1, part), w.reliability)

    def decode(self, w: NoisyWord) -> DecodeOutcome:
        """Decode with classic reprocessing of the one-pass form."""
        sf = self.stage(w)
        ms, perm = as_systematic(sf)
        outcome = reprocess(ms, w.permuted(perm), self.order, col_perm=perm)
        return DecodeOutcome(
            best=outcome.best,
            candidates_evaluated=outcome.candidates_evaluated,
            dependency_count=sf.dependency_count,
            stage2_row_ops=sf.stage2_row_ops,
            stage1_rows_modified=sf.stage1_rows_modified,
        )


class ChaseDecoder(Decoder):
    """Chase-2 with the BCH bounded-distance decoder."""

    name = DECODER_CHASE

    def __init__(self, code: LinearCode, p: int = DEFAULT_CHASE_P) -> None:
        """Initialize ChaseDecoder."""
        super().__init__(code)
        if code.bch is None:
            raise ConfigError("Chase decoding needs a BCH code (--code bch:m,t)")
        if p > code.n:
            raise ConfigError(f"Chase p={p} exceeds the code length {code.n}")
        self.cfg = ChaseConfig(p)

    def decode(self, w: NoisyWord) -> DecodeOutcome:
        """Decode with Chase-2."""
        return chase2_decode(w, self.code.bch, self.cfg)


class MlDecoder(Decoder):
    """Exhaustive maximum-likelihood decoding over the whole codebook."""

    name = DECODER_ML

    def __init__(self, code: LinearCode) -> None:
        """Initialize MlDecoder."""
        super().__init__(code)
        if code.k > ML_MAX_K:
            raise ConfigError(f"ML decoding enumerates 2^k codewords, k={code.k} exceeds {ML_MAX_K}")

    def decode(self, w: NoisyWord) -> DecodeOutcome:
        """Decode by brute force."""
        return ml_decode(self.code, w)


def ml_decode(code: LinearCode, w: NoisyWord) -> DecodeOutcome:
    """Minimum discrepancy over all codewords, ties to the smallest information index."""
    words = code.codewords
    metrics = (words ^ w.hard) @ w.reliability
    lowest = float(metrics.min())
    # rescore near-ties exactly so the winner matches discrepancy()
    close = np.flatnonzero(metrics <= lowest + 1e-9 * max(1.0, abs(lowest)))
    scored = [(discrepancy(words[i], w), int(i)) for i in close]
    metric, index = min(scored)
    info = np.array([(index >> (code.k - 1 - b)) & 1 for b in range(code.k)], dtype=np.uint8)
    codeword = words[index].copy()
    return DecodeOutcome(
        best=Candidate(
            error_pattern=info,
            codeword_permuted=codeword,
            codeword_original=codeword,
            metric=metric,
        ),
        candidates_evaluated=1 << code.k,
    )


def build_decoder(cfg: SimConfig, code: LinearCode) -> Decoder:
    """Instantiate the decoder a configuration asks for."""
    if cfg.decoder == DECODER_CLASSIC:
        return ClassicDecoder(code, cfg.order)
    if cfg.decoder == DECODER_STAGED:
        alpha = None if cfg.alpha_is_auto else cfg.alpha
        plan = StagePlan(stages=cfg.stages, alpha=alpha, b_max=cfg.b_max)
        return StagedDecoder(code, cfg.order, plan, alpha_auto=cfg.alpha_is_auto)
    if cfg.decoder == DECODER_ONEPASS:
        return OnePassDecoder(code, cfg.order)
    if cfg.decoder == DECODER_CHASE:
        return ChaseDecoder(code, DEFAULT_CHASE_P if cfg.p is None else cfg.p)
    if cfg.decoder == DECODER_ML:
        return MlDecoder(code)
    raise ConfigError(f"Unknown decoder {cfg.decoder!r}")
