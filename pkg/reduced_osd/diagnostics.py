"""Diagnostics support for codes: the data printed by `inspect`."""

from __future__ import annotations

from dataclasses import asdict
import logging
from typing import Any

import numpy as np

from .channel import NoisyWord
from .code import LinearCode
from .errors import PartitionInvariantError
from .osd import order_reception
from .staged import build_tilde_g2, ge_cost, partition_basis, reduce_stage2

_LOGGER = logging.getLogger(__name__)


def code_diagnostics(code: LinearCode, samples: int, seed: int) -> dict[str, Any]:
    """Return the code summary and partition statistics over random orderings.

    Each sample draws an i.i.d. Gaussian word, so every reliability ordering
    is equally likely.
    """
    rng = np.random.default_rng(seed)
    ref = code.ref
    b_lr_sizes: list[int] = []
    dependencies: list[int] = []
    row_ops: list[int] = []
    violations = 0
    for _ in range(samples):
        w = NoisyWord.from_soft(rng.standard_normal(code.n))
        lambda1, _ = order_reception(w)
        try:
            part = partition_basis(ref, lambda1, code.k)
        except PartitionInvariantError as err:
            _LOGGER.warning("Partition check failed: %s", err)
            violations += 1
            continue
        staged = reduce_stage2(build_tilde_g2(ref, lambda1, part), w.reliability)
        b_lr_sizes.append(part.b_lr)
        dependencies.append(staged.dependency_count)
        row_ops.append(staged.stage2_row_ops)

    mean_b_lr = float(np.mean(b_lr_sizes)) if b_lr_sizes else 0.0
    max_b_lr = max(b_lr_sizes, default=0)
    return {
        "code": str(code),
        "n": code.n,
        "k": code.k,
        "rate": code.rate,
        "b_k": list(ref.b_k),
        "samples": samples,
        "seed": seed,
        "mean_b_lr": mean_b_lr,
        "max_b_lr": max_b_lr,
        "partition_violations": violations,
        "mean_dependencies": float(np.mean(dependencies)) if dependencies else 0.0,
        "mean_stage2_rowops": float(np.mean(row_ops)) if row_ops else 0.0,
        "ge_cost": asdict(ge_cost(code.n, code.k, max_b_lr)),
    }
