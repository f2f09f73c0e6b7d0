"""Tests for the staged generator forms, cascade decoding and the GE cost model."""

from __future__ import annotations

import numpy as np
import pytest

from reduced_osd.bch import build_bch
from reduced_osd.channel import NoisyWord
from reduced_osd.code import LinearCode, dual_of_staged, load_code
from reduced_osd.decoders import ml_decode
from reduced_osd.errors import (
    InvalidAlphaError,
    InvalidArgumentsError,
    InvalidBmaxError,
)
from reduced_osd.gf2 import BitMatrix, Direction
from reduced_osd.osd import order_reception, reprocess
from reduced_osd.staged import (
    StagedForm,
    StagedLayout,
    StagePlan,
    as_systematic,
    build_bmax_tilde,
    build_three_stage,
    build_tilde_g2,
    decode_staged,
    encode_staged,
    ge_cost,
    layout_violations,
    optimize_alpha,
    partition_basis,
    reduce_onepass,
    reduce_stage2,
    restrict_bmax,
)

from .conftest import noisy_frames  # noqa: TID251


def _tilde(code: LinearCode, w) -> StagedForm:
    lambda1, _ = order_reception(w)
    part = partition_basis(code.ref, lambda1, code.k)
    return build_tilde_g2(code.ref, lambda1, part)


def _original_rows(sf: StagedForm, rows: range) -> np.ndarray:
    return sf.col_perm.apply(sf.matrix.view()[rows.start : rows.stop], Direction.INVERSE)


def _generates_code(sf: StagedForm, code: LinearCode) -> bool:
    rows = sf.col_perm.apply(sf.matrix.view(), Direction.INVERSE)
    return BitMatrix.from_array(rows).rank() == code.k and all(code.is_codeword(r) for r in rows)


# -------------------------------
# Partition Tests
# -------------------------------


def test_partition_sizes_match(bch127_113, rng):
    """Test |B_K,LR| = |P_N-K,MR| <= min(k, n-k) over random orderings."""
    code = bch127_113
    for _ in range(1000):
        w = NoisyWord.from_soft(rng.standard_normal(code.n))
        lambda1, _ = order_reception(w)
        part = partition_basis(code.ref, lambda1, code.k)
        assert len(part.b_k_lr) == len(part.p_nk_mr) <= 14
        assert len(part.b_k_mr) + len(part.p_nk_mr) == code.k
        assert all(p >= code.k for p in part.b_k_lr)


# -------------------------------
# Layout Tests
# -------------------------------


def test_tilde_layout(code24_12):
    """Test the tilde form is a pure regrouping of λ₁(G_REF)."""
    for w in noisy_frames(code24_12, 1.0, 100):
        tg2 = _tilde(code24_12, w)
        assert tg2.layout is StagedLayout.TILDE
        assert layout_violations(tg2) == []
        assert tg2.stage2_row_ops == 0
        assert _generates_code(tg2, code24_12)


def test_two_stage_layout(code24_12):
    """Test stage-2 elimination leaves stage 1 untouched and keeps the code."""
    for w in noisy_frames(code24_12, 1.0, 500, seed=3):
        tg2 = _tilde(code24_12, w)
        sf = reduce_stage2(tg2, w.reliability)
        assert sf.layout is StagedLayout.TWO_STAGE
        assert layout_violations(sf) == []
        s1 = sf.stage_row_bounds[0]
        assert np.array_equal(_original_rows(sf, s1), _original_rows(tg2, s1))
        assert sf.stage1_rows_modified == 0
        assert _generates_code(sf, code24_12)


def test_two_stage_pivots_prefer_reliable_columns(code24_12):
    """Test stage-2 pivots are the most reliable group-2 columns when no dependency occurs."""
    for w in noisy_frames(code24_12, 1.0, 100):
        tg2 = _tilde(code24_12, w)
        sf = reduce_stage2(tg2, w.reliability)
        if sf.dependency_count:
            continue
        assert set(sf.col_perm.forward[list(sf.group(1))]) == set(tg2.col_perm.forward[list(tg2.group(1))])


def test_three_stage_layout(code24_12):
    """Test three stages with the cost-optimal split."""
    checked = 0
    for w in noisy_frames(code24_12, 1.0, 200):
        tg2 = _tilde(code24_12, w)
        b_lr = len(tg2.stage_row_bounds[1])
        if b_lr < 2:
            continue
        alpha = optimize_alpha(code24_12.n, code24_12.k, b_lr)
        sf = build_three_stage(tg2, w.reliability, alpha)
        assert sf.stages == 3
        assert len(sf.stage_row_bounds[2]) == alpha
        assert layout_violations(sf) == []
        s1 = sf.stage_row_bounds[0]
        assert np.array_equal(_original_rows(sf, s1), _original_rows(tg2, s1))
        assert _generates_code(sf, code24_12)
        checked += 1
    assert checked > 0


def test_three_stage_invalid_alpha(code24_12):
    """Test alpha must lie strictly between 0 and |B_K,LR|."""
    for w in noisy_frames(code24_12, 1.0, 50):
        tg2 = _tilde(code24_12, w)
        b_lr = len(tg2.stage_row_bounds[1])
        if b_lr >= 2:
            break
    else:
        pytest.skip("No frame had |B_K,LR| >= 2")
    with pytest.raises(InvalidAlphaError):
        build_three_stage(tg2, w.reliability, 0)
    with pytest.raises(InvalidAlphaError):
        build_three_stage(tg2, w.reliability, b_lr)


def test_bmax_tilde_layout(bch127_113):
    """Test B_max regrouping widths and the reduced form it feeds."""
    checked = 0
    for w in noisy_frames(bch127_113, 3.0, 100):
        tg2 = _tilde(bch127_113, w)
        b_lr = len(tg2.stage_row_bounds[1])
        if b_lr <= 3:
            continue
        tb = build_bmax_tilde(tg2, w.reliability, 3)
        assert tb.layout is StagedLayout.BMAX_TILDE
        assert layout_violations(tb) == []
        assert _generates_code(tb, bch127_113)
        sf = restrict_bmax(tg2, w.reliability, 3)
        assert len(sf.stage_row_bounds[1]) == 3
        assert layout_violations(sf) == []
        assert sf.stage1_rows_modified == 0
        checked += 1
    assert checked > 0


def test_bmax_not_binding_falls_back(code24_12):
    """Test restrict_bmax with B_max >= |B_K,LR| equals the unrestricted reduction."""
    w = noisy_frames(code24_12, 1.0, 1)[0]
    tg2 = _tilde(code24_12, w)
    plain = reduce_stage2(tg2, w.reliability)
    restricted = restrict_bmax(tg2, w.reliability, code24_12.k)
    assert restricted.matrix == plain.matrix
    assert restricted.col_perm == plain.col_perm


def test_bmax_invalid(code24_12):
    """Test non-positive or non-binding B_max in build_bmax_tilde."""
    w = noisy_frames(code24_12, 1.0, 1)[0]
    tg2 = _tilde(code24_12, w)
    with pytest.raises(InvalidBmaxError):
        build_bmax_tilde(tg2, w.reliability, 0)
    with pytest.raises(InvalidBmaxError):
        build_bmax_tilde(tg2, w.reliability, len(tg2.stage_row_bounds[1]))
    with pytest.raises(InvalidBmaxError):
        restrict_bmax(tg2, w.reliability, -1)


def test_stage_plan_validation():
    """Test stage plans are validated."""
    with pytest.raises(InvalidArgumentsError):
        StagePlan(stages=4)
    with pytest.raises(InvalidBmaxError):
        StagePlan(b_max=0)
    assert StagePlan(stages=3, alpha=2).alpha == 2


def test_onepass_is_systematic(code24_12):
    """Test the one-pass form reprocesses like classic OSD."""
    for w in noisy_frames(code24_12, 1.0, 50):
        tg2 = _tilde(code24_12, w)
        sf = reduce_onepass(tg2, w.reliability)
        assert layout_violations(sf) == []
        ms, perm = as_systematic(sf)
        assert np.array_equal(ms.g2.view()[:, :12], np.eye(12, dtype=np.uint8))
        outcome = reprocess(ms, w.permuted(perm), 1, col_perm=perm)
        assert code24_12.is_codeword(outcome.best.codeword_original)


def test_as_systematic_rejects_staged(code24_12):
    """Test a two-stage form is not accepted as systematic."""
    for w in noisy_frames(code24_12, 1.0, 50):
        tg2 = _tilde(code24_12, w)
        sf = reduce_stage2(tg2, w.reliability)
        stage1, pivots2 = sf.stage_row_bounds[0], sf.group(1)
        if sf.matrix.view()[stage1.start : stage1.stop, pivots2.start : pivots2.stop].any():
            with pytest.raises(ValueError, match="not systematic"):
                as_systematic(sf)
            return
    pytest.skip("No frame produced a non-systematic stage-1 block")


# -------------------------------
# Dual Tests
# -------------------------------


def test_dual_of_staged(code24_12):
    """Test staged generator × dualᵀ = 0 with a full-rank dual."""
    for w in noisy_frames(code24_12, 1.0, 200):
        tg2 = _tilde(code24_12, w)
        for sf in (tg2, reduce_stage2(tg2, w.reliability)):
            h = dual_of_staged(sf)
            assert h.shape == (12, 24)
            assert sf.matrix.multiply(h.transpose()).is_zero()
            assert h.rank() == 12


def test_dual_of_two_stage_clears_group2(code24_12):
    """Test the group-4 dual rows vanish on group 2 when the group-3 block is invertible."""
    checked = 0
    for w in noisy_frames(code24_12, 1.0, 300):
        sf = reduce_stage2(_tilde(code24_12, w), w.reliability)
        s2 = sf.stage_row_bounds[1]
        g2, g3 = sf.group(1), sf.group(2)
        if len(s2) == 0 or len(g3) != len(s2):
            continue
        block = BitMatrix.from_array(sf.matrix.view()[s2.start : s2.stop, g3.start : g3.stop])
        if block.rank() != len(s2):
            continue
        h = dual_of_staged(sf).view()
        assert not h[len(g3) :, g2.start : g2.stop].any()
        checked += 1
    assert checked > 0


# -------------------------------
# Cascade Tests
# -------------------------------


def test_encode_staged(code24_12, rng):
    """Test the cascade is systematic on the pivots and yields codewords."""
    for w in noisy_frames(code24_12, 1.0, 50):
        tg2 = _tilde(code24_12, w)
        forms = [tg2, reduce_stage2(tg2, w.reliability)]
        b_lr = len(tg2.stage_row_bounds[1])
        if b_lr >= 2:
            forms.append(build_three_stage(tg2, w.reliability, 1))
        for sf in forms:
            bits = rng.integers(0, 2, size=12).astype(np.uint8)
            word = encode_staged(bits, sf)
            assert np.array_equal(word[list(sf.pivot_cols)], bits)
            assert code24_12.is_codeword(sf.col_perm.apply(word, Direction.INVERSE))


def test_decode_staged_order0_agrees_on_basis(code24_12):
    """Test order-0 output equals the hard decisions on every pivot column."""
    for w in noisy_frames(code24_12, 1.0, 100):
        sf = reduce_stage2(_tilde(code24_12, w), w.reliability)
        outcome = decode_staged(sf, w, 0)
        y = w.permuted(sf.col_perm)
        pivots = list(sf.pivot_cols)
        assert np.array_equal(outcome.best.codeword_permuted[pivots], y.hard[pivots])
        assert outcome.stage1_rows_modified == 0


@pytest.mark.parametrize("stages", [2, 3])
def test_decode_staged_full_order_is_ml(bch15_7, stages):
    """Test order-k cascade reprocessing reaches the exhaustive minimum."""
    for w in noisy_frames(bch15_7, 2.0, 300):
        tg2 = _tilde(bch15_7, w)
        b_lr = len(tg2.stage_row_bounds[1])
        if stages == 3 and b_lr >= 2:
            sf = build_three_stage(tg2, w.reliability, 1)
        else:
            sf = reduce_stage2(tg2, w.reliability)
        outcome = decode_staged(sf, w, 7)
        assert outcome.best.metric == ml_decode(bch15_7, w).best.metric
        assert outcome.candidates_evaluated == 128


def test_stage2_row_ops_bound(bch127_113):
    """Test stage-2 row additions stay below (N-K+B)·B² for B = |B_K,LR|."""
    n, k = bch127_113.n, bch127_113.k
    for w in noisy_frames(bch127_113, 3.0, 100):
        tg2 = _tilde(bch127_113, w)
        b = len(tg2.stage_row_bounds[1])
        sf = reduce_stage2(tg2, w.reliability)
        assert sf.stage2_row_ops <= (n - k + b) * b * b


@pytest.mark.slow
def test_bmax_row_ops_bch511():
    """Test mean stage-2 row additions on BCH(511,493) with B_max = 12."""
    code = load_code(build_bch(9, 2))
    total = 0
    frames = noisy_frames(code, 4.0, 1000)
    for w in frames:
        sf = restrict_bmax(_tilde(code, w), w.reliability, 12)
        assert sf.stage1_rows_modified == 0
        total += sf.stage2_row_ops
    assert total / len(frames) <= 36 * 144


@pytest.mark.slow
@pytest.mark.parametrize("b_max", [6, 9, 12])
def test_bmax_forms_bch511(b_max):
    """Test B_max forms on BCH(511,493) keep the code and are annihilated by their dual."""
    code = load_code(build_bch(9, 2))
    for w in noisy_frames(code, 4.0, 20):
        sf = restrict_bmax(_tilde(code, w), w.reliability, b_max)
        assert len(sf.stage_row_bounds[1]) <= b_max
        assert layout_violations(sf) == []
        assert sf.matrix.multiply(dual_of_staged(sf).transpose()).is_zero()
        assert _generates_code(sf, code)


# -------------------------------
# Cost Model Tests
# -------------------------------


def test_ge_cost_golden_values():
    """Test the (256,128) example costs."""
    cost = ge_cost(256, 128, 64, 34)
    assert cost.full == 4_194_304
    assert cost.two_stage == 786_432
    assert cost.three_stage == 555_912
    assert ge_cost(256, 128, 64, 32).three_stage == 557_056
    assert optimize_alpha(256, 128, 64) == 34


def test_ge_cost_aligned_bases():
    """Test |B_K,LR| = 0 needs no stage-2 work."""
    cost = ge_cost(256, 128, 0)
    assert cost.two_stage == 0
    assert cost.three_stage is None


@pytest.mark.parametrize(
    ("n", "k", "b_lr", "alpha"),
    [(10, 10, 0, None), (10, 0, 0, None), (16, 8, 9, None), (16, 8, 4, 4), (16, 8, 4, 0)],
)
def test_ge_cost_invalid(n, k, b_lr, alpha):
    """Test out-of-range arguments."""
    with pytest.raises(InvalidArgumentsError):
        ge_cost(n, k, b_lr, alpha)


def test_optimize_alpha_needs_two_rows():
    """Test alpha cannot be chosen for |B_K,LR| < 2."""
    with pytest.raises(InvalidArgumentsError):
        optimize_alpha(256, 128, 1)
    assert optimize_alpha(256, 128, 2) == 1
