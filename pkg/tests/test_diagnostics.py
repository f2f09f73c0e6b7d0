"""Tests for code diagnostics."""

from __future__ import annotations

from unittest.mock import patch

import pytest

from reduced_osd.diagnostics import code_diagnostics
from reduced_osd.errors import PartitionInvariantError


def test_code_diagnostics(bch15_7):
    """Test the summary of BCH(15,7)."""
    info = code_diagnostics(bch15_7, 200, 1)
    assert info["code"] == "BCH(15,7)"
    assert (info["n"], info["k"]) == (15, 7)
    assert info["rate"] == pytest.approx(7 / 15)
    assert info["b_k"] == list(range(7))
    assert info["samples"] == 200
    assert info["partition_violations"] == 0
    assert 0 < info["mean_b_lr"] <= info["max_b_lr"] <= 7
    assert info["ge_cost"]["full"] == 15 * 49
    assert info["ge_cost"]["three_stage"] is None


def test_code_diagnostics_is_seeded(code24_12):
    """Test equal seeds give equal statistics."""
    assert code_diagnostics(code24_12, 100, 5) == code_diagnostics(code24_12, 100, 5)


def test_code_diagnostics_counts_violations(code16_8, caplog):
    """Test a failed partition check is counted and logged."""
    with patch(
        "reduced_osd.diagnostics.partition_basis",
        side_effect=PartitionInvariantError(2, 1),
    ):
        info = code_diagnostics(code16_8, 10, 1)
    assert info["partition_violations"] == 10
    assert info["mean_b_lr"] == 0.0
    assert info["max_b_lr"] == 0
    assert "Partition check failed" in caplog.text


def test_partition_holds_on_bch127(bch127_113):
    """Test |B_K,LR| = |P_N-K,MR| over sampled orderings."""
    info = code_diagnostics(bch127_113, 500, 2)
    assert info["partition_violations"] == 0
    assert info["max_b_lr"] <= 14


@pytest.mark.slow
def test_partition_holds_on_bch127_many_samples(bch127_113):
    """Test the partition check over 10^4 orderings."""
    info = code_diagnostics(bch127_113, 10_000, 3)
    assert info["partition_violations"] == 0
