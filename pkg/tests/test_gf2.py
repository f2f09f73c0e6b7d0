"""Tests for the GF(2) matrices, permutations and eliminations."""

from __future__ import annotations

import numpy as np
import pytest

from reduced_osd.errors import DimensionMismatchError, RankDeficientError
from reduced_osd.gf2 import (
    BitMatrix,
    Direction,
    Permutation,
    apply_permutation,
    as_bits,
    eliminate_extended,
    eliminate_restricted,
    mat_vec_encode,
    rref_full,
)

# -------------------------------
# BitMatrix Tests
# -------------------------------


def test_from_array_round_trip_wide_rows():
    """Test packing survives rows wider than one word."""
    bits = np.random.default_rng(3).integers(0, 2, size=(5, 130), dtype=np.uint8)
    m = BitMatrix.from_array(bits)
    assert m.shape == (5, 130)
    assert np.array_equal(m.to_array(), bits)
    assert m[4, 129] == bits[4, 129]


def test_getitem_out_of_range():
    """Test indexing outside the matrix raises IndexError."""
    m = BitMatrix.identity(3)
    assert m[1, 1] == 1
    assert m[1, 2] == 0
    with pytest.raises(IndexError):
        m[3, 0]


def test_from_array_rejects_non_binary():
    """Test entries other than 0/1 are rejected."""
    with pytest.raises(ValueError, match="0/1"):
        BitMatrix.from_array([[0, 2]])


def test_view_is_read_only():
    """Test the cached view cannot be written and to_array returns a copy."""
    m = BitMatrix.identity(2)
    with pytest.raises(ValueError):
        m.view()[0, 0] = 0
    copy = m.to_array()
    copy[0, 0] = 0
    assert m[0, 0] == 1


def test_take_columns_and_rows():
    """Test column j of take_columns(order) is column order[j]."""
    m = BitMatrix.from_array([[1, 0, 1], [0, 1, 1]])
    assert np.array_equal(m.take_columns([2, 0, 1]).view(), [[1, 1, 0], [1, 0, 1]])
    assert np.array_equal(m.take_rows([1, 0]).view(), [[0, 1, 1], [1, 0, 1]])


def test_multiply_and_transpose():
    """Test the GF(2) product."""
    a = BitMatrix.from_array([[1, 1], [0, 1]])
    assert a.multiply(a) == BitMatrix.from_array([[1, 0], [0, 1]])
    assert a.transpose() == BitMatrix.from_array([[1, 0], [1, 1]])
    with pytest.raises(DimensionMismatchError):
        a.multiply(BitMatrix.identity(3))


def test_rank_and_row_space():
    """Test rank and the size of the row span."""
    m = BitMatrix.from_array([[1, 0, 1, 1], [0, 1, 1, 0], [1, 1, 0, 1]])
    assert m.rank() == 2
    span = m.row_space()
    assert len(span) == 4
    assert bytes([1, 1, 0, 1]) in span
    assert BitMatrix.zeros(2, 3).is_zero()


def test_equality_and_hash():
    """Test equal matrices compare and hash equal."""
    a = BitMatrix.from_array([[1, 0], [1, 1]])
    b = BitMatrix.from_array(np.array([[1, 0], [1, 1]]))
    assert a == b
    assert hash(a) == hash(b)
    assert a != BitMatrix.identity(2)


def test_as_bits():
    """Test binary vector coercion."""
    assert as_bits([1, 0, 1]).dtype == np.uint8
    with pytest.raises(ValueError):
        as_bits([0, 3])
    with pytest.raises(DimensionMismatchError):
        as_bits([[0, 1]])


# -------------------------------
# Permutation Tests
# -------------------------------


def test_permutation_apply_forward_and_inverse():
    """Test forward gives v[p(i)] and inverse undoes it."""
    p = Permutation([2, 0, 1])
    v = np.array([10, 20, 30])
    forward = p.apply(v)
    assert forward.tolist() == [30, 10, 20]
    assert p.apply(forward, Direction.INVERSE).tolist() == [10, 20, 30]
    assert apply_permutation(v, p).tolist() == forward.tolist()


def test_permutation_compose():
    """Test compose(p, q) applies q first."""
    rng = np.random.default_rng(0)
    p = Permutation(rng.permutation(8))
    q = Permutation(rng.permutation(8))
    v = np.arange(8) * 3
    assert np.array_equal(p.compose(q).apply(v), p.apply(q.apply(v)))
    assert p.compose(p.inverted()).is_identity()


def test_permutation_rejects_non_bijection():
    """Test a repeated index is rejected."""
    with pytest.raises(ValueError, match="bijection"):
        Permutation([0, 0, 1])


def test_permutation_length_mismatch():
    """Test applying to a sequence of the wrong length."""
    with pytest.raises(DimensionMismatchError):
        Permutation.identity(3).apply([1, 2])


# -------------------------------
# Elimination Tests
# -------------------------------


def test_rref_full_systematic(code16_8):
    """Test the reduced matrix is [I | P] and spans the same rows."""
    g = code16_8.generator
    reduced, perm, report = rref_full(g)
    assert np.array_equal(reduced.view()[:, :8], np.eye(8, dtype=np.uint8))
    assert list(perm.forward[:8]) == list(report.pivot_cols)
    assert reduced.take_columns(perm.inverse).row_space() == g.row_space()


def test_rref_full_rank_deficient():
    """Test dependent rows raise with the rank found."""
    m = BitMatrix.from_array([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    with pytest.raises(RankDeficientError) as err:
        rref_full(m)
    assert err.value.rank == 2


def test_rref_full_counts_dependent_columns():
    """Test a column failing to give a pivot is reported."""
    m = BitMatrix.from_array([[1, 1, 0], [0, 0, 1]])
    _, perm, report = rref_full(m)
    assert report.pivot_cols == (0, 2)
    assert report.dependent_cols == (1,)
    assert perm.forward.tolist() == [0, 2, 1]


def test_eliminate_restricted_keeps_other_rows(code16_8):
    """Test rows outside the range are untouched and pivots hold unit columns."""
    g = code16_8.generator
    reduced, report = eliminate_restricted(g, range(4, 8), range(16))
    assert np.array_equal(reduced.view()[:4], g.view()[:4])
    assert report.modified_rows <= set(range(4, 8))
    for i, col in enumerate(report.pivot_cols):
        expected = np.zeros(4, dtype=np.uint8)
        expected[i] = 1
        assert np.array_equal(reduced.view()[4:8, col], expected)


def test_eliminate_restricted_max_pivots():
    """Test elimination stops after max_pivots."""
    reduced, report = eliminate_restricted(BitMatrix.identity(4), range(4), [3, 2, 1, 0], max_pivots=2)
    assert report.pivot_cols == (3, 2)
    assert report.row_swap_count == 2
    assert reduced.rows == 4


def test_eliminate_restricted_rank_deficient():
    """Test too few pivots inside the range raise."""
    m = BitMatrix.from_array([[1, 0, 0], [0, 0, 1]])
    with pytest.raises(RankDeficientError):
        eliminate_restricted(m, range(2), [0, 1])


def test_eliminate_restricted_bad_column_order():
    """Test duplicated or out-of-range columns are rejected."""
    m = BitMatrix.identity(2)
    with pytest.raises(ValueError):
        eliminate_restricted(m, range(2), [0, 0])
    with pytest.raises(IndexError):
        eliminate_restricted(m, range(2), [0, 5])
    with pytest.raises(IndexError):
        eliminate_restricted(m, range(1, 3), [0, 1])


def test_eliminate_extended_clears_every_row(code16_8):
    """Test pivots from a row range are cleared in all rows."""
    g = code16_8.generator
    reduced, report = eliminate_extended(g, range(4, 8), range(16))
    for i, col in enumerate(report.pivot_cols):
        expected = np.zeros(8, dtype=np.uint8)
        expected[4 + i] = 1
        assert np.array_equal(reduced.view()[:, col], expected)
    assert reduced.row_space() == g.row_space()


def test_mat_vec_encode(code16_8):
    """Test v·M against the dense product."""
    g = code16_8.generator
    v = np.array([1, 0, 1, 1, 0, 0, 1, 0], dtype=np.uint8)
    expected = (v.astype(np.int64) @ g.view().astype(np.int64)) & 1
    assert np.array_equal(mat_vec_encode(v, g), expected)
    assert not mat_vec_encode(np.zeros(8, dtype=np.uint8), g).any()
    with pytest.raises(DimensionMismatchError):
        mat_vec_encode([1, 0], g)
