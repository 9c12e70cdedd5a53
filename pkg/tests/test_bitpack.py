import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mipt_le import bitpack


def test_n_words():
    assert bitpack.n_words(1) == 1
    assert bitpack.n_words(64) == 1
    assert bitpack.n_words(65) == 2
    assert bitpack.n_words(128) == 2
    assert bitpack.n_words(129) == 3


@given(
    st.integers(min_value=1, max_value=200),
    st.integers(min_value=1, max_value=8),
    st.integers(min_value=0, max_value=2**32 - 1),
)
@settings(max_examples=60, deadline=None)
def test_pack_unpack_roundtrip(n_bits, n_rows, seed):
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=(n_rows, n_bits), dtype=np.uint8)
    words = bitpack.pack_rows(bits)
    assert words.dtype == np.uint64
    assert words.shape == (n_rows, bitpack.n_words(n_bits))
    assert np.array_equal(bitpack.unpack_rows(words, n_bits), bits)


@given(st.lists(st.integers(min_value=0, max_value=2**64 - 1), min_size=1, max_size=16))
@settings(max_examples=100, deadline=None)
def test_popcount_matches_python(values):
    words = np.array([values], dtype=np.uint64)
    counts = bitpack.popcount(words)
    assert counts.shape == words.shape
    assert int(counts.sum()) == sum(v.bit_count() for v in values)


def test_get_set_bit():
    words = np.zeros((3, 2), dtype=np.uint64)
    bitpack.set_bit(words, 70, np.array([1, 0, 1], dtype=np.uint64))
    assert np.array_equal(bitpack.get_bit(words, 70), [1, 0, 1])
    assert np.array_equal(bitpack.get_bit(words, 69), [0, 0, 0])
    bitpack.set_bit(words, 70, 0)
    assert not words.any()


def test_gf2_rank_known_cases():
    assert bitpack.gf2_rank(np.zeros((3, 5), dtype=np.uint8)) == 0
    assert bitpack.gf2_rank(np.eye(4, dtype=np.uint8)) == 4
    # two identical rows count once
    rows = np.array([[1, 1, 0], [1, 1, 0], [0, 1, 1]], dtype=np.uint8)
    assert bitpack.gf2_rank(rows) == 2


@given(
    st.integers(min_value=1, max_value=12),
    st.integers(min_value=1, max_value=12),
    st.integers(min_value=0, max_value=2**32 - 1),
)
@settings(max_examples=60, deadline=None)
def test_gf2_rank_bounds_and_row_ops(n_rows, n_cols, seed):
    rng = np.random.default_rng(seed)
    rows = rng.integers(0, 2, size=(n_rows, n_cols), dtype=np.uint8)
    r = bitpack.gf2_rank(rows)
    assert 0 <= r <= min(n_rows, n_cols)
    # adding one row onto another never changes the span
    if n_rows >= 2:
        mod = rows.copy()
        mod[0] ^= mod[1]
        assert bitpack.gf2_rank(mod) == r
