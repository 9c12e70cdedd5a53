"""GF(2) row vectors packed 64 bits per uint64 word.

Bit q of a row lives in word ``q >> 6`` at position ``q & 63``
(little-endian bit order).  Packing relies on a little-endian host for
the uint8 -> uint64 reinterpretation.
"""

from __future__ import annotations

import sys

import numpy as np

if sys.byteorder != "little":  # pragma: no cover
    raise RuntimeError("packed-word layout requires a little-endian host")

WORD_BITS = 64


def n_words(n_bits: int) -> int:
    """Words needed to hold ``n_bits`` bits."""
    return (n_bits + 63) >> 6


def pack_rows(bits: np.ndarray) -> np.ndarray:
    """Pack a (..., n) array of 0/1 values into (..., n_words(n)) uint64."""
    bits = np.ascontiguousarray(bits, dtype=np.uint8)
    n = bits.shape[-1]
    pad = n_words(n) * WORD_BITS - n
    if pad:
        bits = np.concatenate(
            [bits, np.zeros(bits.shape[:-1] + (pad,), np.uint8)], axis=-1
        )
    packed = np.packbits(bits, axis=-1, bitorder="little")
    return np.ascontiguousarray(packed).view(np.uint64)


def unpack_rows(words: np.ndarray, n_bits: int) -> np.ndarray:
    """Inverse of :func:`pack_rows`; returns a (..., n_bits) uint8 array."""
    words = np.ascontiguousarray(words, dtype=np.uint64)
    bits = np.unpackbits(words.view(np.uint8), axis=-1, bitorder="little")
    return bits[..., :n_bits]


def get_bit(words: np.ndarray, q: int) -> np.ndarray:
    """Bit column q of packed rows (..., W) as 0/1 uint64."""
    return (words[..., q >> 6] >> np.uint64(q & 63)) & np.uint64(1)


def set_bit(words: np.ndarray, q: int, value: np.ndarray | int) -> None:
    """Write bit column q of packed rows in place."""
    w, s = q >> 6, np.uint64(q & 63)
    mask = np.uint64(1) << s
    v = (np.asarray(value).astype(np.uint64) & np.uint64(1)) << s
    words[..., w] = (words[..., w] & ~mask) | v


def popcount(words: np.ndarray) -> np.ndarray:
    """Per-word set-bit counts."""
    return np.bitwise_count(words)


def gf2_rank(rows: np.ndarray) -> int:
    """Rank over GF(2) of packed rows (k, W)."""
    pivots: list[tuple[int, np.ndarray]] = []
    for row in rows:
        cur = row.copy()
        for pos, piv in pivots:
            if (cur[pos >> 6] >> np.uint64(pos & 63)) & np.uint64(1):
                cur ^= piv
        nz = np.flatnonzero(cur)
        if nz.size:
            w = int(nz[0])
            word = int(cur[w])
            pos = (w << 6) + ((word & -word).bit_length() - 1)
            pivots.append((pos, cur))
    return len(pivots)
