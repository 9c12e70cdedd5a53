"""Pure-numpy tableau kernels.

Reference implementations of the hot operations; the numba backend
mirrors these signatures bit for bit.  All kernels mutate the packed
tableau arrays (x, z: (2n, W) uint64; r: (2n,) uint8) in place.  Rows
0..n-1 are destabilizers, rows n..2n-1 stabilizers.

Sign bookkeeping follows the standard rowsum rule: writing a Pauli as
i^g X^x Z^z per site, the product of rows (x1, z1) and (x2, z2) picks up
i^(plus - minus) where plus counts sites with (X,Y), (Y,Z) or (Z,X)
pairs and minus counts the reversed pairs.
"""

from __future__ import annotations

import numpy as np

_ONE = np.uint64(1)


def _colbits(m: np.ndarray, q: int) -> np.ndarray:
    return (m[:, q >> 6] >> np.uint64(q & 63)) & _ONE


def _setcolbits(m: np.ndarray, q: int, bits: np.ndarray) -> None:
    w, s = q >> 6, np.uint64(q & 63)
    mask = _ONE << s
    m[:, w] = (m[:, w] & ~mask) | (bits << s)


def apply_gate2q(x, z, r, a, b, perm, sgn):
    """Conjugate all rows by a two-qubit Clifford given as its 16-entry
    pattern map over t = xa | za<<1 | xb<<2 | zb<<3."""
    t = (
        _colbits(x, a)
        | (_colbits(z, a) << _ONE)
        | (_colbits(x, b) << np.uint64(2))
        | (_colbits(z, b) << np.uint64(3))
    ).astype(np.intp)
    r ^= sgn[t]
    tp = perm[t].astype(np.uint64)
    _setcolbits(x, a, tp & _ONE)
    _setcolbits(z, a, (tp >> _ONE) & _ONE)
    _setcolbits(x, b, (tp >> np.uint64(2)) & _ONE)
    _setcolbits(z, b, (tp >> np.uint64(3)) & _ONE)


def _phase_counts(x1, z1, x2, z2):
    """Per-word counts of +i and -i factors in the product (x1,z1)*(x2,z2)."""
    y1 = x1 & z1
    ex1 = x1 & ~z1
    ez1 = ~x1 & z1
    y2 = x2 & z2
    ex2 = x2 & ~z2
    ez2 = ~x2 & z2
    plus = np.bitwise_count((ex1 & y2) | (y1 & ez2) | (ez1 & ex2))
    minus = np.bitwise_count((y1 & ex2) | (ez1 & y2) | (ex1 & ez2))
    return plus, minus


def _rowsum_into(x, z, r, targets, xs, zs, rs):
    """row[h] <- source * row[h] for every h in targets."""
    plus, minus = _phase_counts(xs[None, :], zs[None, :], x[targets], z[targets])
    g = plus.astype(np.int64).sum(axis=1) - minus.astype(np.int64).sum(axis=1)
    tot = (2 * r[targets].astype(np.int64) + 2 * int(rs) + g) % 4
    r[targets] = (tot >> 1).astype(np.uint8)
    x[targets] ^= xs
    z[targets] ^= zs


def _rowsum_acc(xacc, zacc, racc, xs, zs, rs):
    """Accumulator <- source * accumulator; returns the new sign bit."""
    plus, minus = _phase_counts(xs, zs, xacc, zacc)
    g = int(plus.sum()) - int(minus.sum())
    tot = (2 * racc + 2 * rs + g) % 4
    xacc ^= xs
    zacc ^= zs
    return tot >> 1


def measure_z(x, z, r, n, q, outcome_bit):
    """Measure Z on qubit q.  Returns (outcome, deterministic).

    ``outcome_bit`` is consumed only on the indeterminate branch.
    """
    xq = _colbits(x, q)
    stab = np.flatnonzero(xq[n:])
    if stab.size:
        p = int(stab[0]) + n
        xs = x[p].copy()
        zs = z[p].copy()
        rs = int(r[p])
        targets = np.flatnonzero(xq)
        targets = targets[(targets != p) & (targets != p - n)]
        if targets.size:
            _rowsum_into(x, z, r, targets, xs, zs, rs)
        x[p - n] = xs
        z[p - n] = zs
        r[p - n] = rs
        x[p] = 0
        z[p] = 0
        z[p, q >> 6] = _ONE << np.uint64(q & 63)
        r[p] = outcome_bit
        return int(outcome_bit), False
    W = x.shape[1]
    xacc = np.zeros(W, np.uint64)
    zacc = np.zeros(W, np.uint64)
    racc = 0
    for j in np.flatnonzero(xq[:n]):
        racc = _rowsum_acc(xacc, zacc, racc, x[n + j], z[n + j], int(r[n + j]))
    return int(racc), True


def pauli_expect(x, z, r, n, px, pz, psign):
    """Expectation of the Pauli (px, pz, (-1)^psign): one of -1, 0, +1."""
    sx = x[n:]
    sz = z[n:]
    anti = (
        np.bitwise_count(px[None, :] & sz).astype(np.int64).sum(axis=1)
        + np.bitwise_count(pz[None, :] & sx).astype(np.int64).sum(axis=1)
    ) & 1
    if anti.any():
        return 0
    coef = (
        np.bitwise_count(px[None, :] & z[:n]).astype(np.int64).sum(axis=1)
        + np.bitwise_count(pz[None, :] & x[:n]).astype(np.int64).sum(axis=1)
    ) & 1
    W = x.shape[1]
    xacc = np.zeros(W, np.uint64)
    zacc = np.zeros(W, np.uint64)
    racc = 0
    for j in np.flatnonzero(coef):
        racc = _rowsum_acc(xacc, zacc, racc, x[n + j], z[n + j], int(r[n + j]))
    if not (np.array_equal(xacc, px) and np.array_equal(zacc, pz)):
        raise RuntimeError(
            "tableau invariant violation: stabilizer product does not "
            "reproduce the commuting Pauli"
        )
    return 1 if racc == psign else -1


def evolve(
    x,
    z,
    r,
    n_sites,
    offsets,
    gate_ids,
    perm_tab,
    sign_tab,
    meas_mask,
    outcome_bits,
    meas_out,
):
    """Run a monitored brickwall circuit in place.

    Layer t applies two-qubit Cliffords ``gate_ids[t, :]`` on pairs
    (a, a+1) for a = offsets[t], offsets[t]+2, ... below n_sites, then
    measures Z wherever meas_mask[t] is set, writing outcomes (0/1) into
    meas_out[t].  Sites beyond n_sites (ancillas) are never touched.
    """
    n = x.shape[0] // 2
    for t in range(offsets.shape[0]):
        a = int(offsets[t])
        g = 0
        while a + 1 < n_sites:
            gid = int(gate_ids[t, g])
            apply_gate2q(x, z, r, a, a + 1, perm_tab[gid], sign_tab[gid])
            a += 2
            g += 1
        for q in np.flatnonzero(meas_mask[t]):
            out, _ = measure_z(x, z, r, n, int(q), int(outcome_bits[t, q]))
            meas_out[t, q] = out
