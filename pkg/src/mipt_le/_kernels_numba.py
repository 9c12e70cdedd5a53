"""Numba-jitted tableau kernels.

Loop mirrors of :mod:`mipt_le._kernels_numpy` with identical signatures
and bit-exact behaviour.  Popcounts use the SWAR reduction; all word
arithmetic stays in uint64.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_U1 = np.uint64(1)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


@njit(cache=True, inline="always")
def _popcount(v):
    v = v - ((v >> _U1) & _M1)
    v = (v & _M2) + ((v >> np.uint64(2)) & _M2)
    v = (v + (v >> np.uint64(4))) & _M4
    return (v * _H01) >> np.uint64(56)


@njit(cache=True)
def apply_gate2q(x, z, r, a, b, perm, sgn):
    wa = a >> 6
    sa = np.uint64(a & 63)
    wb = b >> 6
    sb = np.uint64(b & 63)
    ma = ~(_U1 << sa)
    mb = ~(_U1 << sb)
    for i in range(x.shape[0]):
        xa = (x[i, wa] >> sa) & _U1
        za = (z[i, wa] >> sa) & _U1
        xb = (x[i, wb] >> sb) & _U1
        zb = (z[i, wb] >> sb) & _U1
        t = int(xa | (za << _U1) | (xb << np.uint64(2)) | (zb << np.uint64(3)))
        if t != 0:
            r[i] ^= sgn[t]
            tp = np.uint64(perm[t])
            x[i, wa] = (x[i, wa] & ma) | ((tp & _U1) << sa)
            z[i, wa] = (z[i, wa] & ma) | (((tp >> _U1) & _U1) << sa)
            x[i, wb] = (x[i, wb] & mb) | (((tp >> np.uint64(2)) & _U1) << sb)
            z[i, wb] = (z[i, wb] & mb) | (((tp >> np.uint64(3)) & _U1) << sb)


@njit(cache=True, inline="always")
def _rowsum_row(x, z, r, h, xs, zs, rs):
    plus = np.uint64(0)
    minus = np.uint64(0)
    for w in range(xs.shape[0]):
        x1 = xs[w]
        z1 = zs[w]
        x2 = x[h, w]
        z2 = z[h, w]
        y1 = x1 & z1
        ex1 = x1 & ~z1
        ez1 = ~x1 & z1
        y2 = x2 & z2
        ex2 = x2 & ~z2
        ez2 = ~x2 & z2
        plus += _popcount((ex1 & y2) | (y1 & ez2) | (ez1 & ex2))
        minus += _popcount((y1 & ex2) | (ez1 & y2) | (ex1 & ez2))
        x[h, w] = x2 ^ x1
        z[h, w] = z2 ^ z1
    tot = (2 * int(r[h]) + 2 * rs + int(plus) - int(minus)) % 4
    r[h] = np.uint8(tot >> 1)


@njit(cache=True, inline="always")
def _rowsum_acc(xacc, zacc, racc, xs, zs, rs):
    plus = np.uint64(0)
    minus = np.uint64(0)
    for w in range(xs.shape[0]):
        x1 = xs[w]
        z1 = zs[w]
        x2 = xacc[w]
        z2 = zacc[w]
        y1 = x1 & z1
        ex1 = x1 & ~z1
        ez1 = ~x1 & z1
        y2 = x2 & z2
        ex2 = x2 & ~z2
        ez2 = ~x2 & z2
        plus += _popcount((ex1 & y2) | (y1 & ez2) | (ez1 & ex2))
        minus += _popcount((y1 & ex2) | (ez1 & y2) | (ex1 & ez2))
        xacc[w] = x2 ^ x1
        zacc[w] = z2 ^ z1
    tot = (2 * racc + 2 * rs + int(plus) - int(minus)) % 4
    return tot >> 1


@njit(cache=True)
def measure_z(x, z, r, n, q, outcome_bit):
    w = q >> 6
    s = np.uint64(q & 63)
    W = x.shape[1]
    p = -1
    for i in range(n, 2 * n):
        if (x[i, w] >> s) & _U1:
            p = i
            break
    if p >= 0:
        xs = x[p].copy()
        zs = z[p].copy()
        rs = int(r[p])
        for i in range(2 * n):
            if i != p and i != p - n and ((x[i, w] >> s) & _U1):
                _rowsum_row(x, z, r, i, xs, zs, rs)
        for ww in range(W):
            x[p - n, ww] = xs[ww]
            z[p - n, ww] = zs[ww]
            x[p, ww] = np.uint64(0)
            z[p, ww] = np.uint64(0)
        r[p - n] = np.uint8(rs)
        z[p, w] = _U1 << s
        r[p] = outcome_bit
        return int(outcome_bit), False
    xacc = np.zeros(W, np.uint64)
    zacc = np.zeros(W, np.uint64)
    racc = 0
    for j in range(n):
        if (x[j, w] >> s) & _U1:
            racc = _rowsum_acc(xacc, zacc, racc, x[n + j], z[n + j], int(r[n + j]))
    return racc, True


@njit(cache=True)
def pauli_expect(x, z, r, n, px, pz, psign):
    W = x.shape[1]
    for i in range(n, 2 * n):
        t = np.uint64(0)
        for w in range(W):
            t += _popcount(px[w] & z[i, w]) + _popcount(pz[w] & x[i, w])
        if t & _U1:
            return 0
    xacc = np.zeros(W, np.uint64)
    zacc = np.zeros(W, np.uint64)
    racc = 0
    for j in range(n):
        t = np.uint64(0)
        for w in range(W):
            t += _popcount(px[w] & z[j, w]) + _popcount(pz[w] & x[j, w])
        if t & _U1:
            racc = _rowsum_acc(xacc, zacc, racc, x[n + j], z[n + j], int(r[n + j]))
    for w in range(W):
        if xacc[w] != px[w] or zacc[w] != pz[w]:
            raise RuntimeError(
                "tableau invariant violation: stabilizer product does not "
                "reproduce the commuting Pauli"
            )
    return 1 if racc == psign else -1


@njit(cache=True)
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
    n = x.shape[0] // 2
    for t in range(offsets.shape[0]):
        a = int(offsets[t])
        g = 0
        while a + 1 < n_sites:
            gid = int(gate_ids[t, g])
            apply_gate2q(x, z, r, a, a + 1, perm_tab[gid], sign_tab[gid])
            a += 2
            g += 1
        for q in range(n_sites):
            if meas_mask[t, q]:
                out, _ = measure_z(x, z, r, n, q, outcome_bits[t, q])
                meas_out[t, q] = np.int8(out)
