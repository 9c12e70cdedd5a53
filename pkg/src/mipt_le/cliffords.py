"""The two-qubit Clifford group as conjugation tables.

Each group element (modulo global phase) is stored as its action on the
16 two-site Pauli patterns t = xa | za<<1 | xb<<2 | zb<<3: a permutation
``perm`` of pattern indices plus a sign bit ``sgn`` per pattern.  The
full group of 11520 elements (720 symplectic matrices x 16 sign
choices) is generated once by breadth-first closure over a fixed
generating set; the BFS visit order is deterministic, so a gate id
sampled from these tables is reproducible across runs and backends.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

GROUP_ORDER = 11520
SYMPLECTIC_ORDER = 720

#: Generator names; each is also a dense-simulator gate word token.
GENERATORS = ("h0", "h1", "s0", "s1", "cx01", "cx10")


def _conj_pattern(gate: str, t: int, s: int) -> tuple[int, int]:
    """Conjugate pattern t (sign bit s) by one generator."""
    xa, za = t & 1, (t >> 1) & 1
    xb, zb = (t >> 2) & 1, (t >> 3) & 1
    if gate == "h0":
        s ^= xa & za
        xa, za = za, xa
    elif gate == "h1":
        s ^= xb & zb
        xb, zb = zb, xb
    elif gate == "s0":
        s ^= xa & za
        za ^= xa
    elif gate == "s1":
        s ^= xb & zb
        zb ^= xb
    elif gate == "cx01":
        s ^= xa & zb & (xb ^ za ^ 1)
        xb ^= xa
        za ^= zb
    elif gate == "cx10":
        s ^= xb & za & (xa ^ zb ^ 1)
        xa ^= xb
        zb ^= za
    else:
        raise ValueError(f"unknown generator {gate!r}")
    return xa | (za << 1) | (xb << 2) | (zb << 3), s


def _generator_tables() -> dict[str, tuple[np.ndarray, np.ndarray]]:
    out = {}
    for gate in GENERATORS:
        perm = np.zeros(16, np.uint8)
        sgn = np.zeros(16, np.uint8)
        for t in range(16):
            perm[t], sgn[t] = _conj_pattern(gate, t, 0)
        out[gate] = (perm, sgn)
    return out


@lru_cache(maxsize=1)
def group_tables() -> tuple[np.ndarray, np.ndarray, tuple[tuple[str, ...], ...]]:
    """Build (perm, sgn, words) for the whole group.

    perm, sgn: (11520, 16) uint8 conjugation tables; words[i] is a
    generator sequence (applied left to right) realizing element i, used
    by the dense oracle to replay sampled gates.
    """
    gens = _generator_tables()
    perms = [np.arange(16, dtype=np.uint8)]
    sgns = [np.zeros(16, np.uint8)]
    words: list[tuple[str, ...]] = [()]
    seen = {(perms[0].tobytes(), sgns[0].tobytes()): 0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        pe, se, we = perms[i], sgns[i], words[i]
        for gate in GENERATORS:
            pg, sg = gens[gate]
            pn = pg[pe]
            sn = se ^ sg[pe]
            key = (pn.tobytes(), sn.tobytes())
            if key not in seen:
                seen[key] = len(perms)
                perms.append(pn)
                sgns.append(sn)
                words.append(we + (gate,))
                queue.append(seen[key])
    if len(perms) != GROUP_ORDER:  # pragma: no cover
        raise AssertionError(f"group closure produced {len(perms)} elements")
    return np.array(perms), np.array(sgns), tuple(words)


@dataclass(frozen=True)
class CliffordTwoQubit:
    """One two-qubit Clifford: pattern permutation, signs, generator word."""

    index: int
    perm: np.ndarray = field(repr=False)
    sgn: np.ndarray = field(repr=False)
    word: tuple[str, ...] = field(repr=False)

    @property
    def symplectic(self) -> np.ndarray:
        """4x4 GF(2) matrix over basis (xa, za, xb, zb); column j is the
        image pattern of generator 1<<j."""
        m = np.zeros((4, 4), np.uint8)
        for j in range(4):
            img = int(self.perm[1 << j])
            for i in range(4):
                m[i, j] = (img >> i) & 1
        return m

    @property
    def phases(self) -> np.ndarray:
        """Sign bits picked up by the four single-Pauli generators."""
        return np.array([self.sgn[1 << j] for j in range(4)], np.uint8)


def clifford_from_index(index: int) -> CliffordTwoQubit:
    if not 0 <= index < GROUP_ORDER:
        raise ValueError(f"gate index {index} outside [0, {GROUP_ORDER})")
    perm, sgn, words = group_tables()
    return CliffordTwoQubit(index, perm[index], sgn[index], words[index])


def sample_two_qubit_clifford(rng: np.random.Generator) -> CliffordTwoQubit:
    """Uniform sample over all 11520 two-qubit Cliffords."""
    return clifford_from_index(int(rng.integers(GROUP_ORDER)))


def is_symplectic(m: np.ndarray) -> bool:
    """Check m^T Omega m == Omega over GF(2), Omega the (xa,za|xb,zb) form."""
    omega = np.array(
        [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], np.uint8
    )
    return bool(np.array_equal((m.T @ omega @ m) % 2, omega))
