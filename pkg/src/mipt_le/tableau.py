"""Stabilizer tableau on packed binary symplectic rows.

A state on n qubits is stored as 2n generator rows: destabilizers
0..n-1 and stabilizers n..2n-1, each a packed x/z bit row plus a sign
bit (0 for +, 1 for -).  Single gates are applied with vectorized
column updates; bulk circuit evolution goes through the selected kernel
backend.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bitpack
from .backend import kernels
from .cliffords import CliffordTwoQubit

PAULI_CHARS = "IXYZ"

_PAULI_MATS = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass(frozen=True)
class PauliString:
    """A signed Pauli operator: per-site codes into "IXYZ" and a +-1 sign."""

    ops: np.ndarray
    sign: int = 1

    def __post_init__(self):
        ops = np.ascontiguousarray(self.ops, dtype=np.uint8)
        if ops.ndim != 1 or not ops.size:
            raise ValueError("ops must be a non-empty 1-d code array")
        if ops.max(initial=0) > 3:
            raise ValueError("Pauli codes must lie in 0..3 (IXYZ)")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")
        object.__setattr__(self, "ops", ops)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse labels like "XIZ", "+YY" or "-ZXI"."""
        sign = 1
        if label[:1] in "+-":
            sign = -1 if label[0] == "-" else 1
            label = label[1:]
        try:
            codes = [PAULI_CHARS.index(c) for c in label.upper()]
        except ValueError:
            raise ValueError(f"invalid Pauli label {label!r}") from None
        return cls(np.array(codes, np.uint8), sign)

    @classmethod
    def single(cls, n: int, q: int, kind: str, sign: int = 1) -> "PauliString":
        """Weight-one Pauli ``kind`` on site q of an n-site register."""
        ops = np.zeros(n, np.uint8)
        ops[q] = PAULI_CHARS.index(kind.upper())
        return cls(ops, sign)

    def __len__(self) -> int:
        return int(self.ops.size)

    def __str__(self) -> str:
        return ("-" if self.sign < 0 else "+") + "".join(
            PAULI_CHARS[c] for c in self.ops
        )

    def x_bits(self) -> np.ndarray:
        return ((self.ops == 1) | (self.ops == 2)).astype(np.uint8)

    def z_bits(self) -> np.ndarray:
        return ((self.ops == 2) | (self.ops == 3)).astype(np.uint8)


class StabilizerTableau:
    """Aaronson-Gottesman tableau with rows packed 64 qubits per word."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"need at least one qubit, got n={n}")
        self.n = n
        self.n_words = bitpack.n_words(n)
        self.x = np.zeros((2 * n, self.n_words), np.uint64)
        self.z = np.zeros((2 * n, self.n_words), np.uint64)
        self.r = np.zeros(2 * n, np.uint8)
        for q in range(n):
            self.x[q, q >> 6] |= np.uint64(1) << np.uint64(q & 63)
            self.z[n + q, q >> 6] |= np.uint64(1) << np.uint64(q & 63)

    def copy(self) -> "StabilizerTableau":
        other = object.__new__(StabilizerTableau)
        other.n = self.n
        other.n_words = self.n_words
        other.x = self.x.copy()
        other.z = self.z.copy()
        other.r = self.r.copy()
        return other

    def _check_qubit(self, *qs: int) -> None:
        for q in qs:
            if not 0 <= q < self.n:
                raise ValueError(f"qubit {q} outside [0, {self.n})")
        if len(set(qs)) != len(qs):
            raise ValueError(f"qubits must be distinct, got {qs}")

    def _xbit(self, q: int) -> np.ndarray:
        return bitpack.get_bit(self.x, q)

    def _zbit(self, q: int) -> np.ndarray:
        return bitpack.get_bit(self.z, q)

    # -- named gates ---------------------------------------------------

    def h(self, q: int) -> None:
        self._check_qubit(q)
        xq, zq = self._xbit(q), self._zbit(q)
        self.r ^= (xq & zq).astype(np.uint8)
        bitpack.set_bit(self.x, q, zq)
        bitpack.set_bit(self.z, q, xq)

    def s(self, q: int) -> None:
        self._check_qubit(q)
        xq, zq = self._xbit(q), self._zbit(q)
        self.r ^= (xq & zq).astype(np.uint8)
        bitpack.set_bit(self.z, q, zq ^ xq)

    def sdg(self, q: int) -> None:
        self._check_qubit(q)
        xq, zq = self._xbit(q), self._zbit(q)
        self.r ^= (xq & ~zq & np.uint64(1)).astype(np.uint8)
        bitpack.set_bit(self.z, q, zq ^ xq)

    def x_gate(self, q: int) -> None:
        self._check_qubit(q)
        self.r ^= self._zbit(q).astype(np.uint8)

    def y_gate(self, q: int) -> None:
        self._check_qubit(q)
        self.r ^= (self._xbit(q) ^ self._zbit(q)).astype(np.uint8)

    def z_gate(self, q: int) -> None:
        self._check_qubit(q)
        self.r ^= self._xbit(q).astype(np.uint8)

    def cnot(self, c: int, t: int) -> None:
        self._check_qubit(c, t)
        xc, zc = self._xbit(c), self._zbit(c)
        xt, zt = self._xbit(t), self._zbit(t)
        self.r ^= (xc & zt & (xt ^ zc ^ np.uint64(1))).astype(np.uint8)
        bitpack.set_bit(self.x, t, xt ^ xc)
        bitpack.set_bit(self.z, c, zc ^ zt)

    def cz(self, a: int, b: int) -> None:
        self._check_qubit(a, b)
        xa, za = self._xbit(a), self._zbit(a)
        xb, zb = self._xbit(b), self._zbit(b)
        self.r ^= (xa & xb & (za ^ zb)).astype(np.uint8)
        bitpack.set_bit(self.z, a, za ^ xb)
        bitpack.set_bit(self.z, b, zb ^ xa)

    def apply_two_qubit(self, gate: CliffordTwoQubit, a: int, b: int) -> None:
        """Conjugate by a sampled two-qubit Clifford acting on (a, b)."""
        self._check_qubit(a, b)
        kernels.apply_gate2q(self.x, self.z, self.r, a, b, gate.perm, gate.sgn)

    def apply_clifford(self, name: str, *qubits: int) -> None:
        """Apply a named gate: h, s, sdg, x, y, z, cnot/cx, cz."""
        table = {
            "h": self.h,
            "s": self.s,
            "sdg": self.sdg,
            "x": self.x_gate,
            "y": self.y_gate,
            "z": self.z_gate,
            "cnot": self.cnot,
            "cx": self.cnot,
            "cz": self.cz,
        }
        try:
            fn = table[name.lower()]
        except KeyError:
            raise ValueError(f"unknown gate {name!r}") from None
        fn(*qubits)

    # -- measurement and readout ----------------------------------------

    def measure_z(
        self,
        q: int,
        rng: np.random.Generator | None = None,
        outcome_bit: int | None = None,
    ) -> tuple[int, bool]:
        """Measure Z on qubit q; returns (outcome, deterministic).

        An indeterminate outcome needs a coin: either an explicit
        ``outcome_bit`` or an ``rng`` to draw one from.
        """
        self._check_qubit(q)
        if outcome_bit is None:
            indeterminate = bool(bitpack.get_bit(self.x[self.n :], q).any())
            if indeterminate:
                if rng is None:
                    raise ValueError(
                        f"measurement on qubit {q} is indeterminate; "
                        "pass rng or outcome_bit"
                    )
                outcome_bit = int(rng.integers(2))
            else:
                outcome_bit = 0
        elif outcome_bit not in (0, 1):
            raise ValueError(f"outcome_bit must be 0 or 1, got {outcome_bit}")
        out, det = kernels.measure_z(
            self.x, self.z, self.r, self.n, q, np.uint8(outcome_bit)
        )
        return int(out), bool(det)

    def _packed_pauli(self, pauli: PauliString) -> tuple[np.ndarray, np.ndarray, int]:
        if len(pauli) != self.n:
            raise ValueError(
                f"Pauli acts on {len(pauli)} sites, tableau has {self.n}"
            )
        px = bitpack.pack_rows(pauli.x_bits())
        pz = bitpack.pack_rows(pauli.z_bits())
        return px, pz, 0 if pauli.sign > 0 else 1

    def pauli_expectation(self, pauli: PauliString) -> int:
        """<P> for a stabilizer state: exactly -1, 0 or +1."""
        px, pz, ps = self._packed_pauli(pauli)
        return int(
            kernels.pauli_expect(self.x, self.z, self.r, self.n, px, pz, ps)
        )

    def reduced_density_2q(self, a: int, b: int) -> np.ndarray:
        """Two-qubit reduced density matrix of (a, b), a the first factor."""
        self._check_qubit(a, b)
        rho = np.zeros((4, 4), complex)
        for ca in range(4):
            for cb in range(4):
                ops = np.zeros(self.n, np.uint8)
                ops[a] = ca
                ops[b] = cb
                val = self.pauli_expectation(PauliString(ops))
                if val:
                    rho += val * np.kron(_PAULI_MATS[ca], _PAULI_MATS[cb])
        return rho / 4.0

    # -- structure ------------------------------------------------------

    def stabilizer_bits(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Unpacked stabilizer block: (sx, sz) as (n, n) uint8 and signs."""
        sx = bitpack.unpack_rows(self.x[self.n :], self.n)
        sz = bitpack.unpack_rows(self.z[self.n :], self.n)
        return sx, sz, self.r[self.n :].copy()

    def row_label(self, i: int) -> str:
        """Generator row i rendered as a signed Pauli label."""
        xb = bitpack.unpack_rows(self.x[i], self.n)
        zb = bitpack.unpack_rows(self.z[i], self.n)
        codes = xb + 2 * zb  # 0 I, 1 X, 2 Z, 3 Y in this temporary basis
        chars = "IXZY"
        return ("-" if self.r[i] else "+") + "".join(chars[c] for c in codes)

    def stabilizer_labels(self) -> list[str]:
        return [self.row_label(i) for i in range(self.n, 2 * self.n)]

    def entanglement_entropy(self, sites) -> int:
        """Entanglement entropy of a site subset, in bits.

        For stabilizer states S_A = |A| - dim of the stabilizer subgroup
        supported inside A; the latter is n minus the GF(2) rank of the
        stabilizer rows restricted to the complement.
        """
        sites = sorted(set(int(s) for s in sites))
        if any(not 0 <= s < self.n for s in sites):
            raise ValueError(f"sites {sites} outside [0, {self.n})")
        comp = [q for q in range(self.n) if q not in set(sites)]
        if not comp:
            return 0
        sx = bitpack.unpack_rows(self.x[self.n :], self.n)[:, comp]
        sz = bitpack.unpack_rows(self.z[self.n :], self.n)[:, comp]
        rows = bitpack.pack_rows(np.concatenate([sx, sz], axis=1))
        return len(sites) - (self.n - bitpack.gf2_rank(rows))

    def check_invariants(self) -> None:
        """Raise if the tableau left the valid-state manifold."""
        n, W = self.n, self.n_words
        xb = bitpack.unpack_rows(self.x, n).astype(np.int64)
        zb = bitpack.unpack_rows(self.z, n).astype(np.int64)
        sym = (xb @ zb.T + zb @ xb.T) % 2
        sx, sz = sym[n:, n:], sym[:n, :n]
        if sx.any():
            raise AssertionError("stabilizer rows do not commute")
        if sz.any():
            raise AssertionError("destabilizer rows do not commute")
        pair = sym[:n, n:]
        if not np.array_equal(pair, np.eye(n, dtype=np.int64)):
            raise AssertionError("destabilizer/stabilizer pairing broken")
        full = np.concatenate(
            [self.x.reshape(2 * n, W), self.z.reshape(2 * n, W)], axis=1
        )
        if bitpack.gf2_rank(full) != 2 * n:
            raise AssertionError("generator rows not independent")
