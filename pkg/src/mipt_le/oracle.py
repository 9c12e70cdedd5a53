"""Dense statevector oracle for verification on small systems.

Everything here is slow and exact: states are flat complex arrays with
qubit q on tensor axis q (so qubit 0 is the most significant index
bit).  Used only by tests and the ``verify`` command; nothing in the
simulation pipeline depends on this module.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .graphstate import Graph, LocalCorrections

MAX_QUBITS = 10

PAULI_1Q = {
    "i": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}

GATES_1Q = {
    "h": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "s": np.array([[1, 0], [0, 1j]], dtype=complex),
    "sdg": np.array([[1, 0], [0, -1j]], dtype=complex),
    "x": PAULI_1Q["x"],
    "y": PAULI_1Q["y"],
    "z": PAULI_1Q["z"],
}


def _check_n(n: int) -> None:
    if n > MAX_QUBITS:
        raise ValueError(f"dense oracle capped at {MAX_QUBITS} qubits, got {n}")


def num_qubits(state: np.ndarray) -> int:
    n = int(state.size).bit_length() - 1
    if state.size != 1 << n:
        raise ValueError(f"state length {state.size} is not a power of two")
    return n


def zero_state(n: int) -> np.ndarray:
    _check_n(n)
    psi = np.zeros(1 << n, complex)
    psi[0] = 1.0
    return psi


def plus_state(n: int) -> np.ndarray:
    _check_n(n)
    return np.full(1 << n, 1.0 / np.sqrt(1 << n), complex)


def apply_1q(state: np.ndarray, u: np.ndarray, q: int) -> np.ndarray:
    n = num_qubits(state)
    psi = state.reshape((2,) * n)
    psi = np.moveaxis(psi, q, 0)
    psi = np.tensordot(u, psi, axes=(1, 0))
    return np.moveaxis(psi, 0, q).reshape(-1)


def apply_cnot(state: np.ndarray, c: int, t: int) -> np.ndarray:
    n = num_qubits(state)
    psi = state.reshape((2,) * n).copy()
    psi = np.moveaxis(psi, (c, t), (0, 1))
    psi[1, 0], psi[1, 1] = psi[1, 1].copy(), psi[1, 0].copy()
    return np.moveaxis(psi, (0, 1), (c, t)).reshape(-1)


def apply_cz(state: np.ndarray, a: int, b: int) -> np.ndarray:
    n = num_qubits(state)
    psi = state.reshape((2,) * n).copy()
    psi = np.moveaxis(psi, (a, b), (0, 1))
    psi[1, 1] = -psi[1, 1]
    return np.moveaxis(psi, (0, 1), (a, b)).reshape(-1)


def apply_named(state: np.ndarray, gate: str, *qubits: int) -> np.ndarray:
    g = gate.lower()
    if g in GATES_1Q:
        (q,) = qubits
        return apply_1q(state, GATES_1Q[g], q)
    if g in ("cx", "cnot"):
        return apply_cnot(state, *qubits)
    if g == "cz":
        return apply_cz(state, *qubits)
    raise ValueError(f"unknown gate {gate!r}")


def apply_clifford_word(state: np.ndarray, word, a: int, b: int) -> np.ndarray:
    """Replay a two-qubit Clifford generator word on qubits (a, b)."""
    for token in word:
        if token == "h0":
            state = apply_named(state, "h", a)
        elif token == "h1":
            state = apply_named(state, "h", b)
        elif token == "s0":
            state = apply_named(state, "s", a)
        elif token == "s1":
            state = apply_named(state, "s", b)
        elif token == "cx01":
            state = apply_cnot(state, a, b)
        elif token == "cx10":
            state = apply_cnot(state, b, a)
        else:
            raise ValueError(f"unknown word token {token!r}")
    return state


def apply_pauli(state: np.ndarray, ops: np.ndarray, sign: int = 1) -> np.ndarray:
    """Apply sign * prod_q P_q with codes 0..3 = I X Y Z."""
    out = complex(sign) * state
    for q, c in enumerate(ops):
        if c:
            out = apply_1q(out, PAULI_1Q["ixyz"[c]], q)
    return out


def expectation_pauli(state: np.ndarray, ops: np.ndarray, sign: int = 1) -> float:
    return float(np.real(np.vdot(state, apply_pauli(state, ops, sign))))


@lru_cache(maxsize=8)
def _parity_matrix(n: int) -> np.ndarray:
    b = np.arange(1 << n)
    return np.where(np.bitwise_count(b[:, None] & b[None, :]) & 1, -1.0, 1.0)


def all_pauli_expectations(state: np.ndarray) -> np.ndarray:
    """E[xm, zm] = <i^{|x&z|} X^x Z^z> for all masks, bit q = qubit q."""
    n = num_qubits(state)
    psi = state.reshape((2,) * n).transpose(tuple(range(n - 1, -1, -1))).reshape(-1)
    dim = 1 << n
    b = np.arange(dim)
    m = psi.conj()[b[:, None] ^ b[None, :]] * psi[None, :]  # m[xm, b]
    e = m @ _parity_matrix(n)  # e[xm, zm]
    ny = np.bitwise_count(b[:, None] & b[None, :])
    return e * (1j ** ny)


def measure_qubit(state: np.ndarray, q: int, basis: str):
    """All nonzero-probability branches of a Pauli measurement.

    Returns a list of (probability, outcome, post_state) with outcome
    0 for +1 and 1 for -1, post states normalized.
    """
    n = num_qubits(state)
    ops = np.zeros(n, np.uint8)
    ops[q] = "ixyz".index(basis.lower())
    if ops[q] == 0:
        raise ValueError(f"basis must be X, Y or Z, got {basis!r}")
    pv = apply_pauli(state, ops)
    out = []
    for outcome, s in ((0, 1.0), (1, -1.0)):
        branch = (state + s * pv) / 2.0
        prob = float(np.real(np.vdot(branch, branch)))
        if prob > 1e-12:
            out.append((prob, outcome, branch / np.sqrt(prob)))
    return out


def reduced_density(state: np.ndarray, keep) -> np.ndarray:
    """Density matrix of the kept qubits, tensor factors in given order."""
    n = num_qubits(state)
    keep = list(keep)
    rest = [q for q in range(n) if q not in keep]
    psi = state.reshape((2,) * n).transpose(keep + rest)
    mat = psi.reshape(1 << len(keep), 1 << len(rest))
    return mat @ mat.conj().T


def entropy_bits(state: np.ndarray, subset) -> float:
    """Entanglement entropy of a qubit subset, in bits."""
    n = num_qubits(state)
    subset = sorted(subset)
    if not subset or len(subset) == n:
        return 0.0
    rest = [q for q in range(n) if q not in subset]
    mat = state.reshape((2,) * n).transpose(subset + rest)
    sv = np.linalg.svd(
        mat.reshape(1 << len(subset), 1 << len(rest)), compute_uv=False
    )
    lam = sv**2
    lam = lam[lam > 1e-15]
    return float(-(lam * np.log2(lam)).sum())


def graph_state(g: Graph) -> tuple[np.ndarray, list[int]]:
    """Dense state of the present vertices; returns (state, vertex order)."""
    verts = np.flatnonzero(g.present).tolist()
    _check_n(len(verts))
    pos = {v: k for k, v in enumerate(verts)}
    state = plus_state(len(verts))
    for a, b in g.edges():
        state = apply_cz(state, pos[a], pos[b])
    return state, verts


def state_from_tableau(t) -> np.ndarray:
    """Dense state with stabilizer projectors applied to basis states."""
    n = t.n
    _check_n(n)
    from . import bitpack

    sx = bitpack.unpack_rows(t.x[n:], n)
    sz = bitpack.unpack_rows(t.z[n:], n)
    codes = np.where(sx & sz, 2, np.where(sx, 1, np.where(sz, 3, 0))).astype(np.uint8)
    signs = [(-1.0) ** int(b) for b in t.r[n:]]
    for k in range(1 << n):
        v = np.zeros(1 << n, complex)
        v[k] = 1.0
        for row in range(n):
            v = (v + signs[row] * apply_pauli(v, codes[row])) / 2.0
        norm2 = float(np.real(np.vdot(v, v)))
        if norm2 > 1e-6:
            v /= np.sqrt(norm2)
            nz = np.flatnonzero(np.abs(v) > 1e-9)[0]
            v *= np.abs(v[nz]) / v[nz]
            return v
    raise AssertionError("no basis state overlaps the stabilizer projector")


def apply_corrections(state: np.ndarray, corr: LocalCorrections, forward: bool = True):
    """Apply local corrections (or their inverse) to a dense state."""
    ops = corr.forward_ops() if forward else corr.undo_ops()
    for gate, v in ops:
        state = apply_named(state, gate, v)
    return state


def _sqrtm_psd(mat: np.ndarray) -> np.ndarray:
    """Principal square root of a Hermitian PSD matrix."""
    w, v = np.linalg.eigh(mat)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def concurrence_dense(rho: np.ndarray) -> float:
    """Wootters concurrence via the principal square root route.

    Spectrum noise below 1e-12 is clipped to zero before the square
    root; otherwise exact zero eigenvalues surface as ~1e-9 artifacts.
    """
    yy = np.kron(PAULI_1Q["y"], PAULI_1Q["y"])
    rho_t = yy @ rho.conj() @ yy
    sq = _sqrtm_psd(rho.astype(complex))
    w = np.linalg.eigvalsh(sq @ rho_t @ sq)
    w[w < 1e-12] = 0.0
    lam = np.sqrt(w)[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.abs(np.vdot(a, b)) ** 2)
