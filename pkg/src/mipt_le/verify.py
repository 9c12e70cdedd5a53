"""Brute-force verification suites backed by the dense simulator.

Each suite cross-checks one layer of the stabilizer stack against
explicit linear algebra on small systems:

* ``verify_tableau``: tableau Pauli expectations vs dense values on
  random monitored Clifford circuits.
* ``verify_graph_rules``: the X/Y/Z graph measurement rules vs dense
  post-measurement states, compared through full entropy profiles on
  every outcome branch.
* ``verify_le_plans``: the pair-entanglement predicate vs exhaustive
  fixed-basis measurement plans (soundness and completeness).
* ``verify_concurrence``: the closed-form concurrence vs the principal
  square-root construction.

Suites return report dicts and never raise on mismatch; the caller
decides how to surface failures.
"""

from __future__ import annotations

from itertools import combinations, product

import numpy as np

from . import oracle
from .cliffords import sample_two_qubit_clifford
from .graphstate import Graph, component_labels, measure_pauli
from .le import le_pair, le_protocol
from .observables import concurrence
from .tableau import PauliString, StabilizerTableau

__all__ = [
    "run_all",
    "verify_concurrence",
    "verify_graph_rules",
    "verify_le_plans",
    "verify_tableau",
]

_ATOL = 1e-9


def _report(name: str, trials: int, failures: list[str]) -> dict:
    return {
        "name": name,
        "trials": trials,
        "failures": len(failures),
        "examples": failures[:5],
        "ok": not failures,
    }


def _pauli_codes(xm: int, zm: int, n: int) -> np.ndarray:
    ops = np.zeros(n, np.uint8)
    for q in range(n):
        xb, zb = (xm >> q) & 1, (zm >> q) & 1
        ops[q] = 2 if xb and zb else 1 if xb else 3 if zb else 0
    return ops


def verify_tableau(n_trials: int = 1000, seed: int = 0, max_qubits: int = 6) -> dict:
    """Random monitored circuits: every Pauli expectation must agree."""
    rng = np.random.default_rng(seed)
    failures: list[str] = []
    for trial in range(n_trials):
        n = int(rng.integers(2, max_qubits + 1))
        tab = StabilizerTableau(n)
        psi = oracle.zero_state(n)
        for _ in range(int(rng.integers(5, 26))):
            if rng.random() < 0.75 or n < 2:
                c = sample_two_qubit_clifford(rng)
                a, b = (int(v) for v in rng.choice(n, size=2, replace=False))
                tab.apply_two_qubit(c, a, b)
                psi = oracle.apply_clifford_word(psi, c.word, a, b)
            else:
                q = int(rng.integers(n))
                out, _ = tab.measure_z(q, rng=rng)
                match = [
                    s for _, o, s in oracle.measure_qubit(psi, q, "z") if o == out
                ]
                if not match:
                    failures.append(f"trial {trial}: impossible outcome at qubit {q}")
                    break
                psi = match[0]
        else:
            grid = oracle.all_pauli_expectations(psi)
            for xm in range(1 << n):
                for zm in range(1 << n):
                    got = tab.pauli_expectation(PauliString(_pauli_codes(xm, zm, n)))
                    want = grid[xm, zm]
                    if abs(got - want.real) > _ATOL or abs(want.imag) > _ATOL:
                        failures.append(
                            f"trial {trial}: P(x={xm:b},z={zm:b}) "
                            f"tableau {got} dense {want:.3g}"
                        )
            if failures and failures[-1].startswith(f"trial {trial}"):
                if len(failures) > 50:
                    break
    return _report("tableau_vs_dense", n_trials, failures)


def _gf2_rank_bool(mat: np.ndarray) -> int:
    m = np.ascontiguousarray(mat, np.uint8).copy()
    r = 0
    for c in range(m.shape[1]):
        if r == m.shape[0]:
            break
        hits = np.flatnonzero(m[r:, c])
        if not hits.size:
            continue
        pr = r + int(hits[0])
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        others = np.flatnonzero(m[:, c])
        others = others[others != r]
        m[others] ^= m[r]
        r += 1
    return r


def graph_entropy(g: Graph, subset) -> int:
    """Bipartite entanglement entropy of a graph state in bits:
    the GF(2) rank of the cut biadjacency block."""
    inside = np.zeros(g.n, bool)
    inside[list(subset)] = True
    if (inside & ~g.present).any():
        raise ValueError("subset contains deleted vertices")
    outside = g.present & ~inside
    return _gf2_rank_bool(g.adj[np.ix_(inside, outside)])


def _random_graph(n: int, rng) -> Graph:
    adj = np.zeros((n, n), bool)
    iu = np.triu_indices(n, 1)
    bits = rng.random(iu[0].size) < 0.5
    adj[iu] = bits
    adj |= adj.T
    return Graph(adj, np.ones(n, bool))


def verify_graph_rules(samples_per_n: int = 500, seed: int = 0, max_qubits: int = 6) -> dict:
    """Measurement rules vs dense branches, via full entropy profiles."""
    rng = np.random.default_rng(seed)
    failures: list[str] = []
    trials = 0
    checked: set[bytes] = set()
    for n in range(2, max_qubits + 1):
        for _ in range(samples_per_n):
            g = _random_graph(n, rng)
            trials += 1
            key = np.packbits(g.adj).tobytes()
            if key in checked:
                continue
            checked.add(key)
            psi, _ = oracle.graph_state(g)
            for v in range(n):
                for basis in "XYZ":
                    out_g = measure_pauli(g, v, basis)
                    rest = [q for q in range(n) if q != v]
                    # subsets of the surviving vertices, one per
                    # complement pair (entropy is symmetric under it)
                    profile = {}
                    for m in range(1 << (len(rest) - 1)):
                        subset = [
                            rest[k] for k in range(len(rest) - 1) if (m >> k) & 1
                        ]
                        subset.append(rest[-1])
                        profile[tuple(subset)] = graph_entropy(out_g, subset)
                    for _, _, branch in oracle.measure_qubit(psi, v, basis):
                        for subset, want in profile.items():
                            got = oracle.entropy_bits(branch, list(subset))
                            if abs(got - want) > _ATOL:
                                failures.append(
                                    f"n={n} graph {key.hex()} {basis} on {v}: "
                                    f"S{subset} rule {want} dense {got:.6f}"
                                )
                                if len(failures) > 20:
                                    return _report(
                                        "graph_rules_vs_dense", trials, failures
                                    )
    return _report("graph_rules_vs_dense", trials, failures)


def _plan_branches(g: Graph, bases: dict[int, str]) -> list[np.ndarray]:
    """All outcome branches after measuring each vertex in its basis."""
    psi, order = oracle.graph_state(g)
    pos = {v: k for k, v in enumerate(order)}
    branches = [psi]
    for v in sorted(bases):
        nxt = []
        for s in branches:
            nxt.extend(st for _, _, st in oracle.measure_qubit(s, pos[v], bases[v]))
        branches = nxt
    return branches


def verify_le_plans(n5_samples: int = 200, seed: int = 0) -> dict:
    """Pair predicate vs exhaustive dense plan enumeration.

    Where the predicate claims entanglement, the constructive protocol
    must deliver one full bit in every branch; where it claims none, no
    fixed-basis plan on the other vertices may produce any, in any
    branch.
    """
    rng = np.random.default_rng(seed)
    failures: list[str] = []
    trials = 0

    graphs: list[Graph] = []
    for n in (2, 3, 4):
        for bits in product((False, True), repeat=n * (n - 1) // 2):
            adj = np.zeros((n, n), bool)
            adj[np.triu_indices(n, 1)] = bits
            adj |= adj.T
            graphs.append(Graph(adj, np.ones(n, bool)))
    graphs.extend(_random_graph(5, rng) for _ in range(n5_samples))

    for g in graphs:
        n = g.n
        for i, j in combinations(range(n), 2):
            trials += 1
            rest = [v for v in range(n) if v not in (i, j)]
            claim = le_pair(g, i, j)
            if claim:
                plan = le_protocol(g, i, j)
                for branch in _plan_branches(g, dict(plan.bases)):
                    got = oracle.entropy_bits(branch, [i])
                    if abs(got - 1.0) > _ATOL:
                        failures.append(
                            f"n={n} pair ({i},{j}): protocol branch entropy {got:.6f}"
                        )
                        break
            else:
                for combo in product("XYZ", repeat=len(rest)):
                    bases = dict(zip(rest, combo))
                    for branch in _plan_branches(g, bases):
                        got = oracle.entropy_bits(branch, [i])
                        if got > _ATOL:
                            failures.append(
                                f"n={n} pair ({i},{j}): plan {bases} "
                                f"made entanglement {got:.6f}"
                            )
                            break
            if len(failures) > 20:
                return _report("le_pair_vs_exhaustive_plans", trials, failures)
    return _report("le_pair_vs_exhaustive_plans", trials, failures)


def verify_concurrence(n_trials: int = 1000, seed: int = 0) -> dict:
    """Closed-form concurrence vs the square-root-route oracle on
    random two-qubit reductions of four-qubit stabilizer states."""
    rng = np.random.default_rng(seed)
    failures: list[str] = []
    for trial in range(n_trials):
        psi = oracle.zero_state(4)
        for _ in range(20):
            c = sample_two_qubit_clifford(rng)
            a, b = (int(v) for v in rng.choice(4, size=2, replace=False))
            psi = oracle.apply_clifford_word(psi, c.word, a, b)
        keep = [int(v) for v in rng.choice(4, size=2, replace=False)]
        rho = oracle.reduced_density(psi, keep)
        got = concurrence(rho)
        want = oracle.concurrence_dense(rho)
        if abs(got - want) > _ATOL:
            failures.append(f"trial {trial}: {got:.12f} vs oracle {want:.12f}")
            if len(failures) > 20:
                break
    return _report("concurrence_vs_dense", n_trials, failures)


def run_all(scale: float = 1.0, seed: int = 0, log=None) -> list[dict]:
    """Run every suite, optionally scaled down for quick smoke checks."""

    def amount(base: int) -> int:
        return max(1, int(round(base * scale)))

    reports = [
        verify_tableau(amount(1000), seed),
        verify_graph_rules(amount(500), seed),
        verify_le_plans(amount(200), seed),
        verify_concurrence(amount(1000), seed),
    ]
    if log:
        for rep in reports:
            status = "ok" if rep["ok"] else "FAIL"
            log(f"{rep['name']}: {rep['trials']} trials, "
                f"{rep['failures']} failures [{status}]")
    return reports
