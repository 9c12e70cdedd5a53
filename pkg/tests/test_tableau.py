import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mipt_le import PauliString, StabilizerTableau, sample_two_qubit_clifford
from mipt_le.oracle import (
    all_pauli_expectations,
    state_from_tableau,
    zero_state,
)


def exp(tab, label):
    return tab.pauli_expectation(PauliString.from_label(label))


def test_new_tableau_is_all_zeros():
    t = StabilizerTableau(1)
    assert t.stabilizer_labels() == ["+Z"]
    assert t.row_label(0) == "+X"
    t3 = StabilizerTableau(3)
    assert t3.stabilizer_labels() == ["+ZII", "+IZI", "+IIZ"]


def test_zero_qubits_rejected():
    with pytest.raises(ValueError):
        StabilizerTableau(0)


def test_bell_preparation():
    t = StabilizerTableau(2)
    t.h(0)
    t.cnot(0, 1)
    assert exp(t, "XX") == 1
    assert exp(t, "ZZ") == 1
    assert exp(t, "ZI") == 0
    assert exp(t, "YY") == -1


def test_single_qubit_gates():
    t = StabilizerTableau(1)
    t.h(0)
    assert t.stabilizer_labels() == ["+X"]
    t.s(0)
    assert t.stabilizer_labels() == ["+Y"]
    t.sdg(0)
    assert t.stabilizer_labels() == ["+X"]
    t.z_gate(0)
    assert t.stabilizer_labels() == ["-X"]


def test_cz_on_plus_plus_gives_one_edge_graph_state():
    t = StabilizerTableau(2)
    t.h(0)
    t.h(1)
    t.cz(0, 1)
    assert exp(t, "XZ") == 1
    assert exp(t, "ZX") == 1


def test_gate_index_validation():
    t = StabilizerTableau(2)
    with pytest.raises(ValueError):
        t.h(2)
    with pytest.raises(ValueError):
        t.cnot(0, 0)
    with pytest.raises(ValueError):
        t.cz(1, 1)
    with pytest.raises(ValueError):
        t.apply_clifford("h", -1)
    with pytest.raises(ValueError):
        t.apply_clifford("nope", 0)


def test_measure_z_deterministic_on_zero():
    t = StabilizerTableau(1)
    out, det = t.measure_z(0)
    assert (out, det) == (0, True)


def test_measure_z_random_on_plus(rng):
    outcomes = []
    for _ in range(200):
        t = StabilizerTableau(1)
        t.h(0)
        out, det = t.measure_z(0, rng=rng)
        assert det is False
        # post-state is |outcome>
        assert exp(t, "Z") == 1 - 2 * out
        outcomes.append(out)
    assert 60 < sum(outcomes) < 140


def test_measure_z_requires_rng_when_random():
    t = StabilizerTableau(1)
    t.h(0)
    with pytest.raises(ValueError):
        t.measure_z(0)


def test_bell_measurements_correlate(rng):
    for _ in range(20):
        t = StabilizerTableau(2)
        t.h(0)
        t.cnot(0, 1)
        o0, d0 = t.measure_z(0, rng=rng)
        o1, d1 = t.measure_z(1, rng=rng)
        assert d0 is False
        assert d1 is True
        assert o0 == o1


def test_measure_z_idempotent(rng):
    for _ in range(20):
        t = StabilizerTableau(3)
        for q in range(3):
            t.h(q)
        t.cz(0, 1)
        t.cz(1, 2)
        out1, det1 = t.measure_z(1, rng=rng)
        out2, det2 = t.measure_z(1, rng=rng)
        assert det2 is True
        assert out2 == out1


def test_pauli_expectation_validation():
    t = StabilizerTableau(2)
    with pytest.raises(ValueError):
        t.pauli_expectation(PauliString.from_label("X"))
    with pytest.raises(ValueError):
        PauliString.from_label("XQ")


def test_reduced_density_bell_and_product():
    t = StabilizerTableau(2)
    t.h(0)
    t.cnot(0, 1)
    rho = t.reduced_density_2q(0, 1)
    phi = np.zeros(4)
    phi[[0, 3]] = 1 / np.sqrt(2)
    assert np.allclose(rho, np.outer(phi, phi), atol=1e-12)

    t0 = StabilizerTableau(2)
    rho0 = t0.reduced_density_2q(0, 1)
    want = np.zeros((4, 4))
    want[0, 0] = 1.0
    assert np.allclose(rho0, want, atol=1e-12)
    with pytest.raises(ValueError):
        t0.reduced_density_2q(1, 1)


def test_reduced_density_ghz_partial_trace():
    t = StabilizerTableau(3)
    t.h(0)
    t.cnot(0, 1)
    t.cnot(1, 2)
    rho = t.reduced_density_2q(0, 1)
    assert np.allclose(rho, np.diag([0.5, 0, 0, 0.5]), atol=1e-12)
    w = np.linalg.eigvalsh(rho)
    assert w.min() >= -1e-12 and w.max() <= 1 + 1e-12
    assert abs(np.trace(rho).real - 1) < 1e-12


def test_entanglement_entropy_examples(rng):
    t = StabilizerTableau(2)
    assert t.entanglement_entropy([0]) == 0
    t.h(0)
    t.cnot(0, 1)
    assert t.entanglement_entropy([0]) == 1
    # GHZ: every bipartition has entropy 1
    g = StabilizerTableau(3)
    g.h(0)
    g.cnot(0, 1)
    g.cnot(1, 2)
    assert g.entanglement_entropy([0]) == 1
    assert g.entanglement_entropy([0, 1]) == 1


@given(st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_invariants_hold_after_random_evolution(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    t = StabilizerTableau(n)
    for _ in range(30):
        if rng.random() < 0.75:
            a, b = rng.choice(n, size=2, replace=False)
            t.apply_two_qubit(sample_two_qubit_clifford(rng), int(a), int(b))
        else:
            t.measure_z(int(rng.integers(n)), rng=rng)
    t.check_invariants()


def test_matches_dense_oracle_on_random_circuit(rng):
    n = 4
    t = StabilizerTableau(n)
    state = zero_state(n)
    from mipt_le.oracle import apply_clifford_word, measure_qubit

    for _ in range(25):
        if rng.random() < 0.7:
            a, b = (int(v) for v in rng.choice(n, size=2, replace=False))
            gate = sample_two_qubit_clifford(rng)
            t.apply_two_qubit(gate, a, b)
            state = apply_clifford_word(state, gate.word, a, b)
        else:
            q = int(rng.integers(n))
            out, _ = t.measure_z(q, rng=rng)
            branches = {o: s for _, o, s in measure_qubit(state, q, "Z")}
            state = branches[out]
    assert np.allclose(
        all_pauli_expectations(state),
        all_pauli_expectations(state_from_tableau(t)),
        atol=1e-9,
    )


def test_multiword_register():
    # n > 64 exercises the multi-word packed path
    n = 80
    t = StabilizerTableau(n)
    t.h(0)
    for q in range(n - 1):
        t.cnot(q, q + 1)
    labels = ["I"] * n
    labels[0] = labels[n - 1] = "Z"
    assert t.pauli_expectation(PauliString.from_label("".join(labels))) == 1
    assert t.entanglement_entropy(list(range(40))) == 1
    t.check_invariants()
