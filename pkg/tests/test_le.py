import itertools

import numpy as np
import pytest

from mipt_le import (
    Graph,
    MeasurementPlan,
    delete_vertex,
    le_pair,
    le_protocol,
    le_ref,
    local_complement,
)
from mipt_le.le import execute_plan
from mipt_le.oracle import entropy_bits, graph_state, measure_qubit


def chain(n):
    return Graph.from_edges(n, [(k, k + 1) for k in range(n - 1)])


def random_graph(n, rng):
    adj = np.triu(rng.random((n, n)) < 0.5, 1)
    return Graph(adj | adj.T, np.ones(n, bool))


class TestLePair:
    def test_chain_endpoints(self):
        assert le_pair(chain(3), 0, 2) == 1

    def test_isolated_pair(self):
        assert le_pair(Graph.empty(2), 0, 1) == 0

    def test_validation(self):
        g = chain(3)
        with pytest.raises(ValueError):
            le_pair(g, 1, 1)
        with pytest.raises(ValueError):
            le_pair(delete_vertex(g, 1), 0, 1)

    def test_symmetry(self, rng):
        for _ in range(20):
            g = random_graph(5, rng)
            i, j = (int(v) for v in rng.choice(5, size=2, replace=False))
            assert le_pair(g, i, j) == le_pair(g, j, i)

    def test_lc_invariance(self, rng):
        for _ in range(30):
            g = random_graph(6, rng)
            v = int(rng.integers(6))
            i, j = (int(u) for u in rng.choice(6, size=2, replace=False))
            assert le_pair(g, i, j) == le_pair(local_complement(g, v), i, j)


class TestLeRef:
    def test_bell_edge(self):
        assert le_ref(Graph.from_edges(2, [(0, 1)]), 1) == 1

    def test_isolated(self):
        assert le_ref(Graph.empty(2), 1) == 0

    def test_deleted_ref_rejected(self):
        g = delete_vertex(chain(3), 2)
        with pytest.raises(ValueError):
            le_ref(g, 2)


class TestLeProtocol:
    def test_chain_plan(self):
        plan = le_protocol(chain(3), 0, 2)
        assert plan.keep == (0, 2)
        assert plan.bases == {1: "Y"}
        out = execute_plan(chain(3), plan)
        assert out.edges() == [(0, 2)]

    def test_adjacent_pair_rest_z(self):
        g = Graph.from_edges(4, [(0, 1)])
        plan = le_protocol(g, 0, 1)
        assert plan.bases == {2: "Z", 3: "Z"}
        out = execute_plan(g, plan)
        assert out.edges() == [(0, 1)]

    def test_four_cycle_pair(self):
        # opposite corners of a 4-cycle: one interior path vertex gets Y,
        # the off-path vertex gets Z
        g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
        plan = le_protocol(g, 1, 3)
        assert plan.keep == (1, 3)
        assert sorted(plan.bases) == [0, 2]
        assert sorted(plan.bases.values()) == ["Y", "Z"]
        out = execute_plan(g, plan)
        assert out.edges() == [(1, 3)]

    def test_disconnected_pair_rejected(self):
        with pytest.raises(ValueError):
            le_protocol(Graph.empty(3), 0, 2)

    def test_plan_validation(self):
        g = chain(3)
        with pytest.raises(ValueError):
            MeasurementPlan(bases={}, keep=(0, 0)).validate(g)
        with pytest.raises(ValueError):
            MeasurementPlan(bases={0: "Z"}, keep=(0, 2)).validate(g)
        with pytest.raises(ValueError):
            MeasurementPlan(bases={}, keep=(0, 2)).validate(g)
        with pytest.raises(ValueError):
            MeasurementPlan(bases={1: "Q"}, keep=(0, 2)).validate(g)

    def test_execution_always_leaves_the_kept_edge(self, rng):
        hits = 0
        for _ in range(60):
            n = int(rng.integers(3, 7))
            g = random_graph(n, rng)
            i, j = (int(v) for v in rng.choice(n, size=2, replace=False))
            if le_pair(g, i, j) != 1:
                continue
            hits += 1
            out = execute_plan(g, le_protocol(g, i, j))
            assert out.present.sum() == 2
            assert out.adj[i, j]
        assert hits > 10

    def test_protocol_certifies_bell_pair_in_oracle(self, rng):
        # every outcome branch of the executed plan leaves the kept pair
        # with one bit of entanglement
        for _ in range(10):
            n = int(rng.integers(3, 6))
            g = random_graph(n, rng)
            i, j = (int(v) for v in rng.choice(n, size=2, replace=False))
            if le_pair(g, i, j) != 1:
                continue
            plan = le_protocol(g, i, j)
            state, order = graph_state(g)
            branches = [state]
            for v in sorted(plan.bases):
                branches = [
                    s2
                    for s in branches
                    for _, _, s2 in measure_qubit(s, order.index(v), plan.bases[v])
                ]
            for s in branches:
                assert abs(entropy_bits(s, [order.index(i)]) - 1.0) < 1e-9

    def test_no_plan_entangles_disconnected_pairs(self):
        # exhaustive completeness on a small disconnected graph
        g = Graph.from_edges(4, [(0, 1), (2, 3)])
        i, j = 0, 2
        assert le_pair(g, i, j) == 0
        state, order = graph_state(g)
        others = [v for v in range(4) if v not in (i, j)]
        for combo in itertools.product("XYZ", repeat=len(others)):
            branches = [state]
            for v, basis in zip(others, combo):
                branches = [
                    s2
                    for s in branches
                    for _, _, s2 in measure_qubit(s, order.index(v), basis)
                ]
            for s in branches:
                assert entropy_bits(s, [order.index(i)]) < 1e-9
