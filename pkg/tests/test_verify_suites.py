"""Reduced-scale runs of the dense-oracle verification suites.

The full-scale runs (1000 circuits / 500 graphs per size / exhaustive
plans / 1000 concurrences) execute in the acceptance gate; these smoke
the same code paths quickly.
"""

from mipt_le import verify


def test_tableau_suite():
    rep = verify.verify_tableau(n_trials=60, seed=1)
    assert rep["ok"], rep["examples"]
    assert rep["trials"] == 60


def test_graph_rules_suite():
    rep = verify.verify_graph_rules(samples_per_n=12, seed=1)
    assert rep["ok"], rep["examples"]
    assert rep["trials"] > 0


def test_le_plans_suite():
    rep = verify.verify_le_plans(n5_samples=10, seed=1)
    assert rep["ok"], rep["examples"]


def test_concurrence_suite():
    rep = verify.verify_concurrence(n_trials=60, seed=1)
    assert rep["ok"], rep["examples"]


def test_run_all_scaled():
    reports = verify.run_all(scale=0.02, seed=2)
    assert len(reports) == 4
    assert all(r["ok"] for r in reports)
    names = [r["name"] for r in reports]
    assert names == [
        "tableau_vs_dense",
        "graph_rules_vs_dense",
        "le_pair_vs_exhaustive_plans",
        "concurrence_vs_dense",
    ]
