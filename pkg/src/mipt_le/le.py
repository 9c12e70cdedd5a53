"""Localizable entanglement for stabilizer states.

For a stabilizer state reduced to its graph, LE between two sites is
binary: 1 exactly when the sites share a connected component.  The
constructive witness measures Z on everything off a shortest path and Y
along the path interior, contracting the path to a single edge.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .graphstate import Graph, measure_pauli


@dataclass(frozen=True)
class MeasurementPlan:
    """Basis per measured vertex plus the two kept vertices.

    ``path`` records the contraction route from keep[0] to keep[1]
    (inclusive); it is derivable from ``bases`` but kept for
    deterministic replay.
    """

    bases: dict[int, str]
    keep: tuple[int, int]
    path: tuple[int, ...] = ()

    def validate(self, g: Graph) -> None:
        if len(self.keep) != 2 or self.keep[0] == self.keep[1]:
            raise ValueError(f"need exactly two distinct kept vertices: {self.keep}")
        assigned = set(self.bases)
        if assigned & set(self.keep):
            raise ValueError("kept vertices must not carry a basis")
        needed = {v for v in range(g.n) if g.present[v]} - set(self.keep)
        if assigned != needed:
            raise ValueError(
                f"plan must assign every present non-kept vertex; "
                f"missing {sorted(needed - assigned)}, "
                f"extra {sorted(assigned - needed)}"
            )
        for v, b in self.bases.items():
            if b not in ("X", "Y", "Z"):
                raise ValueError(f"vertex {v}: basis must be X/Y/Z, got {b!r}")


def _bfs_path(g: Graph, i: int, j: int) -> list[int] | None:
    """Shortest i->j path; ties broken by visiting neighbours in
    ascending index order."""
    parent = {i: i}
    queue = deque([i])
    while queue:
        v = queue.popleft()
        if v == j:
            break
        for u in np.flatnonzero(g.adj[v]).tolist():
            if u not in parent:
                parent[u] = v
                queue.append(u)
    if j not in parent:
        return None
    path = [j]
    while path[-1] != i:
        path.append(parent[path[-1]])
    return path[::-1]


def le_pair(g: Graph, i: int, j: int) -> int:
    """1 iff sites i and j share a connected component (binary LE)."""
    g.check_vertex(i)
    g.check_vertex(j)
    if i == j:
        raise ValueError(f"need two distinct sites, got i = j = {i}")
    return int(_bfs_path(g, i, j) is not None)


def le_ref(g: Graph, ref: int) -> int:
    """1 iff the reference vertex is entangled with anything at all."""
    g.check_vertex(ref)
    return int(bool(g.adj[ref].any()))


def le_protocol(g: Graph, i: int, j: int) -> MeasurementPlan:
    """Measurement plan concentrating a Bell pair onto (i, j).

    Z removes every vertex off a shortest i-j path; Y contracts the
    path interior; i and j are kept.  Only valid when le_pair = 1.
    """
    g.check_vertex(i)
    g.check_vertex(j)
    if i == j:
        raise ValueError(f"need two distinct sites, got i = j = {i}")
    path = _bfs_path(g, i, j)
    if path is None:
        raise ValueError(f"sites {i} and {j} are not connected; no plan exists")
    on_path = set(path)
    bases = {}
    for v in range(g.n):
        if not g.present[v] or v in (i, j):
            continue
        bases[v] = "Y" if v in on_path else "Z"
    return MeasurementPlan(bases, (i, j), tuple(path))


def execute_plan(g: Graph, plan: MeasurementPlan) -> Graph:
    """Run a plan through the graph measurement rules.

    Z deletions first; then Y vertices are consumed from the keep[0]
    end of the surviving chain, each contraction using keep[0] as the
    special neighbour.  For plans produced by le_protocol this
    terminates with the kept pair joined by an edge.
    """
    plan.validate(g)
    out = g
    for v in sorted(vb for vb, b in plan.bases.items() if b == "Z"):
        out = measure_pauli(out, v, "Z")
    for v in sorted(vb for vb, b in plan.bases.items() if b == "X"):
        if out.present[v]:
            out = measure_pauli(out, v, "X")
    anchor = plan.keep[0]
    pending = {v for v, b in plan.bases.items() if b == "Y"}
    while pending:
        nxt = [v for v in np.flatnonzero(out.adj[anchor]).tolist() if v in pending]
        if not nxt:
            v = min(pending)
            out = measure_pauli(out, v, "Y")
            pending.discard(v)
            continue
        v = nxt[0]
        out = measure_pauli(out, v, "Y", special=anchor)
        pending.discard(v)
    return out
