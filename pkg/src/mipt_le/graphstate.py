"""Graph states: tableau conversion, local complementation, and the
single-qubit Pauli measurement rules.

A graph state on vertices V has stabilizers K_v = X_v prod_{u~v} Z_u.
Vertices deleted by measurements stay in the arrays but are masked out
via ``present`` so site indices remain stable for the whole run.

Measurement update rules (outcome-independent up to local Cliffords):

* Z on v: delete v.
* Y on v: tau_v, then tau_u at a neighbour u, then delete v.
* X on v: tau_u, tau_v, tau_u around the deletion of v, then a final
  tau_u; u a neighbour of v.  An isolated v just disappears.

The neighbour u defaults to the smallest surviving index so outputs are
deterministic; any neighbour gives an LC-equivalent graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class Graph:
    """Simple undirected graph with a stable-index deletion mask."""

    adj: np.ndarray
    present: np.ndarray

    def __post_init__(self):
        adj = np.ascontiguousarray(self.adj, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError(f"adjacency must be square, got {adj.shape}")
        if adj.diagonal().any():
            raise ValueError("adjacency has self-loops")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency not symmetric")
        present = np.ascontiguousarray(self.present, dtype=bool)
        if present.shape != (adj.shape[0],):
            raise ValueError("present mask shape mismatch")
        if (adj[~present].any()) or (adj[:, ~present].any()):
            raise ValueError("deleted vertices must have no edges")
        self.adj = adj
        self.present = present

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(np.zeros((n, n), bool), np.ones(n, bool))

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        adj = np.zeros((n, n), bool)
        for a, b in edges:
            if a == b:
                raise ValueError(f"self-loop ({a}, {b})")
            adj[a, b] = adj[b, a] = True
        return cls(adj, np.ones(n, bool))

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    def copy(self) -> "Graph":
        return Graph(self.adj.copy(), self.present.copy())

    def check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise ValueError(f"vertex {v} outside [0, {self.n})")
        if not self.present[v]:
            raise ValueError(f"vertex {v} was already deleted")

    def neighbors(self, v: int) -> np.ndarray:
        self.check_vertex(v)
        return np.flatnonzero(self.adj[v])

    def degree(self, v: int) -> int:
        return int(self.neighbors(v).size)

    def edges(self) -> list[tuple[int, int]]:
        ii, jj = np.nonzero(np.triu(self.adj))
        return list(zip(ii.tolist(), jj.tolist()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return np.array_equal(self.adj, other.adj) and np.array_equal(
            self.present, other.present
        )


def local_complement(g: Graph, v: int) -> Graph:
    """tau_v: complement the induced subgraph on the neighbourhood of v."""
    g.check_vertex(v)
    out = g.copy()
    nb = np.flatnonzero(g.adj[v])
    if nb.size > 1:
        block = out.adj[np.ix_(nb, nb)]
        block ^= True
        np.fill_diagonal(block, False)
        out.adj[np.ix_(nb, nb)] = block
    return out


def delete_vertex(g: Graph, v: int) -> Graph:
    g.check_vertex(v)
    out = g.copy()
    out.adj[v, :] = False
    out.adj[:, v] = False
    out.present[v] = False
    return out


def _pick_neighbor(g: Graph, v: int, special: int | None) -> int | None:
    nb = np.flatnonzero(g.adj[v])
    if not nb.size:
        return None
    if special is None:
        return int(nb[0])
    if not g.adj[v, special]:
        raise ValueError(f"special vertex {special} is not a neighbour of {v}")
    return int(special)


def measure_z_graph(g: Graph, v: int) -> Graph:
    """Z measurement on v: delete it."""
    return delete_vertex(g, v)


def measure_y_graph(g: Graph, v: int, special: int | None = None) -> Graph:
    """Y measurement on v: tau_v, tau_u at a neighbour, then delete v."""
    g.check_vertex(v)
    u = _pick_neighbor(g, v, special)
    if u is None:
        return delete_vertex(g, v)
    return delete_vertex(local_complement(local_complement(g, v), u), v)


def measure_x_graph(g: Graph, v: int, special: int | None = None) -> Graph:
    """X measurement on v: tau_u, tau_v, tau_u, delete v, tau_u, with u a
    neighbour of v.  An isolated v just disappears.

    The trailing tau_u fixes the output representative: measuring the
    centre of a star leaves its leaves completely connected.
    """
    g.check_vertex(v)
    u = _pick_neighbor(g, v, special)
    if u is None:
        return delete_vertex(g, v)
    out = local_complement(g, u)
    out = delete_vertex(local_complement(local_complement(out, v), u), v)
    return local_complement(out, u)


def measure_pauli(g: Graph, v: int, basis: str, special: int | None = None) -> Graph:
    """Dispatch one single-qubit Pauli measurement rule."""
    b = basis.upper()
    if b == "Z":
        return measure_z_graph(g, v)
    if b == "Y":
        return measure_y_graph(g, v, special)
    if b == "X":
        return measure_x_graph(g, v, special)
    raise ValueError(f"basis must be X, Y or Z, got {basis!r}")


def component_labels(g: Graph) -> np.ndarray:
    """Connected-component id per vertex; -1 for deleted vertices."""
    labels = np.full(g.n, -1, np.int64)
    next_label = 0
    for v in range(g.n):
        if not g.present[v] or labels[v] >= 0:
            continue
        frontier = np.zeros(g.n, bool)
        frontier[v] = True
        seen = frontier.copy()
        while frontier.any():
            frontier = g.adj[frontier].any(axis=0) & ~seen
            seen |= frontier
        labels[seen] = next_label
        next_label += 1
    return labels


def connected_components(g: Graph) -> list[list[int]]:
    """Components of present vertices, each sorted, ordered by minimum."""
    labels = component_labels(g)
    out: list[list[int]] = []
    for lab in range(labels.max(initial=-1) + 1):
        out.append(np.flatnonzero(labels == lab).tolist())
    return out


def to_dot(g: Graph, labels: dict[int, str] | None = None, name: str = "G") -> str:
    """Render as Graphviz DOT; one line per present vertex and per edge."""
    lines = [f"graph {name} {{"]
    labels = labels or {}
    for v in range(g.n):
        if g.present[v]:
            tag = f' [label="{labels[v]}"]' if v in labels else ""
            lines.append(f"  {v}{tag};")
    for a, b in g.edges():
        lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class LocalCorrections:
    """Per-vertex single-qubit gate strings mapping a state to its graph
    state; each string is a subsequence of "HSZ" applied left to right."""

    gates: tuple[str, ...] = field(default=())

    def __post_init__(self):
        for i, s in enumerate(self.gates):
            if any(c not in "HSZ" for c in s):
                raise ValueError(f"vertex {i}: bad correction string {s!r}")

    def forward_ops(self) -> list[tuple[str, int]]:
        """Flat (gate, vertex) list taking the source state to the graph
        state; stages ordered H, then S, then Z."""
        ops = []
        for stage in "HSZ":
            for v, s in enumerate(self.gates):
                if stage in s:
                    ops.append((stage.lower(), v))
        return ops

    def undo_ops(self) -> list[tuple[str, int]]:
        """Inverse sequence, graph state back to the source state."""
        inverse = {"h": "h", "z": "z", "s": "sdg"}
        return [(inverse[gate], v) for gate, v in reversed(self.forward_ops())]


def _g_phase(x1, z1, x2, z2):
    """Signed i-power count for products of unpacked 0/1 bool rows."""
    y1, ex1, ez1 = x1 & z1, x1 & ~z1, ~x1 & z1
    y2, ex2, ez2 = x2 & z2, x2 & ~z2, ~x2 & z2
    plus = ((ex1 & y2) | (y1 & ez2) | (ez1 & ex2)).sum(axis=-1)
    minus = ((y1 & ex2) | (ez1 & y2) | (ex1 & ez2)).sum(axis=-1)
    return plus.astype(np.int64) - minus.astype(np.int64)


def _mult_rows(sx, sz, sr, targets, src):
    """row[h] <- row[src] * row[h] over GF(2) with sign tracking."""
    g = _g_phase(sx[src], sz[src], sx[targets], sz[targets])
    tot = (2 * sr[targets].astype(np.int64) + 2 * int(sr[src]) + g) % 4
    sr[targets] = (tot >> 1).astype(sr.dtype)
    sx[targets] ^= sx[src]
    sz[targets] ^= sz[src]


def _swap_rows(sx, sz, sr, a, b):
    sx[[a, b]] = sx[[b, a]]
    sz[[a, b]] = sz[[b, a]]
    sr[[a, b]] = sr[[b, a]]


def _gauss_jordan_x(sx, sz, sr) -> list[int]:
    """Full Gauss-Jordan elimination on the X block; returns pivot columns."""
    n = sx.shape[0]
    pivots: list[int] = []
    cur = 0
    for col in range(n):
        rows = np.flatnonzero(sx[cur:, col]) + cur
        if not rows.size:
            continue
        _swap_rows(sx, sz, sr, cur, int(rows[0]))
        targets = np.flatnonzero(sx[:, col])
        targets = targets[targets != cur]
        if targets.size:
            _mult_rows(sx, sz, sr, targets, cur)
        pivots.append(col)
        cur += 1
    return pivots


def _h_column(sx, sz, sr, q):
    sr ^= sx[:, q] & sz[:, q]
    tmp = sx[:, q].copy()
    sx[:, q] = sz[:, q]
    sz[:, q] = tmp


def _s_column(sx, sz, sr, q):
    sr ^= sx[:, q] & sz[:, q]
    sz[:, q] ^= sx[:, q]


def tableau_to_graph(t) -> tuple[Graph, LocalCorrections]:
    """Reduce a stabilizer state to its graph-state normal form.

    Returns the graph plus the per-qubit local corrections that map the
    input state onto the graph state exactly (signs included).
    """
    n = t.n
    sx, sz, sr8 = t.stabilizer_bits()
    sx = sx.astype(bool)
    sz = sz.astype(bool)
    sr = sr8.astype(bool)
    corr = [""] * n

    pivots = _gauss_jordan_x(sx, sz, sr)
    if len(pivots) < n:
        for q in sorted(set(range(n)) - set(pivots)):
            _h_column(sx, sz, sr, q)
            corr[q] += "H"
        pivots = _gauss_jordan_x(sx, sz, sr)
    if len(pivots) != n:  # pragma: no cover
        raise AssertionError("X block is rank-deficient after Hadamards")

    for q in range(n):
        if sz[q, q]:
            _s_column(sx, sz, sr, q)
            corr[q] += "S"
    for q in range(n):
        if sr[q]:
            sr ^= sx[:, q]
            corr[q] += "Z"

    if not np.array_equal(sx, np.eye(n, dtype=bool)):  # pragma: no cover
        raise AssertionError("X block did not reduce to the identity")
    if not np.array_equal(sz, sz.T) or sz.diagonal().any():  # pragma: no cover
        raise AssertionError("Z block is not a graph adjacency")
    if sr.any():  # pragma: no cover
        raise AssertionError("signs not cleared by Z corrections")

    graph = Graph(sz.copy(), np.ones(n, bool))
    return graph, LocalCorrections(tuple(corr))
