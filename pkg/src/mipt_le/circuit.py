"""Monitored brickwall Clifford dynamics and the probe protocols.

A realization starts from |0...0>, applies T brick layers of uniform
random two-qubit Cliffords on alternating bonds (open boundary), and
after each layer measures Z at each site independently with probability
p.  Protocols: ``plain`` (system only), ``one_reference`` (one ancilla
Bell-attached to a bulk site, never evolved), ``two_ancilla`` (a second
idle ancilla plus a final coupling gate for the concurrence probe).

Reference protocols first scramble the system with ``warmup``
measurement-free brick layers (default 2L) so the attachment happens
on a volume-law state whose every site already carries extensive
stabilizers; a Bell pair created on top of the initial product state
would instead be severed by an early measurement of its system leg
with L-independent probability O(p), masking the exponential
protection of the entangling phase.

Randomness comes from three counter-based streams per realization
(gates, measurement placement, outcomes) keyed by (seed, L,
realization, stream).  The measurement probability p enters only as a
threshold on pre-drawn placement uniforms, so realizations at different
p share gates and outcome coins (common random numbers).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .backend import kernels
from .cliffords import GROUP_ORDER, clifford_from_index, group_tables
from .graphstate import Graph, LocalCorrections, tableau_to_graph
from .tableau import StabilizerTableau

PROTOCOLS = ("plain", "one_reference", "two_ancilla")
FINAL_GATES = ("random_clifford", "cnot_r1_r2", "cnot_r2_r1")

_STREAM_GATES = 0
_STREAM_PLACEMENT = 1
_STREAM_OUTCOMES = 2


@dataclass(frozen=True)
class CircuitConfig:
    """One monitored-circuit realization's parameters."""

    L: int
    p: float
    T: int
    seed: int
    protocol: str = "plain"
    attach_site: int | None = None
    realization: int = 0
    #: measure after every k-th brick layer (1 = every layer)
    measure_period: int = 1
    #: coupling applied between the two ancillas after the last layer
    final_gate: str = "random_clifford"
    #: measurement-free scrambling layers before the reference
    #: attachment (None: 2L for reference protocols, 0 for plain)
    warmup: int | None = None

    def __post_init__(self):
        if self.L < 2:
            raise ValueError(f"L must be >= 2, got {self.L}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if self.T < 1:
            raise ValueError(f"T must be >= 1, got {self.T}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")
        if self.protocol not in PROTOCOLS:
            raise ValueError(f"protocol must be one of {PROTOCOLS}, got {self.protocol!r}")
        if self.realization < 0:
            raise ValueError(f"realization index must be >= 0, got {self.realization}")
        if self.measure_period < 1:
            raise ValueError(f"measure_period must be >= 1, got {self.measure_period}")
        if self.final_gate not in FINAL_GATES:
            raise ValueError(f"final_gate must be one of {FINAL_GATES}, got {self.final_gate!r}")
        attach = self.L // 2 if self.attach_site is None else self.attach_site
        if not 0 <= attach < self.L:
            raise ValueError(f"attach_site {attach} outside [0, {self.L})")
        object.__setattr__(self, "attach_site", attach)
        warm = self.warmup
        if warm is None:
            warm = 0 if self.protocol == "plain" else 2 * self.L
        elif warm < 0:
            raise ValueError(f"warmup must be >= 0, got {warm}")
        object.__setattr__(self, "warmup", warm)

    @property
    def n_refs(self) -> int:
        return {"plain": 0, "one_reference": 1, "two_ancilla": 2}[self.protocol]

    @property
    def n_qubits(self) -> int:
        return self.L + self.n_refs

    def with_realization(self, k: int) -> "CircuitConfig":
        return replace(self, realization=k)


@dataclass
class RealizationOutput:
    """Final graph, its local corrections, and the measurement record.

    ``measurement_log[t, q]`` is the outcome (0/1) if site q was
    measured after layer t, else -1; reference columns stay -1.
    """

    graph: Graph
    corrections: LocalCorrections
    measurement_log: np.ndarray
    n_sites: int
    ref_indices: tuple[int, ...] = field(default=())

    @property
    def measured_fraction(self) -> float:
        sys_log = self.measurement_log[:, : self.n_sites]
        return float((sys_log >= 0).mean())


def _stream(cfg: CircuitConfig, tag: int) -> np.random.Generator:
    seq = np.random.SeedSequence((cfg.seed, cfg.L, cfg.realization, tag))
    return np.random.Generator(np.random.Philox(seq))


def _layer_block(cfg, tab, streams, t0: int, n_layers: int, log, monitor: bool) -> None:
    """Run brick layers with global indices [t0, t0 + n_layers).

    With ``monitor=False`` the block applies gates only (the warmup
    scramble); measurements and the log stay untouched.
    """
    if n_layers == 0:
        return
    L = cfg.L
    gates, placement, outcomes = streams
    # layer t (1-based): odd layers start at bond (1,2), even at (0,1)
    offsets = np.array([(t0 + t + 1) % 2 for t in range(n_layers)], np.int64)
    g_max = L // 2
    gate_ids = gates.integers(0, GROUP_ORDER, size=(n_layers, g_max), dtype=np.int64)
    if monitor:
        meas_mask = placement.random((n_layers, L)) < cfg.p
        if cfg.measure_period > 1:
            layer = np.arange(t0 + 1, t0 + n_layers + 1)
            meas_mask &= (layer % cfg.measure_period == 0)[:, None]
        outcome_bits = outcomes.integers(0, 2, size=(n_layers, L), dtype=np.uint8)
    else:
        meas_mask = np.zeros((n_layers, L), bool)
        outcome_bits = np.zeros((n_layers, L), np.uint8)
        log = np.full((n_layers, cfg.n_qubits), -1, np.int8)

    perm_tab, sign_tab, _ = group_tables()
    kernels.evolve(
        tab.x,
        tab.z,
        tab.r,
        L,
        offsets,
        gate_ids,
        perm_tab,
        sign_tab,
        meas_mask,
        outcome_bits,
        log,
    )


def _evolve_system(
    cfg: CircuitConfig,
    tab: StabilizerTableau,
    attach: tuple[int, int] | None = None,
) -> tuple[np.ndarray, np.random.Generator]:
    """Run the monitored brickwall on sites [0, L).

    ``attach=(ref, site)`` Bell-pairs the reference onto ``site`` (H on
    ref, then CNOT ref -> site) between the measurement-free warmup
    scramble and the T monitored layers.  Returns the measurement log
    over the T monitored layers and the gate stream (positioned after
    the layer blocks, for protocols that draw one more gate).
    """
    gates = _stream(cfg, _STREAM_GATES)
    placement = _stream(cfg, _STREAM_PLACEMENT)
    outcomes = _stream(cfg, _STREAM_OUTCOMES)
    streams = (gates, placement, outcomes)

    log = np.full((cfg.T, cfg.n_qubits), -1, np.int8)
    _layer_block(cfg, tab, streams, 0, cfg.warmup, log, monitor=False)
    if attach is not None:
        ref, site = attach
        tab.h(ref)
        tab.cnot(ref, site)
    _layer_block(cfg, tab, streams, cfg.warmup, cfg.T, log, monitor=True)
    return log, gates


def _finish(cfg: CircuitConfig, tab: StabilizerTableau, log, refs) -> RealizationOutput:
    graph, corrections = tableau_to_graph(tab)
    return RealizationOutput(graph, corrections, log, cfg.L, refs)


def run_realization(cfg: CircuitConfig) -> RealizationOutput:
    """Plain protocol: monitored system, no references."""
    if cfg.protocol != "plain":
        raise ValueError(f"run_realization needs protocol='plain', got {cfg.protocol!r}")
    tab = StabilizerTableau(cfg.n_qubits)
    log, _ = _evolve_system(cfg, tab)
    return _finish(cfg, tab, log, ())


def run_with_reference(cfg: CircuitConfig) -> RealizationOutput:
    """One reference qubit Bell-attached to attach_site, never evolved."""
    if cfg.protocol != "one_reference":
        raise ValueError(
            f"run_with_reference needs protocol='one_reference', got {cfg.protocol!r}"
        )
    tab = StabilizerTableau(cfg.n_qubits)
    r1 = cfg.L
    log, _ = _evolve_system(cfg, tab, attach=(r1, cfg.attach_site))
    return _finish(cfg, tab, log, (r1,))


def run_two_ancilla(cfg: CircuitConfig) -> tuple[RealizationOutput, np.ndarray]:
    """Reference pair probe: R1 Bell-attached, R2 idle in |0>, and a
    final R1-R2 coupling; returns the realization plus the reduced
    density matrix of (R1, R2) after the coupling.

    The default coupling is a uniformly random two-qubit Clifford;
    plain CNOT variants are available via ``final_gate``.
    """
    if cfg.protocol != "two_ancilla":
        raise ValueError(
            f"run_two_ancilla needs protocol='two_ancilla', got {cfg.protocol!r}"
        )
    tab = StabilizerTableau(cfg.n_qubits)
    r1, r2 = cfg.L, cfg.L + 1
    log, gates = _evolve_system(cfg, tab, attach=(r1, cfg.attach_site))
    if cfg.final_gate == "random_clifford":
        gid = int(gates.integers(0, GROUP_ORDER))
        tab.apply_two_qubit(clifford_from_index(gid), r1, r2)
    elif cfg.final_gate == "cnot_r1_r2":
        tab.cnot(r1, r2)
    else:
        tab.cnot(r2, r1)
    rho = tab.reduced_density_2q(r1, r2)
    return _finish(cfg, tab, log, (r1, r2)), rho


def run(cfg: CircuitConfig):
    """Protocol dispatch; two_ancilla returns (output, density)."""
    if cfg.protocol == "plain":
        return run_realization(cfg)
    if cfg.protocol == "one_reference":
        return run_with_reference(cfg)
    return run_two_ancilla(cfg)
