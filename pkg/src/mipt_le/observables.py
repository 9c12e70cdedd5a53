"""Ensemble statistics and critical-point diagnostics.

The measurement-induced transition is located through a handful of
scalar summaries of each late-time graph:

* ``order_parameter_R``: the largest separation ratio ``|i - j| / (L - 1)``
  over site pairs that still share localizable entanglement.
* ``correlation_function``: the mean pair entanglement at separation ``r``.
* ``fit_correlation_length``: exponential-decay fit giving ``xi``.
* ``fit_nu``: power-law fit of ``xi`` against the distance to criticality.
* ``find_crossing``: size-pair intersection of the order-parameter curves.
* ``concurrence``: Wootters concurrence of a two-qubit density matrix,
  used for the reference-pair probe.

Estimates carry (mean, stderr, count) and merge exactly, so shards
produced by independent workers can be combined in any order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graphstate import Graph, component_labels

__all__ = [
    "EnsembleEstimate",
    "FitResult",
    "RunningStat",
    "concurrence",
    "correlation_function",
    "correlation_profile",
    "find_crossing",
    "fit_correlation_length",
    "fit_nu",
    "order_parameter_R",
]


# ---------------------------------------------------------------------------
# estimators


@dataclass(frozen=True)
class EnsembleEstimate:
    """Mean of independent realizations with its standard error.

    ``stderr`` is the standard error of the mean (sample standard
    deviation over sqrt(count)); it is 0.0 for a single sample.
    """

    mean: float
    stderr: float
    count: int

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError(f"count must be >= 1, got {self.count}")
        if not self.stderr >= 0.0:
            raise ValueError(f"stderr must be >= 0, got {self.stderr}")

    @classmethod
    def from_samples(cls, samples) -> "EnsembleEstimate":
        x = np.asarray(samples, np.float64)
        if x.ndim != 1 or x.size == 0:
            raise ValueError(f"need a non-empty 1d sample array, got shape {x.shape}")
        n = int(x.size)
        mean = float(x.mean())
        stderr = float(x.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        return cls(mean, stderr, n)

    @property
    def sum_sq_dev(self) -> float:
        """Sum of squared deviations from the mean (the merge invariant)."""
        return self.stderr**2 * self.count * (self.count - 1)

    def merge(self, other: "EnsembleEstimate") -> "EnsembleEstimate":
        """Exact pooled estimate, identical to re-estimating from the
        concatenated samples (parallel update of mean and M2)."""
        n = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * other.count / n
        m2 = self.sum_sq_dev + other.sum_sq_dev
        m2 += delta * delta * self.count * other.count / n
        stderr = math.sqrt(max(m2, 0.0) / (n * (n - 1))) if n > 1 else 0.0
        return EnsembleEstimate(mean, stderr, n)


class RunningStat:
    """Welford accumulator producing an :class:`EnsembleEstimate`."""

    __slots__ = ("count", "mean", "m2")

    def __init__(self) -> None:
        self.count = 0
        self.mean = 0.0
        self.m2 = 0.0

    def push(self, x: float) -> None:
        self.count += 1
        delta = x - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (x - self.mean)

    def result(self) -> EnsembleEstimate:
        if self.count == 0:
            raise ValueError("no samples accumulated")
        n = self.count
        stderr = math.sqrt(max(self.m2, 0.0) / (n * (n - 1))) if n > 1 else 0.0
        return EnsembleEstimate(self.mean, stderr, n)


@dataclass(frozen=True)
class FitResult:
    """Outcome of a least-squares fit.

    ``value`` is the fitted parameter (``xi`` or ``nu``), ``r_squared``
    the coefficient of determination, and ``window`` the inclusive
    abscissa range that entered the fit.  ``saturated`` marks data that
    failed the exponential-decay test; then ``value`` is ``inf`` and no
    fit was attempted.
    """

    value: float
    r_squared: float
    window: tuple[float, float]
    saturated: bool = False


# ---------------------------------------------------------------------------
# graph summaries


def _system_labels(g: Graph, n_sites: int | None) -> tuple[np.ndarray, int]:
    n_sites = g.n if n_sites is None else int(n_sites)
    if not 0 <= n_sites <= g.n:
        raise ValueError(f"n_sites {n_sites} out of range for {g.n} vertices")
    return component_labels(g), n_sites


def order_parameter_R(g: Graph, n_sites: int | None = None) -> float:
    """Largest ``|i - j| / (L - 1)`` over system-site pairs that share
    localizable entanglement; 0.0 when no pair does.

    Vertices ``n_sites..`` are reference ancillas: they are excluded
    from the pairs but still mediate connectivity.
    """
    labels, n_sites = _system_labels(g, n_sites)
    if n_sites < 2:
        raise ValueError(f"need at least 2 system sites, got {n_sites}")
    best = 0
    for lab in range(labels.max(initial=-1) + 1):
        members = np.flatnonzero(labels[:n_sites] == lab)
        if members.size >= 2:
            best = max(best, int(members[-1] - members[0]))
    return best / (n_sites - 1)


def correlation_function(g: Graph, r: int, n_sites: int | None = None) -> float:
    """Mean localizable entanglement between site pairs at separation ``r``:
    the fraction of the ``L - r`` pairs ``(i, i + r)`` that remain connected.
    """
    labels, n_sites = _system_labels(g, n_sites)
    if not 1 <= r <= n_sites - 1:
        raise ValueError(f"separation {r} out of range for {n_sites} sites")
    a = labels[: n_sites - r]
    b = labels[r:n_sites]
    return float(np.mean((a == b) & (a >= 0)))


def correlation_profile(g: Graph, n_sites: int | None = None) -> np.ndarray:
    """``correlation_function`` for every separation 1..L-1 at once."""
    labels, n_sites = _system_labels(g, n_sites)
    if n_sites < 2:
        raise ValueError(f"need at least 2 system sites, got {n_sites}")
    lab = labels[:n_sites]
    out = np.empty(n_sites - 1, np.float64)
    for r in range(1, n_sites):
        a = lab[: n_sites - r]
        b = lab[r:]
        out[r - 1] = np.mean((a == b) & (a >= 0))
    return out


# ---------------------------------------------------------------------------
# concurrence

_YY = np.array(
    [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ]
)

_DENSITY_ATOL = 1e-9


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    ``C = max(0, l1 - l2 - l3 - l4)`` with ``l`` the decreasingly sorted
    square roots of the eigenvalues of ``rho (Y x Y) rho* (Y x Y)``.
    """
    rho = np.asarray(rho, np.complex128)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > _DENSITY_ATOL:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > _DENSITY_ATOL:
        raise ValueError(f"density matrix trace {np.trace(rho):.12g} != 1")
    evals = np.linalg.eigvalsh(rho)
    if evals.min() < -_DENSITY_ATOL:
        raise ValueError(f"density matrix has negative eigenvalue {evals.min():.3g}")
    rho_tilde = _YY @ rho.conj() @ _YY
    w = np.linalg.eigvals(rho @ rho_tilde).real
    # exact zero eigenvalues carry O(eps) noise that the square root
    # would amplify to ~1e-8; clip below any genuine eigenvalue
    w[w < 1e-12] = 0.0
    lam = np.sqrt(w)
    lam[::-1].sort()
    return float(min(1.0, max(0.0, lam[0] - lam[1] - lam[2] - lam[3])))


# ---------------------------------------------------------------------------
# fits


def _weighted_line(x: np.ndarray, y: np.ndarray, w: np.ndarray):
    """Weighted least-squares line fit; returns (slope, intercept, r^2)."""
    sw = w.sum()
    xm = (w * x).sum() / sw
    ym = (w * y).sum() / sw
    sxx = (w * (x - xm) ** 2).sum()
    if sxx <= 0.0:
        raise ValueError("degenerate abscissa spread in fit")
    slope = (w * (x - xm) * (y - ym)).sum() / sxx
    intercept = ym - slope * xm
    ss_res = (w * (y - slope * x - intercept) ** 2).sum()
    ss_tot = (w * (y - ym) ** 2).sum()
    r2 = 1.0 if ss_tot <= 1e-300 else max(0.0, 1.0 - ss_res / ss_tot)
    return slope, intercept, r2


def fit_correlation_length(
    points,
    n_trials: int | None = None,
    n_sites: int | None = None,
) -> FitResult:
    """Fit ``<C(r)> ~ exp(-r / xi)`` and return ``xi``.

    ``points`` is a sequence of ``(r, mean, stderr)`` triples.  Points
    with ``r < 2`` (short-distance transients) or with a mean below the
    statistical floor ``max(5 / (n_trials * (n_sites - r)), 1e-3)`` are
    dropped; the floor falls back to 1e-3 when the sample counts are not
    supplied.  Weights are inverse variances of ``ln mean`` (unweighted
    when any retained stderr is 0).  Data whose last-third mean exceeds
    half the first-third mean are flagged saturated instead of fitted.
    """
    pts = sorted((int(r), float(m), float(s)) for r, m, s in points)
    if not pts:
        raise ValueError("no input points")
    means = np.array([m for _, m, _ in pts])
    third = max(1, len(pts) // 3)
    if means[-third:].mean() > 0.5 * means[:third].mean():
        window = (float(pts[0][0]), float(pts[-1][0]))
        return FitResult(math.inf, 0.0, window, saturated=True)

    usable = []
    for r, m, s in pts:
        floor = 1e-3
        if n_trials is not None and n_sites is not None:
            floor = max(5.0 / (n_trials * (n_sites - r)), floor)
        if r >= 2 and m >= floor:
            usable.append((r, m, s))
    if len(usable) < 3:
        raise ValueError(f"only {len(usable)} usable points after windowing, need 3")

    r_arr = np.array([r for r, _, _ in usable], np.float64)
    m_arr = np.array([m for _, m, _ in usable])
    s_arr = np.array([s for _, _, s in usable])
    y = np.log(m_arr)
    w = np.ones_like(y) if np.any(s_arr == 0.0) else (m_arr / s_arr) ** 2
    slope, _, r2 = _weighted_line(r_arr, y, w)
    if slope >= 0.0:
        raise ValueError(f"non-negative decay slope {slope:.3g}; no length scale")
    return FitResult(float(-1.0 / slope), float(r2), (float(r_arr[0]), float(r_arr[-1])))


def fit_nu(xi_points, p_c: float) -> FitResult:
    """Fit ``xi(p) ~ (p - p_c)^(-nu)`` on the volume-law approach side.

    ``xi_points`` is a sequence of ``(p, xi)`` pairs with every
    ``p > p_c``; non-finite or non-positive ``xi`` entries are skipped.
    """
    pts = sorted((float(p), float(x)) for p, x in xi_points)
    for p, _ in pts:
        if p <= p_c:
            raise ValueError(f"p = {p} is not above p_c = {p_c}")
    pts = [(p, x) for p, x in pts if math.isfinite(x) and x > 0.0]
    if len(pts) < 3:
        raise ValueError(f"only {len(pts)} finite points, need 3")
    lx = np.log([p - p_c for p, _ in pts])
    ly = np.log([x for _, x in pts])
    if lx.max() - lx.min() < 1e-12:
        raise ValueError("degenerate spread of p - p_c")
    slope, _, r2 = _weighted_line(lx, ly, np.ones_like(lx))
    return FitResult(float(-slope), float(r2), (pts[0][0], pts[-1][0]))


def find_crossing(curves: dict) -> float:
    """Crossing point of order-parameter curves across system sizes.

    ``curves`` maps ``L`` to a list of ``(p, mean[, stderr])`` tuples.
    For every consecutive pair of sizes the difference of the two curves
    is linearly interpolated on their common grid; the steepest sign
    change gives that pair's crossing and the pair values are averaged.
    """
    if len(curves) < 2:
        raise ValueError(f"need at least 2 system sizes, got {len(curves)}")
    tables = {}
    for size, rows in curves.items():
        tables[int(size)] = {round(float(row[0]), 12): float(row[1]) for row in rows}
    sizes = sorted(tables)
    crossings = []
    for lo, hi in zip(sizes, sizes[1:]):
        grid = sorted(set(tables[lo]) & set(tables[hi]))
        if len(grid) < 2:
            raise ValueError(f"sizes {lo} and {hi} share fewer than 2 grid points")
        p = np.array(grid)
        d = np.array([tables[lo][q] - tables[hi][q] for q in grid])
        candidates = []  # (|slope|, p*)
        for k in range(len(p) - 1):
            slope = abs(d[k + 1] - d[k]) / (p[k + 1] - p[k])
            if d[k] == 0.0:
                candidates.append((slope, p[k]))
            elif d[k] * d[k + 1] < 0.0:
                frac = d[k] / (d[k] - d[k + 1])
                candidates.append((slope, p[k] + frac * (p[k + 1] - p[k])))
        if d[-1] == 0.0:
            slope = abs(d[-1] - d[-2]) / (p[-1] - p[-2])
            candidates.append((slope, p[-1]))
        if not candidates:
            raise ValueError(f"curves for sizes {lo} and {hi} never cross")
        crossings.append(max(candidates)[1])
    return float(np.mean(crossings))
