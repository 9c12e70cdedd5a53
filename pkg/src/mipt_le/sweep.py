"""Ensemble sweeps over (L, p) grids with reproducible persistence.

A sweep runs ``N`` independent realizations per grid point and writes

* ``raw.csv``: one scalar row per realization plus one row per
  separation ``r`` carrying the pair-correlation value,
* ``aggregates.json``: per-(L, p) means/stderrs/counts recomputed from
  the raw rows,
* ``fig*.tsv``: tab-separated plot data.

Rows are keyed by realization index, so an interrupted sweep resumes
without double counting, and the file is canonically sorted so repeated
runs are byte-identical apart from the timestamp header.
"""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from .circuit import FINAL_GATES, PROTOCOLS, CircuitConfig, run
from .le import le_ref
from .observables import (
    EnsembleEstimate,
    RunningStat,
    concurrence,
    correlation_profile,
    find_crossing,
    fit_correlation_length,
    fit_nu,
    order_parameter_R,
)

RAW_HEADER = (
    "protocol,L,p,T,seed,realization,R,le_ref,concurrence,r,c_le".split(",")
)

__all__ = [
    "RAW_HEADER",
    "SweepSpec",
    "aggregate_rows",
    "fit_report",
    "read_raw_rows",
    "run_sweep",
    "write_plot_files",
]


@dataclass(frozen=True)
class SweepSpec:
    """Grid definition for a sweep."""

    L_list: tuple[int, ...]
    p_grid: tuple[float, ...]
    n_realizations: int
    t_multiplier: int = 4
    protocol: str = "plain"
    seed: int = 0
    final_gate: str = "random_clifford"
    out_dir: str = "sweep_out"

    def __post_init__(self) -> None:
        if not self.L_list or any(L < 2 for L in self.L_list):
            raise ValueError(f"L_list must be non-empty with L >= 2, got {self.L_list}")
        if not self.p_grid:
            raise ValueError("p_grid must be non-empty")
        for p in self.p_grid:
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"measurement rate {p} outside [0, 1]")
        if self.n_realizations < 1:
            raise ValueError(f"need N >= 1, got {self.n_realizations}")
        if self.t_multiplier < 1:
            raise ValueError(f"need T multiplier >= 1, got {self.t_multiplier}")
        if self.protocol not in PROTOCOLS:
            raise ValueError(f"unknown protocol {self.protocol!r}")
        if self.final_gate not in FINAL_GATES:
            raise ValueError(f"unknown final gate {self.final_gate!r}")

    @classmethod
    def from_dict(cls, doc: dict) -> "SweepSpec":
        """Build from a JSON config document.

        ``p`` may be an explicit list or ``{"start", "stop", "step"}``
        (stop inclusive up to float fuzz); unknown keys are rejected.
        """
        known = {"L", "p", "N", "T_mult", "protocol", "seed", "final_gate", "out"}
        extra = set(doc) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        missing = {"L", "p", "N"} - set(doc)
        if missing:
            raise ValueError(f"config is missing keys: {sorted(missing)}")
        p_doc = doc["p"]
        if isinstance(p_doc, dict):
            extra = set(p_doc) - {"start", "stop", "step"}
            if extra:
                raise ValueError(f"unknown p-grid keys: {sorted(extra)}")
            start, stop, step = p_doc["start"], p_doc["stop"], p_doc["step"]
            if step <= 0:
                raise ValueError(f"p-grid step must be > 0, got {step}")
            n_steps = int(np.floor((stop - start) / step + 1e-9)) + 1
            if n_steps < 1:
                raise ValueError(f"empty p grid from {p_doc}")
            grid = tuple(round(start + k * step, 10) for k in range(n_steps))
        else:
            grid = tuple(round(float(p), 10) for p in p_doc)
        return cls(
            L_list=tuple(int(L) for L in doc["L"]),
            p_grid=grid,
            n_realizations=int(doc["N"]),
            t_multiplier=int(doc.get("T_mult", 4)),
            protocol=str(doc.get("protocol", "plain")),
            seed=int(doc.get("seed", 0)),
            final_gate=str(doc.get("final_gate", "random_clifford")),
            out_dir=str(doc.get("out", "sweep_out")),
        )


# ---------------------------------------------------------------------------
# realization work units

# A raw row is (protocol, L, p, T, seed, realization, R, le_ref,
# concurrence, r, c_le) with None for fields the protocol does not fill.


def realization_rows(spec: SweepSpec, L: int, p: float, k: int) -> list[tuple]:
    """All raw rows contributed by realization ``k`` at one grid point."""
    T = spec.t_multiplier * L
    cfg = CircuitConfig(
        L=L,
        p=p,
        T=T,
        seed=spec.seed,
        protocol=spec.protocol,
        realization=k,
        final_gate=spec.final_gate,
    )
    result = run(cfg)
    conc = None
    if spec.protocol == "two_ancilla":
        out, rho = result
        conc = concurrence(rho)
    else:
        out = result
    ref = None
    if spec.protocol == "one_reference":
        ref = float(le_ref(out.graph, out.ref_indices[0]))
    R = order_parameter_R(out.graph, out.n_sites)
    head = (spec.protocol, L, p, T, spec.seed, k)
    rows = [head + (R, ref, conc, None, None)]
    for r, c in enumerate(correlation_profile(out.graph, out.n_sites), start=1):
        rows.append(head + (None, None, None, r, float(c)))
    return rows


def _chunk_rows(args) -> list[tuple]:
    spec, L, p, ks = args
    out: list[tuple] = []
    for k in ks:
        out.extend(realization_rows(spec, L, p, k))
    return out


# ---------------------------------------------------------------------------
# persistence


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def _row_key(row: tuple):
    r = row[9]
    return (row[0], row[1], row[2], row[5], -1 if r is None else r)


def write_raw_csv(path: str, rows: list[tuple]) -> None:
    rows = sorted(rows, key=_row_key)
    with open(path, "w", newline="") as fh:
        fh.write(f"# generated {datetime.now(timezone.utc).isoformat()}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RAW_HEADER)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def read_raw_rows(path: str) -> list[tuple]:
    """Parse a raw CSV back into typed row tuples."""
    rows: list[tuple] = []
    with open(path, newline="") as fh:
        plain = (line for line in fh if not line.startswith("#"))
        reader = csv.reader(plain)
        header = next(reader, None)
        if header != RAW_HEADER:
            raise ValueError(f"unexpected raw CSV header in {path}: {header}")
        for rec in reader:
            proto, L, p, T, seed, k, R, ref, conc, r, c = rec
            rows.append(
                (
                    proto,
                    int(L),
                    float(p),
                    int(T),
                    int(seed),
                    int(k),
                    float(R) if R else None,
                    float(ref) if ref else None,
                    float(conc) if conc else None,
                    int(r) if r else None,
                    float(c) if c else None,
                )
            )
    return rows


def _point_key(row: tuple) -> tuple:
    return (row[0], row[1], row[2])


def run_sweep(spec: SweepSpec, jobs: int = 1, progress=None) -> dict:
    """Run (or resume) the sweep and write all artifacts.

    Returns the aggregate document.  ``progress`` is an optional
    callable receiving one line per completed grid point.
    """
    os.makedirs(spec.out_dir, exist_ok=True)
    raw_path = os.path.join(spec.out_dir, "raw.csv")

    rows: list[tuple] = []
    done: set[tuple] = set()
    if os.path.exists(raw_path):
        rows = read_raw_rows(raw_path)
        done = {(_point_key(r), r[5]) for r in rows if r[9] is None}

    pending: list[tuple] = []
    for L in spec.L_list:
        for p in spec.p_grid:
            point = (spec.protocol, L, p)
            ks = [
                k
                for k in range(spec.n_realizations)
                if (point, k) not in done
            ]
            if ks:
                pending.append((spec, L, p, ks))

    if jobs > 1 and len(pending) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for task, new_rows in zip(pending, pool.map(_chunk_rows, pending)):
                rows.extend(new_rows)
                if progress:
                    progress(f"L={task[1]} p={task[2]} (+{len(task[3])} realizations)")
    else:
        for task in pending:
            rows.extend(_chunk_rows(task))
            if progress:
                progress(f"L={task[1]} p={task[2]} (+{len(task[3])} realizations)")

    write_raw_csv(raw_path, rows)
    agg = aggregate_rows(rows)
    with open(os.path.join(spec.out_dir, "aggregates.json"), "w") as fh:
        json.dump(agg, fh, indent=1, sort_keys=True)
        fh.write("\n")
    write_plot_files(spec.out_dir, agg)
    return agg


# ---------------------------------------------------------------------------
# aggregation


def _est_doc(est: EnsembleEstimate) -> dict:
    return {"mean": est.mean, "stderr": est.stderr, "count": est.count}


def aggregate_rows(rows: list[tuple]) -> dict:
    """Per-(protocol, L, p) ensemble estimates recomputed from raw rows."""
    stats: dict[tuple, dict] = {}
    for row in sorted(rows, key=_row_key):
        key = _point_key(row)
        slot = stats.setdefault(
            key,
            {"T": row[3], "seed": row[4], "R": RunningStat(), "le_ref": RunningStat(),
             "concurrence": RunningStat(), "c_le": {}},
        )
        _, _, _, _, _, _, R, ref, conc, r, c = row
        if r is None:
            slot["R"].push(R)
            if ref is not None:
                slot["le_ref"].push(ref)
            if conc is not None:
                slot["concurrence"].push(conc)
        else:
            slot["c_le"].setdefault(r, RunningStat()).push(c)
    doc: dict[str, dict] = {}
    for (proto, L, p), slot in sorted(stats.items()):
        entry = {
            "protocol": proto,
            "L": L,
            "p": p,
            "T": slot["T"],
            "seed": slot["seed"],
            "R": _est_doc(slot["R"].result()),
            "le_ref": (
                _est_doc(slot["le_ref"].result()) if slot["le_ref"].count else None
            ),
            "concurrence": (
                _est_doc(slot["concurrence"].result())
                if slot["concurrence"].count
                else None
            ),
            "c_le": {
                str(r): _est_doc(st.result())
                for r, st in sorted(slot["c_le"].items())
            },
        }
        doc[f"{proto},L={L},p={_fmt(p)}"] = entry
    return doc


# ---------------------------------------------------------------------------
# plot data


def _tsv(path: str, header: list[str], rows: list[list]) -> None:
    with open(path, "w") as fh:
        fh.write("\t".join(header) + "\n")
        for row in rows:
            fh.write("\t".join(_fmt(v) for v in row) + "\n")


def write_plot_files(out_dir: str, agg: dict) -> None:
    """Emit the tab-separated per-figure data files."""
    entries = sorted(agg.values(), key=lambda e: (e["protocol"], e["L"], e["p"]))
    r_rows, c_rows, ref_rows, conc_rows = [], [], [], []
    for e in entries:
        base = [e["L"], e["p"]]
        r_rows.append(base + [e["R"]["mean"], e["R"]["stderr"], e["R"]["count"]])
        for r, est in sorted(e["c_le"].items(), key=lambda kv: int(kv[0])):
            c_rows.append(base + [int(r), est["mean"], est["stderr"]])
        if e["le_ref"]:
            ref_rows.append(
                base
                + [e["le_ref"]["mean"], e["le_ref"]["stderr"], e["le_ref"]["count"]]
            )
        if e["concurrence"]:
            conc_rows.append(
                base
                + [
                    e["concurrence"]["mean"],
                    e["concurrence"]["stderr"],
                    e["concurrence"]["count"],
                ]
            )
    _tsv(
        os.path.join(out_dir, "fig2_R_vs_p.tsv"),
        ["L", "p", "R_mean", "R_stderr", "count"],
        r_rows,
    )
    _tsv(
        os.path.join(out_dir, "fig3_cle_vs_r.tsv"),
        ["L", "p", "r", "c_le_mean", "c_le_stderr"],
        c_rows,
    )
    if ref_rows:
        _tsv(
            os.path.join(out_dir, "fig5_leref.tsv"),
            ["L", "p", "le_ref_mean", "le_ref_stderr", "count"],
            ref_rows,
        )
    if conc_rows:
        _tsv(
            os.path.join(out_dir, "fig6_concurrence.tsv"),
            ["L", "p", "concurrence_mean", "concurrence_stderr", "count"],
            conc_rows,
        )


# ---------------------------------------------------------------------------
# fits over aggregates


def fit_report(agg: dict, p_c: float = 0.16) -> dict:
    """Correlation-length table, exponent fit, and crossing estimate.

    Points at ``p <= p_c`` or failing the decay test are flagged
    SATURATED; the exponent is fitted on the finite-length points of the
    largest system size.  Raises ValueError when no point above ``p_c``
    yields a finite length ("no area-law points").
    """
    xi_table = []
    for entry in sorted(agg.values(), key=lambda e: (e["L"], e["p"])):
        L, p = entry["L"], entry["p"]
        count = entry["R"]["count"]
        points = [
            (int(r), est["mean"], est["stderr"])
            for r, est in entry["c_le"].items()
        ]
        if not points:
            continue
        row = {"L": L, "p": p, "xi": None, "r_squared": None, "saturated": False}
        try:
            fit = fit_correlation_length(points, n_trials=count, n_sites=L)
            if fit.saturated:
                row["saturated"] = True
            else:
                row["xi"] = fit.value
                row["r_squared"] = fit.r_squared
        except ValueError as exc:
            row["error"] = str(exc)
        if p <= p_c:
            row["saturated"] = True
        xi_table.append(row)
    if not xi_table:
        raise ValueError("no correlation data in aggregates")

    best_L = max(row["L"] for row in xi_table)
    nu_points = [
        (row["p"], row["xi"])
        for row in xi_table
        if row["L"] == best_L and row["p"] > p_c and row["xi"] is not None
    ]
    if not nu_points:
        raise ValueError("no area-law points above p_c; cannot fit an exponent")
    report: dict = {"p_c": p_c, "xi_table": xi_table, "nu": None, "crossing": None}
    if len(nu_points) >= 3:
        fit = fit_nu(nu_points, p_c)
        report["nu"] = {
            "value": fit.value,
            "r_squared": fit.r_squared,
            "L": best_L,
            "p_window": list(fit.window),
        }

    curves: dict[int, list] = {}
    for entry in agg.values():
        curves.setdefault(entry["L"], []).append(
            (entry["p"], entry["R"]["mean"], entry["R"]["stderr"])
        )
    if len(curves) >= 2:
        try:
            report["crossing"] = find_crossing(curves)
        except ValueError as exc:
            report["crossing_error"] = str(exc)
    return report


def write_fit_outputs(out_dir: str, report: dict) -> None:
    """Persist the fit report and the xi-vs-(p - p_c) plot data."""
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "fit_report.json"), "w") as fh:
        json.dump(report, fh, indent=1, sort_keys=True)
        fh.write("\n")
    rows = [
        [
            row["L"],
            row["p"],
            round(row["p"] - report["p_c"], 10),
            row["xi"],
            row["r_squared"],
            int(row["saturated"]),
        ]
        for row in report["xi_table"]
    ]
    _tsv(
        os.path.join(out_dir, "fig4_xi_vs_dp.tsv"),
        ["L", "p", "dp", "xi", "r_squared", "saturated"],
        rows,
    )
