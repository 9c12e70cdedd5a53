"""Command line interface.

Subcommands:

* ``sweep``: run a Monte Carlo ensemble over an (L, p) grid from a JSON
  config and write raw/aggregated/plot artifacts.
* ``fit``: correlation-length table, critical-exponent fit, and
  curve-crossing estimate from a sweep's aggregates.
* ``snapshot``: dump final-state graphs of single realizations as DOT.
* ``verify``: run the dense-oracle verification suites.

Exit codes: 0 success, 1 verification failures, 2 validation error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .circuit import FINAL_GATES, PROTOCOLS, CircuitConfig, run
from .graphstate import to_dot
from .sweep import SweepSpec, fit_report, run_sweep, write_fit_outputs
from .verify import run_all

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_VALIDATION = 2
EXIT_IO = 3


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="mipt-le",
        description="Monitored-circuit localizable-entanglement diagnostics",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sweep", help="run an ensemble over an (L, p) grid")
    sp.add_argument("--config", required=True, help="JSON sweep spec")
    sp.add_argument("--seed", type=int, default=None, help="override config seed")
    sp.add_argument("--out", default=None, help="override output directory")
    sp.add_argument(
        "--jobs",
        type=int,
        default=os.cpu_count() or 1,
        help="worker processes (default: available parallelism)",
    )
    sp.add_argument("--quiet", action="store_true", help="suppress progress lines")

    fp = sub.add_parser("fit", help="fit xi, nu and the crossing from aggregates")
    fp.add_argument("--in", dest="inp", required=True, help="aggregates.json path")
    fp.add_argument("--p-c", type=float, default=0.16, help="critical point input")
    fp.add_argument("--out", default=None, help="output directory (default: input's)")
    fp.add_argument("--quiet", action="store_true")

    gp = sub.add_parser("snapshot", help="write final graphs as DOT files")
    gp.add_argument("--L", type=int, required=True)
    gp.add_argument("--p", type=float, required=True)
    gp.add_argument("--T", type=int, default=None, help="layers (default 4L)")
    gp.add_argument("--seed", type=int, default=0)
    gp.add_argument("--protocol", choices=PROTOCOLS, default="plain")
    gp.add_argument("--final-gate", choices=FINAL_GATES, default="random_clifford")
    gp.add_argument("--n", type=int, default=1, help="realizations to render")
    gp.add_argument("--out", required=True, help="output directory")

    vp = sub.add_parser("verify", help="run the dense-oracle suites")
    vp.add_argument("--scale", type=float, default=1.0, help="trial-count multiplier")
    vp.add_argument("--seed", type=int, default=0)
    vp.add_argument("--quiet", action="store_true")
    return ap


def cmd_sweep(args) -> int:
    with open(args.config) as fh:
        doc = json.load(fh)
    if args.seed is not None:
        doc["seed"] = args.seed
    if args.out is not None:
        doc["out"] = args.out
    spec = SweepSpec.from_dict(doc)
    progress = None if args.quiet else lambda line: print(line, flush=True)
    agg = run_sweep(spec, jobs=max(1, args.jobs), progress=progress)
    if not args.quiet:
        print(f"wrote {len(agg)} grid points under {spec.out_dir}")
    return EXIT_OK


def cmd_fit(args) -> int:
    with open(args.inp) as fh:
        agg = json.load(fh)
    report = fit_report(agg, p_c=args.p_c)
    out_dir = args.out or (os.path.dirname(os.path.abspath(args.inp)))
    write_fit_outputs(out_dir, report)
    if not args.quiet:
        for row in report["xi_table"]:
            tag = "SATURATED" if row["saturated"] else f"xi = {row['xi']:.4g}"
            extra = f" (R^2 = {row['r_squared']:.4f})" if row["r_squared"] else ""
            print(f"L={row['L']} p={row['p']}: {tag}{extra}")
        if report["nu"]:
            nu = report["nu"]
            print(
                f"nu = {nu['value']:.4f} (R^2 = {nu['r_squared']:.4f}, "
                f"L = {nu['L']}, p in {nu['p_window']})"
            )
        if report["crossing"] is not None:
            print(f"crossing p* = {report['crossing']:.4f}")
        elif "crossing_error" in report:
            print(f"crossing: {report['crossing_error']}")
    return EXIT_OK


def cmd_snapshot(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    T = args.T if args.T is not None else 4 * args.L
    for k in range(args.n):
        cfg = CircuitConfig(
            L=args.L,
            p=args.p,
            T=T,
            seed=args.seed,
            protocol=args.protocol,
            realization=k,
            final_gate=args.final_gate,
        )
        result = run(cfg)
        out = result[0] if cfg.protocol == "two_ancilla" else result
        labels = {v: str(v) for v in range(out.n_sites)}
        for idx, ref in enumerate(out.ref_indices, start=1):
            labels[ref] = f"R{idx}"
        path = os.path.join(args.out, f"snapshot_L{args.L}_p{args.p}_r{k}.dot")
        with open(path, "w") as fh:
            fh.write(to_dot(out.graph, labels))
        print(path)
    return EXIT_OK


def cmd_verify(args) -> int:
    log = None if args.quiet else lambda line: print(line, flush=True)
    reports = run_all(scale=args.scale, seed=args.seed, log=log)
    bad = [rep for rep in reports if not rep["ok"]]
    for rep in bad:
        for example in rep["examples"]:
            print(f"{rep['name']}: {example}", file=sys.stderr)
    return EXIT_FAILURES if bad else EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "sweep": cmd_sweep,
        "fit": cmd_fit,
        "snapshot": cmd_snapshot,
        "verify": cmd_verify,
    }[args.command]
    try:
        return handler(args)
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
