import json
import os

import numpy as np
import pytest

from mipt_le import SweepSpec, run_sweep
from mipt_le.cli import main
from mipt_le.sweep import (
    RAW_HEADER,
    aggregate_rows,
    fit_report,
    read_raw_rows,
    realization_rows,
    write_raw_csv,
)


def tiny_spec(out_dir, **kw):
    base = dict(
        L_list=(8,),
        p_grid=(0.1, 0.3),
        n_realizations=4,
        seed=7,
        out_dir=str(out_dir),
    )
    base.update(kw)
    return SweepSpec(**base)


def read_lines(path):
    with open(path) as fh:
        return fh.read().splitlines()


class TestSweepSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            SweepSpec(L_list=(), p_grid=(0.1,), n_realizations=1)
        with pytest.raises(ValueError):
            SweepSpec(L_list=(8,), p_grid=(), n_realizations=1)
        with pytest.raises(ValueError):
            SweepSpec(L_list=(8,), p_grid=(1.5,), n_realizations=1)
        with pytest.raises(ValueError):
            SweepSpec(L_list=(8,), p_grid=(0.1,), n_realizations=0)
        with pytest.raises(ValueError):
            SweepSpec(L_list=(8,), p_grid=(0.1,), n_realizations=1, protocol="x")
        with pytest.raises(ValueError):
            SweepSpec(L_list=(1,), p_grid=(0.1,), n_realizations=1)

    def test_from_dict_with_list_grid(self):
        spec = SweepSpec.from_dict(
            {"L": [16, 32], "p": [0.1, 0.2], "N": 5, "seed": 3, "out": "x"}
        )
        assert spec.L_list == (16, 32)
        assert spec.p_grid == (0.1, 0.2)
        assert spec.n_realizations == 5

    def test_from_dict_with_range_grid(self):
        spec = SweepSpec.from_dict(
            {"L": [16], "p": {"start": 0.10, "stop": 0.24, "step": 0.02}, "N": 2}
        )
        assert spec.p_grid == (0.10, 0.12, 0.14, 0.16, 0.18, 0.20, 0.22, 0.24)

    def test_from_dict_rejects_unknown_keys(self):
        with pytest.raises(ValueError):
            SweepSpec.from_dict({"L": [8], "p": [0.1], "N": 1, "bogus": 1})


class TestRawRows:
    def test_roundtrip(self, tmp_path):
        spec = tiny_spec(tmp_path)
        rows = realization_rows(spec, 8, 0.1, 0)
        path = str(tmp_path / "raw.csv")
        write_raw_csv(path, rows)
        back = read_raw_rows(path)
        assert back == sorted(rows, key=lambda r: (r[0], r[1], r[2], r[5], r[9] or -1))

    def test_header_check(self, tmp_path):
        path = str(tmp_path / "raw.csv")
        with open(path, "w") as fh:
            fh.write("# generated now\n")
            fh.write("a,b\n")
        with pytest.raises(ValueError):
            read_raw_rows(path)

    def test_scalar_and_profile_rows(self, tmp_path):
        spec = tiny_spec(tmp_path, protocol="two_ancilla")
        rows = realization_rows(spec, 8, 0.1, 0)
        scalar = [r for r in rows if r[9] is None]
        profile = [r for r in rows if r[9] is not None]
        assert len(scalar) == 1
        assert len(profile) == 7  # r = 1..L-1
        assert scalar[0][6] is not None  # R
        assert scalar[0][8] is not None  # concurrence
        assert scalar[0][7] is None  # no le_ref for two_ancilla


class TestRunSweep:
    def test_outputs_and_aggregates(self, tmp_path):
        spec = tiny_spec(tmp_path)
        agg = run_sweep(spec)
        assert set(os.listdir(tmp_path)) >= {
            "raw.csv",
            "aggregates.json",
            "fig2_R_vs_p.tsv",
            "fig3_cle_vs_r.tsv",
        }
        with open(tmp_path / "aggregates.json") as fh:
            agg_disk = json.load(fh)
        for key, entry in agg.items():
            disk = agg_disk[key]
            assert abs(disk["R"]["mean"] - entry["R"]["mean"]) < 1e-12
            assert disk["R"]["count"] == spec.n_realizations

    def test_aggregates_match_raw(self, tmp_path):
        spec = tiny_spec(tmp_path)
        run_sweep(spec)
        rows = read_raw_rows(str(tmp_path / "raw.csv"))
        agg = aggregate_rows(rows)
        key = "plain,L=8,p=0.1"
        r_vals = [r[6] for r in rows if r[2] == 0.1 and r[9] is None]
        assert agg[key]["R"]["mean"] == pytest.approx(float(np.mean(r_vals)), abs=1e-12)

    def test_determinism_excluding_timestamp(self, tmp_path):
        a_dir, b_dir = tmp_path / "a", tmp_path / "b"
        run_sweep(tiny_spec(a_dir))
        run_sweep(tiny_spec(b_dir))
        a = [ln for ln in read_lines(a_dir / "raw.csv") if not ln.startswith("#")]
        b = [ln for ln in read_lines(b_dir / "raw.csv") if not ln.startswith("#")]
        assert a == b
        assert read_lines(a_dir / "aggregates.json") == read_lines(
            b_dir / "aggregates.json"
        )

    def test_resume_completes_partial_run(self, tmp_path):
        spec = tiny_spec(tmp_path)
        run_sweep(spec)
        full = [ln for ln in read_lines(tmp_path / "raw.csv") if not ln.startswith("#")]

        # drop the rows of one realization and rerun
        rows = read_raw_rows(str(tmp_path / "raw.csv"))
        kept = [r for r in rows if not (r[2] == 0.3 and r[5] == 3)]
        write_raw_csv(str(tmp_path / "raw.csv"), kept)
        run_sweep(spec)
        resumed = [
            ln for ln in read_lines(tmp_path / "raw.csv") if not ln.startswith("#")
        ]
        assert resumed == full

    def test_parallel_jobs_match_serial(self, tmp_path):
        a_dir, b_dir = tmp_path / "serial", tmp_path / "par"
        run_sweep(tiny_spec(a_dir), jobs=1)
        run_sweep(tiny_spec(b_dir), jobs=2)
        a = [ln for ln in read_lines(a_dir / "raw.csv") if not ln.startswith("#")]
        b = [ln for ln in read_lines(b_dir / "raw.csv") if not ln.startswith("#")]
        assert a == b

    def test_protocol_outputs(self, tmp_path):
        spec = tiny_spec(tmp_path, protocol="one_reference", p_grid=(0.1,))
        agg = run_sweep(spec)
        entry = agg["one_reference,L=8,p=0.1"]
        assert entry["le_ref"] is not None
        assert entry["concurrence"] is None
        assert (tmp_path / "fig5_leref.tsv").exists()


class TestFitReport:
    def synthetic_agg(self):
        # exact exponential aggregates at one system size; p values far
        # enough above p_c that xi fits inside the r window
        agg = {}
        for p in (0.28, 0.32, 0.36, 0.40):
            xi = abs(p - 0.16) ** -1.31
            c_le = {
                str(r): {
                    "mean": float(np.exp(-r / xi)),
                    "stderr": 0.001,
                    "count": 10000,
                }
                for r in range(1, 64)
            }
            agg[f"plain,L=64,p={p}"] = {
                "protocol": "plain",
                "L": 64,
                "p": p,
                "T": 256,
                "seed": 0,
                "R": {"mean": 0.1, "stderr": 0.01, "count": 100},
                "le_ref": None,
                "concurrence": None,
                "c_le": c_le,
            }
        return agg

    def test_exact_xi_table(self):
        report = fit_report(self.synthetic_agg(), p_c=0.16)
        for row in report["xi_table"]:
            want = abs(row["p"] - 0.16) ** -1.31
            assert row["xi"] == pytest.approx(want, rel=1e-6)
        assert report["nu"]["value"] == pytest.approx(1.31, rel=1e-6)

    def test_only_subcritical_points_is_an_error(self):
        agg = self.synthetic_agg()
        relabeled = {}
        for key, entry in agg.items():
            entry = dict(entry, p=round(entry["p"] - 0.24, 10))
            relabeled[f"plain,L=64,p={entry['p']}"] = entry
        with pytest.raises(ValueError, match="no area-law points"):
            fit_report(relabeled, p_c=0.16)

    def test_empty_aggregates_rejected(self):
        with pytest.raises(ValueError):
            fit_report({}, p_c=0.16)


class TestCliMain:
    def test_sweep_and_fit_roundtrip(self, tmp_path, capsys):
        config = tmp_path / "cfg.json"
        out = tmp_path / "run"
        config.write_text(
            json.dumps({"L": [8], "p": [0.1], "N": 3, "seed": 1, "out": str(out)})
        )
        rc = main(["sweep", "--config", str(config), "--jobs", "1", "--quiet"])
        assert rc == 0
        assert (out / "aggregates.json").exists()

        # fit on a tiny run errs cleanly (too little decay data)
        rc = main(["fit", "--in", str(out / "aggregates.json"), "--quiet"])
        assert rc == 2

    def test_sweep_determinism_via_cli(self, tmp_path):
        config = tmp_path / "cfg.json"
        runs = []
        for name in ("r1", "r2"):
            out = tmp_path / name
            config.write_text(
                json.dumps({"L": [8], "p": [0.2], "N": 3, "seed": 5, "out": str(out)})
            )
            assert main(["sweep", "--config", str(config), "--quiet"]) == 0
            runs.append(
                [
                    ln
                    for ln in read_lines(out / "raw.csv")
                    if not ln.startswith("#")
                ]
            )
        assert runs[0] == runs[1]

    def test_missing_config_is_io_error(self, tmp_path):
        assert main(["sweep", "--config", str(tmp_path / "nope.json")]) == 3

    def test_bad_config_is_validation_error(self, tmp_path):
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps({"L": [8], "p": [0.1]}))
        assert main(["sweep", "--config", str(config), "--quiet"]) == 2

    def test_snapshot_writes_dot(self, tmp_path):
        out = tmp_path / "snaps"
        rc = main(
            [
                "snapshot",
                "--L",
                "8",
                "--p",
                "1.0",
                "--seed",
                "2",
                "--n",
                "2",
                "--out",
                str(out),
            ]
        )
        assert rc == 0
        files = sorted(os.listdir(out))
        assert files == ["snapshot_L8_p1.0_r0.dot", "snapshot_L8_p1.0_r1.dot"]
        text = (out / files[0]).read_text()
        assert text.startswith("graph G {")
        assert "--" not in text  # p = 1 strips every edge

    def test_snapshot_p0_is_connected(self, tmp_path):
        out = tmp_path / "snaps"
        rc = main(["snapshot", "--L", "8", "--p", "0.0", "--out", str(out)])
        assert rc == 0
        text = (out / "snapshot_L8_p0.0_r0.dot").read_text()
        assert text.count("--") >= 7

    def test_verify_subcommand(self, capsys):
        rc = main(["verify", "--scale", "0.01", "--seed", "3"])
        assert rc == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 4
        assert all(ln.endswith("[ok]") for ln in lines)
