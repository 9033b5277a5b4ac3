"""End-to-end CLI behavior: output formats, exit codes, manifests, resume."""

import os

import numpy as np
import pytest

from syncpersist import cli, experiments as exp, graphs


def run(argv):
    return cli.main(argv)


def test_parse_range():
    r = cli.parse_range("0:5:26")
    assert len(r) == 26
    assert r[0] == 0.0
    assert r[-1] == 5.0
    assert np.array_equal(cli.parse_range("1.5"), [1.5])
    with pytest.raises(cli.CliError):
        cli.parse_range("1:2")
    with pytest.raises(cli.CliError):
        cli.parse_range("1:2:0")


def test_unknown_subcommand_exit_1(capsys):
    assert run(["frobnicate"]) == 1
    assert "usage" in capsys.readouterr().err


def test_unknown_flag_exit_1(capsys):
    assert run(["spectra", "--bogus"]) == 1


def test_spectra_k5(tmp_path, capsys):
    edges = tmp_path / "k5.edges"
    assert run(["gen-graph", "--kind", "complete", "--n", "5",
                "--out", str(edges)]) == 0
    assert run(["spectra", "--graph", str(edges)]) == 0
    out = capsys.readouterr().out.strip().splitlines()[-1]
    assert out == "5 5.000000 8 4 4"


def test_spectra_missing_graph_exit_1(capsys):
    assert run(["spectra"]) == 1
    assert "error" in capsys.readouterr().err


def test_spectra_nonexistent_file_exit_1():
    assert run(["spectra", "--graph", "/nonexistent/file.edges"]) == 1


def test_gen_graph_stdout(capsys):
    assert run(["gen-graph", "--kind", "path", "--n", "3"]) == 0
    assert capsys.readouterr().out == "3 2\n1 2\n2 3\n"


def test_gen_graph_deterministic(tmp_path):
    a = tmp_path / "a.edges"
    b = tmp_path / "b.edges"
    for p in (a, b):
        assert run(["gen-graph", "--kind", "er", "--n", "30", "--p", "0.2",
                    "--seed", "5", "--out", str(p)]) == 0
    assert a.read_text() == b.read_text()


def test_seed_env_fallback(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("SYNCPERSIST_SEED", "5")
    a = tmp_path / "env.edges"
    assert run(["gen-graph", "--kind", "er", "--n", "30", "--p", "0.2",
                "--out", str(a)]) == 0
    b = tmp_path / "flag.edges"
    assert run(["gen-graph", "--kind", "er", "--n", "30", "--p", "0.2",
                "--seed", "5", "--out", str(b)]) == 0
    assert a.read_text() == b.read_text()


def test_bounds_fitted_constants(capsys):
    assert run(["bounds", "--lambda2", "2", "--opnorm", "2", "--gamma", "1",
                "--c1", "8", "--c2", "4", "--alpha", "1"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[1] == "alpha_star = 0.5"
    row = lines[-1].split(",")
    assert float(row[0]) == 1.0
    assert float(row[1]) == pytest.approx(4.0)


def test_bounds_requires_constants(capsys):
    assert run(["bounds", "--lambda2", "2", "--opnorm", "2"]) == 1


def test_bounds_alpha_table(capsys):
    assert run(["bounds", "--lambda2", "2", "--opnorm", "2", "--gamma", "1",
                "--eta", "1", "--K", "0.125", "--alpha", "1:2:3"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 3 + 3  # constants, alpha_star, header + 3 rows


def tongue_args(out, extra=()):
    return ["tongue", "--n", "2", "--alpha", "0.5:1.0:2", "--delta", "0:1:2",
            "--tau", "5", "--T", "15", "--ensemble", "2", "--seed", "3",
            "--out", str(out)] + list(extra)


def test_tongue_csv_and_manifest(tmp_path, capsys):
    out = tmp_path / "tongue.csv"
    assert run(tongue_args(out)) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "alpha,delta,Ea,blowups"
    assert len(lines) == 1 + 4
    manifest = exp.read_manifest(str(out) + ".manifest")
    assert manifest["seed"] == "3"
    assert manifest["alpha"] == "0.5:1.0:2"


def test_tongue_manifest_rerun_bitwise(tmp_path):
    out1 = tmp_path / "a.csv"
    assert run(tongue_args(out1)) == 0
    out2 = tmp_path / "b.csv"
    assert run(["tongue", "--config", str(out1) + ".manifest",
                "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_tongue_worker_invariance(tmp_path):
    out1 = tmp_path / "w1.csv"
    out2 = tmp_path / "w2.csv"
    assert run(tongue_args(out1, ["--workers", "1"])) == 0
    assert run(tongue_args(out2, ["--workers", "4"])) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_tongue_resume_bitwise(tmp_path):
    full = tmp_path / "full.csv"
    assert run(tongue_args(full)) == 0
    partial = tmp_path / "part.csv"
    lines = full.read_text().splitlines(keepends=True)
    partial.write_text("".join(lines[:3]))  # header + 2 of 4 cells
    assert run(tongue_args(partial, ["--resume"])) == 0
    assert partial.read_bytes() == full.read_bytes()


def test_fastlimit_runs(tmp_path):
    out = tmp_path / "fast.csv"
    assert run(["fastlimit", "--n", "2", "--alpha", "0.6", "--delta", "0:1:2",
                "--tau", "2", "--T", "6", "--ensemble", "1", "--seed", "0",
                "--omega", "50", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 3


def synthetic_tongue_csv(path):
    al = np.linspace(0.6, 2.0, 15)
    de = np.linspace(0.0, 7.0, 71)
    with open(path, "w") as fh:
        fh.write("alpha,delta,Ea,blowups\n")
        for a in al:
            for d in de:
                ea = 0.0 if d < 8.0 - 4.0 / a else 50.0
                fh.write(f"{float(a)!r},{float(d)!r},{ea!r},0\n")


def test_fit_boundary(tmp_path, capsys):
    csv = tmp_path / "syn.csv"
    synthetic_tongue_csv(csv)
    fit = tmp_path / "fit.txt"
    assert run(["fit-boundary", "--csv", str(csv), "--out", str(fit)]) == 0
    out = capsys.readouterr().out
    assert "constants: fitted" in out
    values = exp.read_manifest(fit)
    # quantized boundary: recovered within one delta-grid cell
    assert abs(float(values["c1"]) - 8.0) < 0.2
    assert abs(float(values["c2"]) - 4.0) < 0.3
    assert abs(float(values["alpha_star"]) - 0.5) < 0.05


def test_fit_boundary_missing_csv(capsys):
    assert run(["fit-boundary", "--csv", "/nonexistent.csv"]) == 1


def test_fit_boundary_too_few_points(tmp_path):
    csv = tmp_path / "flat.csv"
    with open(csv, "w") as fh:
        fh.write("alpha,delta,Ea,blowups\n")
        for a in (0.5, 1.0):
            for d in (0.0, 1.0):
                fh.write(f"{a},{d},0.0,0\n")
    assert run(["fit-boundary", "--csv", str(csv)]) == 1


def test_scaling_small(tmp_path, capsys):
    outdir = tmp_path / "scal"
    assert run(["scaling", "--kind", "ba", "--n-list", "10,20", "--alpha", "5",
                "--ddelta", "1.0", "--graph-seeds", "1", "--tau", "2",
                "--T", "6", "--ensemble", "1", "--max-delta", "4",
                "--seed", "0", "--out", str(outdir)]) == 0
    assert (outdir / "scaling_samples.csv").exists()
    assert (outdir / "scaling_summary.csv").exists()
    assert (outdir / "scaling_fit.csv").exists()
    assert (outdir / "scaling.manifest").exists()
    assert "beta" in capsys.readouterr().out


def test_atomic_write_no_tmp_left(tmp_path):
    out = tmp_path / "g.edges"
    assert run(["gen-graph", "--kind", "complete", "--n", "4",
                "--out", str(out)]) == 0
    assert out.exists()
    assert not os.path.exists(str(out) + ".tmp")


def test_config_file_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "cfg"
    cfg.write_text("kind = path\nn = 3\n")
    assert run(["gen-graph", "--config", str(cfg)]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "3 2"
    assert run(["gen-graph", "--config", str(cfg), "--n", "4"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "4 3"
