import json
import subprocess
import sys

import pytest

from csbundle.cli import main
from csbundle.repvar import load_dataset


def run_json(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, json.loads(out)


def statuses(doc):
    return {r["name"]: r["status"] for r in doc["records"]}


def test_verify_genus1_passes(capsys):
    code, doc = run_json(["verify-genus1", "--samples", "50"], capsys)
    assert code == 0
    assert doc["summary"]["pass"] and doc["summary"]["failed"] == 0
    names = statuses(doc)
    for key in ("chern_weil", "lattice_chern", "holonomy_degree", "covering_degree",
                "degree_from_covering", "transport_half_cell", "transport_unit_cell"):
        assert names[key] == "pass"
    methods = {r["method"] for r in doc["chern_results"]}
    assert {"chern_weil", "lattice_chern", "holonomy_degree"} <= methods
    assert doc["provenance"]["seed"] == 0


def test_verify_genus1_reversed_orientation(capsys):
    code, doc = run_json(["verify-genus1", "--orientation", "-", "--samples", "20"], capsys)
    assert code == 0
    rec = {r["name"]: r for r in doc["records"]}
    assert rec["lattice_chern"]["computed"] == -2
    assert rec["degree_from_covering"]["computed"] == -1


def test_verify_genus1_coarse_grid_fails_admissibility(capsys):
    code, doc = run_json(["verify-genus1", "--grid", "2", "--samples", "20"], capsys)
    assert code == 1
    failed = [r["name"] for r in doc["records"] if r["status"] == "fail"]
    assert failed == ["lattice_chern"]


def test_report_is_deterministic(capsys):
    _, first = run_json(["cocycle-check", "--seed", "4", "--samples", "5"], capsys)
    _, second = run_json(["cocycle-check", "--seed", "4", "--samples", "5"], capsys)
    first.pop("chern_results"), second.pop("chern_results")
    assert first == second


def test_cocycle_check(capsys):
    code, doc = run_json(["cocycle-check", "--samples", "5"], capsys)
    assert code == 0
    assert set(statuses(doc).values()) == {"pass"}


def test_goldman_writes_pairing(tmp_path, capsys):
    out = tmp_path / "g.json"
    code = main(["goldman", "--genus", "2", "--samples", "3", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    rec = {r["name"]: r for r in doc["records"]}
    assert rec["genus1_goldman"]["computed"]["im"] == pytest.approx(-12.566370614359172)
    csv_text = (tmp_path / "g.pairing.csv").read_text()
    assert csv_text.splitlines()[0] == "row,col,value"
    assert len(csv_text.splitlines()) == 1 + 36


def test_sample_reps_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["sample-reps", "--genus", "2", "--samples", "7", "--seed", "9", "--out", str(a)]) == 0
    assert main(["sample-reps", "--genus", "2", "--samples", "7", "--seed", "9", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    genus, meta, reps = load_dataset(a.read_text())
    assert genus == 2 and len(reps) == 7


def test_plot_data_from_dataset(tmp_path, capsys):
    data = tmp_path / "reps.json"
    assert main(["sample-reps", "--genus", "1", "--samples", "30", "--out", str(data)]) == 0
    capsys.readouterr()
    outdir = tmp_path / "plots"
    code = main(["plot-data", "--input", str(data), "--out", str(outdir)])
    assert code == 0
    names = {p.name for p in outdir.iterdir()}
    assert {"curvature.csv", "plaquette_phases.csv", "pillowcase.csv"} <= names
    assert (outdir / "pillowcase.svg").read_text().startswith("<svg")


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nseed = 3\nsamples = 4\ngrid = 2\n")
    code, doc = run_json(["verify-genus1", "--config", str(cfg), "--grid", "8"], capsys)
    assert code == 0
    assert doc["provenance"]["seed"] == 3
    assert doc["provenance"]["grid"] == 8


@pytest.mark.parametrize("args", [
    ["sample-reps", "--genus", "0"],
    ["verify-genus1", "--grid", "0"],
    ["plot-data"],
    ["verify-genus1", "--config", "/nonexistent/cfg"],
])
def test_configuration_errors_exit_2(args, capsys):
    assert main(args) == 2
    assert "csbundle:" in capsys.readouterr().err


def test_bad_config_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert main(["verify-genus1", "--config", str(cfg)]) == 2


def test_empty_input_is_config_error(tmp_path, capsys):
    empty = tmp_path / "empty.json"
    empty.write_text("")
    assert main(["plot-data", "--input", str(empty)]) == 2


def test_missing_input_is_io_error(tmp_path, capsys):
    assert main(["plot-data", "--input", str(tmp_path / "nope.json")]) == 3


def test_csv_format(capsys):
    assert main(["cocycle-check", "--samples", "3", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("name,status,expected,computed,tolerance")


def test_module_entry_point_help():
    res = subprocess.run([sys.executable, "-m", "csbundle", "--help"], capture_output=True, text=True)
    assert res.returncode == 0
    for cmd in ("verify-genus1", "cocycle-check", "goldman", "sample-reps", "plot-data"):
        assert cmd in res.stdout


def test_cocycle_check_trivial_character_only(capsys):
    code, doc = run_json(["cocycle-check", "--cocycle-range", "0", "--samples", "4"], capsys)
    assert code == 0
    rec = {r["name"]: r for r in doc["records"]}
    assert rec["numeric_vs_exact_max_error"]["computed"] < 1e-12


def test_plot_data_grids(tmp_path, capsys):
    import numpy as np
    report = tmp_path / "v.json"
    assert main(["verify-genus1", "--samples", "10", "--out", str(report)]) == 0
    outdir = tmp_path / "p"
    assert main(["plot-data", "--input", str(report), "--out", str(outdir)]) == 0
    curv = np.loadtxt(outdir / "curvature.csv", delimiter=",", skiprows=1)
    assert np.ptp(curv[:, 4]) == 0
    ph = np.loadtxt(outdir / "plaquette_phases.csv", delimiter=",", skiprows=1)
    assert ph.shape[0] == 64
    assert np.ptp(ph[:, 4]) < 1e-12
    assert ph[:, 4].sum() == pytest.approx(-4 * np.pi, abs=1e-10)
