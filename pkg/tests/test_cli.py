import csv
import io
import json

import pytest
from conftest import CORONENE, CUBANE, DODECANE

from assemblage.cli import RunConfig, main
from assemblage.cli.workflows import run_pipeline
from assemblage.errors import ConfigError

SMALL_GRID = {"rounds": [20], "max_depth": [3], "learning_rate": [0.1]}


def small_config(tmp_path, **kw):
    d = dict(n_molecules=120, budget_s=10, max_mz=300, k_folds=3, grid=SMALL_GRID,
             hyperparameters={"rounds": 20, "max_depth": 3}, output=str(tmp_path / "out"))
    d.update(kw)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(d))
    return path


def read_csv(path):
    return list(csv.DictReader(io.StringIO(path.read_text())))


def test_score_exemplars(tmp_path):
    src = tmp_path / "in.smi"
    src.write_text(f"{DODECANE}\tdodecane\n{CUBANE}\tcubane\n{CORONENE}\tcoronene\n")
    out = tmp_path / "scores.csv"
    assert main(["score", "--input", str(src), "--output", str(out)]) == 0
    rows = read_csv(out)
    assert [r["MA_upper"] for r in rows] == ["5", "4", "6"]
    assert list(rows[0])[:10] == ["name", "smiles", "N_B", "MW", "MA_lower", "MA_upper",
                                  "MA_exact", "bertz", "bottcher", "elapsed_ms"]


def test_score_empty_file(tmp_path, capsys):
    src = tmp_path / "empty.smi"
    src.write_text("")
    out = tmp_path / "scores.csv"
    assert main(["score", "--input", str(src), "--output", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 1
    assert "warning" in capsys.readouterr().err


def test_score_partial_failure(tmp_path):
    src = tmp_path / "in.smi"
    src.write_text("CCO\nC(\nc1ccccc1\n")
    out = tmp_path / "scores.csv"
    assert main(["score", "--input", str(src), "--output", str(out)]) == 0
    rows = read_csv(out)
    assert len(rows) == 3
    assert [bool(r["error"]) for r in rows] == [False, True, False]


def test_unreadable_input_is_io_error(tmp_path):
    assert main(["score", "--input", str(tmp_path / "missing.smi")]) == 2


def test_usage_errors():
    assert main([]) == 1
    assert main(["score", "--bogus"]) == 1
    assert main(["threshold", "--input", "x"]) == 1


def test_train_frac_one_rejected(tmp_path):
    with pytest.raises(ConfigError):
        RunConfig(train_frac=1.0)
    cfg = small_config(tmp_path, train_frac=1.0)
    assert main(["pipeline", "--config", str(cfg)]) == 1


def test_mismatch_single_energy_rejected(tmp_path):
    cfg = small_config(tmp_path)
    assert main(["mismatch", "--config", str(cfg), "--energy", "20"]) == 1


def test_config_round_trip():
    cfg = RunConfig(seed=3, energies=(10, 40))
    assert RunConfig.from_json(cfg.to_json()) == cfg
    with pytest.raises(ConfigError):
        RunConfig.from_json('{"nope": 1}')
    with pytest.raises(ConfigError):
        RunConfig(hyperparameters={"rounds": -1})


def test_pipeline_outputs_and_rerun(tmp_path):
    cfg = small_config(tmp_path)
    assert main(["pipeline", "--config", str(cfg)]) == 0
    out = tmp_path / "out"
    names = {p.name for p in out.iterdir()}
    assert {"model.json", "metrics.csv", "error_profile.csv", "cv_table.csv",
            "predictions.csv", "config.json", "summary.json"} <= names
    first = {n: (out / n).read_bytes() for n in ("metrics.csv", "error_profile.csv",
                                                 "cv_table.csv", "predictions.csv", "model.json")}
    assert main(["pipeline", "--config", str(out / "config.json")]) == 0
    for n, data in first.items():
        assert (out / n).read_bytes() == data, n


def test_seed_changes_outputs(tmp_path):
    a = run_pipeline(RunConfig.from_json(small_config(tmp_path).read_text()))
    b = run_pipeline(RunConfig.from_json(small_config(tmp_path, seed=1).read_text()))
    assert a.metrics_csv != b.metrics_csv


def test_train_predict_eval(tmp_path):
    cfg = small_config(tmp_path)
    model = tmp_path / "model.json"
    assert main(["train", "--config", str(cfg), "--output", str(model)]) == 0
    smi = tmp_path / "few.smi"
    smi.write_text("CCCCO\tbutanol\nCC(=O)O\tacetic\n")
    msp = tmp_path / "few.msp"
    assert main(["simulate", "--input", str(smi), "--output", str(msp), "--energy", "20"]) == 0
    pred = tmp_path / "pred.csv"
    assert main(["predict", "--model", str(model), "--input", str(msp), "--output", str(pred)]) == 0
    assert [r["name"] for r in read_csv(pred)] == ["butanol 20eV", "acetic 20eV"]
    ev = tmp_path / "eval.csv"
    assert main(["eval", "--config", str(cfg), "--model", str(model), "--output", str(ev)]) == 0
    assert read_csv(ev)[0]["ma_bin"] == "all"


def test_spectra_parse(tmp_path):
    msp = tmp_path / "a.msp"
    msp.write_text("Name: a\nNum Peaks: 2\n77 300; 105 999\n\nName: b\nNum Peaks: 1\n50 1\n")
    out = tmp_path / "a.csv"
    assert main(["spectra-parse", "--input", str(msp), "--output", str(out)]) == 0
    rows = read_csv(out)
    assert [(r["name"], r["n_peaks"], r["base_peak_mz"]) for r in rows] == [("a", "2", "105"), ("b", "1", "50")]
    msp.write_text("Name: a\nNum Peaks: 3\n77 300; 105 999\n")
    assert main(["spectra-parse", "--input", str(msp)]) == 1


def test_scaling_and_threshold(tmp_path):
    src = tmp_path / "in.smi"
    src.write_text("".join("C" * n + "\n" for n in range(2, 26)) + "c1ccccc1\n")
    scores = tmp_path / "scores.csv"
    assert main(["score", "--input", str(src), "--output", str(scores)]) == 0
    out = tmp_path / "scaling.csv"
    assert main(["scaling", "--input", str(scores), "--output", str(out)]) == 0
    assert [r["score"] for r in read_csv(out)] == ["MA", "bertz", "bottcher"]
    th = tmp_path / "th.csv"
    assert main(["threshold", "--input", str(scores), "--ma-threshold", "5",
                 "--output", str(th)]) == 0
    assert read_csv(th)[0]["kind"] == "summary"


def test_recursive_ma_command(tmp_path):
    tree = tmp_path / "t.json"
    tree.write_text(json.dumps({"mass": 4.0, "children": [{"mass": 2.0}, {"mass": 2.0}]}))
    out = tmp_path / "e.json"
    assert main(["recursive-ma", "--input", str(tree), "--block-mass", "1", "--output", str(out)]) == 0
    assert json.loads(out.read_text())["estimate"] == 2


def test_symmetry_command_custom_config(tmp_path):
    conf = tmp_path / "s.conf"
    conf.write_text("[dodecane]\nsmiles = CCCCCCCCCCCC\nelement = N\npositions = 2 4\n")
    out = tmp_path / "s.csv"
    assert main(["symmetry", "--input", str(conf), "--output", str(out)]) == 0
    assert [r["MA_upper"] for r in read_csv(out)] == ["5", "6", "7"]


def test_threads_env(tmp_path, monkeypatch):
    monkeypatch.setenv("ASSEMBLAGE_THREADS", "zero")
    assert main(["recursive-ma", "--input", "x", "--block-mass", "1"]) == 1
