import io
import json
import subprocess
import sys


from mythlab.cli import main

from conftest import synthetic_corpus_path


def run(argv, stdin=""):
    out = io.StringIO()
    code = main(argv, stdin=io.StringIO(stdin), stdout=out)
    return code, out.getvalue()


def test_no_arguments_prints_usage(capsys):
    code, _ = run([])
    assert code == 1
    assert "usage: mythlab" in capsys.readouterr().err


def test_unknown_subcommand(capsys):
    assert run(["frobnicate"])[0] == 1
    assert "usage" in capsys.readouterr().err


def test_stats_table1(table1_path):
    code, out = run(["stats", "--data", table1_path])
    assert code == 0 and out == '{"Fact":3,"Myth":3}\n'


def test_stats_synthetic():
    code, out = run(["stats", "--data", synthetic_corpus_path()])
    assert json.loads(out) == {"Fact": 440, "Myth": 200}


def test_data_errors_exit_2(tmp_path, capsys):
    assert run(["stats", "--data", str(tmp_path / "nope.csv")])[0] == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("label,statement\nRumour,text\n")
    assert run(["stats", "--data", str(bad)])[0] == 2
    assert "bad.csv:2" in capsys.readouterr().err


def test_usage_errors_exit_1(table1_path):
    assert run(["stats"])[0] == 1
    assert run(["run", "--data", table1_path, "--splits", "1.5"])[0] == 1
    assert run(["run", "--data", table1_path, "--models", "CNN"])[0] == 1
    assert run(["run", "--data", table1_path, "--cv", "k=five"])[0] == 1
    assert run(["run"])[0] == 1


def test_prep_and_wordfreq(table1_path, tmp_path):
    code, out = run(["prep", "--data", table1_path])
    assert code == 0
    assert out.splitlines()[2] == "Fact\tyoung babi need consist respons care"
    code, out = run(["wordfreq", "--data", synthetic_corpus_path(), "--top", "2"])
    assert out.splitlines() == ["token,count", "develop,345", "child,294"]
    run(["wordfreq", "--data", table1_path, "--no-stem", "--out", str(tmp_path)])
    assert "baby,1" in (tmp_path / "wordfreq.csv").read_text()


def test_run_then_predict(tmp_path):
    out_dir = tmp_path / "out"
    code, out = run(["run", "--data", synthetic_corpus_path(), "--models", "LR,NB",
                     "--features", "BoW", "--splits", "0.8", "--out", str(out_dir)])
    assert code == 0 and out.splitlines()[0] == "model,80-20 BoW"
    code, out = run(["predict", "--model", str(out_dir / "models" / "LR_BoW_80-20.json")],
                    stdin="Lifting weights stunts growth.\n\nPlay is like children's work.\n")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 2
    label, p = lines[0].split()
    assert label == "Myth" and float(p) > 0.5
    code, out = run(["predict", "--model", str(out_dir / "models" / "NB_BoW_80-20.json")],
                    stdin="Play helps children learn.\n")
    assert out.strip() in ("Fact", "Myth")


def test_predict_missing_model(tmp_path):
    assert run(["predict", "--model", str(tmp_path / "none.json")])[0] == 2


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "exp.json"
    cfg.write_text(json.dumps({"data": synthetic_corpus_path(), "models": ["NB", "LR"],
                               "features": ["BoW"], "splits": [0.7], "seed": 3}))
    code, out = run(["run", "--config", str(cfg), "--models", "NB", "--out", str(tmp_path / "o")])
    assert code == 0
    bundle = json.loads((tmp_path / "o" / "bundle.json").read_text())
    assert bundle["config"]["models"] == ["NB"] and bundle["config"]["seed"] == 3


def test_crossval_and_bench(tmp_path):
    code, out = run(["crossval", "--data", synthetic_corpus_path(), "--models", "NB",
                     "--features", "BoW", "--cv", "k=5,10", "--out", str(tmp_path)])
    assert code == 0 and out.splitlines()[0] == "feature,model,5-fold,10-fold"
    assert (tmp_path / "table4.csv").exists()
    code, out = run(["bench", "--data", synthetic_corpus_path(), "--models", "LR",
                     "--features", "TF-IDF", "--bench-repeats", "3"])
    assert code == 0 and out.splitlines()[1].startswith("LR,TF-IDF,128,")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mythlab"], capture_output=True, text=True)
    assert proc.returncode == 1 and "usage" in proc.stderr
    proc = subprocess.run([sys.executable, "-m", "mythlab", "stats", "--data", synthetic_corpus_path()],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == '{"Fact":440,"Myth":200}'
