import csv
import io
import json

import pytest

from gwfun.cli import ExperimentConfig, main, parse_alpha, parse_range


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_mu_closed_form(capsys):
    code, out, _ = run(["mu", "--dist", "po1", "--alpha", "-1"], capsys)
    assert code == 0
    (r,) = rows(out)
    assert float(r["value_re"]) == 0.5 and float(r["value_im"]) == 0


def test_full_precision_csv(capsys):
    code, out, _ = run(["limit-moments", "--alpha", "1", "--ell", "1"], capsys)
    assert code == 0
    v = rows(out)[0]["re"]
    assert float(v) == 1.2533141373154983
    assert len(v.replace(".", "")) >= 16


def test_json_output(capsys):
    code, out, _ = run(["mu", "--alpha", "-1,-2", "--out", "json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["command"] == "mu"
    assert [r["alpha_re"] for r in doc["records"]] == [-1, -2]


def test_output_file(tmp_path, capsys):
    dest = tmp_path / "mu.csv"
    assert main(["mu", "--alpha", "-1", "--out", str(dest)]) == 0
    assert rows(dest.read_text())[0]["value_re"] == "0.5"


def test_seed_required(capsys):
    code, _, err = run(["simulate", "--alpha", "1", "--n", "50", "--reps", "10"], capsys)
    assert code == 2
    assert "seed" in err


def test_usage_errors(capsys):
    assert run([], capsys)[0] == 2
    assert run(["mu", "--alpha", "abc"], capsys)[0] == 2
    assert run(["mu", "--bogus"], capsys)[0] == 2
    assert run(["mu", "--dist", "0:0.5,1:0.2", "--alpha", "-1"], capsys)[0] == 2


def test_numeric_failure_exit(capsys):
    code, _, err = run(["limit-moments", "--alpha", "0.5", "--ell", "1"], capsys)
    assert code == 3
    assert "PoleAtHalf" in err


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"dist": {"0": 0.5, "2": 0.5}, "alpha": "-1", "format": "json"}))
    code, out, _ = run(["mu", "--config", str(cfg)], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["dist"] == "0:0.5,2:0.5"
    code, out, _ = run(["mu", "--config", str(cfg), "--alpha", "-2", "--format", "csv"], capsys)
    assert rows(out)[0]["alpha_re"] == "-2"


def test_experiment_config_round_trip():
    c = ExperimentConfig("simulate", "ge12", [1 + 2j, -0.5], [100], 50, 7, {"stat": "moments"})
    text = c.to_json()
    assert ExperimentConfig.from_json(text) == c
    assert ExperimentConfig.from_json(text).to_json() == text


def test_parsers():
    assert parse_alpha("-1") == -1
    assert parse_alpha("0.5+2i") == 0.5 + 2j
    assert parse_alpha("1-3j") == 1 - 3j
    assert parse_range("1..4") == [1, 2, 3, 4]
    assert parse_range("10..50:20") == [10, 30, 50]
    assert parse_range("3,7") == [3, 7]
    with pytest.raises(ValueError):
        parse_alpha("x")


@pytest.mark.parametrize("argv", [
    ["simulate", "--dist", "ge12", "--alpha", "0.5,1", "--n", "200", "--reps", "8", "--seed", "5"],
    ["simulate", "--stat", "fringe", "--alpha", "-1", "--n", "200", "--reps", "8", "--seed", "5"],
    ["excursion", "--alpha", "1.5", "--grid", "128", "--reps", "6", "--seed", "5"],
])
def test_byte_identical_across_workers(argv, capsys):
    outs = []
    for w in ("1", "2"):
        code, out, _ = run(argv + ["--workers", w], capsys)
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
    code, out, _ = run(argv[:-2] + [argv[-2], "6", "--workers", "1"], capsys)
    assert out != outs[0]


def test_moments_exact_and_mean(capsys):
    code, out, _ = run(["mean", "--dist", "ge12", "--alpha", "0", "--n", "1..5"], capsys)
    assert code == 0
    assert [float(r["mean_re"]) for r in rows(out)] == pytest.approx([1, 2, 3, 4, 5], rel=1e-14)
    code, out, _ = run(["moments-exact", "--dist", "po1", "--alpha", "1", "--ell", "1", "--n", "3"], capsys)
    assert code == 0
    assert rows(out)


def test_verify_suite_exit_codes(capsys, tmp_path):
    rep = tmp_path / "r.json"
    code, out, _ = run(["verify", "--suite", "genfunc", "--quick", "--report", str(rep)], capsys)
    assert code == 0
    doc = json.loads(rep.read_text())
    assert doc["passed"] and all(c["passed"] for c in doc["checks"])
