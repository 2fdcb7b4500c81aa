import json

import pytest

from cli.config import parse_run_config
from main import main
from utils.errors import ConfigError, InvalidParameterError

MINIMAL = {
    "seed": 0,
    "space": {"d": 2, "p": 2},
    "dictionary": {"recipe": "canonical"},
    "algorithm": "woga",
    "target": {"kind": "vector", "values": [1.0, 1.0]},
}


def _write_config(tmp_path, **overrides):
    raw = {**MINIMAL, "output": {"dir": str(tmp_path / "out")}, **overrides}
    path = tmp_path / "run.json"
    path.write_text(json.dumps(raw), encoding="utf-8")
    return str(path)


def _report(tmp_path):
    return json.loads((tmp_path / "out" / "report.json").read_text(encoding="utf-8"))


def test_minimal_run(tmp_path):
    assert main(["run", _write_config(tmp_path)]) == 0
    lines = (tmp_path / "out" / "trace.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "iter,selected_index,residual_norm,coeff_l1"
    assert len(lines) == 3
    report = _report(tmp_path)
    assert report["pass"] is True
    assert report["summary"]["status"] == "converged"


def test_bad_weakness_exits_2(tmp_path, capsys):
    assert main(["run", _write_config(tmp_path, params={"t": 1.5})]) == 2
    assert "params.t" in capsys.readouterr().err


def test_unknown_key_exits_2(tmp_path, capsys):
    assert main(["run", _write_config(tmp_path, colour="blue")]) == 2
    assert "colour" in capsys.readouterr().err


def test_euclidean_only_algorithm_in_lp(tmp_path, capsys):
    assert main(["run", _write_config(tmp_path, space={"d": 2, "p": 3})]) == 2
    assert "algorithm" in capsys.readouterr().err


def test_missing_config_file(tmp_path):
    assert main(["run", str(tmp_path / "absent.json")]) == 2


def test_failed_check_exits_1(tmp_path):
    config = _write_config(
        tmp_path,
        space={"d": 4},
        dictionary={"recipe": "random_sphere", "N": 10},
        target={"kind": "a1_combination", "n_atoms": 3},
        m_max=1,
        check={"max_final": 1e-10},
    )
    assert main(["run", config]) == 1
    assert _report(tmp_path)["checks"]["max_final"]["pass"] is False


def test_guarantee_is_reported(tmp_path):
    config = _write_config(tmp_path, algorithm="wgafr", beta=2 ** -0.5, m_max=20)
    assert main(["run", config]) == 0
    assert _report(tmp_path)["summary"]["factor"] == pytest.approx(0.875)


def test_lasso_run_reports_coefficients(tmp_path):
    config = _write_config(
        tmp_path,
        seed=3,
        space={"d": 8},
        algorithm="wcga_co",
        dictionary={"recipe": "lasso", "n": 20, "sparsity": 2},
        target={"kind": "lasso"},
        m_max=50,
    )
    assert main(["run", config]) == 0
    report = _report(tmp_path)
    assert len(report["lasso"]["x_hat"]) == 20
    assert report["summary"]["final_gap"] <= 1e-20
    header = (tmp_path / "out" / "trace.csv").read_text(encoding="utf-8").splitlines()[0]
    assert header == "iter,selected_index,energy,energy_gap"


def test_run_is_deterministic(tmp_path):
    overrides = dict(
        space={"d": 6}, algorithm="wcga",
        dictionary={"recipe": "random_sphere", "N": 15}, target={"kind": "sparse", "sparsity": 2},
    )
    first = tmp_path / "first"
    second = tmp_path / "second"
    first.mkdir()
    second.mkdir()
    assert main(["run", _write_config(first, **overrides)]) == 0
    assert main(["run", _write_config(second, **overrides)]) == 0
    assert (first / "out" / "trace.csv").read_bytes() == (second / "out" / "trace.csv").read_bytes()


def test_parse_run_config_errors():
    with pytest.raises(ConfigError, match="target.values"):
        parse_run_config({**MINIMAL, "target": {"kind": "vector", "values": [1.0]}})
    with pytest.raises(ConfigError, match="target.kind"):
        parse_run_config({**MINIMAL, "target": {"kind": "lasso"}})
    with pytest.raises(ConfigError, match="check.window"):
        parse_run_config({**MINIMAL, "check": {"window": [0, 10]}})
    with pytest.raises(InvalidParameterError, match="space.p"):
        parse_run_config({**MINIMAL, "space": {"d": 2, "p": 1.0}})


def test_parse_run_config_defaults():
    cfg = parse_run_config(MINIMAL)
    assert cfg.params.max_iter == 100
    assert cfg.check.window == (16, 256)
    assert not cfg.check.active
    assert not cfg.is_descent


def test_dict_build_and_inspect(tmp_path, capsys):
    path = str(tmp_path / "canonical.csv")
    assert main(["dict", "build", "canonical", "--d", "3", "--out", path]) == 0
    assert capsys.readouterr().out.strip() == path
    assert main(["dict", "inspect", path]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["d"] == 3
    assert summary["N"] == 3
    assert summary["coherence"] == 0.0
    assert summary["beta"]["lower"] <= 3 ** -0.5 <= summary["beta"]["upper"]


def test_dict_build_needs_size(tmp_path):
    assert main(["dict", "build", "random_sphere", "--d", "3", "--out", str(tmp_path / "d.csv")]) == 2


def test_dict_inspect_rejects_oversized_column(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("# d=2 N=2 p=2\n1,0\n1.2,0\n", encoding="utf-8")
    assert main(["dict", "inspect", str(path)]) == 1
    assert "column 2" in capsys.readouterr().err


def test_verify_unknown_suite(tmp_path):
    assert main(["verify", "no_such_suite", "--out", str(tmp_path)]) == 2


def test_verify_writes_report(tmp_path, capsys):
    assert main(["verify", "sec_3_1_equiv", "--seeds", "2", "--workers", "1", "--out", str(tmp_path)]) == 0
    assert "PASS" in capsys.readouterr().out
    report = json.loads((tmp_path / "sec_3_1_equiv" / "report.json").read_text(encoding="utf-8"))
    assert report["pass"] is True
    assert report["metrics"]["completed"] == 2


def _outputs(out_dir):
    traces = {path.name: path.read_bytes() for path in sorted(out_dir.glob("trace_seed*.csv"))}
    report = json.loads((out_dir / "report.json").read_text(encoding="utf-8"))
    report.pop("created_at")
    return traces, report


def test_repeats_do_not_depend_on_workers(tmp_path):
    overrides = dict(
        seed=2, space={"d": 6}, algorithm="wcga", repeats=4,
        dictionary={"recipe": "random_sphere", "N": 15}, target={"kind": "sparse", "sparsity": 2},
    )
    assert main(["run", _write_config(tmp_path, workers=1, **overrides)]) == 0
    serial = _outputs(tmp_path / "out")
    assert main(["run", _write_config(tmp_path, workers=4, **overrides)]) == 0
    parallel = _outputs(tmp_path / "out")

    assert serial == parallel
    traces, report = serial
    assert list(traces) == [f"trace_seed{s}.csv" for s in (2, 3, 4, 5)]
    assert [run["seed"] for run in report["runs"]] == [2, 3, 4, 5]
    assert report["passed_runs"] == 4
    assert report["pass"] is True


def test_first_repeat_matches_single_run(tmp_path):
    overrides = dict(
        space={"d": 6}, algorithm="wgafr",
        dictionary={"recipe": "random_sphere", "N": 15}, target={"kind": "a1_combination", "n_atoms": 4},
    )
    single = tmp_path / "single"
    repeated = tmp_path / "repeated"
    single.mkdir()
    repeated.mkdir()
    assert main(["run", _write_config(single, **overrides)]) == 0
    assert main(["run", _write_config(repeated, repeats=3, workers=3, **overrides)]) == 0
    assert (single / "out" / "trace.csv").read_bytes() == (repeated / "out" / "trace_seed0.csv").read_bytes()


def test_repeats_must_be_positive():
    with pytest.raises(ConfigError, match="repeats"):
        parse_run_config({**MINIMAL, "repeats": 0})
    assert parse_run_config({**MINIMAL, "repeats": 3}).seeds == [0, 1, 2]
