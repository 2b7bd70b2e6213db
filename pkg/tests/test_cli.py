import json
import subprocess
import sys

import pytest

from u7slopes.cli import EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_predict_tsv(capsys):
    code, out = run(capsys, "predict", "--type", "1", "--count", "3")
    assert code == EXIT_OK
    lines = [l for l in out.out.splitlines() if not l.startswith("#")]
    assert lines == ["type\ti\tslope\tval_c_i", "1\t1\t1/6\t1", "1\t2\t1/3\t3", "1\t3\t1/2\t6"]


def test_predict_json_is_deterministic(capsys):
    _, a = run(capsys, "predict", "--format", "json", "--count", "4")
    _, b = run(capsys, "predict", "--format", "json", "--count", "4")
    assert a.out == b.out
    doc = json.loads(a.out)
    assert doc["provenance"]["tool"] == "u7slopes"
    assert len(doc["rows"]) == 8


def test_dims_spot_values(capsys):
    code, out = run(capsys, "dims", "--k", "3", "--exp", "1", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out.out)["rows"] == [[3, 1, 8]]
    code, _ = run(capsys, "dims", "--k", "2..8")
    assert code == EXIT_OK


@pytest.mark.parametrize("argv", [
    ["slopes", "--dim", "0"],
    ["slopes", "--dim", "5", "--qprec", "20"],
    ["dims", "--k", "9..3"],
    ["predict", "--count", "0"],
    ["matrix", "--type", "both", "--dim", "2"],
])
def test_usage_errors(capsys, argv):
    code, out = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert "error" in out.err


def test_argparse_errors_exit_64(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["slopes", "--type", "3"])
    assert exc.value.code == EXIT_USAGE


def test_out_dir_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("U7SLOPES_OUT_DIR", str(tmp_path))
    code, out = run(capsys, "predict", "--count", "2")
    assert code == EXIT_OK and out.out == ""
    assert (tmp_path / "predict-2.tsv").read_text().startswith("# predicted slopes")


def test_out_file(tmp_path, capsys):
    target = tmp_path / "sub" / "m.json"
    code, _ = run(capsys, "matrix", "--type", "2", "--dim", "3", "--format", "json", "--out", str(target))
    assert code == EXIT_OK
    assert json.loads(target.read_text())["n"] == 3


def test_verify_dims_and_weight2(capsys):
    assert run(capsys, "verify", "dims", "--k", "2..10")[0] == EXIT_OK
    assert run(capsys, "verify", "weight2")[0] == EXIT_OK


def test_small_slopes_run(capsys):
    code, out = run(capsys, "slopes", "--type", "1", "--dim", "7", "--check-dim", "9", "--format", "json")
    doc = json.loads(out.out)
    assert doc["provenance"]["stable_upto_type1"] >= 3
    assert code in (EXIT_OK, EXIT_MISMATCH)
    assert all(r[-1] for r in doc["rows"])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "u7slopes", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "u7slopes" in proc.stdout
