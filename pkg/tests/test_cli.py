import csv
import io
import json
import os

import pytest

from charlift.cli import main, resolve_threads


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_u11(capsys):
    code, out, _ = run(capsys, "eval", "--group", "upq", "--p", "1", "--q", "1", "--m", "0", "--t", "1",
                       "--coords", "X1=0,X2=1")
    assert code == 0
    rec = json.loads(out)
    assert set(rec) == {"group", "m", "t", "coords", "value_re", "value_im", "normalization_tag", "chamber_id"}
    assert abs(rec["value_re"] - 0.42546) < 1e-5 and rec["value_im"] == 0
    assert rec["normalization_tag"] == "up_to_global_constant"


def test_eval_singular(capsys):
    code, _, err = run(capsys, "eval", "--p", "1", "--q", "1", "--m", "0", "--t", "1", "--coords", "X1=0,X2=0")
    assert code == 2 and "non-regular" in err
    code, _, err = run(capsys, "eval", "--p", "1", "--q", "2", "--m", "0", "--t", "0", "--coords", "X1=1,X2=1,X3=2")
    assert code == 2 and "h_1 and h_2" in err


def test_eval_lift_csv(capsys):
    code, out, _ = run(capsys, "eval", "--group", "lift", "--n", "1", "--m", "1", "--t", "0",
                       "--coords", "X1=0.5,X2=1.7,X3=2.9", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["normalization_tag"] == "up_to_global_constant"
    assert {"re", "im"} <= set(rows[0])


def test_eval_input_errors(capsys):
    assert run(capsys, "eval", "--p", "1", "--q", "1", "--m", "0", "--t", "1", "--coords", "X1=0")[0] == 2
    assert run(capsys, "eval", "--p", "1", "--q", "1", "--t", "1", "--coords", "X1=0,X2=1")[0] == 2
    assert run(capsys, "eval", "--p", "1", "--q", "1", "--m", "0", "--t", "1", "--coords", "X1=a,X2=1")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--group", "other", "--coords", "X1=0"])
    assert exc.value.code == 2


def test_table_size_and_singular_rows(tmp_path):
    path = tmp_path / "t.csv"
    code = main(["table", "--p", "1", "--q", "1", "--m", "0", "--t", "1", "--sweep", "X1=0:3:100",
                 "--sweep", "X2=-1:1:100", "--format", "csv", "--out", str(path), "--threads", "2"])
    assert code == 0
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 10_000
    assert all(r["status"] == "ok" for r in rows)

    path2 = tmp_path / "s.json"
    main(["table", "--p", "1", "--q", "1", "--m", "0", "--t", "1", "--coords", "X1=0.2",
          "--sweep", "X2=-1:1:5", "--out", str(path2)])
    recs = [json.loads(line) for line in path2.read_text().splitlines()]
    assert [r["status"] for r in recs] == ["ok", "ok", "singular", "ok", "ok"]
    assert recs[2]["value_re"] is None


def test_table_repeatable(tmp_path):
    args = ["table", "--group", "lift", "--n", "1", "--m", "-1", "--t", "1", "--coords", "X1=0.3,X2=2.0",
            "--sweep", "X3=-1:1:21", "--format", "csv"]
    main(args + ["--out", str(tmp_path / "a")])
    main(args + ["--out", str(tmp_path / "b")])
    assert (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes()


def test_unwritable_output(capsys):
    code, _, err = run(capsys, "table", "--p", "1", "--q", "1", "--m", "0", "--t", "1", "--coords", "X1=0",
                       "--sweep", "X2=0.5:1:2", "--out", "/nonexistent/dir/x.csv")
    assert code == 2 and "cannot write" in err


def test_sweep_validation(capsys):
    assert run(capsys, "table", "--p", "1", "--q", "1", "--m", "0", "--t", "1", "--coords", "X1=0",
               "--sweep", "X2=0:1:0")[0] == 2
    assert run(capsys, "table", "--p", "1", "--q", "1", "--m", "0", "--t", "1", "--coords", "X1=0",
               "--sweep", "X2=0:1")[0] == 2


def test_verify_contour(capsys):
    code, out, _ = run(capsys, "verify", "contour")
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and len(recs) == 9 and all(r["status"] == "pass" for r in recs)


def test_verify_upq_u11(capsys):
    code, out, _ = run(capsys, "verify", "upq", "--p", "1", "--q", "1")
    assert code == 0
    assert all(json.loads(line)["status"] == "pass" for line in out.splitlines())


def test_verify_failure_exit_code(capsys):
    code, _, _ = run(capsys, "verify", "contour", "--tol", "0")
    assert code == 3


def test_verify_budget_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "upq", "--budget", "0")
    assert code == 4
    assert all(json.loads(line)["status"] == "timeout" for line in out.splitlines())


def test_chambers_command(capsys):
    code, out, _ = run(capsys, "chambers", "--n", "1", "--t", "1", "--samples", "100")
    assert code == 0
    recs = [json.loads(line) for line in out.splitlines()]
    assert len(recs) == 2 and all(r["passed"] for r in recs)


def test_thread_resolution(monkeypatch):
    monkeypatch.setenv("CHARLIFT_THREADS", "3")
    assert resolve_threads(None) == 3
    assert resolve_threads(5) == 5
    monkeypatch.delenv("CHARLIFT_THREADS")
    assert resolve_threads(None) == (os.cpu_count() or 1)
