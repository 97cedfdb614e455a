import json

from circlefit.cli import main


def _write(tmp_path, text, name="p.csv"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_fit_circumcircle(tmp_path, capsys):
    src = _write(tmp_path, "x,y\n0,0\n2,0\n1,2\n")
    trace = tmp_path / "t.csv"
    assert main(["fit", "--input", src, "--trace", str(trace)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["result"]["type"] == "circle"
    assert abs(out["result"]["b"] - 0.75) < 1e-13
    lines = trace.read_text().splitlines()
    assert lines[0].startswith("iter,a,b,F")
    assert "np.float64" not in trace.read_text()


def test_fit_baselines(tmp_path, capsys):
    src = _write(tmp_path, "0,1\n1,0\n0,-1\n-1,0.01\n")
    for method in ("gn", "gnm", "lm"):
        assert main(["fit", "--input", src, "--method", method, "--init", "centroid"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["method"] == method and out["result"]["type"] == "circle"


def test_fit_line(tmp_path, capsys):
    src = _write(tmp_path, "0,0\n1,1\n2,2\n")
    assert main(["fit", "--input", src]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["termination"] == "LineFallback"
    assert out["result"]["point"] == [1.0, 1.0]


def test_errors_exit_nonzero(tmp_path, capsys):
    assert main(["fit", "--input", str(tmp_path / "missing.csv")]) == 2
    assert main(["fit", "--input", _write(tmp_path, "0,0\n1,1\n")]) == 2
    assert main(["fit", "--input", _write(tmp_path, "0,0\n1,x\n2,3\n")]) == 2
    assert main(["bench", "--runs", "0"]) == 2
    assert "error" in capsys.readouterr().err


def test_bench_outputs(tmp_path, capsys):
    out = tmp_path / "r.json"
    hist = tmp_path / "h.csv"
    rc = main(["bench", "--runs", "20", "--methods", "new,lm", "--score",
               "--out", str(out), "--hist", str(hist)])
    assert rc == 0
    report = json.loads(out.read_text())
    assert report["algorithms"]["new"]["runs"] == 20
    assert hist.read_text().splitlines()[0] == "k,new,lm"


def test_sweep_stdout(capsys):
    assert main(["sweep", "--steps", "4", "--d-max", "1e4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("D,F_oracle")
    assert len(lines) == 5
