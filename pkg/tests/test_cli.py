import csv
import io
import json
import os
import subprocess
import sys

import pytest

from favard_lab.cli import main, parse_curve, parse_set, run
from favard_lab.estimators import favard_curve_length
from favard_lab.fractals import cantor_generation


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def call(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_cantor_first_generation(capsys):
    code, out, _ = call(capsys, "gen-cantor", "--n", "1")
    assert code == 0
    table = rows(out)
    assert list(table[0]) == ["n", "i", "j"]
    assert sorted((int(r["i"]), int(r["j"])) for r in table) == [(0, 0), (0, 3), (3, 0), (3, 3)]


def test_favc_single_row(capsys, caplog, arc):
    caplog.set_level("INFO", logger="favard_lab")
    code, out, _ = call(capsys, "favc", "--curve", "circle-arc:R=2,I=[-1,1]", "--set", "cantor:3")
    assert code == 0
    (row,) = rows(out)
    assert row["n"] == "3"
    assert float(row["value"]) == favard_curve_length(arc, cantor_generation(3)).value
    assert float(row["std_error"]) >= 0
    assert '"set": "cantor:3"' in caplog.text


def test_favard_range_and_format(capsys):
    code, out, _ = call(capsys, "favard", "--set", "cantor:0-2")
    assert code == 0
    table = rows(out)
    assert [r["n"] for r in table] == ["0", "1", "2"]
    assert float(table[0]["value"]) == pytest.approx(8.0, rel=1e-3)
    assert all(len(r["value"].replace(".", "").replace("-", "").lstrip("0")) <= 17 for r in table)


def test_decay_json_and_svg(capsys, tmp_path):
    table = tmp_path / "favc_table.csv"
    table.write_text("n,value,std_error\n" + "".join(f"{n},{3 * n ** -0.5},0\n" for n in range(1, 7)))
    svg = tmp_path / "out.svg"
    code, out, _ = call(capsys, "decay", "--in", str(table), "--plot", str(svg))
    assert code == 0
    rec = json.loads(out)
    assert rec["exponent"] == pytest.approx(0.5, abs=1e-12)
    assert rec["n"] == [2, 3, 4, 5, 6]
    text = svg.read_text()
    assert text.startswith("<svg") and "n^(-1/6)" in text and "n^(-1) log n" in text
    assert "stroke-dasharray" in text


def test_plot_command(capsys, tmp_path):
    a = tmp_path / "a.csv"
    a.write_text("n,value\n1,1\n2,0.5\n4,0.25\n")
    code, out, _ = call(capsys, "plot", "--in", str(a), "--no-references")
    assert code == 0 and "<polyline" in out and "stroke-dasharray=\"6,4\" points" not in out


def test_buffon_output(capsys):
    code, out, _ = call(capsys, "buffon", "--samples", "2e4", "--seed", "42", "--set", "cantor:0")
    assert code == 0
    (row,) = rows(out)
    assert float(row["value"]) == pytest.approx(3.5, abs=0.2)


def test_sector_check_reports(capsys):
    code, out, _ = call(capsys, "sector-check", "--e", "0.3,0.145", "--alpha", "0.3", "--r", "1e-6",
                        "--M", "2e5", "--samples", "2000")
    assert code == 0
    comp, strip = [json.loads(line) for line in out.splitlines()]
    assert comp["inner_violations"] == comp["outer_violations"] == strip["violations"] == 0


def test_sector_check_precondition_failure(capsys):
    code, out, _ = call(capsys, "sector-check", "--e", "0.3,0.145", "--alpha", "0.3", "--r", "1e-6",
                        "--M", "1e5", "--samples", "100")
    assert code == 2
    assert "error" in json.loads(out.splitlines()[0])
    code, out, _ = call(capsys, "sector-check", "--e", "0.3,0.145", "--alpha", "0.3", "--r", "1e-6",
                        "--M", "1e5", "--samples", "500", "--no-strict")
    assert code == 0


def test_pigeonhole_command(capsys, tmp_path):
    f = tmp_path / "m.csv"
    f.write_text("mass\n" + "".join(f"{k}\n" for k in range(11)))
    code, out, _ = call(capsys, "pigeonhole", "--masses", str(f), "--eps", "0.2")
    assert code == 0
    rec = json.loads(out)
    assert (rec["n"], rec["m"], rec["deficiency"]) == (0, 2, 2.0)


def test_content_command(capsys):
    code, out, _ = call(capsys, "content", "--set", "boundary:1-3")
    assert code == 0
    recs = [json.loads(line) for line in out.splitlines()]
    assert [r["n"] for r in recs] == [1, 2, 3]
    assert all(r["content_upper"] <= 16 for r in recs)


def test_rect_const_command(capsys, tmp_path):
    f = tmp_path / "cloud.csv"
    f.write_text("x,y,w\n0.1,0.2,1\n0.8,0.9,1\n")
    code, out, _ = call(capsys, "rect-const", "--cloud", str(f), "--eps", "1e-6", "--r", "1", "--M", "2",
                        "--angles", "4")
    assert code == 0 and json.loads(out)["lower_bound"] <= 0.01


def test_exit_codes(capsys):
    assert call(capsys, "favard", "--set", "cantor:1", "--bogus")[0] == 2
    assert call(capsys, "nonsense")[0] == 2
    assert call(capsys, "favard", "--set", "nothing:1")[0] == 2
    assert call(capsys, "favc", "--curve", "parabola:h=2,I=[-1,1]", "--set", "cantor:0")[0] == 2
    assert call(capsys, "favc", "--set", "cantor:3", "--max-refinements", "1")[0] == 3
    assert run(["gen-cantor", "--n", "0"]) == 0


def test_config_file_and_override(capsys, caplog, tmp_path):
    caplog.set_level("INFO", logger="favard_lab")
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# quadrature run\nset = cantor:1\nkind = parabola\nh = 0.5\nI = [-0.9,0.9]\n")
    code, out, _ = call(capsys, "favc", "--config", str(cfg))
    assert code == 0 and rows(out)[0]["n"] == "1"
    assert "parabola:h=0.5,I=[-0.9,0.9]" in caplog.text
    code, out, _ = call(capsys, "favc", "--config", str(cfg), "--set", "cantor:2")
    assert rows(out)[0]["n"] == "2"
    cfg.write_text("sett = cantor:1\n")
    assert call(capsys, "favc", "--config", str(cfg))[0] == 2


def test_spec_parsers():
    assert len(parse_curve("parabola:h=0.5,I=[-0.5,0];parabola:h=0.5,I=[0,0.5]")) == 2
    assert [n for n, _ in parse_set("cantor:2-4")] == [2, 3, 4]
    with pytest.raises(ValueError):
        parse_curve("circle-arc:R=2")


DETERMINISM = [
    ["buffon", "--samples", "30000", "--seed", "7", "--batch", "4000", "--set", "cantor:1"],
    ["favc", "--set", "cantor:2"],
    ["sector-check", "--e", "0.3,0.145", "--alpha", "0.3", "--r", "1e-6", "--M", "2e5", "--samples", "3000",
     "--seed", "5"],
    ["rect-const", "--set", "cantor:1", "--per-component", "8", "--seed", "3", "--eps", "0.01", "--r", "0.25",
     "--M", "2", "--angles", "4"],
]


@pytest.mark.parametrize("argv", DETERMINISM, ids=lambda a: a[0])
def test_outputs_identical_across_worker_counts(tmp_path, argv, monkeypatch):
    outputs = []
    for k, workers in enumerate([1, 2, 4]):
        path = tmp_path / f"out{k}"
        assert main(argv + ["--workers", str(workers), "--out", str(path)]) == 0
        outputs.append(path.read_bytes())
    monkeypatch.setenv("FAVARD_LAB_THREADS", "3")
    path = tmp_path / "env"
    assert main(argv + ["--out", str(path)]) == 0
    outputs.append(path.read_bytes())
    assert all(o == outputs[0] for o in outputs)


def test_module_entry_point_logs_config(tmp_path):
    out = tmp_path / "k1.csv"
    proc = subprocess.run([sys.executable, "-m", "favard_lab.cli", "gen-cantor", "--n", "1", "--out", str(out)],
                          capture_output=True, text=True, env={**os.environ})
    assert proc.returncode == 0, proc.stderr
    assert len(out.read_text().splitlines()) == 5
    assert '"n": 1' in proc.stderr
