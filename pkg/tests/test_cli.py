import csv
import io
import json

import numpy as np
import pytest

from cantorfol.cli import main
from cantorfol.foliation import g_t


def run(args):
    out = io.StringIO()
    code = main(args, out=out)
    return code, out.getvalue()


@pytest.mark.parametrize("args, expected", [
    (["eval", "--r", "1", "--fn", "g", "--x", "1"], 1 / 750),
    (["eval", "--fn", "psi", "--y", "0"], 0.0),
    (["eval", "--r", "1", "--fn", "gt", "--t", "1", "--x", "2"], 1 / 750),
    (["eval", "--fn", "h", "--x", "0.5"], 1 / 144),
    (["eval", "--fn", "ft", "--t", "1", "--y", "0.0013333333333333333"], 2.0),
])
def test_eval(args, expected):
    code, text = run(args)
    assert code == 0
    assert float(text) == pytest.approx(expected, rel=1e-15, abs=1e-300)
    assert len(text.strip().replace("-", "").replace(".", "").split("e")[0].lstrip("0")) <= 17


def test_eval_classify_and_field():
    assert run(["eval", "--fn", "classify", "--x", "0.5"])[1].startswith("InGap(gap=GapId(stage=1")
    code, text = run(["eval", "--fn", "X", "--y", "0"])
    assert code == 0 and text.strip() == "1,0"


def test_eval_errors():
    assert run(["eval", "--fn", "g"])[0] == 2
    assert run(["eval", "--fn", "gt", "--x", "1", "--t", "2"])[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["eval", "--fn", "nope"])
    assert info.value.code == 2


def test_leaves_rows(tmp_path):
    path = tmp_path / "leaves.csv"
    code, _ = run(["leaves", "--t", "0", "--c", "0", "--xmin", "0", "--xmax", "1",
                   "--samples", "3", "--out", str(path)])
    assert code == 0
    raw = path.read_bytes()
    assert b"\r" not in raw
    rows = list(csv.reader(io.StringIO(raw.decode())))
    assert rows[0] == ["t", "c", "x", "y"]
    vals = np.array(rows[1:], dtype=float)
    np.testing.assert_allclose(vals, [[0, 0, 0, 0], [0, 0, 0.5, 1 / 1500], [0, 0, 1, 1 / 750]],
                               rtol=1e-15)


def test_leaves_empty_and_order(tmp_path):
    code, text = run(["leaves", "--t", ""])
    assert code == 0 and text == "t,c,x,y\n"
    code, text = run(["leaves", "--t", "1,0", "--c", "0.5,0", "--samples", "2"])
    keys = [tuple(map(float, line.split(",")[:3])) for line in text.splitlines()[1:]]
    assert keys == sorted(keys)


def test_leaves_round_trip_and_svg(tmp_path):
    csv_path, svg_path = tmp_path / "a.csv", tmp_path / "a.svg"
    args = ["leaves", "--t", "0,0.5,1", "--c=-0.5,0", "--samples", "50",
            "--out", str(csv_path), "--svg", str(svg_path)]
    assert run(args)[0] == 0
    data = np.loadtxt(csv_path, delimiter=",", skiprows=1)
    for t, c, x, y in data:
        assert g_t(x - c, t) == y
    svg = svg_path.read_text()
    assert svg.startswith("<svg") and svg.count("<polyline") == 6
    first = csv_path.read_bytes()
    assert run(args)[0] == 0
    assert csv_path.read_bytes() == first


def test_leaves_unwritable():
    assert run(["leaves", "--out", "/nonexistent-dir/x.csv"])[0] == 2


def test_verify_distinctness(tmp_path):
    out = tmp_path / "r.json"
    code, text = run(["verify", "--suite", "distinctness", "--t", "0,1", "--out", str(out)])
    assert code == 0
    assert "witness: 1" in text
    doc = json.loads(out.read_text())
    assert doc["suites"][0]["measured"]["witness"] == pytest.approx(1.0)
    assert doc["config"]["r"] == 1 and doc["seed"] == 0


def test_verify_bad_order():
    assert run(["verify", "--r", "9"])[0] == 2


def test_ode_outputs():
    code, text = run(["ode", "--r", "1", "--x-end", "2", "--method", "euler"])
    assert code == 0
    assert "band: [0.0013333333333333333, 1.0013333333333334]" in text
    code, text = run(["ode", "--x-end", "0"])
    assert "band: [0, 0]" in text
    code, text = run(["ode", "--demo", "sqrt", "--x-end", "1"])
    assert "x^2/4 -> 0.25" in text
    assert run(["ode", "--step", "-1"])[0] == 2
