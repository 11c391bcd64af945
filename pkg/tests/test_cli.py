from __future__ import annotations

import io
import json
import pathlib

import pytest

from billiard_bounds.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, digest, from_csv, main, to_csv

DATA = pathlib.Path(__file__).parent / "data"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    text = out.getvalue()
    return code, (json.loads(text) if text and "--csv" not in argv else text)


def test_bounds_command():
    code, doc = run("bounds", "--B", "2", "--m", "3")
    assert code == EXIT_OK
    assert doc["result"]["bt2"] == 4 and doc["result"]["bt3"] == 6
    m = doc["manifest"]
    assert m["subcommand"] == "bounds" and m["parameters"]["B"] == 2
    assert m["result_digest"] == digest(doc["result"])
    code, doc = run("bounds", "--betti", "1,2,1")
    assert code == EXIT_OK and doc["result"]["bt3"] == 20


@pytest.mark.parametrize(
    "argv",
    [
        ("bounds", "--betti", "1,3"),
        ("bounds", "--betti", "1,x"),
        ("bounds", "--B", "3"),
        ("bounds", "--B", "3", "--m", "1"),
        ("nope",),
        ("rd2-sphere", "--m", "0"),
        ("rd3-assembly", "--m", "1", "--k", "3"),
        ("power",),
        ("power", "--model", "triangle", "--p", "5"),
        ("billiards", "--shape", "cube:1"),
        ("billiards", "--period", "4"),
        ("dold", "--file", "/nonexistent.json"),
    ],
)
def test_bad_usage_exits_2(argv, capsys):
    code, _ = run(*argv)
    assert code == EXIT_USAGE
    assert capsys.readouterr().err


def test_rd2_sphere_and_csv_roundtrip():
    code, doc = run("rd2-sphere", "--m", "2")
    assert code == EXIT_OK and doc["result"]["total"] == 3 and doc["result"]["smith_feasible"]
    code, text = run("--csv", "rd2-sphere", "--m", "2")
    assert code == EXIT_OK
    again = from_csv(text)
    assert again["result"] == doc["result"]
    assert again["manifest"]["result_digest"] == doc["manifest"]["result_digest"]
    assert from_csv(to_csv(doc)) == doc


def test_digest_is_deterministic():
    _, a = run("rd3-assembly", "--betti", "1,2,1")
    _, b = run("rd3-assembly", "--betti", "1,2,1")
    assert a["manifest"]["result_digest"] == b["manifest"]["result_digest"]
    assert a["result"]["rd3"]["total"] == 20
    assert digest({"x": 1, "y": 2}) == digest({"y": 2, "x": 1})


def test_rd3_assembly_outside_duality():
    code, doc = run("rd3-assembly", "--m", "1", "--k", "2", "--no-duality")
    assert code == EXIT_OK and doc["result"]["rd3"]["total"] == 7


def test_dold_routes():
    code, doc = run("dold", "--m", "1")
    assert code == EXIT_OK and doc["result"]["total"] == 2
    code, doc = run("dold", "--m", "1", "--route", "rd2")
    assert code == EXIT_OK and doc["result"]["total"] == 2


def test_dold_file(tmp_path):
    from billiard_bounds.dold import random_module

    path = tmp_path / "module.json"
    path.write_text(json.dumps(random_module(2).to_json()))
    code, doc = run("dold", "--file", str(path))
    assert code == EXIT_OK
    assert doc["result"]["moore"] == doc["result"]["alternating"]


def test_power_from_file_and_model():
    code, doc = run("power", "--complex", str(DATA / "square_boundary.facets"), "--p", "2")
    assert code == EXIT_OK and sum(doc["result"]["betti"]) == 2
    code, doc = run("power", "--model", "triangle", "--p", "3")
    assert code == EXIT_OK and sum(doc["result"]["betti"]) == 2


def test_power_cell_cap(monkeypatch):
    monkeypatch.setenv("BILLIARD_BOUNDS_CELL_CAP", "10")
    code, doc = run("power", "--model", "triangle", "--p", "2")
    assert code == EXIT_FAILED and doc["result"]["cap"] == 10


def test_billiards_json_and_plot(tmp_path):
    jpath = tmp_path / "orbits.json"
    code, doc = run("billiards", "--shape", "ellipse:2,1", "--period", "2", "--json", str(jpath), "--plot", str(tmp_path / "fig"))
    assert code == EXIT_OK
    r = doc["result"]
    assert r["count"] == 2 and r["comparison"]["status"] == "pass"
    assert json.loads(jpath.read_text())["count"] == 2
    (fig,) = r["figures"]
    assert pathlib.Path(fig).stat().st_size > 1000


def test_billiards_circle_not_applicable():
    code, doc = run("billiards", "--shape", "circle", "--starts", "100")
    assert code == EXIT_OK and doc["result"]["comparison"]["status"] == "not applicable"


def test_reproduce_subset_with_plots(tmp_path):
    code, doc = run("reproduce-paper", "--only", "1,2", "--plot", str(tmp_path))
    assert code == EXIT_OK
    assert doc["result"]["passed"] == doc["result"]["total"] == 2
    names = sorted(pathlib.Path(f).name for f in doc["result"]["figures"])
    assert names == ["bounds.png", "routes.png"]
