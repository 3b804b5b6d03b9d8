import json
from pathlib import Path

import pytest

from webcurv import cli, parse_expression
from webcurv.connection import ConcentrationReport

WEBS = Path(__file__).resolve().parent.parent / "webs"


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def strip_timing(doc):
    return {k: v for k, v in doc.items() if k != "timing_ms"}


def all_strings(doc):
    for key in ("seed_matrix", "curvature"):
        for row in doc[key] or []:
            yield from row
    if "blaschke" in doc:
        yield doc["blaschke"]
    for ev in doc["evaluations"]:
        yield from ev["point"]
        for row in ev["matrix"]:
            yield from row


def test_constant_web_blaschke(capsys):
    code, out, _ = run(capsys, "compute", WEBS / "constant3.json", "--d3-blaschke")
    doc = json.loads(out)
    assert code == 0
    assert doc["blaschke"] == "0" and doc["curvature"] == [["0"]]
    assert doc["d"] == 3 and doc["m"] == 1


def test_round_trip_and_fields(capsys):
    code, out, _ = run(capsys, "compute", WEBS / "cubic_xy.json", "--d3-blaschke", "--at", "x=1,y=2", "--at", "x=-1/2,y=3")
    doc = json.loads(out)
    assert code == 0
    assert set(doc) >= {"d", "m", "i0", "seed_matrix", "curvature", "concentration", "evaluations", "timing_ms"}
    assert all(isinstance(v, int) for v in doc["timing_ms"].values())
    assert doc["evaluations"][0]["matrix"] == [["63/338"]]
    for s in all_strings(doc):
        assert str(parse_expression(s)) == s
    assert parse_expression(doc["blaschke"]) == parse_expression(doc["curvature"][0][0])


def test_jet_and_symbolic_evaluations_agree(capsys):
    args = ["compute", WEBS / "quartic.json", "--at", "x=1,y=2", "--at", "x=1/3,y=1"]
    _, sym_out, _ = run(capsys, *args)
    _, jet_out, _ = run(capsys, *args, "--jet", "--points-only", "--jobs", "2")
    sym_doc, jet_doc = json.loads(sym_out), json.loads(jet_out)
    assert [e["matrix"] for e in sym_doc["evaluations"]] == [e["matrix"] for e in jet_doc["evaluations"]]
    assert jet_doc["curvature"] is None


def test_determinism_and_output_file(capsys, tmp_path):
    args = ["compute", WEBS / "quartic.json", "--jet", "--at", "x=1,y=2", "--at", "x=2,y=-1"]
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args, "--jobs", "3")
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, *args, "--output", target)
    assert code == 0 and out == ""
    docs = [json.loads(first), json.loads(second), json.loads(target.read_text())]
    assert strip_timing(docs[0]) == strip_timing(docs[1]) == strip_timing(docs[2])


def test_malformed_input_exits_2(capsys):
    code, _, err = run(capsys, "compute", WEBS / "malformed.json")
    assert code == 2 and "error" in err


def test_missing_file_exits_2(capsys, tmp_path):
    code, _, _ = run(capsys, "compute", tmp_path / "nope.json")
    assert code == 2


def test_degenerate_web_exits_2(capsys, tmp_path):
    path = tmp_path / "double.json"
    path.write_text(json.dumps({"d": 3, "slopes": ["x", "x", "1"]}))
    assert run(capsys, "compute", path)[0] == 2


def test_blaschke_on_wrong_degree_exits_2(capsys):
    assert run(capsys, "compute", WEBS / "quartic.json", "--d3-blaschke")[0] == 2


def test_pole_exits_3(capsys, tmp_path):
    path = tmp_path / "pole.json"
    path.write_text(json.dumps({"d": 3, "coefficients": ["y", "x", "0"]}))
    assert run(capsys, "compute", path, "--at", "x=0,y=1")[0] == 3
    assert run(capsys, "compute", path, "--at", "x=0,y=1", "--jet")[0] == 3


def test_concentration_violation_exits_4(capsys, monkeypatch):
    monkeypatch.setattr(cli, "check_concentration", lambda KK: ConcentrationReport(False, [(1, 1)]))
    code, out, err = run(capsys, "compute", WEBS / "constant3.json", "--check-concentration")
    assert code == 4 and json.loads(out)["concentration"]["violations"] == [[1, 1]]
    assert run(capsys, "compute", WEBS / "constant3.json")[0] == 0


@pytest.mark.parametrize("bad", ["x=1", "x=1,y=2,x=3", "y=1,z=2", "x=a,y=1"])
def test_bad_point_argument(capsys, bad):
    with pytest.raises(SystemExit) as info:
        cli.main(["compute", str(WEBS / "constant3.json"), "--at", bad])
    assert info.value.code == 2


@pytest.mark.slow
def test_bol_file_is_flat(capsys):
    code, out, _ = run(capsys, "compute", WEBS / "bol.json", "--check-concentration")
    doc = json.loads(out)
    assert code == 0
    assert {v for row in doc["curvature"] for v in row} == {"0"}
    assert doc["evaluations"][0]["point"] == ["1/5", "2/7"]
