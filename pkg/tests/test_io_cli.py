import json
import subprocess
import sys

import pytest

from homdist.cli import bundled_fixtures, main
from homdist.distance import distance, gcat, verify_certificate, verify_gcat_certificate
from homdist.io import (
    InputError,
    Workspace,
    certificate_from_json,
    certificate_to_json,
    poset_to_json,
)
from homdist.simplicial import categorical_power, dtc, verify_sd_certificate


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def report(argv, capsys):
    code, out, _ = run(argv, capsys)
    return code, json.loads(out)


def test_bundled_fixtures_present():
    assert {p.name for p in bundled_fixtures()} == {"triangle_counterexample.json", "boundary_triangle.json"}


def test_poset_round_trip(S, torus):
    ws = Workspace()
    ws.add({"posets": {"S": poset_to_json(S), "T": poset_to_json(torus)}})
    assert ws.poset("S") == S
    assert ws.poset("T").down == torus.down


def test_workspace_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"posets": {\n  "S": [1,}\n}')
    with pytest.raises(InputError, match=r"bad\.json:2:"):
        Workspace.load([bad])
    ws = Workspace()
    with pytest.raises(InputError, match=r"posets\.C: CycleError"):
        ws.add({"posets": {"C": {"elements": ["p", "q"], "relations": [["p", "q"], ["q", "p"]]}}})
    ws.add({"posets": {"P": {"elements": ["p"]}}})
    with pytest.raises(InputError, match="duplicate name"):
        ws.add({"posets": {"P": {"elements": ["q"]}}})
    with pytest.raises(InputError, match="unknown poset"):
        ws.add({"maps": {"m": {"identity": "Nope"}}})
    with pytest.raises(InputError, match="NotOrderPreserving"):
        ws.add({"posets": {"C2": {"elements": ["0", "1"], "relations": [["0", "1"]]}},
                "maps": {"flip": {"domain": "C2", "values": {"0": "1", "1": "0"}}}})
    with pytest.raises(InputError, match="format"):
        ws.add({"format": 2})


def test_map_constructors(ws, torus):
    ws2 = Workspace()
    ws2.add({"posets": {"S": poset_to_json(ws.poset("S")), "X": {"product": ["S", "S"]}},
             "maps": {"id": {"identity": "S"}, "c": {"domain": "S", "constant": "a"},
                      "g": {"domain": "X", "product_map": ["id", "c"]},
                      "p1": {"domain": "X", "codomain": "S", "projection": 0},
                      "diag": {"domain": "S", "codomain": "X", "pair": ["id", "id"]}}})
    assert ws2.map("g").values == ws.map("g").values
    assert ws2.map("p1")("(x1,b)") == "x1"
    assert ws2.map("diag")("a") == "(a,a)"


@pytest.mark.parametrize("pair", [("f", "g"), ("g", "h"), ("f", "h")])
def test_certificate_round_trip(ws, pair):
    maps = [ws.map(n) for n in pair]
    d = distance(maps)
    obj = json.loads(json.dumps(certificate_to_json("distance", maps, d)))
    quantity, maps2, cert, value = certificate_from_json(obj)
    assert quantity == "distance" and value == d.value
    assert [m.values for m in maps2] == [m.values for m in maps]
    assert verify_certificate(maps2, cert, value)


def test_gcat_and_sd_round_trip(ws):
    S = ws.poset("S")
    d = gcat(S)
    from homdist.poset import OrderMap

    obj = json.loads(json.dumps(certificate_to_json("gcat", [OrderMap.identity(S)] * 2, d)))
    _, maps, cert, _ = certificate_from_json(obj)
    assert verify_gcat_certificate(maps[0].dom, cert)
    B = ws.complex("B")
    d = dtc(B)
    _, projections = categorical_power([B, B])
    obj = json.loads(json.dumps(certificate_to_json("dtc", projections, d)))
    _, maps, cert, value = certificate_from_json(obj)
    assert verify_sd_certificate(maps, cert, value)


def test_cli_distance_and_verify(capsys, tmp_path):
    out = tmp_path / "fg.json"
    code, _, _ = run(["distance", "--maps", "f", "g", "--out", str(out)], capsys)
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["quantity"] == "distance" and rep["value"] == 1
    assert len(rep["certificate"]["ideals"]) == 2
    assert set(rep) >= {"quantity", "value", "certificate", "budgets_hit", "wall_ms"}
    code, ok = report(["verify", str(out)], capsys)
    assert code == 0 and ok["valid"] is True

    tampered = json.loads(out.read_text())
    tampered["certificate"]["ideals"][0] = ["(x1,x1)"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(tampered))
    code, res = report(["verify", str(bad)], capsys)
    assert code == 0 and res["valid"] is False and res["reason"]

    tampered = json.loads(out.read_text())
    tampered["certificate"]["ideals"].pop()
    tampered["certificate"]["fences"].pop()
    bad.write_text(json.dumps(tampered))
    code, res = report(["verify", str(bad)], capsys)
    assert code == 0 and res["valid"] is False


def test_cli_every_certificate_reverifies(capsys, tmp_path):
    commands = [
        ["cat", "--poset", "S"],
        ["cat", "--poset", "X", "--basepoint", "(x1,x2)"],
        ["cat", "--poset", "S", "--via-inclusions"],
        ["gcat", "--poset", "S"],
        ["tc", "--poset", "S"],
        ["tcm", "--poset", "S", "--m", "2"],
        ["sd", "--maps", "id", "id"],
        ["scat", "--complex", "B", "--vertex", "2"],
        ["dtc", "--complex", "B"],
    ]
    for k, cmd in enumerate(commands):
        path = tmp_path / f"r{k}.json"
        code, _, _ = run(cmd + ["--out", str(path)], capsys)
        assert code == 0, cmd
        code, res = report(["verify", str(path)], capsys)
        assert res["valid"], (cmd, res)


def test_cli_fixed_values(capsys):
    assert report(["cat", "--poset", "S"], capsys)[1]["value"] == 1
    assert report(["lcp", "--maps", "f", "h"], capsys)[1]["value"] == 2
    core = report(["core", "--poset", "X"], capsys)[1]
    assert core["value"] == 16 and core["removal_log"] == []


def test_cli_triangle_example(capsys):
    code, rep = report(["triangle-example"], capsys)
    assert code == 0
    assert rep["values"] == {"D(f,g)": 1, "D(g,h)": 1, "D(f,h)": 3}
    assert rep["triangle_violation"] is True
    assert rep["lower_bound_proofs"]["D(f,h)"]["refuted_cover_sizes"] == [0, 1, 2, 3]
    code, plain = report(["triangle-example", "--no-cores"], capsys)
    assert code == 0 and plain["values"] == rep["values"]


def test_cli_command_alias(capsys):
    code, rep = report(["paper-example"], capsys)
    assert code == 0 and rep["quantity"] == "triangle_example"


def test_cli_tiny_budget_exits_2(capsys):
    code, rep = report(["triangle-example", "--budget-bfs", "1"], capsys)
    assert code == 2 and "bfs" in rep["budgets_hit"]
    assert all(isinstance(v, dict) and "at_least" in v for v in rep["values"].values())


def test_cli_budget_scale_env(capsys, monkeypatch):
    monkeypatch.setenv("HOMDIST_BUDGET_SCALE", "0.000001")
    code, rep = report(["distance", "--maps", "f", "h"], capsys)
    assert code == 2 and rep["value"] == {"at_least": rep["value"]["at_least"]}


def test_cli_input_errors(capsys, tmp_path):
    code, _, err = run(["cat", "--poset", "Nope"], capsys)
    assert code == 1 and "unknown poset" in err
    bad = tmp_path / "w.json"
    bad.write_text("{oops")
    code, _, err = run(["cat", "--poset", "S", "-w", str(bad)], capsys)
    assert code == 1 and "w.json:1:2" in err
    code, _, err = run(["verify", str(tmp_path / "missing.json")], capsys)
    assert code == 1


def _strip(text):
    rep = json.loads(text)
    rep.pop("wall_ms")
    return json.dumps(rep, indent=2)


def test_cli_deterministic(capsys):
    runs = []
    for extra in ([], [], ["--threads", "2"]):
        code, out, _ = run(["distance", "--maps", "g", "h"] + extra, capsys)
        runs.append(_strip(out))
    assert runs[0] == runs[1] == runs[2]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "homdist", "cat", "--poset", "S"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == 1
