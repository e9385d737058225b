import json
import math

import pytest

from hyperbasis import cli, families
from mapfactory import bones, sibling_loops


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bounds_json(capsys):
    code, out, _ = run(["bounds", "--genus", "2"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["kappa"] == 2
    assert [r["theorem_bound"] for r in data["rows"]] == pytest.approx(
        [4 * math.log(4), 4 * math.log(6)], abs=1e-6
    )


def test_bounds_csv_and_lambda(capsys):
    code, out, _ = run(
        ["bounds", "--genus", "2", "--lambda", "0.5", "--format", "csv"], capsys
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "k,j,radius_bound,alpha_bound,theorem_bound"
    assert len(lines[1].split(",")) == 5
    assert any(line.startswith("lambda,") for line in lines)
    # values rounded to 1e-7
    assert lines[1].split(",")[4] == f"{4 * math.log(4):.7f}"


def test_bounds_bad_genus(capsys):
    code, _, _ = run(["bounds", "--genus", "1"], capsys)
    assert code == 2


def test_unknown_flag_exits_2(capsys):
    assert cli.main(["bounds", "--nope"]) == 2


def test_simulate_roundtrip(tmp_path, capsys):
    out_path = tmp_path / "log.json"
    code, _, _ = run(
        ["simulate", "--genus", "2", "--out", str(out_path)], capsys
    )
    assert code == 0
    data = json.loads(out_path.read_text())
    assert len(data["events"]) == 5
    assert data["events"][0]["r"] == pytest.approx(math.acosh(2) / 2, abs=1e-7)


def test_pipeline_golden(tmp_path, capsys):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert run(["pipeline", "--genus", "2", "--out", str(out1)], capsys)[0] == 0
    assert run(["pipeline", "--genus", "2", "--out", str(out2)], capsys)[0] == 0
    assert out1.read_bytes() == out2.read_bytes()
    report = json.loads(out1.read_text())
    assert report["growth"]["M"] == 5
    assert report["prune"]["kept"] == [1, 3, 4, 5]
    assert report["verification"]["rank"] == 4
    assert report["verification"]["partial_basis"] is True
    assert report["verification"]["theorem_chain_ok"] is True


def test_pipeline_with_lambda(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, _ = run(
        ["pipeline", "--genus", "3", "--lambda", "0.9", "--out", str(out)], capsys
    )
    assert code == 0
    report = json.loads(out.read_text())
    assert len(report["jacobian"]) == 2    # ceil(0.9 * 2/3 * 3)


def test_pipeline_bad_model_exits_3(tmp_path, capsys):
    bad = tmp_path / "badmap.json"
    bad.write_text(sibling_loops(8).to_json())
    code, _, _ = run(["prune", "--map", str(bad)], capsys)
    assert code == 3


def test_prune_map_file(tmp_path, capsys):
    path = tmp_path / "fam.json"
    path.write_text(families.block_family(4).to_json())
    out = tmp_path / "pruned.json"
    code, _, _ = run(["prune", "--map", str(path), "--out", str(out)], capsys)
    assert code == 0
    data = json.loads(out.read_text())
    assert len(data["kept"]) == 4
    assert data["verification"]["rank"] == 4


def test_verify_exit_codes(tmp_path, capsys):
    three = tmp_path / "three.json"
    three.write_text(bones([(1, 2), (3, 4), (5, 6)], 6).to_json())
    code, out, err = run(["verify", "--map", str(three)], capsys)
    assert code == 1
    assert "separating" in err
    code, out, err = run(
        ["verify", "--map", str(three), "--subset", "1,2"], capsys
    )
    assert code == 0
    assert json.loads(out)["partial_basis"] is True


def test_verify_malformed_map(tmp_path, capsys):
    bad = tmp_path / "trunc.json"
    bad.write_text('{"vertices": [')
    code, _, _ = run(["verify", "--map", str(bad)], capsys)
    assert code == 2
    code, _, _ = run(["verify", "--map", str(tmp_path / "missing.json")], capsys)
    assert code == 2


def test_synthetic_model_through_cli(tmp_path, capsys):
    n = 6
    dist = [[0.0 if a == b else 2.0 for b in range(n)] for a in range(n)]
    dist[1][2] = dist[2][1] = 0.4
    dist[4][5] = dist[5][4] = 0.4
    model = {
        "genus": 2,
        "distances": dist,
        "loop_radii": [0.5, 10.0, 10.0, 0.55, 10.0, 10.0],
        "arcs": [
            {"kind": "edge", "i": 2, "j": 3},
            {"kind": "edge", "i": 5, "j": 6},
            {"kind": "loop", "i": 1, "enclosed": [2, 3]},
            {"kind": "loop", "i": 4, "enclosed": [5, 6]},
        ],
    }
    path = tmp_path / "model.json"
    path.write_text(json.dumps(model))
    out = tmp_path / "rep.json"
    code, _, _ = run(["pipeline", "--model", str(path), "--out", str(out)], capsys)
    assert code == 0
    report = json.loads(out.read_text())
    assert report["verification"]["partial_basis"] is True
    assert report["verification"]["arcs_kept"] == 2


def test_pipeline_nongeometric_model_exits_3(tmp_path, capsys):
    n = 8
    dist = [[0.0 if a == b else 4.0 for b in range(n)] for a in range(n)]
    model = {
        "genus": 3,
        "distances": dist,
        "loop_radii": [0.1 + 0.05 * i for i in range(n)],
        "arcs": [{"kind": "loop", "i": i, "enclosed": []} for i in range(1, n + 1)],
    }
    path = tmp_path / "badmodel.json"
    path.write_text(json.dumps(model))
    code, _, _ = run(["pipeline", "--model", str(path)], capsys)
    assert code == 3
