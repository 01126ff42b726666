import json
import subprocess
import sys
from pathlib import Path


from kempekit.cli import main

DATA = Path(__file__).parent / "data"


def run(args, capsys):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classes_text(capsys):
    code, out, _ = run(["classes", "--graph", DATA / "k4.rot", "--k", 4], capsys)
    assert code == 0 and out == "colorings=24 classes=1\n"


def test_classes_graph6(capsys):
    code, out, _ = run(["classes", "--graph", DATA / "k4.g6"], capsys)
    assert code == 0 and "colorings=24" in out


def test_missing_file_exit_2(capsys):
    code, _, err = run(["classes", "--graph", "missing.rot"], capsys)
    assert code == 2 and err.startswith("error:")


def test_bad_k_and_usage(capsys):
    assert run(["classes", "--graph", DATA / "k4.rot", "--k", 9], capsys)[0] == 2
    assert run(["nonsense"], capsys)[0] == 2


def test_cap_exit_3(capsys, monkeypatch):
    assert run(["classes", "--graph", DATA / "k4.rot", "--cap", 3], capsys)[0] == 3
    monkeypatch.setenv("KEMPE_CAP", "3")
    assert run(["classes", "--graph", DATA / "k4.rot"], capsys)[0] == 3


def test_cap_warning(capsys):
    code, _, err = run(["classes", "--graph", DATA / "k4.rot", "--cap", 20], capsys)
    assert code == 0 and "warning" in err


def test_fisk_and_check_cert(tmp_path, capsys):
    out = tmp_path / "f.json"
    code, _, err = run(["fisk", "--graph", DATA / "octahedron.rot", "--coloring", DATA / "octahedron.col",
                        "--out", out], capsys)
    assert code == 0 and "cycle_interchange" in err
    doc = json.loads(out.read_text())
    assert doc["certificate"]["options"]["forbidden_color"] == 4
    assert run(["check-cert", "--graph", DATA / "octahedron.rot", "--cert", out], capsys)[0] == 0


def test_tampered_cert_exit_1(tmp_path, capsys):
    out = tmp_path / "f.json"
    run(["fisk", "--graph", DATA / "octahedron.rot", "--coloring", DATA / "octahedron.col", "--out", out], capsys)
    doc = json.loads(out.read_text())
    doc["certificate"]["moves"][0]["colors"] = [1, 2]
    out.write_text(json.dumps(doc))
    code, text, _ = run(["check-cert", "--graph", DATA / "octahedron.rot", "--cert", out], capsys)
    assert code == 1 and "invalid at move 0" in text


def test_garbage_cert_exit_2(tmp_path, capsys):
    p = tmp_path / "c.json"
    p.write_text("{not json")
    assert run(["check-cert", "--graph", DATA / "k4.rot", "--cert", p], capsys)[0] == 2


def test_path_restricted(tmp_path, capsys):
    a, b = tmp_path / "a.col", tmp_path / "b.col"
    a.write_text("4 1 2 3 2 4\n")
    b.write_text("1 3 2 3 2 1\n")
    cert = tmp_path / "p.json"
    code, _, _ = run(["path", "--graph", DATA / "octahedron.rot", "--start", a, "--end", b, "--restrict", "all",
                      "--forbid", 4, "--out", cert], capsys)
    assert code == 0
    assert json.loads(cert.read_text())["options"]["restricted"] == list(range(6))
    assert run(["check-cert", "--graph", DATA / "octahedron.rot", "--cert", cert], capsys)[0] == 0


def test_improper_coloring_exit_2(tmp_path, capsys):
    a = tmp_path / "a.col"
    a.write_text("1 1 2 3 2 4\n")
    assert run(["fisk", "--graph", DATA / "octahedron.rot", "--coloring", a], capsys)[0] == 2


def test_fisk_needs_triangulation(tmp_path, capsys):
    a = tmp_path / "a.col"
    a.write_text("1 2 3 4\n")
    assert run(["fisk", "--graph", DATA / "k4.g6", "--coloring", a], capsys)[0] == 2


def test_verify_theorem_catalog(capsys):
    code, out, _ = run(["verify-theorem", "--catalog", "W5"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["kc"] == 1 and "elapsed" not in rep
    code, out, _ = run(["verify-theorem", "--catalog", "W5", "--timing"], capsys)
    assert "elapsed" in json.loads(out)
    assert run(["verify-theorem", "--catalog", "nope"], capsys)[0] == 2


def test_verify_theorem_rejects_non_critical(capsys):
    code, out, _ = run(["verify-theorem", "--graph", DATA / "octahedron.rot"], capsys)
    assert code == 1 and json.loads(out)["is_4_critical"] is False


def test_gstar(tmp_path, capsys):
    a, b = tmp_path / "a.col", tmp_path / "b.col"
    a.write_text("4 1 1 2 3\n")
    b.write_text("4 1 2 1 3\n")
    g = tmp_path / "star.rot"
    g.write_text("n 5\nrot 0: 1 2 3 4\nrot 1: 0\nrot 2: 0\nrot 3: 0\nrot 4: 0\n")
    code, out, _ = run(["gstar", "--graph", g, "--vertex", 0, "--c1", a, "--c2", b], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["violations"] == [] and doc["c1"][5] == 3


def test_console_script_module():
    r = subprocess.run([sys.executable, "-m", "kempekit.cli", "classes", "--graph", str(DATA / "k4.rot")],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "colorings=24 classes=1\n"
