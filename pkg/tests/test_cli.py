import json
import subprocess
import sys

import pytest

from derivlab import __version__
from derivlab.cli import EXIT_INPUT, EXIT_NO, EXIT_OK, main
from derivlab.io import load_map, save_map
from derivlab.localcheck import gen_basis_patched, map_from_inner, transpose_map
from derivlab.matrices import Matrix, unit
from derivlab.scalars import ring_make

Q = ring_make("Q")


def run(args, capsys):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


def reject_example():
    a, z = unit(Q, 2, 1, 1), Matrix.zeros(Q, 2)
    return gen_basis_patched([z, a, -a, z])


def test_gen_check_globalize_round_trip(tmp_path, capsys):
    path = tmp_path / "m.json"
    code, out, _ = run(["gen", "inner", "--ring", "GF(5)", "--n", 3, "--seed", 4, "--out", path], capsys)
    assert code == EXIT_OK and out.strip() == str(path)
    code, out, _ = run(["check", "--map", path], capsys)
    assert code == EXIT_OK and json.loads(out)["outcome"] == "probabilistic-accept"
    code, out, _ = run(["check", "--map", path, "--samples", 50, "--seed", 2], capsys)
    d = json.loads(out)
    assert code == EXIT_OK and d["sample_size"] == 50 and d["seed"] == 2
    out_file = tmp_path / "g.json"
    code, out, _ = run(["globalize", "--map", path, "--out", out_file], capsys)
    rep = json.loads(out_file.read_text())
    assert code == EXIT_OK and rep["status"] == "success" and rep["paths_agree"] and rep["is_derivation"]
    assert json.loads(out) == rep


def test_reject_exit_codes(tmp_path, capsys):
    path = tmp_path / "r.json"
    save_map(reject_example(), path)
    code, out, _ = run(["check", "--map", path], capsys)
    assert code == EXIT_NO
    d = json.loads(out)
    assert d["outcome"] == "reject" and d["witness"] is not None
    code, out, _ = run(["globalize", "--map", path], capsys)
    assert code == EXIT_NO and json.loads(out)["stage"] == "direct"
    save_map(transpose_map(ring_make("GF(3)"), 2), path)
    code, _, _ = run(["check", "--map", path, "--exhaustive"], capsys)
    assert code == EXIT_NO


def test_jordan_files(tmp_path, capsys):
    path = tmp_path / "j.json"
    run(["gen", "inner", "--ring", "Z/4", "--n", 2, "--algebra", "jordan", "--out", path], capsys)
    code, out, _ = run(["check", "--map", path, "--exhaustive"], capsys)
    d = json.loads(out)
    assert code == EXIT_OK and d["outcome"] == "certified-accept" and d["product"] == "doubled"
    code, out, _ = run(["globalize", "--map", path], capsys)
    assert code == EXIT_OK and json.loads(out)["is_derivation"]


def test_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    d = map_from_inner(unit(Q, 2, 1, 2)).to_json()
    d["basis_images"][0] = {"n_rows": 2, "n_cols": 3, "rows": [["0", "0", "0"], ["0", "0", "0"]]}
    bad.write_text(json.dumps(d))
    code, _, err = run(["check", "--map", bad], capsys)
    assert code == EXIT_INPUT and "error" in err
    bad.write_text("{not json")
    assert run(["check", "--map", bad], capsys)[0] == EXIT_INPUT
    assert run(["check", "--map", tmp_path / "missing.json"], capsys)[0] == EXIT_INPUT
    assert run(["scan", "--ring", "Q", "--n", 2], capsys)[0] == EXIT_INPUT
    assert run(["scan", "--ring", "GF(3)", "--n", 2], capsys)[0] == EXIT_INPUT    # budget
    assert run(["scan", "--ring", "GF(6)", "--n", 2], capsys)[0] == EXIT_INPUT
    path = tmp_path / "q.json"
    save_map(map_from_inner(unit(Q, 2, 1, 2)), path)
    assert run(["check", "--map", path, "--exhaustive"], capsys)[0] == EXIT_INPUT
    with pytest.raises(SystemExit):
        main(["check"])


def test_scan_command(tmp_path, capsys):
    out_file = tmp_path / "s.json"
    code, out, _ = run(["scan", "--ring", "GF(3)", "--n", 2, "--algebra", "jordan", "--out", out_file], capsys)
    d = json.loads(out_file.read_text())
    assert code == EXIT_OK and d["maps_scanned"] == 19683 and d["local_inner_count"] == 3


def write_config(tmp_path, **kw):
    cfg = {"ring": "GF(3)", "n": 2, "mode": "exhaustive", "seed": 11,
           "generators": [{"kind": "inner-random", "count": 5}, {"kind": "basis-patched-random", "count": 10}]}
    cfg.update(kw)
    p = tmp_path / "c.json"
    p.write_text(json.dumps(cfg))
    return p


def test_campaign_deterministic_across_workers(tmp_path, capsys, monkeypatch):
    from derivlab.campaign import strip_timings
    cfg = write_config(tmp_path)
    monkeypatch.delenv("DERIVLAB_WORKERS", raising=False)
    _, a, _ = run(["--workers", 1, "campaign", "--config", cfg], capsys)
    monkeypatch.setenv("DERIVLAB_WORKERS", "2")
    _, b, _ = run(["--workers", 1, "campaign", "--config", cfg], capsys)
    a, b = json.loads(a), json.loads(b)
    assert strip_timings(a) == strip_timings(b)
    assert a["aggregate"]["inner-random"] == {"maps": 5, "accepted": 5, "rejected": 0, "globalized": 5}
    assert a["version"] == __version__ and a["seed"] == 11


def test_campaign_explicit_and_empty(tmp_path, capsys):
    save_map(transpose_map(ring_make("GF(3)"), 2), tmp_path / "t.json")
    cfg = write_config(tmp_path, generators=[{"kind": "explicit-files", "paths": ["t.json"]}], output="rep.json")
    code, _, _ = run(["campaign", "--config", cfg], capsys)
    rep = json.loads((tmp_path / "rep.json").read_text())
    assert code == EXIT_OK and rep["aggregate"]["explicit-files"]["rejected"] == 1
    cfg = write_config(tmp_path, generators=[])
    code, out, _ = run(["campaign", "--config", cfg], capsys)
    assert code == EXIT_OK and json.loads(out)["results"] == []
    cfg = write_config(tmp_path, ring="Q")     # exhaustive over Q
    assert run(["campaign", "--config", cfg], capsys)[0] == EXIT_INPUT
    cfg = write_config(tmp_path, generators=[{"kind": "nope", "count": 1}])
    assert run(["campaign", "--config", cfg], capsys)[0] == EXIT_INPUT


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "derivlab", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and __version__ in r.stdout
    path = tmp_path / "m.json"
    save_map(reject_example(), path)
    r = subprocess.run([sys.executable, "-m", "derivlab", "check", "--map", str(path)], capture_output=True)
    assert r.returncode == EXIT_NO


def test_saved_map_reloads(tmp_path):
    f = map_from_inner(Matrix.from_rows(ring_make("GF(4)"), [[1, 2], [3, 0]]))
    save_map(f, tmp_path / "m.json", {"note": "x"})
    g = load_map(tmp_path / "m.json")
    assert g.action == f.action and g.ring == f.ring
