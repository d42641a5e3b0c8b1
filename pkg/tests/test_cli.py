import json

import pytest

from nilcc import catalog
from nilcc.algebra import GradedLieAlgebra
from nilcc.cli import evaluate, main, run_regression


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_engel_json(capsys):
    code, out, _ = run(capsys, "analyze", "catalog:engel", "--format", "json")
    assert code == 0
    rep = json.loads(out)
    deg1 = [d for d in rep["pinching"]["degrees"] if d["degree"] == 1][0]
    assert deg1["alpha"] == ["7/3", "7/2"]
    assert rep["relations"]["weights"] == [3, 4]


def test_analyze_heisenberg_text(capsys):
    code, out, _ = run(capsys, "analyze", "catalog:heisenberg,1")
    assert code == 0
    assert "k=1  beta in [2, 2]" in out


def test_analyze_deterministic(capsys):
    _, a, _ = run(capsys, "analyze", "catalog:heisenberg,2", "--format", "json", "--seed", "7")
    _, b, _ = run(capsys, "analyze", "catalog:heisenberg,2", "--format", "json", "--seed", "7")
    assert a == b
    assert json.loads(a)["seed"] == 7
    assert json.loads(a)["predicates"]["omega_regular"]["status"] == "found"


def test_timing_flag(capsys):
    _, out, _ = run(capsys, "analyze", "catalog:engel", "--format", "json", "--timing")
    assert "timing" in json.loads(out)
    _, out, _ = run(capsys, "analyze", "catalog:engel", "--format", "json")
    assert "timing" not in json.loads(out)


def test_malformed_input(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"name": "x", "dim": 2, "labels": ["X", "Y"], "weights": [1, 1]}')
    code, _, err = run(capsys, "analyze", str(p))
    assert code == 2 and "brackets" in err
    p.write_text("{oops")
    code, _, err = run(capsys, "analyze", str(p))
    assert code == 2
    code, _, _ = run(capsys, "analyze", "catalog:nosuch")
    assert code == 2
    code, _, _ = run(capsys, "bogus-command")
    assert code == 2


def test_json_file_input(capsys, tmp_path):
    p = tmp_path / "h.json"
    p.write_text(json.dumps(catalog.heisenberg(1).to_json()))
    code, out, _ = run(capsys, "relations", str(p))
    assert code == 0 and json.loads(out)["weights"] == [3, 3]


def test_invalid_structure_file(capsys, tmp_path):
    bad = GradedLieAlgebra("bad", ["X", "Y", "Z"], [1, 1, 3], {(0, 1): {2: 1}})
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(bad.to_json()))
    code, _, err = run(capsys, "analyze", str(p))
    assert code == 2 and err.startswith("error:")


def test_free_command(capsys):
    code, out, _ = run(capsys, "free", "--generators", "2", "--rank", "4")
    assert code == 0 and json.loads(out)["dims"] == [2, 1, 2, 3]


def test_relations_command(capsys):
    code, out, _ = run(capsys, "relations", "catalog:engel")
    assert code == 0 and json.loads(out)["weights"] == [3, 4]
    code, _, _ = run(capsys, "relations", "catalog:engel_regraded")
    assert code == 2


def test_dc_command(capsys):
    code, out, _ = run(capsys, "dc", "catalog:engel", "--degree", "1")
    assert code == 0 and "θ_Y --[X^3]--> θ_X^θ_T" in out
    code, out, _ = run(capsys, "dc", "catalog:engel", "--degree", "1", "--format", "json")
    assert any(e["symbol"] == "X^3" for e in json.loads(out)["entries"])


def test_spectral_toy_command(capsys, tmp_path):
    code, _, _ = run(capsys, "spectral-toy", "--points", "8", "--out-dir", str(tmp_path))
    assert code == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert abs(summary["area_slope"] - 1.5) < 0.01
    assert (tmp_path / "area.csv").read_text().startswith("lambda,")


def test_regress_filter(capsys):
    code, out, _ = run(capsys, "regress", "--filter", "engel")
    assert code == 0 and "FAIL" not in out
    code, out, _ = run(capsys, "regress", "--filter", "zzz-no-match")
    assert code == 0 and len(out.strip().splitlines()) == 1


def test_regress_perturbed_fixture():
    e = catalog.engel()
    brackets = e.brackets
    brackets[(0, 2)] = {3: 2}
    perturbed = lambda: GradedLieAlgebra("engel*", e.labels, e.weights, brackets)
    rows = evaluate("engel*", perturbed, {"h2_weights": [3, 4]})
    assert all(r.ok for r in rows)
    brackets[(0, 1)] = {2: 1, 3: 1}
    from nilcc.algebra import ensure_valid
    rows = evaluate("engel**", lambda: ensure_valid(GradedLieAlgebra("engel**", e.labels, e.weights, brackets)),
                    {"h2_weights": [3, 4]})
    assert [r.criterion for r in rows if not r.ok] == ["valid"]


def test_regression_parallel_matches_serial():
    entries = [e for e in catalog.catalog_list() if e.name in ("heisenberg", "engel")]
    serial = [(r.algebra, r.criterion, r.ok) for r in run_regression(entries, 1)]
    parallel = [(r.algebra, r.criterion, r.ok) for r in run_regression(entries, 2)]
    assert serial == parallel and all(ok for *_, ok in serial)
