import json

from pgblock.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_bounds_main_theorem(capsys):
    code, data = run_cli(capsys, "bounds", "--n", "3", "--k", "1", "--q", "2")
    assert code == 0
    assert data["main_theorem_bound"] == "6"
    assert data["value"] == "6"
    assert data["params"] == {"n": "3", "k": "1", "q": "2"}


def test_bounds_open_case(capsys):
    code, data = run_cli(capsys, "bounds", "--n", "4", "--k", "2", "--q", "2")
    assert code == 0
    assert data["main_theorem_bound"] == "open"


def test_bounds_other_formulas(capsys):
    code, data = run_cli(capsys, "bounds", "--formula", "gaussian",
                         "--a", "4", "--b", "2", "--q", "2")
    assert code == 0 and data["gaussian"] == "35"
    code, data = run_cli(capsys, "bounds", "--formula", "theta", "--m", "2", "--q", "2")
    assert code == 0 and data["theta"] == "7"
    code, data = run_cli(capsys, "bounds", "--formula", "metsch", "--n", "3",
                         "--q", "2", "--d", "1", "--s", "1", "--b-size", "3")
    assert code == 0 and data["metsch_lower_bound"] == "16"
    code, data = run_cli(capsys, "bounds", "--formula", "heger-nagy",
                         "--a", "4", "--b", "2", "--q", "3")
    assert code == 0
    assert data["comparison"]["satisfied"] is True
    assert data["comparison"]["actual"] == "130"


def test_construct_verify_roundtrip(capsys, tmp_path):
    code, doc = run_cli(capsys, "construct", "--q", "2", "--n", "3", "--k", "1")
    assert code == 0
    path = tmp_path / "set.json"
    path.write_text(json.dumps(doc))
    code, res = run_cli(capsys, "verify", str(path))
    assert code == 0 and res["blocking"] is True
    code, res = run_cli(capsys, "minimal", str(path))
    assert code == 0 and res["minimal"] is True
    code, dual_doc = run_cli(capsys, "dual", str(path))
    assert code == 0
    dual_path = tmp_path / "dual.json"
    dual_path.write_text(json.dumps(dual_doc))
    code, res = run_cli(capsys, "verify", str(dual_path))
    assert code == 0 and res["blocking"] is True


def test_construct_all_kinds(capsys, tmp_path):
    cases = [
        (["construct", "--q", "3", "--n", "3", "--k", "1", "--t", "2"], 12),
        (["construct", "--q", "2", "--n", "3", "--k", "1",
          "--kind", "bose-burton-points"], 7),
        (["construct", "--q", "2", "--n", "5", "--k", "1",
          "--kind", "bose-burton-hyperplanes"], 7),
        (["construct", "--q", "2", "--n", "4", "--k", "2", "--kind", "q2-even"], 8),
    ]
    for argv, size in cases:
        code, doc = run_cli(capsys, *argv)
        assert code == 0
        assert len(doc["points"]) + len(doc["hyperplanes"]) == size
        path = tmp_path / "c.json"
        path.write_text(json.dumps(doc))
        code, res = run_cli(capsys, "verify", str(path))
        assert code == 0 and res["blocking"] is True


def test_construct_with_explicit_params(capsys, tmp_path):
    params = {
        "hull": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]],
        "axis": [[1, 0, 0, 0]],
        "point_spaces": [[[1, 0, 0, 0], [0, 1, 0, 0]]],
    }
    ppath = tmp_path / "params.json"
    ppath.write_text(json.dumps(params))
    code, doc = run_cli(capsys, "construct", "--q", "2", "--n", "3", "--k", "1",
                        "--params", str(ppath))
    assert code == 0
    assert len(doc["points"]) == 2 and len(doc["hyperplanes"]) == 4


def test_verify_failure_exit_code(capsys, tmp_path):
    path = tmp_path / "empty.json"
    path.write_text(json.dumps(
        {"q": 2, "n": 3, "k": 1, "points": [], "hyperplanes": []}))
    code, res = run_cli(capsys, "verify", str(path))
    assert code == 1
    assert res["blocking"] is False
    assert "witness" in res and res["witness"]["dim"] == 1


def test_invalid_input_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["verify", str(bad)]) == 2
    capsys.readouterr()
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"q": 6, "n": 3, "k": 1, "points": []}))
    assert main(["verify", str(wrong)]) == 2
    capsys.readouterr()
    not_blocking = tmp_path / "nb.json"
    not_blocking.write_text(json.dumps(
        {"q": 2, "n": 3, "k": 1, "points": [], "hyperplanes": []}))
    assert main(["minimal", str(not_blocking)]) == 2
    capsys.readouterr()


def test_budget_exit_code(capsys):
    code = main(["search", "--q", "3", "--n", "3", "--k", "1", "--cap", "12",
                 "--budget-seconds", "0.05"])
    assert code == 3
    capsys.readouterr()


def test_search_json(capsys):
    code, data = run_cli(capsys, "search", "--q", "2", "--n", "2", "--k", "1",
                         "--cap", "3")
    assert code == 0
    assert data["minimum_size"] == 3
    assert len(data["minimum_sets"]) == 7
    assert data["workers"] == 1
    assert "wall_time" in data


def test_search_rerun_stability(capsys):
    runs = []
    for _ in range(2):
        code, data = run_cli(capsys, "search", "--q", "2", "--n", "3", "--k", "1",
                             "--cap", "6", "--seed", "1")
        assert code == 0
        data.pop("wall_time")
        runs.append(json.dumps(data, sort_keys=True))
    assert runs[0] == runs[1]


def test_classify_json(capsys):
    code, data = run_cli(capsys, "classify", "--q", "3", "--n", "2", "--k", "1")
    assert code == 0
    assert data["expected_bound"] == 4
    assert data["observed_minimum"] == 4
    assert data["all_minima_match_theorem"] is True


def test_classify_open_json(capsys):
    code, data = run_cli(capsys, "classify", "--q", "2", "--n", "2", "--k", "1")
    assert code == 0
    assert data["expected_bound"] == "open"
    assert data["observed_minimum"] == 3


def test_lemma_check(capsys, tmp_path):
    code, doc = run_cli(capsys, "construct", "--q", "2", "--n", "3", "--k", "1")
    path = tmp_path / "set.json"
    path.write_text(json.dumps(doc))
    code, res = run_cli(capsys, "lemma-check", str(path))
    assert code == 0
    assert res["all_pass"] is True
    assert res["checks"]["size_bound"]["pass"]
    assert res["checks"]["skew_cospace_bound"]["pass"]


def test_lemma_check_non_minimum(capsys, tmp_path):
    # the plane is blocking but above the (q+1)q^k size, equality checks vacuous
    code, doc = run_cli(capsys, "construct", "--q", "2", "--n", "3", "--k", "1",
                        "--kind", "bose-burton-points")
    path = tmp_path / "bb.json"
    path.write_text(json.dumps(doc))
    code, res = run_cli(capsys, "lemma-check", str(path))
    assert code == 0
    assert res["checks"]["no_incident_pair"]["applicable"] is False


def test_stdin_input(capsys, monkeypatch, tmp_path):
    import io
    doc = {"q": 2, "n": 3, "k": 1, "points": [], "hyperplanes": []}
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(doc)))
    code, res = run_cli(capsys, "verify", "-")
    assert code == 1 and res["blocking"] is False


def test_normalization_reported_on_stderr(capsys, tmp_path):
    doc = {"q": 3, "n": 2, "k": 1, "points": [[0, 2, 1]], "hyperplanes": []}
    path = tmp_path / "unnorm.json"
    path.write_text(json.dumps(doc))
    code = main(["verify", str(path)])
    captured = capsys.readouterr()
    assert "normalized" in captured.err
    assert code == 1
