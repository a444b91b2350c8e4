import json
import subprocess
import sys

import pytest

from quadsum import cli
from quadsum.cli import main, parse_grid

POLY = '{"n":2,"m":3,"a":{"1,2":1},"b":[0,0]}'


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def body(text):
    d = json.loads(text)
    d.pop("timestamp")
    return d


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "--poly", POLY)
    assert code == 0
    rep = json.loads(out)
    assert rep["results"][0]["norm"] == pytest.approx(0.8660254, abs=1e-7)
    assert rep["version"] and rep["seed"] is not None and "config" in rep
    assert set(rep["timestamp"]) == {"utc", "wall_seconds"}


def test_eval_naive_method_and_csv(capsys):
    code, out, _ = run(capsys, "eval", "--poly", POLY, "--method", "naive", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# quadsum")
    assert lines[1] == "poly,norm,re,im"


def test_even_modulus_is_usage_error(capsys):
    code, _, err = run(capsys, "search", "--n", "2", "--m", "4")
    assert code == 2 and "odd" in err


@pytest.mark.parametrize("argv", [
    ["eval", "--poly", '{"n":2,"m":3,"a":{"2,1":1},"b":[0,0]}'],
    ["eval", "--poly", "{not json"],
    ["eval"],
    ["moments", "--grid", "1..2x4"],
    ["moments", "--grid", "nonsense"],
    ["tail", "--n", "2", "--m", "3", "--gamma", "1.5"],
    ["search", "--n", "5", "--m", "5"],
    ["decompose", "--poly", POLY.replace('"m":3', '"m":5')],
])
def test_input_errors_exit_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err


def test_argparse_errors_exit_two():
    with pytest.raises(SystemExit) as exc:
        main(["search", "--format", "xml"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_grid_syntax():
    assert parse_grid("1..3x3,5,7") == [(n, m) for n in (1, 2, 3) for m in (3, 5, 7)]
    assert parse_grid("2x3..9") == [(2, 3), (2, 5), (2, 7), (2, 9)]
    assert parse_grid("1x3;2x5") == [(1, 3), (2, 5)]


def test_verify_second_moment(capsys):
    code, out, _ = run(capsys, "verify", "--claim", "m2", "--grid", "1..3x3,5,7")
    assert code == 0
    rep = json.loads(out)
    assert len(rep["results"]) == 9
    for row in rep["results"]:
        assert row["moment"]["value"] == f"1/{2 ** row['family']['n']}"
        assert row["matches_prediction"] is True


@pytest.mark.parametrize("claim, extra", [
    ("m2-homogeneous", ["--grid", "1..3x3"]),
    ("m6", ["--grid", "2x5"]),
    ("sharpness", ["--grid", "1..6x3,5"]),
    ("max", ["--grid", "2x3,5"]),
    ("gap", ["--grid", "3x3"]),
    ("tail", ["--grid", "2x5", "--gamma", "0.8,0.9"]),
    ("chebyshev", []),
])
def test_verify_claims_pass(capsys, claim, extra):
    code, out, _ = run(capsys, "verify", "--claim", claim, *extra)
    assert code == 0
    assert json.loads(out)["failed"] is False


def test_failed_claim_exits_one_with_counterexample(capsys, monkeypatch):
    monkeypatch.setattr(cli, "verify_sharpness", lambda n, m: n != 2)
    code, out, _ = run(capsys, "verify", "--claim", "sharpness", "--grid", "1..3x3")
    assert code == 1
    rep = json.loads(out)
    bad = [r for r in rep["results"] if r["failed"]]
    assert rep["failed"] is True and bad == [{"n": 2, "m": 3, "conjectured": 0.8660254037844387,
                                              "failed": True}]


def test_search_csv(capsys):
    code, out, _ = run(capsys, "search", "--grid", "2x3,5", "--format", "csv")
    assert code == 0
    assert out.splitlines()[1] == "n,m,max,conjectured,second,gap_bound,exhaustive"
    assert len(out.splitlines()) == 4


def test_search_random_family(capsys):
    code, out, _ = run(capsys, "search", "--n", "4", "--m", "5", "--family", "random",
                       "--count", "200", "--seed", "5")
    assert code == 0
    rep = json.loads(out)["results"][0]
    assert rep["exhaustive"] is False and rep["seed"] == 5 and rep["gap_holds"] is None


def test_spectrum_methods(capsys, tmp_path):
    tree = '{"n":3,"m":5,"a":{"1,2":1,"2,3":2},"b":[1,0,0]}'
    tables = []
    for method in ("fwht", "naive", "tree"):
        code, out, _ = run(capsys, "spectrum", "--poly", tree, "--method", method)
        assert code == 0
        tables.append([c["abs"] for c in json.loads(out)["results"][0]["coefficients"]])
    assert tables[0] == pytest.approx(tables[1], abs=1e-12) == tables[2]
    out_csv = tmp_path / "spec.csv"
    assert main(["spectrum", "--poly", tree, "--format", "csv", "--output", str(out_csv)]) == 0
    assert out_csv.read_text().splitlines()[1] == "bitmask,re,im,abs"


def test_moments_and_tail(capsys):
    code, out, _ = run(capsys, "moments", "--grid", "2x5", "--moment-order", "6")
    assert code == 0
    assert json.loads(out)["results"][0]["moment"]["value"] == "1/16"
    code, out, _ = run(capsys, "tail", "--grid", "2x5", "--format", "csv")
    assert code == 0 and out.splitlines()[1].startswith("n,m,gamma")
    code, out, _ = run(capsys, "tail", "--n", "30", "--m", "5", "--no-empirical", "--gamma", "0.9")
    assert code == 0 and json.loads(out)["results"][0]["empirical"] is None


def test_decompose(capsys, tmp_path):
    path = tmp_path / "polys.jsonl"
    path.write_text('{"n":4,"m":3,"a":{"1,2":1,"3,4":1,"2,3":2},"b":[0,1,0,0]}\n'
                    '{"n":3,"m":3,"a":{"1,2":1},"b":[0,0,1]}\n')
    code, out, _ = run(capsys, "decompose", "--file", str(path), "--all-pairings", "--odd-variant")
    assert code == 0
    rows = json.loads(out)["results"]
    assert len(rows) == 3 + 3
    assert max(r["error"] for r in rows) < 1e-9
    code, out, _ = run(capsys, "decompose", "--poly", POLY, "--sigma", "2,1")
    assert json.loads(out)["results"][0]["decomposition"]["sigma"] == [2, 1]


def test_reports_identical_apart_from_timestamp(capsys, tmp_path):
    argv = ["search", "--n", "3", "--m", "5", "--family", "random", "--count", "100", "--seed", "7"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert body(first) == body(second)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(argv + ["--output", str(a)])
    main(argv + ["--output", str(b)])
    strip = lambda p: [l for l in p.read_text().splitlines() if '"utc"' not in l and "wall_seconds" not in l]
    assert strip(a) == strip(b)


def test_json_keys_are_sorted(capsys):
    _, out, _ = run(capsys, "eval", "--poly", POLY)
    rep = json.loads(out)
    assert list(rep) == sorted(rep)
    assert out == json.dumps(rep, sort_keys=True, indent=2) + "\n"


def test_report_all_subset(capsys):
    code, out, err = run(capsys, "report-all", "--criteria", "1,10")
    assert code == 0
    assert [r["criterion"] for r in json.loads(out)["results"]] == [1, 10]
    assert err.count("[PASS]") == 2


def test_threads_flag_and_env(capsys, monkeypatch):
    monkeypatch.setenv("QUADSUM_THREADS", "2")
    _, a, _ = run(capsys, "search", "--n", "3", "--m", "3", "--no-symmetry")
    _, b, _ = run(capsys, "search", "--n", "3", "--m", "3", "--no-symmetry", "--threads", "1")
    ra, rb = body(a), body(b)
    assert ra["results"] == rb["results"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "quadsum", "eval", "--poly", POLY],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"][0]["norm"] == pytest.approx(0.8660254, abs=1e-7)
