import csv
import io
import json
from fractions import Fraction

import pytest

from ccp import cli, verify
from ccp.numerics import to_decimal_string


def run(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def pop_file(tmp_path):
    def write(obj):
        path = tmp_path / "pop.json"
        path.write_text(json.dumps(obj))
        return str(path)

    return write


def test_pdf_csv_example(capsys):
    code, out, _ = run(capsys, "pdf", "--uniform", "3", "--c", "3", "--kmax", "6", "--backend", "exact", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["k", "pdf"]
    assert len(rows) == 8
    assert rows[4] == ["3", to_decimal_string(Fraction(2, 9))]
    assert out.endswith("\n") and "\r" not in out


def test_csv_json_agree(capsys):
    _, out_csv, _ = run(capsys, "cdf", "--uniform", "4", "--c", "3", "--kmax", "9")
    _, out_json, _ = run(capsys, "cdf", "--uniform", "4", "--c", "3", "--kmax", "9", "--format", "json")
    doc = json.loads(out_json)
    rows = list(csv.DictReader(io.StringIO(out_csv)))
    assert len(rows) == len(doc["rows"]) == 10
    for r_csv, r_json in zip(rows, doc["rows"]):
        assert r_csv["cdf"] == r_json["cdf_decimal"]
        assert to_decimal_string(Fraction(r_json["cdf"])) == r_csv["cdf"]


def test_single_k_and_popularity_file(capsys, pop_file):
    path = pop_file({"probabilities": ["1/10", "2/10", "3/10", "4/10"]})
    code, out, _ = run(capsys, "pdf", "--popularity", path, "--c", "2", "--k", "2", "--format", "json")
    assert code == 0
    assert json.loads(out)["rows"][0]["pdf"] == "7/10"


def test_float_backend_and_expectation(capsys):
    code, out, _ = run(capsys, "expectation", "--uniform", "3", "--c", "3", "--format", "json")
    assert code == 0 and json.loads(out)["rows"][0]["expectation"] == "11/2"
    code, out, _ = run(capsys, "ccdf", "--uniform", "3", "--c", "3", "--k", "4", "--backend", "float", "--format", "json")
    assert json.loads(out)["rows"][0]["ccdf"] == pytest.approx(1 - 2 / 9 - 2 / 9)


def test_alpha_eta_powersum(capsys):
    code, out, _ = run(capsys, "alpha", "--uniform", "4", "--k", "3", "--alpha-method", "uniform", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and [r["alpha"] for r in doc["rows"]] == ["1/16", "11/16", "1"]
    code, out, _ = run(capsys, "alpha", "--uniform", "4", "--exponent", "3", "--u", "2")
    assert out.splitlines()[1].startswith("2,0.6875")
    code, out, _ = run(capsys, "eta", "--n", "5", "--k", "2", "--j", "4", "--format", "json")
    assert code == 0 and len(json.loads(out)["rows"]) == 2
    code, out, _ = run(capsys, "powersum", "--uniform", "6", "--j", "3", "--k", "2", "--method", "brute", "--format", "json")
    assert json.loads(out)["rows"][0]["power_sum"] == str(Fraction(20 * 9, 36))


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--n-max", "5", "--trials", "5", "--seed", "7", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and doc["failures"] == []
    assert {r["identity"] for r in doc["rows"]} >= {"relation1", "decomposition", "fast_path", "weight_grid"}


def test_verify_violation_exit_2(capsys, monkeypatch):
    def broken(n_max, trials, seed, **kw):
        return [("fake_identity", lambda: iter([({"n": 3}, Fraction(1), Fraction(2))]))]

    monkeypatch.setattr(verify, "suites", broken)
    code, out, err = run(capsys, "verify", "--format", "json")
    assert code == 2
    failure = json.loads(out)["failures"][0]
    assert failure == {"identity": "fake_identity", "inputs": {"n": "3"}, "lhs": "1", "rhs": "2"}
    assert "fake_identity" in err


def test_verify_deterministic(capsys):
    _, a, _ = run(capsys, "verify", "--n-max", "4", "--trials", "3", "--seed", "1")
    _, b, _ = run(capsys, "verify", "--n-max", "4", "--trials", "3", "--seed", "1")
    assert a == b


def test_simulate_header(capsys):
    code, out, _ = run(capsys, "simulate", "--uniform", "3", "--c", "3", "--samples", "1000", "--seed", "9")
    assert code == 0
    first, header = out.splitlines()[:2]
    assert first == "# generator=PCG64 seed=9 samples=1000 truncated=0"
    assert header == "k,count,frequency"
    _, again, _ = run(capsys, "simulate", "--uniform", "3", "--c", "3", "--samples", "1000", "--seed", "9")
    assert again == out


def test_compare_feasible(capsys):
    code, out, _ = run(capsys, "compare", "--uniform", "12", "--backend", "float", "--j", "6", "--k", "3", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["brute_status"] == "ok"
    assert doc["rel_diff"] < 1e-12
    assert doc["brute_subsets"] == 924 and doc["fast_subsets"] == 12 + 66 + 220


def test_compare_infeasible_ratio(capsys):
    code, out, _ = run(capsys, "compare", "--uniform", "100", "--backend", "float", "--j", "50", "--k", "5", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["brute_status"] == "infeasible, ratio only"
    assert float(doc["subset_ratio_decimal"]) == pytest.approx(1.27106e21, rel=5e-6)


@pytest.mark.parametrize(
    "obj, code_name",
    [
        ({"probabilities": [0.5, 0.6]}, "NotNormalized"),
        ({"probabilities": [1.0]}, "SizeTooSmall"),
        ({"probabilities": ["a", "b"]}, "ParseError"),
    ],
)
def test_popularity_errors_json(capsys, pop_file, obj, code_name):
    code, out, err = run(capsys, "pdf", "--popularity", pop_file(obj), "--c", "2", "--k", "2", "--format", "json")
    assert code == 1 and out == ""
    doc = json.loads(err)
    assert doc["message"]
    assert doc["error"].lower().replace("_", "") == code_name.lower()


def test_renormalize_flag(capsys, pop_file):
    path = pop_file({"probabilities": [1.0, 1.0, 2.0]})
    assert run(capsys, "pdf", "--popularity", path, "--c", "2", "--k", "2")[0] == 1
    code, out, _ = run(capsys, "pdf", "--popularity", path, "--c", "2", "--k", "2", "--renormalize", "--format", "json")
    assert code == 0


def test_usage_errors(capsys):
    assert run(capsys, "pdf", "--c", "2", "--k", "2")[0] == 1
    assert run(capsys, "pdf", "--uniform", "3", "--k", "2")[0] == 1
    assert run(capsys, "pdf", "--uniform", "3", "--c", "2", "--k", "1", "--kmax", "3")[0] == 1
    assert run(capsys, "nosuch")[0] == 1
    assert run(capsys, "pdf", "--uniform", "3", "--c", "5", "--k", "2")[0] == 1


def test_guard_flag(capsys):
    code, _, err = run(capsys, "powersum", "--uniform", "20", "--backend", "float", "--j", "10", "--k", "10", "--method", "brute", "--guard", "1000", "--format", "json")
    assert code == 1
    assert json.loads(err)["error"]
    assert run(capsys, "powersum", "--uniform", "10", "--j", "5", "--k", "5", "--method", "brute", "--guard", "1000")[0] == 0


def test_main_entry(monkeypatch, capsys):
    monkeypatch.setattr("sys.argv", ["ccp", "eta", "--n", "4", "--k", "1", "--j", "2"])
    with pytest.raises(SystemExit) as exc:
        cli.main()
    assert exc.value.code == 0
