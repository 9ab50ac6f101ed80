import io
import json
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from drinfeld_factor.cli import PolySyntaxError, parse_field, parse_poly, run
from drinfeld_factor.field import gf
from drinfeld_factor.poly import Poly


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_examples():
    F5 = gf(5)
    assert parse_poly("t^3+2*t+1", F5).coeffs == (1, 2, 0, 1)
    assert parse_poly("1,2,0,1", F5) == parse_poly("t^3+2*t+1", F5)
    assert parse_poly("(t+1)^2 - 3*t", F5) == Poly(F5, [1, 4, 1])
    assert parse_poly(" 4 ", F5) == Poly.const(F5, 4)


def test_parse_extension_element():
    F9 = parse_field("3^2")
    h = parse_poly("(1+2*u)*t + u", F9)
    assert h.degree == 1
    assert parse_poly(str(h), F9) == h


def test_parse_errors():
    F5 = gf(5)
    with pytest.raises(PolySyntaxError) as exc:
        parse_poly("t^2 + * 3", F5)
    assert exc.value.position == 6
    with pytest.raises(ValueError):
        parse_poly("t + 7", F5)
    with pytest.raises(ValueError):
        parse_poly("t + u", F5)
    with pytest.raises(ValueError):
        parse_field("banana")
    with pytest.raises(ValueError):
        parse_field("9")


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([gf(5), gf(101), gf(3, 2), gf(2, 3)]), st.lists(st.integers(0, 10**6), max_size=8))
def test_print_parse_round_trip(F, cs):
    h = Poly(F, [c % F.q for c in cs])
    assert parse_poly(str(h), F) == h


def check_factor_schema(doc):
    assert set(doc) == {"field", "input", "algo", "seed", "factors", "stats"}
    assert isinstance(doc["field"]["p"], int) and isinstance(doc["field"]["k"], int)
    assert isinstance(doc["seed"], str)
    for f in doc["factors"]:
        assert set(f) == {"poly", "multiplicity"}
        assert isinstance(f["poly"], str) and f["multiplicity"] >= 1


def test_factor_t2_plus_1_over_f101(capsys):
    code, out, _ = invoke(capsys, "factor", "--q", "101", "--algo", "hybrid", "--seed", "1", "t^2+1")
    assert code == 0
    doc = json.loads(out)
    check_factor_schema(doc)
    assert [f["poly"] for f in doc["factors"]] == ["t+10", "t+91"]
    F = gf(101)
    prod = Poly.one(F)
    for f in doc["factors"]:
        prod = prod * parse_poly(f["poly"], F) ** f["multiplicity"]
    assert prod == parse_poly("t^2+1", F)


@pytest.mark.parametrize("algo", ["classical", "drinfeld-chi", "drinfeld-order", "drinfeld-berlekamp", "hybrid"])
def test_factor_each_selector(capsys, algo):
    code, out, _ = invoke(capsys, "factor", "--q", "7", "--algo", algo, "--seed", "s", "3*(t+1)^2*(t^3+t+1)")
    assert code == 0
    doc = json.loads(out)
    check_factor_schema(doc)
    assert doc["stats"]["unit"] == "3"
    assert [(f["poly"], f["multiplicity"]) for f in doc["factors"]][0] == ("t+1", 2)


def test_factor_extension_field(capsys):
    code, out, _ = invoke(capsys, "factor", "--q", "3^2", "--modulus", "1,0,1", "--seed", "2", "t^2+1")
    assert code == 0
    doc = json.loads(out)
    assert doc["field"] == {"p": 3, "k": 2, "modulus": [1, 0, 1]}
    assert [f["poly"] for f in doc["factors"]] == ["t+u", "t+2*u"]


def test_seed_is_echoed_when_defaulted(capsys):
    code, out, _ = invoke(capsys, "factor", "--q", "101", "t^2+1")
    assert code == 0
    assert len(json.loads(out)["seed"]) > 0


def test_chi_carlitz(capsys):
    code, out, _ = invoke(capsys, "chi", "--q", "7", "--algo", "carlitz", "t^2+1")
    assert code == 0
    assert json.loads(out)["chi"] == "t^2"


def test_chi_explicit_module(capsys):
    code, out, _ = invoke(capsys, "chi", "--q", "7", "--g", "2", "--delta", "1", "t-3")
    assert json.loads(out)["chi"] == "t+1"


def test_order_and_estimate(capsys):
    code, out, _ = invoke(capsys, "order", "--q", "101", "--seed", "3", "--alpha", "1", "t^3+t+1")
    assert code == 0
    doc = json.loads(out)
    assert "order" in doc or "found_factor" in doc
    code, out, _ = invoke(capsys, "estimate-degree", "--q", "101", "--seed", "3", "(t^2+2)*(t^3+t+1)")
    assert code == 0
    doc = json.loads(out)
    assert doc.get("smallest_degree") == 2 or "found_factor" in doc
    code, out, _ = invoke(capsys, "estimate-degree", "--q", "7", "--estimator", "carlitz", "(t^2+1)*(t^3+t+1)")
    assert json.loads(out)["smallest_degree_estimate"] == 2


def test_experiment_text_format(capsys):
    code, out, _ = invoke(capsys, "experiment", "cyclicity", "--q", "101", "--trials", "20", "--seed", "4",
                          "--format", "text", "t+5")
    assert code == 0
    assert out.splitlines()[0] == "experiment=cyclicity"


def test_exit_codes(capsys):
    assert invoke(capsys, "factor", "--q", "2", "--algo", "drinfeld-chi", "t^2+t")[0] == 1
    assert invoke(capsys, "factor", "--q", "2", "--algo", "classical", "--seed", "0", "t^2+t")[0] == 0
    assert invoke(capsys, "factor", "--q", "5", "t+9")[0] == 1
    assert invoke(capsys, "factor", "--q", "5", "3")[0] == 1
    assert invoke(capsys, "factor", "--q", "5", "t^^2")[0] == 1
    assert invoke(capsys, "factor", "--q", "5", "--algo", "bogus", "t")[0] == 1
    assert invoke(capsys, "experiment", "cyclicity", "--q", "7", "t^2-1")[0] == 1


def test_budget_exhaustion_exit_code(capsys, monkeypatch):
    from drinfeld_factor import cli
    from drinfeld_factor.factor import BudgetExhausted

    def boom(*a, **k):
        raise BudgetExhausted("no progress")

    monkeypatch.setattr(cli, "factor", boom)
    code, _, err = invoke(capsys, "factor", "--q", "101", "--seed", "0", "t^2+1")
    assert code == 2 and "no progress" in err


def test_stdin_and_out_file(capsys, monkeypatch, tmp_path):
    monkeypatch.setattr(sys, "stdin", io.StringIO("t^2-1\n"))
    dest = tmp_path / "r.json"
    code, out, _ = invoke(capsys, "factor", "--q", "7", "--seed", "5", "--out", str(dest), "-")
    assert code == 0 and out == ""
    assert [f["poly"] for f in json.loads(dest.read_text())["factors"]] == ["t+1", "t+6"]


@pytest.mark.parametrize("argv", [
    ["factor", "--q", "101", "--algo", "drinfeld-berlekamp", "t^9+3*t^4+t+7"],
    ["order", "--q", "101", "t^5+t+1"],
    ["experiment", "success-rate", "--q", "257", "--trials", "30", "(t-1)*(t^2+3)"],
    ["experiment", "split-balance", "--q", "101", "--trials", "20", "(t^2+2)*(t^3+t+1)"],
    ["bench", "--q", "101", "--degrees", "6", "--count", "2"],
])
def test_same_seed_byte_identical(capsys, argv):
    _, a, _ = invoke(capsys, *argv, "--seed", "42")
    _, b, _ = invoke(capsys, *argv, "--seed", "42")
    assert a == b and a


def test_threads_do_not_change_output(capsys):
    argv = ["experiment", "cyclicity", "--q", "101", "--trials", "40", "--seed", "6", "t^2+2"]
    _, a, _ = invoke(capsys, *argv)
    _, b, _ = invoke(capsys, *argv, "--threads", "3")
    assert a == b


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "drinfeld_factor", "factor", "--q", "101", "--seed", "1", "t^2+1"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["factors"][0]["poly"] == "t+10"
