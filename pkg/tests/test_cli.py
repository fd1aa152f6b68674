import json

import pytest

from markovcoha.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_bps_report(capsys):
    rep = run_json(capsys, "bps", "--preset", "markov-gen")
    assert rep["conventions"]["twist"] == "antisymmetric"
    om = rep["omega"]
    for k in ("1,0,0", "0,1,0", "0,0,1"):
        assert om[k]["coeffs"] == {"h:0": "1"}
    assert om["1,1,0"]["coeffs"] == {"h:-1": "-1", "h:1": "-1"}
    assert om["1,0,1"]["coeffs"] == {}
    assert om["1,1,1"]["pretty"] == "2"
    assert "note" in rep


def test_depcheck(capsys):
    rep = run_json(capsys, "depcheck", "--preset", "markov-gen", "--against", "markov-marg")
    assert rep["omega_difference"]["pretty"] == "1"
    assert rep["omega"]["markov-marg"]["pretty"] == "1"
    same = run_json(capsys, "depcheck", "--preset", "markov-marg", "--against", "markov-marg")
    assert same["omega_difference"]["coeffs"] == {}
    assert same["coefficient_difference"]["series"]["coeffs"] == {}


def test_zseries_and_factorize(capsys):
    z = run_json(capsys, "zseries", "--preset", "markov-w0", "--box", "1,0,0", "--order", "6")
    assert z["coefficients"]["0,0,0"]["pretty"] == "1"
    f = run_json(capsys, "factorize", "--preset", "markov-marg")
    assert len(f["factors"]) >= 3


def test_pointcount(capsys):
    rep = run_json(capsys, "pointcount", "--preset", "markov-marg")
    assert rep["count_polynomial"]["pretty"].replace(" ", "") in {"3q^2-2q", "-2q+3q^2"}
    assert len(rep["samples"]) >= 3


def test_spherical_and_ginv(capsys):
    rep = run_json(capsys, "spherical", "--preset", "markov-gen", "--nmax", "5")
    assert rep["spherical"]["1"] == 3 and rep["spherical"]["5"] == 12
    assert rep["verdict"] == "coha_larger(n=1, gap=1)"
    g = run_json(capsys, "ginv", "--nmax", "9")
    assert g["verdict"].startswith("equal")


def test_mutation_commands(capsys):
    rep = run_json(capsys, "mutate", "--preset", "markov-marg", "--vertices", "2,1")
    assert [s["germ_type"] for s in rep["steps"]] == ["T4", "T4"]
    assert all(s["two_cycle"] is None for s in rep["steps"])
    m = run_json(capsys, "mutability", "--preset", "markov-case1", "--depth", "1")
    assert m["verdict"] == "obstructed" and len(m["word"]) == 1
    c = run_json(capsys, "classify-cubic", "--preset", "markov-marg")
    assert c["germ_type"] == "T4" and c["hyperdeterminant"] == "0"


def test_pretty_output_and_file(capsys, tmp_path):
    code, out, _ = run(capsys, "classify-cubic", "--preset", "markov-gen", "--pretty")
    assert code == 0 and "T5" in out
    target = tmp_path / "rep.json"
    code, out, _ = run(capsys, "classify-cubic", "--preset", "markov-gen", "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["germ_type"] == "T5"


def test_input_file(capsys, tmp_path):
    path = tmp_path / "qp.json"
    path.write_text(
        json.dumps(
            {
                "vertices": ["1", "2", "3"],
                "arrows": [{"name": f"{x}{i}", "from": s, "to": t} for x, s, t in (("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")) for i in (1, 2)],
                "potential": [{"coeff": "1", "cycle": ["c1", "b1", "a1"]}],
            }
        )
    )
    rep = run_json(capsys, "classify-cubic", "--input", str(path))
    assert rep["germ_type"] == "T2"


@pytest.mark.parametrize(
    "argv",
    [
        ["bps", "--box", "1,x,1"],
        ["bps", "--box", "1,1"],
        ["bps", "--primes", "4,5"],
        ["pointcount", "--preset", "markov-w0"],
        ["mutate", "--vertices", "7"],
        ["mutability", "--depth", "0"],
        ["bps", "--input", "/nonexistent/qp.json"],
    ],
)
def test_bad_input_exit_code(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error [")


def test_selftest_subset(capsys):
    rep = run_json(capsys, "selftest", "--only", "bps_low,marg_calc")
    assert rep["passed"] and [c["key"] for c in rep["checks"]] == ["bps_low", "marg_calc"]
    assert rep["seed"]


def test_selftest_detects_twist_change(capsys):
    code, out, _ = run(capsys, "selftest", "--only", "coeff_calc", "--twist", "euler")
    assert code == 1
    assert json.loads(out)["checks"][0]["passed"] is False


def test_selftest_detects_normalization_change(capsys):
    code, out, _ = run(capsys, "selftest", "--only", "marg_calc", "--normalization", "full-euler")
    assert code == 1
    assert json.loads(out)["checks"][0]["passed"] is False
