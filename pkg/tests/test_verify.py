import json

import numpy as np
import pytest

from rsclifford.cli import main
from rsclifford.errors import ConfigError
from rsclifford.verify import (DEFAULT, KNOWN_FAILING, SUITE_NAMES, Case, SuiteReport, VerifyConfig, dump,
                               parse_config, run_all, run_suite)


def test_default_config():
    assert DEFAULT.suites == SUITE_NAMES
    assert DEFAULT.n == 3 and DEFAULT.k == (1, 2) and DEFAULT.order == 24


def test_parse_config():
    cfg = parse_config("[verify]\n# comment\nsuite = stokes, cif\nk = 1\norder = 12\ntol_integral = 1e-6\n")
    assert cfg.suites == ("stokes", "cif") and cfg.k == (1,) and cfg.order == 12
    assert cfg.tol_integral == 1e-6
    assert parse_config("suite = all").suites == SUITE_NAMES
    assert parse_config("suite =").suites == ()


@pytest.mark.parametrize("text,field", [
    ("tol-pointwise = abc", "tol_pointwise"),
    ("tol-integral = -1", "tol_integral"),
    ("order = 2", "order"),
    ("n = 9", "n"),
    ("k = 5", "k"),
    ("suite = nope", "suite"),
    ("colour = red", "colour"),
    ("just text", "expected 'key = value'"),
])
def test_config_errors_name_field(text, field):
    with pytest.raises(ConfigError) as e:
        parse_config("seed = 1\n" + text, "cfg.txt")
    assert field in str(e.value)
    assert "cfg.txt" in str(e.value)


def test_bool_tolerance_rejected():
    with pytest.raises(ConfigError):
        VerifyConfig(tol_pointwise=True)


def test_case_pass_semantics():
    assert Case("a", 1e-7, 1e-6).passed
    assert Case("a", 1e-6, 1e-6).passed
    assert not Case("a", 2e-6, 1e-6).passed
    assert not Case("a", float("nan"), 1.0).passed
    assert Case("a", float("nan"), 1.0).to_json()["residual"] == "nan"


def test_report_schema_and_order():
    r = SuiteReport("x", {"n": 3, "k": np.int64(2)})
    r.add("b", 0.1, 1.0)
    r.add("a", 2.0, 1.0)
    d = r.to_json()
    assert set(d) == {"suite", "params", "cases", "wall_ms"}
    assert [c["name"] for c in d["cases"]] == ["a", "b"]
    assert set(d["cases"][0]) == {"name", "residual", "tol", "pass"}
    assert not r.passed
    json.dumps(d)
    assert "FAIL" in r.to_text() and "PASS" in r.to_text()
    assert json.loads(dump([r, r]))[1]["suite"] == "x"


def test_empty_suite_list():
    assert run_all(VerifyConfig(suites=())) == []


def test_reproducing_suite_deterministic():
    cfg = VerifyConfig(suites=("reproducing",), k=(1,))
    a = [r.to_json() for r in run_all(cfg)]
    b = [r.to_json() for r in run_all(cfg)]
    for x in a + b:
        x.pop("wall_ms")
    assert a == b
    assert all(c["pass"] and c["residual"] == 0 for c in a[0]["cases"])


def test_pk_invariance_deterministic():
    a = run_suite("pk-invariance", 3, 1, VerifyConfig(seed=3))
    b = run_suite("pk-invariance", 3, 1, VerifyConfig(seed=3))
    assert [c.residual for c in a.cases] == [c.residual for c in b.cases]
    assert a.passed
    with pytest.raises(KeyError):
        run_suite("nope", 3, 1)


def test_known_failing_names_exist():
    for suite, case in KNOWN_FAILING:
        assert suite in SUITE_NAMES and case


# CLI

def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_verify_json(capsys, tmp_path):
    code, out, err = run_cli(capsys, "verify", "--suite", "reproducing", "--k", "0,1", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert [d["params"]["k"] for d in data] == [0, 1]
    assert all(set(d) == {"suite", "params", "cases", "wall_ms"} for d in data)
    assert "[PASS] reproducing" in err
    path = tmp_path / "r.json"
    assert main(["verify", "--suite", "reproducing", "--k", "1", "--format", "json", "--out", str(path),
                 "--quiet"]) == 0
    assert json.loads(path.read_text())["suite"] == "reproducing"


def test_cli_verify_config_file(capsys, tmp_path):
    cfg = tmp_path / "v.cfg"
    cfg.write_text("suite =\n")
    code, out, _ = run_cli(capsys, "verify", "--config", str(cfg), "--format", "json")
    assert code == 0 and json.loads(out) == []
    cfg.write_text("tol-integral = big\n")
    code, _, err = run_cli(capsys, "verify", "--config", str(cfg))
    assert code == 2 and "tol_integral" in err


def test_cli_verify_fails_with_tight_tolerance(capsys):
    code, out, _ = run_cli(capsys, "verify", "--suite", "pk-invariance", "--k", "1", "--tol-pointwise", "1e-30",
                           "--format", "json", "--quiet")
    assert code == 1
    assert not all(c["pass"] for c in json.loads(out)["cases"])


def test_cli_basis(capsys):
    code, out, _ = run_cli(capsys, "basis", "--n", "3", "--k", "2", "--kind", "harmonic", "--format", "json")
    assert code == 0 and len(json.loads(out)["elements"]) == 5
    code, out, _ = run_cli(capsys, "basis", "--n", "3", "--k", "1")
    assert code == 0 and len(out.strip().splitlines()) == 32
    with pytest.raises(SystemExit):
        main(["basis", "--n", "3", "--k", "4"])


def test_cli_cayley(capsys):
    code, out, _ = run_cli(capsys, "cayley", "--point", "1/2,0,1")
    assert code == 0 and out.strip() == "-4/9, 0, -8/9, 1/9"
    code, out, _ = run_cli(capsys, "cayley", "--point=-4/9,0,-8/9,1/9", "--inverse")
    assert out.strip() == "1/2, 0, 1"
    code, _, err = run_cli(capsys, "cayley", "--point", "0,0,0,1", "--inverse")
    assert code == 2 and "singular" in err


def test_cli_apply(capsys, tmp_path):
    from rsclifford.poly_algebra import CliffordPolynomial
    u = CliffordPolynomial.vector_variable(4, (("u", 3),), "u")
    path = tmp_path / "p.json"
    path.write_text(json.dumps(u.to_json()))
    code, out, _ = run_cli(capsys, "apply", "--op", "dirac", "--n", "3", "--k", "1", "--input", str(path))
    assert code == 0
    assert CliffordPolynomial.from_json(json.loads(out)) == CliffordPolynomial.constant(4, u.blocks, -3)
    code, _, err = run_cli(capsys, "apply", "--op", "rks", "--n", "3", "--k", "1", "--input", str(path))
    assert code == 2


def test_cli_kernels(capsys):
    code, out, _ = run_cli(capsys, "zk", "--n", "3", "--k", "0", "--format", "json")
    assert code == 0 and json.loads(out)["omega_power"] == -1
    code, out, _ = run_cli(capsys, "ek", "--n", "3", "--k", "1", "--y", "1/2,0,0")
    assert code == 0 and "omega_3" in out
    x, y = "0.6,0,0.8,0", "0,0,0,-1"
    code, out, _ = run_cli(capsys, "eks", "--x", x, "--y", y, "--k", "1")
    right = json.loads(out)["value"]
    code, out, _ = run_cli(capsys, "eks", "--x", x, "--y", y, "--k", "1", "--representation", "left")
    left = json.loads(out)["value"]
    for key in set(right) | set(left):
        assert abs(right.get(key, 0) - left.get(key, 0)) < 1e-12
    code, out, _ = run_cli(capsys, "proj-kernel", "--x", x, "--y", y, "--k", "1", "--bundle", "2")
    assert code == 0 and json.loads(out)["bundle"] == 2
    code, _, err = run_cli(capsys, "eks", "--x", x, "--y", x)
    assert code == 2


def test_cli_quad(capsys):
    code, out, _ = run_cli(capsys, "quad", "--surface", "boundary", "--center", "0,0,0,1", "--radius", "1.5707963267948966",
                           "--order", "20", "--format", "text")
    assert code == 0 and "measure=12.566370614359" in out
    code, out, _ = run_cli(capsys, "quad", "--surface", "cap", "--center", "0,0,0,1", "--radius", "0.5", "--order", "4")
    d = json.loads(out)
    assert d["kind"] == "cap" and len(d["nodes"]) == len(d["weights"])
