import json
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sigma3.cli import ParseError, RunConfig, main, parse_poly
from sigma3.cli.presets import PRESET_NAMES, load_preset
from sigma3.curvering import XY_RING
from sigma3.exactalg import Poly, p_extension, q_extension
from sigma3.sigmalimit import _q_corrected, _q_printed, example2_table


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- parser ------------------------------------------------------------------

def test_parse_basics():
    X1, Y1, X2, Y2 = XY_RING.gens("X1", "Y1", "X2", "Y2")
    assert parse_poly("X1 + X2", XY_RING) == X1 + X2
    assert parse_poly("-(X1 - 2/3*Y2)^2", XY_RING) == -(X1 - Fraction(2, 3) * Y2) ** 2
    assert parse_poly("u7 − u4", XY_RING.__class__.of((("u7", 7), ("u4", 4)))).variables() == {"u4", "u7"}
    assert parse_poly("--X1", XY_RING) == X1


@pytest.mark.parametrize("text,pos", [
    ("X1 +", 4),
    ("X1 + * X2", 5),
    ("X1 + Z", 5),
    ("(X1 + X2", 8),
    ("X1 ^ X2", 5),
    ("1/0", 2),
    ("X1 $ X2", 3),
    ("", 0),
    ("X1 X2", 3),
])
def test_parse_errors_positioned(text, pos):
    with pytest.raises(ParseError) as exc:
        parse_poly(text, XY_RING)
    assert exc.value.pos == pos
    assert exc.value.caret().splitlines()[1].index("^") == pos


exps = st.tuples(*[st.integers(0, 3)] * 4 + [st.just(0)] * 6)
coeffs = st.fractions(min_value=-20, max_value=20, max_denominator=7)
xy_polys = st.dictionaries(exps, coeffs, max_size=6).map(lambda d: Poly(XY_RING, d))


@given(xy_polys)
def test_print_parse_round_trip(p):
    assert parse_poly(str(p), XY_RING) == p


@given(st.text(alphabet="X1Y2+-*^()/ 0379", max_size=25))
def test_parser_total(text):
    try:
        parse_poly(text, XY_RING)
    except ParseError as exc:
        assert 0 <= exc.pos <= len(text)


# -- config ------------------------------------------------------------------

@given(st.builds(RunConfig, command=st.sampled_from(["verify", "flow", "series"]),
                 y=st.none() | st.text(max_size=10), rel_tol=st.none() | st.floats(1e-14, 1),
                 order=st.none() | st.integers(1, 20), seed=st.none() | st.integers(0, 99)))
def test_config_round_trip(cfg):
    assert RunConfig.loads(cfg.dumps()) == cfg


def test_config_rejects_unknown():
    with pytest.raises(ValueError):
        RunConfig.from_json({"command": "flow", "bogus": 1})


# -- presets -----------------------------------------------------------------

def test_presets_match_tables():
    p, q = p_extension().gen(), q_extension().gen()
    tables = {"example2": example2_table(p), "example3": _q_printed(q), "example3_corrected": _q_corrected(q)}
    for name in PRESET_NAMES:
        pre = load_preset(name)
        for (g, c), (f, (c2, e2)) in zip(pre.coefficients.items(), tables[name].items()):
            assert g[1:] == f[1:]
            assert c == c2
            assert pre.exponents[g] == e2


# -- subcommands -------------------------------------------------------------

def test_verify_symbolic(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "symbolic")
    rep = json.loads(out)
    assert code == 0
    assert rep["schema"] == "sigma3/v1"
    assert len(rep["results"]) == 16
    assert all(r["status"] == "pass" for r in rep["results"])


def test_verify_numeric(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "numeric", "--trials", "100", "--seed", "7")
    assert code == 0
    assert all(r["status"] == "pass" for r in json.loads(out)["results"])


def test_verify_series(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "series", "--order", "8")
    assert code == 0
    assert all(r["status"] == "pass" for r in json.loads(out)["results"])


def test_flow_preset_example2(capsys):
    code, out, _ = run(capsys, "flow", "--preset", "example2", "--t-end", "0.5,0")
    meta = json.loads(out)["meta"]
    assert code == 0
    assert meta["preset"]["max_rel_error"] < 1e-8


def test_flow_preset_example3_printed_misses(capsys):
    code, out, _ = run(capsys, "flow", "--preset", "example3")
    assert json.loads(out)["meta"]["preset"]["max_rel_error"] > 1e-3
    code, out, _ = run(capsys, "flow", "--preset", "example3_corrected")
    assert json.loads(out)["meta"]["preset"]["max_rel_error"] < 1e-8


def test_flow_curve_points(capsys):
    code, out, _ = run(capsys, "flow", "--system", "I", "--y", "0,0,0,0",
                       "--from-curve-points", "1,0;1,0;4,0;128,0", "--t-end", "0.1,0",
                       "--rel-tol", "1e-11")
    drift = json.loads(out)["meta"]["drift"]
    assert code == 0 and max(drift.values()) < 1e-8


def test_flow_zero_time_csv(capsys):
    code, out, _ = run(capsys, "flow", "--init", "1,0;2,0;3,0;4,0", "--t-end", "0,0", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 2
    row = [float(x) for x in lines[1].split(",")]
    assert row[3:11:2] == [1.0, 2.0, 3.0, 4.0]


def test_flow_usage_errors(capsys):
    assert run(capsys, "flow", "--t-end", "1,0")[0] == 2
    assert run(capsys, "flow", "--from-curve-points", "1,0;5,0;4,0;128,0", "--t-end", "0.1,0")[0] == 2
    assert run(capsys, "flow", "--init", "1,0;2,0", "--t-end", "0.1,0")[0] == 2


def test_flow_blowup(capsys):
    code, out, err = run(capsys, "flow", "--init", "3,0;0,0;0,0;0,0", "--t-end", "10,0")
    assert code == 3
    assert json.loads(out)["kind"] == "blowup"
    assert "s=" in err


def test_series_p0(capsys):
    code, out, _ = run(capsys, "series", "--seed", "p0", "--order", "12")
    b = json.loads(out)
    assert code == 0 and b["status"] == "pass"
    phi = {(c["i"], c["j"]): c["value"] for c in b["phi"]["coefficients"]}
    assert b["phi_denominators_ok"]
    assert (phi[(2, 0)], phi[(7, 0)], phi[(12, 0)]) == ("1/1", "1/3", "14/45")


def test_series_q(capsys):
    code, out, _ = run(capsys, "series", "--seed", "q", "--order", "6")
    b = json.loads(out)
    assert code == 0
    assert b["matches_printed"] == {"F2": True, "F4": True, "F5": False, "F7": False}


def test_series_bad_order(capsys):
    assert run(capsys, "series", "--order", "0")[0] == 2


@pytest.mark.parametrize("expr,expected", [
    ("X1+X2", "2*u2"),
    ("Y1*Y2", "u7^2 - u4*u5^2"),
])
def test_symmetrize(capsys, expr, expected):
    code, out, _ = run(capsys, "symmetrize", expr)
    assert code == 0 and out.strip() == expected


def test_symmetrize_errors(capsys):
    code, _, err = run(capsys, "symmetrize", "X1*Y1 − X2*Y2")
    assert code == 2 and "asymmetric" in err
    code, _, err = run(capsys, "symmetrize", "X1 + ")
    assert code == 2 and "^" in err


def test_sample_level_set(capsys):
    code, out, _ = run(capsys, "sample", "--count", "10", "--seed", "1", "--y", "0,0,0,0,0,0")
    recs = json.loads(out)["records"]
    assert code == 0 and len(recs) == 10
    assert all(r["residual_I12"] < 1e-9 and r["residual_I14"] < 1e-9 for r in recs)
    code, out2, _ = run(capsys, "sample", "--count", "10", "--seed", "1", "--y", "0,0,0,0,0,0")
    assert out2 == out


def test_sample_y12(capsys):
    code, out, _ = run(capsys, "sample", "--count", "10", "--seed", "4", "--y", "0,0,0,0,3,0")
    recs = json.loads(out)["records"]
    assert all(abs(complex(*map(float, r["I12"].split(","))) - 3) < 1e-9 for r in recs)


def test_output_file(tmp_path, capsys):
    target = tmp_path / "s.json"
    assert main(["sample", "--count", "2", "--output", str(target)]) == 0
    assert json.loads(target.read_text())["config"]["count"] == 2


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "sigma3", "symmetrize", "X1*X2"],
                       capture_output=True, text=True, check=True)
    assert r.stdout.strip() == "-u4 + u2^2"
