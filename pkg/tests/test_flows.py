import cmath
import json

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from sigma3 import flows
from sigma3.curvering import CurveParams, sample_sym_square
from sigma3.dynsys import compile_field, make_system
from sigma3.flows import CoincidentX, FlowError, OffCurvePoint
from sigma3.sigmalimit import example2_exact, example2_initial

Y0 = [0, 0, 0, 0]


def _random_start(seed):
    rng = np.random.default_rng(seed)
    y = rng.uniform(-1, 1, 6)
    pt = sample_sym_square(CurveParams.numeric(y), rng)
    return pt.u, list(y[:4])


def test_zero_time():
    tr = flows.integrate("I", [1, 2, 3, 4], Y0, 0)
    assert len(tr.samples) == 1
    assert np.all(tr.final.state == np.array([1, 2, 3, 4]))


def test_bad_inputs():
    with pytest.raises(ValueError):
        flows.integrate("I", [1, 2, 3], Y0, 1)
    with pytest.raises(ValueError):
        flows.integrate("I", [1, 2, 3, float("nan")], Y0, 1)
    with pytest.raises(ValueError):
        flows.integrate("I", [1, 2, 3, 4], Y0, 1, rel_tol=0)


def test_example2_closed_form():
    tr = flows.integrate("II", example2_initial(), Y0, 0.5)
    exact = np.array(example2_exact(0.5))
    assert np.max(np.abs(tr.final.state - exact) / np.abs(exact)) < 1e-8
    assert max(flows.drift_report(tr)) < 1e-10


def test_example2_complex_time():
    t = 0.3 * cmath.exp(0.7j)
    tr = flows.integrate("II", example2_initial(), Y0, t)
    exact = np.array(example2_exact(t))
    assert np.max(np.abs(tr.final.state - exact) / np.abs(exact)) < 1e-8


@pytest.mark.parametrize("system", ["I", "II"])
def test_against_scipy(system):
    u, y = _random_start(11)
    t_end = 0.4 * cmath.exp(1.1j)
    field = compile_field(make_system(system), y)
    ref = solve_ivp(lambda s, v: t_end * field(v), (0, 1), np.array(u, dtype=complex),
                    method="DOP853", rtol=1e-12, atol=1e-14)
    ours = flows.integrate(system, u, y, t_end).final.state
    assert np.max(np.abs(ours - ref.y[:, -1])) < 1e-8 * max(1, np.max(np.abs(ref.y[:, -1])))


def test_fifth_order_convergence():
    # fixed steps: loose tolerances so that max_step controls the step size
    kw = dict(rel_tol=1.0, abs_tol=1.0)
    exact = np.array(example2_exact(0.5))
    errs = []
    for h in (0.1, 0.05):
        st = flows.integrate("II", example2_initial(), Y0, 0.5, max_step=h, **kw).final.state
        errs.append(np.max(np.abs(st - exact)))
    assert errs[0] / errs[1] > 16


def test_tolerance_halving_reduces_error():
    exact = np.array(example2_exact(0.5))
    errs = []
    for tol in (1e-6, 5e-7):
        st = flows.integrate("II", example2_initial(), Y0, 0.5, rel_tol=tol, abs_tol=tol / 100,
                             max_step=1.0).final.state
        errs.append(np.max(np.abs(st - exact)))
    assert errs[1] < errs[0]


def test_drift_random_start():
    u, y = _random_start(5)
    tr = flows.integrate("I", u, y, 0.3)
    assert max(flows.drift_report(tr)) < 1e-7


def test_blowup_raises():
    # G5' = -35 G2^4 - ... with G2' = -G5 runs off to infinity in finite time
    with pytest.raises(FlowError) as exc:
        flows.integrate("I", [3, 0, 0, 0], Y0, 10)
    assert exc.value.s_last < 1


def test_initial_from_curve_points():
    y6 = [0] * 6
    st = flows.initial_from_curve_points(y6, (1, 1), (4, 128))
    assert np.allclose(st, [2.5, 2.25, 127 / 3, 64.5])
    with pytest.raises(OffCurvePoint):
        flows.initial_from_curve_points(y6, (1, 2), (4, 128))
    with pytest.raises(CoincidentX):
        flows.initial_from_curve_points(y6, (1, 1), (1, -1))


def test_curve_points_flow_drift():
    y6 = [0, 0, 0, 0, 3, 0]
    st = flows.initial_from_curve_points(y6, (1, 2), (-1, 2j))
    tr = flows.integrate("I", st, y6[:4], 0.1, rel_tol=1e-11)
    assert max(flows.drift_report(tr)) < 1e-8


@pytest.mark.parametrize("seed", range(4))
def test_flows_commute_locally(seed):
    u, y = _random_start([99, seed])
    a, b = 0.05 * cmath.exp(1j * seed), 0.05 * cmath.exp(2j * seed)
    s1 = flows.flow_compose("I", a, "II", b, u, y)
    s2 = flows.flow_compose("II", b, "I", a, u, y)
    assert np.max(np.abs(s1 - s2)) < 1e-6 * max(1, np.max(np.abs(s1)))


def test_csv_and_json():
    tr = flows.integrate("II", example2_initial(), Y0, 0.1)
    lines = tr.to_csv().splitlines()
    assert lines[0].split(",")[:5] == ["s", "time_re", "time_im", "G2_re", "G2_im"]
    assert len(lines[0].split(",")) == 15
    assert len(lines) == len(tr.samples) + 1
    last = [float(x) for x in lines[-1].split(",")]
    assert last[0] == 1.0 and last[1] == 0.1
    js = json.loads(flows.trajectory_json(tr, {"system": "II"}))
    assert js["schema"] == "sigma3/v1"
    assert flows.cparse(js["samples"][-1]["state"][0]) == tr.final.state[0]


def test_cformat_roundtrip():
    z = complex(0.1, -1e-300)
    assert flows.cparse(flows.cformat(z)) == z
    assert flows.cparse("2.5") == 2.5
    with pytest.raises(ValueError):
        flows.cparse("1,2,3")
