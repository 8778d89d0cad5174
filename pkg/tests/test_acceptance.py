"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Criteria whose reference values do not hold are implemented as stated and
left failing; see the decisions ledger for the analysis.
"""
import cmath
import time
from fractions import Fraction

import numpy as np

from sigma3 import flows
from sigma3.curvering import (
    U_RING,
    CurveParams,
    QuotCtx,
    SYMBOLIC,
    build_H,
    ideal_T_member,
    random_symmetric_poly,
    sample_sym_square,
    symmetrize,
    verify_theorem_5_1,
)
from sigma3.dynsys import conservation_identities, lie_bracket, make_integrals, make_system
from sigma3.sigmalimit import (
    G_NAMES,
    SeedSpec,
    check_Lkl_commutators,
    example2_exact,
    example2_initial,
    example2_series_check,
    example3_curve,
    example3_exact,
    example3_initial,
    sigma_sw,
    solve_phi,
    verify_series_solution,
)

Y0 = [0, 0, 0, 0]


def _rel_err(got, exact):
    got, exact = np.asarray(got), np.asarray(exact)
    return float(np.max(np.abs(got - exact) / np.abs(exact)))


def test_c01_derivation_identities(criterion):
    t0 = time.perf_counter()
    res = verify_theorem_5_1()
    dt = time.perf_counter() - t0
    zero = sum(r.ok for r in res)
    ok = len(res) == 8 and zero == 8 and dt < 30
    assert criterion(1, "L3*/L5* identities exact in the localized quotient ring", ok,
                     f"{zero}/8 zero residuals, {dt:.2f}s (limit 30s)")


def test_c02_conservation(criterion):
    t0 = time.perf_counter()
    ids = conservation_identities()
    dt = time.perf_counter() - t0
    zero = sum(p.is_zero() for p in ids.values())
    ok = len(ids) == 4 and zero == 4 and dt < 10
    assert criterion(2, "Lie derivatives of I12, I14 along both systems vanish", ok,
                     f"{zero}/4 exact zeros, {dt:.2f}s (limit 10s)")


def test_c03_commuting_flows(criterion):
    symbolic = lie_bracket(make_system("I"), make_system("II")).is_zero()
    worst, bad, blown = 0.0, [], []
    for i in range(20):
        rng = np.random.default_rng([303, i])
        y = rng.uniform(-1, 1, 6)
        pt = sample_sym_square(CurveParams.numeric(y), rng)
        a = 0.2 * rng.uniform() * cmath.exp(2j * np.pi * rng.uniform())
        b = 0.2 * rng.uniform() * cmath.exp(2j * np.pi * rng.uniform())
        try:
            s1 = flows.flow_compose("I", a, "II", b, pt.u, y[:4])
            s2 = flows.flow_compose("II", b, "I", a, pt.u, y[:4])
        except flows.FlowError:
            blown.append(i)  # not "away from blow-up"
            continue
        d = float(np.max(np.abs(s1 - s2)))
        worst = max(worst, d)
        if d >= 1e-6:
            bad.append(i)
    ok = symbolic and not bad
    assert criterion(3, "[V_I, V_II] = 0 and flow-order swap within 1e-6", ok,
                     f"symbolic bracket zero={symbolic}; numeric max diff {worst:.2e} over "
                     f"{20 - len(blown)} runs, draws over 1e-6: {bad}, blow-ups skipped: {blown}")


def test_c04_example1_phi(criterion):
    t0 = time.perf_counter()
    phi = solve_phi(SeedSpec("p_zero"), 12)
    dt = time.perf_counter() - t0
    got = {k: phi.coefficient(k) for k in (2, 7, 12)}
    printed = {2: Fraction(1), 7: Fraction(1, 3), 12: Fraction(44, 45)}
    ok = got == printed and dt < 5
    assert criterion(4, "phi(t) for p = 0 has coefficients 1, 1/3, 44/45 at t^2, t^7, t^12", ok,
                     f"got {', '.join(str(got[k]) for k in (2, 7, 12))}, {dt:.2f}s (limit 5s)")


def test_c05_example2(criterion):
    exact = example2_series_check(8)
    tr = flows.integrate("II", example2_initial(), Y0, 0.5)
    err = _rel_err(tr.final.state, example2_exact(0.5))
    ok = all(exact.values()) and err < 1e-8
    assert criterion(5, "seed p^5 = -45: series through order 8 and flow to tau = 0.5", ok,
                     f"exact slices {sum(exact.values())}/4, numeric rel err {err:.2e} (limit 1e-8)")


def test_c06_example3(criterion):
    ex = example3_curve(6)
    tr = flows.integrate("I", example3_initial("printed"), Y0, 0.5)
    err = _rel_err(tr.final.state, example3_exact(0.5, "printed"))
    matched = [k for k, v in ex.matches_printed.items() if v]
    ok = all(ex.matches_printed.values()) and err < 1e-8
    assert criterion(6, "q-path F series and system (I) flow against the printed closed forms", ok,
                     f"exact matches {matched} of 4, numeric rel err {err:.2e} (limit 1e-8)")


def test_c07_series_solutions(criterion):
    counts = {}
    for seed, through in (("p_zero", 11), ("p_root5", 7)):
        res = verify_series_solution(SeedSpec(seed), through + 1)
        counts[seed] = sum(r.is_zero() for r in res.values())
    ok = counts == {"p_zero": 8, "p_root5": 8}
    assert criterion(7, "8 residual series vanish (p = 0 through 11, p^5 = -45 through 7)", ok,
                     f"zero residuals {counts}")


def test_c08_symmetrization(criterion):
    ctx = QuotCtx(SYMBOLIC)
    trips = integral = 0
    for i in range(200):
        f = random_symmetric_poly(np.random.default_rng([808, i]), max_degree=8)
        s = symmetrize(f)
        trips += ctx.from_u(s) == ctx.from_xy(f)
        integral += s.is_integral()
    ok = trips == 200 and integral == 200
    assert criterion(8, "symmetrize round-trips and preserves integrality", ok,
                     f"round trips {trips}/200, integer outputs {integral}/200")


def _random_u_poly(rng, nterms=4, max_exp=2):
    out = U_RING.zero()
    while out.is_zero():
        for _ in range(nterms):
            e = {n: int(rng.integers(0, max_exp + 1)) for n in ("u2", "u4", "u5", "u7")}
            out = out + U_RING.monomial(e, int(rng.integers(-5, 6)))
    return out


def test_c09_ideal_membership(criterion):
    rng = np.random.default_rng(909)
    cp = CurveParams.numeric(rng.uniform(-1, 1, 6))
    H12, H14 = build_H()
    members = [H12, H14] + [_random_u_poly(rng) * H12 + _random_u_poly(rng) * H14 for _ in range(20)]
    others = [_random_u_poly(rng) for _ in range(20)]
    verdicts = [ideal_T_member(f, cp, trials=100, seed=k) for k, f in enumerate(members)]
    worst = max(v.max_residual for v in verdicts)
    n_in = sum(v.member for v in verdicts)
    n_out = sum(not ideal_T_member(f, cp, trials=100, seed=k).member for k, f in enumerate(others))
    ok = n_in == 22 and n_out == 20 and worst < 1e-9
    assert criterion(9, "H12, H14 and T-combinations are members; generic polynomials are not", ok,
                     f"members {n_in}/22 (max residual {worst:.1e}), non-members {n_out}/20")


def test_c10_grading(criterion):
    H12, H14 = build_H()
    I12, I14 = (i.value for i in make_integrals())
    expected = {"H12": (H12, 12), "H14": (H14, 14), "I12": (I12, 12), "I14": (I14, 14),
                "sigma_SW": (sigma_sw().sigma, -6)}
    for sysname, shift in (("I", 3), ("II", 5)):
        for g, comp in zip(G_NAMES, make_system(sysname).components):
            expected[f"{sysname}:{g}"] = (comp, int(g[1:]) + shift)
    bad = [k for k, (p, d) in expected.items() if p.weighted_degree() != (True, d)]
    assert criterion(10, "homogeneity audit", not bad,
                     f"{len(expected) - len(bad)}/{len(expected)} objects at their stated degree; bad: {bad}")


def test_c11_lemma_brackets(criterion):
    res = check_Lkl_commutators()
    zero = [k for k, comps in res.items() if all(c.is_zero() for c in comps)]
    ok = len(res) == 3 and len(zero) == 3
    assert criterion(11, "[L13,L53], [L15,L35], [L31,L51] vanish for sigma_SW", ok,
                     f"{len(zero)}/3 zero: {zero}")


def test_c12_drift(criterion):
    worst, bad = 0.0, []
    for i in range(50):
        rng = np.random.default_rng([2024, i])
        y = rng.uniform(-1, 1, 6)
        pt = sample_sym_square(CurveParams.numeric(y), rng)
        system = "I" if i % 2 == 0 else "II"
        t_end = rng.uniform(0, 1) * cmath.exp(1j * rng.uniform(0, 2 * np.pi))
        try:
            d = max(flows.drift_report(flows.integrate(system, pt.u, y[:4], t_end)))
        except flows.FlowError:
            d = float("inf")
        worst = max(worst, d)
        if not d < 1e-7:
            bad.append(i)
    assert criterion(12, "relative drift of I12, I14 below 1e-7 on 50 random runs", not bad,
                     f"max drift {worst:.2e}; runs over 1e-7: {bad}")
