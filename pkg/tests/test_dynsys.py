import numpy as np
import pytest

from sigma3.dynsys import (
    G_NAMES,
    G_RING,
    compile_field,
    compile_integrals,
    conservation_identities,
    constant_field,
    eval_field,
    eval_integrals,
    integrals_match_H,
    lie_bracket,
    lie_derivative,
    make_integrals,
    make_system,
    rhs_consistency,
)

G2, G4, G5, G7 = G_RING.gens(*G_NAMES)


def test_unknown_system():
    with pytest.raises(ValueError):
        make_system("III")


def test_rhs_consistency():
    assert all(rhs_consistency().values())


def test_integrals_match_H():
    assert all(integrals_match_H().values())


@pytest.mark.parametrize("key", ["I:I12", "I:I14", "II:I12", "II:I14"])
def test_conservation(key):
    assert conservation_identities()[key].is_zero()


def test_bracket_vanishes():
    assert lie_bracket(make_system("I"), make_system("II")).is_zero()


def test_bracket_detects_noncommuting():
    # a constant shift in the G2 direction does not commute with system I
    assert not lie_bracket(make_system("I"), constant_field([1, 0, 0, 0])).is_zero()


def test_grading():
    for name, shift in (("I", 3), ("II", 5)):
        for g, comp in zip(G_NAMES, make_system(name).components):
            assert comp.weighted_degree() == (True, int(g[1:]) + shift)
    I12, I14 = make_integrals()
    assert I12.value.weighted_degree() == (True, 12)
    assert I14.value.weighted_degree() == (True, 14)


def test_lie_derivative_of_coordinates():
    vf = make_system("I")
    assert lie_derivative(vf, G2) == -G5
    assert lie_derivative(vf, G4) == -2 * G7


def test_compiled_matches_exact():
    rng = np.random.default_rng(1)
    params = rng.uniform(-1, 1, 4) + 1j * rng.uniform(-1, 1, 4)
    states = rng.normal(size=(5, 4)) + 1j * rng.normal(size=(5, 4))
    for name in ("I", "II"):
        vf = make_system(name)
        batch = compile_field(vf, params)(states)
        for s, row in zip(states, batch):
            b = dict(zip(G_NAMES, s))
            b.update(zip(("y4", "y6", "y8", "y10"), params))
            exact = [c.evaluate(b) for c in vf.components]
            assert np.allclose(row, exact, rtol=1e-12)
            assert np.allclose(eval_field(vf, s, params), exact, rtol=1e-12)
    ci = compile_integrals(params)
    for s in states:
        assert np.allclose(ci(s), eval_integrals(s, params), rtol=1e-12)


def test_field_json():
    js = make_system("II").to_json()
    assert js["name"] == "II"
    assert set(js["components"]) == set(G_NAMES)
