import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sigma3.exactalg import (
    AlgExt,
    ExtensionMismatch,
    Poly,
    PolyRing,
    RingMismatch,
    Series2,
    SeriesError,
    binomial_series,
    divide_by_difference,
    eval_generic,
    format_poly,
    p_extension,
    parse_rational,
    poly_arith,
    q_extension,
    scalar_from_json,
    scalar_inverse,
    scalar_to_json,
    series_newton_root,
    substitute,
    weighted_degree,
)

R = PolyRing.of((("a", 1), ("b", 2), ("c", 3)))
a, b, c = R.gens()

small = st.integers(-5, 5)
exps = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(exps, small, max_size=6).map(lambda d: Poly(R, d))


@given(polys, polys, polys)
def test_ring_laws(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == R.zero()


@given(polys, polys)
def test_evaluation_is_a_homomorphism(p, q):
    pt = {"a": Fraction(1, 2), "b": Fraction(-3), "c": Fraction(2, 7)}
    ev = lambda f: eval_generic(f, pt, Fraction(0), Fraction(1))
    assert ev(p * q) == ev(p) * ev(q)
    assert ev(p + q) == ev(p) + ev(q)


@given(polys)
def test_diff_leibniz(p):
    q = a * b + c ** 2
    assert (p * q).diff("b") == p.diff("b") * q + p * q.diff("b")


def test_weighted_degree():
    assert weighted_degree(a * b + c) == (True, 3)
    assert weighted_degree(a + b) == (False, None)
    assert weighted_degree(R.const(7)) == (True, 0)


def test_ring_mismatch():
    S = PolyRing.of((("a", 1),))
    with pytest.raises(RingMismatch):
        poly_arith(a, S.gen("a"), "add")


def test_substitute_and_format():
    p = a ** 2 - 2 * b + Fraction(1, 3) * c
    assert str(p) == format_poly(p)
    q = substitute(p, {"a": b + 1})
    assert q == (b + 1) ** 2 - 2 * b + Fraction(1, 3) * c
    with pytest.raises(TypeError):
        substitute(p, {"a": 1, "b": 2, "c": 3})


@given(polys)
def test_divide_by_difference(p):
    quo, rem = divide_by_difference(p, "a", "b")
    assert quo * (a - b) + rem == p
    assert rem.degree_in("a") <= 0


def test_parse_rational():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert parse_rational("7") == 7


def test_p_extension():
    ext = p_extension()
    p = ext.gen()
    assert p ** 5 == -45
    assert abs(complex(p) - (-45 ** 0.2)) < 1e-12
    assert abs(complex(p) + 2.1411) < 1e-4


def test_q_extension():
    ext = q_extension()
    q = ext.gen()
    assert q ** 6 == 15 * q ** 3 + 45
    z = complex(q)
    assert abs(z.imag) < 1e-12
    assert abs(z.real ** 3 - (15 + math.sqrt(405)) / 2) < 1e-9


@given(st.lists(st.integers(-9, 9), min_size=5, max_size=5))
def test_alg_inverse(coords):
    ext = p_extension()
    x = ext.elem(coords)
    if not x:
        return
    assert x * scalar_inverse(x) == 1
    assert abs(complex(x) * complex(x.inverse()) - 1) < 1e-9


def test_extension_mismatch():
    with pytest.raises(ExtensionMismatch):
        p_extension().gen() + q_extension().gen()


def test_alg_ext_rejects_non_monic():
    with pytest.raises(ValueError):
        AlgExt("r", (1, 2))


def test_scalar_json_roundtrip():
    ext = q_extension()
    x = ext.elem([1, Fraction(-2, 3), 0, 5])
    assert scalar_from_json(scalar_to_json(x), {"q": ext}) == x
    assert scalar_from_json(scalar_to_json(Fraction(4, 9))) == Fraction(4, 9)


@pytest.mark.parametrize("alpha", [Fraction(1, 3), Fraction(-2, 5), Fraction(-7, 3), 2])
def test_binomial_series(alpha):
    s = binomial_series(alpha, 8)
    for k in range(9):
        expected = Fraction(1)
        for j in range(k):
            expected *= (Fraction(alpha) - j) / (j + 1)
        assert s.coefficient(k) == expected
    assert binomial_series(2, 8) == (Series2.var(0, 8) + 1) ** 2


def test_binomial_series_power_law():
    x = binomial_series(Fraction(1, 3), 10)
    assert x ** 3 == Series2.var(0, 10) + 1


def test_series_reciprocal_and_division():
    t, tau = Series2.var(0, 6), Series2.var(1, 6)
    s = 1 + t + 3 * tau ** 2
    assert s * s.reciprocal() == s.one_like()
    with pytest.raises(SeriesError):
        t.reciprocal()


def test_series_diff():
    t, tau = Series2.var(0, 5), Series2.var(1, 5)
    s = t ** 3 * tau + tau ** 2
    assert s.diff(0) == (3 * t ** 2 * tau).truncate(4)
    assert s.diff(1) == (t ** 3 + 2 * tau).truncate(4)


def test_newton_root_cube_root():
    W = PolyRing.of((("x", 1), ("t", 1)))
    x, t = W.gens()
    phi = series_newton_root(x ** 3 - 1 - t, "x", {"t": Series2.var(0, 9)}, 1, 9)
    assert phi == binomial_series(Fraction(1, 3), 9)


def test_newton_root_bad_seed():
    W = PolyRing.of((("x", 1), ("t", 1)))
    x, t = W.gens()
    with pytest.raises(SeriesError):
        series_newton_root(x ** 2 - 1 - t, "x", {"t": Series2.var(0, 4)}, 2, 4)
    with pytest.raises(SeriesError):
        series_newton_root(x ** 2 - t, "x", {"t": Series2.var(0, 4)}, 0, 4)
