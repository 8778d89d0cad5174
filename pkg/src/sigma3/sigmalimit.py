"""The rational limit y -> 0: Schur-Weierstrass sigma, the F-functions and exact series solutions."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .exactalg import (
    AlgElem,
    AlgExt,
    Poly,
    PolyRing,
    Series2,
    binomial_series,
    eval_generic,
    p_extension,
    q_extension,
    series_newton_root,
    scalar_inverse,
    substitute,
)

W_RING = PolyRing.of((("w1", -1), ("w3", -3), ("w5", -5)))
W_NAMES = ("w1", "w3", "w5")
F_NAMES = ("F2", "F4", "F5", "F7")
G_NAMES = ("G2", "G4", "G5", "G7")


def _w():
    return W_RING.gens()


# ---------------------------------------------------------------------------
# sigma and its partials


@dataclass(frozen=True)
class SigmaSW:
    sigma: Poly
    partials: dict[str, Poly]

    def check(self) -> dict[str, bool]:
        """Stored partials against symbolic derivatives of sigma."""
        out = {}
        for key, p in self.partials.items():
            d = self.sigma
            for idx in key:
                d = d.diff(f"w{idx}")
            out[f"sigma{key}"] = d == p
        return out


@lru_cache(maxsize=1)
def sigma_sw() -> SigmaSW:
    w1, w3, w5 = _w()
    sigma = w1 * w5 - w3 ** 2 - Fraction(1, 3) * w1 ** 3 * w3 + Fraction(1, 45) * w1 ** 6
    partials = {
        "1": w5 - w1 ** 2 * w3 + Fraction(2, 15) * w1 ** 5,
        "3": -2 * w3 - Fraction(1, 3) * w1 ** 3,
        "5": w1,
        "11": -2 * w1 * w3 + Fraction(2, 3) * w1 ** 4,
        "13": -(w1 ** 2),
        "15": W_RING.one(),
        "33": W_RING.const(-2),
        "35": W_RING.zero(),
    }
    return SigmaSW(sigma, partials)


# ---------------------------------------------------------------------------
# rational functions in w


class RatFun3:
    """numerator / denominator over the w-ring; equality by cross-multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        den = W_RING.one() if den is None else den
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self.num = num
        self.den = den

    @staticmethod
    def _c(x) -> "RatFun3":
        if isinstance(x, RatFun3):
            return x
        if isinstance(x, Poly):
            return RatFun3(x)
        return RatFun3(W_RING.const(x))

    def __add__(self, o):
        o = self._c(o)
        if self.den == o.den:
            return RatFun3(self.num + o.num, self.den)
        return RatFun3(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun3(-self.num, self.den)

    def __sub__(self, o):
        return self + (-self._c(o))

    def __rsub__(self, o):
        return self._c(o) - self

    def __mul__(self, o):
        o = self._c(o)
        return RatFun3(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._c(o)
        return RatFun3(self.num * o.den, self.den * o.num)

    def __pow__(self, k: int):
        return RatFun3(self.num ** k, self.den ** k)

    def __eq__(self, o):
        o = self._c(o)
        return self.num * o.den == o.num * self.den

    __hash__ = None

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def diff(self, name: str) -> "RatFun3":
        return RatFun3(self.num.diff(name) * self.den - self.num * self.den.diff(name), self.den ** 2)

    def evaluate(self, bindings: Mapping[str, object]):
        """Compose with scalars, complex numbers or series."""
        num, den = _compose(self.num, bindings), _compose(self.den, bindings)
        return num / den if isinstance(den, (Series2, complex, float)) else num * scalar_inverse(den)

    def __repr__(self):
        return f"RatFun3(({self.num}) / ({self.den}))"


def _compose(p: Poly, bindings: Mapping[str, object]):
    if not p.variables():
        c = p.constant_term()
        s = next((v for v in bindings.values() if isinstance(v, Series2)), None)
        return s.const_like(c) if s is not None else c
    if any(isinstance(v, (Series2, complex, float)) for v in bindings.values()):
        return substitute(p, bindings)
    return eval_generic(p, bindings, 0, 1)


def vanishes_on_W(p: Poly) -> bool:
    """True iff sigma divides ``p``; uses w5 = (w3^2 + w1^3 w3/3 - w1^6/45) / w1 on W."""
    w1, w3, _ = _w()
    g = w3 ** 2 + Fraction(1, 3) * w1 ** 3 * w3 - Fraction(1, 45) * w1 ** 6
    parts = p.coefficients_in("w5")
    k = max(parts) if parts else 0
    acc = W_RING.zero()
    for e, c in parts.items():
        acc = acc + c * g ** e * w1 ** (k - e)
    return acc.is_zero()


def equal_on_W(a: RatFun3, b: RatFun3) -> bool:
    return vanishes_on_W(a.num * b.den - b.num * a.den)


# ---------------------------------------------------------------------------
# f- and F-functions


@lru_cache(maxsize=1)
def f_ratios() -> dict[str, RatFun3]:
    s = sigma_sw().partials
    one = s["1"]
    return {
        "f1": RatFun3(s["11"], one),
        "f2": RatFun3(s["3"], one),
        "f3": RatFun3(s["13"], one),
        "f4": RatFun3(s["5"], one),
        "f5": RatFun3(s["33"], one),
        "g5": RatFun3(s["15"], one),
        "f7": RatFun3(s["35"], one),
    }


@lru_cache(maxsize=1)
def F_defs() -> dict[str, RatFun3]:
    f = f_ratios()
    f1, f2, f3, f4, f5, g5, f7 = (f[k] for k in ("f1", "f2", "f3", "f4", "f5", "g5", "f7"))
    h = Fraction(1, 2)
    return {
        "F2": -h * f2,
        "F4": Fraction(1, 4) * f2 ** 2 - f4,
        "F5": h * (f1 * f2 ** 2 + f5 - 2 * f2 * f3),
        "F7": Fraction(1, 4) * (2 * f2 ** 2 * f3 - 2 * f3 * f4 - f1 * f2 ** 3 + 2 * f1 * f2 * f4
                                - f2 * f5 + 2 * f7 - 2 * f2 * g5),
    }


@lru_cache(maxsize=1)
def K_polys() -> dict[str, Poly]:
    """K2..K7 with phi written as w1."""
    p, w3, w5 = _w()
    return {
        "K2": 2 * (2 * p ** 5 - 15 * p ** 2 * w3 + 15 * w5),
        "K4": 4 * (-8 * p ** 5 * w5 + 27 * p ** 4 * w3 ** 2 - 30 * p ** 2 * w3 * w5 + 15 * w5 ** 2),
        "K5": 3 * (14 * p ** 5 * w5 ** 2 - 111 * p ** 4 * w3 ** 2 * w5 + 189 * p ** 3 * w3 ** 4
                   + 165 * p ** 2 * w3 * w5 ** 2 - 585 * p * w3 ** 3 * w5 + 405 * w3 ** 5 + 5 * w5 ** 3),
        "K7": (729 * p ** 5 * w3 ** 5 - 208 * p ** 5 * w5 ** 3 + 3042 * p ** 4 * w3 ** 2 * w5 ** 2
               - 11583 * p ** 3 * w3 ** 4 * w5 + 2187 * p ** 2 * w3 ** 6 - 4380 * p ** 2 * w3 * w5 ** 3
               + 28620 * p * w3 ** 3 * w5 ** 2 - 24300 * w3 ** 5 * w5 + 15 * w5 ** 4),
    }


@lru_cache(maxsize=2)
def F_closed_forms(variant: str = "printed") -> dict[str, RatFun3]:
    """Closed forms of F2..F7 restricted to W, with phi written as w1.

    ``variant="printed"`` is the literal transcription.  Its F5 and F7 do not
    agree with the definitions on W; ``variant="corrected"`` replaces those two
    numerators (F2 and F4 are unchanged).
    """
    p, w3, w5 = _w()
    K = K_polys()
    F2 = RatFun3(5 * (p ** 3 + 6 * w3), K["K2"])
    F4 = RatFun3(15 * (-(p ** 3) * w3 + 15 * p * w5 - 15 * w3 ** 2), K["K4"])
    if variant == "printed":
        F5 = RatFun3(8 * p ** 5 * w5 + 3 * p ** 4 * w3 ** 2 - 15 * p ** 2 * w3 * w5 - 45 * p * w3 ** 3
                     - 15 * w5 ** 2, K["K5"])
        F7 = RatFun3(10125 * (15 * p ** 5 * w3 * w5 - 50 * p ** 4 * w3 ** 3 - 25 * p ** 3 * w5 ** 2
                              + 129 * p ** 2 * w3 ** 2 * w5 - 111 * p * w3 ** 4), 2 * K["K7"])
    elif variant == "corrected":
        F5 = RatFun3(8 * p ** 5 * w5 + 63 * p ** 4 * w3 ** 2 - 195 * p ** 2 * w3 * w5 + 135 * p * w3 ** 3
                     - 15 * w5 ** 2, K["K5"])
        F7 = RatFun3(15 * (15 * p ** 5 * w3 * w5 - 18 * p ** 4 * w3 ** 3 - 25 * p ** 3 * w5 ** 2
                           + 45 * p ** 2 * w3 ** 2 * w5 - 27 * p * w3 ** 4), 2 * K["K7"])
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return {"F2": F2, "F4": F4, "F5": F5, "F7": F7}


def closed_form_agreement(variant: str = "printed") -> dict[str, bool]:
    """Does each closed form equal its definition on W?"""
    d, c = F_defs(), F_closed_forms(variant)
    return {k: equal_on_W(d[k], c[k]) for k in F_NAMES}


def F_closed(phi, w3, w5, variant: str = "printed") -> dict[str, object]:
    """Evaluate the closed forms at (phi, w3, w5): scalars, complex numbers or series."""
    b = {"w1": phi, "w3": w3, "w5": w5}
    out = {}
    for k, r in F_closed_forms(variant).items():
        den = _compose(r.den, b)
        c0 = den.constant_term() if isinstance(den, Series2) else den
        if not c0:
            raise ZeroDivisionError(f"K-factor of {k} vanishes at the base point")
        num = _compose(r.num, b)
        out[k] = num / den if isinstance(den, (Series2, complex, float)) else num * scalar_inverse(den)
    return out


def F_at(point: Mapping[str, object]) -> dict[str, object]:
    """The definitions of F2..F7 composed with a point or series point.

    Evaluates the sigma partials first and applies the f/F formulas in the
    target arithmetic; agrees with composing :func:`F_defs` directly.
    """
    s = {k: _compose(p, point) for k, p in sigma_sw().partials.items()}
    inv = s["1"].reciprocal() if isinstance(s["1"], Series2) else scalar_inverse(s["1"])
    f1, f2, f3, f4, f5, g5, f7 = (s[k] * inv for k in ("11", "3", "13", "5", "33", "15", "35"))
    h = Fraction(1, 2)
    return {
        "F2": -(f2 * h),
        "F4": f2 * f2 * Fraction(1, 4) - f4,
        "F5": (f1 * f2 * f2 + f5 - f2 * f3 * 2) * h,
        "F7": (f2 * f2 * f3 * 2 - f3 * f4 * 2 - f1 * f2 * f2 * f2 + f1 * f2 * f4 * 2
               - f2 * f5 + f7 * 2 - f2 * g5 * 2) * Fraction(1, 4),
    }


# ---------------------------------------------------------------------------
# seeds and series


@dataclass(frozen=True)
class SeedSpec:
    kind: str
    extension: AlgExt | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in ("p_zero", "p_root5", "q_root"):
            raise ValueError(f"unknown seed kind {self.kind!r}")
        if self.extension is None and self.kind != "p_zero":
            object.__setattr__(self, "extension", p_extension() if self.kind == "p_root5" else q_extension())

    @classmethod
    def parse(cls, name: str) -> "SeedSpec":
        aliases = {"p0": "p_zero", "p5": "p_root5", "q": "q_root"}
        return cls(aliases.get(name, name))

    @property
    def base_point(self) -> tuple[object, object, object]:
        if self.kind == "p_zero":
            return (0, 0, 1)
        g = self.extension.gen()
        return (g, 0, 1) if self.kind == "p_root5" else (g, 1, 0)

    def on_W(self) -> bool:
        return not eval_generic(sigma_sw().sigma, dict(zip(W_NAMES, self.base_point)), 0, 1)

    def sigma1(self):
        return eval_generic(sigma_sw().partials["1"], dict(zip(W_NAMES, self.base_point)), 0, 1)


def _tt(order: int) -> tuple[Series2, Series2]:
    return Series2.var(0, order), Series2.var(1, order)


def solve_phi(seed: SeedSpec, order: int) -> Series2:
    """phi(t, 1 + tau) with sigma(phi, t, 1 + tau) = 0 and phi(0, 1) = the seed."""
    if seed.kind == "q_root":
        raise ValueError("the q seed lies on the path (q(1+t)^(1/3), 1+t, 0); use example3_curve")
    t, tau = _tt(order)
    return series_newton_root(sigma_sw().sigma, "w1", {"w3": t, "w5": tau + 1}, seed.base_point[0], order)


def _denominator(c) -> int:
    if isinstance(c, AlgElem):
        d = 1
        for x in c.coords:
            d = d * x.denominator // _gcd(d, x.denominator)
        return d
    return Fraction(c).denominator


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def denominator_audit(series: Series2, primes=(3, 5)) -> list[tuple[tuple[int, int], int]]:
    """Coefficients whose denominators have prime factors outside ``primes``."""
    bad = []
    for k, c in series.items():
        d = _denominator(c)
        for pr in primes:
            while d % pr == 0:
                d //= pr
        if d != 1:
            bad.append((k, _denominator(c)))
    return bad


@dataclass
class GSeries:
    seed: SeedSpec
    order: int
    phi: Series2
    G: dict[str, Series2]
    closed: dict[str, dict[str, bool]]

    def slice(self, name: str, which: int) -> dict[int, object]:
        return self.G[name].slice(which)


def G_series(seed: SeedSpec, order: int) -> GSeries:
    """G_i(t, tau) = F_i(phi(t, 1+tau), t, 1+tau) from the definitions.

    The closed forms (both variants) are evaluated on the same series and
    compared coefficient by coefficient; the outcome is kept in ``closed``.
    """
    phi = solve_phi(seed, order)
    t, tau = _tt(order)
    point = {"w1": phi, "w3": t, "w5": tau + 1}
    defs = F_at(point)
    G = {g: defs[f] for g, f in zip(G_NAMES, F_NAMES)}
    closed = {}
    for variant in ("printed", "corrected"):
        vals = F_closed(phi, t, tau + 1, variant)
        closed[variant] = {f: vals[f] == defs[f] for f in F_NAMES}
    return GSeries(seed, order, phi, G, closed)


def _system_polys():
    from .dynsys import make_system

    return {s: make_system(s).components for s in ("I", "II")}


def verify_series_solution(seed: SeedSpec, order: int,
                           perturb: Mapping[str, Series2] | None = None) -> dict[str, Series2]:
    """Residuals dG/dt - (I)(G) and dG/dtau - (II)(G) at y = 0, truncated at order - 1."""
    gs = G_series(seed, order)
    G = dict(gs.G)
    for k, v in (perturb or {}).items():
        G[k] = G[k] + v
    zero = Series2(order)
    binding = {**G, "y4": zero, "y6": zero, "y8": zero, "y10": zero}
    out = {}
    for sysname, which in (("I", 0), ("II", 1)):
        for g, comp in zip(G_NAMES, _system_polys()[sysname]):
            rhs = substitute(comp, binding) if comp.variables() else zero.const_like(comp.constant_term())
            res = G[g].diff(which) - rhs.truncate(order - 1)
            out[f"{sysname}:{g}"] = res.truncate(order - 1)
    return out


# ---------------------------------------------------------------------------
# the operators L_{k,l} on C^3


@dataclass(frozen=True)
class RatField:
    """Vector field on C^3 with rational coefficients: sum comp[w] * d/dw."""

    name: str
    comps: tuple[RatFun3, RatFun3, RatFun3]

    def apply(self, f: RatFun3) -> RatFun3:
        out = RatFun3(W_RING.zero())
        for c, n in zip(self.comps, W_NAMES):
            if c.is_zero():
                continue
            d = f.diff(n)
            if not d.is_zero():
                out = out + c * d
        return out


def L_operator(k: int, l: int) -> RatField:
    """L_{k,l} = d_k - (sigma_k / sigma_l) d_l."""
    s = sigma_sw().partials
    comps = []
    for i in (1, 3, 5):
        if i == k:
            comps.append(RatFun3(W_RING.one()))
        elif i == l:
            comps.append(RatFun3(-s[str(k)], s[str(l)]))
        else:
            comps.append(RatFun3(W_RING.zero()))
    return RatField(f"L{k}{l}", tuple(comps))


def bracket(a: RatField, b: RatField) -> tuple[RatFun3, RatFun3, RatFun3]:
    """Components of [a, b] on the coordinate functions w1, w3, w5."""
    out = []
    for n in W_NAMES:
        x = RatFun3(W_RING.gen(n))
        out.append(a.apply(b.apply(x)) - b.apply(a.apply(x)))
    return tuple(out)


LEMMA_PAIRS = (((1, 3), (5, 3)), ((1, 5), (3, 5)), ((3, 1), (5, 1)))
EXTRA_PAIRS = (((1, 3), (1, 5)),)


def check_Lkl_commutators(pairs=LEMMA_PAIRS) -> dict[str, tuple[RatFun3, RatFun3, RatFun3]]:
    out = {}
    for (k1, l1), (k2, l2) in pairs:
        out[f"[L{k1}{l1},L{k2}{l2}]"] = bracket(L_operator(k1, l1), L_operator(k2, l2))
    return out


def directional_lemma() -> dict[str, bool]:
    """L_{3,1} and L_{5,1} send phi's t- and tau-derivatives consistently:

    d phi/dw3 = -sigma3/sigma1 and d phi/dw5 = -sigma5/sigma1 on W, i.e. the
    w1-components of L_{3,1}, L_{5,1}.
    """
    s = sigma_sw().partials
    L31, L51 = L_operator(3, 1), L_operator(5, 1)
    return {
        "L31": L31.comps[0] == RatFun3(-s["3"], s["1"]),
        "L51": L51.comps[0] == RatFun3(-s["5"], s["1"]),
    }


# ---------------------------------------------------------------------------
# Example 3: the path (q (1+t)^(1/3), 1+t, 0)


def _q_printed(q: AlgElem) -> dict[str, tuple[object, Fraction]]:
    """Printed Example-3 constants and exponents of (1+t)."""
    q3 = q ** 3
    return {
        "F2": (q / 6, Fraction(-2, 3)),
        "F4": (-(q ** 2) * (q3 + 15) / (108 * (q3 + 3)), Fraction(-4, 3)),
        "F5": (q / (9 * (8 * q3 + 21)), Fraction(-5, 3)),
        "F7": (-(q ** 2) * (287 * q3 + 750) / (1458 * (7 * q3 + 18)), Fraction(-7, 3)),
    }


def _q_corrected(q: AlgElem) -> dict[str, tuple[object, Fraction]]:
    q3 = q ** 3
    out = _q_printed(q)
    out["F5"] = (q / 9, Fraction(-5, 3))
    out["F7"] = (-(q ** 2) * (q3 + 15) / (162 * (q3 + 3)), Fraction(-7, 3))
    return out


@dataclass
class Example3:
    order: int
    F: dict[str, Series2]
    printed: dict[str, Series2]
    corrected: dict[str, Series2]
    matches_printed: dict[str, bool]
    matches_corrected: dict[str, bool]
    sigma_on_path: Series2
    sigma1_matches: bool


def example3_curve(order: int, ext: AlgExt | None = None) -> Example3:
    """The F-functions along (q (1+t)^(1/3), 1+t, 0) against the closed forms."""
    ext = ext or q_extension()
    q = ext.gen()
    w1 = binomial_series(Fraction(1, 3), order) * q
    w3 = Series2.var(0, order) + 1
    w5 = Series2(order)
    point = {"w1": w1, "w3": w3, "w5": w5}
    F = F_at(point)

    def expand(table):
        return {k: binomial_series(e, order) * c for k, (c, e) in table.items()}

    printed, corrected = expand(_q_printed(q)), expand(_q_corrected(q))
    sig = substitute(sigma_sw().sigma, point)
    s1 = substitute(sigma_sw().partials["1"], point)
    s1_expected = binomial_series(Fraction(5, 3), order) * (q ** 2 * (Fraction(2, 15) * q ** 3 - 1))
    return Example3(
        order, F, printed, corrected,
        {k: F[k] == printed[k] for k in F_NAMES},
        {k: F[k] == corrected[k] for k in F_NAMES},
        sig, s1 == s1_expected,
    )


def example3_initial(variant: str = "printed") -> list[complex]:
    """Numeric G(0) for Example 3 (q at its real embedding)."""
    q = q_extension().gen()
    table = _q_printed(q) if variant == "printed" else _q_corrected(q)
    return [complex(table[k][0]) for k in F_NAMES]


def example3_exact(t: complex, variant: str = "printed") -> list[complex]:
    q = q_extension().gen()
    table = _q_printed(q) if variant == "printed" else _q_corrected(q)
    return [complex(table[k][0]) * (1 + t) ** float(table[k][1]) for k in F_NAMES]


def example2_table(p: AlgElem) -> dict[str, tuple[object, Fraction]]:
    """Printed Example-2 constants and exponents of (1+tau)."""
    p3 = p ** 3
    return {
        "F2": (-p3 / 30, Fraction(-2, 5)),
        "F4": (p * Fraction(3, 20), Fraction(-4, 5)),
        "F5": (Fraction(1, 5), Fraction(-1)),
        "F7": (-p3 / 50, Fraction(-7, 5)),
    }


def example2_initial() -> list[complex]:
    p = p_extension().gen()
    return [complex(c) if isinstance(c, AlgElem) else complex(float(c)) for c, _ in example2_table(p).values()]


def example2_exact(tau: complex) -> list[complex]:
    p = p_extension().gen()
    return [(complex(c) if isinstance(c, AlgElem) else float(c)) * (1 + tau) ** float(e)
            for c, e in example2_table(p).values()]


def example2_series_check(order: int = 8) -> dict[str, bool]:
    """t = 0 slices of the G series (seed p^5 = -45) against the printed closed forms."""
    gs = G_series(SeedSpec("p_root5"), order)
    p = gs.seed.extension.gen()
    out = {}
    for g, (k, (c, e)) in zip(G_NAMES, example2_table(p).items()):
        expected = binomial_series(e, order, which=1) * c
        out[k] = gs.G[g].slice(1) == expected.slice(1)
    return out


def example3_residuals(ex: Example3) -> dict[str, Series2]:
    """dG/dt - (I)(G) at y = 0 along the Example-3 path (w3 = 1 + t plays the role of t)."""
    order = ex.order
    G = {g: ex.F[f] for g, f in zip(G_NAMES, F_NAMES)}
    zero = Series2(order)
    binding = {**G, "y4": zero, "y6": zero, "y8": zero, "y10": zero}
    out = {}
    for g, comp in zip(G_NAMES, _system_polys()["I"]):
        rhs = substitute(comp, binding)
        out[f"I:{g}"] = (G[g].diff(0) - rhs.truncate(order - 1)).truncate(order - 1)
    return out
