"""Coordinate ring of the curve square, localized at (X1 - X2).

Elements are ``(c00 + c10*Y1 + c01*Y2 + c11*Y1*Y2) / (X1 - X2)^d`` with the
``c`` polynomials in X1, X2 and the curve parameters y4..y14.  Multiplication
reduces ``Y_k^2 -> Q(X_k)``, so the representation is canonical once common
factors of ``X1 - X2`` are cancelled.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .exactalg import Poly, PolyRing, divide_by_difference, eval_generic
from .exactalg.scalar import _upoly_divmod

PARAMS = ("y4", "y6", "y8", "y10", "y12", "y14")
PARAM_WEIGHTS = tuple((n, int(n[1:])) for n in PARAMS)

X_RING = PolyRing.of((("X1", 2), ("X2", 2)) + PARAM_WEIGHTS)
XY_RING = PolyRing.of((("X1", 2), ("Y1", 7), ("X2", 2), ("Y2", 7)) + PARAM_WEIGHTS)
U_RING = PolyRing.of((("u2", 2), ("u4", 4), ("u5", 5), ("u7", 7)) + PARAM_WEIGHTS)
U_NAMES = ("u2", "u4", "u5", "u7")

# signs of the y-terms in Q(X) = X^7 + y4 X^5 - y6 X^4 + y8 X^3 - y10 X^2 + y12 X - y14
_Q_TERMS = (("y4", 5, 1), ("y6", 4, -1), ("y8", 3, 1), ("y10", 2, -1), ("y12", 1, 1), ("y14", 0, -1))


class AsymmetricInput(ValueError):
    pass


class SamplingError(RuntimeError):
    pass


@dataclass(frozen=True)
class CurveParams:
    """Curve parameters; ``None`` leaves a parameter symbolic."""

    y4: object = None
    y6: object = None
    y8: object = None
    y10: object = None
    y12: object = None
    y14: object = None

    @classmethod
    def numeric(cls, values: Sequence) -> "CurveParams":
        """From 4 values (y4..y10; y12 = y14 = 0) or 6 values (y4..y14)."""
        vals = list(values)
        if len(vals) == 4:
            vals += [0, 0]
        if len(vals) != 6:
            raise ValueError("expected 4 or 6 curve parameters")
        return cls(*vals)

    def values(self) -> dict[str, object]:
        return {n: getattr(self, n) for n in PARAMS}

    def bound(self) -> dict[str, object]:
        return {n: v for n, v in self.values().items() if v is not None}

    @property
    def is_numeric(self) -> bool:
        return all(v is not None for v in self.values().values())

    @property
    def is_exact(self) -> bool:
        return all(isinstance(v, (int, Fraction)) for v in self.bound().values())

    def Q(self, ring: PolyRing, var: str) -> Poly:
        x = ring.gen(var)
        out = x ** 7
        for name, k, sign in _Q_TERMS:
            v = getattr(self, name)
            y = ring.gen(name) if v is None else v
            out = out + x ** k * y * sign
        return out

    def Q_coeffs(self) -> list[complex]:
        """Numeric coefficients of Q, high to low (numpy order)."""
        c = [1, 0] + [0] * 6
        for name, k, sign in _Q_TERMS:
            c[7 - k] = sign * complex(getattr(self, name))
        return c

    def Q_value(self, x: complex) -> complex:
        return complex(np.polyval(self.Q_coeffs(), x))

    def is_nonsingular(self) -> bool:
        """True iff Q has no repeated root (gcd(Q, Q') constant); needs exact rational parameters."""
        if not (self.is_numeric and self.is_exact):
            raise ValueError("nonsingularity check needs exact numeric parameters")
        q = [Fraction(0)] * 8
        q[7] = Fraction(1)
        for name, k, sign in _Q_TERMS:
            q[k] += sign * Fraction(getattr(self, name))
        dq = [k * c for k, c in enumerate(q)][1:]
        a, b = q, dq
        while b:
            _, r = _upoly_divmod(a, b)
            a, b = b, r
        return len(a) == 1


SYMBOLIC = CurveParams()


@dataclass(frozen=True)
class QuotCtx:
    """Relations of the curve square for a fixed parameter choice."""

    params: CurveParams = SYMBOLIC
    ring: PolyRing = field(default=X_RING, init=False)

    def __post_init__(self):
        object.__setattr__(self, "_cache", {})

    def _get(self, key, build):
        cache = self.__dict__["_cache"]
        if key not in cache:
            cache[key] = build()
        return cache[key]

    @property
    def Q1(self) -> Poly:
        return self._get("Q1", lambda: self.params.Q(X_RING, "X1"))

    @property
    def Q2(self) -> Poly:
        return self._get("Q2", lambda: self.params.Q(X_RING, "X2"))

    @property
    def dQ1(self) -> Poly:
        return self._get("dQ1", lambda: self.Q1.diff("X1"))

    @property
    def dQ2(self) -> Poly:
        return self._get("dQ2", lambda: self.Q2.diff("X2"))

    @property
    def delta(self) -> Poly:
        return self._get("delta", lambda: X_RING.gen("X1") - X_RING.gen("X2"))

    def delta_pow(self, k: int) -> Poly:
        return self._get(("delta", k), lambda: self.delta ** k)

    def Qpow(self, which: int, k: int) -> Poly:
        base = self.Q1 if which == 1 else self.Q2
        return self._get(("Q", which, k), lambda: base ** k)

    # -- element constructors ------------------------------------------------
    def elem(self, c00=0, c10=0, c01=0, c11=0, d: int = 0) -> "QuotElem":
        cs = tuple(c if isinstance(c, Poly) else X_RING.const(c) for c in (c00, c10, c01, c11))
        return QuotElem(self, cs, d).normalized()

    def const(self, c) -> "QuotElem":
        return self.elem(c)

    def zero_like(self) -> "QuotElem":
        return self.elem()

    def one_like(self) -> "QuotElem":
        return self.elem(1)

    def X(self, k: int) -> "QuotElem":
        return self.elem(X_RING.gen(f"X{k}"))

    def Y(self, k: int) -> "QuotElem":
        return self.elem(0, 1, 0, 0) if k == 1 else self.elem(0, 0, 1, 0)

    def from_xy(self, f: Poly) -> "QuotElem":
        """Image of a polynomial in X1, Y1, X2, Y2 (and y) under Y-reduction."""
        groups: dict[tuple[int, int], dict] = {}
        iy1, iy2 = XY_RING.index("Y1"), XY_RING.index("Y2")
        for e, c in f.terms.items():
            key = (e[iy1], e[iy2])
            xe = (e[0], e[2]) + e[4:]
            groups.setdefault(key, {})[xe] = c
        comps = [X_RING.zero()] * 4
        for (a, b), terms in groups.items():
            p = Poly(X_RING, terms)
            if a // 2:
                p = p * self.Qpow(1, a // 2)
            if b // 2:
                p = p * self.Qpow(2, b // 2)
            slot = (a % 2) + 2 * (b % 2)
            comps[slot] = comps[slot] + p
        return QuotElem(self, tuple(comps), 0)

    def from_u(self, f: Poly) -> "QuotElem":
        """Substitute the u-map into a polynomial of the u-ring."""
        # one common denominator, one reduction, one cancellation
        num, D = u_to_xy(f, self.params)
        return QuotElem(self, self.from_xy(num).c, D).normalized()


class QuotElem:
    """Immutable element of the localized quotient ring; components on {1, Y1, Y2, Y1Y2}."""

    __slots__ = ("ctx", "c", "d")

    def __init__(self, ctx: QuotCtx, c: tuple[Poly, Poly, Poly, Poly], d: int):
        self.ctx = ctx
        self.c = c
        self.d = d

    @property
    def c00(self):
        return self.c[0]

    @property
    def c10(self):
        return self.c[1]

    @property
    def c01(self):
        return self.c[2]

    @property
    def c11(self):
        return self.c[3]

    @property
    def denom_exp(self) -> int:
        return self.d

    def normalized(self) -> "QuotElem":
        c, d = self.c, self.d
        if all(x.is_zero() for x in c):
            return QuotElem(self.ctx, c, 0)
        while d > 0:
            qs = []
            for x in c:
                q, r = divide_by_difference(x, "X1", "X2")
                if r:
                    break
                qs.append(q)
            else:
                c, d = tuple(qs), d - 1
                continue
            break
        return QuotElem(self.ctx, c, d)

    def _lift(self, d: int) -> tuple[Poly, ...]:
        if d == self.d:
            return self.c
        f = self.ctx.delta_pow(d - self.d)
        return tuple(x * f for x in self.c)

    def _coerce(self, other):
        if isinstance(other, QuotElem):
            return other
        if isinstance(other, (int, Fraction, Poly)):
            return self.ctx.elem(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = max(self.d, o.d)
        a, b = self._lift(d), o._lift(d)
        return QuotElem(self.ctx, tuple(x + y for x, y in zip(a, b)), d).normalized()

    __radd__ = __add__

    def __neg__(self):
        return QuotElem(self.ctx, tuple(-x for x in self.c), self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.ctx.zero_like()
            return QuotElem(self.ctx, tuple(x * other for x in self.c), self.d)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return quot_mul(self, o)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = self.ctx.one_like()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.c)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).is_zero()

    __hash__ = None

    def dump(self) -> str:
        """Canonical textual form, used as a failure witness."""
        parts = []
        for label, x in zip(("1", "Y1", "Y2", "Y1*Y2"), self.c):
            if x:
                parts.append(f"[{label}] {x}")
        body = "; ".join(parts) or "0"
        return f"({body}) / (X1 - X2)^{self.d}"

    def __repr__(self):
        return f"QuotElem{self.dump()}"

    def substitute_point(self, X1: complex, Y1: complex, X2: complex, Y2: complex) -> complex:
        point = {"X1": X1, "X2": X2, **{n: complex(v) for n, v in self.ctx.params.bound().items()}}
        basis = (1, Y1, Y2, Y1 * Y2)
        num = sum(x.evaluate(point) * b for x, b in zip(self.c, basis) if x)
        return num / (X1 - X2) ** self.d


def quot_mul(a: QuotElem, b: QuotElem) -> QuotElem:
    """Product with Y1^2 -> Q(X1), Y2^2 -> Q(X2); exponents of (X1-X2) add."""
    ctx = a.ctx
    out = [X_RING.zero()] * 4
    for i, x in enumerate(a.c):
        if not x:
            continue
        for j, y in enumerate(b.c):
            if not y:
                continue
            p = x * y
            e1 = (i & 1) + (j & 1)
            e2 = (i >> 1) + (j >> 1)
            if e1 == 2:
                p = p * ctx.Q1
            if e2 == 2:
                p = p * ctx.Q2
            slot = (e1 & 1) + 2 * (e2 & 1)
            out[slot] = out[slot] + p
    return QuotElem(ctx, tuple(out), a.d + b.d).normalized()


def _d_numerator(k: int, a: QuotElem) -> QuotElem:
    """D_k applied to the numerator polynomial only (denominator ignored)."""
    ctx = a.ctx
    xk = f"X{k}"
    dx = QuotElem(ctx, tuple(c.diff(xk) for c in a.c), 0)
    # d/dY_k of c00 + c10 Y1 + c01 Y2 + c11 Y1 Y2
    if k == 1:
        dy = QuotElem(ctx, (a.c[1], X_RING.zero(), a.c[3], X_RING.zero()), 0)
        return quot_mul(ctx.Y(1) * 2, dx) + quot_mul(ctx.elem(ctx.dQ1), dy)
    dy = QuotElem(ctx, (a.c[2], a.c[3], X_RING.zero(), X_RING.zero()), 0)
    return quot_mul(ctx.Y(2) * 2, dx) + quot_mul(ctx.elem(ctx.dQ2), dy)


def apply_D(k: int, a: QuotElem) -> QuotElem:
    """D_k = 2 Y_k d/dX_k + Q'(X_k) d/dY_k, extended to the localization."""
    if k not in (1, 2):
        raise ValueError("k must be 1 or 2")
    ctx = a.ctx
    num = _d_numerator(k, a)
    if a.d == 0:
        return num
    # D_k (N / Delta^d) = (D_k(N) Delta - d N D_k(Delta)) / Delta^(d+1), D_1 Delta = 2 Y1, D_2 Delta = -2 Y2
    d_delta = ctx.Y(1) * 2 if k == 1 else ctx.Y(2) * (-2)
    n_only = QuotElem(ctx, a.c, 0)
    top = quot_mul(num, ctx.elem(ctx.delta)) - quot_mul(n_only, d_delta) * a.d
    return QuotElem(ctx, top.c, top.d + a.d + 1).normalized()


def apply_L(which: int, a: QuotElem) -> QuotElem:
    """L3* = (D2 - D1)/(X1 - X2);  L5* = (X2 D1 - X1 D2)/(X1 - X2)."""
    ctx = a.ctx
    d1, d2 = apply_D(1, a), apply_D(2, a)
    if which == 3:
        top = d2 - d1
    elif which == 5:
        top = quot_mul(ctx.X(2), d1) - quot_mul(ctx.X(1), d2)
    else:
        raise ValueError("which must be 3 or 5")
    return QuotElem(ctx, top.c, top.d + 1).normalized()


@dataclass(frozen=True)
class UQuad:
    u2: QuotElem
    u4: QuotElem
    u5: QuotElem
    u7: QuotElem

    def as_dict(self) -> dict[str, QuotElem]:
        return {"u2": self.u2, "u4": self.u4, "u5": self.u5, "u7": self.u7}


@lru_cache(maxsize=16)
def uquad(ctx: QuotCtx) -> UQuad:
    X1, X2 = X_RING.gen("X1"), X_RING.gen("X2")
    half = Fraction(1, 2)
    return UQuad(
        u2=ctx.elem((X1 + X2) * half),
        u4=ctx.elem((X1 - X2) ** 2 * Fraction(1, 4)),
        u5=QuotElem(ctx, (X_RING.zero(), X_RING.one(), -X_RING.one(), X_RING.zero()), 1),
        u7=ctx.elem(0, half, half, 0),
    )


# ---------------------------------------------------------------------------
# symmetrization


def _u(*names):
    return U_RING.gens(*names)


@lru_cache(maxsize=None)
def _power_sum_table(kind: str, k: int, l: int) -> Poly:
    """A_{k,l} = X1^k Y1^l + X2^k Y2^l (kind "A") or B_{k,l} = X1^k Y2^l + X2^k Y1^l ("B") in u."""
    u2, u4, u5, u7 = _u("u2", "u4", "u5", "u7")
    if l >= 2:
        f1, f2 = 2 * u7, u7 ** 2 - u4 * u5 ** 2
        return f1 * _power_sum_table(kind, k, l - 1) - f2 * _power_sum_table(kind, k, l - 2)
    if k >= 2:
        e1, e2 = 2 * u2, u2 ** 2 - u4
        return e1 * _power_sum_table(kind, k - 1, l) - e2 * _power_sum_table(kind, k - 2, l)
    base = {
        (0, 0): U_RING.const(2),
        (1, 0): 2 * u2,
        (0, 1): 2 * u7,
        (1, 1): 2 * (u2 * u7 + u4 * u5) if kind == "A" else 2 * (u2 * u7 - u4 * u5),
    }
    return base[(k, l)]


_SWAP = (("X1", "X2"), ("Y1", "Y2"))


def reduced_xy(f: Poly, ctx: QuotCtx | None = None) -> Poly:
    """Y-reduced representative of ``f`` as an XY-polynomial (Y exponents <= 1)."""
    ctx = ctx or QuotCtx(SYMBOLIC)
    q = ctx.from_xy(f)
    out = XY_RING.zero()
    Y1, Y2 = XY_RING.gen("Y1"), XY_RING.gen("Y2")
    for comp, basis in zip(q.c, (XY_RING.one(), Y1, Y2, Y1 * Y2)):
        if comp:
            out = out + comp.to_ring(XY_RING) * basis
    return out


def symmetrize(f: Poly, ctx: QuotCtx | None = None) -> Poly:
    """Express a swap-symmetric polynomial in X1, Y1, X2, Y2 through u2, u4, u5, u7.

    Parameters y4..y14 in ``f`` are carried through as coefficients.  If ``f``
    is not symmetric as written, its Y-reduced form is tried (with ``ctx``'s
    parameters, symbolic by default).
    """
    if f.ring != XY_RING:
        raise ValueError("symmetrize expects a polynomial in the XY ring")
    if f.swap(_SWAP) != f:
        g = reduced_xy(f, ctx)
        sg = g.swap(_SWAP)
        if sg != g:
            diff = g - sg
            e, c = diff.sorted_terms()[0]
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(XY_RING.names, e) if k) or "1"
            raise AsymmetricInput(f"not symmetric under (X1,Y1)<->(X2,Y2); e.g. monomial {mono}")
        f = g

    P1 = U_RING.gen("u2") ** 2 - U_RING.gen("u4")
    P2 = U_RING.gen("u7") ** 2 - U_RING.gen("u4") * U_RING.gen("u5") ** 2
    out = U_RING.zero()
    seen = set()
    for e, c in f.terms.items():
        if e in seen:
            continue
        k1, l1, k2, l2 = e[:4]
        swapped = (k2, l2, k1, l1) + e[4:]
        seen.add(e)
        seen.add(swapped)
        ymono = U_RING.monomial(dict(zip(PARAMS, e[4:])), c)
        kmin, lmin = min(k1, k2), min(l1, l2)
        common = P1 ** kmin * P2 ** lmin
        if swapped == e:
            out = out + ymono * common
            continue
        dk, dl = k1 - k2, l1 - l2
        same_point = dk * dl >= 0
        S = _power_sum_table("A" if same_point else "B", abs(dk), abs(dl))
        out = out + ymono * common * S
    return out


# ---------------------------------------------------------------------------
# H12, H14 and the ideal T


def _printed_H() -> tuple[Poly, Poly]:
    u2, u4, u5, u7, y4, y6, y8, y10, y12, y14 = U_RING.gens()
    H12 = (2 * u5 * u7 - 7 * u2 ** 6 - 35 * u2 ** 4 * u4 - 21 * u2 ** 2 * u4 ** 2 - u4 ** 3
           - y4 * (5 * u2 ** 4 + 10 * u2 ** 2 * u4 + u4 ** 2)
           + 4 * y6 * (u2 ** 3 + u2 * u4) - y8 * (3 * u2 ** 2 + u4) + 2 * y10 * u2 - y12)
    H14 = (-u7 ** 2 - u4 * u5 ** 2 + 2 * u2 * u5 * u7 - 6 * u2 ** 7 - 14 * u2 ** 5 * u4
           + 14 * u2 ** 3 * u4 ** 2 + 6 * u2 * u4 ** 3
           - 4 * y4 * (u2 ** 5 - u2 * u4 ** 2) + y6 * (3 * u2 ** 4 - 2 * u2 ** 2 * u4 - u4 ** 2)
           - 2 * y8 * (u2 ** 3 - u2 * u4) + y10 * (u2 ** 2 - u4) - y14)
    return H12, H14


def u_to_xy(p: Poly, params: "CurveParams | None" = None) -> tuple[Poly, int]:
    """Write p(u-map) as ``numerator / (X1 - X2)^D`` in Q(X1, Y1, X2, Y2), no Y-reduction.

    Parameters fixed in ``params`` are substituted; the rest stay symbolic.
    """
    X1, Y1, X2, Y2 = XY_RING.gens("X1", "Y1", "X2", "Y2")
    delta = X1 - X2
    D = p.degree_in("u5")
    vals = {
        "u2": (X1 + X2) * Fraction(1, 2),
        "u4": delta ** 2 * Fraction(1, 4),
        "u7": (Y1 + Y2) * Fraction(1, 2),
    }
    ys = {}
    for n in PARAMS:
        v = None if params is None else getattr(params, n)
        ys[n] = XY_RING.gen(n) if v is None else XY_RING.const(v)
    out = XY_RING.zero()
    for k, coeff in p.coefficients_in("u5").items():
        part = eval_generic(coeff, {**vals, **ys},
                            XY_RING.zero(), XY_RING.one())
        out = out + part * (Y1 - Y2) ** k * delta ** (D - k)
    return out, max(D, 0)


def check_H_definitions() -> dict[str, bool]:
    """Cross-check the printed H12/H14 against their (X, Y) definitions.

    Checks run in the free localized ring (no curve relations), so they are
    not vacuous.  The printed H14 corresponds to
    ``(X2 (Y1^2 - Q1) - X1 (Y2^2 - Q2)) / (X1 - X2)``, which equals
    ``-1/2 (Y1^2 - Q1 + Y2^2 - Q2) + u2 * H12``.
    """
    H12, H14 = _printed_H()
    X1, Y1, X2, Y2 = XY_RING.gens("X1", "Y1", "X2", "Y2")
    Q1, Q2 = SYMBOLIC.Q(XY_RING, "X1"), SYMBOLIC.Q(XY_RING, "X2")
    delta = X1 - X2
    r1, r2 = Y1 ** 2 - Q1, Y2 ** 2 - Q2
    n12, D12 = u_to_xy(H12)
    n14, D14 = u_to_xy(H14)
    out = {
        "H12_free": n12 == (r1 - r2) * delta ** (D12 - 1),
        "H14_free": n14 == (X2 * r1 - X1 * r2) * delta ** (D14 - 1),
    }
    # literal definition of H14: Y1^2 - Q1 + Y2^2 - Q2 = -2 H14_printed + 2 u2 H12
    u2 = U_RING.gen("u2")
    n_lit, D_lit = u_to_xy(-2 * H14 + 2 * u2 * H12)
    out["H14_literal"] = n_lit == (r1 + r2) * delta ** D_lit

    # route through symmetrize: rational parts by hand, polynomial parts symmetrized
    u4, u5, u7 = U_RING.gens("u4", "u5", "u7")
    q12, rem12 = divide_by_difference(Q2 - Q1, "X1", "X2")
    q14, rem14 = divide_by_difference(X1 * Q2 - X2 * Q1, "X1", "X2")
    assert not rem12 and not rem14
    out["H12_symmetrize"] = 2 * u5 * u7 + symmetrize(q12) == H12
    out["H14_symmetrize"] = 2 * u2 * u5 * u7 - u7 ** 2 - u4 * u5 ** 2 + symmetrize(q14) == H14
    return out


@lru_cache(maxsize=1)
def build_H() -> tuple[Poly, Poly]:
    """The polynomials H12, H14 in u2, u4, u5, u7 with symbolic y (generators of T)."""
    checks = check_H_definitions()
    bad = [k for k, ok in checks.items() if not ok]
    if bad:
        raise AssertionError(f"H transcription cross-check failed: {bad}")
    return _printed_H()


# ---------------------------------------------------------------------------
# numeric sampling and probabilistic membership


def u_map(X1: complex, Y1: complex, X2: complex, Y2: complex) -> tuple[complex, complex, complex, complex]:
    return ((X1 + X2) / 2, (X1 - X2) ** 2 / 4, (Y1 - Y2) / (X1 - X2), (Y1 + Y2) / 2)


@dataclass(frozen=True)
class SymSquarePoint:
    P1: tuple[complex, complex]
    P2: tuple[complex, complex]
    u: tuple[complex, complex, complex, complex]


def sample_sym_square(params: CurveParams, rng: np.random.Generator, *, box: float = 2.0,
                      floor: float = 1e-3, max_draws: int = 100) -> SymSquarePoint:
    """Random pair of curve points, X uniform in the complex square [-box, box]^2."""
    if not params.is_numeric:
        raise ValueError("sampling needs numeric curve parameters")
    coeffs = params.Q_coeffs()
    for _ in range(max_draws):
        xs = rng.uniform(-box, box, size=4)
        signs = rng.choice([-1.0, 1.0], size=2)
        X1, X2 = complex(xs[0], xs[1]), complex(xs[2], xs[3])
        if abs(X1 - X2) < floor:
            continue
        Y1 = signs[0] * cmath.sqrt(complex(np.polyval(coeffs, X1)))
        Y2 = signs[1] * cmath.sqrt(complex(np.polyval(coeffs, X2)))
        return SymSquarePoint((X1, Y1), (X2, Y2), u_map(X1, Y1, X2, Y2))
    raise SamplingError(f"no admissible pair after {max_draws} draws")


def point_bindings(u: Sequence[complex], params: CurveParams) -> dict[str, complex]:
    b = dict(zip(U_NAMES, (complex(x) for x in u)))
    b.update({n: complex(v) for n, v in params.bound().items()})
    return b


@dataclass(frozen=True)
class MembershipVerdict:
    member: bool
    max_residual: float
    trials: int
    tolerance: float

    def to_json(self) -> dict:
        return {"member": self.member, "max_residual": self.max_residual,
                "trials": self.trials, "tolerance": self.tolerance}


def ideal_T_member(f: Poly, params: CurveParams, trials: int = 100, seed: int = 0,
                   tol: float = 1e-9) -> MembershipVerdict:
    """Probabilistic test of f in T: f must vanish on random points of the symmetric square.

    Residuals are ``|f(u)|`` divided by the sum of absolute monomial
    contributions at the same point.  Trial ``i`` draws from the stream
    seeded by ``(seed, i)``.
    """
    worst = 0.0
    for i in range(trials):
        rng = np.random.default_rng([seed, i])
        pt = sample_sym_square(params, rng)
        b = point_bindings(pt.u, params)
        val = abs(f.evaluate(b))
        scale = f.abs_monomial_sum(b)
        res = val / scale if scale > 0 else val
        worst = max(worst, res)
    return MembershipVerdict(worst < tol, worst, trials, tol)


# ---------------------------------------------------------------------------
# the two families of systems in u-coordinates


def theorem_rhs() -> dict[int, tuple[Poly, Poly, Poly, Poly]]:
    """Right-hand sides of L3* u_i and L5* u_i, i = 2, 4, 5, 7, as u-polynomials."""
    u2, u4, u5, u7, y4, y6, y8, y10, _, _ = U_RING.gens()
    L3 = (
        -u5,
        -2 * u7,
        -35 * u2 ** 4 - 42 * u2 ** 2 * u4 - 3 * u4 ** 2 - 2 * y4 * (5 * u2 ** 2 + u4) + 4 * y6 * u2 - y8,
        -7 * (3 * u2 ** 5 + 10 * u2 ** 3 * u4 + 3 * u2 * u4 ** 2) - 10 * y4 * (u2 ** 3 + u2 * u4)
        + 2 * y6 * (3 * u2 ** 2 + u4) - 3 * y8 * u2 + y10,
    )
    L5 = (
        u2 * u5 - u7,
        2 * (u2 * u7 - u4 * u5),
        u5 ** 2 + 14 * u2 ** 5 - 28 * u2 ** 3 * u4 - 18 * u2 * u4 ** 2 - 8 * y4 * u2 * u4
        + 2 * y6 * (u2 ** 2 + u4) - 2 * y8 * u2 + y10,
        -u5 * u7 + 21 * u2 ** 6 + 35 * u2 ** 4 * u4 - 21 * u2 ** 2 * u4 ** 2 - 3 * u4 ** 3
        + 2 * y4 * (5 * u2 ** 4 - u4 ** 2) - 2 * y6 * (3 * u2 ** 3 - u2 * u4) + y8 * (3 * u2 ** 2 - u4)
        - y10 * u2,
    )
    return {3: L3, 5: L5}


@dataclass
class IdentityResult:
    name: str
    ok: bool
    witness: str = ""

    def to_json(self) -> dict:
        return {"identity": self.name, "status": "pass" if self.ok else "fail", "witness": self.witness}


def verify_theorem_5_1(perturb: Mapping[str, object] | None = None,
                       ctx: QuotCtx | None = None) -> list[IdentityResult]:
    """L*(u_i) - RHS_i(u-map) in the localized quotient ring; all eight must vanish.

    ``perturb`` maps an equation name (e.g. ``"L3*u2"``) to a constant added
    to its right-hand side (negative control).
    """
    ctx = ctx or QuotCtx(SYMBOLIC)
    perturb = perturb or {}
    uq = uquad(ctx).as_dict()
    out = []
    for which, rhs in theorem_rhs().items():
        for name, r in zip(U_NAMES, rhs):
            label = f"L{which}*{name}"
            lhs = apply_L(which, uq[name])
            res = lhs - ctx.from_u(r + perturb.get(label, 0))
            out.append(IdentityResult(label, res.is_zero(), "" if res.is_zero() else res.dump()))
    return out


def xi_identity() -> bool:
    """v4 * v14 - v9^2 = 0 with v4 = 4u4, v9 = 4u4u5, v14 = 4u4u5^2."""
    u4, u5 = U_RING.gens("u4", "u5")
    v4, v9, v14 = 4 * u4, 4 * u4 * u5, 4 * u4 * u5 ** 2
    return (v4 * v14 - v9 ** 2).is_zero()


def random_symmetric_poly(rng: np.random.Generator, max_degree: int = 8, nterms: int = 6,
                          coeff_range: int = 9, params: Iterable[str] = ()) -> Poly:
    """Random swap-symmetric polynomial in X1, Y1, X2, Y2 of total degree <= max_degree."""
    params = tuple(params)
    out = XY_RING.zero()
    while out.is_zero():
        for _ in range(nterms):
            deg = int(rng.integers(0, max_degree + 1))
            cuts = np.sort(rng.integers(0, deg + 1, size=3))
            k1, l1, k2, l2 = cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1], deg - cuts[2]
            c = int(rng.integers(-coeff_range, coeff_range + 1))
            exps = {"X1": int(k1), "Y1": int(l1), "X2": int(k2), "Y2": int(l2)}
            if params and rng.random() < 0.3:
                exps[params[int(rng.integers(len(params)))]] = 1
            m = XY_RING.monomial(exps, c)
            out = out + m + m.swap(_SWAP)
    return out
