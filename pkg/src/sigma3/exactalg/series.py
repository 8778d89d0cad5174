"""Truncated bivariate power series in (t, tau), truncated by total order."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Mapping

from .poly import Poly, substitute
from .scalar import AlgElem, scalar_from_json, scalar_inverse, scalar_to_json

_SCALARS = (int, Fraction, AlgElem)


class SeriesError(ArithmeticError):
    pass


class Series2:
    """Power series sum c[i,j] t^i tau^j with i + j <= order; immutable."""

    __slots__ = ("order", "coeffs", "names")

    def __init__(self, order: int, coeffs: Mapping[tuple[int, int], object] | None = None,
                 names: tuple[str, str] = ("t", "tau")):
        if order < 0:
            raise ValueError("series order must be nonnegative")
        self.order = order
        self.names = names
        self.coeffs = {k: c for k, c in (coeffs or {}).items() if c and k[0] + k[1] <= order}

    # -- constructors --------------------------------------------------------
    @classmethod
    def const(cls, c, order: int, names=("t", "tau")) -> "Series2":
        return cls(order, {(0, 0): c}, names)

    @classmethod
    def var(cls, which: int, order: int, names=("t", "tau")) -> "Series2":
        return cls(order, {(1, 0) if which == 0 else (0, 1): 1}, names)

    def zero_like(self) -> "Series2":
        return Series2(self.order, {}, self.names)

    def one_like(self) -> "Series2":
        return Series2.const(1, self.order, self.names)

    def const_like(self, c) -> "Series2":
        return Series2.const(c, self.order, self.names)

    def _coerce(self, other) -> "Series2 | None":
        if isinstance(other, Series2):
            return other
        if isinstance(other, _SCALARS):
            return self.const_like(other)
        return None

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = min(self.order, o.order)
        out = {k: c for k, c in self.coeffs.items() if k[0] + k[1] <= n}
        for k, c in o.coeffs.items():
            if k[0] + k[1] <= n:
                out[k] = out.get(k, 0) + c
        return Series2(n, out, self.names)

    __radd__ = __add__

    def __neg__(self):
        return Series2(self.order, {k: -c for k, c in self.coeffs.items()}, self.names)

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
        if isinstance(other, _SCALARS):
            return Series2(self.order, {k: c * other for k, c in self.coeffs.items()}, self.names)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = min(self.order, o.order)
        out: dict = {}
        b_items = [(k, c) for k, c in o.coeffs.items() if k[0] + k[1] <= n]
        for (i1, j1), c1 in self.coeffs.items():
            room = n - i1 - j1
            if room < 0:
                continue
            for (i2, j2), c2 in b_items:
                if i2 + j2 <= room:
                    key = (i1 + i2, j1 + j2)
                    out[key] = out.get(key, 0) + c1 * c2
        return Series2(n, out, self.names)

    __rmul__ = __mul__

    def constant_term(self):
        return self.coeffs.get((0, 0), 0)

    def reciprocal(self) -> "Series2":
        c0 = self.constant_term()
        if not c0:
            raise SeriesError("reciprocal of a series with zero constant term")
        inv0 = scalar_inverse(c0)
        rest = [(k, c) for k, c in self.coeffs.items() if k != (0, 0)]
        out = {(0, 0): inv0}
        for deg in range(1, self.order + 1):
            for i in range(deg + 1):
                j = deg - i
                acc = 0
                for (a, b), c in rest:
                    if a <= i and b <= j:
                        r = out.get((i - a, j - b))
                        if r:
                            acc = acc + c * r
                if acc:
                    out[(i, j)] = -(acc * inv0)
        return Series2(self.order, out, self.names)

    def __truediv__(self, other):
        if isinstance(other, _SCALARS):
            return self * scalar_inverse(other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.reciprocal()

    def __pow__(self, k: int):
        if k < 0:
            return self.reciprocal() ** (-k)
        result = self.one_like()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- calculus and slicing --------------------------------------------------
    def diff(self, which: int) -> "Series2":
        """Partial derivative; the result is exact through order - 1."""
        out = {}
        for (i, j), c in self.coeffs.items():
            if which == 0 and i:
                out[(i - 1, j)] = c * i
            elif which == 1 and j:
                out[(i, j - 1)] = c * j
        return Series2(max(self.order - 1, 0), out, self.names)

    def truncate(self, order: int) -> "Series2":
        return Series2(min(order, self.order), self.coeffs, self.names)

    def with_order(self, order: int) -> "Series2":
        """Same coefficients, declared order changed (padding with zeros if raised)."""
        return Series2(order, self.coeffs, self.names)

    def slice(self, which: int) -> dict[int, object]:
        """Set the *other* variable to zero: ``slice(1)`` gives the tau-series at t=0."""
        if which == 1:
            return {j: c for (i, j), c in self.coeffs.items() if i == 0}
        return {i: c for (i, j), c in self.coeffs.items() if j == 0}

    def coefficient(self, i: int, j: int = 0):
        if i + j > self.order:
            raise IndexError(f"coefficient ({i},{j}) beyond order {self.order}")
        return self.coeffs.get((i, j), 0)

    def items(self) -> Iterator[tuple[tuple[int, int], object]]:
        return iter(sorted(self.coeffs.items()))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, Series2) else other
        if o is None:
            return NotImplemented
        n = min(self.order, o.order)
        a = {k: c for k, c in self.coeffs.items() if sum(k) <= n}
        b = {k: c for k, c in o.coeffs.items() if sum(k) <= n}
        return a == b

    __hash__ = None

    def __repr__(self):
        body = " + ".join(f"({c})*{self.names[0]}^{i}*{self.names[1]}^{j}" for (i, j), c in self.items())
        return f"Series2(order={self.order}: {body or '0'})"

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "variables": list(self.names),
            "coefficients": [{"i": i, "j": j, "value": scalar_to_json(c)} for (i, j), c in self.items()],
        }

    @classmethod
    def from_json(cls, obj: dict, extensions=None) -> "Series2":
        coeffs = {(d["i"], d["j"]): scalar_from_json(d["value"], extensions) for d in obj["coefficients"]}
        return cls(obj["order"], coeffs, tuple(obj.get("variables", ("t", "tau"))))


def binomial_series(alpha, order: int, which: int = 0, names=("t", "tau")) -> Series2:
    """``(1 + x)^alpha`` for rational ``alpha`` with ``x`` the chosen variable.

    Coefficients come from ``(1 + x) f' = alpha f``, i.e.
    ``a[k+1] = a[k] (alpha - k) / (k + 1)``.
    """
    alpha = Fraction(alpha)
    out = {}
    a = Fraction(1)
    for k in range(order + 1):
        out[(k, 0) if which == 0 else (0, k)] = a
        a = a * (alpha - k) / (k + 1)
    return Series2(order, out, names)


def series_newton_root(F: Poly, var: str, bindings: Mapping[str, Series2], seed, order: int) -> Series2:
    """Solve ``F(phi, bindings) = 0`` for a series ``phi`` with constant term ``seed``.

    Each Newton step doubles the number of correct total-degree levels.  The
    final root is checked by substituting it back.
    """
    dF = F.diff(var)
    names = next(iter(bindings.values())).names if bindings else ("t", "tau")

    def at(phi: Series2, m: int, poly: Poly) -> Series2:
        b = {n: s.truncate(m) for n, s in bindings.items()}
        b[var] = phi.with_order(m)
        return substitute(poly, b)

    phi = Series2.const(seed, 0, names)
    f0 = at(phi, 0, F).constant_term()
    if f0:
        raise SeriesError(f"seed is not a root: F(seed) has constant term {f0}")
    d0 = at(phi, 0, dF).constant_term()
    if not d0:
        raise SeriesError(f"derivative at the seed has non-invertible constant term {d0}")
    correct = 0
    while correct < order:
        m = min(2 * correct + 1, order)
        phi = phi.with_order(m)
        phi = phi - at(phi, m, F) / at(phi, m, dF)
        correct = m
    phi = phi.with_order(order)
    residual = at(phi, order, F)
    if residual:
        raise SeriesError(f"Newton iteration did not converge; residual {residual!r}")
    return phi
