"""Exact scalars: rationals and elements of simple algebraic extensions.

Rationals are plain :class:`fractions.Fraction` (or ``int``).  An extension
``Q[a]/(m(a))`` is described by an :class:`AlgExt`; its elements are
:class:`AlgElem` instances holding the coordinate vector on the power basis
``1, a, ..., a^(n-1)``.  Mixed arithmetic promotes rationals into the
extension.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from numbers import Rational as _RationalABC
from typing import Sequence, Union

import numpy as np


class ExtensionMismatch(ValueError):
    pass


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"not a rational: {x!r}")


def parse_rational(text: str) -> Fraction:
    """Parse ``"num/den"`` or ``"num"`` into a Fraction."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(x) -> str:
    x = as_fraction(x)
    return f"{x.numerator}/{x.denominator}"


# --- dense univariate helpers over Q, lists are low-to-high coefficient order ---

def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _upoly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _upoly_sub(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim([Fraction(x) for x in out])


def _upoly_divmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    a = _trim([Fraction(x) for x in a])
    b = _trim([Fraction(x) for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, y in enumerate(b):
            a[i + shift] -= c * y
        _trim(a)
    return _trim(q), a


def _upoly_inverse_mod(a: Sequence, m: Sequence) -> list:
    """Inverse of ``a`` modulo ``m`` by the extended Euclidean algorithm."""
    r0, r1 = _trim([Fraction(x) for x in m]), _trim([Fraction(x) for x in a])
    s0, s1 = [], [Fraction(1)]
    while r1:
        q, r = _upoly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _upoly_sub(s0, _upoly_mul(q, s1))
    if len(r0) != 1:
        raise ZeroDivisionError("element is not invertible (minimal polynomial is reducible)")
    inv_lead = 1 / r0[0]
    _, rem = _upoly_divmod([c * inv_lead for c in s0], m)
    return rem


@dataclass(frozen=True)
class AlgExt:
    """The field ``Q[name]/(minpoly)``.

    ``minpoly`` is given low-to-high and must be monic.  ``root_index`` picks
    the complex embedding: the roots of ``minpoly`` are sorted
    lexicographically by (real, imag) and the indexed one is used for numeric
    evaluation.
    """

    name: str
    minpoly: tuple[Fraction, ...]
    root_index: int = 0
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        mp = tuple(Fraction(c) for c in self.minpoly)
        object.__setattr__(self, "minpoly", mp)
        if len(mp) < 2 or mp[-1] != 1:
            raise ValueError("minimal polynomial must be monic of degree >= 1")

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    @cached_property
    def _reduction_table(self) -> list[list[Fraction]]:
        # a^(n+k) expressed on the power basis, for k < n - 1
        n = self.degree
        tail = [-c for c in self.minpoly[:-1]]
        table = [tail]
        for _ in range(n - 2):
            prev = table[-1]
            nxt = [Fraction(0)] + prev[:-1]
            top = prev[-1]
            nxt = [x + top * t for x, t in zip(nxt, tail)]
            table.append(nxt)
        return table

    def elem(self, coords: Sequence) -> "AlgElem":
        coords = [Fraction(c) for c in coords]
        if len(coords) > self.degree:
            _, coords = _upoly_divmod(coords, self.minpoly)
        coords = list(coords) + [Fraction(0)] * (self.degree - len(coords))
        return AlgElem(self, tuple(coords))

    def gen(self) -> "AlgElem":
        if self.degree == 1:
            return self.elem([-self.minpoly[0]])
        return self.elem([0, 1])

    def roots(self) -> np.ndarray:
        coeffs = [float(c) for c in reversed(self.minpoly)]
        r = np.roots(coeffs)
        order = np.lexsort((r.imag, r.real))
        return r[order]

    def embedding(self) -> complex:
        """The complex number the generator maps to."""
        return complex(self.roots()[self.root_index])

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "minimal_polynomial": [format_rational(c) for c in self.minpoly],
            "root_index": self.root_index,
            "root": [self.embedding().real, self.embedding().imag],
        }


def real_root_index(ext: AlgExt, predicate=lambda z: True, tol: float = 1e-9) -> int:
    """Index (in the sorted root list) of the first real root satisfying ``predicate``."""
    for i, z in enumerate(ext.roots()):
        if abs(z.imag) < tol and predicate(z.real):
            return i
    raise ValueError(f"no real root of {ext.name} satisfies the predicate")


class AlgElem:
    """Element of an :class:`AlgExt`; immutable."""

    __slots__ = ("ext", "coords")

    def __init__(self, ext: AlgExt, coords: tuple[Fraction, ...]):
        self.ext = ext
        self.coords = coords

    def _coerce(self, other) -> "AlgElem | None":
        if isinstance(other, AlgElem):
            if other.ext != self.ext:
                raise ExtensionMismatch(f"{self.ext.name} vs {other.ext.name}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ext.elem([other])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return AlgElem(self.ext, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return AlgElem(self.ext, tuple(-a for a in self.coords))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return AlgElem(self.ext, tuple(a - b for a, b in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgElem(self.ext, tuple(a * other for a in self.coords))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = self.ext.degree
        prod = [Fraction(0)] * (2 * n - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(o.coords):
                    if b:
                        prod[i + j] += a * b
        out = prod[:n]
        for k, c in enumerate(prod[n:]):
            if c:
                for i, t in enumerate(self.ext._reduction_table[k]):
                    out[i] += c * t
        return AlgElem(self.ext, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "AlgElem":
        if not self:
            raise ZeroDivisionError("inverse of zero in algebraic extension")
        return self.ext.elem(_upoly_inverse_mod(self.coords, self.ext.minpoly))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgElem(self.ext, tuple(a / other for a in self.coords))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.ext.elem([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self):
        return any(self.coords)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except ExtensionMismatch:
            return False
        if o is None:
            return NotImplemented
        return self.coords == o.coords

    def __hash__(self):
        if not any(self.coords[1:]):
            return hash(self.coords[0])
        return hash((self.ext.name, self.coords))

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def __complex__(self):
        z = self.ext.embedding()
        acc = 0j
        for c in reversed(self.coords):
            acc = acc * z + float(c)
        return acc

    def __repr__(self):
        return f"AlgElem({self.ext.name}: {self})"

    def __str__(self):
        parts = []
        for k in range(len(self.coords) - 1, -1, -1):
            c = self.coords[k]
            if not c:
                continue
            mono = "" if k == 0 else (self.ext.name if k == 1 else f"{self.ext.name}^{k}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {"extension": self.ext.name, "coords": [format_rational(c) for c in self.coords]}


Scalar = Union[int, Fraction, AlgElem]


def is_zero(x) -> bool:
    return not x


def to_complex(x) -> complex:
    if isinstance(x, AlgElem):
        return complex(x)
    if isinstance(x, _RationalABC):
        return complex(float(x))
    return complex(x)


def scalar_inverse(x):
    if isinstance(x, AlgElem):
        return x.inverse()
    if isinstance(x, int):
        return Fraction(1, x)
    return 1 / x


def scalar_to_json(x):
    if isinstance(x, AlgElem):
        return x.to_json()
    return format_rational(x)


def scalar_from_json(obj, extensions: dict[str, AlgExt] | None = None):
    if isinstance(obj, str):
        return parse_rational(obj)
    ext = (extensions or {})[obj["extension"]]
    return ext.elem([parse_rational(c) for c in obj["coords"]])


# The two extensions the rational limit needs.
def p_extension() -> AlgExt:
    """``p^5 = -45``; embedding at the unique real root ``-45^(1/5)``."""
    ext = AlgExt("p", (Fraction(45), 0, 0, 0, 0, 1))
    return AlgExt("p", ext.minpoly, real_root_index(ext))


def q_extension() -> AlgExt:
    """``q^6 = 15 q^3 + 45``; embedding at the real root with ``q^3 = (15 + sqrt(405))/2``."""
    ext = AlgExt("q", (Fraction(-45), 0, 0, Fraction(-15), 0, 0, 1))
    return AlgExt("q", ext.minpoly, real_root_index(ext, lambda x: x > 0))
