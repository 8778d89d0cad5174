"""Sparse multivariate polynomials over exact scalars with signed grading weights."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

import numpy as np

from .scalar import AlgElem, to_complex


class RingMismatch(ValueError):
    pass


class UnboundVariable(KeyError):
    pass


class ZeroPolynomialDegree(ValueError):
    pass


@dataclass(frozen=True)
class PolyRing:
    """An ordered variable universe with one integer weight per variable."""

    names: tuple[str, ...]
    weights: tuple[int, ...]

    def __post_init__(self):
        if len(self.names) != len(self.weights):
            raise ValueError("one weight per variable")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")

    @classmethod
    def of(cls, spec: Mapping[str, int] | Iterable[tuple[str, int]]) -> "PolyRing":
        items = list(spec.items()) if isinstance(spec, Mapping) else list(spec)
        return cls(tuple(n for n, _ in items), tuple(w for _, w in items))

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise RingMismatch(f"variable {name!r} not in ring {self.names}") from None

    def weight(self, name: str) -> int:
        return self.weights[self.index(name)]

    def zero(self) -> "Poly":
        return Poly(self, {})

    def const(self, c) -> "Poly":
        return Poly(self, {(0,) * self.nvars: c} if c else {})

    def one(self) -> "Poly":
        return self.const(1)

    def gen(self, name: str) -> "Poly":
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return Poly(self, {tuple(e): 1})

    def gens(self, *names: str) -> tuple["Poly", ...]:
        return tuple(self.gen(n) for n in (names or self.names))

    def monomial(self, exps: Mapping[str, int], coeff=1) -> "Poly":
        e = [0] * self.nvars
        for n, k in exps.items():
            e[self.index(n)] = k
        return Poly(self, {tuple(e): coeff} if coeff else {})


def _clean(terms: dict) -> dict:
    return {e: c for e, c in terms.items() if c}


class Poly:
    """Immutable sparse polynomial: map exponent tuple -> nonzero coefficient."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[tuple[int, ...], object]):
        self.ring = ring
        self.terms = _clean(terms)
        self._hash = None

    # -- coercion ---------------------------------------------------------
    def _coerce(self, other) -> "Poly | None":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring.names} vs {other.ring.names}")
            return other
        if isinstance(other, (int, Fraction, AlgElem)):
            return self.ring.const(other)
        return None

    # -- ring operations ---------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in o.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

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
        if isinstance(other, (int, Fraction, AlgElem)):
            if not other:
                return self.ring.zero()
            return Poly(self.ring, _clean({e: c * other for e, c in self.terms.items()}))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.terms, o.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for e1, c1 in b.items():
            for e2, c2 in a.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = get(e, 0) + c1 * c2
        return Poly(self.ring, _clean(out))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, AlgElem)):
            inv = Fraction(1, other) if isinstance(other, int) else 1 / other
            return self * inv
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers need a nonnegative integer exponent")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction, AlgElem)):
            return self.terms == self.ring.const(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    # -- inspection --------------------------------------------------------
    def variables(self) -> set[str]:
        used = set()
        for e in self.terms:
            used.update(n for n, k in zip(self.ring.names, e) if k)
        return used

    def degree_in(self, name: str) -> int:
        i = self.ring.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, 0)

    def coefficient(self, exps: Mapping[str, int]):
        e = [0] * self.ring.nvars
        for n, k in exps.items():
            e[self.ring.index(n)] = k
        return self.terms.get(tuple(e), 0)

    def monomial_weight(self, e: tuple[int, ...]) -> int:
        return sum(w * k for w, k in zip(self.ring.weights, e))

    def weighted_degree(self) -> tuple[bool, int | None]:
        """Return ``(is_homogeneous, degree)``; degree is ``None`` if not homogeneous."""
        if not self.terms:
            raise ZeroPolynomialDegree("weighted degree of the zero polynomial is undefined")
        degs = {self.monomial_weight(e) for e in self.terms}
        if len(degs) == 1:
            return True, degs.pop()
        return False, None

    def coefficients_in(self, name: str) -> dict[int, "Poly"]:
        """View as a univariate polynomial in ``name``: power -> coefficient Poly."""
        i = self.ring.index(name)
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[i]
            rest = e[:i] + (0,) + e[i + 1:]
            out.setdefault(k, {})[rest] = c
        return {k: Poly(self.ring, t) for k, t in out.items()}

    def is_integral(self) -> bool:
        for c in self.terms.values():
            if isinstance(c, Fraction) and c.denominator != 1:
                return False
            if isinstance(c, AlgElem):
                return False
        return True

    # -- calculus ----------------------------------------------------------
    def diff(self, name: str) -> "Poly":
        i = self.ring.index(name)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                out[e[:i] + (k - 1,) + e[i + 1:]] = c * k
        return Poly(self.ring, out)

    # -- change of ring ----------------------------------------------------
    def to_ring(self, ring: PolyRing, rename: Mapping[str, str] | None = None) -> "Poly":
        """Re-embed into ``ring``, mapping variables by name (optionally renamed)."""
        rename = rename or {}
        idx = []
        for n in self.ring.names:
            idx.append(ring.index(rename.get(n, n)) if any(e[self.ring.index(n)] for e in self.terms) else None)
        out = {}
        for e, c in self.terms.items():
            ne = [0] * ring.nvars
            for k, j in zip(e, idx):
                if k:
                    ne[j] += k
            ne = tuple(ne)
            out[ne] = out.get(ne, 0) + c
        return Poly(ring, _clean(out))

    def swap(self, pairs: Iterable[tuple[str, str]]) -> "Poly":
        perm = list(range(self.ring.nvars))
        for a, b in pairs:
            i, j = self.ring.index(a), self.ring.index(b)
            perm[i], perm[j] = j, i
        return Poly(self.ring, {tuple(e[perm[k]] for k in range(len(e))): c for e, c in self.terms.items()})

    # -- evaluation --------------------------------------------------------
    def substitute(self, bindings: Mapping[str, object], *, target: PolyRing | None = None):
        """Compose with ``bindings``; see :func:`substitute`."""
        return substitute(self, bindings, target=target)

    def evaluate(self, point: Mapping[str, complex], coeff: Callable = to_complex) -> complex:
        """IEEE double-complex evaluation; every used variable must be bound."""
        missing = self.variables() - set(point)
        if missing:
            raise UnboundVariable(f"unbound variables for numeric evaluation: {sorted(missing)}")
        vals = [complex(point.get(n, 0)) for n in self.ring.names]
        acc = 0j
        for e, c in self.terms.items():
            m = coeff(c)
            for v, k in zip(vals, e):
                if k:
                    m *= v ** k
            acc += m
        return acc

    def abs_monomial_sum(self, point: Mapping[str, complex]) -> float:
        """Sum of |coefficient * monomial| at ``point``; the natural scale for residuals."""
        vals = [complex(point.get(n, 0)) for n in self.ring.names]
        acc = 0.0
        for e, c in self.terms.items():
            m = abs(to_complex(c))
            for v, k in zip(vals, e):
                if k:
                    m *= abs(v) ** k
            acc += m
        return acc

    # -- printing ----------------------------------------------------------
    def sorted_terms(self) -> list[tuple[tuple[int, ...], object]]:
        """Canonical order: descending weighted degree, ties by reversed exponent vector."""
        return sorted(self.terms.items(), key=lambda t: (self.monomial_weight(t[0]), t[0][::-1]), reverse=True)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!s})"


def _fmt_coeff(c) -> str:
    if isinstance(c, AlgElem):
        return f"({c})"
    if isinstance(c, Fraction) and c.denominator == 1:
        return str(c.numerator)
    return str(c)


def format_poly(p: Poly) -> str:
    """Render in the CLI expression grammar, canonical monomial order."""
    if not p.terms:
        return "0"
    out = []
    for e, c in p.sorted_terms():
        mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(p.ring.names, e) if k)
        neg = not isinstance(c, AlgElem) and c < 0
        mag = -c if neg else c
        if not mono:
            body = _fmt_coeff(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_fmt_coeff(mag)}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def substitute(p: Poly, bindings: Mapping[str, object], *, target: PolyRing | None = None):
    """Compose ``p`` with ``bindings`` (variable -> Poly | Series2 | number | ring element).

    Target kind is taken from the bound values, which must all be of one kind
    (scalars may mix in).  For a Poly target, unbound variables are carried
    through by name into the target ring.  For numeric targets every used
    variable must be bound.
    """
    from .series import Series2  # local import: series depends on poly

    used = p.variables()
    kinds = {type(v) for n, v in bindings.items() if n in used and not isinstance(v, (int, Fraction, AlgElem))}
    if any(issubclass(k, (complex, float, np.number)) for k in kinds):
        if len(kinds) > 1:
            raise TypeError(f"mixed binding kinds: {kinds}")
        return p.evaluate({n: complex(bindings[n]) for n in used if n in bindings})
    if len(kinds) > 1:
        raise TypeError(f"mixed binding kinds: {kinds}")
    if not kinds:
        if target is None:
            raise TypeError("no non-scalar binding; pass target= to build a Poly")
        kind = Poly
    else:
        kind = kinds.pop()

    if kind is Poly:
        ring = target or next(v.ring for n, v in bindings.items() if n in used and isinstance(v, Poly))
        vals = {}
        for n in used:
            if n in bindings:
                v = bindings[n]
                vals[n] = v if isinstance(v, Poly) else ring.const(v)
            else:
                vals[n] = ring.gen(n)
        zero, one = ring.zero(), ring.one()
    else:
        missing = used - set(bindings)
        if missing:
            raise UnboundVariable(f"unbound variables: {sorted(missing)}")
        vals = dict(bindings)
        sample = next(v for n, v in bindings.items() if n in used and not isinstance(v, (int, Fraction, AlgElem)))
        if kind is Series2:
            zero, one = sample.zero_like(), sample.one_like()
            vals = {n: (v if isinstance(v, Series2) else sample.const_like(v)) for n, v in vals.items()}
        else:
            zero, one = sample.zero_like(), sample.one_like()
            vals = {n: (v if isinstance(v, kind) else sample.const_like(v)) for n, v in vals.items()}
    return eval_generic(p, vals, zero, one)


def eval_generic(p: Poly, vals: Mapping[str, object], zero, one):
    """Sum of coefficient * product of powers, with per-variable power caches."""
    names = p.ring.names
    cache: dict[tuple[int, int], object] = {}

    def power(i: int, k: int):
        key = (i, k)
        if key not in cache:
            if k == 1:
                cache[key] = vals[names[i]]
            else:
                half = power(i, k // 2)
                sq = half * half
                cache[key] = sq * vals[names[i]] if k % 2 else sq
        return cache[key]

    acc = zero
    for e, c in p.terms.items():
        m = None
        for i, k in enumerate(e):
            if k:
                f = power(i, k)
                m = f if m is None else m * f
        acc = acc + (one * c if m is None else m * c)
    return acc


def divide_by_difference(p: Poly, a: str, b: str) -> tuple[Poly, Poly]:
    """Divide ``p`` by ``(a - b)`` as a polynomial in ``a``: returns (quotient, remainder).

    The remainder is ``p`` with ``a`` replaced by ``b``; it is zero iff the
    division is exact.
    """
    ring = p.ring
    ia = ring.index(a)
    by_power = p.coefficients_in(a)
    if not by_power:
        return ring.zero(), ring.zero()
    gb = ring.gen(b)
    quotient: dict = {}
    carry = ring.zero()
    # synthetic division from the top power down
    for k in range(max(by_power), 0, -1):
        carry = by_power.get(k, ring.zero()) + carry * gb
        for e, v in carry.terms.items():
            e2 = e[:ia] + (e[ia] + k - 1,) + e[ia + 1:]
            quotient[e2] = v
    remainder = by_power.get(0, ring.zero()) + carry * gb
    return Poly(ring, quotient), remainder
