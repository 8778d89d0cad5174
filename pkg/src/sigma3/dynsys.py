"""Systems (I) and (II) on C^4, their polynomial integrals, and symbolic identities."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exactalg import Poly, PolyRing

G_NAMES = ("G2", "G4", "G5", "G7")
SYS_PARAMS = ("y4", "y6", "y8", "y10")
G_RING = PolyRing.of((("G2", 2), ("G4", 4), ("G5", 5), ("G7", 7), ("y4", 4), ("y6", 6), ("y8", 8), ("y10", 10)))


@dataclass(frozen=True)
class VectorField:
    name: str
    components: tuple[Poly, Poly, Poly, Poly]

    def __str__(self):
        return "\n".join(f"d{g} = {c}" for g, c in zip(G_NAMES, self.components))

    def to_json(self) -> dict:
        return {"name": self.name, "components": {g: str(c) for g, c in zip(G_NAMES, self.components)}}

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)


@dataclass(frozen=True)
class Integral:
    name: str
    value: Poly

    def __str__(self):
        return str(self.value)


def make_system(which: str) -> VectorField:
    G2, G4, G5, G7, y4, y6, y8, y10 = G_RING.gens()
    if which == "I":
        comps = (
            -G5,
            -2 * G7,
            -35 * G2 ** 4 - 42 * G2 ** 2 * G4 - 3 * G4 ** 2 - 2 * y4 * (5 * G2 ** 2 + G4) + 4 * y6 * G2 - y8,
            -7 * (3 * G2 ** 5 + 10 * G2 ** 3 * G4 + 3 * G2 * G4 ** 2) - 10 * y4 * (G2 ** 3 + G2 * G4)
            + 2 * y6 * (3 * G2 ** 2 + G4) - 3 * y8 * G2 + y10,
        )
    elif which == "II":
        comps = (
            G2 * G5 - G7,
            2 * (G2 * G7 - G4 * G5),
            G5 ** 2 + 14 * G2 ** 5 - 28 * G2 ** 3 * G4 - 18 * G2 * G4 ** 2 - 8 * y4 * G2 * G4
            + 2 * y6 * (G2 ** 2 + G4) - 2 * y8 * G2 + y10,
            -G5 * G7 + 21 * G2 ** 6 + 35 * G2 ** 4 * G4 - 21 * G2 ** 2 * G4 ** 2 - 3 * G4 ** 3
            + 2 * y4 * (5 * G2 ** 4 - G4 ** 2) - 2 * y6 * (3 * G2 ** 3 - G2 * G4) + y8 * (3 * G2 ** 2 - G4)
            - y10 * G2,
        )
    else:
        raise ValueError(f"unknown system {which!r}; expected 'I' or 'II'")
    return VectorField(which, comps)


def make_integrals() -> tuple[Integral, Integral]:
    G2, G4, G5, G7, y4, y6, y8, y10 = G_RING.gens()
    I12 = (2 * G5 * G7 - 7 * G2 ** 6 - 35 * G2 ** 4 * G4 - 21 * G2 ** 2 * G4 ** 2 - G4 ** 3
           - y4 * (5 * G2 ** 4 + 10 * G2 ** 2 * G4 + G4 ** 2)
           + 4 * y6 * (G2 ** 3 + G2 * G4) - y8 * (3 * G2 ** 2 + G4) + 2 * y10 * G2)
    I14 = (-G7 ** 2 - G4 * G5 ** 2 + 2 * G2 * G5 * G7 - 6 * G2 ** 7 - 14 * G2 ** 5 * G4
           + 14 * G2 ** 3 * G4 ** 2 + 6 * G2 * G4 ** 3
           - 4 * y4 * (G2 ** 5 - G2 * G4 ** 2) + y6 * (3 * G2 ** 4 - 2 * G2 ** 2 * G4 - G4 ** 2)
           - 2 * y8 * (G2 ** 3 - G2 * G4) + y10 * (G2 ** 2 - G4))
    return Integral("I12", I12), Integral("I14", I14)


def lie_derivative(vf: VectorField, f: Poly) -> Poly:
    out = G_RING.zero()
    for g, c in zip(G_NAMES, vf.components):
        d = f.diff(g)
        if d:
            out = out + c * d
    return out


def lie_bracket(a: VectorField, b: VectorField) -> VectorField:
    """[a, b] on coordinates: component i is a(b_i) - b(a_i)."""
    comps = tuple(lie_derivative(a, bi) - lie_derivative(b, ai) for ai, bi in zip(a.components, b.components))
    return VectorField(f"[{a.name},{b.name}]", comps)


def constant_field(vec: Sequence[int]) -> VectorField:
    return VectorField("const", tuple(G_RING.const(v) for v in vec))


# -- renaming between the u- and G-universes --------------------------------

_RENAME = {"u2": "G2", "u4": "G4", "u5": "G5", "u7": "G7"}


def from_u(p: Poly) -> Poly:
    """Rename u_i -> G_i; fails if p involves y12 or y14."""
    return p.to_ring(G_RING, _RENAME)


def rhs_consistency() -> dict[str, bool]:
    """The system components equal the L3*/L5* right-hand sides under u -> G."""
    from .curvering import theorem_rhs

    out = {}
    for which, name in ((3, "I"), (5, "II")):
        vf = make_system(name)
        for g, c, r in zip(G_NAMES, vf.components, theorem_rhs()[which]):
            out[f"{name}:{g}"] = from_u(r) == c
    return out


def integrals_match_H() -> dict[str, bool]:
    """I12 = H12 + y12 and I14 = H14 + y14 after u -> G."""
    from .curvering import U_RING, build_H

    H12, H14 = build_H()
    I12, I14 = make_integrals()
    return {
        "I12": from_u(H12 + U_RING.gen("y12")) == I12.value,
        "I14": from_u(H14 + U_RING.gen("y14")) == I14.value,
    }


def conservation_identities() -> dict[str, Poly]:
    """Lie derivatives of both integrals along both systems (all must be zero)."""
    out = {}
    for s in ("I", "II"):
        vf = make_system(s)
        for integ in make_integrals():
            out[f"{s}:{integ.name}"] = lie_derivative(vf, integ.value)
    return out


# -- numeric evaluation ------------------------------------------------------


class CompiledPoly:
    """Fast double-complex evaluation of a G-polynomial for fixed numeric y.

    Stored as a coefficient vector and an exponent matrix over (G2, G4, G5, G7);
    states may be a single 4-vector or an (n, 4) array.
    """

    def __init__(self, p: Poly, params: Sequence[complex]):
        ys = dict(zip(SYS_PARAMS, (complex(v) for v in params)))
        merged: dict[tuple, complex] = {}
        for e, c in p.terms.items():
            coeff = complex(float(c))
            for n, k in zip(SYS_PARAMS, e[4:]):
                if k:
                    coeff *= ys[n] ** k
            merged[e[:4]] = merged.get(e[:4], 0) + coeff
        self.exps = np.array(list(merged.keys()) or [(0, 0, 0, 0)], dtype=np.int64)
        self.coeffs = np.array(list(merged.values()) or [0], dtype=complex)
        self.maxdeg = int(self.exps.max())

    def eval_powers(self, powers: np.ndarray) -> np.ndarray:
        # powers[k, :, j] = state[:, j] ** k; product over the four coordinates
        mono = np.prod(np.stack([powers[self.exps[:, j], :, j] for j in range(4)]), axis=0)
        return self.coeffs @ mono


def _powers(s: np.ndarray, maxdeg: int) -> np.ndarray:
    powers = np.ones((maxdeg + 1,) + s.shape, dtype=complex)
    for k in range(1, maxdeg + 1):
        powers[k] = powers[k - 1] * s
    return powers


class CompiledSet:
    """Several G-polynomials evaluated together, sharing the power table."""

    def __init__(self, polys: Sequence[Poly], params: Sequence[complex]):
        self._parts = [CompiledPoly(p, params) for p in polys]
        self._maxdeg = max(c.maxdeg for c in self._parts)

    def __call__(self, state) -> np.ndarray:
        s = np.asarray(state, dtype=complex)
        single = s.ndim == 1
        s = np.atleast_2d(s)
        powers = _powers(s, self._maxdeg)
        out = np.stack([c.eval_powers(powers) for c in self._parts], axis=1)
        return out[0] if single else out


def compile_field(vf: VectorField, params: Sequence[complex]) -> CompiledSet:
    return CompiledSet(vf.components, params)


def compile_integrals(params: Sequence[complex]) -> CompiledSet:
    return CompiledSet([i.value for i in make_integrals()], params)


def eval_field(vf: VectorField, state, params: Sequence[complex]) -> np.ndarray:
    """Evaluate the four components at a state (or a stack of states)."""
    return compile_field(vf, params)(state)


def eval_integrals(state, params: Sequence[complex]) -> tuple[complex, complex]:
    b = dict(zip(G_NAMES, (complex(x) for x in state)))
    b.update(zip(SYS_PARAMS, (complex(v) for v in params)))
    I12, I14 = make_integrals()
    return I12.value.evaluate(b), I14.value.evaluate(b)
