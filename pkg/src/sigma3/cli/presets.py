"""Named flow presets stored as JSON data files next to this module."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from ..exactalg import AlgElem, PolyRing, eval_generic, p_extension, parse_rational, q_extension
from ..flows import cparse
from .expr import parse_poly

PRESET_NAMES = ("example2", "example3", "example3_corrected")


@dataclass(frozen=True)
class Preset:
    name: str
    source: str
    system: str
    y: tuple[complex, ...]
    t_end: complex
    coefficients: dict[str, object]  # exact scalars in the extension
    exponents: dict[str, Fraction]

    def initial(self) -> list[complex]:
        return [complex(c) for c in self.coefficients.values()]

    def exact(self, t: complex) -> list[complex]:
        return [complex(c) * (1 + t) ** float(self.exponents[g]) for g, c in self.coefficients.items()]


def _ext(name: str):
    return {"p": p_extension, "q": q_extension}[name]()


def load_preset(name: str) -> Preset:
    if name not in PRESET_NAMES:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}")
    raw = json.loads(resources.files(__package__).joinpath("presets", f"{name}.json").read_text())
    ext = _ext(raw["extension"]["name"])
    ring = PolyRing.of(((ext.name, 1),))
    gen = ext.gen()
    coeffs, exps = {}, {}
    for g, spec in raw["closed_form"].items():
        num = eval_generic(parse_poly(spec["num"], ring), {ext.name: gen}, 0, 1)
        den = eval_generic(parse_poly(spec["den"], ring), {ext.name: gen}, 0, 1)
        if not isinstance(num, AlgElem):
            num = ext.elem([num])
        coeffs[g] = num / den
        exps[g] = parse_rational(spec["exponent"])
    return Preset(
        name=raw["name"],
        source=raw["source"],
        system=raw["system"],
        y=tuple(complex(float(parse_rational(v))) for v in raw["y"]),
        t_end=cparse(raw["t_end"]),
        coefficients=coeffs,
        exponents=exps,
    )
