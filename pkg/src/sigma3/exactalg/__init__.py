"""Exact coefficient arithmetic, graded sparse polynomials and truncated series."""
from .poly import (
    Poly,
    PolyRing,
    RingMismatch,
    UnboundVariable,
    ZeroPolynomialDegree,
    divide_by_difference,
    eval_generic,
    format_poly,
    substitute,
)
from .scalar import (
    AlgElem,
    AlgExt,
    ExtensionMismatch,
    format_rational,
    p_extension,
    parse_rational,
    q_extension,
    real_root_index,
    scalar_inverse,
    scalar_from_json,
    scalar_to_json,
    to_complex,
)
from .series import Series2, SeriesError, binomial_series, series_newton_root


def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    """``op`` in {"add", "sub", "mul"}; raises RingMismatch across universes."""
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring.names} vs {b.ring.names}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def weighted_degree(p: Poly) -> tuple[bool, int | None]:
    return p.weighted_degree()
