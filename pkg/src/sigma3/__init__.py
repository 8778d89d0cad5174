"""Genus-3 symmetric-square machinery: u-coordinates, commuting derivations,
the polynomial systems on C^4 with two integrals, and their rational-limit
series solutions."""

__version__ = "0.1.0"
