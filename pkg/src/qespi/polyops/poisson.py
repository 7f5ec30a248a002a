"""Canonical Poisson bracket on polynomial phase-space functions."""

from __future__ import annotations

from .multipoly import MultiPoly

PHASE_VARIABLES = ("x", "p")


def phase_function(poly: MultiPoly) -> MultiPoly:
    """Validate that ``poly`` lives on the (x, p) phase plane."""
    if poly.variables != PHASE_VARIABLES:
        raise ValueError(f"phase functions use variables {PHASE_VARIABLES}, got {poly.variables}")
    return poly


def phase_var(name: str) -> MultiPoly:
    return MultiPoly.var(name, PHASE_VARIABLES)


def poisson_bracket(f: MultiPoly, g: MultiPoly, x: str = "x", p: str = "p") -> MultiPoly:
    """``{f, g} = df/dx dg/dp - df/dp dg/dx``."""
    if f.variables != g.variables:
        raise ValueError("variable mismatch")
    return f.diff(x) * g.diff(p) - f.diff(p) * g.diff(x)
