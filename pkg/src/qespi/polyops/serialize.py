"""JSON-ready dictionaries for polynomials and operators.

Schema: ``{"variables": [...], "terms": [{"mon": [...], "der": [...], "re": "p/q", "im": "p/q"}]}``.
Polynomials omit ``der``.  Terms are emitted leading-first in graded-lex order.
"""

from __future__ import annotations

from .diffop import DiffOp
from .multipoly import MultiPoly
from .scalar import CScalar


def to_json(obj) -> dict:
    if isinstance(obj, DiffOp):
        terms = []
        for (m, d), c in obj.sorted_terms():
            re, im = c.parts()
            terms.append({"mon": list(m), "der": list(d), "re": re, "im": im})
        return {"variables": list(obj.variables), "terms": terms}
    if isinstance(obj, MultiPoly):
        terms = []
        for e, c in obj.sorted_terms():
            re, im = c.parts()
            terms.append({"mon": list(e), "re": re, "im": im})
        return {"variables": list(obj.variables), "terms": terms}
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def from_json(data: dict):
    """Inverse of :func:`to_json`; returns a DiffOp if any term carries ``der``."""
    variables = tuple(data["variables"])
    terms = data["terms"]
    if any("der" in t for t in terms):
        return DiffOp(
            variables,
            {
                (tuple(t["mon"]), tuple(t.get("der", [0] * len(variables)))): CScalar.from_parts(
                    t["re"], t.get("im", "0/1")
                )
                for t in terms
            },
        )
    return MultiPoly(
        variables, {tuple(t["mon"]): CScalar.from_parts(t["re"], t.get("im", "0/1")) for t in terms}
    )
