"""Parse ASCII polynomials such as "x^2-x-1", "3x**2 + 1" or "[-1, -1, 1]"."""
from __future__ import annotations

import json
import re
from typing import List

from ..errors import InvalidParameter


class PolyParseError(InvalidParameter):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


_TERM = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?P<coef>\d+)?\s*(?:\*\s*)?(?P<var>x(?:\s*(?:\^|\*\*)\s*(?P<exp>\d+))?)?\s*"
)


def parse_poly(text: str) -> List[int]:
    """Ascending integer coefficients q_0..q_d.

    A JSON array is taken verbatim as ascending coefficients.
    """
    stripped = text.strip()
    if not stripped:
        raise PolyParseError("empty polynomial", text, 0)
    if stripped.startswith("["):
        try:
            coeffs = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise PolyParseError("malformed coefficient array", text, exc.pos) from None
        if not isinstance(coeffs, list) or not all(type(c) is int for c in coeffs):
            raise PolyParseError("coefficient array must hold integers", text, 0)
        return coeffs
    terms = {}
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not (m.group("coef") or m.group("var")):
            raise PolyParseError("expected a term", text, m.end())
        if not first and m.group("sign") is None:
            raise PolyParseError("expected '+' or '-'", text, m.start("coef") if m.group("coef") else pos)
        if m.group("coef") and m.group("var") is None and "*" in m.group(0):
            raise PolyParseError("dangling '*'", text, m.end())
        coef = int(m.group("coef")) if m.group("coef") else 1
        if m.group("sign") == "-":
            coef = -coef
        if m.group("var") is None:
            exp = 0
        else:
            exp = int(m.group("exp")) if m.group("exp") else 1
        terms[exp] = terms.get(exp, 0) + coef
        pos = m.end()
        first = False
    degree = max(terms)
    return [terms.get(k, 0) for k in range(degree + 1)]
