"""Reference polynomials of the p = 1523, n = 7 toy instance.

Two pairs of input polynomials and their resultants, copied term by term.
The printed resultants are reduced modulo ``x1^3 - r(x1, x7)``.  The system
constants behind ``r`` were never printed; ``RULE_R`` is the unique ``r``
that turns the unreduced first resultant into the printed one, and it
reproduces the second printed resultant independently.
"""

from __future__ import annotations

import re

from .ff import PrimeField
from .mpoly import MultiPoly, ReductionRule

P = 1523
N = 7

F5 = "1279x_1x_4^2+488x_1x_4x_5+x_4^2x_5+1456x_4^2x_7+134x_4x_5x_7+244x_1+2x_4+1522x_5+67x_7"
F6 = "92x_1x_5^2+1339x_1x_5x_6+x_5^2x_6+664x_5^2x_7+195x_5x_6x_7+1431x_1+2x_5+1522x_6+859x_7"
F3 = "1171x_1x_2^2+704x_1x_2x_3+x_2^2x_3+685x_2^2x_7+153x_2x_3x_7+352x_1+2x_2+1522x_3+838x_7"
F4 = "1288x_1x_3^2+470x_1x_3x_4+x_3^2x_4+1409x_3^2x_7+228x_3x_4x_7+235x_1+2x_3+1522x_4+114x_7"

RES_56 = (
    "933x_1^2x_4^4x_6+388x_1^2x_4^4x_7+1494x_1^2x_4^3x_6x_7+936x_1x_4^4x_6x_7"
    "+431x_1x_4^4x_7^2+1322x_1x_4^3x_6x_7^2+801x_4^4x_6x_7^2+49x_4^4x_7^3"
    "+1327x_4^3x_6x_7^3+686x_1^2x_4^3+646x_1x_4^4+494x_1^2x_4^2x_6"
    "+462x_1x_4^3x_6+1522x_4^4x_6+718x_1^2x_4^2x_7+698x_1x_4^3x_7"
    "+679x_4^4x_7+29x_1^2x_4x_6x_7+476x_1x_4^2x_6x_7+330x_4^3x_6x_7"
    "+460x_1x_4^2x_7^2+158x_4^3x_7^2+201x_1x_4x_6x_7^2+1286x_4^2x_6x_7^2"
    "+1229x_4^2x_7^3+196x_4x_6x_7^3+837x_1^2x_4+693x_1x_4^2"
    "+1519x_4^3+933x_1^2x_6+1061x_1x_4x_6+6x_4^2x_6"
    "+388x_1^2x_7+825x_1x_4x_7+495x_4^2x_7+936x_1x_6x_7"
    "+1193x_4x_6x_7+431x_1x_7^2+1365x_4x_7^2+801x_6x_7^2"
    "+49x_7^3+646x_1+4x_4+1522x_6+679x_7"
)

RES_34 = (
    "1497x_1^2x_2^4x_4+1003x_1^2x_2^4x_7+557x_1^2x_2^3x_4x_7+1014x_1x_2^4x_4x_7"
    "+365x_1x_2^4x_7^2+63x_1x_2^3x_4x_7^2+830x_2^4x_4x_7^2+1256x_2^4x_7^3"
    "+1068x_2^3x_4x_7^3+1419x_1^2x_2^3+931x_1x_2^4+156x_1^2x_2^2x_4"
    "+845x_1x_2^3x_4+1522x_2^4x_4+74x_1^2x_2^2x_7+1010x_1x_2^3x_7"
    "+9x_2^4x_7+966x_1^2x_2x_4x_7+8x_1x_2^2x_4x_7+1487x_2^3x_4x_7"
    "+856x_1x_2^2x_7^2+274x_2^3x_7^2+1460x_1x_2x_4x_7^2+1112x_2^2x_4x_7^2"
    "+79x_2^2x_7^3+455x_2x_4x_7^3+104x_1^2x_2+506x_1x_2^2+1519x_2^3"
    "+1497x_1^2x_4+678x_1x_2x_4+6x_2^2x_4+1003x_1^2x_7"
    "+513x_1x_2x_7+1469x_2^2x_7+1014x_1x_4x_7+36x_2x_4x_7"
    "+365x_1x_7^2+1249x_2x_7^2+830x_4x_7^2+1256x_7^3"
    "+931x_1+4x_2+1522x_4+9x_7"
)

RULE_R = "415x_1^2x_7+568x_1x_7^2+1432x_7^3+772x_1+529x_7"

_TERM = re.compile(r"(\d*)((?:x_\d+(?:\^\d+)?)*)")
_FACTOR = re.compile(r"x_(\d+)(?:\^(\d+))?")


def parse_tex(text: str, field: PrimeField) -> MultiPoly:
    """Parse sums like ``1279x_1x_4^2+2x_4+67`` (nonnegative coefficients only)."""
    terms: dict = {}
    for chunk in re.sub(r"\s+", "", text).split("+"):
        m = _TERM.fullmatch(chunk)
        if not m or not chunk:
            raise ValueError(f"cannot parse term {chunk!r}")
        coeff = int(m.group(1)) if m.group(1) else 1
        mono: dict = {}
        for v, e in _FACTOR.findall(m.group(2)):
            mono[int(v)] = mono.get(int(v), 0) + (int(e) if e else 1)
        key = tuple(sorted(mono.items()))
        terms[key] = terms.get(key, 0) + coeff
    return MultiPoly.from_terms(field, terms)


def toy_field() -> PrimeField:
    return PrimeField(P)


def toy_rule() -> ReductionRule:
    return ReductionRule(parse_tex(RULE_R, toy_field()), xn=N)


def expected_resultants() -> tuple[MultiPoly, MultiPoly]:
    """Printed ``res(f6, f5; x5)`` and ``res(f4, f3; x3)``."""
    F = toy_field()
    return parse_tex(RES_56, F), parse_tex(RES_34, F)
