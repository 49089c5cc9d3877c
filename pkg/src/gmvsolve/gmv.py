"""The GMV polynomial system: generation, initialization, back-substitution, oracle.

Over ``F_p[x0, .., xn]``::

    f0  = b1 x0 + x1 + xn
    f1' = a0 x0^3 - (b0 x0 + 2 x1)(a1 x0^2 + x1^2 + 1)
    fi  = xi (x_{i-1}^2 - 1) + (ai x1 + bi xn)(2 xi x_{i-1} - x_{i-1}^2 + 1) + 2 x_{i-1},  2 <= i < n
    fn  = t (x_{n-1}^2 + 2 xn x_{n-1} - 1) - xn (x_{n-1}^2 - 1) + 2 x_{n-1}

Only ``fn`` depends on ``t``.
"""

from __future__ import annotations

import dataclasses
import json
import logging
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from . import toy_vectors
from .errors import BadN, DegenerateLeadingCoefficient, OracleTooLarge
from .ff import FieldElement, PrimeField, sample_uniform
from .mpoly import MultiPoly, ReductionRule
from .uniroot import UnivariatePoly, find_roots

log = logging.getLogger(__name__)

ORACLE_MAX_P = 1 << 16
ORACLE_MAX_N = 8


@dataclass(frozen=True)
class GmvSystem:
    field: PrimeField
    n: int
    t: int
    a: tuple
    b: tuple

    def __post_init__(self):
        if self.n < 4:
            raise BadN(f"n must be >= 4, got {self.n}")
        if len(self.a) != self.n or len(self.b) != self.n:
            raise ValueError("constant vectors a, b need n entries each")
        if self.b[1] % self.field.p == 0:
            raise ValueError("b1 must be nonzero")

    def with_t(self, t: int) -> GmvSystem:
        return dataclasses.replace(self, t=int(t) % self.field.p)

    def _x(self, i: int) -> MultiPoly:
        return MultiPoly.variable(self.field, i)

    @cached_property
    def f0(self) -> MultiPoly:
        return self._x(0).scale(self.b[1]) + self._x(1) + self._x(self.n)

    @cached_property
    def f1_prime(self) -> MultiPoly:
        x0, x1 = self._x(0), self._x(1)
        a0, a1, b0 = self.a[0], self.a[1], self.b[0]
        return (x0**3).scale(a0) - (x0.scale(b0) + x1.scale(2)) * ((x0**2).scale(a1) + x1**2 + 1)

    def f(self, i: int) -> MultiPoly:
        """``f_i`` for ``2 <= i <= n`` (``f_n`` uses ``self.t``)."""
        n = self.n
        if i == n:
            return self.fn_for(self.t)
        if not 2 <= i < n:
            raise IndexError(f"f_{i} is not one of f_2..f_n")
        return self._chain_polys[i]

    @cached_property
    def _chain_polys(self) -> dict:
        out = {}
        xn = self._x(self.n)
        x1 = self._x(1)
        for i in range(2, self.n):
            xi, y = self._x(i), self._x(i - 1)
            c = x1.scale(self.a[i]) + xn.scale(self.b[i])
            out[i] = xi * (y**2 - 1) + c * ((xi * y).scale(2) - y**2 + 1) + y.scale(2)
        return out

    def fn_for(self, t: int) -> MultiPoly:
        y, xn = self._x(self.n - 1), self._x(self.n)
        return (y**2 + (xn * y).scale(2) - 1).scale(t) - xn * (y**2 - 1) + y.scale(2)

    @property
    def polys(self) -> list[MultiPoly]:
        """``[f0, f1', f2, .., fn]``."""
        return [self.f0, self.f1_prime] + [self.f(i) for i in range(2, self.n + 1)]

    def degree_table(self) -> list[tuple[str, tuple]]:
        """Degree vectors in ``x1..xn`` after x0 is eliminated, with ``f1`` first."""
        rows = [("f1", initialize(self).f1.degree_profile(self.n))]
        rows += [(f"f{i}", self.f(i).degree_profile(self.n)) for i in range(2, self.n + 1)]
        return rows

    def to_json(self) -> str:
        d = {
            "p": str(self.field.p),
            "n": self.n,
            "t": str(self.t),
            "a": [str(v) for v in self.a],
            "b": [str(v) for v in self.b],
        }
        return json.dumps(d, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> GmvSystem:
        d = json.loads(text)
        field = PrimeField(int(d["p"]))
        p = field.p
        return cls(
            field,
            int(d["n"]),
            int(d["t"]) % p,
            tuple(int(v) % p for v in d["a"]),
            tuple(int(v) % p for v in d["b"]),
        )

    def constants_key(self) -> str:
        """Everything except ``t``, as text (used to key precomputations)."""
        return f"p={self.field.p};n={self.n};a={','.join(map(str, self.a))};b={','.join(map(str, self.b))}"


def generate(field: PrimeField, n: int, seed) -> GmvSystem:
    """Random system; ``t, a_0..a_{n-1}, b_0..b_{n-1}`` drawn in that order."""
    if n < 4:
        raise BadN(f"n must be >= 4, got {n}")
    rng = random.Random(seed)
    t = sample_uniform(field, rng).value
    a = [sample_uniform(field, rng).value for _ in range(n)]
    b = [sample_uniform(field, rng).value for _ in range(n)]
    while b[1] == 0:
        b[1] = sample_uniform(field, rng).value
    return GmvSystem(field, n, t, tuple(a), tuple(b))


def load_example1_pair() -> tuple[tuple[MultiPoly, MultiPoly], tuple[MultiPoly, MultiPoly]]:
    """``((f5, f6), (f3, f4))`` of the reference p = 1523 toy system."""
    F = toy_vectors.toy_field()
    parse = toy_vectors.parse_tex
    return (
        (parse(toy_vectors.F5, F), parse(toy_vectors.F6, F)),
        (parse(toy_vectors.F3, F), parse(toy_vectors.F4, F)),
    )


@dataclass(frozen=True)
class InitializedSystem:
    system: GmvSystem
    f1: MultiPoly
    rule: ReductionRule
    lead_c: int

    @property
    def n(self) -> int:
        return self.system.n

    @property
    def field(self) -> PrimeField:
        return self.system.field


def lead_coefficient_closed_form(sys: GmvSystem) -> int:
    p = sys.field.p
    a0, a1, b0, b1 = sys.a[0], sys.a[1], sys.b[0], sys.b[1]
    ib = pow(b1, -1, p)
    return (-a0 * ib**3 + a1 * b0 * ib**3 - 2 * a1 * ib**2 + b0 * ib - 2) % p


def initialize(sys: GmvSystem) -> InitializedSystem:
    """Eliminate x0 from f1' via f0 and extract the rule ``x1^3 = r(x1, xn)``."""
    field, n = sys.field, sys.n
    p = field.p
    ib = pow(sys.b[1], -1, p)
    x0_sub = (MultiPoly.variable(field, 1) + MultiPoly.variable(field, n)).scale(-ib)
    # f1' in x0 with coefficients in x1, then Horner in the substitute.
    f1 = MultiPoly.zero(field)
    for c in reversed(sys.f1_prime.coefficients_in(0)):
        f1 = f1 * x0_sub + c
    slices = f1.coefficients_in(1)
    lead = slices[3].constant_value() if len(slices) == 4 and slices[3].is_constant() else None
    closed = lead_coefficient_closed_form(sys)
    if closed == 0:
        raise DegenerateLeadingCoefficient("coefficient of x1^3 in f1 vanishes")
    if lead != closed:
        raise AssertionError(f"x1^3 coefficient {lead} disagrees with closed form {closed}")
    lower = MultiPoly.from_coefficients(slices[:3], 1)
    r = lower.scale(-field.inv_int(lead))
    return InitializedSystem(sys, f1, ReductionRule(r, xn=n), lead)


@dataclass(frozen=True, order=True)
class Solution:
    """Values ``(x0, .., xn)``; ordered by ``(xn, x1, ...)`` for listings."""

    sort_key: tuple = dataclasses.field(init=False, repr=False, compare=True)
    values: tuple = dataclasses.field(compare=False)

    def __post_init__(self):
        v = tuple(int(x) for x in self.values)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "sort_key", (v[-1], v[1]) + v)

    @property
    def xn(self) -> int:
        return self.values[-1]

    def to_json(self) -> str:
        return json.dumps({f"x{i}": str(v) for i, v in enumerate(self.values)})

    @classmethod
    def from_json(cls, line: str) -> Solution:
        d = json.loads(line)
        return cls(tuple(int(d[f"x{i}"]) for i in range(len(d))))


def verify(sys: GmvSystem, s: Solution) -> bool:
    point = dict(enumerate(s.values))
    return all(f.evaluate(point).value == 0 for f in sys.polys)


def _linear_parts(sys: GmvSystem, i: int, y: int, x1: int, xn: int) -> tuple[int, int]:
    """``(b1, b0)`` with ``f_i = b1*x_i + b0`` at the given values."""
    p = sys.field.p
    c = (sys.a[i] * x1 + sys.b[i] * xn) % p
    return (y * y - 1 + 2 * c * y) % p, (c * (1 - y * y) + 2 * y) % p


def _fn_value(sys: GmvSystem, y: int, xn: int) -> int:
    p = sys.field.p
    return (sys.t * (y * y + 2 * xn * y - 1) - xn * (y * y - 1) + 2 * y) % p


def _forward(sys: GmvSystem, x1: int, xn: int, branch_all: bool) -> list[tuple]:
    """Extend ``(x1, xn)`` through ``f_2 .. f_{n-1}``; checks ``f_n``."""
    p, n = sys.field.p, sys.n
    partial = [(x1,)]
    for i in range(2, n):
        nxt = []
        for chain in partial:
            b1, b0 = _linear_parts(sys, i, chain[-1], x1, xn)
            if b1:
                nxt.append(chain + ((-b0 * pow(b1, -1, p)) % p,))
            elif b0 == 0:
                if branch_all:
                    nxt.extend(chain + (v,) for v in range(p))
                else:
                    log.warning("abandoning chain: f_%d vanishes identically at x1=%d xn=%d", i, x1, xn)
        partial = nxt
    out = []
    ib = pow(sys.b[1], -1, p)
    for chain in partial:
        if _fn_value(sys, chain[-1], xn) == 0:
            x0 = (-(x1 + xn) * ib) % p
            out.append((x0,) + chain + (xn,))
    return out


def recover_solution(init: InitializedSystem, sys: GmvSystem, xn, seed=0) -> list[Solution]:
    """All verified solutions with the given ``xn`` (empty for a spurious value)."""
    field = sys.field
    xn = int(xn) % field.p
    cubic = init.f1.partial_evaluate({sys.n: xn}).to_univariate(1)
    branch_all = field.p <= ORACLE_MAX_P
    sols = []
    for x1 in find_roots(cubic, seed):
        for vals in _forward(sys, x1.value, xn, branch_all):
            s = Solution(vals)
            if verify(sys, s):
                sols.append(s)
    return sorted(set(sols))


def brute_force_solve(sys: GmvSystem) -> set[Solution]:
    """Every solution, by scanning all ``(x1, xn)`` in ``F_p^2``.

    Evaluates ``f1'`` directly at ``x0 = -(x1 + xn)/b1`` and reuses none of
    the resultant machinery.
    """
    p, n = sys.field.p, sys.n
    if p > ORACLE_MAX_P or n > ORACLE_MAX_N:
        raise OracleTooLarge(f"oracle limited to p <= {ORACLE_MAX_P}, n <= {ORACLE_MAX_N}")
    a0, a1, b0 = sys.a[0], sys.a[1], sys.b[0]
    ib = pow(sys.b[1], -1, p)
    x1 = np.arange(p, dtype=np.int64)
    found = set()
    for xn in range(p):
        x0 = (-(x1 + xn) * ib) % p
        x0sq = x0 * x0 % p
        lhs = a0 * (x0sq * x0 % p) % p
        rhs = ((b0 * x0 + 2 * x1) % p) * ((a1 * x0sq + x1 * x1 + 1) % p) % p
        for v1 in np.flatnonzero(lhs == rhs):
            for vals in _forward(sys, int(v1), xn, True):
                s = Solution(vals)
                if verify(sys, s):
                    found.add(s)
    return found


def write_solutions(path, sols: Iterable[Solution]):
    with open(path, "w") as fh:
        for s in sorted(sols):
            fh.write(s.to_json() + "\n")


def read_solutions(path) -> list[Solution]:
    with open(path) as fh:
        return [Solution.from_json(ln) for ln in fh if ln.strip()]
