"""Multivariate polynomials over F_p with a small explicit variable support.

A :class:`MultiPoly` stores a dense coefficient array with one axis per
active variable, ascending by variable index.  Polynomials in this pipeline
touch at most five variables and are dense in them, so a packed array beats
a term dictionary by orders of magnitude.  The term view (:meth:`terms`) and
the canonical text format are derived from the array.

Variables are integers: ``i`` names ``x_i``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Mapping

import numpy as np

from . import _dense
from .errors import FieldMismatch, MissingVariable, NotUnivariate
from .ff import FieldElement, PrimeField

# Degree of the zero polynomial.  Compares below every integer and absorbs
# addition, so it never collides with a real degree.
ZERO_DEGREE = float("-inf")

# Total number of poly_mul calls since import (instrumentation).
mul_calls = 0


class MultiPoly:
    __slots__ = ("field", "vars", "coeffs")

    def __init__(self, field: PrimeField, vars: Iterable[int], coeffs: np.ndarray):
        """Wrap ``coeffs`` (canonical residues); trims and drops unused axes."""
        vars = tuple(vars)
        if coeffs.ndim != len(vars):
            raise ValueError(f"{coeffs.ndim}-d array for {len(vars)} variables")
        if list(vars) != sorted(set(vars)):
            raise ValueError(f"variables must be strictly ascending: {vars}")
        self.field = field
        self.vars, self.coeffs = _normalize(field, vars, coeffs)

    # construction -------------------------------------------------------

    @classmethod
    def zero(cls, field: PrimeField) -> MultiPoly:
        return cls(field, (), field.zeros(()))

    @classmethod
    def constant(cls, field: PrimeField, c) -> MultiPoly:
        return cls(field, (), field.array(int(c)))

    @classmethod
    def variable(cls, field: PrimeField, i: int) -> MultiPoly:
        return cls(field, (i,), field.array([0, 1]))

    @classmethod
    def from_terms(cls, field: PrimeField, terms: Mapping) -> MultiPoly:
        """Build from ``{monomial: coeff}``; a monomial is a dict or pairs ``(var, exp)``."""
        parsed = []
        allvars = set()
        for mono, c in terms.items():
            m = dict(mono) if not isinstance(mono, dict) else mono
            m = {v: e for v, e in m.items() if e}
            allvars.update(m)
            parsed.append((m, int(c)))
        vars = tuple(sorted(allvars))
        shape = [1] * len(vars)
        for m, _ in parsed:
            for k, v in enumerate(vars):
                shape[k] = max(shape[k], m.get(v, 0) + 1)
        arr = np.zeros(shape, dtype=object)
        for m, c in parsed:
            arr[tuple(m.get(v, 0) for v in vars)] += c
        return cls(field, vars, field.array(arr))

    @classmethod
    def from_coefficients(cls, coeffs: list[MultiPoly], v: int) -> MultiPoly:
        """Inverse of :meth:`coefficients_in`: ``sum(coeffs[k] * x_v**k)``."""
        field = coeffs[0].field
        acc = cls.zero(field)
        for k, c in enumerate(coeffs):
            if not c.is_zero():
                acc = acc + c.shift(v, k)
        return acc

    # basic queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.vars and int(self.coeffs[()]) == 0

    def is_constant(self) -> bool:
        return not self.vars

    def constant_value(self) -> int:
        if self.vars:
            raise NotUnivariate("polynomial is not constant")
        return int(self.coeffs[()])

    @property
    def num_terms(self) -> int:
        return int(np.count_nonzero(self.coeffs != 0))

    def degree_in(self, v: int):
        if self.is_zero():
            return ZERO_DEGREE
        if v not in self.vars:
            return 0
        return self.coeffs.shape[self.vars.index(v)] - 1

    def degree_profile(self, upto: int) -> tuple:
        """Degrees in ``x_1 .. x_upto`` (the table layout used in reports)."""
        return tuple(self.degree_in(v) for v in range(1, upto + 1))

    def joint_degree(self, a: int, b: int):
        """Maximum over terms of ``deg_{x_a} + deg_{x_b}``."""
        if self.is_zero():
            return ZERO_DEGREE
        nz = self.coeffs != 0
        axes = [self.vars.index(v) for v in (a, b) if v in self.vars]
        others = tuple(k for k in range(len(self.vars)) if k not in axes)
        mask = nz.any(axis=others) if others else nz
        idx = np.argwhere(mask)
        if idx.size == 0:
            return 0
        return int(idx.sum(axis=1).max())

    def total_degree(self):
        if self.is_zero():
            return ZERO_DEGREE
        idx = np.argwhere(self.coeffs != 0)
        return int(idx.sum(axis=1).max()) if idx.size else 0

    def terms(self) -> dict[tuple, int]:
        """``{exponent tuple over self.vars: coeff}`` for nonzero terms."""
        if not self.vars:
            c = int(self.coeffs[()])
            return {(): c} if c else {}
        return {tuple(int(e) for e in idx): int(self.coeffs[tuple(idx)]) for idx in np.argwhere(self.coeffs != 0)}

    def coeff(self, mono: Mapping[int, int]) -> int:
        """Coefficient of the monomial ``{var: exp}``."""
        if any(e and v not in self.vars for v, e in mono.items()):
            return 0
        idx = tuple(mono.get(v, 0) for v in self.vars)
        if any(i >= s for i, s in zip(idx, self.coeffs.shape)):
            return 0
        return int(self.coeffs[idx])

    # arithmetic ------------------------------------------------------------

    def _check(self, other: MultiPoly):
        if self.field != other.field:
            raise FieldMismatch(f"F_{self.field.p} vs F_{other.field.p}")

    def aligned(self, allvars: tuple) -> np.ndarray:
        """Coefficient array reshaped onto the (sorted) superset ``allvars``."""
        shape = [self.coeffs.shape[self.vars.index(v)] if v in self.vars else 1 for v in allvars]
        return self.coeffs.reshape(shape)

    def _binary(self, other: MultiPoly, sign: int) -> MultiPoly:
        self._check(other)
        allvars = tuple(sorted(set(self.vars) | set(other.vars)))
        out = _dense.add_nd(self.aligned(allvars), other.aligned(allvars), self.field, sign)
        return MultiPoly(self.field, allvars, out)

    def __add__(self, other):
        if isinstance(other, (int, FieldElement)):
            other = MultiPoly.constant(self.field, int(other))
        return self._binary(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, FieldElement)):
            other = MultiPoly.constant(self.field, int(other))
        return self._binary(other, -1)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return MultiPoly(self.field, self.vars, (-self.coeffs) % self.field.p)

    def scale(self, c) -> MultiPoly:
        c = int(c) % self.field.p
        return MultiPoly(self.field, self.vars, (self.coeffs * c) % self.field.p)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer, FieldElement)):
            return self.scale(int(other))
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> MultiPoly:
        result = MultiPoly.constant(self.field, 1)
        base = self
        while e:
            if e & 1:
                result = _raw_mul(result, base)
            e >>= 1
            if e:
                base = _raw_mul(base, base)
        return result

    def shift(self, v: int, k: int) -> MultiPoly:
        """Multiply by ``x_v**k``."""
        if k == 0 or self.is_zero():
            return self
        allvars = tuple(sorted(set(self.vars) | {v}))
        arr = self.aligned(allvars)
        ax = allvars.index(v)
        pad = [(0, 0)] * arr.ndim
        pad[ax] = (k, 0)
        out = np.pad(arr, pad) if arr.dtype != object else _obj_pad(arr, pad)
        return MultiPoly(self.field, allvars, out)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (
            self.field == other.field
            and self.vars == other.vars
            and self.coeffs.shape == other.coeffs.shape
            and bool(np.all(self.coeffs == other.coeffs))
        )

    def __hash__(self):
        return hash((self.field.p, self.vars, self.coeffs.shape, self.coeffs.tobytes() if self.field.fast else str(self.coeffs.tolist())))

    # decomposition & evaluation ---------------------------------------------

    def coefficients_in(self, v: int) -> list[MultiPoly]:
        """``[a_0, .., a_d]`` with ``self == sum(a_k * x_v**k)``."""
        if v not in self.vars:
            return [self]
        ax = self.vars.index(v)
        rest = self.vars[:ax] + self.vars[ax + 1 :]
        arr = np.moveaxis(self.coeffs, ax, 0)
        return [MultiPoly(self.field, rest, arr[k].copy()) for k in range(arr.shape[0])]

    def evaluate(self, assignment: Mapping[int, int | FieldElement]) -> FieldElement:
        missing = [v for v in self.vars if v not in assignment]
        if missing:
            raise MissingVariable(f"no value for x{missing[0]}")
        p = self.field.p
        arr = self.coeffs
        for v in reversed(self.vars):
            x = int(assignment[v]) % p
            acc = arr[..., -1].copy() if arr.dtype == object else arr[..., -1].astype(np.int64)
            for k in range(arr.shape[-1] - 2, -1, -1):
                acc = (acc * x + arr[..., k]) % p
            arr = acc
        return FieldElement(int(arr) % p, self.field)

    def partial_evaluate(self, assignment: Mapping[int, int | FieldElement]) -> MultiPoly:
        """Substitute values for some variables, keeping the rest symbolic."""
        p = self.field.p
        arr = self.coeffs
        vars = list(self.vars)
        for v in sorted(assignment, reverse=True):
            if v not in vars:
                continue
            ax = vars.index(v)
            x = int(assignment[v]) % p
            a = np.moveaxis(arr, ax, -1)
            acc = a[..., -1].copy()
            for k in range(a.shape[-1] - 2, -1, -1):
                acc = (acc * x + a[..., k]) % p
            arr = acc
            vars.pop(ax)
        return MultiPoly(self.field, vars, np.asarray(arr, dtype=self.coeffs.dtype) if self.field.fast else _as_obj(arr))

    def to_univariate(self, v: int):
        from .uniroot import UnivariatePoly

        extra = [u for u in self.vars if u != v]
        if extra:
            raise NotUnivariate(f"x{extra[0]} has positive degree")
        if not self.vars:
            return UnivariatePoly(self.field, self.coeffs.reshape(1))
        return UnivariatePoly(self.field, self.coeffs)

    @classmethod
    def from_univariate(cls, u, v: int) -> MultiPoly:
        return cls(u.field, (v,), u.coeffs.copy()) if len(u.coeffs) else cls.zero(u.field)

    # text form ------------------------------------------------------------

    def sorted_terms(self) -> list[tuple[tuple, int]]:
        """Terms in graded-lex order (highest first) over ascending variables."""
        if not self.vars:
            c = int(self.coeffs[()])
            return [((), c)] if c else []
        idx = np.argwhere(self.coeffs != 0)
        if len(idx) == 0:
            return []
        keys = [-idx[:, k] for k in range(idx.shape[1] - 1, -1, -1)] + [-idx.sum(axis=1)]
        order = np.lexsort(keys)
        idx = idx[order]
        vals = self.coeffs[tuple(idx.T)]
        return [(tuple(int(e) for e in row), int(c)) for row, c in zip(idx, vals)]

    def serialize(self) -> str:
        head = "vars: " + ",".join(f"x{v}" for v in self.vars) + f"  field: {self.field.p}"
        lines = [head]
        for exps, c in self.sorted_terms():
            factors = " ".join(f"x{v}^{e}" for v, e in zip(self.vars, exps) if e)
            lines.append(f"{c} * {factors}" if factors else str(c))
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str, field: PrimeField | None = None) -> MultiPoly:
        lines = [ln for ln in text.strip("\n").split("\n")]
        m = re.fullmatch(r"vars: ?(\S*)\s+field: (\d+)", lines[0].strip())
        if not m:
            raise ValueError(f"bad header line: {lines[0]!r}")
        p = int(m.group(2))
        if field is None:
            field = PrimeField(p)
        elif field.p != p:
            raise FieldMismatch(f"serialized field {p} vs {field.p}")
        declared = tuple(int(x[1:]) for x in m.group(1).split(",") if x)
        terms = {}
        for ln in lines[1:]:
            ln = ln.strip()
            if not ln:
                continue
            if "*" in ln:
                c, rest = ln.split("*", 1)
                mono = {}
                for fac in rest.split():
                    v, e = fac.split("^")
                    mono[int(v[1:])] = int(e)
            else:
                c, mono = ln, {}
            key = tuple(sorted(mono.items()))
            if key in terms:
                raise ValueError(f"duplicate term {ln!r}")
            terms[key] = int(c)
        poly = cls.from_terms(field, terms)
        if poly.vars != declared:
            raise ValueError(f"declared vars {declared} but terms use {poly.vars}")
        return poly

    def __repr__(self):
        if self.is_zero():
            return "MultiPoly(0)"
        parts = []
        for exps, c in self.sorted_terms()[:8]:
            mono = "*".join(f"x{v}^{e}" if e > 1 else f"x{v}" for v, e in zip(self.vars, exps) if e)
            parts.append(f"{c}*{mono}" if mono else str(c))
        more = " + ..." if self.num_terms > 8 else ""
        return f"MultiPoly({' + '.join(parts)}{more} mod {self.field.p})"


def _as_obj(arr) -> np.ndarray:
    out = np.empty(np.shape(arr), dtype=object)
    out[...] = arr
    return out


def _obj_pad(arr: np.ndarray, pad) -> np.ndarray:
    shape = tuple(s + a + b for s, (a, b) in zip(arr.shape, pad))
    out = _dense._obj_zeros(shape)
    out[tuple(slice(a, a + s) for s, (a, _) in zip(arr.shape, pad))] = arr
    return out


def _normalize(field: PrimeField, vars: tuple, arr: np.ndarray):
    if not vars:
        return (), arr.reshape(())
    nz = arr != 0
    if not nz.any():
        return (), field.zeros(())
    sl = []
    for ax in range(arr.ndim):
        others = tuple(k for k in range(arr.ndim) if k != ax)
        used = nz.any(axis=others) if others else nz
        sl.append(slice(0, int(np.flatnonzero(used)[-1]) + 1))
    arr = arr[tuple(sl)]
    keep = [k for k, s in enumerate(arr.shape) if s > 1]
    if len(keep) != arr.ndim:
        arr = arr.reshape([arr.shape[k] for k in keep])
        vars = tuple(vars[k] for k in keep)
    return vars, arr


def _raw_mul(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    f._check(g)
    if f.is_zero() or g.is_zero():
        return MultiPoly.zero(f.field)
    allvars = tuple(sorted(set(f.vars) | set(g.vars)))
    out = _dense.mul_nd(f.aligned(allvars), g.aligned(allvars), f.field)
    return MultiPoly(f.field, allvars, out)


def poly_add(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    return f + g


def poly_mul(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    global mul_calls
    mul_calls += 1
    return _raw_mul(f, g)


def degree_in(f: MultiPoly, v: int):
    return f.degree_in(v)


def joint_degree_x1_xn(f: MultiPoly, n: int):
    return f.joint_degree(1, n)


def coefficients_in(f: MultiPoly, v: int) -> list[MultiPoly]:
    return f.coefficients_in(v)


def evaluate(f: MultiPoly, assignment) -> FieldElement:
    return f.evaluate(assignment)


def to_univariate(f: MultiPoly, v: int):
    return f.to_univariate(v)


@dataclass
class MulCounter:
    """Counts polynomial multiplications performed inside one computation."""

    label: str = ""
    count: int = 0

    def mul(self, f: MultiPoly, g: MultiPoly) -> MultiPoly:
        self.count += 1
        return poly_mul(f, g)


@dataclass(frozen=True)
class DegreeProfile:
    per_var: dict
    joint_x1_xn: int

    @classmethod
    def of(cls, f: MultiPoly, n: int) -> DegreeProfile:
        return cls({v: f.degree_in(v) for v in f.vars}, f.joint_degree(1, n))


@dataclass(frozen=True)
class ReductionRule:
    """The rewrite ``x1**3 -> r(x1, xn)`` with ``deg_{x1}(r) <= 2``."""

    r: MultiPoly
    xn: int
    x1: int = 1
    _powers: dict = dc_field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if not set(self.r.vars) <= {self.x1, self.xn}:
            raise ValueError(f"rule polynomial uses {self.r.vars}")
        if self.r.degree_in(self.x1) > 2:
            raise ValueError("rule polynomial must have x1-degree <= 2")
        slices = self.r.coefficients_in(self.x1) if self.x1 in self.r.vars else [self.r]
        comps = [_as_xn_array(c, self.xn) for c in slices] + [self.r.field.zeros(1)] * 3
        self._powers[3] = tuple(comps[:3])

    def power(self, k: int) -> tuple:
        """Residues ``(c0, c1, c2)`` in ``F_p[xn]`` with ``x1**k == c0 + c1 x1 + c2 x1**2``."""
        field = self.r.field
        if k < 3:
            unit = [field.zeros(1) for _ in range(3)]
            unit[k] = field.array([1])
            return tuple(unit)
        top = max(self._powers)
        r0, r1, r2 = self._powers[3]
        while top < k:
            c0, c1, c2 = self._powers[top]
            nxt = (
                _dense.umul(c2, r0, field),
                _add1(c0, _dense.umul(c2, r1, field), field),
                _add1(c1, _dense.umul(c2, r2, field), field),
            )
            top += 1
            self._powers[top] = tuple(_dense.trim1(c) for c in nxt)
        return self._powers[k]

    def serialize(self) -> str:
        return f"rule: x{self.x1}^3 -> r  xn: x{self.xn}\n" + self.r.serialize()


def _as_xn_array(c: MultiPoly, xn: int) -> np.ndarray:
    if c.is_zero():
        return c.field.zeros(1)
    if not c.vars:
        return c.coeffs.reshape(1)
    return c.coeffs


def _add1(a: np.ndarray, b: np.ndarray, field: PrimeField) -> np.ndarray:
    n = max(len(a), len(b))
    out = field.zeros(n)
    out[: len(a)] += a
    out[: len(b)] += b
    return out % field.p


def reduce_x1(f: MultiPoly, rule: ReductionRule) -> MultiPoly:
    """Rewrite ``f`` modulo ``x1**3 - r`` so that its x1-degree is at most 2."""
    x1, xn = rule.x1, rule.xn
    d = f.degree_in(x1)
    if d == ZERO_DEGREE or d <= 2:
        return f
    field = f.field
    p = field.p
    allvars = tuple(sorted(set(f.vars) | {xn}))
    arr = np.moveaxis(f.aligned(allvars), allvars.index(x1), 0)
    rest = tuple(v for v in allvars if v != x1)
    ax_n = rest.index(xn)
    arr = np.moveaxis(arr, 1 + ax_n, -1)
    extra = max(len(c) for k in range(3, d + 1) for c in rule.power(k)) - 1
    shape = (3,) + arr.shape[1:-1] + (arr.shape[-1] + extra,)
    out = field.zeros(shape)
    out[:, ..., : arr.shape[-1]] = arr[:3]
    width = arr.shape[-1]
    for k in range(3, d + 1):
        sl = arr[k]
        if not (sl != 0).any():
            continue
        for e, kern in enumerate(rule.power(k)):
            for m in np.flatnonzero(kern != 0):
                seg = out[e, ..., m : m + width]
                seg += kern[m] * sl
                seg %= p
    out = np.moveaxis(out, -1, 1 + ax_n)
    out = np.moveaxis(out, 0, allvars.index(x1))
    return MultiPoly(field, allvars, out.copy())
