"""Roots in F_p of dense univariate polynomials.

``find_roots`` keeps only the linear factors, ``gcd(x^p - x, u)``, and then
splits them by random shifts, ``gcd(v, (x + c)^((p-1)/2) - 1)``.
Multiplicities are discarded.
"""

from __future__ import annotations

import logging
import random

import numpy as np

from . import _dense
from .errors import BothZero, RootFindingError, ZeroModulus, ZeroPolynomial
from .ff import FieldElement, PrimeField

log = logging.getLogger(__name__)

# Degree from which remainders use a precomputed Newton inverse.
NEWTON_THRESHOLD = 96


class UnivariatePoly:
    """``c_0 + c_1 x + ... + c_d x^d`` with ``c_d != 0``; zero has no coefficients."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: PrimeField, coeffs):
        arr = coeffs if isinstance(coeffs, np.ndarray) and coeffs.ndim == 1 else field.array(list(coeffs))
        if arr.dtype != (np.int64 if field.fast else object):
            arr = field.array(arr)
        self.field = field
        self.coeffs = _trim(arr)

    @classmethod
    def from_roots(cls, field: PrimeField, roots) -> UnivariatePoly:
        acc = cls(field, [1])
        for r in roots:
            acc = acc * cls(field, [-int(r), 1])
        return acc

    @classmethod
    def x(cls, field: PrimeField) -> UnivariatePoly:
        return cls(field, [0, 1])

    @property
    def degree(self):
        return len(self.coeffs) - 1 if len(self.coeffs) else float("-inf")

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    @property
    def lc(self) -> int:
        return int(self.coeffs[-1])

    def monic(self) -> UnivariatePoly:
        if self.is_zero():
            return self
        inv = self.field.inv_int(self.lc)
        return UnivariatePoly(self.field, (self.coeffs * inv) % self.field.p)

    def __call__(self, x) -> FieldElement:
        p = self.field.p
        x = int(x) % p
        acc = 0
        for c in reversed(self.coeffs.tolist()):
            acc = (acc * x + c) % p
        return FieldElement(acc, self.field)

    def evaluate_many(self, xs: np.ndarray) -> np.ndarray:
        p = self.field.p
        acc = np.zeros_like(xs)
        for c in self.coeffs[::-1]:
            acc = (acc * xs + c) % p
        return acc

    def __add__(self, other):
        other = _coerce(self.field, other)
        return UnivariatePoly(self.field, _add(self.coeffs, other.coeffs, self.field, 1))

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(self.field, other)
        return UnivariatePoly(self.field, _add(self.coeffs, other.coeffs, self.field, -1))

    def __neg__(self):
        return UnivariatePoly(self.field, (-self.coeffs) % self.field.p)

    def __mul__(self, other):
        other = _coerce(self.field, other)
        if self.is_zero() or other.is_zero():
            return UnivariatePoly(self.field, self.field.zeros(0))
        return UnivariatePoly(self.field, _dense.umul(self.coeffs, other.coeffs, self.field))

    __rmul__ = __mul__

    def __divmod__(self, other):
        return upoly_divmod(self, other)

    def __mod__(self, other):
        return upoly_divmod(self, other)[1]

    def __floordiv__(self, other):
        return upoly_divmod(self, other)[0]

    def __eq__(self, other):
        if not isinstance(other, UnivariatePoly):
            return NotImplemented
        return self.field == other.field and len(self.coeffs) == len(other.coeffs) and bool(np.all(self.coeffs == other.coeffs))

    def __repr__(self):
        d = self.degree
        head = ", ".join(str(c) for c in self.coeffs[:6].tolist())
        return f"UnivariatePoly(deg={d}, [{head}{', ...' if len(self.coeffs) > 6 else ''}] mod {self.field.p})"


def _coerce(field, other) -> UnivariatePoly:
    if isinstance(other, UnivariatePoly):
        return other
    return UnivariatePoly(field, [int(other)])


def _trim(a: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(a != 0)
    return a[: nz[-1] + 1] if len(nz) else a[:0]


def _add(a: np.ndarray, b: np.ndarray, field: PrimeField, sign: int) -> np.ndarray:
    n = max(len(a), len(b))
    out = field.zeros(n)
    out[: len(a)] += a
    if sign == 1:
        out[: len(b)] += b
    else:
        out[: len(b)] -= b
    return out % field.p


def _rem_naive(a: np.ndarray, b: np.ndarray, field: PrimeField, want_quotient: bool = False):
    p = field.p
    lb = len(b)
    a = a.copy()
    inv = field.inv_int(int(b[-1]))
    nq = len(a) - lb + 1
    q = field.zeros(max(nq, 0))
    for k in range(nq - 1, -1, -1):
        c = int(a[k + lb - 1]) * inv % p
        if c:
            seg = a[k : k + lb]
            seg -= c * b
            seg %= p
            if want_quotient:
                q[k] = c
    r = _trim(a[: lb - 1]) if lb > 1 else a[:0]
    return (q, r) if want_quotient else r


class Modulus:
    """A fixed modulus ``m`` with a cached inverse of its reversal, for fast remainders."""

    def __init__(self, m: UnivariatePoly):
        if m.degree < 1:
            raise ZeroModulus("modulus must have degree >= 1")
        self.m = m
        self.field = m.field
        self.d = m.degree
        self._inv = None

    def _inverse(self) -> np.ndarray:
        if self._inv is None:
            self._inv = _series_inverse(self.m.coeffs[::-1].copy(), self.d - 1, self.field)
        return self._inv

    def reduce(self, a: np.ndarray) -> np.ndarray:
        d = self.d
        if len(a) <= d:
            return _trim(a)
        if d < NEWTON_THRESHOLD or len(a) > 2 * d - 1:
            return _rem_naive(a, self.m.coeffs, self.field)
        k = len(a) - d
        inv = self._inverse()[:k]
        qrev = _dense.umul(a[::-1][:k].copy(), inv, self.field)[:k]
        q = qrev[::-1].copy()
        qm = _dense.umul(q, self.m.coeffs, self.field)[:d]
        r = (a[:d] - qm) % self.field.p
        return _trim(r)

    def mulmod(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if len(a) == 0 or len(b) == 0:
            return a[:0]
        return self.reduce(_dense.umul(a, b, self.field))

    def powmod(self, base: UnivariatePoly, e: int) -> UnivariatePoly:
        field = self.field
        b = self.reduce(base.coeffs)
        result = field.array([1]) if self.d > 0 else field.zeros(0)
        is_x = len(base.coeffs) == 2 and int(base.coeffs[0]) == 0 and int(base.coeffs[1]) == 1 and self.d > 1
        for bit in bin(e)[2:]:
            result = self.mulmod(result, result)
            if bit == "1":
                result = self._mulx(result) if is_x else self.mulmod(result, b)
        return UnivariatePoly(field, result)

    def _mulx(self, a: np.ndarray) -> np.ndarray:
        p = self.field.p
        out = np.concatenate([self.field.zeros(1), a])
        if len(out) > self.d:
            c = int(out[self.d]) * self.field.inv_int(self.m.lc) % p
            if c:
                out[: self.d + 1] = (out[: self.d + 1] - c * self.m.coeffs) % p
        return _trim(out)


def _series_inverse(f: np.ndarray, n: int, field: PrimeField) -> np.ndarray:
    """First ``n`` coefficients of ``1/f`` as a power series (``f[0] != 0``)."""
    p = field.p
    g = field.array([field.inv_int(int(f[0]))])
    k = 1
    while k < n:
        k = min(2 * k, n)
        fg = _dense.umul(f[:k].copy(), g, field)[:k]
        two_minus = (-fg) % p
        two_minus[0] = (two_minus[0] + 2) % p
        g = _dense.umul(g, two_minus, field)[:k]
    return g[:n] if n > 0 else g[:0]


def upoly_divmod(a: UnivariatePoly, b: UnivariatePoly):
    if b.is_zero():
        raise ZeroModulus("division by the zero polynomial")
    if a.degree < b.degree:
        return UnivariatePoly(a.field, a.field.zeros(0)), a
    q, r = _rem_naive(a.coeffs, b.coeffs, a.field, want_quotient=True)
    return UnivariatePoly(a.field, q), UnivariatePoly(a.field, r)


def upoly_mulmod(a: UnivariatePoly, b: UnivariatePoly, m: UnivariatePoly) -> UnivariatePoly:
    if m.is_zero():
        raise ZeroModulus("zero modulus")
    if m.degree == 0:
        return UnivariatePoly(a.field, a.field.zeros(0))
    return UnivariatePoly(a.field, Modulus(m).mulmod(a.coeffs, b.coeffs))


def upoly_powmod(base: UnivariatePoly, e: int, m: UnivariatePoly) -> UnivariatePoly:
    if m.is_zero():
        raise ZeroModulus("zero modulus")
    if m.degree == 0:
        return UnivariatePoly(base.field, base.field.zeros(0))
    return Modulus(m).powmod(base, e)


def upoly_gcd(a: UnivariatePoly, b: UnivariatePoly) -> UnivariatePoly:
    """Monic gcd by the Euclidean algorithm."""
    if a.is_zero() and b.is_zero():
        raise BothZero("gcd(0, 0) is undefined")
    field = a.field
    x, y = a.coeffs, b.coeffs
    if len(x) < len(y):
        x, y = y, x
    if field.fast and len(y):
        return UnivariatePoly(field, _euclid_int64(x.copy(), y.copy(), field.p)).monic()
    while len(y):
        x, y = y, _rem_naive(x, y, field)
    return UnivariatePoly(field, x).monic()


def _euclid_int64(x: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    """Last nonzero remainder of ``x, y`` (canonical residues, ``len(x) >= len(y) > 0``).

    Works in place on two buffers.  Updates are left unreduced while the
    accumulated magnitude provably fits in int64.
    """
    lx, ly = len(x), len(y)
    lazy = (1 << 62) // (p * p)
    while ly:
        inv = pow(int(y[ly - 1]), -1, p)
        yv = y[:ly]
        pending = 0
        for k in range(lx - ly, -1, -1):
            c = int(x[k + ly - 1]) % p * inv % p
            if c:
                if pending >= lazy:
                    x[:lx] %= p
                    pending = 0
                x[k : k + ly] -= c * yv
                pending += 1
        r = x[: ly - 1]
        r %= p
        lr = ly - 1
        while lr and r[lr - 1] == 0:
            lr -= 1
        x, y = y, x
        lx, ly = ly, lr
    return x[:lx].copy()


def linear_part(u: UnivariatePoly) -> UnivariatePoly:
    """Product of the distinct monic linear factors of ``u``: ``gcd(x^p - x, u)``."""
    if u.degree < 1:
        return UnivariatePoly(u.field, [1])
    u = u.monic()
    field = u.field
    xp = Modulus(u).powmod(UnivariatePoly.x(field), field.p)
    return upoly_gcd(u, xp - UnivariatePoly.x(field))


def find_roots(u: UnivariatePoly, seed=0) -> list[FieldElement]:
    """All distinct roots of ``u`` in F_p, ascending.  Deterministic given ``seed``."""
    if u.is_zero():
        raise ZeroPolynomial("the zero polynomial vanishes everywhere")
    field = u.field
    v = linear_part(u)
    roots = []
    if v.degree >= 1 and int(v.coeffs[0]) == 0:
        roots.append(0)
        v = UnivariatePoly(field, v.coeffs[1:])
    rng = random.Random(seed)
    budget = [64 * max(v.degree, 1)]
    _split(v, rng, roots, budget)
    roots.sort()
    return [FieldElement(r, field) for r in roots]


def _split(v: UnivariatePoly, rng: random.Random, out: list, budget: list):
    field = v.field
    p = field.p
    stack = [v]
    half = (p - 1) // 2
    while stack:
        w = stack.pop()
        d = w.degree
        if d < 1:
            continue
        if d == 1:
            w = w.monic()
            out.append(int(-w.coeffs[0]) % p)
            continue
        mod = Modulus(w)
        while True:
            if budget[0] <= 0:
                raise RootFindingError("equal-degree splitting did not terminate; input not squarefree?")
            budget[0] -= 1
            c = rng.randrange(p)
            t = mod.powmod(UnivariatePoly(field, [c, 1]), half) - 1
            if t.is_zero():
                continue
            g = upoly_gcd(w, t)
            if 0 < g.degree < d:
                stack.append(g)
                stack.append(w // g)
                break
