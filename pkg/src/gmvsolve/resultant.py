"""Resultants of multivariate polynomials with respect to one variable.

Three engines, all computing the Sylvester determinant with the rows of the
first argument on top:

* :func:`sparse_resultant`: closed form for a first argument that is linear
  in the eliminated variable, ``sum_i (-1)^i a_i b0^i b1^(h-i)``.
* :func:`general_resultant`: subresultant pseudo-remainder sequence over the
  coefficient ring F_p[other vars].
* :func:`cofactor_determinant`: memoized Laplace expansion, used for the
  final small determinant and as an independent check.

Swapping the operands multiplies the result by ``(-1)^(d*e)``.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _dense
from .errors import BadShape, InexactDivision, NotLinear, TrivialDense, ZeroDegree, ZeroPolynomial
from .mpoly import MulCounter, MultiPoly, ReductionRule, ZERO_DEGREE, poly_mul, reduce_x1

log = logging.getLogger(__name__)


@dataclass
class SylvesterDecomposition:
    beta0: MultiPoly
    beta1: MultiPoly
    alphas: list
    eliminated: int

    @property
    def h(self) -> int:
        return len(self.alphas) - 1

    @classmethod
    def of(cls, linear: MultiPoly, dense: MultiPoly, v: int) -> SylvesterDecomposition:
        if linear.degree_in(v) != 1:
            raise NotLinear(f"first operand has degree {linear.degree_in(v)} in x{v}, expected 1")
        h = dense.degree_in(v)
        if h == ZERO_DEGREE or h < 1:
            raise TrivialDense(f"second operand has degree {h} in x{v}")
        beta0, beta1 = linear.coefficients_in(v)
        return cls(beta0, beta1, dense.coefficients_in(v), v)


def _red(f: MultiPoly, rule: ReductionRule | None) -> MultiPoly:
    return reduce_x1(f, rule) if rule is not None else f


def sparse_resultant(
    linear: MultiPoly,
    dense: MultiPoly,
    v: int,
    rule: ReductionRule | None = None,
    counter: MulCounter | None = None,
    low_mem: bool = False,
    threads: int = 1,
    method: str = "split",
) -> MultiPoly:
    """``res(linear, dense; x_v)`` for ``linear = b1*x_v + b0``.

    Both methods use at most ``4h`` multiplications, ``h = deg_v(dense)``,
    recorded on ``counter``.  With a rule every product is reduced as it is
    formed.

    ``method="ladder"`` forms each term ``a_i b0^i b1^(h-i)`` from two power
    ladders; ``low_mem`` then streams the ``b0`` ladder.  ``method="split"``
    (the default) halves the index range recursively,
    ``P[lo..hi] = b1^|right| P[lo..mid] + (-b0)^|left| P[mid+1..hi]``, so the
    large products occur only ``O(log h)`` levels deep.
    """
    dec = SylvesterDecomposition.of(linear, dense, v)
    counter = counter if counter is not None else MulCounter()
    h = dec.h
    field = linear.field
    b0 = _red(dec.beta0, rule)
    b1 = _red(dec.beta1, rule)
    alphas = [_red(a, rule) for a in dec.alphas]

    def mul(f, g):
        if f.is_zero() or g.is_zero():
            return MultiPoly.zero(field)
        return _red(counter.mul(f, g), rule)

    if method == "split" and not low_mem:
        return _split_eval(alphas, -b0, b1, mul, threads)
    if method not in ("split", "ladder"):
        raise ValueError(f"unknown method {method!r}")

    one = MultiPoly.constant(field, 1)
    pow1 = [one, b1]
    for _ in range(2, h + 1):
        pow1.append(mul(pow1[-1], b1))

    if not low_mem:
        pow0 = [one, b0]
        for _ in range(2, h + 1):
            pow0.append(mul(pow0[-1], b0))

        def term(i):
            a = alphas[i]
            if a.is_zero():
                return a
            if i:
                a = mul(a, pow0[i])
            if h - i:
                a = mul(a, pow1[h - i])
            return a if i % 2 == 0 else -a

        if threads > 1:
            with ThreadPoolExecutor(threads) as ex:
                parts = list(ex.map(term, range(h + 1)))
        else:
            parts = [term(i) for i in range(h + 1)]
        acc = MultiPoly.zero(field)
        for part in parts:
            acc = acc + part
        return acc

    acc = MultiPoly.zero(field)
    run = one
    for i in range(h + 1):
        if i:
            run = mul(run, b0) if i > 1 else b0
        a = alphas[i]
        if a.is_zero():
            continue
        if i:
            a = mul(a, run)
        if h - i:
            a = mul(a, pow1[h - i])
        acc = acc + a if i % 2 == 0 else acc - a
        pow1[h - i] = None
    return acc


def _split_eval(alphas: list, u: MultiPoly, w: MultiPoly, mul, threads: int = 1) -> MultiPoly:
    """``sum_i alphas[i] u^i w^(h-i)`` by recursive halving."""
    h = len(alphas) - 1
    need = ({}, {})

    def plan(lo, hi):
        if lo < hi:
            mid = (lo + hi) // 2
            need[1][hi - mid] = need[0][mid + 1 - lo] = None
            plan(lo, mid)
            plan(mid + 1, hi)

    plan(0, h)
    # All powers up front, ascending, so the recursion only reads them.
    powers = ({1: u}, {1: w})

    def power(which, e):
        memo = powers[which]
        if e not in memo:
            half = e // 2
            memo[e] = mul(power(which, half), power(which, e - half))
        return memo[e]

    for which in (0, 1):
        for e in sorted(need[which]):
            power(which, e)

    def rec(lo: int, hi: int) -> MultiPoly:
        if lo == hi:
            return alphas[lo]
        mid = (lo + hi) // 2
        left, right = rec(lo, mid), rec(mid + 1, hi)
        return mul(powers[1][hi - mid], left) + mul(powers[0][mid + 1 - lo], right)

    if threads > 1 and h >= 3:
        mid = h // 2
        with ThreadPoolExecutor(2) as ex:
            fl, fr = ex.submit(rec, 0, mid), ex.submit(rec, mid + 1, h)
            left, right = fl.result(), fr.result()
        return mul(powers[1][h - mid], left) + mul(powers[0][mid + 1], right)
    return rec(0, h)


def sylvester_matrix(f: MultiPoly, g: MultiPoly, v: int) -> list[list[MultiPoly]]:
    """The ``(d+e) x (d+e)`` Sylvester matrix, ``e`` rows of ``f`` above ``d`` rows of ``g``."""
    d, e = f.degree_in(v), g.degree_in(v)
    if d == ZERO_DEGREE or e == ZERO_DEGREE or d < 1 or e < 1:
        raise ZeroDegree(f"degrees in x{v} are {d} and {e}; both must be positive")
    return _sylvester(f.coefficients_in(v), g.coefficients_in(v))


def _sylvester(fc: list, gc: list) -> list[list[MultiPoly]]:
    field = fc[0].field
    d, e = len(fc) - 1, len(gc) - 1
    size = d + e
    zero = MultiPoly.zero(field)
    rows = []
    for shifts, coeffs in ((e, fc), (d, gc)):
        desc = coeffs[::-1]
        for s in range(shifts):
            row = [zero] * size
            row[s : s + len(desc)] = desc
            rows.append(row)
    return rows


def cofactor_determinant(matrix: list[list[MultiPoly]], counter: MulCounter | None = None) -> MultiPoly:
    """Determinant by Laplace expansion along rows, memoized on column subsets."""
    size = len(matrix)
    if size == 0:
        raise BadShape("empty matrix")
    field = matrix[0][0].field
    counter = counter if counter is not None else MulCounter()
    memo = {}

    def minor(row: int, cols: int) -> MultiPoly:
        if row == size:
            return MultiPoly.constant(field, 1)
        if cols in memo:
            return memo[cols]
        acc = MultiPoly.zero(field)
        sign = 1
        for c in range(size):
            if not cols >> c & 1:
                continue
            entry = matrix[row][c]
            if not entry.is_zero():
                sub = minor(row + 1, cols & ~(1 << c))
                if not sub.is_zero():
                    prod = counter.mul(entry, sub)
                    acc = acc + prod if sign > 0 else acc - prod
            sign = -sign
        memo[cols] = acc
        return acc

    return minor(0, (1 << size) - 1)


def general_resultant(f: MultiPoly, g: MultiPoly, v: int, rule: ReductionRule | None = None) -> MultiPoly:
    """``det(sylvester_matrix(f, g, v))`` by the subresultant PRS."""
    if f.is_zero() or g.is_zero():
        raise ZeroPolynomial("resultant with the zero polynomial")
    d, e = f.degree_in(v), g.degree_in(v)
    if d < 1 or e < 1:
        raise ZeroDegree(f"degrees in x{v} are {d} and {e}; both must be positive")
    res = _subresultant_prs(f.coefficients_in(v), g.coefficients_in(v))
    return _red(res, rule)


def cofactor_resultant(f: MultiPoly, g: MultiPoly, v: int, rule: ReductionRule | None = None) -> MultiPoly:
    return _red(cofactor_determinant(sylvester_matrix(f, g, v)), rule)


def _subresultant_prs(A: list, B: list) -> MultiPoly:
    # Collins/Brown subresultant algorithm over the coefficient domain.
    field = A[0].field
    one = MultiPoly.constant(field, 1)
    s = 1
    dA, dB = len(A) - 1, len(B) - 1
    if dA < dB:
        A, B = B, A
        dA, dB = dB, dA
        if dA % 2 and dB % 2:
            s = -s
    g = h = one
    while True:
        delta = dA - dB
        if dA % 2 and dB % 2:
            s = -s
        R = _prem(A, B)
        if not R:
            return MultiPoly.zero(field)
        divisor = g * _pow(h, delta)
        A = B
        B = [exact_div(c, divisor) for c in R]
        dA, dB = dB, len(B) - 1
        g = A[-1]
        if delta >= 1:
            h = exact_div(_pow(g, delta), _pow(h, delta - 1))
        if dB == 0:
            break
    last = exact_div(_pow(B[0], dA), _pow(h, dA - 1))
    return last if s > 0 else -last


def _pow(f: MultiPoly, e: int) -> MultiPoly:
    return f**e


def _prem(A: list, B: list) -> list:
    """Pseudo-remainder ``lc(B)^(dA-dB+1) A mod B`` as a trimmed coefficient list."""
    dA, dB = len(A) - 1, len(B) - 1
    lcB = B[-1]
    R = list(A)
    steps = dA - dB + 1
    for _ in range(steps):
        if len(R) - 1 < dB:
            R = [poly_mul(c, lcB) for c in R]
            continue
        lead = R[-1]
        shift = len(R) - 1 - dB
        R = [poly_mul(c, lcB) for c in R]
        for k, b in enumerate(B):
            R[k + shift] = R[k + shift] - poly_mul(lead, b)
        R = R[:-1]
        while R and R[-1].is_zero():
            R.pop()
    while R and R[-1].is_zero():
        R.pop()
    return R


def exact_div(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """``f / g`` when ``g`` divides ``f`` exactly; raises :class:`InexactDivision` otherwise."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    field = f.field
    if f.is_zero():
        return f
    if g.is_constant():
        return f.scale(field.inv_int(g.constant_value()))
    allvars = tuple(sorted(set(f.vars) | set(g.vars)))
    fa, ga = f.aligned(allvars), g.aligned(allvars)
    if any(gs > fs for gs, fs in zip(ga.shape, fa.shape)):
        raise InexactDivision("divisor has larger degree than dividend")
    shape = fa.shape
    # Kronecker images with the dividend's bounds: exact quotients stay inside them.
    ff = _dense.trim1(fa.reshape(-1))
    gf = _dense.trim1(_dense.pad_to(ga, shape).reshape(-1))
    if len(gf) > len(ff):
        raise InexactDivision("divisor image longer than dividend image")
    from .uniroot import _rem_naive

    q, r = _rem_naive(ff, gf, field, want_quotient=True)
    if len(r):
        raise InexactDivision("nonzero remainder")
    total = int(np.prod(shape))
    qf = field.zeros(total)
    qf[: len(q)] = q
    quotient = MultiPoly(field, allvars, qf.reshape(shape))
    if not (quotient * g) == f:
        raise InexactDivision("quotient escapes the dividend's degree box")
    return quotient


def resultant(f: MultiPoly, g: MultiPoly, v: int, rule: ReductionRule | None = None, counter: MulCounter | None = None, **kw) -> MultiPoly:
    """``res(f, g; x_v)`` choosing the closed form whenever one side is linear in ``x_v``."""
    d, e = f.degree_in(v), g.degree_in(v)
    if d == 1 and e >= 1:
        return sparse_resultant(f, g, v, rule, counter, **kw)
    if e == 1 and d >= 1:
        r = sparse_resultant(g, f, v, rule, counter, **kw)
        return r if d % 2 == 0 else -r
    return general_resultant(f, g, v, rule)


def final_resultant(f1: MultiPoly, g2: MultiPoly, rule: ReductionRule, counter: MulCounter | None = None):
    """``u(xn) = res(f1, g2; x1)`` for a cubic ``f1`` and ``g2`` of x1-degree <= 2."""
    from .uniroot import UnivariatePoly

    x1, xn = rule.x1, rule.xn
    if not set(f1.vars) <= {x1, xn} or not set(g2.vars) <= {x1, xn}:
        raise BadShape(f"operands must live in x{x1}, x{xn}; got {f1.vars} and {g2.vars}")
    if f1.degree_in(x1) != 3:
        raise BadShape(f"f1 must be cubic in x{x1}")
    e = g2.degree_in(x1)
    if e == ZERO_DEGREE:
        raise BadShape("g2 is zero")
    if e > 2:
        raise BadShape(f"g2 has x{x1}-degree {e}; reduce it first")
    if e == 0:
        # A 3x3 diagonal of g2.
        u = g2 * g2 * g2
    else:
        u = cofactor_determinant(_sylvester(f1.coefficients_in(x1), g2.coefficients_in(x1)), counter)
    if u.is_zero():
        return UnivariatePoly(f1.field, f1.field.zeros(0))
    return u.to_univariate(xn)
