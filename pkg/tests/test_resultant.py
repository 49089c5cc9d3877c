import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gmvsolve import toy_vectors
from gmvsolve.errors import BadShape, InexactDivision, NotLinear, TrivialDense, ZeroDegree
from gmvsolve.ff import PrimeField
from gmvsolve.gmv import load_example1_pair
from gmvsolve.mpoly import MulCounter, MultiPoly, ReductionRule, reduce_x1
from gmvsolve.resultant import (
    SylvesterDecomposition,
    cofactor_determinant,
    cofactor_resultant,
    exact_div,
    final_resultant,
    general_resultant,
    resultant,
    sparse_resultant,
    sylvester_matrix,
)

from .oracles import univariate_resultant

F = PrimeField(101)
OTHER = (1, 4, 7)


def random_poly(rng, field, v, deg_v, others=OTHER, max_other=2, density=0.6):
    terms = {}
    for k in range(deg_v + 1):
        for _ in range(4):
            if rng.random() < density or k == deg_v:
                mono = [(v, k)] + [(u, rng.randrange(max_other + 1)) for u in others]
                terms[tuple(mono)] = rng.randrange(1, field.p)
    f = MultiPoly.from_terms(field, terms)
    return f if f.degree_in(v) == deg_v else random_poly(rng, field, v, deg_v, others, max_other, density)


def pointwise_resultant(f, g, v, point):
    """Sylvester determinant of the specialized coefficients (formal degrees kept)."""
    p = f.field.p
    fc = [int(c.evaluate(point)) if not c.is_zero() else 0 for c in f.coefficients_in(v)]
    gc = [int(c.evaluate(point)) if not c.is_zero() else 0 for c in g.coefficients_in(v)]
    return univariate_resultant(fc, gc, p)


def full_point(rng, f, g, p):
    vars_ = set(f.vars) | set(g.vars) | set(OTHER)
    return {u: rng.randrange(p) for u in vars_}


@pytest.mark.parametrize("d,e", [(1, 1), (1, 3), (2, 3), (3, 2), (2, 2), (1, 6), (3, 1)])
def test_engines_match_pointwise_sylvester_oracle(d, e):
    rng = random.Random(10 * d + e)
    for _ in range(4):
        f, g = random_poly(rng, F, 5, d), random_poly(rng, F, 5, e)
        engines = [general_resultant(f, g, 5), cofactor_resultant(f, g, 5), resultant(f, g, 5)]
        for _ in range(3):
            pt = full_point(rng, f, g, F.p)
            want = pointwise_resultant(f, g, 5, pt)
            for r in engines:
                assert int(r.evaluate(pt)) == want


@given(st.integers(1, 8), st.integers(0, 2**32))
def test_sparse_equals_prs(h, seed):
    rng = random.Random(seed)
    lin, dense = random_poly(rng, F, 3, 1), random_poly(rng, F, 3, h)
    s = sparse_resultant(lin, dense, 3)
    assert s == general_resultant(lin, dense, 3)
    # operand swap sign (-1)^(1*h)
    assert general_resultant(dense, lin, 3) == (s if h % 2 == 0 else -s)
    assert resultant(dense, lin, 3) == general_resultant(dense, lin, 3)


@given(st.integers(1, 8), st.integers(0, 2**32), st.sampled_from(["split", "ladder"]), st.booleans())
def test_sparse_methods_agree_and_respect_bound(h, seed, method, low_mem):
    rng = random.Random(seed)
    lin, dense = random_poly(rng, F, 3, 1), random_poly(rng, F, 3, h)
    c = MulCounter()
    got = sparse_resultant(lin, dense, 3, counter=c, method=method, low_mem=low_mem)
    assert got == sparse_resultant(lin, dense, 3, method="ladder")
    assert c.count <= 4 * h


def test_sparse_with_threads_is_identical():
    rng = random.Random(5)
    lin, dense = random_poly(rng, F, 3, 1), random_poly(rng, F, 3, 7)
    assert sparse_resultant(lin, dense, 3, threads=3) == sparse_resultant(lin, dense, 3)
    assert sparse_resultant(lin, dense, 3, threads=3, method="ladder") == sparse_resultant(lin, dense, 3)


def test_example_pairs_reproduce_printed_resultants():
    (f5, f6), (f3, f4) = load_example1_pair()
    rule = toy_vectors.toy_rule()
    e56, e34 = toy_vectors.expected_resultants()
    assert sparse_resultant(f5, f6, 5, rule) == e56
    assert sparse_resultant(f3, f4, 3, rule) == e34
    assert reduce_x1(general_resultant(f5, f6, 5), rule) == e56
    assert e56.num_terms == 45 and e34.num_terms == 45


def test_toy_rule_is_consistent_with_gmv_shape():
    # The x1-free part of f1 is lead * (-(xn/b1))^3 ... only its shape is checked:
    # r has the monomials x1^2 xn, x1 xn^2, xn^3, x1, xn and nothing else.
    r = toy_vectors.toy_rule().r
    assert set(r.terms()) == {(2, 1), (1, 2), (0, 3), (1, 0), (0, 1)}


def test_decomposition_errors():
    x3, x4 = MultiPoly.variable(F, 3), MultiPoly.variable(F, 4)
    with pytest.raises(NotLinear):
        SylvesterDecomposition.of(x3**2 + x4, x3 + 1, 3)
    with pytest.raises(TrivialDense):
        SylvesterDecomposition.of(x3 + x4, x4 + 1, 3)
    with pytest.raises(ZeroDegree):
        sylvester_matrix(x4, x3, 3)


def test_sylvester_layout():
    x = MultiPoly.variable(F, 2)
    f = x * 2 + 3
    g = x**2 * 5 + x * 6 + 7
    m = sylvester_matrix(f, g, 2)
    vals = [[int(c.constant_value()) if c.is_constant() else None for c in row] for row in m]
    assert vals == [[2, 3, 0], [0, 2, 3], [5, 6, 7]]
    assert cofactor_determinant(m).constant_value() == univariate_resultant([3, 2], [7, 6, 5], 101)


def test_exact_division():
    rng = random.Random(8)
    a, b = random_poly(rng, F, 2, 3), random_poly(rng, F, 2, 2)
    assert exact_div(a * b, b) == a
    with pytest.raises(InexactDivision):
        exact_div(a * b + 1, b)


def test_final_resultant_shape_and_degree():
    F2 = PrimeField(1523)
    rng = random.Random(3)
    f1 = random_poly(rng, F2, 1, 3, others=(7,), max_other=3)
    rule = ReductionRule(MultiPoly.variable(F2, 7) * 3 + MultiPoly.variable(F2, 1), xn=7)
    g2 = random_poly(rng, F2, 1, 2, others=(7,), max_other=5)
    u = final_resultant(f1, g2, rule)
    assert u == general_resultant(f1, g2, 1).to_univariate(7)
    with pytest.raises(BadShape):
        final_resultant(f1, random_poly(rng, F2, 1, 3, others=(7,)), rule)
    with pytest.raises(BadShape):
        final_resultant(f1, random_poly(rng, F2, 1, 2, others=(5,)), rule)
    const_x1 = random_poly(rng, F2, 7, 4, others=())
    assert final_resultant(f1, const_x1, rule) == (const_x1**3).to_univariate(7)
