import itertools
import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gmvsolve.errors import BadN, DegenerateLeadingCoefficient, OracleTooLarge
from gmvsolve.ff import PrimeField
from gmvsolve.gmv import (
    GmvSystem,
    Solution,
    brute_force_solve,
    generate,
    initialize,
    lead_coefficient_closed_form,
    read_solutions,
    recover_solution,
    verify,
    write_solutions,
)
from gmvsolve.mpoly import MultiPoly


def direct_values(sys, x):
    """The defining equations evaluated with plain integers."""
    p, n, a, b, t = sys.field.p, sys.n, sys.a, sys.b, sys.t
    out = [
        b[1] * x[0] + x[1] + x[n],
        a[0] * x[0] ** 3 - (b[0] * x[0] + 2 * x[1]) * (a[1] * x[0] ** 2 + x[1] ** 2 + 1),
    ]
    for i in range(2, n):
        y = x[i - 1]
        out.append(x[i] * (y * y - 1) + (a[i] * x[1] + b[i] * x[n]) * (2 * x[i] * y - y * y + 1) + 2 * y)
    y = x[n - 1]
    out.append(t * (y * y + 2 * x[n] * y - 1) - x[n] * (y * y - 1) + 2 * y)
    return [v % p for v in out]


def nondegenerate(field, n, seed):
    while True:
        s = generate(field, n, seed)
        if lead_coefficient_closed_form(s):
            return s
        seed += 1000


@given(st.integers(4, 9), st.integers(0, 10**6), st.lists(st.integers(0, 10**7), min_size=10, max_size=10))
def test_polynomials_match_direct_formulas(n, seed, pt):
    F = PrimeField(1523)
    s = generate(F, n, seed)
    x = [v % F.p for v in pt[: n + 1]] + [0] * max(0, n + 1 - len(pt))
    assign = dict(enumerate(x))
    assert [int(f.evaluate(assign)) for f in s.polys] == direct_values(s, x)


def test_generate_is_deterministic_and_ordered():
    F = PrimeField(8380417)
    s1, s2 = generate(F, 7, 42), generate(F, 7, 42)
    assert s1 == s2 and s1.to_json() == s2.to_json()
    rng = random.Random(42)
    assert s1.t == rng.randrange(F.p)
    assert list(s1.a) == [rng.randrange(F.p) for _ in range(7)]
    assert s1.b[1] != 0
    assert generate(F, 7, 43) != s1
    with pytest.raises(BadN):
        generate(F, 3, 1)


def test_with_t_changes_only_fn():
    F = PrimeField(1523)
    s = generate(F, 6, 1)
    u = s.with_t(s.t + 1)
    assert u.constants_key() == s.constants_key()
    assert [f == g for f, g in zip(s.polys, u.polys)] == [True] * 6 + [False]


def test_json_roundtrip(tmp_path):
    F = PrimeField(2**61 - 1)
    s = generate(F, 5, 3)
    assert GmvSystem.from_json(s.to_json()) == s
    d = json.loads(s.to_json())
    assert all(isinstance(v, str) for v in d["a"] + d["b"])
    sols = [Solution((1, 2, 3, 4, 5, 6)), Solution((0, 0, 0, 0, 0, 1))]
    write_solutions(tmp_path / "s.jsonl", sols)
    assert read_solutions(tmp_path / "s.jsonl") == sorted(sols)


@pytest.mark.parametrize("p", [101, 1523, 8380417])
def test_initialize_substitutes_x0(p):
    F = PrimeField(p)
    rng = random.Random(p)
    for seed in range(5):
        s = nondegenerate(F, 6, seed)
        init = initialize(s)
        assert set(init.f1.vars) == {1, 6}
        ib = pow(s.b[1], -1, p)
        for _ in range(5):
            x1, xn = rng.randrange(p), rng.randrange(p)
            x0 = -(x1 + xn) * ib % p
            assert int(init.f1.evaluate({1: x1, 6: xn})) == int(s.f1_prime.evaluate({0: x0, 1: x1}))
        x1 = MultiPoly.variable(F, 1)
        assert init.f1.scale(F.inv_int(init.lead_c)) == x1**3 - init.rule.r
        assert init.rule.r.degree_in(1) <= 2


def test_degenerate_leading_coefficient():
    F = PrimeField(101)
    s = generate(F, 5, 0)
    # choose a0 so that the x1^3 coefficient vanishes
    a = list(s.a)
    ib = pow(s.b[1], -1, 101)
    rest = (a[1] * s.b[0] * ib**3 - 2 * a[1] * ib**2 + s.b[0] * ib - 2) % 101
    a[0] = rest * pow(ib**3, -1, 101) % 101
    bad = GmvSystem(F, 5, s.t, tuple(a), s.b)
    assert lead_coefficient_closed_form(bad) == 0
    with pytest.raises(DegenerateLeadingCoefficient):
        initialize(bad)


def test_degree_table_shape():
    s = nondegenerate(PrimeField(1523), 7, 1)
    rows = dict(s.degree_table())
    assert rows["f1"] == (3, 0, 0, 0, 0, 0, 3)
    assert rows["f2"] == (3, 1, 0, 0, 0, 0, 1)
    assert rows["f3"] == (1, 2, 1, 0, 0, 0, 1)
    assert rows["f4"] == (1, 0, 2, 1, 0, 0, 1)
    assert rows["f5"] == (1, 0, 0, 2, 1, 0, 1)
    assert rows["f7"] == (0, 0, 0, 0, 0, 2, 1)


@pytest.mark.parametrize("p,n", [(7, 4), (11, 4), (5, 5)])
def test_brute_force_matches_full_enumeration(p, n):
    F = PrimeField(p)
    for seed in range(3):
        s = nondegenerate(F, n, seed)
        want = {Solution(x) for x in itertools.product(range(p), repeat=n + 1) if not any(direct_values(s, x))}
        assert brute_force_solve(s) == want


# Solution sets frozen from brute_force_solve (itself checked above).
FROZEN = {
    (5, 5): [(0, 10, 10, 10, 10, 91), (0, 91, 91, 91, 91, 10), (37, 97, 5, 65, 71, 50), (69, 32, 53, 95, 52, 92)],
    (6, 4): [(0, 10, 10, 10, 10, 10, 91), (0, 91, 91, 91, 91, 91, 10), (50, 57, 80, 87, 98, 19, 48), (85, 30, 55, 71, 8, 45, 98)],
    (4, 0): [(0, 10, 10, 10, 91), (0, 91, 91, 91, 10), (38, 66, 87, 8, 2)],
}


@pytest.mark.parametrize("key", sorted(FROZEN))
def test_frozen_solution_sets(key):
    n, seed = key
    s = generate(PrimeField(101), n, seed)
    for x in FROZEN[key]:
        assert not any(direct_values(s, x))
    assert sorted(v.values for v in brute_force_solve(s)) == FROZEN[key]


def test_recover_and_verify():
    s = generate(PrimeField(101), 5, 5)
    init = initialize(s)
    got = recover_solution(init, s, 50)
    assert [g.values for g in got] == [(37, 97, 5, 65, 71, 50)]
    assert verify(s, got[0])
    wrong = Solution((37, 97, 5, 65, 72, 50))
    assert not verify(s, wrong)
    # an xn with no solution yields nothing
    assert recover_solution(init, s, 49) == []


def test_oracle_limits():
    with pytest.raises(OracleTooLarge):
        brute_force_solve(generate(PrimeField(8380417), 5, 1))
    with pytest.raises(OracleTooLarge):
        brute_force_solve(generate(PrimeField(101), 9, 1))


def test_solution_order():
    a, b = Solution((1, 5, 2)), Solution((0, 1, 3))
    assert sorted([b, a]) == [a, b]
    assert a.xn == 2
