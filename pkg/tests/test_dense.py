import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from gmvsolve import _dense
from gmvsolve.ff import PrimeField


def schoolbook(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


@st.composite
def operand_pair(draw):
    p = draw(st.sampled_from([101, 8380417, 2**31 - 1, 2**61 - 1, 2**127 - 1]))
    la = draw(st.integers(1, 300))
    lb = draw(st.integers(1, 300))
    a = draw(st.lists(st.integers(0, p - 1), min_size=la, max_size=la))
    b = draw(st.lists(st.integers(0, p - 1), min_size=lb, max_size=lb))
    return p, a, b


@given(operand_pair())
def test_umul_against_schoolbook(args):
    p, a, b = args
    F = PrimeField(p)
    got = _dense.umul(F.array(a), F.array(b), F)
    assert [int(x) for x in got] == schoolbook(a, b, p)


def test_kronecker_path_large_sparse():
    F = PrimeField(8380417)
    rng = np.random.default_rng(0)
    a = rng.integers(0, F.p, 2000)
    b = rng.integers(0, F.p, 1500)
    a[::3] = 0
    got = _dense.umul(a, b, F)
    want = schoolbook(a.tolist()[:200], b.tolist(), F.p)
    # prefix of the product only depends on the prefix of a
    assert got[:200].tolist() == want[:200]
    full = schoolbook(a.tolist(), b.tolist(), F.p)
    assert got.tolist() == full


@given(st.integers(1, 6), st.integers(1, 6), st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**32))
def test_mul_nd_matches_dict_product(a0, a1, b0, b1, seed):
    F = PrimeField(1523)
    rng = np.random.default_rng(seed)
    a = rng.integers(0, F.p, (a0, a1))
    b = rng.integers(0, F.p, (b0, b1))
    got = _dense.mul_nd(a, b, F)
    want = np.zeros((a0 + b0 - 1, a1 + b1 - 1), dtype=object)
    for (i, j), x in np.ndenumerate(a):
        for (k, m), y in np.ndenumerate(b):
            want[i + k, j + m] += int(x) * int(y)
    assert (got.astype(object) == want % F.p).all()


def test_mul_nd_large_uses_flattening():
    F = PrimeField(8380417)
    rng = np.random.default_rng(3)
    a = rng.integers(0, F.p, (40, 3, 50))
    b = rng.integers(0, F.p, (30, 2, 40))
    got = _dense.mul_nd(a, b, F)
    # check a slice: coefficient of x^(i) y^(j) z^(k) against a direct sum
    i, j, k = 37, 2, 61
    acc = 0
    for u in range(a.shape[0]):
        for v in range(a.shape[1]):
            for w in range(a.shape[2]):
                r, s, t = i - u, j - v, k - w
                if 0 <= r < b.shape[0] and 0 <= s < b.shape[1] and 0 <= t < b.shape[2]:
                    acc += int(a[u, v, w]) * int(b[r, s, t])
    assert int(got[i, j, k]) == acc % F.p
