"""Dense coefficient-array kernels mod p.

Arrays hold canonical residues, int64 when ``p < 2**31`` and Python ints
(object dtype) otherwise.  Large products go through Kronecker packing into
one GMP integer; small ones use shifted multiply-accumulate.
"""

from __future__ import annotations

import gmpy2
import numpy as np

from .ff import PrimeField

# Below this many multiply-accumulate passes the schoolbook path wins.
SCHOOLBOOK_NNZ = 12
SCHOOLBOOK_WORK = 1 << 14


def _limbs(x: np.ndarray, field: PrimeField) -> np.ndarray:
    """Split residues into little-endian uint32 limbs, shape (len, k)."""
    if field.fast:
        return x.astype("<u4").reshape(-1, 1)
    k = (field.bits + 31) // 32
    out = np.empty((len(x), k), dtype="<u4")
    mask = 0xFFFFFFFF
    for j in range(k):
        out[:, j] = ((x >> (32 * j)) & mask).astype(np.uint64)
    return out


def _pack(x: np.ndarray, field: PrimeField, slot: int):
    limbs = _limbs(x, field)
    buf = np.zeros((len(x), slot // 4), dtype="<u4")
    buf[:, : limbs.shape[1]] = limbs
    return gmpy2.mpz.from_bytes(buf.tobytes(), "little")


def _unpack(z, count: int, field: PrimeField, slot: int) -> np.ndarray:
    raw = z.to_bytes(count * slot, "little")
    words = np.frombuffer(raw, dtype="<u4").reshape(count, slot // 4)
    p = field.p
    if field.fast:
        pu = np.uint64(p)
        acc = np.zeros(count, dtype=np.uint64)
        for j in range(words.shape[1]):
            col = words[:, j].astype(np.uint64)
            if not col.any():
                continue
            w = np.uint64(pow(2, 32 * j, p))
            acc = (acc + (col % pu) * w) % pu
        return acc.astype(np.int64)
    acc = np.zeros(count, dtype=object)
    for j in range(words.shape[1]):
        col = words[:, j]
        if col.any():
            acc = acc + (col.astype(object) << (32 * j))
    return acc % p


def umul(a: np.ndarray, b: np.ndarray, field: PrimeField) -> np.ndarray:
    """Product of two nonempty 1-D coefficient arrays (ascending order)."""
    la, lb = len(a), len(b)
    if min(la, lb) <= SCHOOLBOOK_NNZ or la * lb <= SCHOOLBOOK_WORK:
        return _schoolbook(a.reshape(-1), b.reshape(-1), field)
    bits = 2 * field.bits + min(la, lb).bit_length() + 1
    slot = ((bits + 31) // 32) * 4
    z = _pack(a, field, slot) * _pack(b, field, slot)
    return _unpack(z, la + lb - 1, field, slot)


def _schoolbook(a: np.ndarray, b: np.ndarray, field: PrimeField) -> np.ndarray:
    if len(a) > len(b):
        a, b = b, a
    p = field.p
    out = field.zeros(len(a) + len(b) - 1)
    lb = len(b)
    for i in np.flatnonzero(a != 0):
        seg = out[i : i + lb]
        seg += a[i] * b
        seg %= p
    return out


def mul_nd(a: np.ndarray, b: np.ndarray, field: PrimeField) -> np.ndarray:
    """Product of two coefficient arrays with equal ndim (one axis per variable)."""
    if a.ndim == 0 or b.ndim == 0:
        return (a * b) % field.p
    if a.ndim == 1:
        return umul(a, b, field)
    out_shape = tuple(x + y - 1 for x, y in zip(a.shape, b.shape))
    small, big = (a, b) if a.size <= b.size else (b, a)
    nz = np.argwhere(small != 0)
    if len(nz) <= SCHOOLBOOK_NNZ or a.size * b.size <= SCHOOLBOOK_WORK:
        p = field.p
        out = field.zeros(out_shape)
        for idx in nz:
            sl = tuple(slice(i, i + s) for i, s in zip(idx, big.shape))
            seg = out[sl]
            seg += small[tuple(idx)] * big
            seg %= p
        return out
    inner = out_shape[1:]
    fa = pad_to(a, (a.shape[0],) + inner).reshape(-1)
    fb = pad_to(b, (b.shape[0],) + inner).reshape(-1)
    fa = trim1(fa)
    fb = trim1(fb)
    flat = umul(fa, fb, field)
    total = int(np.prod(out_shape))
    if len(flat) < total:
        flat = np.concatenate([flat, field.zeros(total - len(flat))])
    return flat[:total].reshape(out_shape)


def pad_to(a: np.ndarray, shape) -> np.ndarray:
    if a.shape == tuple(shape):
        return a
    out = np.zeros(shape, dtype=a.dtype) if a.dtype != object else _obj_zeros(shape)
    out[tuple(slice(0, s) for s in a.shape)] = a
    return out


def _obj_zeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(0)
    return out


def trim1(a: np.ndarray) -> np.ndarray:
    """Drop trailing zeros of a 1-D array (keeps at least one entry)."""
    nz = np.flatnonzero(a != 0)
    if len(nz) == 0:
        return a[:1]
    return a[: nz[-1] + 1]


def add_nd(a: np.ndarray, b: np.ndarray, field: PrimeField, sign: int = 1) -> np.ndarray:
    shape = tuple(max(x, y) for x, y in zip(a.shape, b.shape))
    out = pad_to(a, shape).copy()
    sl = tuple(slice(0, s) for s in b.shape)
    if sign == 1:
        out[sl] += b
    else:
        out[sl] -= b
    out %= field.p
    return out
