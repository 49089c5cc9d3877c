"""Prime field arithmetic.

Polynomial code never touches :class:`FieldElement` in its inner loops; it
works on numpy arrays of canonical residues and uses :class:`PrimeField` for
the modulus, dtype choice and a few scalar helpers.  ``FieldElement`` is the
value type exposed at API boundaries.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from functools import total_ordering

import gmpy2
import numpy as np

from .errors import CompositeModulus, DivisionByZero, FieldMismatch, InvalidModulus

# Residues below 2**31 fit int64 products without overflow; larger moduli
# fall back to Python integers in object arrays.
FAST_LIMIT = 1 << 31

MILLER_RABIN_ROUNDS = 40


@dataclass(frozen=True)
class PrimeField:
    p: int
    fast: bool = dc_field(init=False, repr=False, compare=False)

    def __post_init__(self):
        p = self.p
        if not isinstance(p, int) or isinstance(p, bool):
            raise InvalidModulus(f"modulus must be an integer, got {p!r}")
        if p < 3 or p % 2 == 0:
            raise InvalidModulus(f"modulus must be an odd integer >= 3, got {p}")
        if not gmpy2.is_prime(p, MILLER_RABIN_ROUNDS):
            raise CompositeModulus(f"{p} is not prime")
        object.__setattr__(self, "fast", p < FAST_LIMIT)

    @property
    def dtype(self):
        return np.int64 if self.fast else object

    @property
    def bits(self) -> int:
        return self.p.bit_length()

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(int(value) % self.p, self)

    def zero(self) -> FieldElement:
        return FieldElement(0, self)

    def one(self) -> FieldElement:
        return FieldElement(1, self)

    def inv_int(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return pow(a, -1, self.p)

    def array(self, values) -> np.ndarray:
        """Canonical residue array of the field's dtype."""
        if isinstance(values, np.ndarray) and values.dtype != object:
            arr = values.astype(np.int64) % self.p
            return arr if self.fast else arr.astype(object)
        arr = np.empty(np.shape(values), dtype=object)
        arr[...] = values
        arr %= self.p
        return arr.astype(np.int64) if self.fast else arr

    def zeros(self, shape) -> np.ndarray:
        if self.fast:
            return np.zeros(shape, dtype=np.int64)
        arr = np.empty(shape, dtype=object)
        arr.fill(0)
        return arr


def field_new(p: int) -> PrimeField:
    return PrimeField(p)


@total_ordering
@dataclass(frozen=True)
class FieldElement:
    value: int
    field: PrimeField

    def __post_init__(self):
        assert 0 <= self.value < self.field.p, "non-canonical field element"

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"F_{self.field.p} vs F_{other.field.p}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other)
        return NotImplemented

    def _new(self, v: int) -> FieldElement:
        return FieldElement(v % self.field.p, self.field)

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._new(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._new(self.value - o)

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._new(o - self.value)

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._new(self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.value)

    def inv(self) -> FieldElement:
        return FieldElement(self.field.inv_int(self.value), self.field)

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self._new(self.value * self.field.inv_int(o))

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self._new(o * self.field.inv_int(self.value))

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        return FieldElement(pow(self.value, e, self.field.p), self.field)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other) % self.field.p
        return NotImplemented

    def __lt__(self, other):
        return self.value < self._other(other)

    def __hash__(self):
        return hash((self.value, self.field.p))

    def __int__(self):
        return self.value

    __index__ = __int__

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value} (mod {self.field.p})"

    def __str__(self):
        return str(self.value)


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def neg(a: FieldElement) -> FieldElement:
    return -a


def inv(a: FieldElement) -> FieldElement:
    return a.inv()


def fpow(a: FieldElement, e: int) -> FieldElement:
    if e < 0:
        raise ValueError("negative exponent")
    return a**e


def sample_uniform(field: PrimeField, rng: random.Random) -> FieldElement:
    """Draw a uniform element. ``rng`` is owned by the caller and advanced."""
    return FieldElement(rng.randrange(field.p), field)
