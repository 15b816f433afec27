"""Arithmetic in the prime field Z/pZ.

Matrix code works on plain ``int`` residues through a :class:`PrimeField`
instance; :class:`FieldElement` wraps a residue together with its field for
callers that want operator syntax.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

MAX_CHARACTERISTIC = 2**31


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


class PrimeField:
    """The field with ``p`` elements, ``p`` prime and at most 2**31."""

    __slots__ = ("p",)

    def __init__(self, p: int = 2) -> None:
        if not isinstance(p, int) or isinstance(p, bool):
            raise TypeError(f"characteristic must be an int, got {p!r}")
        if p > MAX_CHARACTERISTIC or not is_prime(p):
            raise ValueError(f"characteristic must be a prime <= 2**31, got {p}")
        self.p = p

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PrimeField", self.p))

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(value % self.p, self)

    def reduce(self, a: int) -> int:
        return a % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def inverse(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.p})")
        # pow with exponent -1 runs the extended Euclidean algorithm
        return pow(a, -1, self.p)

    def div(self, a: int, b: int) -> int:
        return a * self.inverse(b) % self.p

    def elements(self) -> range:
        return range(self.p)


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: PrimeField

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.field.p:
            raise ValueError(f"{self.value} is not reduced modulo {self.field.p}")

    def _check(self, other: FieldElement) -> None:
        if other.field != self.field:
            raise ValueError(
                f"mismatched characteristics: {self.field.p} and {other.field.p}"
            )

    def __add__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.field.add(self.value, other.value), self.field)

    def __sub__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.field.sub(self.value, other.value), self.field)

    def __mul__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.field.mul(self.value, other.value), self.field)

    def __truediv__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.field.div(self.value, other.value), self.field)

    def __neg__(self) -> FieldElement:
        return FieldElement(self.field.neg(self.value), self.field)

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.field.p})"

    def inverse(self) -> FieldElement:
        return FieldElement(self.field.inverse(self.value), self.field)


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def inverse(a: FieldElement) -> FieldElement:
    return a.inverse()
