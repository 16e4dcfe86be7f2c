"""Prime-field arithmetic.

Coefficients everywhere else in the package are plain ``int`` residues for
speed; :class:`FieldElement` is the checked value type used at API edges.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_PRIME = 101
LARGE_PRIME = 65521
MAX_PRIME = 2**31


class FieldError(ValueError):
    """Invalid modulus or mixed-modulus arithmetic."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def inv_mod(a: int, p: int) -> int:
    """Inverse of ``a`` modulo ``p`` by extended Euclid."""
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse modulo {p}")
    r0, r1, s0, s1 = p, a, 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    return s0 % p


@dataclass(frozen=True)
class FieldPrime:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not is_prime(int(self.p)):
            raise FieldError(f"modulus {self.p!r} is not prime")
        if self.p >= MAX_PRIME:
            raise FieldError(f"modulus {self.p} exceeds the word-size limit 2^31")
        object.__setattr__(self, "p", int(self.p))

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(int(value) % self.p, self)

    def zero(self) -> FieldElement:
        return FieldElement(0, self)

    def one(self) -> FieldElement:
        return FieldElement(1, self)


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: FieldPrime

    def __post_init__(self):
        if not 0 <= self.value < self.field.p:
            raise FieldError(f"{self.value} is not a canonical residue mod {self.field.p}")

    @property
    def p(self) -> int:
        return self.field.p

    def _check(self, other: FieldElement) -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.field.p != self.field.p:
            raise FieldError(f"modulus mismatch: {self.field.p} vs {other.field.p}")

    def __add__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement((self.value + other.value) % self.p, self.field)

    def __sub__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement((self.value - other.value) % self.p, self.field)

    def __neg__(self) -> FieldElement:
        return FieldElement(-self.value % self.p, self.field)

    def __mul__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.value * other.value % self.p, self.field)

    def __truediv__(self, other: FieldElement) -> FieldElement:
        return self * other.inv()

    def inv(self) -> FieldElement:
        return FieldElement(inv_mod(self.value, self.p), self.field)

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.p})"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inv()


def random_element(rng: np.random.Generator, p: int) -> FieldElement:
    """Uniform draw from F_p."""
    return FieldPrime(p)(int(rng.integers(0, p)))


def random_nonzero(rng: np.random.Generator, p: int) -> FieldElement:
    """Uniform draw from F_p minus zero."""
    return FieldPrime(p)(int(rng.integers(1, p)))
