"""Multivariate polynomials over F_p in degrevlex order.

Monomials are dense exponent tuples.  A :class:`Polynomial` is an immutable
tuple of ``(coeff, exponents)`` pairs sorted strictly descending, with
integer coefficients in ``[1, p)``.
"""

from __future__ import annotations

import re
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .field import FieldElement, FieldPrime, inv_mod

Monomial = tuple[int, ...]


class PolynomialError(ValueError):
    """Ambient mismatch, bad homogenization target or unparsable text."""


def degrevlex_key(m: Monomial) -> tuple:
    """Sort key: larger key means larger monomial in degrevlex."""
    return (sum(m), tuple(-e for e in reversed(m)))


def degrevlex_cmp(a: Monomial, b: Monomial) -> int:
    """Return 1, 0 or -1 as ``a`` is greater than, equal to or less than ``b``.

    Total degree decides first; ties go to the monomial whose last nonzero
    entry of ``a - b`` is negative.
    """
    if len(a) != len(b):
        raise PolynomialError(f"monomial lengths differ: {len(a)} vs {len(b)}")
    da, db = sum(a), sum(b)
    if da != db:
        return 1 if da > db else -1
    for x, y in zip(reversed(a), reversed(b)):
        if x != y:
            return 1 if x < y else -1
    return 0


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomial_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def monomials_of_degree(nvars: int, degree: int) -> list[Monomial]:
    """All monomials of exactly ``degree`` in ``nvars`` variables, descending."""
    if degree < 0:
        return []
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    out.sort(key=degrevlex_key, reverse=True)
    return out


class Polynomial:
    __slots__ = ("terms", "nvars", "p", "_hash")

    def __init__(self, terms: Iterable[tuple[int, Monomial]], nvars: int, p: int, *, _trusted=False):
        self.nvars = nvars
        self.p = p
        if _trusted:
            self.terms = tuple(terms)
        else:
            acc: dict[Monomial, int] = {}
            for c, m in terms:
                m = tuple(int(e) for e in m)
                if len(m) != nvars:
                    raise PolynomialError(f"monomial {m} does not have {nvars} variables")
                if any(e < 0 for e in m):
                    raise PolynomialError(f"negative exponent in {m}")
                acc[m] = (acc.get(m, 0) + int(c)) % p
            self.terms = _sorted_terms(acc)
        self._hash = None

    # construction -----------------------------------------------------

    @classmethod
    def from_dict(cls, coeffs: Mapping[Monomial, int], nvars: int, p: int) -> Polynomial:
        """Build from a monomial->coeff map whose keys are already valid tuples."""
        return cls(_sorted_terms({m: c % p for m, c in coeffs.items()}), nvars, p, _trusted=True)

    @classmethod
    def zero(cls, nvars: int, p: int) -> Polynomial:
        return cls((), nvars, p, _trusted=True)

    @classmethod
    def constant(cls, c: int, nvars: int, p: int) -> Polynomial:
        return cls([(c, (0,) * nvars)], nvars, p)

    @classmethod
    def variable(cls, i: int, nvars: int, p: int) -> Polynomial:
        """The variable x_{i+1} (0-based index ``i``)."""
        e = [0] * nvars
        e[i] = 1
        return cls(((1, tuple(e)),), nvars, p, _trusted=True)

    def to_dict(self) -> dict[Monomial, int]:
        return {m: c for c, m in self.terms}

    # basic queries ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return sum(self.terms[0][1]) if self.terms else -1

    def leading_term(self) -> tuple[FieldElement, Monomial] | None:
        if not self.terms:
            return None
        c, m = self.terms[0]
        return FieldPrime(self.p)(c), m

    def leading_monomial(self) -> Monomial | None:
        return self.terms[0][1] if self.terms else None

    def leading_coefficient(self) -> int:
        return self.terms[0][0] if self.terms else 0

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        d = sum(self.terms[0][1])
        return all(sum(m) == d for _, m in self.terms)

    def homogeneous_part(self, degree: int) -> Polynomial:
        return Polynomial([(c, m) for c, m in self.terms if sum(m) == degree], self.nvars, self.p, _trusted=True)

    def evaluate(self, point: Sequence[int]) -> FieldElement:
        if len(point) != self.nvars:
            raise PolynomialError(f"point has {len(point)} coordinates, expected {self.nvars}")
        p = self.p
        pt = [int(v) % p for v in point]
        total = 0
        for c, m in self.terms:
            t = c
            for v, e in zip(pt, m):
                if e:
                    t = t * pow(v, e, p) % p
            total += t
        return FieldPrime(p)(total)

    # arithmetic ---------------------------------------------------------

    def _check(self, other: Polynomial) -> None:
        if not isinstance(other, Polynomial):
            raise TypeError(f"expected Polynomial, got {type(other).__name__}")
        if other.nvars != self.nvars or other.p != self.p:
            raise PolynomialError(
                f"ambient mismatch: ({self.nvars} vars, p={self.p}) vs ({other.nvars} vars, p={other.p})"
            )

    def __add__(self, other: Polynomial) -> Polynomial:
        self._check(other)
        acc = self.to_dict()
        p = self.p
        for c, m in other.terms:
            acc[m] = (acc.get(m, 0) + c) % p
        return Polynomial.from_dict(acc, self.nvars, p)

    def __neg__(self) -> Polynomial:
        p = self.p
        return Polynomial(((p - c, m) for c, m in self.terms), self.nvars, p, _trusted=True)

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def scalar_mul(self, c: int | FieldElement) -> Polynomial:
        c = int(c) % self.p
        if c == 0:
            return Polynomial.zero(self.nvars, self.p)
        p = self.p
        return Polynomial(((a * c % p, m) for a, m in self.terms), self.nvars, p, _trusted=True)

    def monomial_mul(self, c: int, mono: Monomial) -> Polynomial:
        """Multiply by the term ``c * mono``; degrevlex is multiplicative so order is kept."""
        c %= self.p
        if c == 0:
            return Polynomial.zero(self.nvars, self.p)
        p = self.p
        return Polynomial(
            ((a * c % p, monomial_mul(m, mono)) for a, m in self.terms), self.nvars, p, _trusted=True
        )

    def __mul__(self, other: Polynomial) -> Polynomial:
        if isinstance(other, (int, FieldElement)):
            return self.scalar_mul(other)
        self._check(other)
        p = self.p
        acc: dict[Monomial, int] = {}
        for a, ma in self.terms:
            for b, mb in other.terms:
                m = tuple(x + y for x, y in zip(ma, mb))
                acc[m] = acc.get(m, 0) + a * b
        return Polynomial.from_dict(acc, self.nvars, p)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        out = Polynomial.constant(1, self.nvars, self.p)
        for _ in range(k):
            out = out * self
        return out

    def monic(self) -> Polynomial:
        if not self.terms:
            return self
        return self.scalar_mul(inv_mod(self.terms[0][0], self.p))

    # homogenization -----------------------------------------------------

    def homogenize(self, target_degree: int | None = None) -> Polynomial:
        """Append a variable and pad every term up to ``target_degree``.

        With no target the polynomial's own degree is used.
        """
        d = self.degree if target_degree is None else target_degree
        if self.terms and d < self.degree:
            raise PolynomialError(f"target degree {d} is below the polynomial degree {self.degree}")
        terms = [(c, m + (d - sum(m),)) for c, m in self.terms]
        return Polynomial(terms, self.nvars + 1, self.p)

    def dehomogenize(self) -> Polynomial:
        """Set the last variable to 1 and drop it."""
        return Polynomial(((c, m[:-1]) for c, m in self.terms), self.nvars - 1, self.p)

    def extend_ambient(self, extra: int = 1) -> Polynomial:
        pad = (0,) * extra
        return Polynomial(((c, m + pad) for c, m in self.terms), self.nvars + extra, self.p, _trusted=True)

    # comparison / rendering --------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.p == other.p and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, self.p, self.terms))
        return self._hash

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(_term_text(c, m) for c, m in self.terms)

    __str__ = to_text

    def __repr__(self) -> str:
        return f"Polynomial({self.to_text()!r}, nvars={self.nvars}, p={self.p})"

    @classmethod
    def from_text(cls, text: str, nvars: int, p: int) -> Polynomial:
        return parse_polynomial(text, nvars, p)


def _sorted_terms(acc: Mapping[Monomial, int]) -> tuple[tuple[int, Monomial], ...]:
    items = [(c, m) for m, c in acc.items() if c]
    items.sort(key=lambda t: degrevlex_key(t[1]), reverse=True)
    return tuple(items)


def _term_text(c: int, m: Monomial) -> str:
    factors = [str(c)]
    for i, e in enumerate(m, start=1):
        if e == 1:
            factors.append(f"x{i}")
        elif e > 1:
            factors.append(f"x{i}^{e}")
    return "*".join(factors)


_TERM_SPLIT = re.compile(r"\s*([+-])\s*")
_FACTOR = re.compile(r"^(?:(\d+)|x(\d+)(?:\^(\d+))?)$")


def parse_polynomial(text: str, nvars: int, p: int) -> Polynomial:
    """Parse ``c*x1^a1*...*xk^ak + ...``; ``-`` and bare variables are accepted."""
    src = text.replace("**", "^").strip()
    if not src:
        raise PolynomialError("empty polynomial text")
    if src[0] not in "+-":
        src = "+" + src
    parts = _TERM_SPLIT.split(src)
    # split yields ['', sign, body, sign, body, ...]
    if parts[0].strip():
        raise PolynomialError(f"cannot parse {text!r}")
    terms = []
    for sign, body in zip(parts[1::2], parts[2::2]):
        body = body.strip()
        if not body:
            raise PolynomialError(f"dangling sign in {text!r}")
        c = 1
        e = [0] * nvars
        for factor in body.split("*"):
            match = _FACTOR.match(factor.strip())
            if not match:
                raise PolynomialError(f"bad factor {factor!r} in {text!r}")
            num, var, exp = match.groups()
            if num is not None:
                c *= int(num)
            else:
                idx = int(var)
                if not 1 <= idx <= nvars:
                    raise PolynomialError(f"variable x{idx} outside x1..x{nvars}")
                e[idx - 1] += int(exp) if exp else 1
        terms.append((-c if sign == "-" else c, tuple(e)))
    return Polynomial(terms, nvars, p)
