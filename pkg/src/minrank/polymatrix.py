"""Degree matrices, polynomial matrices, MinRank instances and their minors."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Sequence

import numpy as np

from .field import is_prime
from .multipoly import Monomial, Polynomial, monomials_of_degree


class DegreeError(ValueError):
    """A degree grid violates positivity or additivity."""


class InstanceError(ValueError):
    """Bad MinRank parameters."""


# degree matrices ------------------------------------------------------


@dataclass(frozen=True)
class DegreeMatrix:
    """Grid of entry degrees ``d[i][j] = e[i] + f[j]``, rows sorted by first column.

    ``row_order[t]`` is the index of the input row that landed in row ``t``.
    """

    entries: tuple[tuple[int, ...], ...]
    row_offsets: tuple[int, ...]
    col_offsets: tuple[int, ...]
    row_order: tuple[int, ...] = ()

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return len(self.entries[0])

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def total(self) -> int:
        return sum(map(sum, self.entries))

    def is_constant(self) -> int | None:
        vals = {d for row in self.entries for d in row}
        return vals.pop() if len(vals) == 1 else None

    def to_list(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    @classmethod
    def constant(cls, m: int, n: int, d: int) -> DegreeMatrix:
        return validate_degree_matrix([[d] * n for _ in range(m)])


def degree_matrix_from_offsets(e: Sequence[int], f: Sequence[int]) -> DegreeMatrix:
    grid = [[int(a) + int(b) for b in f] for a in e]
    return validate_degree_matrix(grid)


def validate_degree_matrix(grid: Sequence[Sequence[int]]) -> DegreeMatrix:
    """Check positivity and additivity, sort rows by first column, recover offsets."""
    rows = [[int(x) for x in row] for row in grid]
    if not rows or not rows[0]:
        raise DegreeError("degree matrix is empty")
    n = len(rows[0])
    if any(len(r) != n for r in rows):
        raise DegreeError("degree matrix rows have different lengths")
    m = len(rows)
    for i in range(m):
        for j in range(n):
            if rows[i][j] <= 0:
                raise DegreeError(f"d[{i + 1},{j + 1}] = {rows[i][j]} is not positive")
    # d[i][j] + d[h][l] == d[i][l] + d[h][j] for all quadruples reduces to the
    # check against row 0 and column 0
    for i in range(m):
        for j in range(n):
            if rows[i][j] + rows[0][0] != rows[i][0] + rows[0][j]:
                h, l = _first_violation(rows)
                raise DegreeError(
                    "additivity violated at (i,j,h,l) = "
                    f"({h[0] + 1},{h[1] + 1},{l[0] + 1},{l[1] + 1}): "
                    f"d[{h[0] + 1},{h[1] + 1}] + d[{l[0] + 1},{l[1] + 1}] != "
                    f"d[{h[0] + 1},{l[1] + 1}] + d[{l[0] + 1},{h[1] + 1}]"
                )
    order = sorted(range(m), key=lambda i: rows[i][0])
    rows = [rows[i] for i in order]
    e = tuple(r[0] for r in rows)
    f = tuple(rows[0][j] - rows[0][0] for j in range(n))
    return DegreeMatrix(tuple(map(tuple, rows)), e, f, tuple(order))


def _first_violation(rows):
    m, n = len(rows), len(rows[0])
    for i in range(m):
        for j in range(n):
            for h in range(m):
                for l in range(n):
                    if rows[i][j] + rows[h][l] != rows[i][l] + rows[h][j]:
                        return (i, j), (h, l)
    raise AssertionError("no violation found")


# polynomial matrices --------------------------------------------------


@dataclass(frozen=True)
class PolyMatrix:
    entries: tuple[tuple[Polynomial, ...], ...]
    degrees: DegreeMatrix

    def __post_init__(self):
        m, n = len(self.entries), len(self.entries[0])
        if (m, n) != (self.degrees.m, self.degrees.n):
            raise InstanceError(f"entry grid {m}x{n} does not match degree matrix")

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return len(self.entries[0])

    @property
    def nvars(self) -> int:
        return self.entries[0][0].nvars

    @property
    def p(self) -> int:
        return self.entries[0][0].p

    def validate(self) -> None:
        """Enforce m <= n and exact entry degrees."""
        if self.m > self.n:
            raise InstanceError(f"matrix is {self.m}x{self.n}; transpose so that m <= n")
        for i, row in enumerate(self.entries):
            for j, f in enumerate(row):
                if f.is_zero():
                    raise InstanceError(f"entry ({i + 1},{j + 1}) is zero")
                if f.degree != self.degrees[i, j]:
                    raise InstanceError(
                        f"entry ({i + 1},{j + 1}) has degree {f.degree}, declared {self.degrees[i, j]}"
                    )

    def is_homogeneous(self) -> bool:
        return all(f.is_homogeneous() for row in self.entries for f in row)

    def evaluate(self, point: Sequence[int]) -> np.ndarray:
        return np.array([[f.evaluate(point).value for f in row] for row in self.entries], dtype=np.int64)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> list[list[Polynomial]]:
        return [[self.entries[i][j] for j in cols] for i in rows]


@dataclass(frozen=True)
class MinRankInstance:
    kind: str  # "classical" | "generalized"
    m: int
    n: int
    r: int
    k: int
    p: int
    matrix: PolyMatrix
    seed: int | None = None
    homogeneous: bool = True
    scalar_matrices: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        check_params(self.m, self.n, self.r, self.k, self.p)
        if self.kind not in ("classical", "generalized"):
            raise InstanceError(f"unknown kind {self.kind!r}")

    @property
    def degrees(self) -> DegreeMatrix:
        return self.matrix.degrees


@dataclass(frozen=True)
class MinorsSystem:
    generators: tuple[Polynomial, ...]
    index_sets: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    m: int
    n: int
    size: int
    nvars: int
    p: int

    @property
    def count(self) -> int:
        return len(self.generators)


def check_params(m: int, n: int, r: int, k: int, p: int | None = None) -> None:
    if min(m, n) < 1:
        raise InstanceError("m and n must be positive")
    if m > n:
        raise InstanceError(f"m={m} > n={n}; transpose the matrix first")
    if not 0 <= r < m:
        raise InstanceError(f"need 0 <= r < m, got r={r}, m={m}")
    if k < 1:
        raise InstanceError(f"need k >= 1, got k={k}")
    if p is not None and not is_prime(p):
        raise InstanceError(f"p={p} is not prime")


# generation ---------------------------------------------------------


def classical_matrix(mats: Sequence[np.ndarray], p: int) -> PolyMatrix:
    """The linear matrix sum_l x_l * M_l."""
    stack = np.asarray(mats, dtype=np.int64) % p
    k, m, n = stack.shape
    basis = [tuple(int(l == v) for v in range(k)) for l in range(k)]
    entries = tuple(
        tuple(Polynomial(((int(stack[l, i, j]), basis[l]) for l in range(k)), k, p) for j in range(n))
        for i in range(m)
    )
    return PolyMatrix(entries, DegreeMatrix.constant(m, n, 1))


def _random_entry(rng, nvars: int, degree: int, p: int, homogeneous: bool) -> Polynomial:
    top = monomials_of_degree(nvars, degree)
    lower: list[Monomial] = []
    if not homogeneous:
        for d in range(degree - 1, -1, -1):
            lower.extend(monomials_of_degree(nvars, d))
    while True:
        coeffs = rng.integers(0, p, size=len(top))
        if coeffs.any():
            break
    terms = list(zip(coeffs.tolist(), top))
    if lower:
        terms.extend(zip(rng.integers(0, p, size=len(lower)).tolist(), lower))
    return Polynomial(terms, nvars, p)


def random_instance(
    kind: str,
    m: int,
    n: int,
    r: int,
    k: int,
    degrees: DegreeMatrix | None = None,
    p: int = 101,
    homogeneous: bool = True,
    rng: np.random.Generator | int | None = None,
    seed: int | None = None,
) -> MinRankInstance:
    """Draw a generic instance with i.i.d. uniform coefficients.

    Entries whose top-degree part comes out zero are redrawn, so every
    entry has exactly its declared degree.
    """
    check_params(m, n, r, k, p)
    if rng is None or isinstance(rng, (int, np.integer)):
        seed = int(rng) if rng is not None else seed
        rng = np.random.default_rng(seed)
    if kind == "classical":
        if degrees is not None and degrees.is_constant() != 1:
            raise InstanceError("classical instances need the all-ones degree matrix")
        while True:
            mats = rng.integers(0, p, size=(k, m, n))
            if (mats != 0).any(axis=0).all():
                break
        pm = classical_matrix(mats, p)
        return MinRankInstance(
            "classical", m, n, r, k, p, pm, seed, True, tuple(map(lambda a: a.tolist(), mats))
        )
    if kind != "generalized":
        raise InstanceError(f"unknown kind {kind!r}")
    if degrees is None:
        degrees = DegreeMatrix.constant(m, n, 1)
    if (degrees.m, degrees.n) != (m, n):
        raise InstanceError(f"degree matrix is {degrees.m}x{degrees.n}, expected {m}x{n}")
    entries = tuple(
        tuple(_random_entry(rng, k, degrees[i, j], p, homogeneous) for j in range(n)) for i in range(m)
    )
    return MinRankInstance("generalized", m, n, r, k, p, PolyMatrix(entries, degrees), seed, homogeneous)


# minors ---------------------------------------------------------------


def minor_determinant(sub: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Division-free determinant by dynamic programming over column subsets."""
    s = len(sub)
    if any(len(row) != s for row in sub):
        raise InstanceError("determinant of a non-square matrix")
    return _all_column_minors(sub, s)[(1 << s) - 1]


def _all_column_minors(rows: Sequence[Sequence[Polynomial]], size: int) -> dict[int, Polynomial]:
    """Map column mask -> determinant of ``rows[:size]`` restricted to that mask.

    ``dp[mask]`` holds the signed sum over assignments of the first
    popcount(mask) rows to the columns in ``mask``.
    """
    n = len(rows[0])
    f0 = rows[0][0]
    dp: dict[int, Polynomial] = {0: Polynomial.constant(1, f0.nvars, f0.p)}
    for t in range(size):
        nxt: dict[int, Polynomial] = {}
        row = rows[t]
        for mask, val in dp.items():
            if val.is_zero():
                continue
            for j in range(n):
                bit = 1 << j
                if mask & bit:
                    continue
                term = val * row[j]
                if bin(mask >> (j + 1)).count("1") % 2:
                    term = -term
                new = mask | bit
                nxt[new] = nxt[new] + term if new in nxt else term
        dp = nxt
    zero = Polynomial.zero(f0.nvars, f0.p)
    return {mask: dp.get(mask, zero) for mask in _masks(n, size)}


def _masks(n: int, size: int):
    for cols in combinations(range(n), size):
        yield sum(1 << j for j in cols)


def minors(M: PolyMatrix, size: int) -> MinorsSystem:
    """All size x size minors, ordered lexicographically by (row set, column set)."""
    if not 1 <= size <= min(M.m, M.n):
        raise InstanceError(f"minor size {size} outside 1..{min(M.m, M.n)}")
    gens, idx = [], []
    for rows in combinations(range(M.m), size):
        table = _all_column_minors([M.entries[i] for i in rows], size)
        for cols in combinations(range(M.n), size):
            gens.append(table[sum(1 << j for j in cols)])
            idx.append((rows, cols))
    assert len(gens) == comb(M.m, size) * comb(M.n, size)
    return MinorsSystem(tuple(gens), tuple(idx), M.m, M.n, size, M.nvars, M.p)


def expected_minor_degree(D: DegreeMatrix, rows: Sequence[int], cols: Sequence[int]) -> int:
    return sum(D.row_offsets[i] for i in rows) + sum(D.col_offsets[j] for j in cols)


# homogenization -------------------------------------------------------


def homogenize_matrix(M: PolyMatrix) -> PolyMatrix:
    """Homogenize entry (i, j) to degree d[i][j] in one extra variable."""
    entries = tuple(
        tuple(f.homogenize(M.degrees[i, j]) for j, f in enumerate(row)) for i, row in enumerate(M.entries)
    )
    return PolyMatrix(entries, M.degrees)


def homogenization_mismatch(M: PolyMatrix, r: int) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """First (row set, column set) whose minor does not commute with homogenization.

    The homogenization of a minor ``f`` is ``f`` padded up to its own degree.
    When the top-degree parts cancel, ``f`` has lower degree than the minor
    of the homogenized matrix and the two differ.
    """
    affine = minors(M, r + 1)
    homog = minors(homogenize_matrix(M), r + 1)
    for f, g, ij in zip(affine.generators, homog.generators, affine.index_sets):
        lhs = f.homogenize() if f else f.extend_ambient()
        if lhs != g:
            return ij
    return None


def check_homogenization_commutes(M: PolyMatrix, r: int) -> bool:
    return homogenization_mismatch(M, r) is None
