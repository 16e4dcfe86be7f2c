"""Closed-form solving-degree bounds for the minors modeling.

All indices below are 0-based; ``D[i, j]`` is the degree of entry (i, j)
of an m x n matrix with m <= n, rows sorted by first-column degree.
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass

import numpy as np

from .polymatrix import DegreeMatrix, InstanceError, MinRankInstance, check_params

MAX_DIM = 64
MAX_DEGREE = 2**20


class ProblemClass(str, enum.Enum):
    UNDER_DEFINED = "under-defined"
    WELL_DEFINED = "well-defined"
    OVER_DETERMINED = "over-determined"


def codim(m: int, n: int, r: int) -> int:
    """Codimension (m - r)(n - r) of the rank <= r locus."""
    return (m - r) * (n - r)


def classify(m: int, n: int, r: int, k: int) -> ProblemClass:
    check_params(min(m, n), max(m, n), r, k)
    c = codim(m, n, r)
    if k > c:
        return ProblemClass.UNDER_DEFINED
    if k == c:
        return ProblemClass.WELL_DEFINED
    return ProblemClass.OVER_DETERMINED


def bound_square(n: int, r: int) -> int:
    return n * r - r * r + 1


def bound_linear(m: int, r: int) -> int:
    return m * r - r * r + 1


def bound_degd(m: int, n: int, r: int, d: int) -> int:
    return (m - r) * (n * d - n + r) + 1


def _check_shape(m: int, n: int, r: int, D: DegreeMatrix) -> None:
    if (D.m, D.n) != (m, n):
        raise InstanceError(f"degree matrix is {D.m}x{D.n}, expected {m}x{n}")
    check_params(m, n, r, 1)
    if n > MAX_DIM:
        raise InstanceError(f"dimensions capped at {MAX_DIM}")
    if max(max(row) for row in D.entries) > MAX_DEGREE:
        raise InstanceError(f"entry degrees capped at {MAX_DEGREE}")


def bound_main_batch(d: np.ndarray, r: int) -> np.ndarray:
    """Main bound for a stack of degree grids of shape (..., m, n)."""
    d = np.asarray(d, dtype=np.int64)
    m, n = d.shape[-2:]
    diag = np.trace(d[..., :r, :r], axis1=-2, axis2=-1)
    block = d[..., r:, r:].sum(axis=(-2, -1))
    return (m - r) * diag + block - codim(m, n, r) + 1


def a_invariant_batch(d: np.ndarray, r: int) -> np.ndarray:
    d = np.asarray(d, dtype=np.int64)
    m = d.shape[-2]
    diag = np.trace(d[..., :, :m], axis1=-2, axis2=-1)
    return -r * diag - d[..., :r, m:].sum(axis=(-2, -1))


def regularity_batch(d: np.ndarray, r: int) -> np.ndarray:
    """reg(I) = reg(S) + 1 with reg(S) = a(T) - a(k[X]) - (m-r)(n-r) and a(k[X]) = -sum d."""
    d = np.asarray(d, dtype=np.int64)
    m, n = d.shape[-2:]
    return a_invariant_batch(d, r) + d.sum(axis=(-2, -1)) - codim(m, n, r) + 1


def bound_main(m: int, n: int, r: int, D: DegreeMatrix) -> int:
    """(m-r) * sum_{i<r} d_ii + sum_{i>=r, j>=r} d_ij - (m-r)(n-r) + 1."""
    _check_shape(m, n, r, D)
    return int(bound_main_batch(D.entries, r))


def krull_dim(m: int, n: int, r: int, k: int) -> int | None:
    """k - (m-r)(n-r) for generic instances; None when k is below the codimension."""
    c = codim(m, n, r)
    return k - c if k >= c else None


def a_invariant(m: int, n: int, r: int, D: DegreeMatrix) -> int:
    """a-invariant of the generic determinantal ring with entry degrees D."""
    _check_shape(m, n, r, D)
    return int(a_invariant_batch(D.entries, r))


def regularity(m: int, n: int, r: int, D: DegreeMatrix) -> int:
    """Castelnuovo-Mumford regularity of the ideal of (r+1)-minors."""
    _check_shape(m, n, r, D)
    return int(regularity_batch(D.entries, r))


@dataclass
class BoundReport:
    m: int
    n: int
    r: int
    k: int
    degree_matrix: list[list[int]]
    classification: ProblemClass
    applicable: bool
    bound_main: int
    bound_square: int | None
    bound_linear: int | None
    bound_degd: int | None
    krull_dim: int | None
    a_invariant: int
    regularity: int
    note: str = ""

    @property
    def bound(self) -> int:
        return self.bound_main

    def to_dict(self) -> dict:
        out = asdict(self)
        out["classification"] = self.classification.value
        return out

    def to_table(self) -> str:
        rows = [
            ("m, n, r, k", f"{self.m}, {self.n}, {self.r}, {self.k}"),
            ("degrees", str(self.degree_matrix)),
            ("class", self.classification.value),
            ("applicable", str(self.applicable)),
            ("bound (general)", str(self.bound_main)),
            ("bound (square)", _opt(self.bound_square)),
            ("bound (linear)", _opt(self.bound_linear)),
            ("bound (constant degree)", _opt(self.bound_degd)),
            ("krull dim", _opt(self.krull_dim)),
            ("a-invariant", str(self.a_invariant)),
            ("regularity", str(self.regularity)),
        ]
        width = max(len(k) for k, _ in rows)
        lines = [f"{k:<{width}}  {v}" for k, v in rows]
        if self.note:
            lines.append(self.note)
        return "\n".join(lines)


def _opt(v) -> str:
    return "-" if v is None else str(v)


def bound_report_for(m: int, n: int, r: int, k: int, D: DegreeMatrix, classical: bool = False) -> BoundReport:
    cls = classify(m, n, r, k)
    applicable = cls is not ProblemClass.OVER_DETERMINED
    d = D.is_constant()
    note = ""
    if not applicable:
        note = "over-determined: bounds are reported but not guaranteed"
    return BoundReport(
        m=m,
        n=n,
        r=r,
        k=k,
        degree_matrix=D.to_list(),
        classification=cls,
        applicable=applicable,
        bound_main=bound_main(m, n, r, D),
        bound_square=bound_square(n, r) if classical and m == n and d == 1 else None,
        bound_linear=bound_linear(m, r) if d == 1 else None,
        bound_degd=bound_degd(m, n, r, d) if d is not None else None,
        krull_dim=krull_dim(m, n, r, k),
        a_invariant=a_invariant(m, n, r, D),
        regularity=regularity(m, n, r, D),
        note=note,
    )


def bound_report(instance: MinRankInstance) -> BoundReport:
    return bound_report_for(
        instance.m, instance.n, instance.r, instance.k, instance.degrees, instance.kind == "classical"
    )
