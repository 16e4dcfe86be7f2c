"""Degrevlex Groebner bases with degree instrumentation.

Two engines are provided.  :func:`buchberger` is a textbook Buchberger
algorithm with the normal selection strategy and the Gebauer-Moeller
criteria; it serves as the correctness oracle.  :func:`solving_degree`
steps through Macaulay matrices degree by degree and reports the first
degree at which the leading terms collected so far generate the full
leading-term ideal.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .field import inv_mod
from .multipoly import (
    Monomial,
    Polynomial,
    degrevlex_key,
    divides,
    monomial_div,
    monomial_lcm,
    monomial_mul,
    monomials_of_degree,
)


class EngineAbort(RuntimeError):
    """A computation exceeded its degree cap."""

    def __init__(self, message: str, degree: int, cap: int):
        super().__init__(message)
        self.degree = degree
        self.cap = cap


class NotHomogeneousError(ValueError):
    pass


@dataclass
class GroebnerBasis:
    generators: list[Polynomial]
    max_degree_seen: int
    ideal_is_unit: bool
    order: str = "degrevlex"
    pairs_reduced: int = 0
    zero_reductions: int = 0

    def leading_monomials(self) -> list[Monomial]:
        return [g.leading_monomial() for g in self.generators]

    @property
    def max_degree(self) -> int:
        return max((g.degree for g in self.generators), default=-1)

    def __len__(self) -> int:
        return len(self.generators)


# reduction ------------------------------------------------------------


def _heap_key(m: Monomial) -> tuple:
    # min-heap order equal to descending degrevlex
    return (-sum(m), tuple(reversed(m)))


class _Reducer:
    """Ordered list of monic reducers with a lookup cache for divisor search."""

    def __init__(self, p: int):
        self.p = p
        self.items: list[tuple[Monomial, dict[Monomial, int]]] = []
        self._cache: dict[Monomial, int] = {}

    def set(self, items):
        self.items = list(items)
        self._cache = {}

    def find(self, m: Monomial) -> int:
        hit = self._cache.get(m)
        if hit is None:
            hit = -1
            for idx, (lm, _) in enumerate(self.items):
                if divides(lm, m):
                    hit = idx
                    break
            self._cache[m] = hit
        return hit

    def normal_form(self, f: dict[Monomial, int], full: bool = True) -> dict[Monomial, int]:
        p = self.p
        f = dict(f)
        heap = [(_heap_key(m), m) for m in f]
        heapq.heapify(heap)
        rem: dict[Monomial, int] = {}
        while heap:
            _, m = heapq.heappop(heap)
            c = f.pop(m, 0)
            if not c:
                continue
            idx = self.find(m)
            if idx < 0:
                rem[m] = c
                if not full:
                    rem.update((mm, cc) for mm, cc in f.items() if cc)
                    return rem
                continue
            lm, g = self.items[idx]
            q = monomial_div(m, lm)
            for gm, gc in g.items():
                if gm == lm:
                    continue
                t = tuple(x + y for x, y in zip(gm, q))
                old = f.get(t)
                if old is None:
                    heapq.heappush(heap, (_heap_key(t), t))
                    f[t] = -c * gc % p
                else:
                    f[t] = (old - c * gc) % p
        return rem


def _lead(f: dict[Monomial, int]) -> Monomial:
    return max(f, key=degrevlex_key)


def _monic(f: dict[Monomial, int], p: int) -> tuple[Monomial, dict[Monomial, int]]:
    lm = _lead(f)
    inv = inv_mod(f[lm], p)
    return lm, {m: c * inv % p for m, c in f.items()}


def _to_poly(f: dict[Monomial, int], nvars: int, p: int) -> Polynomial:
    return Polynomial.from_dict(f, nvars, p)


def reduce(f: Polynomial, G: Sequence[Polynomial]) -> Polynomial:
    """Full normal form of ``f`` modulo ``G``, trying reducers in list order."""
    red = _Reducer(f.p)
    red.set(_monic(g.to_dict(), f.p) for g in G if g)
    return _to_poly(red.normal_form(f.to_dict()), f.nvars, f.p)


# Buchberger -----------------------------------------------------------


def _spoly(a, b, p):
    (la, fa), (lb, fb) = a, b
    lcm = monomial_lcm(la, lb)
    qa, qb = monomial_div(lcm, la), monomial_div(lcm, lb)
    out: dict[Monomial, int] = {}
    for m, c in fa.items():
        if m != la:
            t = monomial_mul(m, qa)
            out[t] = (out.get(t, 0) + c) % p
    for m, c in fb.items():
        if m != lb:
            t = monomial_mul(m, qb)
            out[t] = (out.get(t, 0) - c) % p
    return {m: c for m, c in out.items() if c}


def _coprime(a: Monomial, b: Monomial) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def buchberger(F: Sequence[Polynomial], cap: int | None = None) -> GroebnerBasis:
    """Reduced degrevlex Groebner basis of the ideal generated by ``F``.

    ``max_degree_seen`` is the largest degree among the inputs and all
    S-polynomials formed; reduction never raises the degree in a
    degree-compatible order, so intermediate results are covered.
    """
    F = [f for f in F if f]
    if not F:
        raise ValueError("buchberger needs at least one nonzero polynomial")
    nvars, p = F[0].nvars, F[0].p
    polys: list[tuple[Monomial, dict[Monomial, int]]] = []
    G: list[int] = []
    pairs: dict[tuple[int, int], Monomial] = {}
    red = _Reducer(p)
    max_deg = max(f.degree for f in F)
    stats = {"reduced": 0, "zero": 0}

    def update(h: int) -> None:
        lh = polys[h][0]
        # Gebauer-Moeller: new pairs (g, h)
        cand = [(g, monomial_lcm(polys[g][0], lh)) for g in G]
        keep = []
        for idx, (g, lcm) in enumerate(cand):
            if _coprime(polys[g][0], lh):
                keep.append((g, lcm))
                continue
            dominated = any(
                divides(other, lcm) for _, other in cand[idx + 1 :]
            ) or any(divides(other, lcm) for _, other in keep)
            if not dominated:
                keep.append((g, lcm))
        new = {(g, h): lcm for g, lcm in keep if not _coprime(polys[g][0], lh)}
        # drop old pairs whose lcm is a proper multiple of lh through both sides
        for (a, b), lcm in list(pairs.items()):
            if (
                divides(lh, lcm)
                and monomial_lcm(polys[a][0], lh) != lcm
                and monomial_lcm(polys[b][0], lh) != lcm
            ):
                del pairs[(a, b)]
        pairs.update(new)
        G[:] = [g for g in G if not divides(lh, polys[g][0])] + [h]
        red.set(polys[g] for g in G)

    initial = [f.to_dict() for f in F]
    initial.sort(key=lambda f: degrevlex_key(_lead(f)))
    for f in initial:
        h = red.normal_form(f)
        if h:
            polys.append(_monic(h, p))
            update(len(polys) - 1)

    while pairs:
        (a, b), lcm = min(pairs.items(), key=lambda kv: (sum(kv[1]), degrevlex_key(kv[1]), kv[0]))
        del pairs[(a, b)]
        deg = sum(lcm)
        if cap is not None and deg > cap:
            raise EngineAbort(f"S-polynomial degree {deg} exceeds cap {cap}", deg, cap)
        max_deg = max(max_deg, deg)
        s = _spoly(polys[a], polys[b], p)
        stats["reduced"] += 1
        h = red.normal_form(s) if s else s
        if not h:
            stats["zero"] += 1
            continue
        polys.append(_monic(h, p))
        update(len(polys) - 1)

    # minimal then interreduced
    basis = [polys[g] for g in G]
    basis.sort(key=lambda t: degrevlex_key(t[0]))
    minimal = []
    for lm, f in basis:
        if not any(divides(lm2, lm) for lm2, _ in minimal):
            minimal.append((lm, f))
    reduced = []
    for i, (lm, f) in enumerate(minimal):
        red.set(x for j, x in enumerate(minimal) if j != i)
        tail = {m: c for m, c in f.items() if m != lm}
        out = red.normal_form(tail)
        out[lm] = 1
        reduced.append(_to_poly(out, nvars, p))
    unit = any(g.degree == 0 for g in reduced)
    return GroebnerBasis(reduced, max_deg, unit, pairs_reduced=stats["reduced"], zero_reductions=stats["zero"])


def is_groebner_basis(G: Sequence[Polynomial]) -> bool:
    """Buchberger criterion: every S-polynomial reduces to zero."""
    G = [g for g in G if g]
    if not G:
        return True
    p = G[0].p
    items = [_monic(g.to_dict(), p) for g in G]
    red = _Reducer(p)
    red.set(items)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            s = _spoly(items[i], items[j], p)
            if s and red.normal_form(s):
                return False
    return True


def is_zero_dimensional(G: GroebnerBasis | Sequence[Polynomial]) -> bool:
    """True iff every variable has a pure power among the leading monomials."""
    gens = G.generators if isinstance(G, GroebnerBasis) else list(G)
    if not gens:
        return False
    nvars = gens[0].nvars
    seen = set()
    for g in gens:
        lm = g.leading_monomial()
        support = [i for i, e in enumerate(lm) if e]
        if len(support) == 1:
            seen.add(support[0])
        elif not support:
            return True
    return len(seen) == nvars


def krull_dimension(G: GroebnerBasis | Sequence[Polynomial]) -> int:
    """Krull dimension of R/I read off the leading monomials; -1 for the unit ideal.

    It is the size of the largest set of variables containing the support
    of no leading monomial.
    """
    gens = G.generators if isinstance(G, GroebnerBasis) else list(G)
    nvars = gens[0].nvars
    supports = []
    for g in gens:
        mask = sum(1 << i for i, e in enumerate(g.leading_monomial()) if e)
        if mask == 0:
            return -1
        supports.append(mask)
    best = 0
    for subset in range(1 << nvars):
        size = bin(subset).count("1")
        if size > best and not any(s & subset == s for s in supports):
            best = size
    return best


# Macaulay stepper -----------------------------------------------------


@dataclass
class DegreeStats:
    degree: int
    rows: int
    columns: int
    rank: int
    new_leading: list[Monomial] = field(default_factory=list)


@dataclass
class MacaulayState:
    nvars: int
    p: int
    leading: list[Monomial] = field(default_factory=list)
    basis: list[Polynomial] = field(default_factory=list)


def _check_homogeneous(F: Sequence[Polynomial]) -> None:
    for i, f in enumerate(F):
        if not f.is_homogeneous():
            raise NotHomogeneousError(f"generator {i} is not homogeneous")


def macaulay_matrix(F: Sequence[Polynomial], D: int) -> tuple[np.ndarray, list[Monomial]]:
    """Rows m*f for every f in F and monomial m with deg(m*f) = D."""
    f0 = F[0]
    cols = monomials_of_degree(f0.nvars, D)
    col_of = {m: i for i, m in enumerate(cols)}
    rows = []
    for f in F:
        if not f or f.degree > D:
            continue
        for mult in monomials_of_degree(f0.nvars, D - f.degree):
            row = np.zeros(len(cols), dtype=np.int64)
            for c, m in f.terms:
                row[col_of[monomial_mul(m, mult)]] = c
            rows.append(row)
    if not rows:
        return np.zeros((0, len(cols)), dtype=np.int64), cols
    return np.vstack(rows), cols


def macaulay_step(F: Sequence[Polynomial], D: int, state: MacaulayState | None = None) -> DegreeStats:
    """Row-reduce the degree-D Macaulay matrix and record new leading monomials.

    A leading monomial is new when no leading monomial recorded in ``state``
    at a lower degree divides it; such rows of the reduced echelon form are
    exactly the degree-D elements of the reduced Groebner basis.
    """
    F = [f for f in F if f]
    _check_homogeneous(F)
    if not F or D < min(f.degree for f in F):
        return DegreeStats(D, 0, 0, 0)
    nvars, p = F[0].nvars, F[0].p
    if state is None:
        state = MacaulayState(nvars, p)
    mat, cols = macaulay_matrix(F, D)
    nrows = mat.shape[0]
    rank, pivots = _kernels.rref(mat, p) if nrows else (0, np.zeros(0, dtype=np.int64))
    new = []
    for r, c in enumerate(pivots.tolist()):
        lm = cols[c]
        if any(divides(old, lm) for old in state.leading):
            continue
        new.append(lm)
        row = mat[r]
        nz = np.flatnonzero(row)
        state.basis.append(Polynomial(((int(row[j]), cols[j]) for j in nz), nvars, p, _trusted=True))
    state.leading.extend(new)
    return DegreeStats(D, nrows, len(cols), rank, new)


@dataclass
class SolvingDegreeReport:
    measured_solvdeg: int
    method: str
    per_degree: list[DegreeStats]
    bound: int | None
    bound_respected: bool | None
    buchberger_max_degree: int
    gb_size: int
    gb_max_degree: int
    oracle_agrees: bool
    stable: bool
    zero_dimensional: bool
    ideal_is_unit: bool
    ms: float = 0.0
    basis: list[Polynomial] = field(default_factory=list, repr=False)

    def leading_monomials(self) -> set[Monomial]:
        return {m for s in self.per_degree for m in s.new_leading}

    def to_dict(self) -> dict:
        out = asdict(self)
        out.pop("basis")
        out["per_degree"] = [
            {
                "degree": s.degree,
                "rows": s.rows,
                "columns": s.columns,
                "rank": s.rank,
                "new_leading": len(s.new_leading),
            }
            for s in self.per_degree
        ]
        return out


def solving_degree(
    F: Sequence[Polynomial],
    bound: int | None = None,
    cap: int | None = None,
    oracle: GroebnerBasis | None = None,
) -> SolvingDegreeReport:
    """Measure the solving degree of a homogeneous system.

    The stepper runs until its leading monomials coincide with those of the
    reduced basis from :func:`buchberger`, then continues one more degree to
    confirm nothing new appears.  ``cap`` defaults to ``bound + 3``.
    """
    t0 = time.perf_counter()
    F = [f for f in F if f]
    if not F:
        raise ValueError("empty system")
    _check_homogeneous(F)
    if cap is None and bound is not None:
        cap = bound + 3
    gb = oracle if oracle is not None else buchberger(F, cap=cap)
    target = set(gb.leading_monomials())
    state = MacaulayState(F[0].nvars, F[0].p)
    per_degree: list[DegreeStats] = []
    D = min(f.degree for f in F)
    while set(state.leading) != target:
        if cap is not None and D > cap:
            raise EngineAbort(f"Macaulay degree {D} exceeds cap {cap}", D, cap)
        if len(state.leading) and not target.issuperset(state.leading):
            break  # stepper found a leading monomial the oracle lacks
        per_degree.append(macaulay_step(F, D, state))
        D += 1
    measured = per_degree[-1].degree if per_degree else D
    agrees = set(state.leading) == target and _same_basis(state.basis, gb.generators)
    extra = macaulay_step(F, D, state) if not gb.ideal_is_unit else DegreeStats(D, 0, 0, 0)
    stable = not extra.new_leading
    return SolvingDegreeReport(
        measured_solvdeg=measured,
        method="macaulay-stepper",
        per_degree=per_degree,
        bound=bound,
        bound_respected=None if bound is None else measured <= bound,
        buchberger_max_degree=gb.max_degree_seen,
        gb_size=len(gb),
        gb_max_degree=gb.max_degree,
        oracle_agrees=agrees,
        stable=stable,
        zero_dimensional=is_zero_dimensional(gb),
        ideal_is_unit=gb.ideal_is_unit,
        ms=(time.perf_counter() - t0) * 1000.0,
        basis=list(state.basis),
    )


def _same_basis(a: Sequence[Polynomial], b: Sequence[Polynomial]) -> bool:
    key = lambda g: degrevlex_key(g.leading_monomial())  # noqa: E731
    return sorted(a, key=key) == sorted(b, key=key)
