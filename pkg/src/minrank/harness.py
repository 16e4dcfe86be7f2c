"""Solving runs, the brute-force oracle and batch experiments."""

from __future__ import annotations

import csv
import itertools
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import _kernels
from .bounds import BoundReport, bound_report, bound_report_for
from .gbengine import EngineAbort, SolvingDegreeReport, buchberger, krull_dimension, solving_degree
from .io import CSV_COLUMNS, FormatError
from .multipoly import Polynomial
from .polymatrix import (
    DegreeMatrix,
    MinRankInstance,
    degree_matrix_from_offsets,
    homogenization_mismatch,
    homogenize_matrix,
    minors,
    random_instance,
    validate_degree_matrix,
)

log = logging.getLogger(__name__)

MAX_RESAMPLES = 5
RESAMPLE_STRIDE = 1_000_003
BRUTEFORCE_LIMIT = 10**7


class NotApplicableError(ValueError):
    """Over-determined instance solved without the override flag."""


class HomogenizationError(RuntimeError):
    def __init__(self, rows, cols):
        super().__init__(
            f"homogenization does not commute for the minor with rows {[i + 1 for i in rows]} "
            f"and columns {[j + 1 for j in cols]}"
        )
        self.rows, self.cols = rows, cols


@dataclass
class SolveResult:
    instance: MinRankInstance
    bounds: BoundReport
    report: SolvingDegreeReport
    system_size: int
    homogenized: bool
    expected_dim: int | None
    measured_dim: int

    @property
    def degenerate(self) -> bool:
        return self.expected_dim is not None and self.measured_dim != self.expected_dim

    def to_dict(self) -> dict:
        return {
            "bounds": self.bounds.to_dict(),
            "solving_degree": self.report.to_dict(),
            "system_size": self.system_size,
            "homogenized": self.homogenized,
            "expected_krull_dim": self.expected_dim,
            "measured_krull_dim": self.measured_dim,
            "degenerate": self.degenerate,
        }


def minors_system(inst: MinRankInstance) -> tuple[list[Polynomial], bool]:
    """Homogeneous (r+1)-minors of the instance; affine matrices are homogenized first."""
    M = inst.matrix
    if M.is_homogeneous():
        return list(minors(M, inst.r + 1).generators), False
    bad = homogenization_mismatch(M, inst.r)
    if bad is not None:
        raise HomogenizationError(*bad)
    return list(minors(homogenize_matrix(M), inst.r + 1).generators), True


def solve_instance(inst: MinRankInstance, cap: int | None = None, override: bool = False) -> SolveResult:
    bounds = bound_report(inst)
    if not bounds.applicable and not override:
        raise NotApplicableError(
            f"instance is {bounds.classification.value}; pass the override flag to solve anyway"
        )
    F, homogenized = minors_system(inst)
    if cap is None:
        cap = bounds.bound + 3
    gb = buchberger(F, cap=cap)
    rep = solving_degree(F, bound=bounds.bound, cap=cap, oracle=gb)
    expected = bounds.krull_dim
    if expected is not None and homogenized:
        expected += 1
    return SolveResult(inst, bounds, rep, len(F), homogenized, expected, krull_dimension(gb))


# brute force ----------------------------------------------------------


@dataclass
class BruteForceResult:
    points: int
    solutions: list[tuple[int, ...]]
    minor_zeros: list[tuple[int, ...]]

    @property
    def agrees(self) -> bool:
        return self.solutions == self.minor_zeros


def eval_many(f: Polynomial, pts: np.ndarray, powers: np.ndarray) -> np.ndarray:
    """Evaluate ``f`` at each row of ``pts``; ``powers[v, e]`` is pts[:, v]**e mod p."""
    p = f.p
    out = np.zeros(pts.shape[0], dtype=np.int64)
    for c, m in f.terms:
        t = np.full(pts.shape[0], c, dtype=np.int64)
        for v, e in enumerate(m):
            if e:
                t = t * powers[v, e] % p
        out = (out + t) % p
    return out


def _power_table(pts: np.ndarray, max_exp: int, p: int) -> np.ndarray:
    nvars = pts.shape[1]
    table = np.ones((nvars, max_exp + 1, pts.shape[0]), dtype=np.int64)
    for e in range(1, max_exp + 1):
        table[:, e] = table[:, e - 1] * pts.T % p
    return table


def bruteforce(inst: MinRankInstance, chunk: int = 1 << 15) -> BruteForceResult:
    """Enumerate F_p^k; compare the rank <= r locus with the common zeros of the minors."""
    p, k = inst.p, inst.k
    total = p**k
    if total > BRUTEFORCE_LIMIT:
        raise ValueError(f"search space p^k = {total} exceeds the limit {BRUTEFORCE_LIMIT}")
    M = inst.matrix
    gens = minors(M, inst.r + 1).generators
    max_exp = max(max((max(mon, default=0) for _, mon in f.terms), default=0) for f in gens)
    max_exp = max(max_exp, max(max(f.degree for f in row) for row in M.entries), 1)
    sols, zeros = [], []
    all_points = itertools.product(range(p), repeat=k)
    while True:
        block = list(itertools.islice(all_points, chunk))
        if not block:
            break
        pts = np.asarray(block, dtype=np.int64)
        powers = _power_table(pts, max_exp, p)
        vals = np.empty((len(block), M.m, M.n), dtype=np.int64)
        for i, row in enumerate(M.entries):
            for j, f in enumerate(row):
                vals[:, i, j] = eval_many(f, pts, powers)
        low_rank = _kernels.batch_rank(vals, p) <= inst.r
        vanish = np.ones(len(block), dtype=bool)
        for g in gens:
            vanish &= eval_many(g, pts, powers) == 0
        sols.extend(map(tuple, pts[low_rank].tolist()))
        zeros.extend(map(tuple, pts[vanish].tolist()))
    return BruteForceResult(total, sols, zeros)


# experiments ----------------------------------------------------------


@dataclass
class Cell:
    m: int
    n: int
    r: int
    k: int
    p: int = 101
    kind: str = "classical"
    homogeneous: bool = True
    degree_const: int | None = None
    degree_grid: list[list[int]] | None = None
    offsets: dict | None = None

    def degrees(self) -> DegreeMatrix:
        if self.degree_grid is not None:
            return validate_degree_matrix(self.degree_grid)
        if self.offsets is not None:
            return degree_matrix_from_offsets(self.offsets["e"], self.offsets["f"])
        return DegreeMatrix.constant(self.m, self.n, self.degree_const or 1)


@dataclass
class ExperimentConfig:
    cells: list[Cell]
    trials: int = 1
    base_seed: int = 0
    cap: int | None = None
    override: bool = False
    out_csv: str | None = None
    out_json: str | None = None

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        try:
            cells = [Cell(**c) for c in data.get("cells", [])]
            kw = {k: v for k, v in data.items() if k != "cells"}
            cfg = cls(cells=cells, **kw)
        except TypeError as exc:
            raise FormatError(f"bad experiment config: {exc}") from exc
        if cfg.trials < 1:
            raise FormatError("trials must be >= 1")
        for c in cfg.cells:
            if not c.r < c.m <= c.n:
                raise FormatError(f"cell {c} violates r < m <= n")
        return cfg

    @classmethod
    def load(cls, path: str | Path) -> ExperimentConfig:
        try:
            return cls.from_dict(json.loads(Path(path).read_text()))
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc}") from exc


@dataclass
class ExperimentRow:
    m: int
    n: int
    r: int
    k: int
    p: int
    seed: int
    kind: str
    cls: str
    solvdeg: int | None
    bound: int
    respected: bool | None
    gb_size: int | None
    ms: float
    resamples: int
    applicable: bool = True
    krull_dim: int | None = None
    buchberger_max_degree: int | None = None
    oracle_agrees: bool | None = None
    error: str | None = None
    seeds_tried: list[int] = field(default_factory=list)

    def csv_row(self) -> list:
        respected = "abort" if self.error else self.respected
        vals = [self.m, self.n, self.r, self.k, self.p, self.seed, self.kind, self.cls,
                "" if self.solvdeg is None else self.solvdeg, self.bound, respected,
                "" if self.gb_size is None else self.gb_size, f"{self.ms:.1f}", self.resamples]
        return vals

    def to_dict(self) -> dict:
        out = asdict(self)
        out["class"] = out.pop("cls")
        return out

    @property
    def violation(self) -> bool:
        return self.applicable and self.respected is False


def solve_with_resampling(
    cell: Cell, seed: int, cap: int | None = None, override: bool = False
) -> tuple[SolveResult | None, list[int], str | None]:
    """Draw and solve, redrawing up to MAX_RESAMPLES times when the draw looks non-generic.

    Non-generic means a Krull dimension other than k - (m-r)(n-r) (plus one
    after homogenization) or a minor whose homogenization does not commute.
    Returns the last result, the seeds tried and an error message.
    """
    D = cell.degrees()
    tried: list[int] = []
    result, error = None, None
    for attempt in range(MAX_RESAMPLES + 1):
        s = seed + attempt * RESAMPLE_STRIDE
        tried.append(s)
        inst = random_instance(cell.kind, cell.m, cell.n, cell.r, cell.k, D, cell.p, cell.homogeneous, s)
        try:
            result, error = solve_instance(inst, cap=cap, override=override), None
        except EngineAbort as exc:
            return None, tried, f"abort: {exc}"
        except HomogenizationError as exc:
            result, error = None, f"homogenization: {exc}"
            log.info("cell %s seed %d: %s; resampling", cell, s, exc)
            continue
        if not result.degenerate or not result.bounds.applicable:
            return result, tried, None
        error = f"degenerate after {MAX_RESAMPLES} resamples"
        log.info(
            "cell %s seed %d: krull dim %d, expected %s; resampling",
            cell, s, result.measured_dim, result.expected_dim,
        )
    return result, tried, error


def run_trial(cell: Cell, seed: int, cap: int | None = None, override: bool = False) -> ExperimentRow:
    t0 = time.perf_counter()
    result, tried, error = solve_with_resampling(cell, seed, cap, override)
    ms = (time.perf_counter() - t0) * 1000.0
    if result is not None:
        bounds = result.bounds
    else:
        D = cell.degrees()
        bounds = bound_report_for(cell.m, cell.n, cell.r, cell.k, D, cell.kind == "classical")
    row = ExperimentRow(
        m=cell.m, n=cell.n, r=cell.r, k=cell.k, p=cell.p, seed=tried[-1], kind=cell.kind,
        cls=bounds.classification.value, solvdeg=None, bound=bounds.bound, respected=None,
        gb_size=None, ms=ms, resamples=len(tried) - 1, applicable=bounds.applicable,
        krull_dim=bounds.krull_dim, error=error, seeds_tried=tried,
    )
    if result is not None:
        rep = result.report
        row.solvdeg = rep.measured_solvdeg
        row.respected = rep.bound_respected
        row.gb_size = rep.gb_size
        row.buchberger_max_degree = rep.buchberger_max_degree
        row.oracle_agrees = rep.oracle_agrees
    return row


def _run_job(args):
    return run_trial(*args)


def run_experiment(cfg: ExperimentConfig, jobs: int = 1) -> list[ExperimentRow]:
    tasks = [(cell, cfg.base_seed + t, cfg.cap, cfg.override) for cell in cfg.cells for t in range(cfg.trials)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_job, tasks))
    return [_run_job(t) for t in tasks]


def summarize(cfg: ExperimentConfig, rows: Sequence[ExperimentRow]) -> dict:
    cells = []
    for idx, cell in enumerate(cfg.cells):
        chunk = rows[idx * cfg.trials : (idx + 1) * cfg.trials]
        measured = [r.solvdeg for r in chunk if r.solvdeg is not None]
        cells.append({
            "cell": asdict(cell),
            "class": chunk[0].cls if chunk else None,
            "bound": chunk[0].bound if chunk else None,
            "max_solvdeg": max(measured, default=None),
            "attains_bound": sum(1 for r in chunk if r.solvdeg == r.bound),
            "violations": sum(1 for r in chunk if r.violation),
            "aborts": sum(1 for r in chunk if r.error),
            "resamples": sum(r.resamples for r in chunk),
        })
    return {
        "rows": [r.to_dict() for r in rows],
        "cells": cells,
        "violations": sum(c["violations"] for c in cells),
    }


def write_csv(rows: Sequence[ExperimentRow], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow(r.csv_row())
