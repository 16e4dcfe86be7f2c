"""JSON instance files and experiment CSV rows."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .multipoly import PolynomialError, parse_polynomial
from .polymatrix import (
    InstanceError,
    MinRankInstance,
    PolyMatrix,
    classical_matrix,
    validate_degree_matrix,
)

FORMAT_VERSION = 1

CSV_COLUMNS = ("m", "n", "r", "k", "p", "seed", "kind", "class", "solvdeg", "bound", "respected", "gb_size", "ms", "resamples")


class FormatError(ValueError):
    """Malformed instance or config file."""


def instance_to_dict(inst: MinRankInstance) -> dict:
    out = {
        "format": FORMAT_VERSION,
        "kind": inst.kind,
        "m": inst.m,
        "n": inst.n,
        "r": inst.r,
        "k": inst.k,
        "p": inst.p,
        "seed": inst.seed,
        "homogeneous": inst.homogeneous,
        "degree_matrix": inst.degrees.to_list(),
    }
    if inst.kind == "classical":
        out["matrices"] = [list(map(list, M)) for M in inst.scalar_matrices]
    else:
        out["entries"] = [[f.to_text() for f in row] for row in inst.matrix.entries]
    return out


def instance_from_dict(data: dict) -> MinRankInstance:
    try:
        if data.get("format") != FORMAT_VERSION:
            raise FormatError(f"unsupported format {data.get('format')!r}, expected {FORMAT_VERSION}")
        kind = data["kind"]
        m, n, r, k, p = (int(data[key]) for key in ("m", "n", "r", "k", "p"))
        seed = data.get("seed")
        if kind == "classical":
            mats = np.asarray(data["matrices"], dtype=np.int64)
            if mats.shape != (k, m, n):
                raise FormatError(f"matrices have shape {mats.shape}, expected {(k, m, n)}")
            matrix = classical_matrix(mats, p)
            inst = MinRankInstance(
                kind, m, n, r, k, p, matrix, seed, True, tuple(M.tolist() for M in mats % p)
            )
        elif kind == "generalized":
            D = validate_degree_matrix(data["degree_matrix"])
            grid = data["entries"]
            if len(grid) != m or any(len(row) != n for row in grid):
                raise FormatError(f"entry grid is not {m}x{n}")
            rows = [[parse_polynomial(t, k, p) for t in grid[i]] for i in D.row_order]
            matrix = PolyMatrix(tuple(map(tuple, rows)), D)
            matrix.validate()
            inst = MinRankInstance(kind, m, n, r, k, p, matrix, seed, bool(data.get("homogeneous", matrix.is_homogeneous())))
        else:
            raise FormatError(f"unknown kind {kind!r}")
    except KeyError as exc:
        raise FormatError(f"missing field {exc.args[0]!r}") from None
    except (PolynomialError, InstanceError, TypeError) as exc:
        raise FormatError(str(exc)) from exc
    return inst


def dumps_instance(inst: MinRankInstance) -> str:
    return json.dumps(instance_to_dict(inst), indent=2) + "\n"


def save_instance(inst: MinRankInstance, path: str | Path) -> None:
    Path(path).write_text(dumps_instance(inst))


def load_instance(path: str | Path) -> MinRankInstance:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    return instance_from_dict(data)
