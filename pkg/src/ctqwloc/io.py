"""Edge-list, CSV, and JSON serialization with fixed 12-significant-digit reals."""

from __future__ import annotations

import csv
import json
import os
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from .graph import Graph, GraphError, build_graph

OUTDIR_ENV = "CTQWLOC_OUTDIR"


def fmt(x: float) -> str:
    """Render a real with 12 significant digits (stable across runs)."""
    x = float(x)
    if x == 0.0:
        return "0"
    return format(x, ".12g")


def resolve_output(path: str | os.PathLike) -> Path:
    """Relative output paths land under $CTQWLOC_OUTDIR when it is set."""
    p = Path(path)
    base = os.environ.get(OUTDIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def _prepare(path: str | os.PathLike) -> Path:
    p = resolve_output(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def write_edge_list(g: Graph, path, comment: str | None = None) -> Path:
    p = _prepare(path)
    lines = []
    if comment:
        lines += [f"# {line}" for line in comment.splitlines()]
    lines.append(f"N {g.n_nodes}")
    lines += [f"{u} {v}" for u, v in sorted(g.edge_labels())]
    p.write_text("\n".join(lines) + "\n")
    return p


def parse_edge_list(text: str, allow_self_edges: bool = False) -> Graph:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "N":
                raise GraphError(f"line {lineno}: expected 'N <int>' header, got {line!r}")
            n = int(parts[1])
            continue
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected '<u> <v>', got {line!r}")
        edges.append((int(parts[0]), int(parts[1])))
    if n is None:
        raise GraphError("missing 'N <int>' header")
    return build_graph(n, edges, allow_self_edges)


def read_edge_list(path, allow_self_edges: bool = False) -> Graph:
    return parse_edge_list(Path(path).read_text(), allow_self_edges)


def write_rows(path, header: Iterable[str], rows: Iterable[Iterable[Any]]) -> Path:
    p = _prepare(path)
    with open(p, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(header))
        for row in rows:
            w.writerow([fmt(x) if isinstance(x, (float, np.floating)) else x for x in row])
    return p


def write_matrix_csv(path, matrix: np.ndarray) -> Path:
    """Square node-by-node matrix; first column is the row node label."""
    m = np.asarray(matrix, dtype=float)
    n = m.shape[0]
    header = ["node"] + [str(j) for j in range(1, n + 1)]
    return write_rows(path, header, ([i + 1, *m[i]] for i in range(n)))


def read_matrix_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return np.array([[float(x) for x in r[1:]] for r in rows[1:]])


def write_vector_csv(path, values, name: str) -> Path:
    return write_rows(path, ["node", name], ([i + 1, float(v)] for i, v in enumerate(values)))


def read_table_csv(path) -> tuple[list[str], np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array([[float(x) for x in r] for r in rows[1:]])


def write_trajectory_csv(path, t_grid, probabilities: np.ndarray) -> Path:
    """``probabilities`` has shape (N, len(t_grid))."""
    n = probabilities.shape[0]
    header = ["t"] + [f"node_{i}" for i in range(1, n + 1)]
    rows = ([float(t), *map(float, probabilities[:, k])] for k, t in enumerate(t_grid))
    return write_rows(path, header, rows)


def write_curve_csv(path, curve) -> Path:
    rows = zip(map(float, curve.t_grid), map(float, curve.mean_ipr), map(float, curve.stderr))
    return write_rows(path, ["t", "mean_ipr", "stderr"], rows)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        # 12 significant digits, kept numeric in the JSON
        return float(fmt(obj))
    return obj


def write_json(path, payload: dict) -> Path:
    p = _prepare(path)
    p.write_text(json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n")
    return p


def read_json(path) -> dict:
    return json.loads(Path(path).read_text())
