"""Plain-text input and output formats used by the command line.

Inputs are UTF-8 CSV; ``#`` starts a comment and blank lines are ignored.

* vertices: ``id,x1,...,xd`` with ids 0..n-1 (any order, each once)
* simplices: ``v0,v1,...,vd``
* data: ``x1,...,xd`` or ``x1,...,xd,weight`` (all lines alike)

The fit output is a flat ``key value`` document; floats are written in
shortest round-trip form so a parse/format cycle reproduces the bytes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "FormatError",
    "read_vertices",
    "read_simplices",
    "read_data",
    "FitDocument",
    "format_fit",
    "parse_fit",
    "fmt_float",
]


class FormatError(ValueError):
    pass


def fmt_float(x: float) -> str:
    return repr(float(x))


def _rows(path) -> list[tuple[int, list[str]]]:
    out = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if line:
            out.append((lineno, [f.strip() for f in line.split(",")]))
    return out


def _floats(fields, path, lineno):
    try:
        return [float(f) for f in fields]
    except ValueError:
        raise FormatError(f"{path}:{lineno}: non-numeric field in {fields!r}") from None


def read_vertices(path) -> np.ndarray:
    rows = _rows(path)
    if not rows:
        raise FormatError(f"{path}: no vertices")
    width = len(rows[0][1])
    if width < 2:
        raise FormatError(f"{path}: expected id,x1,...,xd")
    coords: dict[int, list[float]] = {}
    for lineno, fields in rows:
        if len(fields) != width:
            raise FormatError(f"{path}:{lineno}: expected {width} fields")
        try:
            vid = int(fields[0])
        except ValueError:
            raise FormatError(f"{path}:{lineno}: bad vertex id {fields[0]!r}") from None
        if vid in coords:
            raise FormatError(f"{path}:{lineno}: duplicate vertex id {vid}")
        coords[vid] = _floats(fields[1:], path, lineno)
    if sorted(coords) != list(range(len(coords))):
        raise FormatError(f"{path}: vertex ids must be dense from 0")
    return np.array([coords[i] for i in range(len(coords))])


def read_simplices(path) -> np.ndarray:
    rows = _rows(path)
    if not rows:
        raise FormatError(f"{path}: no simplices")
    out = []
    for lineno, fields in rows:
        try:
            out.append([int(f) for f in fields])
        except ValueError:
            raise FormatError(f"{path}:{lineno}: vertex indices must be integers") from None
    if len({len(r) for r in out}) != 1:
        raise FormatError(f"{path}: rows differ in length")
    return np.array(out, dtype=np.int64)


def read_data(path, d: int) -> tuple[np.ndarray, np.ndarray | None]:
    """Return (points, weights); weights is None when no line carries one."""
    rows = _rows(path)
    widths = {len(f) for _, f in rows}
    if not rows:
        return np.empty((0, d)), None
    if len(widths) != 1 or widths.pop() not in (d, d + 1):
        raise FormatError(f"{path}: every line needs {d} coordinates and an optional weight")
    vals = np.array([_floats(f, path, n) for n, f in rows])
    if vals.shape[1] == d:
        return vals, None
    return vals[:, :d], vals[:, d]


@dataclass
class FitDocument:
    vertex_values: list[float]
    loglik: float
    objective: float
    mass: float
    grad_norm: float
    iterations: int
    converged: bool
    manifest: dict[str, str] = field(default_factory=dict)


def format_fit(doc: FitDocument) -> str:
    lines = ["# simplexj fit output"]
    lines += [f"vertex_value {i} {fmt_float(v)}" for i, v in enumerate(doc.vertex_values)]
    lines += [
        f"loglik {fmt_float(doc.loglik)}",
        f"objective {fmt_float(doc.objective)}",
        f"mass {fmt_float(doc.mass)}",
        f"grad_norm {fmt_float(doc.grad_norm)}",
        f"iterations {doc.iterations}",
        f"converged {'true' if doc.converged else 'false'}",
    ]
    lines += [f"manifest.{k} {v}" for k, v in doc.manifest.items()]
    return "\n".join(lines) + "\n"


def parse_fit(text: str) -> FitDocument:
    values: dict[int, float] = {}
    scalars: dict[str, str] = {}
    manifest: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        if key == "vertex_value":
            idx, _, val = rest.partition(" ")
            values[int(idx)] = float(val)
        elif key.startswith("manifest."):
            manifest[key[len("manifest."):]] = rest
        elif key in ("loglik", "objective", "mass", "grad_norm", "iterations", "converged"):
            scalars[key] = rest
        else:
            raise FormatError(f"line {lineno}: unknown key {key!r}")
    if sorted(values) != list(range(len(values))):
        raise FormatError("vertex_value indices must be dense from 0")
    try:
        return FitDocument(
            vertex_values=[values[i] for i in range(len(values))],
            loglik=float(scalars["loglik"]),
            objective=float(scalars["objective"]),
            mass=float(scalars["mass"]),
            grad_norm=float(scalars["grad_norm"]),
            iterations=int(scalars["iterations"]),
            converged=scalars["converged"] == "true",
            manifest=manifest,
        )
    except KeyError as exc:
        raise FormatError(f"missing key {exc.args[0]!r}") from None
