"""The shared JSON file formats.

Module documents:

    {"prime": p,
     "cells": [m1, m2, m3],
     "dims": [[[d, ...], ...], ...],              # indexed [t1][t2][t3], 0-based
     "maps": {"axis1": [{"at": [t1, t2, t3], "matrix": [[...], ...]}, ...],
              "axis2": [...], "axis3": [...]}}

Coordinates inside files are 0-based; the in-memory API is 1-based.  Every
required step map must appear exactly once and writers emit map entries
sorted lexicographically by "at", so serialization is deterministic down to
the byte.

Decomposition reports:

    {"verified": true,
     "entries": [{"a": [...], "b": [...], "class": "...", "multiplicity": n}, ...],
     "dims_check": [{"at": [...], "dim": d, "expected": e, "ok": true}, ...]}
"""

from __future__ import annotations

import json
from pathlib import Path

from .decomposer import DecompositionReport
from .field import PrimeField
from .grid import AXES, Grid, GridModule
from .linalg import Matrix

__all__ = [
    "ModuleFormatError",
    "module_to_doc",
    "module_from_doc",
    "write_module",
    "read_module",
    "report_to_doc",
    "report_from_doc",
    "write_report",
    "read_report",
    "dump_doc",
]


class ModuleFormatError(ValueError):
    """A structural problem in a module or report document, with its location."""


def module_to_doc(module: GridModule) -> dict:
    m1, m2, m3 = module.grid.cells
    dims = [
        [[module.dim((i + 1, j + 1, k + 1)) for k in range(m3)] for j in range(m2)]
        for i in range(m1)
    ]
    maps: dict[str, list] = {"axis1": [], "axis2": [], "axis3": []}
    for (axis, t) in module.step_keys():
        maps[f"axis{axis}"].append(
            {
                "at": [c - 1 for c in t],
                "matrix": module.step(axis, t).data.tolist(),
            }
        )
    for entries in maps.values():
        entries.sort(key=lambda e: e["at"])
    return {
        "prime": module.field.p,
        "cells": list(module.grid.cells),
        "dims": dims,
        "maps": maps,
    }


def _expect(condition: bool, where: str, message: str) -> None:
    if not condition:
        raise ModuleFormatError(f"{where}: {message}")


def module_from_doc(doc, prime_override: int | None = None) -> GridModule:
    _expect(isinstance(doc, dict), "document", "expected a JSON object")
    for key in ("prime", "cells", "dims", "maps"):
        _expect(key in doc, "document", f"missing key {key!r}")
    try:
        field = PrimeField(prime_override if prime_override is not None else doc["prime"])
    except ValueError as exc:
        raise ModuleFormatError(f"prime: {exc}") from exc
    cells = doc["cells"]
    _expect(
        isinstance(cells, list) and len(cells) == 3 and all(isinstance(m, int) for m in cells),
        "cells",
        "expected three integers",
    )
    try:
        grid = Grid(tuple(cells))
    except ValueError as exc:
        raise ModuleFormatError(f"cells: {exc}") from exc

    dims_doc = doc["dims"]
    dims: dict[tuple[int, int, int], int] = {}
    _expect(
        isinstance(dims_doc, list) and len(dims_doc) == cells[0],
        "dims",
        f"expected {cells[0]} entries",
    )
    for i, plane in enumerate(dims_doc):
        _expect(isinstance(plane, list) and len(plane) == cells[1], f"dims[{i}]", f"expected {cells[1]} entries")
        for j, row in enumerate(plane):
            _expect(isinstance(row, list) and len(row) == cells[2], f"dims[{i}][{j}]", f"expected {cells[2]} entries")
            for k, d in enumerate(row):
                _expect(isinstance(d, int) and d >= 0, f"dims[{i}][{j}][{k}]", "expected a nonnegative integer")
                dims[(i + 1, j + 1, k + 1)] = d

    maps_doc = doc["maps"]
    _expect(isinstance(maps_doc, dict), "maps", "expected an object")
    _expect(
        set(maps_doc.keys()) == {"axis1", "axis2", "axis3"},
        "maps",
        f"expected keys axis1..axis3, got {sorted(maps_doc.keys())}",
    )
    steps: dict[tuple[int, tuple[int, int, int]], Matrix] = {}
    for axis in AXES:
        entries = maps_doc[f"axis{axis}"]
        _expect(isinstance(entries, list), f"maps.axis{axis}", "expected a list")
        for n, entry in enumerate(entries):
            where = f"maps.axis{axis}[{n}]"
            _expect(isinstance(entry, dict), where, "expected an object")
            _expect("at" in entry and "matrix" in entry, where, "needs 'at' and 'matrix'")
            at = entry["at"]
            _expect(
                isinstance(at, list) and len(at) == 3 and all(isinstance(c, int) for c in at),
                f"{where}.at",
                "expected three integers",
            )
            t = tuple(c + 1 for c in at)
            _expect(grid.contains(t), f"{where}.at", f"point {at} outside grid")
            _expect(
                t[axis - 1] < cells[axis - 1],
                f"{where}.at",
                f"no axis-{axis} step starts at {at}",
            )
            key = (axis, t)
            _expect(key not in steps, f"{where}.at", f"duplicate step map at {at}")
            u = tuple(c + (1 if a == axis else 0) for a, c in zip(AXES, t))
            want_rows, want_cols = dims[u], dims[t]
            rows = entry["matrix"]
            _expect(isinstance(rows, list), f"{where}.matrix", "expected a list of rows")
            _expect(
                len(rows) == want_rows,
                f"{where}.matrix",
                f"expected {want_rows} rows, got {len(rows)}",
            )
            for ri, row in enumerate(rows):
                _expect(
                    isinstance(row, list) and len(row) == want_cols,
                    f"{where}.matrix[{ri}]",
                    f"expected {want_cols} entries",
                )
                for entry_val in row:
                    _expect(
                        isinstance(entry_val, int),
                        f"{where}.matrix[{ri}]",
                        "entries must be integers",
                    )
            steps[key] = Matrix(field, rows, rows=want_rows, cols=want_cols)
    try:
        return GridModule(field, grid, dims, steps)
    except ValueError as exc:
        raise ModuleFormatError(f"maps: {exc}") from exc


def report_to_doc(report: DecompositionReport) -> dict:
    return report.to_doc()


def report_from_doc(grid: Grid, doc) -> DecompositionReport:
    _expect(isinstance(doc, dict), "report", "expected a JSON object")
    try:
        return DecompositionReport.from_doc(grid, doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise ModuleFormatError(f"report: {exc}") from exc


def dump_doc(doc: dict) -> str:
    """Canonical rendering: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_module(module: GridModule, path) -> None:
    Path(path).write_text(dump_doc(module_to_doc(module)))


def read_module(path, prime_override: int | None = None) -> GridModule:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ModuleFormatError(f"{path}: invalid JSON: {exc}") from exc
    return module_from_doc(doc, prime_override)


def write_report(report: DecompositionReport, path) -> None:
    Path(path).write_text(dump_doc(report_to_doc(report)))


def read_report(grid: Grid, path) -> DecompositionReport:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ModuleFormatError(f"{path}: invalid JSON: {exc}") from exc
    return report_from_doc(grid, doc)
