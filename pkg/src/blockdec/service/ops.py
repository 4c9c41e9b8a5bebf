"""Document-level operations shared by the HTTP endpoints and the CLI.

Every operation takes and returns plain JSON-shaped dicts in the file-format
schemas, so the CLI is a thin client of the same code the service runs.
"""

from __future__ import annotations

from ..decomposer import Decomposer, DecompositionReport, _conservation
from ..exactness import InvalidModuleError, check_strong_exactness
from ..field import DEFAULT_PRIME, PrimeField
from ..files import ModuleFormatError, module_from_doc, module_to_doc, report_from_doc
from ..generator import GroundTruth, counterexample, perturb, random_block_sum
from ..grid import Grid, GridModule

__all__ = [
    "op_validate",
    "op_check",
    "op_decompose",
    "op_generate",
    "op_verify",
    "op_info",
    "ground_truth_report",
    "InvalidModuleError",
    "ModuleFormatError",
]


def _load(doc: dict, prime_override: int | None = None) -> GridModule:
    return module_from_doc(doc, prime_override)


def op_validate(doc: dict, prime_override: int | None = None) -> dict:
    module = _load(doc, prime_override)
    report = module.validate()
    return {
        "valid": report.ok,
        "issues": [
            {"kind": i.kind, "at": str(i.at), "detail": i.detail} for i in report.issues
        ],
    }


def op_check(doc: dict, mode: str = "exhaustive", prime_override: int | None = None) -> dict:
    module = _load(doc, prime_override)
    report = check_strong_exactness(module, mode=mode)
    return report.to_doc()


def op_decompose(doc: dict, mode: str = "exhaustive", prime_override: int | None = None) -> dict:
    module = _load(doc, prime_override)
    exactness = check_strong_exactness(module, mode=mode)
    if not exactness.overall:
        return {"strongly_exact": False, "exactness": exactness.to_doc(), "report": None}
    report = Decomposer(module, exactness=exactness).decompose()
    return {"strongly_exact": True, "exactness": exactness.to_doc(), "report": report.to_doc()}


def ground_truth_report(truth: GroundTruth) -> DecompositionReport:
    """The decomposition report implied by an explicit direct-sum construction."""
    entries = sorted(truth.multiset, key=lambda em: em[0].sort_key())
    conservation = _conservation(truth.module.grid, truth.module.dims, entries)
    verified = all(row.ok for row in conservation)
    return DecompositionReport(truth.module.grid, list(entries), verified, conservation)


def op_generate(
    kind: str,
    seed: int = 0,
    cells: tuple[int, int, int] = (2, 2, 2),
    prime: int = DEFAULT_PRIME,
    max_blocks: int = 3,
    max_mult: int = 2,
) -> tuple[dict, dict | None]:
    """Build a module document; block sums also return their truth report."""
    field = PrimeField(prime)
    if kind == "example":
        return module_to_doc(counterexample(field)), None
    grid = Grid(tuple(cells))
    truth = random_block_sum(field, grid, seed, max_blocks=max_blocks, max_mult=max_mult)
    if kind == "block-sum":
        return module_to_doc(truth.module), ground_truth_report(truth).to_doc()
    if kind == "perturbed":
        twisted = truth.module.basis_twist(seed)
        return module_to_doc(perturb(twisted, seed)), None
    raise ValueError(f"unknown kind {kind!r} (expected block-sum, example or perturbed)")


def op_verify(module_doc: dict, report_doc: dict, prime_override: int | None = None) -> bool:
    module = _load(module_doc, prime_override)
    report = report_from_doc(module.grid, report_doc)
    return Decomposer(module).verify(report)


def op_info(doc: dict, prime_override: int | None = None) -> dict:
    module = _load(doc, prime_override)
    validation = module.validate()
    dims = module.dims
    return {
        "prime": module.field.p,
        "cells": list(module.grid.cells),
        "total_dim": module.total_dim(),
        "max_dim": max(dims.values()) if dims else 0,
        "valid": validation.ok,
        "issues": [f"{i.kind} at {i.at}: {i.detail}" for i in validation.issues],
    }
