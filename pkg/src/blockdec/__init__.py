"""Block decomposition of 3-parameter persistence modules on finite grids.

The package represents pointwise finite-dimensional modules over GF(p) on a
finite 3-D cell grid, decides 3-parameter strong exactness with failure
witnesses, computes the block multiset by counting dimensions, extracts
explicit block submodules, and verifies the resulting direct sum by exact
rank computations.
"""

from .blocks import AxisInterval, Block, enumerate_blocks
from .decomposer import (
    AxisLimits,
    LimitCache,
    BlockSections,
    DecompositionError,
    DecompositionReport,
    Decomposer,
    NotStronglyExactError,
    Submodule,
    axis_limits,
    block_sections,
    death_residual,
    decompose,
    extract_submodule,
    multiplicity,
    verify_direct_sum,
)
from .exactness import (
    CubeDiagram,
    ExactnessReport,
    InvalidModuleError,
    SquareDiagram,
    check_strong_exactness,
    colimit_map_injective,
    limit_map_surjective,
    slice_strongly_exact,
    square_exact,
    square_pullback_surjective,
    square_pushout_injective,
)
from .field import DEFAULT_PRIME, PrimeField
from .files import ModuleFormatError, read_module, read_report, write_module, write_report
from .generator import (
    GroundTruth,
    PerturbBudgetError,
    block_module,
    counterexample,
    perturb,
    random_block_sum,
)
from .grid import Grid, GridModule, SliceModule, direct_sum, zero_module
from .linalg import Matrix, Subspace, rank, rref

__version__ = "0.1.0"

__all__ = [
    "AxisInterval",
    "AxisLimits",
    "Block",
    "LimitCache",
    "BlockSections",
    "CubeDiagram",
    "DEFAULT_PRIME",
    "DecompositionError",
    "DecompositionReport",
    "Decomposer",
    "ExactnessReport",
    "GridModule",
    "Grid",
    "GroundTruth",
    "InvalidModuleError",
    "Matrix",
    "ModuleFormatError",
    "NotStronglyExactError",
    "PerturbBudgetError",
    "PrimeField",
    "SliceModule",
    "SquareDiagram",
    "Submodule",
    "Subspace",
    "axis_limits",
    "block_module",
    "block_sections",
    "check_strong_exactness",
    "colimit_map_injective",
    "counterexample",
    "death_residual",
    "decompose",
    "direct_sum",
    "enumerate_blocks",
    "extract_submodule",
    "limit_map_surjective",
    "multiplicity",
    "perturb",
    "random_block_sum",
    "rank",
    "read_module",
    "read_report",
    "rref",
    "slice_strongly_exact",
    "square_exact",
    "square_pullback_surjective",
    "square_pushout_injective",
    "verify_direct_sum",
    "write_module",
    "write_report",
    "zero_module",
]
