"""Pydantic request/response models mirroring the file-format schemas."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

from ..field import DEFAULT_PRIME


class MapEntry(BaseModel):
    at: list[int] = Field(min_length=3, max_length=3)
    matrix: list[list[int]]


class ModuleDoc(BaseModel):
    prime: int
    cells: list[int] = Field(min_length=3, max_length=3)
    dims: list[list[list[int]]]
    maps: dict[str, list[MapEntry]]


class ValidationIssueDoc(BaseModel):
    kind: str
    at: str
    detail: str


class ValidateRequest(BaseModel):
    module: ModuleDoc


class ValidateResponse(BaseModel):
    valid: bool
    issues: list[ValidationIssueDoc]


class CheckRequest(BaseModel):
    module: ModuleDoc
    mode: Literal["exhaustive", "unit-cells"] = "exhaustive"


class SliceFailureDoc(BaseModel):
    axis: int
    index: int
    x: list[int]
    y: list[int]


class CubeFailureDoc(BaseModel):
    s: list[int]
    t: list[int]
    condition: str


class CheckResponse(BaseModel):
    overall: bool
    mode: str
    slice_failures: list[SliceFailureDoc]
    cube_failures: list[CubeFailureDoc]


class BlockEntryDoc(BaseModel):
    a: list[int] = Field(min_length=3, max_length=3)
    b: list[int] = Field(min_length=3, max_length=3)
    kind: str = Field(alias="class")
    multiplicity: int = Field(ge=1)

    model_config = {"populate_by_name": True}


class DimsCheckRow(BaseModel):
    at: list[int]
    dim: int
    expected: int
    ok: bool


class ReportDoc(BaseModel):
    verified: bool
    entries: list[BlockEntryDoc]
    dims_check: list[DimsCheckRow] = []


class DecomposeRequest(BaseModel):
    module: ModuleDoc
    mode: Literal["exhaustive", "unit-cells"] = "exhaustive"


class DecomposeResponse(BaseModel):
    strongly_exact: bool
    exactness: CheckResponse
    report: Optional[ReportDoc] = None


class GenerateRequest(BaseModel):
    kind: Literal["block-sum", "example", "perturbed"]
    seed: int = 0
    cells: list[int] = Field(default=[2, 2, 2], min_length=3, max_length=3)
    prime: int = DEFAULT_PRIME
    max_blocks: int = Field(default=3, ge=0)
    max_mult: int = Field(default=2, ge=1)


class GenerateResponse(BaseModel):
    module: ModuleDoc
    truth: Optional[ReportDoc] = None


class VerifyRequest(BaseModel):
    module: ModuleDoc
    report: ReportDoc


class VerifyResponse(BaseModel):
    verified: bool


class InfoResponse(BaseModel):
    prime: int
    cells: list[int]
    total_dim: int
    max_dim: int
    valid: bool
    issues: list[str]
