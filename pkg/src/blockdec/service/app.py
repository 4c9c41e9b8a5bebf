"""FastAPI service exposing the checker, decomposer, generator and verifier.

All endpoints are stateless: a module travels in the request body using the
same schema as the module file format.  Semantic negatives (not exact, not
verified) are ordinary 200 responses; malformed documents are 400s.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..exactness import InvalidModuleError
from ..files import ModuleFormatError
from ..generator import PerturbBudgetError
from . import ops
from .models import (
    CheckRequest,
    CheckResponse,
    DecomposeRequest,
    DecomposeResponse,
    GenerateRequest,
    GenerateResponse,
    InfoResponse,
    ValidateRequest,
    ValidateResponse,
    VerifyRequest,
    VerifyResponse,
)


def create_app() -> FastAPI:
    app = FastAPI(
        title="blockdec",
        version=__version__,
        description="Block decomposition of 3-parameter persistence modules over GF(p)",
    )

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/validate", response_model=ValidateResponse)
    def validate(req: ValidateRequest) -> ValidateResponse:
        try:
            return ValidateResponse(**ops.op_validate(req.module.model_dump(by_alias=True)))
        except ModuleFormatError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.post("/check", response_model=CheckResponse)
    def check(req: CheckRequest) -> CheckResponse:
        try:
            return CheckResponse(**ops.op_check(req.module.model_dump(by_alias=True), mode=req.mode))
        except ModuleFormatError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except InvalidModuleError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.post("/decompose", response_model=DecomposeResponse)
    def decompose(req: DecomposeRequest) -> DecomposeResponse:
        try:
            return DecomposeResponse(
                **ops.op_decompose(req.module.model_dump(by_alias=True), mode=req.mode)
            )
        except ModuleFormatError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except InvalidModuleError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.post("/generate", response_model=GenerateResponse)
    def generate(req: GenerateRequest) -> GenerateResponse:
        try:
            module_doc, truth_doc = ops.op_generate(
                req.kind,
                seed=req.seed,
                cells=tuple(req.cells),
                prime=req.prime,
                max_blocks=req.max_blocks,
                max_mult=req.max_mult,
            )
        except (ValueError, PerturbBudgetError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return GenerateResponse(module=module_doc, truth=truth_doc)

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest) -> VerifyResponse:
        try:
            ok = ops.op_verify(
                req.module.model_dump(by_alias=True),
                req.report.model_dump(by_alias=True),
            )
        except ModuleFormatError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except InvalidModuleError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return VerifyResponse(verified=ok)

    @app.post("/info", response_model=InfoResponse)
    def info(req: ValidateRequest) -> InfoResponse:
        try:
            return InfoResponse(**ops.op_info(req.module.model_dump(by_alias=True)))
        except ModuleFormatError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    return app


app = create_app()
