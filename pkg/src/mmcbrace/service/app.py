"""FastAPI service wrapping the census engine."""

from __future__ import annotations

import json

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..census import (
    Census,
    additive_scan,
    enumerate_mmc_regular,
    export_census,
    load_census,
    unpruned_reference_keys,
    verify_socle_facts,
)
from ..errors import BraceEngineError
from ..families import families_cover_census, families_report
from ..suite import census_summary_table, run_verify
from ..zmod import GroupShape
from .schemas import (
    AutRequest,
    AutResponse,
    CensusRequest,
    CensusResponse,
    CensusSummary,
    FamiliesRequest,
    FamiliesResponse,
    HealthResponse,
    NormalizeRequest,
    NormalizeResponse,
    ScanRequest,
    ScanResponse,
    ScanRow,
    VerifyRequest,
    VerifyResponse,
)


def create_app() -> FastAPI:
    app = FastAPI(title="mmcbrace", version=__version__)

    @app.exception_handler(BraceEngineError)
    async def engine_error(_: Request, exc: BraceEngineError):
        return JSONResponse(
            status_code=400,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.exception_handler(ValueError)
    async def value_error(_: Request, exc: ValueError):
        return JSONResponse(
            status_code=422,
            content={"error": "ValueError", "detail": str(exc)},
        )

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(status="ok", version=__version__)

    @app.post("/aut", response_model=AutResponse)
    def aut(req: AutRequest):
        from ..zmod import aut_report

        shape = GroupShape.from_moduli(req.shape)
        total, sylow = aut_report(shape, req.bound)
        return AutResponse(
            shape=list(shape.moduli), aut_order=total, sylow2_order=sylow
        )

    def _census_payload(req: CensusRequest) -> CensusResponse:
        shape = GroupShape.from_moduli(req.shape)
        census = enumerate_mmc_regular(
            shape,
            req.m,
            bound=req.bound,
            time_budget=req.time_budget_seconds,
            workers=req.workers,
        )
        oracle_match = None
        if req.unpruned_oracle:
            if req.m != 3:
                raise ValueError("the unpruned completeness oracle runs only at m = 3")
            keys = unpruned_reference_keys(shape, req.m, bound=req.bound)
            oracle_match = keys == census.subgroup_keys()
        coverage = None
        if shape.exponents == (1, req.m + 1):
            coverage = families_cover_census(req.m, census)
        per_socle: dict[str, set[int]] = {}
        for rec in census.records:
            per_socle.setdefault(rec.socle_desc, set()).add(rec.iso_class_id)
        return CensusResponse(
            census=json.loads(export_census(census)),
            summary=CensusSummary(
                subgroup_count=len(census.records),
                iso_class_count=census.class_count,
                per_socle_classes={k: len(v) for k, v in sorted(per_socle.items())},
                oracle_match=oracle_match,
            ),
            table=census_summary_table(census, coverage),
        )

    @app.post("/census", response_model=CensusResponse)
    def census(req: CensusRequest):
        return _census_payload(req)

    @app.post("/scan-additive", response_model=ScanResponse)
    def scan(req: ScanRequest):
        rows = additive_scan(req.m, bound=req.bound, time_budget=req.time_budget_seconds)
        return ScanResponse(m=req.m, rows=[ScanRow(**r) for r in rows])

    @app.post("/families", response_model=FamiliesResponse)
    def families(req: FamiliesRequest):
        return FamiliesResponse(**families_report(req.m))

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest):
        report = run_verify(
            req.m,
            unpruned_oracle=req.unpruned_oracle,
            time_budget=req.time_budget_seconds,
            workers=req.workers,
            bound=req.bound,
        )
        return VerifyResponse(**report)

    @app.post("/census/normalize", response_model=NormalizeResponse)
    def normalize(req: NormalizeRequest):
        census = Census.from_json(req.census)
        canonical = json.loads(export_census(census))
        if Census.from_json(canonical).to_json() != census.to_json():
            raise BraceEngineError("census does not survive a round trip")
        return NormalizeResponse(census=canonical)

    # socle-fact report is exposed for completeness of the library surface
    @app.post("/census/socle-facts")
    def socle_facts(req: NormalizeRequest):
        census = Census.from_json(req.census)
        return verify_socle_facts(census)

    return app


app = create_app()
