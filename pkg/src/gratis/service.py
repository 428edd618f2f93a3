"""HTTP job service: generation, tuning with live progress, features.

Endpoints (all JSON bodies):
  POST /api/generate       small counts answer inline, large counts become jobs
  POST /api/tune           always a job; 202 + {job_id}
  GET  /api/jobs/{id}      job record snapshot
  GET  /api/jobs/{id}/events   server-sent events (id: sequence number)
  GET  /api/jobs/{id}/result   result bundle (409 until done)
  POST /api/features       feature vectors for posted series
  GET  /api/feature-names  canonical names with ranges and seasonal flags

CORS is enabled so the bundled web UI can run from any origin.
"""

from __future__ import annotations

import asyncio
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

import numpy as np
from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response, StreamingResponse
from pydantic import BaseModel, Field

from . import __version__
from .errors import GratisError
from .features import canonical_names, compute_feature_vector, feature_info
from .ga import GAConfig, TargetSpec, tune_to_target
from .generator import GeneratorConfig, MultiSeasonalSpec, generate_batch, generate_multiseasonal
from .jobs import JobManager
from .mar import TimeSeries
from .serialize import _series_record, model_to_dict

SYNC_GENERATE_LIMIT = 100


@dataclass
class ServiceSettings:
    data_dir: str = "./gratis-data"
    workers: Optional[int] = None


class GenerateRequest(BaseModel):
    period: int = Field(default=1, ge=1)
    count: int = Field(default=1, ge=1)
    length: Optional[int] = Field(default=None, ge=1)
    length_pool: Optional[List[int]] = None
    periods: Optional[List[int]] = None  # multi-seasonal when set
    weights: Optional[List[float]] = None
    seed: int = 0
    k_max: int = Field(default=5, ge=1)


class GARequestConfig(BaseModel):
    population: int = Field(default=30, ge=4)
    max_generations: int = Field(default=100, ge=1)
    crossover_prob: float = Field(default=0.8, ge=0.0, le=1.0)
    mutation_prob: float = Field(default=0.1, ge=0.0, le=1.0)
    mutation_scale: float = Field(default=0.1, gt=0.0)
    tournament_size: int = Field(default=3, ge=2)
    tolerance: float = -0.05
    k_fixed: int = Field(default=3, ge=1)
    p_fixed: int = Field(default=2, ge=1)


class TuneRequest(BaseModel):
    period: int = Field(default=1, ge=1)
    length: int = Field(default=60, ge=8)
    count: int = Field(default=1, ge=1, le=100)
    features: dict
    seed: int = 0
    ga: GARequestConfig = GARequestConfig()


class SeriesPayload(BaseModel):
    id: str = "0"
    periods: List[int] = [1]
    values: List[float]


class FeaturesRequest(BaseModel):
    series: List[SeriesPayload]
    names: Optional[List[str]] = None


def _series_from_payload(p: SeriesPayload) -> TimeSeries:
    try:
        return TimeSeries(values=np.asarray(p.values, dtype=float), periods=tuple(p.periods))
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc))


def _generate(req: GenerateRequest) -> list:
    if req.periods:
        spec_weights = tuple(req.weights) if req.weights else None
        out = []
        for i in range(req.count):
            spec = MultiSeasonalSpec(
                periods=tuple(req.periods), length=req.length or max(req.periods) * 4,
                weights=spec_weights,
            )
            out.append(generate_multiseasonal(spec, GeneratorConfig(k_max=req.k_max), seed=(req.seed, i)))
        return out
    cfg = GeneratorConfig(
        period=req.period,
        length=req.length,
        length_pool=tuple(req.length_pool) if req.length_pool else None,
        k_max=req.k_max,
    )
    return generate_batch(cfg, req.count, seed=req.seed)


def feature_name_metadata() -> list:
    out = []
    for name in canonical_names(1):
        info = feature_info(name)
        out.append(
            {
                "name": name,
                "lower": None if math.isinf(info.lower) else info.lower,
                "upper": None if math.isinf(info.upper) else info.upper,
                "lower_open": info.lower_open,
                "upper_open": info.upper_open,
                "seasonal_only": info.seasonal_only,
                "integer": info.integer,
            }
        )
    return out


def create_app(settings: Optional[ServiceSettings] = None) -> FastAPI:
    settings = settings or ServiceSettings()
    app = FastAPI(title="gratis", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    manager = JobManager(settings.data_dir, settings.workers)
    app.state.jobs = manager

    @app.exception_handler(RequestValidationError)
    async def schema_violation(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.get("/api/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.get("/api/feature-names")
    def feature_names():
        return {"features": feature_name_metadata()}

    @app.post("/api/features")
    def features(req: FeaturesRequest):
        rows = []
        for payload in req.series:
            ts = _series_from_payload(payload)
            try:
                fv = compute_feature_vector(ts, names=req.names)
            except ValueError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            rows.append(
                {
                    "id": payload.id,
                    "features": {
                        n: (None if v is None else float(v))
                        for n, v in zip(fv.names, fv.values)
                    },
                    "flags": fv.flags,
                }
            )
        return {"rows": rows}

    @app.post("/api/generate")
    def generate(req: GenerateRequest):
        if req.count <= SYNC_GENERATE_LIMIT:
            try:
                series = _generate(req)
            except (GratisError, ValueError) as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            return {
                "series": [_series_record(ts, str(i)) for i, ts in enumerate(series)]
            }

        def work(record, job_dir):
            series = _generate(req)
            return {"series": [_series_record(ts, str(i)) for i, ts in enumerate(series)]}

        record = manager.submit("generate", work)
        return Response(
            content=json.dumps({"job_id": record.job_id}),
            status_code=202,
            media_type="application/json",
        )

    @app.post("/api/tune")
    def tune(req: TuneRequest):
        names = tuple(req.features.keys())
        values = tuple(float(v) for v in req.features.values())
        try:
            target = TargetSpec(
                feature_names=names,
                target_values=values,
                period=req.period,
                length=req.length,
            )
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

        def work(record, job_dir):
            results = []
            for i in range(req.count):
                cfg = GAConfig(
                    population=req.ga.population,
                    max_generations=req.ga.max_generations,
                    crossover_prob=req.ga.crossover_prob,
                    mutation_prob=req.ga.mutation_prob,
                    mutation_scale=req.ga.mutation_scale,
                    tournament_size=req.ga.tournament_size,
                    tolerance=req.ga.tolerance,
                    k_fixed=req.ga.k_fixed,
                    p_fixed=req.ga.p_fixed,
                    seed=(req.seed, i) if req.count > 1 else req.seed,
                )
                res = tune_to_target(
                    target,
                    cfg,
                    on_progress=lambda ev, idx=i: record.emit({"series": idx, **ev}),
                )
                results.append(
                    {
                        "series": _series_record(res.series, str(i)),
                        "model": model_to_dict(res.model),
                        "trace": list(res.trace),
                        "fitness": res.fitness,
                        "generations": res.generations,
                        "feature_values": res.feature_values,
                    }
                )
            return {
                "target": {"features": dict(req.features), "period": req.period,
                           "length": req.length},
                "results": results,
            }

        record = manager.submit("tune", work)
        return Response(
            content=json.dumps({"job_id": record.job_id}),
            status_code=202,
            media_type="application/json",
        )

    def _get_job(job_id: str):
        record = manager.get(job_id)
        if record is None:
            raise HTTPException(status_code=404, detail=f"unknown job {job_id}")
        return record

    @app.get("/api/jobs/{job_id}")
    def job_status(job_id: str):
        return _get_job(job_id).snapshot()

    @app.get("/api/jobs/{job_id}/result")
    def job_result(job_id: str):
        record = _get_job(job_id)
        snap = record.snapshot()
        if snap["status"] == "failed":
            raise HTTPException(status_code=500, detail=record.error)
        if snap["status"] != "done" or record.result_path is None:
            raise HTTPException(status_code=409, detail="result not ready")
        return Response(
            content=Path(record.result_path).read_bytes(),
            media_type="application/json",
        )

    @app.get("/api/jobs/{job_id}/events")
    async def job_events(job_id: str, request: Request):
        record = _get_job(job_id)
        last_id = request.headers.get("Last-Event-ID")
        after = int(last_id) if last_id and last_id.isdigit() else -1

        async def stream():
            cursor = after
            while True:
                events = record.events_since(cursor)
                for ev in events:
                    cursor = ev["seq"]
                    yield f"id: {ev['seq']}\nevent: progress\ndata: {json.dumps(ev, sort_keys=True)}\n\n"
                if record.finished:
                    snap = record.snapshot()
                    yield f"event: end\ndata: {json.dumps(snap, sort_keys=True)}\n\n"
                    return
                await asyncio.to_thread(record.wait_for_change, cursor + 1, 0.25)

        return StreamingResponse(stream(), media_type="text/event-stream")

    return app
