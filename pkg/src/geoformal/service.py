"""HTTP reward service for online training loops.

Batch-first API: training frameworks score grouped rollouts, so every
endpoint takes a list of items and answers in request order. The service
is stateless; a request's config_override never touches server defaults.
"""

from __future__ import annotations

import hashlib
import json

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field, field_validator

from . import __version__
from .ast import DOMAINS
from .canon import canonicalize
from .metrics import MixedDomains, score_corpus
from .parser import parse_document
from .reward import BadReference, ConfigError, RewardConfig, total_reward


class RewardItem(BaseModel):
    id: str
    prediction: str
    reference: str
    domain: str

    @field_validator("domain")
    @classmethod
    def _domain_known(cls, value: str) -> str:
        if value not in DOMAINS:
            raise ValueError(f"domain must be one of {list(DOMAINS)}")
        return value


class BatchRequest(BaseModel):
    items: list[RewardItem] = Field(min_length=1)
    config_override: dict | None = None

    @field_validator("items")
    @classmethod
    def _ids_unique(cls, items: list[RewardItem]) -> list[RewardItem]:
        seen = set()
        for item in items:
            if item.id in seen:
                raise ValueError(f"duplicate item id {item.id!r}")
            seen.add(item.id)
        return items


class RewardResultItem(BaseModel):
    id: str
    total: float
    r_fmt: int
    r_geo: float
    per_category_precision: dict[str, float]


class RewardResponse(BaseModel):
    items: list[RewardResultItem]
    config_echo: dict
    service_version: str


def _config_hash(config: RewardConfig) -> str:
    payload = json.dumps(config.to_dict(), sort_keys=True).encode()
    return hashlib.sha256(payload).hexdigest()[:16]


def _error_body(error: str, detail: str, item_errors: list | None = None) -> dict:
    return {"error": error, "detail": detail, "item_errors": item_errors or []}


def create_app(config: RewardConfig | None = None) -> FastAPI:
    base_config = (config or RewardConfig()).normalized()
    app = FastAPI(title="geoformal reward service", version=__version__)

    @app.exception_handler(RequestValidationError)
    async def _validation_handler(request: Request, exc: RequestValidationError):
        item_errors = [
            {"loc": [str(part) for part in err["loc"]], "message": err["msg"]}
            for err in exc.errors()
        ]
        return JSONResponse(
            status_code=400,
            content=_error_body("invalid request", "request body failed validation", item_errors),
        )

    def _effective_config(override: dict | None) -> RewardConfig:
        if not override:
            return base_config
        return base_config.override(override).normalized()

    @app.get("/v1/health")
    async def health():
        return {
            "status": "ok",
            "version": __version__,
            "config_hash": _config_hash(base_config),
        }

    @app.post("/v1/reward", response_model=RewardResponse)
    async def reward(request: BatchRequest):
        try:
            cfg = _effective_config(request.config_override)
        except ConfigError as err:
            return JSONResponse(
                status_code=400, content=_error_body("invalid config", str(err))
            )
        results = []
        item_errors = []
        for item in request.items:
            try:
                breakdown = total_reward(item.prediction, item.reference, item.domain, cfg)
            except BadReference as err:
                item_errors.append({"id": item.id, "message": str(err)})
                continue
            results.append(
                RewardResultItem(
                    id=item.id,
                    total=breakdown.total,
                    r_fmt=breakdown.r_fmt,
                    r_geo=breakdown.r_geo,
                    per_category_precision=breakdown.per_category_precision,
                )
            )
        if item_errors:
            return JSONResponse(
                status_code=422,
                content=_error_body(
                    "invalid reference", "one or more references failed validation", item_errors
                ),
            )
        echo = cfg.to_dict()
        return RewardResponse(items=results, config_echo=echo, service_version=__version__)

    @app.post("/v1/score")
    async def score(request: BatchRequest):
        try:
            cfg = _effective_config(request.config_override)
        except ConfigError as err:
            return JSONResponse(
                status_code=400, content=_error_body("invalid config", str(err))
            )
        pairs = []
        for item in request.items:
            pred = canonicalize(parse_document(item.prediction, item.domain).document, cfg.mode)
            ref = canonicalize(parse_document(item.reference, item.domain).document, cfg.mode)
            pairs.append((pred, ref, item.domain))
        try:
            report = score_corpus(pairs)
        except MixedDomains as err:
            return JSONResponse(status_code=400, content=_error_body("mixed domains", str(err)))
        return report.to_json_dict()

    return app
