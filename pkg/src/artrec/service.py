"""HTTP service over a built engine: catalog browsing, recommendations with
explanations, runtime stats, and an append-only like/dislike feedback log.

One writer (the feedback appender, behind a lock), many readers; the engine
is immutable while served.
"""
from __future__ import annotations

import json
import threading
import time
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import AliasChoices, BaseModel, Field

from .recommender import (
    Engine,
    RecommenderConfig,
    UnknownArtworkError,
    explain,
    recommend,
)

MAX_PAGE_LIMIT = 500


class FeedbackBody(BaseModel):
    """Feedback event as posted by clients; the timestamp is server-set.

    Accepts both the canonical field names and the short spellings used by
    the browser client ("query"/"item").
    """

    query_id: str = Field(validation_alias=AliasChoices("query_id", "query"))
    item_id: str = Field(validation_alias=AliasChoices("item_id", "item"))
    verdict: Literal["like", "dislike"]
    session: str


class FeedbackLog:
    """Append-only JSON-lines log; writes are serialized by a lock."""

    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)
        self._lock = threading.Lock()

    def append(self, body: FeedbackBody) -> dict:
        event = {
            "ts": int(time.time()),
            "query_id": body.query_id,
            "item_id": body.item_id,
            "verdict": body.verdict,
            "session": body.session,
        }
        line = json.dumps(event, ensure_ascii=False)
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line)
                fh.write("\n")
        return event


def create_app(
    engine: Engine,
    feedback_log: str | Path,
    default_config: RecommenderConfig | None = None,
) -> FastAPI:
    defaults = default_config or RecommenderConfig()
    log = FeedbackLog(feedback_log)
    app = FastAPI(title="artrec")

    def error(status: int, message: str) -> JSONResponse:
        return JSONResponse(status_code=status, content={"error": message})

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        return error(400, "invalid request: " + "; ".join(
            f"{'.'.join(str(p) for p in e['loc'])}: {e['msg']}" for e in exc.errors()
        ))

    @app.exception_handler(Exception)
    async def on_internal_error(request: Request, exc: Exception):
        # 5xx must not leak internals.
        return error(500, "internal error")

    @app.get("/artworks")
    def list_artworks(offset: int = 0, limit: int = 20):
        if offset < 0:
            return error(400, "offset must be >= 0")
        if limit < 1 or limit > MAX_PAGE_LIMIT:
            return error(400, f"limit must be in 1..{MAX_PAGE_LIMIT}")
        works = engine.catalog.artworks
        page = works[offset : offset + limit]
        return {
            "total": len(works),
            "offset": offset,
            "limit": limit,
            "items": [
                {
                    "id": w.id,
                    "artist": w.artist_id,
                    "title": w.title,
                    "image_ref": w.image_ref,
                    "annotations": dict(w.annotations),
                }
                for w in page
            ],
        }

    @app.get("/artworks/{artwork_id}")
    def get_artwork(artwork_id: str):
        work = engine.catalog.artwork_by_id.get(artwork_id)
        if work is None:
            return error(404, f"unknown artwork {artwork_id}")
        return work.to_dict()

    @app.get("/recommend/{artwork_id}")
    def get_recommendation(
        artwork_id: str,
        alpha: float | None = None,
        mode: str | None = None,
        k: int | None = None,
        explore: float | None = None,
        seed: int | None = None,
    ):
        try:
            config = RecommenderConfig(
                alpha=defaults.alpha if alpha is None else alpha,
                mode=defaults.mode if mode is None else mode,
                k_out=defaults.k_out if k is None else k,
                exclude_query_artist=defaults.exclude_query_artist,
                exploration=defaults.exploration if explore is None else explore,
                seed=defaults.seed if seed is None else seed,
                ranking=defaults.ranking,
            )
        except ValueError as exc:
            return error(400, str(exc))
        try:
            rec = recommend(engine, artwork_id, config)
        except UnknownArtworkError as exc:
            return error(404, str(exc))
        return rec.to_dict(explanations=explain(rec, engine))

    @app.post("/feedback", status_code=201)
    def post_feedback(body: FeedbackBody):
        return log.append(body)

    @app.get("/stats")
    def stats():
        return {
            "artworks": len(engine.catalog.artworks),
            "artists": len(engine.catalog.artists),
            "visual_edges": engine.visual.edge_count,
            "contextual_edges": engine.contextual.edge_count,
            "artist_edges": engine.artist_graph.edge_count,
            "build": {"build_id": engine.build_id, **dict(engine.meta)},
            "alpha_default": defaults.alpha,
        }

    return app
