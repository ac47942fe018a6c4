"""HTTP recognition service: POST /recognize, POST /convert, GET /suggest.

Handlers are pure functions of (model, lexicon, request); the model and
lexicon are shared immutably across requests.
"""

from __future__ import annotations

import uuid

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .convert import Lexicon, MalformedWordError, UnknownConjunctError, convert_word, suggest
from .dtw import RecognitionError, RecognitionModel, recognize
from .ink import InkSample, Point, Stroke

__all__ = ["MAX_INK_POINTS", "create_app"]

MAX_INK_POINTS = 100_000


class RecognizeRequest(BaseModel):
    strokes: list[list[list[float]]]
    top_n: int = 5
    k: int = 3
    request_id: str | None = None


class ConvertRequest(BaseModel):
    grantha: str
    request_id: str | None = None


def _error(status: int, code: str, message: str, request_id: str | None = None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={
            "request_id": request_id or str(uuid.uuid4()),
            "error": {"code": code, "message": message},
        },
    )


def _build_sample(strokes: list[list[list[float]]]) -> InkSample:
    if not strokes:
        raise ValueError("at least one stroke is required")
    built = []
    for stroke in strokes:
        if not stroke:
            raise ValueError("strokes must be non-empty")
        points = []
        for point in stroke:
            if len(point) == 2:
                points.append(Point(point[0], point[1]))
            elif len(point) == 3:
                points.append(Point(point[0], point[1], point[2]))
            else:
                raise ValueError("points must be [x, y] or [x, y, t]")
        built.append(Stroke(tuple(points)))
    return InkSample(tuple(built))


def create_app(model: RecognitionModel, lexicon: Lexicon) -> FastAPI:
    app = FastAPI(title="grantha-ink", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"])
    classes = {cls.id: cls for cls in model.classes}

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        return _error(400, "bad_request", str(exc.errors()[:1]))

    @app.post("/recognize")
    def recognize_ink(body: RecognizeRequest):
        request_id = body.request_id or str(uuid.uuid4())
        total_points = sum(len(s) for s in body.strokes)
        if total_points > MAX_INK_POINTS:
            return _error(413, "too_large",
                          f"ink has {total_points} points; limit is {MAX_INK_POINTS}", request_id)
        try:
            sample = _build_sample(body.strokes)
            candidates = recognize(model, sample, n_best=body.top_n, k=body.k)
        except (ValueError, RecognitionError) as exc:
            return _error(400, "bad_ink", str(exc), request_id)
        return {
            "request_id": request_id,
            "candidates": [
                {
                    "class_id": c.class_id,
                    "codepoints": classes[c.class_id].codepoints,
                    "distance": c.distance,
                    "confidence": c.confidence,
                }
                for c in candidates
            ],
        }

    @app.post("/convert")
    def convert_text(body: ConvertRequest):
        request_id = body.request_id or str(uuid.uuid4())
        try:
            result = convert_word(body.grantha, lexicon)
        except MalformedWordError as exc:
            return _error(400, "malformed_word", str(exc), request_id)
        except UnknownConjunctError as exc:
            return _error(400, "unknown_conjunct", str(exc), request_id)
        return {
            "request_id": request_id,
            "old_script": result.old_script,
            "new_script": result.new_script,
            "notes": list(result.notes),
        }

    @app.get("/suggest")
    def suggest_words(fragment: str = Query(default=""), limit: int = Query(default=8, ge=1, le=100)):
        return {"words": suggest(fragment, lexicon, limit)}

    return app
