"""HTTP surface over the assistant. JSON in, JSON out; session ids are opaque.

Routes:
    POST /sessions                         -> {"session_id": ...}
    POST /sessions/{id}/messages           -> bot response payload
    GET  /sessions/{id}/products?all=true  -> full result list ("View More")
    POST /sessions/{id}/turns/{n}/feedback -> {"ok": true}
    GET  /sessions/{id}/transcript         -> transcript record
"""

from __future__ import annotations

from typing import Literal

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .orchestrator import EmptyQueryError, ShoppingAssistant
from .session import BadTurnIndexError, UnknownSessionError


class MessageIn(BaseModel):
    text: str


class FeedbackIn(BaseModel):
    thumbs: Literal["up", "down"]


def create_app(assistant: ShoppingAssistant) -> FastAPI:
    app = FastAPI(title="shopchat", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.post("/sessions")
    def create_session() -> dict:
        return {"session_id": assistant.create_session()}

    @app.post("/sessions/{session_id}/messages")
    def post_message(session_id: str, message: MessageIn) -> dict:
        try:
            response = assistant.handle_message(session_id, message.text)
        except UnknownSessionError:
            raise HTTPException(status_code=404, detail="unknown session")
        except EmptyQueryError:
            raise HTTPException(status_code=422, detail="query must be non-empty")
        return response.to_payload()

    @app.get("/sessions/{session_id}/products")
    def get_products(session_id: str, all: bool = False) -> dict:
        try:
            session = assistant.get_session(session_id)
        except UnknownSessionError:
            raise HTTPException(status_code=404, detail="unknown session")
        shown = session.displayed if all else [d for d in session.displayed if d.visible]
        cards = []
        for displayed in shown:
            product = assistant.catalog.products[displayed.product_id]
            highlights = [f"{k}: {v}" for k, v in list(product.specs.items())[:3]]
            cards.append(
                {
                    "id": product.id,
                    "title": product.title,
                    "price": product.price,
                    "spec_highlights": highlights,
                }
            )
        return {"products": cards}

    @app.post("/sessions/{session_id}/turns/{turn_index}/feedback")
    def post_feedback(session_id: str, turn_index: int, feedback: FeedbackIn) -> dict:
        try:
            assistant.record_feedback(session_id, turn_index, feedback.thumbs)
        except UnknownSessionError:
            raise HTTPException(status_code=404, detail="unknown session")
        except BadTurnIndexError:
            raise HTTPException(status_code=404, detail="no such turn")
        return {"ok": True}

    @app.get("/sessions/{session_id}/transcript")
    def get_transcript(session_id: str) -> dict:
        try:
            return assistant.export_transcript(session_id)
        except UnknownSessionError:
            raise HTTPException(status_code=404, detail="unknown session")

    return app
