"""Session state: turns, displayed products, sticky flow, and the store.

Sessions are independent of each other; the store hands out a per-session
lock so message handling is serialized within a session while different
sessions proceed concurrently. Idle sessions expire after a TTL.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Callable

from .search_flow import FollowUp

DEFAULT_SESSION_TTL_SECONDS = 2 * 60 * 60


class UnknownSessionError(KeyError):
    """Raised when a session id does not exist or has expired."""


class BadTurnIndexError(IndexError):
    pass


@dataclass(frozen=True)
class ProductCard:
    id: str
    title: str
    price: int
    spec_highlights: tuple[str, ...] = ()

    def to_payload(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "price": self.price,
            "spec_highlights": list(self.spec_highlights),
        }


@dataclass(frozen=True)
class BotResponse:
    kind: str  # products | answer | followup | comparison | summary | template | error
    text: str
    products: tuple[ProductCard, ...] = ()
    follow_up: FollowUp | None = None
    flags: dict = field(default_factory=dict)

    def to_payload(self) -> dict:
        payload: dict = {"kind": self.kind, "text": self.text}
        payload["products"] = [card.to_payload() for card in self.products] or None
        payload["follow_up"] = (
            {
                "question": self.follow_up.question,
                "facet": self.follow_up.facet,
                "suggestions": list(self.follow_up.suggestions),
            }
            if self.follow_up
            else None
        )
        payload["flags"] = dict(self.flags)
        return payload


@dataclass
class Turn:
    user_query: str
    saq: str
    intent: str
    flow: str
    response: BotResponse
    feedback: str | None = None

    def to_payload(self) -> dict:
        return {
            "user_query": self.user_query,
            "saq": self.saq,
            "intent": self.intent,
            "flow": self.flow,
            "response": self.response.to_payload(),
            "feedback": self.feedback,
        }


@dataclass
class DisplayedProduct:
    product_id: str
    title: str
    visible: bool


@dataclass
class SessionContext:
    session_id: str
    turns: list[Turn] = field(default_factory=list)
    displayed: list[DisplayedProduct] = field(default_factory=list)
    # Sticky flow: while set, turns route straight to product Q&A for this product.
    active_product_id: str | None = None
    asked_facets: set[str] = field(default_factory=set)
    followups_issued: int = 0
    known_budget: int | None = None
    last_search_category: str | None = None
    last_active: float = 0.0

    def visible_titles(self, limit: int = 8) -> list[str]:
        return [d.title for d in self.displayed if d.visible][:limit]


class SessionStore:
    """In-memory session registry with TTL expiry and per-session locks."""

    def __init__(
        self,
        ttl_seconds: float = DEFAULT_SESSION_TTL_SECONDS,
        clock: Callable[[], float] = time.time,
    ) -> None:
        self._sessions: dict[str, SessionContext] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        self._ttl = ttl_seconds
        self._clock = clock

    def create(self) -> SessionContext:
        session = SessionContext(session_id=uuid.uuid4().hex, last_active=self._clock())
        with self._registry_lock:
            self._sessions[session.session_id] = session
            self._locks[session.session_id] = threading.Lock()
        return session

    def get(self, session_id: str) -> SessionContext:
        with self._registry_lock:
            session = self._sessions.get(session_id)
            if session is not None and self._clock() - session.last_active > self._ttl:
                del self._sessions[session_id]
                del self._locks[session_id]
                session = None
        if session is None:
            raise UnknownSessionError(session_id)
        return session

    def lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            try:
                return self._locks[session_id]
            except KeyError:
                raise UnknownSessionError(session_id) from None

    def touch(self, session: SessionContext) -> None:
        session.last_active = self._clock()
