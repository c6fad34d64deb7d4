"""Standalone-query generation.

Each shopper message is rewritten into a query that makes sense without the
conversation: budgets and other constraints are carried forward and ordinal
references ("second product") are replaced with full product titles. The
rewrite is LLM-backed; a deterministic fallback covers gateway failures so
this step never raises.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .gateway import GatewayError, LLMGateway

ORDINAL_WORDS = {
    "first": 1,
    "second": 2,
    "third": 3,
    "fourth": 4,
    "fifth": 5,
    "sixth": 6,
    "seventh": 7,
    "eighth": 8,
}

_ORDINAL_TOKEN = re.compile(
    r"\b(first|second|third|fourth|fifth|sixth|seventh|eighth|[1-8](?:st|nd|rd|th)?|last)\b",
    re.IGNORECASE,
)
# Tighter form used for substitution inside a query: ordinal + product noun.
_ORDINAL_PHRASE = re.compile(
    r"(?:the\s+)?\b(first|second|third|fourth|fifth|sixth|seventh|eighth|[1-8](?:st|nd|rd|th)?|last)\s+(?:product|one|item|option)\b",
    re.IGNORECASE,
)

BUDGET_PHRASE = re.compile(
    r"\b(?:under|below|within|less than|upto|up to)\s+(?:rs\.?\s*|inr\s*|₹\s*)?(\d[\d,]*)",
    re.IGNORECASE,
)
_BARE_NUMBER = re.compile(r"^\s*(?:rs\.?\s*|inr\s*|₹\s*)?(\d[\d,]*)\s*$", re.IGNORECASE)
_ANY_DIGIT = re.compile(r"\d")


class OrdinalError(ValueError):
    """Base for ordinal-resolution failures."""


class NoOrdinalError(OrdinalError):
    pass


class OrdinalOutOfRangeError(OrdinalError):
    pass


@dataclass(frozen=True)
class RewriteResult:
    standalone_query: str
    disambiguated_product: str | None
    used_fallback: bool


def _ordinal_index(word: str) -> int:
    word = word.lower()
    if word in ORDINAL_WORDS:
        return ORDINAL_WORDS[word]
    digits = re.sub(r"(st|nd|rd|th)$", "", word)
    return int(digits)


def resolve_ordinal(reference: str, displayed: Sequence[str]) -> str:
    """Map an ordinal reference ("second product", "3rd one", "last") to a
    displayed product title."""
    match = _ORDINAL_TOKEN.search(reference)
    if match is None:
        raise NoOrdinalError(f"no ordinal reference in {reference!r}")
    if not displayed:
        raise OrdinalOutOfRangeError("no products are displayed")
    word = match.group(1)
    if word.lower() == "last":
        return displayed[-1]
    index = _ordinal_index(word)
    if index > len(displayed):
        raise OrdinalOutOfRangeError(
            f"ordinal {word!r} exceeds the {len(displayed)} displayed products"
        )
    return displayed[index - 1]


def extract_budget(text: str) -> int | None:
    """Budget stated with a keyword ("under 15,000") or as a bare number turn."""
    match = BUDGET_PHRASE.search(text) or _BARE_NUMBER.match(text)
    if match is None:
        return None
    return int(match.group(1).replace(",", ""))


def fallback_rewrite(
    query: str, history: Sequence[tuple[str, str]], displayed: Sequence[str] = ()
) -> str:
    """Deterministic degradation path for the LLM rewrite.

    Substitutes ordinal product references and appends the most recent budget
    from prior user turns as "... within <budget>" when the query itself has
    no number. Idempotent.
    """
    result = query
    phrase = _ORDINAL_PHRASE.search(result)
    if phrase is not None and displayed:
        try:
            title = resolve_ordinal(phrase.group(1), displayed)
        except OrdinalError:
            pass
        else:
            result = result[: phrase.start()] + title + result[phrase.end() :]

    if not _ANY_DIGIT.search(result):
        for user_text, _bot_text in reversed(history):
            budget = extract_budget(user_text)
            if budget is not None:
                result = f"{result} within {budget}"
                break

    return re.sub(r"\s+", " ", result).strip()


def _format_history(history: Sequence[tuple[str, str]]) -> str:
    lines = []
    for user_text, bot_text in history:
        lines.append(f"User: {user_text}")
        lines.append(f"Bot: {bot_text}")
    return "\n".join(lines) if lines else "(none)"


def _find_disambiguation(standalone: str, query: str, displayed: Sequence[str]) -> str | None:
    """A displayed title that the rewrite introduced counts as a disambiguation."""
    lowered_standalone = standalone.lower()
    lowered_query = query.lower()
    for title in displayed:
        lowered = title.lower()
        if lowered in lowered_standalone and lowered not in lowered_query:
            return title
    return None


def reformulate(
    query: str,
    history: Sequence[tuple[str, str]],
    displayed: Sequence[str],
    gateway: LLMGateway | None = None,
) -> RewriteResult:
    """Rewrite the current query into a standalone one.

    First turns pass through unchanged. Gateway failures never surface; the
    deterministic fallback takes over and is flagged in the result.
    """
    if not history or not query:
        return RewriteResult(standalone_query=query, disambiguated_product=None, used_fallback=False)

    standalone = ""
    used_fallback = False
    if gateway is not None:
        try:
            response = gateway.run(
                "saq.reformulate",
                {
                    "history": _format_history(history),
                    "displayed": "\n".join(displayed) if displayed else "(none)",
                    "query": query,
                },
            )
            standalone = response.text.strip()
        except GatewayError:
            standalone = ""

    if not standalone:
        standalone = fallback_rewrite(query, history, displayed)
        used_fallback = True

    return RewriteResult(
        standalone_query=standalone,
        disambiguated_product=_find_disambiguation(standalone, query, displayed),
        used_fallback=used_fallback,
    )
