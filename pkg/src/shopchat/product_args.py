"""Product-name resolution and direct responses.

Shoppers rarely type full product titles, so partial mentions are resolved
against the (up to eight) products suggested in the previous turn. The LLM
extraction template does the heavy lifting; a deterministic token-overlap
matcher takes over on gateway failure. Chitchat and general-knowledge
questions get brief neutral replies, backed by a bundled glossary when the
model is unavailable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .catalog import Catalog
from .gateway import GatewayError, LLMGateway
from .intent import IntentLabel
from .retrieval import sts_similarity, tokenize

RESOLVE_THRESHOLD = 0.3

_MENTION_SPLIT = re.compile(r"\b(?:and|vs\.?|versus|with)\b|,", re.IGNORECASE)
_GREETING = re.compile(
    r"^\s*(hi|hii+|hello|hey|heya|thanks|thank you|good (?:morning|afternoon|evening)|namaste)\b",
    re.IGNORECASE,
)

GREETING_REPLY = "Hello! I can help you find products, compare them, and answer questions about them."
UNKNOWN_REPLY = "I can best help with shopping questions: finding products, comparing them, offers, and order support."


@dataclass(frozen=True)
class ArgsResult:
    products: tuple[str, ...]
    direct_response: str | None = None
    # A comparison needs at least two resolved products.
    incomplete: bool = False


def _explicit_titles(saq: str, catalog: Catalog | None) -> list[str]:
    """Catalog titles that appear verbatim (case-insensitive) in the query,
    ordered by their position in the query."""
    if catalog is None:
        return []
    lowered = saq.lower()
    found = []
    for product in catalog.products.values():
        position = lowered.find(product.title.lower())
        if position >= 0:
            found.append((position, product.title))
    found.sort()
    return [title for _, title in found]


def _match_fragments(
    saq: str, intent: IntentLabel, suggested: Sequence[str], threshold: float
) -> list[str]:
    """Deterministic fallback matcher. Comparison queries are split into
    mention fragments on conjunctions so each fragment resolves at most one
    title; other intents treat the whole query as one mention."""
    if intent is IntentLabel.COMPARE_PRODUCTS:
        fragments = [f.strip() for f in _MENTION_SPLIT.split(saq) if f.strip()]
    else:
        fragments = [saq]

    resolved: list[str] = []
    for fragment in fragments:
        best_title = None
        best_score = 0.0
        for title in suggested:
            score = sts_similarity(fragment, title)
            if score > best_score:
                best_title, best_score = title, score
        if best_title is not None and best_score >= threshold and best_title not in resolved:
            resolved.append(best_title)
    return resolved


def resolve_products(
    saq: str,
    intent: IntentLabel,
    suggested: Sequence[str],
    gateway: LLMGateway | None = None,
    catalog: Catalog | None = None,
    threshold: float = RESOLVE_THRESHOLD,
) -> ArgsResult:
    """Resolve the full product titles a query refers to.

    Resolution is sound by construction: every returned title comes from the
    suggested list or is a catalog title spelled out in the query itself.
    Empty output means the caller should ask the shopper which product they
    mean.
    """
    resolved = _explicit_titles(saq, catalog)

    llm_titles: list[str] = []
    if gateway is not None:
        try:
            response = gateway.run(
                "args.extract",
                {
                    "intent": intent.value,
                    "suggested": "\n".join(suggested) if suggested else "(none)",
                    "query": saq,
                },
            )
            lines = [line.strip() for line in response.text.splitlines() if line.strip()]
            if lines != ["NONE"]:
                valid = set(suggested) | set(_explicit_titles(saq, catalog))
                llm_titles = [line for line in lines if line in valid]
        except GatewayError:
            llm_titles = _match_fragments(saq, intent, suggested, threshold)
    else:
        llm_titles = _match_fragments(saq, intent, suggested, threshold)

    for title in llm_titles:
        if title not in resolved:
            resolved.append(title)

    incomplete = intent is IntentLabel.COMPARE_PRODUCTS and len(resolved) < 2
    return ArgsResult(products=tuple(resolved), incomplete=incomplete)


def _glossary_lookup(saq: str, glossary: dict[str, str]) -> str | None:
    """Longest glossary term whose tokens all occur in the query."""
    query_tokens = set(tokenize(saq))
    best_term = None
    best_length = 0
    for term in glossary:
        term_tokens = tokenize(term)
        if term_tokens and set(term_tokens) <= query_tokens and len(term_tokens) > best_length:
            best_term, best_length = term, len(term_tokens)
    return glossary[best_term] if best_term is not None else None


def direct_response(
    saq: str,
    gateway: LLMGateway | None = None,
    glossary: dict[str, str] | None = None,
) -> str:
    """Brief, courteous, neutral reply for chitchat and general questions."""
    if gateway is not None:
        try:
            text = gateway.run("args.direct", {"query": saq}).text.strip()
            if text:
                return text
        except GatewayError:
            pass
    if _GREETING.search(saq):
        return GREETING_REPLY
    if glossary:
        definition = _glossary_lookup(saq, glossary)
        if definition is not None:
            return definition
    return UNKNOWN_REPLY
