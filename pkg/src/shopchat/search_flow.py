"""Product discovery: query cleanup, store classification, search, follow-ups.

Follow-up questions are generated deterministically from the facets of the
current result set, which keeps every suggestion grounded in products the
shopper can actually see. A budget question takes precedence while no budget
is known; each search thread asks at most `followup_cap` questions and never
repeats a facet, and switching category starts a fresh thread.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

from .catalog import Catalog, Product, compute_facets
from .retrieval import SearchIndex, tokenize
from .rewrite import BUDGET_PHRASE

if TYPE_CHECKING:
    from .session import SessionContext

DEFAULT_FOLLOWUP_CAP = 3
DEFAULT_RESULT_LIMIT = 24
DEFAULT_DISPLAY_LIMIT = 8
MAX_SUGGESTIONS = 5

BUDGET_FACET = "budget"
BUDGET_QUESTION = "What budget do you have in mind?"

_FILLER_PHRASES = (
    "show me",
    "i am looking for",
    "i'm looking for",
    "im looking for",
    "looking for",
    "i want to buy",
    "i want",
    "i need",
    "find me",
    "search for",
    "can you",
    "please",
)


@dataclass(frozen=True)
class CleanQuery:
    text: str
    max_price: int | None = None
    category_hint: str | None = None


@dataclass(frozen=True)
class FollowUp:
    question: str
    facet: str
    suggestions: tuple[str, ...] = ()


@dataclass(frozen=True)
class SearchOutcome:
    all_results: tuple[str, ...]  # product ids, at most 24
    displayed: tuple[str, ...]  # prefix of all_results, at most 8
    follow_up: FollowUp | None = None


def cleanup_query(saq: str, categories: Sequence[str] = ()) -> CleanQuery:
    """Normalize a standalone query for search: lift budget phrases into a
    price filter, strip filler, collapse whitespace."""
    max_price: int | None = None
    match = BUDGET_PHRASE.search(saq)
    if match is not None:
        max_price = int(match.group(1).replace(",", ""))
    text = BUDGET_PHRASE.sub(" ", saq)

    for phrase in _FILLER_PHRASES:
        text = re.sub(rf"\b{re.escape(phrase)}\b", " ", text, flags=re.IGNORECASE)
    text = re.sub(r"\s+", " ", text).strip(" ,.?!")
    if not text and saq:
        text = re.sub(r"\s+", " ", saq).strip()

    category_hint = None
    tokens = set(tokenize(text))
    for category in categories:
        lowered = category.lower()
        if lowered in tokens or (lowered.endswith("s") and lowered[:-1] in tokens):
            category_hint = category
            break

    return CleanQuery(text=text, max_price=max_price, category_hint=category_hint)


def classify_store(
    saq: str, catalog: Catalog, keywords: dict[str, Sequence[str]] | None = None
) -> str | None:
    """Keyword-overlap store classifier.

    The static per-category lexicon is augmented with brand tokens that occur
    in exactly one category of the loaded catalog. Returns the best-overlap
    category, ties broken alphabetically; None when nothing overlaps.
    """
    lexicons: dict[str, set[str]] = {
        category: set(words) for category, words in (keywords or {}).items()
    }
    brand_categories: dict[str, set[str]] = {}
    for product in catalog.products.values():
        for token in tokenize(product.brand):
            brand_categories.setdefault(token, set()).add(product.category)
    for token, cats in brand_categories.items():
        if len(cats) == 1:
            lexicons.setdefault(next(iter(cats)), set()).add(token)

    query_tokens = set(tokenize(saq))
    best_category = None
    best_score = 0
    for category in sorted(lexicons):
        score = len(query_tokens & lexicons[category])
        if score > best_score:
            best_category, best_score = category, score
    return best_category


def _result_category(products: Sequence[Product]) -> str | None:
    if not products:
        return None
    counts = Counter(p.category for p in products)
    return sorted(counts.items(), key=lambda item: (-item[1], item[0]))[0][0]


def generate_followup(
    session: "SessionContext",
    results: Sequence[Product],
    price_filtered: bool = False,
    followup_cap: int = DEFAULT_FOLLOWUP_CAP,
) -> FollowUp | None:
    """Pick the next clarifying question for a result set, or None.

    Budget comes first when unknown; otherwise the highest-coverage facet of
    the results' category that has not been asked in this thread and has at
    least two distinct values among the results. Suggestions are the most
    frequent values in the results (so they are always purchasable), capped
    at five. Returns None once the thread has used its question budget.
    """
    if not results:
        return None
    if session.followups_issued >= followup_cap:
        return None

    if (
        session.known_budget is None
        and not price_filtered
        and BUDGET_FACET not in session.asked_facets
    ):
        prices = sorted({p.price for p in results})[:MAX_SUGGESTIONS]
        session.asked_facets.add(BUDGET_FACET)
        session.followups_issued += 1
        return FollowUp(
            question=BUDGET_QUESTION,
            facet=BUDGET_FACET,
            suggestions=tuple(str(price) for price in prices),
        )

    category = _result_category(results)
    if category is None:
        return None
    for facet in compute_facets(results, category, max_features=10_000):
        if facet.feature in session.asked_facets:
            continue
        if len(facet.values) < 2:
            continue
        suggestions = tuple(v.value for v in facet.values[:MAX_SUGGESTIONS])
        session.asked_facets.add(facet.feature)
        session.followups_issued += 1
        return FollowUp(
            question=f"Any particular {facet.feature.lower()} you are looking for?",
            facet=facet.feature,
            suggestions=suggestions,
        )
    return None


def run_search(
    session: "SessionContext",
    clean: CleanQuery,
    catalog: Catalog,
    index: SearchIndex,
    store_keywords: dict[str, Sequence[str]] | None = None,
    result_limit: int = DEFAULT_RESULT_LIMIT,
    display_limit: int = DEFAULT_DISPLAY_LIMIT,
    followup_cap: int = DEFAULT_FOLLOWUP_CAP,
) -> SearchOutcome:
    """Execute one search turn and update the session's displayed products.

    A category change relative to the previous search resets the thread's
    asked-facet history and question count (context shift).
    """
    from .session import DisplayedProduct

    category = classify_store(clean.text, catalog, store_keywords) or clean.category_hint
    if clean.max_price is not None:
        session.known_budget = clean.max_price

    hits = index.search(clean.text, category=category, max_price=clean.max_price, k=result_limit)
    products = [catalog.products[hit.item_id] for hit in hits]

    session.displayed = [
        DisplayedProduct(product_id=p.id, title=p.title, visible=i < display_limit)
        for i, p in enumerate(products)
    ]
    if not products:
        return SearchOutcome(all_results=(), displayed=(), follow_up=None)

    result_category = _result_category(products)
    if result_category != session.last_search_category:
        session.asked_facets = set()
        session.followups_issued = 0
        session.last_search_category = result_category

    follow_up = generate_followup(
        session,
        products,
        price_filtered=clean.max_price is not None,
        followup_cap=followup_cap,
    )
    all_ids = tuple(p.id for p in products)
    return SearchOutcome(
        all_results=all_ids,
        displayed=all_ids[:display_limit],
        follow_up=follow_up,
    )
