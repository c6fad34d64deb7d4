"""Product Q&A: route a question to catalog specs or customer content, answer
from a reduced spec context, and summarize products on request.

Spec answering trims the product's specification list to the 20 entries most
relevant to the question before generation. When the model cannot answer (the
CANNOT_ANSWER sentinel, or any gateway failure), the reply degrades to a
template plus the top-3 FAQs and reviews for the question. Summaries are
validated against sentence caps: at most three positive-or-neutral sentences
and two negative ones, with excess truncated and flagged.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .catalog import Product
from .gateway import GatewayError, LLMGateway
from .retrieval import UGCSelection, reduce_context, tokenize, top_ugc

DEFAULT_CONTEXT_LIMIT = 20
DEFAULT_UGC_LIMIT = 3
MAX_POSITIVE_SENTENCES = 3
MAX_NEGATIVE_SENTENCES = 2

CANNOT_ANSWER_SENTINEL = "CANNOT_ANSWER"
NOT_ANSWERABLE_TEXT = (
    "I could not find that in the product details, but here is what customers say."
)

_EXIT_TERMS = frozenset({"show", "find", "search", "other", "others", "similar", "instead"})
_UGC_TERMS = frozenset(
    {
        "review",
        "reviews",
        "opinion",
        "opinions",
        "quality",
        "worth",
        "buyers",
        "users",
        "say",
        "think",
        "people",
        "experience",
        "feedback",
        "rating",
        "ratings",
        "complaints",
    }
)

_SENTENCE = re.compile(r"[^.!?]+[.!?]+|[^.!?]+$")


class QuestionRoute(str, Enum):
    CATALOG_SPECS = "catalog_specs"
    UGC = "ugc"
    EXIT_TO_MAIN = "exit_to_main"


@dataclass(frozen=True)
class DecisionAnswer:
    text: str
    not_answerable: bool
    sources: tuple[str, ...] = ()  # spec keys, or "faq:i" / "review:i" refs
    ugc: UGCSelection | None = None


@dataclass(frozen=True)
class ProductSummary:
    text: str
    positive_sentences: tuple[str, ...]
    negative_sentences: tuple[str, ...]
    truncated: bool = False


def route_question(saq: str, product: Product) -> QuestionRoute:
    """Decide whether a product question is answerable from specs, belongs to
    customer content, or signals a return to product discovery."""
    tokens = set(tokenize(saq))
    if tokens & _EXIT_TERMS:
        return QuestionRoute.EXIT_TO_MAIN
    if tokens & _UGC_TERMS:
        return QuestionRoute.UGC
    return QuestionRoute.CATALOG_SPECS


def _ugc_refs(selection: UGCSelection) -> tuple[str, ...]:
    refs = [f"faq:{i}" for i in range(len(selection.faqs))]
    refs += [f"review:{i}" for i in range(len(selection.reviews))]
    return tuple(refs)


def _format_ugc(selection: UGCSelection) -> str:
    lines = []
    if selection.faqs:
        lines.append("Top FAQs:")
        lines.extend(f"- Q: {faq.question} A: {faq.answer}" for faq in selection.faqs)
    if selection.reviews:
        lines.append("Top reviews:")
        lines.extend(f"- {review.text} ({review.rating}/5)" for review in selection.reviews)
    return "\n".join(lines)


def _not_answerable(saq: str, product: Product, ugc_limit: int) -> DecisionAnswer:
    selection = top_ugc(saq, product.reviews, product.faqs, k=ugc_limit)
    text = NOT_ANSWERABLE_TEXT
    formatted = _format_ugc(selection)
    if formatted:
        text = f"{text}\n{formatted}"
    return DecisionAnswer(
        text=text,
        not_answerable=True,
        sources=_ugc_refs(selection),
        ugc=selection,
    )


def answer_from_specs(
    saq: str,
    product: Product,
    gateway: LLMGateway | None = None,
    context_limit: int = DEFAULT_CONTEXT_LIMIT,
    ugc_limit: int = DEFAULT_UGC_LIMIT,
) -> DecisionAnswer:
    """Answer a question from the product's specifications.

    The context passed to the generator never exceeds `context_limit` specs.
    A product without specs, a CANNOT_ANSWER reply, or a gateway failure all
    yield the not-answerable template with customer content attached.
    """
    specs = list(product.specs.items())
    if not specs:
        return _not_answerable(saq, product, ugc_limit)

    reduced = reduce_context(saq, specs, context_limit)
    context = "\n".join(f"{key}: {value}" for key, value in reduced)
    try:
        if gateway is None:
            raise GatewayError("no gateway configured")
        text = gateway.run(
            "da.answer", {"product": product.title, "context": context, "query": saq}
        ).text.strip()
    except GatewayError:
        return _not_answerable(saq, product, ugc_limit)

    if not text or CANNOT_ANSWER_SENTINEL in text:
        return _not_answerable(saq, product, ugc_limit)
    return DecisionAnswer(
        text=text,
        not_answerable=False,
        sources=tuple(key for key, _ in reduced),
    )


def answer_from_ugc(saq: str, product: Product, ugc_limit: int = DEFAULT_UGC_LIMIT) -> DecisionAnswer:
    """Answer an experiential question from reviews and FAQs directly."""
    selection = top_ugc(saq, product.reviews, product.faqs, k=ugc_limit)
    formatted = _format_ugc(selection)
    if not formatted:
        return DecisionAnswer(
            text=f"There are no customer reviews or FAQs for {product.title} yet.",
            not_answerable=True,
            sources=(),
            ugc=selection,
        )
    return DecisionAnswer(
        text=f"Here is what customers say about {product.title}:\n{formatted}",
        not_answerable=False,
        sources=_ugc_refs(selection),
        ugc=selection,
    )


def split_sentences(text: str) -> list[str]:
    return [segment.strip() for segment in _SENTENCE.findall(text) if segment.strip()]


def sentence_is_negative(sentence: str, lexicon: dict[str, Sequence[str]]) -> bool:
    """A sentence counts as negative when negative cues outnumber positive
    ones; everything else is positive-or-neutral."""
    tokens = set(tokenize(sentence))
    positive = len(tokens & set(lexicon.get("positive", ())))
    negative = len(tokens & set(lexicon.get("negative", ())))
    return negative > positive


def enforce_summary_caps(
    text: str,
    lexicon: dict[str, Sequence[str]],
    max_positive: int = MAX_POSITIVE_SENTENCES,
    max_negative: int = MAX_NEGATIVE_SENTENCES,
) -> ProductSummary:
    """Validate a generated summary against the sentence caps, truncating
    excess sentences in order and flagging the violation."""
    positive: list[str] = []
    negative: list[str] = []
    kept: list[str] = []
    truncated = False
    for sentence in split_sentences(text):
        if sentence_is_negative(sentence, lexicon):
            if len(negative) >= max_negative:
                truncated = True
                continue
            negative.append(sentence)
        else:
            if len(positive) >= max_positive:
                truncated = True
                continue
            positive.append(sentence)
        kept.append(sentence)
    return ProductSummary(
        text=" ".join(kept),
        positive_sentences=tuple(positive),
        negative_sentences=tuple(negative),
        truncated=truncated,
    )


def _fallback_summary(saq: str, product: Product, context_limit: int) -> str:
    reduced = reduce_context(saq, list(product.specs.items()), min(3, context_limit))
    highlights = "; ".join(f"{key} {value}" for key, value in reduced)
    text = f"{product.title}: {highlights}." if highlights else f"{product.title}."
    low = [r for r in product.reviews if r.rating <= 2]
    if low:
        text += f" Some buyers report problems: {low[0].text.rstrip('.')}."
    return text


def summarize_product(
    saq: str,
    product: Product,
    gateway: LLMGateway | None = None,
    lexicon: dict[str, Sequence[str]] | None = None,
    context_limit: int = DEFAULT_CONTEXT_LIMIT,
) -> ProductSummary:
    """Summarize a product for the query from its name, specs, and reviews."""
    lexicon = lexicon or {}
    specs = list(product.specs.items())
    reduced = reduce_context(saq, specs, context_limit) if specs else []
    context = "\n".join(f"{key}: {value}" for key, value in reduced)
    reviews = "\n".join(f"- {r.text} ({r.rating}/5)" for r in product.reviews[:5]) or "(none)"
    try:
        if gateway is None:
            raise GatewayError("no gateway configured")
        text = gateway.run(
            "summarize.product",
            {"product": product.title, "query": saq, "context": context, "reviews": reviews},
        ).text.strip()
        if not text:
            raise GatewayError("empty summary")
    except GatewayError:
        text = _fallback_summary(saq, product, context_limit)
    return enforce_summary_caps(text, lexicon)
