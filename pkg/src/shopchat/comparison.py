"""Multi-product comparison: query-relevant spec reduction per product, a
comparison summary, and a single-sentence verdict.

The summary and verdict are two separate generative calls because the verdict
is conditioned on the finished summary. Output validation guarantees the
verdict is exactly one sentence and that every compared product is named
somewhere in the result, whatever the model emitted.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .catalog import Product
from .gateway import GatewayError, LLMGateway
from .retrieval import reduce_context

DEFAULT_CONTEXT_LIMIT = 20

_TERMINATOR = re.compile(r"[.!?]")


class IncompleteCompareError(ValueError):
    """Fewer than two products to compare; the caller should ask which ones."""


@dataclass(frozen=True)
class ComparisonResult:
    summary: str
    verdict: str
    per_product_context: dict[str, dict[str, str]]
    truncated_verdict: bool = False


def enforce_single_sentence(text: str) -> tuple[str, bool]:
    """Trim a verdict to its first sentence; add a terminator if none exists.
    Returns (verdict, truncated)."""
    text = text.strip()
    match = _TERMINATOR.search(text)
    if match is None:
        return (f"{text}." if text else text), False
    end = match.end()
    remainder = text[end:].strip()
    return text[:end], bool(remainder)


def _context_block(title: str, specs: dict[str, str]) -> str:
    lines = [f"{title}:"]
    lines.extend(f"  {key}: {value}" for key, value in specs.items())
    return "\n".join(lines)


def _fallback_summary(per_product: dict[str, dict[str, str]]) -> str:
    return "\n".join(_context_block(title, specs) for title, specs in per_product.items())


def compare(
    saq: str,
    products: Sequence[Product],
    gateway: LLMGateway | None = None,
    context_limit: int = DEFAULT_CONTEXT_LIMIT,
) -> ComparisonResult:
    """Compare two or more resolved products for the query."""
    if len(products) < 2:
        raise IncompleteCompareError("need at least two products to compare")

    per_product: dict[str, dict[str, str]] = {}
    for product in products:
        reduced = reduce_context(saq, list(product.specs.items()), context_limit)
        per_product[product.title] = dict(reduced)

    context = "\n\n".join(_context_block(t, s) for t, s in per_product.items())
    try:
        if gateway is None:
            raise GatewayError("no gateway configured")
        summary = gateway.run("compare.summarize", {"query": saq, "context": context}).text.strip()
        if not summary:
            raise GatewayError("empty summary")
    except GatewayError:
        summary = _fallback_summary(per_product)

    try:
        if gateway is None:
            raise GatewayError("no gateway configured")
        raw_verdict = gateway.run("compare.verdict", {"query": saq, "summary": summary}).text.strip()
        if not raw_verdict:
            raise GatewayError("empty verdict")
    except GatewayError:
        raw_verdict = f"{products[0].title} looks like the stronger fit for this question."

    verdict, truncated = enforce_single_sentence(raw_verdict)

    missing = [t for t in per_product if t not in summary and t not in verdict]
    if missing:
        summary = f"Comparing {' and '.join(per_product)}.\n{summary}"

    return ComparisonResult(
        summary=summary,
        verdict=verdict,
        per_product_context=per_product,
        truncated_verdict=truncated,
    )
