"""Deterministic lexical retrieval and similarity.

BM25 over a concatenated title+brand+spec-values field stands in for the
platform search service; token-multiset cosine stands in for the learned
semantic-similarity model. Both are pure and deterministic so pipeline runs
are reproducible. A learned scorer can be plugged in wherever a similarity
callable is accepted.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Sequence, TypeVar

from .catalog import FAQ, Catalog, Product, Review

# BM25 parameters are fixed; with this idf form scores are always >= 0.
BM25_K1 = 1.2
BM25_B = 0.75

_COMMA_IN_NUMBER = re.compile(r"(?<=\d),(?=\d)")
_TOKEN = re.compile(r"[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    """Lowercase alphanumeric tokens; digit groups like "15,000" collapse to "15000"."""
    return _TOKEN.findall(_COMMA_IN_NUMBER.sub("", text.lower()))


@dataclass(frozen=True)
class ScoredItem:
    item_id: str
    score: float


def _product_text(product: Product) -> str:
    return " ".join([product.title, product.brand, *product.specs.values()])


class SearchIndex:
    """BM25 index over a catalog. Corpus statistics (df, avgdl, N) are computed
    over the full catalog; filters narrow the candidate set at query time."""

    def __init__(self, catalog: Catalog) -> None:
        self._products = list(catalog.products.values())
        self._tokens = [tokenize(_product_text(p)) for p in self._products]
        self._tf = [Counter(tokens) for tokens in self._tokens]
        self._doc_len = [len(tokens) for tokens in self._tokens]
        self._n = len(self._products)
        self._avgdl = sum(self._doc_len) / self._n if self._n else 0.0
        df: Counter[str] = Counter()
        for tf in self._tf:
            for term in tf:
                df[term] += 1
        self._idf = {
            term: math.log((self._n - count + 0.5) / (count + 0.5) + 1.0)
            for term, count in df.items()
        }

    def search(
        self,
        query: str,
        category: str | None = None,
        max_price: int | None = None,
        k: int = 24,
    ) -> list[ScoredItem]:
        """Top-k products by BM25 score, restricted to the given filters.
        Zero-score products are excluded; ties keep catalog order."""
        if k < 1:
            raise ValueError("k must be >= 1")
        query_tokens = tokenize(query)
        if not query_tokens or not self._n:
            return []

        hits: list[ScoredItem] = []
        for index, product in enumerate(self._products):
            if category is not None and product.category != category:
                continue
            if max_price is not None and product.price > max_price:
                continue
            tf = self._tf[index]
            norm = BM25_K1 * (1 - BM25_B + BM25_B * self._doc_len[index] / self._avgdl)
            score = 0.0
            for term in query_tokens:
                freq = tf.get(term, 0)
                if not freq:
                    continue
                score += self._idf[term] * freq * (BM25_K1 + 1) / (freq + norm)
            if score > 0.0:
                hits.append(ScoredItem(item_id=product.id, score=score))

        hits.sort(key=lambda hit: -hit.score)  # stable: ties keep catalog order
        return hits[:k]


def search(
    catalog: Catalog,
    query: str,
    filters: dict | None = None,
    k: int = 24,
) -> list[ScoredItem]:
    """One-shot search; builds a throwaway index. Long-lived callers should
    hold a SearchIndex instead."""
    filters = filters or {}
    return SearchIndex(catalog).search(
        query, category=filters.get("category"), max_price=filters.get("max_price"), k=k
    )


def sts_similarity(a: str, b: str) -> float:
    """Cosine similarity over token multisets, in [0, 1]. Symmetric;
    0 if either side has no tokens; exactly 1 for identical token multisets."""
    counts_a = Counter(tokenize(a))
    counts_b = Counter(tokenize(b))
    if not counts_a or not counts_b:
        return 0.0
    if counts_a == counts_b:
        return 1.0
    dot = sum(count * counts_b[token] for token, count in counts_a.items())
    norm_a = math.sqrt(sum(count * count for count in counts_a.values()))
    norm_b = math.sqrt(sum(count * count for count in counts_b.values()))
    return dot / (norm_a * norm_b)


Item = TypeVar("Item")


def reduce_context(
    query: str, items: Sequence[tuple[str, str]], k: int
) -> list[tuple[str, str]]:
    """Keep the k (key, text) items most similar to the query.

    Output is ranked by similarity, ties in original order; if there are at
    most k items they all come back in original order.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(items) <= k:
        return list(items)
    scored = [
        (sts_similarity(query, f"{key} {text}"), index)
        for index, (key, text) in enumerate(items)
    ]
    order = sorted(range(len(items)), key=lambda i: (-scored[i][0], i))
    return [items[i] for i in order[:k]]


@dataclass(frozen=True)
class UGCSelection:
    faqs: tuple[FAQ, ...]
    reviews: tuple[Review, ...]


def top_ugc(
    query: str,
    reviews: Sequence[Review],
    faqs: Sequence[FAQ],
    k: int = 3,
) -> UGCSelection:
    """Independently pick the top-k FAQs and reviews most relevant to the query."""
    if k < 1:
        raise ValueError("k must be >= 1")
    faq_order = sorted(
        range(len(faqs)),
        key=lambda i: (-sts_similarity(query, f"{faqs[i].question} {faqs[i].answer}"), i),
    )
    review_order = sorted(
        range(len(reviews)),
        key=lambda i: (-sts_similarity(query, reviews[i].text), i),
    )
    return UGCSelection(
        faqs=tuple(faqs[i] for i in faq_order[:k]),
        reviews=tuple(reviews[i] for i in review_order[:k]),
    )
