"""Product catalog: loading, validation, lookup, and per-category facet derivation.

The catalog is a line-delimited file (one JSON product record per line, schema
in docs/format.md). It is immutable after load, so concurrent reads need no
locking; reloading produces a fresh Catalog object.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

# Store categories ("business units") served by default. Extensible via the
# `categories` argument of load_catalog / app config.
DEFAULT_CATEGORIES = (
    "Mobiles",
    "Clothing",
    "Large",
    "BGM",
    "Home",
    "Furniture",
    "Electronics",
)


class CatalogError(Exception):
    """Raised for malformed catalog files or invalid product records."""


class ProductNotFoundError(KeyError):
    """Raised when a product id is not present in the catalog."""


@dataclass(frozen=True)
class Review:
    text: str
    rating: int


@dataclass(frozen=True)
class FAQ:
    question: str
    answer: str


@dataclass(frozen=True)
class Offer:
    description: str
    active: bool


@dataclass(frozen=True)
class Product:
    """One catalog entry. `price` is in minor currency units (integer)."""

    id: str
    title: str
    brand: str
    category: str
    price: int
    specs: dict[str, str] = field(default_factory=dict)
    reviews: tuple[Review, ...] = ()
    faqs: tuple[FAQ, ...] = ()
    offers: tuple[Offer, ...] = ()


@dataclass(frozen=True)
class FacetValue:
    value: str
    count: int


@dataclass(frozen=True)
class Facet:
    """A product feature with its popular values within one category."""

    category: str
    feature: str
    values: tuple[FacetValue, ...]


@dataclass(frozen=True)
class Catalog:
    products: dict[str, Product]
    categories: tuple[str, ...]
    facets: dict[str, tuple[Facet, ...]]

    def __len__(self) -> int:
        return len(self.products)


def _parse_record(raw: dict, categories: Sequence[str], line_no: int) -> Product:
    try:
        pid = raw["id"]
        title = raw["title"]
        brand = raw["brand"]
        category = raw["category"]
        price = raw["price"]
    except KeyError as exc:
        raise CatalogError(f"line {line_no}: missing required field {exc}") from exc

    if not isinstance(pid, str) or not pid:
        raise CatalogError(f"line {line_no}: id must be a non-empty string")
    if not isinstance(title, str) or not title:
        raise CatalogError(f"line {line_no}: title must be a non-empty string")
    if not isinstance(brand, str):
        raise CatalogError(f"line {line_no}: brand must be a string")
    if category not in categories:
        raise CatalogError(f"line {line_no}: unknown category {category!r}")
    if not isinstance(price, int) or isinstance(price, bool) or price < 0:
        raise CatalogError(f"line {line_no}: price must be a non-negative integer")

    specs = raw.get("specs", {})
    if not isinstance(specs, dict):
        raise CatalogError(f"line {line_no}: specs must be an object")
    for key, value in specs.items():
        if not key:
            raise CatalogError(f"line {line_no}: empty spec key")
        if not isinstance(value, str):
            raise CatalogError(f"line {line_no}: spec {key!r} value must be a string")

    reviews = []
    for item in raw.get("reviews", []):
        rating = item.get("rating")
        if not isinstance(rating, int) or not 1 <= rating <= 5:
            raise CatalogError(f"line {line_no}: review rating must be an integer in [1, 5]")
        reviews.append(Review(text=item.get("text", ""), rating=rating))

    faqs = [FAQ(question=item["question"], answer=item["answer"]) for item in raw.get("faqs", [])]
    offers = [
        Offer(description=item["description"], active=bool(item.get("active", True)))
        for item in raw.get("offers", [])
    ]

    return Product(
        id=pid,
        title=title,
        brand=brand,
        category=category,
        price=price,
        specs=dict(specs),
        reviews=tuple(reviews),
        faqs=tuple(faqs),
        offers=tuple(offers),
    )


def load_catalog(path: str | Path, categories: Sequence[str] = DEFAULT_CATEGORIES) -> Catalog:
    """Load and validate a line-delimited catalog file.

    Raises CatalogError naming the offending line for malformed records,
    duplicate ids, and unknown categories.
    """
    path = Path(path)
    products: dict[str, Product] = {}
    with path.open("r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CatalogError(f"line {line_no}: invalid JSON ({exc.msg})") from exc
            if not isinstance(raw, dict):
                raise CatalogError(f"line {line_no}: record must be a JSON object")
            product = _parse_record(raw, categories, line_no)
            if product.id in products:
                raise CatalogError(f"line {line_no}: duplicate product id {product.id!r}")
            products[product.id] = product

    facets = {
        category: tuple(compute_facets(list(products.values()), category, max_features=10_000))
        for category in categories
        if any(p.category == category for p in products.values())
    }
    return Catalog(products=products, categories=tuple(categories), facets=facets)


def serialize_catalog(catalog: Catalog, path: str | Path) -> None:
    """Write the catalog back out in the line-delimited format (load round-trips)."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as handle:
        for product in catalog.products.values():
            record = {
                "id": product.id,
                "title": product.title,
                "brand": product.brand,
                "category": product.category,
                "price": product.price,
                "specs": product.specs,
                "reviews": [{"text": r.text, "rating": r.rating} for r in product.reviews],
                "faqs": [{"question": f.question, "answer": f.answer} for f in product.faqs],
                "offers": [{"description": o.description, "active": o.active} for o in product.offers],
            }
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")


def get_product(catalog: Catalog, product_id: str) -> Product:
    """Look up a product by id. Ids are case-sensitive opaque strings."""
    try:
        return catalog.products[product_id]
    except KeyError:
        raise ProductNotFoundError(product_id) from None


def compute_facets(
    products: Iterable[Product], category: str, max_features: int
) -> list[Facet]:
    """Derive the most popular facets for one category.

    Features are ranked by coverage (how many of the category's products carry
    the feature), ties broken by feature name ascending. Values within a facet
    are ranked by count descending, ties by value ascending. Pure function of
    the product list; unknown categories yield an empty list.
    """
    if max_features < 1:
        raise ValueError("max_features must be >= 1")
    in_category = [p for p in products if p.category == category]
    if not in_category:
        return []

    coverage: Counter[str] = Counter()
    for product in in_category:
        for feature in product.specs:
            coverage[feature] += 1

    ranked = sorted(coverage.items(), key=lambda item: (-item[1], item[0]))
    facets = []
    for feature, _ in ranked[:max_features]:
        counts: Counter[str] = Counter(
            p.specs[feature] for p in in_category if feature in p.specs
        )
        values = tuple(
            FacetValue(value=value, count=count)
            for value, count in sorted(counts.items(), key=lambda item: (-item[1], item[0]))
        )
        facets.append(Facet(category=category, feature=feature, values=values))
    return facets
