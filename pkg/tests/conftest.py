"""Shared fixtures: catalogs, gateways, and a fully wired assistant."""

from __future__ import annotations

import random

import pytest

from shopchat.catalog import Catalog, Product, compute_facets
from shopchat.config import AppConfig
from shopchat.gateway import LLMGateway, MockBackend, MockRule
from shopchat.orchestrator import ShoppingAssistant


def build_catalog(products: list[Product], categories: tuple[str, ...] | None = None) -> Catalog:
    """Assemble a Catalog directly from Product objects (tests only)."""
    if categories is None:
        categories = tuple(dict.fromkeys(p.category for p in products))
    product_map = {p.id: p for p in products}
    facets = {
        category: tuple(compute_facets(products, category, max_features=10_000))
        for category in categories
        if any(p.category == category for p in products)
    }
    return Catalog(products=product_map, categories=categories, facets=facets)


def make_product(
    pid: str,
    title: str,
    category: str = "Mobiles",
    brand: str = "Acme",
    price: int = 9999,
    specs: dict[str, str] | None = None,
    **kwargs,
) -> Product:
    return Product(
        id=pid,
        title=title,
        brand=brand,
        category=category,
        price=price,
        specs=specs or {},
        **kwargs,
    )


def random_catalog(rng: random.Random, n_products: int = 20, categories=("Mobiles", "Clothing")) -> Catalog:
    """Random but reproducible catalog for property tests."""
    features = ["Color", "Size", "RAM", "Battery", "Material", "Weight", "Display"]
    value_pool = {
        "Color": ["Black", "Blue", "Green", "Gold", "Red"],
        "Size": ["S", "M", "L", "XL"],
        "RAM": ["4 GB", "6 GB", "8 GB"],
        "Battery": ["4000 mAh", "5000 mAh", "6000 mAh"],
        "Material": ["Cotton", "Polyester", "Wool"],
        "Weight": ["Light", "Medium", "Heavy"],
        "Display": ["HD", "FHD", "AMOLED"],
    }
    words = ["alpha", "bravo", "carbon", "delta", "echo", "fox", "gleam", "halo", "iris", "jolt"]
    products = []
    for i in range(n_products):
        category = rng.choice(categories)
        specs = {}
        for feature in rng.sample(features, k=rng.randint(2, 5)):
            specs[feature] = rng.choice(value_pool[feature])
        title = f"{rng.choice(words).title()} {rng.choice(words)} {i}"
        products.append(
            make_product(
                f"P{i:03d}",
                title,
                category=category,
                brand=rng.choice(words).title(),
                price=rng.randrange(500, 30_000, 250),
                specs=specs,
            )
        )
    return build_catalog(products, tuple(categories))


def mock_gateway(*rules: tuple[str, str, str]) -> LLMGateway:
    """Gateway over a scripted mock; rules are (template_id, contains, response)."""
    backend = MockBackend([MockRule(template_id=t, contains=c, response=r) for t, c, r in rules])
    return LLMGateway(backend)


@pytest.fixture
def app_config() -> AppConfig:
    return AppConfig()


@pytest.fixture
def assistant(app_config) -> ShoppingAssistant:
    """Assistant over the bundled sample catalog, rules, and mock script."""
    return ShoppingAssistant.from_config(app_config)
