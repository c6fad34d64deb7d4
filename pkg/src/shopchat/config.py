"""Application configuration.

A JSON config file selects the catalog, rulesets, LLM backend, and tunable
caps; every path defaults to the bundled data files so the engine runs out of
the box. Secrets come from the environment, never from the file.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path

API_KEY_ENV = "SHOPCHAT_API_KEY"


def data_path(name: str) -> Path:
    """Path of a bundled data file."""
    return Path(str(resources.files("shopchat").joinpath("data", name)))


@dataclass
class HttpProviderConfig:
    base_url: str = "http://localhost:8080/v1/chat/completions"
    model: str = "default"
    timeout: float = 30.0


@dataclass
class AppConfig:
    catalog_path: str = ""
    ruleset_path: str = ""
    store_keywords_path: str = ""
    glossary_path: str = ""
    platform_faqs_path: str = ""
    promotions_path: str = ""
    sentiment_lexicon_path: str = ""
    mock_script_path: str = ""
    backend: str = "mock"  # mock | http
    http: HttpProviderConfig = field(default_factory=HttpProviderConfig)
    followup_cap: int = 3
    context_limit: int = 20
    ugc_limit: int = 3
    result_limit: int = 24
    display_limit: int = 8
    resolve_threshold: float = 0.3
    answerability_theta: float = 0.5
    session_ttl_seconds: float = 7200.0
    journal_path: str | None = None

    def __post_init__(self) -> None:
        defaults = {
            "catalog_path": "sample_catalog.jsonl",
            "ruleset_path": "intent_rules.jsonl",
            "store_keywords_path": "store_keywords.json",
            "glossary_path": "glossary.json",
            "platform_faqs_path": "platform_faqs.jsonl",
            "promotions_path": "promotions.jsonl",
            "sentiment_lexicon_path": "sentiment_lexicon.json",
            "mock_script_path": "mock_script.jsonl",
        }
        for attr, bundled in defaults.items():
            if not getattr(self, attr):
                setattr(self, attr, str(data_path(bundled)))

    @property
    def api_key(self) -> str | None:
        return os.environ.get(API_KEY_ENV)


def load_config(path: str | Path | None = None) -> AppConfig:
    """Load config from a JSON file; missing keys keep their defaults."""
    if path is None:
        return AppConfig()
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    http_raw = raw.pop("http", {})
    known = {f.name for f in fields(AppConfig) if f.name != "http"}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    config = AppConfig(**raw)
    for key, value in http_raw.items():
        if not hasattr(config.http, key):
            raise ValueError(f"unknown http config key: {key}")
        setattr(config.http, key, value)
    return config
