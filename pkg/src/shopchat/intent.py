"""Coarse intent classification used purely as a routing signal.

The baseline is an ordered rule cascade over a line-delimited rule file:
highest-priority matching rule group wins, ties resolved by file order.
Anything that matches nothing is treated as a product search; non-shopping
queries are caught by explicit not_applicable patterns. The classifier
interface is pluggable so a trained model can replace the rules via config.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Protocol, Sequence

from .gateway import GatewayError, LLMGateway


class IntentLabel(str, Enum):
    ANSWER_PRODUCT_SPECIFIC_QUESTIONS = "answer_product_specific_questions"
    SEARCH_FOR_PRODUCTS = "search_for_products"
    COMPARE_PRODUCTS = "compare_products"
    RETURN_DIRECT_RESPONSE = "return_direct_response"
    ANSWER_OFFER_RELATED_QUESTIONS = "answer_offer_related_questions"
    POST_PURCHASE = "post_purchase"
    GET_ANSWER_FROM_FAQ = "get_answer_from_faq"
    NOT_APPLICABLE = "not_applicable"


class RulesetError(Exception):
    """Raised for malformed rule files."""


@dataclass(frozen=True)
class IntentRule:
    id: str
    intent: IntentLabel
    patterns: tuple[re.Pattern, ...]
    priority: int
    # Context-only rules fire only when products are on screen; they catch
    # elliptical questions like "what colour is it?".
    requires_context: bool = False

    def matches(self, text: str) -> bool:
        return any(pattern.search(text) for pattern in self.patterns)


@dataclass(frozen=True)
class ClassifyContext:
    has_displayed_products: bool = False


@dataclass(frozen=True)
class IntentPrediction:
    label: IntentLabel
    confidence: float
    matched_rules: tuple[str, ...] = ()


def load_ruleset(path: str | Path) -> tuple[IntentRule, ...]:
    """Load ordered rules from a line-delimited file of
    {id, intent, patterns, priority[, requires_context]} records."""
    rules: list[IntentRule] = []
    seen: set[str] = set()
    with Path(path).open("r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise RulesetError(f"line {line_no}: invalid JSON ({exc.msg})") from exc
            rule_id = raw.get("id")
            if not rule_id:
                raise RulesetError(f"line {line_no}: missing rule id")
            if rule_id in seen:
                raise RulesetError(f"line {line_no}: duplicate rule id {rule_id!r}")
            seen.add(rule_id)
            try:
                intent = IntentLabel(raw["intent"])
            except (KeyError, ValueError) as exc:
                raise RulesetError(f"line {line_no}: unknown intent {raw.get('intent')!r}") from exc
            raw_patterns = raw.get("patterns")
            if not isinstance(raw_patterns, list) or not raw_patterns:
                raise RulesetError(f"line {line_no}: rule {rule_id!r} needs a non-empty pattern list")
            patterns = []
            for raw_pattern in raw_patterns:
                if not raw_pattern:
                    raise RulesetError(f"line {line_no}: rule {rule_id!r} has an empty pattern")
                try:
                    patterns.append(re.compile(raw_pattern, re.IGNORECASE))
                except re.error as exc:
                    raise RulesetError(
                        f"line {line_no}: rule {rule_id!r} pattern {raw_pattern!r} is malformed ({exc})"
                    ) from exc
            priority = raw.get("priority")
            if not isinstance(priority, int):
                raise RulesetError(f"line {line_no}: rule {rule_id!r} priority must be an integer")
            rules.append(
                IntentRule(
                    id=rule_id,
                    intent=intent,
                    patterns=tuple(patterns),
                    priority=priority,
                    requires_context=bool(raw.get("requires_context", False)),
                )
            )
    return tuple(rules)


def classify(
    saq: str,
    context: ClassifyContext | None = None,
    ruleset: Sequence[IntentRule] = (),
) -> IntentPrediction:
    """Apply the rule cascade. Total: every input maps to exactly one label;
    unmatched queries default to search_for_products."""
    context = context or ClassifyContext()
    matched = [
        rule
        for rule in ruleset
        if (not rule.requires_context or context.has_displayed_products) and rule.matches(saq)
    ]
    if not matched:
        return IntentPrediction(label=IntentLabel.SEARCH_FOR_PRODUCTS, confidence=0.5)
    best = max(matched, key=lambda rule: rule.priority)  # max is stable: first of equal priorities
    return IntentPrediction(
        label=best.intent,
        confidence=0.9,
        matched_rules=tuple(rule.id for rule in matched),
    )


class IntentClassifier(Protocol):
    def classify(self, saq: str, context: ClassifyContext) -> IntentPrediction: ...


@dataclass(frozen=True)
class RuleClassifier:
    """The deterministic baseline, packaged behind the pluggable interface."""

    ruleset: tuple[IntentRule, ...]

    def classify(self, saq: str, context: ClassifyContext) -> IntentPrediction:
        return classify(saq, context, self.ruleset)


@dataclass
class LLMClassifier:
    """LLM-backed classifier; falls back to the rule baseline when the model
    is unavailable or answers outside the label set."""

    gateway: LLMGateway
    fallback: RuleClassifier = field(default_factory=lambda: RuleClassifier(ruleset=()))

    def classify(self, saq: str, context: ClassifyContext) -> IntentPrediction:
        try:
            response = self.gateway.run("intent.classify", {"query": saq})
            label = IntentLabel(response.text.strip().lower())
        except (GatewayError, ValueError):
            return self.fallback.classify(saq, context)
        return IntentPrediction(label=label, confidence=0.9)
