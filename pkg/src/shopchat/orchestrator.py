"""Pipeline wiring: standalone rewrite, coarse intent routing, flow dispatch.

Every message goes through the same steps: rewrite into a standalone query,
then either continue an active product-Q&A flow (sticky until the shopper
steers back to discovery) or classify the coarse intent and dispatch to the
matching flow. Each turn appends an immutable record so sessions replay
byte-identically under the scripted mock backend.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from . import decision_assist, product_args, search_flow
from .catalog import Catalog, Product, load_catalog
from .comparison import IncompleteCompareError, compare
from .config import AppConfig
from .gateway import HttpBackend, LLMGateway, MockBackend
from .intent import ClassifyContext, IntentLabel, IntentRule, classify, load_ruleset
from .retrieval import SearchIndex, sts_similarity
from .rewrite import reformulate
from .search_flow import FollowUp, cleanup_query
from .session import (
    BadTurnIndexError,
    BotResponse,
    ProductCard,
    SessionContext,
    SessionStore,
    Turn,
)

NO_RESULTS_TEXT = "No products found for that query. Try different words or a higher budget."
ASK_PRODUCT_QUESTION = "Which product are you asking about?"
ASK_COMPARE_QUESTION = "Which products would you like to compare?"
CX_REDIRECT_TEXT = (
    "For order, delivery, return or refund help, please open the Orders section of your "
    "account or contact customer support; they can look up your purchase."
)
REFUSAL_TEXT = (
    "I can help with shopping here: finding products, comparing them, offers, and order "
    "support. That one is outside what I can do."
)
NO_FAQ_TEXT = "I could not find a matching help topic. Could you rephrase the question?"

_SUMMARY_REQUEST = (
    "summary",
    "summarize",
    "summarise",
    "overview",
    "tell me about",
    "pros and cons",
)


class EmptyQueryError(ValueError):
    pass


@dataclass(frozen=True)
class PlatformFAQ:
    question: str
    answer: str


@dataclass(frozen=True)
class Promotion:
    description: str
    active: bool
    upcoming: bool = False


def _load_jsonl(path: str | Path) -> list[dict]:
    records = []
    with Path(path).open("r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                records.append(json.loads(line))
    return records


class ShoppingAssistant:
    """Owns the catalog, gateway, rules, and session store; one instance
    serves many concurrent sessions."""

    def __init__(
        self,
        catalog: Catalog,
        gateway: LLMGateway,
        ruleset: Sequence[IntentRule],
        config: AppConfig | None = None,
        store_keywords: dict[str, list[str]] | None = None,
        glossary: dict[str, str] | None = None,
        platform_faqs: Sequence[PlatformFAQ] = (),
        promotions: Sequence[Promotion] = (),
        sentiment_lexicon: dict[str, list[str]] | None = None,
        clock: Callable[[], float] | None = None,
    ) -> None:
        self.catalog = catalog
        self.gateway = gateway
        self.ruleset = tuple(ruleset)
        self.config = config or AppConfig()
        self.store_keywords = store_keywords or {}
        self.glossary = glossary or {}
        self.platform_faqs = tuple(platform_faqs)
        self.promotions = tuple(promotions)
        self.sentiment_lexicon = sentiment_lexicon or {}
        self.index = SearchIndex(catalog)
        store_kwargs = {"ttl_seconds": self.config.session_ttl_seconds}
        if clock is not None:
            store_kwargs["clock"] = clock
        self.sessions = SessionStore(**store_kwargs)
        self._title_to_id = {}
        for product in catalog.products.values():
            self._title_to_id.setdefault(product.title, product.id)
        self._journal_lock = threading.Lock()

    @classmethod
    def from_config(cls, config: AppConfig) -> "ShoppingAssistant":
        catalog = load_catalog(config.catalog_path)
        if config.backend == "http":
            backend = HttpBackend(
                base_url=config.http.base_url,
                model=config.http.model,
                api_key=config.api_key,
                timeout=config.http.timeout,
            )
        else:
            backend = MockBackend.from_file(config.mock_script_path)
        gateway = LLMGateway(backend)
        ruleset = load_ruleset(config.ruleset_path)
        store_keywords = json.loads(Path(config.store_keywords_path).read_text(encoding="utf-8"))
        glossary = json.loads(Path(config.glossary_path).read_text(encoding="utf-8"))
        platform_faqs = [
            PlatformFAQ(question=r["question"], answer=r["answer"])
            for r in _load_jsonl(config.platform_faqs_path)
        ]
        promotions = [
            Promotion(
                description=r["description"],
                active=bool(r.get("active", True)),
                upcoming=bool(r.get("upcoming", False)),
            )
            for r in _load_jsonl(config.promotions_path)
        ]
        lexicon = json.loads(Path(config.sentiment_lexicon_path).read_text(encoding="utf-8"))
        return cls(
            catalog=catalog,
            gateway=gateway,
            ruleset=ruleset,
            config=config,
            store_keywords=store_keywords,
            glossary=glossary,
            platform_faqs=platform_faqs,
            promotions=promotions,
            sentiment_lexicon=lexicon,
        )

    # -- session operations --------------------------------------------------

    def create_session(self) -> str:
        return self.sessions.create().session_id

    def get_session(self, session_id: str) -> SessionContext:
        return self.sessions.get(session_id)

    def record_feedback(self, session_id: str, turn_index: int, thumbs: str) -> None:
        if thumbs not in ("up", "down"):
            raise ValueError("thumbs must be 'up' or 'down'")
        session = self.sessions.get(session_id)
        if not 0 <= turn_index < len(session.turns):
            raise BadTurnIndexError(turn_index)
        session.turns[turn_index].feedback = thumbs

    def export_transcript(self, session_id: str) -> dict:
        session = self.sessions.get(session_id)
        return {
            "session_id": session.session_id,
            "turns": [turn.to_payload() for turn in session.turns],
        }

    # -- message pipeline ----------------------------------------------------

    def handle_message(self, session_id: str, text: str) -> BotResponse:
        if not text or not text.strip():
            raise EmptyQueryError("query must be non-empty")
        session = self.sessions.get(session_id)
        with self.sessions.lock(session_id):
            response = self._handle(session, text.strip())
            self.sessions.touch(session)
            self._journal(session)
            return response

    def _handle(self, session: SessionContext, text: str) -> BotResponse:
        history = [(turn.user_query, turn.response.text) for turn in session.turns]
        visible = session.visible_titles(self.config.display_limit)
        rewrite = reformulate(text, history, visible, self.gateway)
        saq = rewrite.standalone_query
        base_flags = {"used_fallback": True} if rewrite.used_fallback else {}

        # Sticky product Q&A: bypass coarse routing until the shopper exits.
        if session.active_product_id is not None:
            product = self.catalog.products[session.active_product_id]
            route = decision_assist.route_question(saq, product)
            if route is not decision_assist.QuestionRoute.EXIT_TO_MAIN:
                response = self._answer_about(saq, product, route, base_flags)
                self._append_turn(
                    session,
                    text,
                    saq,
                    IntentLabel.ANSWER_PRODUCT_SPECIFIC_QUESTIONS,
                    "product_qa",
                    response,
                )
                return response
            session.active_product_id = None

        context = ClassifyContext(has_displayed_products=bool(session.displayed))
        prediction = classify(saq, context, self.ruleset)
        flow, response = self._dispatch(session, saq, prediction.label, base_flags)
        self._append_turn(session, text, saq, prediction.label, flow, response)
        return response

    def _dispatch(
        self, session: SessionContext, saq: str, label: IntentLabel, flags: dict
    ) -> tuple[str, BotResponse]:
        if label is IntentLabel.SEARCH_FOR_PRODUCTS:
            return "search", self._run_search(session, saq, flags)
        if label is IntentLabel.ANSWER_PRODUCT_SPECIFIC_QUESTIONS:
            return "product_qa", self._enter_product_qa(session, saq, flags)
        if label is IntentLabel.COMPARE_PRODUCTS:
            return "compare", self._run_compare(session, saq, flags)
        if label is IntentLabel.RETURN_DIRECT_RESPONSE:
            text = product_args.direct_response(saq, self.gateway, self.glossary)
            return "direct", BotResponse(kind="answer", text=text, flags=flags)
        if label is IntentLabel.ANSWER_OFFER_RELATED_QUESTIONS:
            return "offers", self._run_offers(session, saq, flags)
        if label is IntentLabel.POST_PURCHASE:
            return "cx", BotResponse(kind="template", text=CX_REDIRECT_TEXT, flags=flags)
        if label is IntentLabel.GET_ANSWER_FROM_FAQ:
            return "faq", self._run_faq(saq, flags)
        return "refuse", BotResponse(kind="template", text=REFUSAL_TEXT, flags=flags)

    # -- flow handlers ---------------------------------------------------------

    def _card(self, product: Product) -> ProductCard:
        highlights = tuple(f"{k}: {v}" for k, v in list(product.specs.items())[:3])
        return ProductCard(
            id=product.id, title=product.title, price=product.price, spec_highlights=highlights
        )

    def _run_search(self, session: SessionContext, saq: str, flags: dict) -> BotResponse:
        clean = cleanup_query(saq, self.catalog.categories)
        outcome = search_flow.run_search(
            session,
            clean,
            self.catalog,
            self.index,
            store_keywords=self.store_keywords,
            result_limit=self.config.result_limit,
            display_limit=self.config.display_limit,
            followup_cap=self.config.followup_cap,
        )
        if not outcome.all_results:
            return BotResponse(kind="template", text=NO_RESULTS_TEXT, flags=flags)
        cards = tuple(self._card(self.catalog.products[pid]) for pid in outcome.displayed)
        titles = ", ".join(card.title for card in cards)
        return BotResponse(
            kind="products",
            text=f"Products that match your query: {titles}",
            products=cards,
            follow_up=outcome.follow_up,
            flags=flags,
        )

    def _answer_about(
        self,
        saq: str,
        product: Product,
        route: decision_assist.QuestionRoute,
        flags: dict,
    ) -> BotResponse:
        lowered = saq.lower()
        if any(marker in lowered for marker in _SUMMARY_REQUEST):
            summary = decision_assist.summarize_product(
                saq,
                product,
                self.gateway,
                self.sentiment_lexicon,
                context_limit=self.config.context_limit,
            )
            summary_flags = dict(flags)
            if summary.truncated:
                summary_flags["truncated_summary"] = True
            return BotResponse(kind="summary", text=summary.text, flags=summary_flags)

        if route is decision_assist.QuestionRoute.UGC:
            answer = decision_assist.answer_from_ugc(saq, product, self.config.ugc_limit)
        else:
            answer = decision_assist.answer_from_specs(
                saq,
                product,
                self.gateway,
                context_limit=self.config.context_limit,
                ugc_limit=self.config.ugc_limit,
            )
        answer_flags = dict(flags)
        if answer.not_answerable:
            answer_flags["not_answerable"] = True
        return BotResponse(kind="answer", text=answer.text, flags=answer_flags)

    def _enter_product_qa(self, session: SessionContext, saq: str, flags: dict) -> BotResponse:
        result = product_args.resolve_products(
            saq,
            IntentLabel.ANSWER_PRODUCT_SPECIFIC_QUESTIONS,
            session.visible_titles(self.config.display_limit),
            self.gateway,
            self.catalog,
            threshold=self.config.resolve_threshold,
        )
        if not result.products:
            suggestions = tuple(session.visible_titles(5))
            return BotResponse(
                kind="followup",
                text=ASK_PRODUCT_QUESTION,
                follow_up=FollowUp(
                    question=ASK_PRODUCT_QUESTION, facet="product", suggestions=suggestions
                ),
                flags=flags,
            )
        product = self._product_by_title(result.products[0])
        session.active_product_id = product.id
        route = decision_assist.route_question(saq, product)
        if route is decision_assist.QuestionRoute.EXIT_TO_MAIN:
            route = decision_assist.QuestionRoute.CATALOG_SPECS
        return self._answer_about(saq, product, route, flags)

    def _run_compare(self, session: SessionContext, saq: str, flags: dict) -> BotResponse:
        result = product_args.resolve_products(
            saq,
            IntentLabel.COMPARE_PRODUCTS,
            session.visible_titles(self.config.display_limit),
            self.gateway,
            self.catalog,
            threshold=self.config.resolve_threshold,
        )
        if result.incomplete:
            incomplete_flags = dict(flags)
            incomplete_flags["incomplete_compare"] = True
            return BotResponse(
                kind="followup",
                text=ASK_COMPARE_QUESTION,
                follow_up=FollowUp(
                    question=ASK_COMPARE_QUESTION,
                    facet="product",
                    suggestions=tuple(session.visible_titles(5)),
                ),
                flags=incomplete_flags,
            )
        products = [self._product_by_title(title) for title in result.products]
        try:
            comparison = compare(saq, products, self.gateway, self.config.context_limit)
        except IncompleteCompareError:
            incomplete_flags = dict(flags)
            incomplete_flags["incomplete_compare"] = True
            return BotResponse(kind="followup", text=ASK_COMPARE_QUESTION, follow_up=FollowUp(
                question=ASK_COMPARE_QUESTION, facet="product",
                suggestions=tuple(session.visible_titles(5))), flags=incomplete_flags)
        compare_flags = dict(flags)
        if comparison.truncated_verdict:
            compare_flags["truncated_verdict"] = True
        return BotResponse(
            kind="comparison",
            text=f"{comparison.summary}\nVerdict: {comparison.verdict}",
            flags=compare_flags,
        )

    def _run_offers(self, session: SessionContext, saq: str, flags: dict) -> BotResponse:
        # Offer questions do not go through product-name extraction; a light
        # title match against what is on screen picks a product if any.
        best_title, best_score = None, 0.0
        for displayed in session.displayed:
            score = sts_similarity(saq, displayed.title)
            if score > best_score:
                best_title, best_score = displayed.title, score
        if best_title is not None and best_score >= self.config.resolve_threshold:
            product = self._product_by_title(best_title)
            active = [offer.description for offer in product.offers if offer.active]
            if active:
                lines = "\n".join(f"- {description}" for description in active)
                return BotResponse(
                    kind="template",
                    text=f"Current offers on {product.title}:\n{lines}",
                    flags=flags,
                )
            return BotResponse(
                kind="template",
                text=f"There are no active offers on {product.title} right now.",
                flags=flags,
            )

        upcoming_requested = "upcoming" in saq.lower() or "next" in saq.lower()
        pool = [p for p in self.promotions if (p.upcoming if upcoming_requested else p.active)]
        if not pool:
            return BotResponse(
                kind="template", text="No matching promotions right now.", flags=flags
            )
        lines = "\n".join(f"- {promo.description}" for promo in pool)
        heading = "Upcoming promotions:" if upcoming_requested else "Current promotions:"
        return BotResponse(kind="template", text=f"{heading}\n{lines}", flags=flags)

    def _run_faq(self, saq: str, flags: dict) -> BotResponse:
        best, best_score = None, 0.0
        for faq in self.platform_faqs:
            score = sts_similarity(saq, f"{faq.question} {faq.answer}")
            if score > best_score:
                best, best_score = faq, score
        if best is None or best_score == 0.0:
            return BotResponse(kind="template", text=NO_FAQ_TEXT, flags=flags)
        return BotResponse(kind="answer", text=best.answer, flags=flags)

    # -- helpers ---------------------------------------------------------------

    def _product_by_title(self, title: str) -> Product:
        return self.catalog.products[self._title_to_id[title]]

    def _append_turn(
        self,
        session: SessionContext,
        user_query: str,
        saq: str,
        intent: IntentLabel,
        flow: str,
        response: BotResponse,
    ) -> None:
        session.turns.append(
            Turn(user_query=user_query, saq=saq, intent=intent.value, flow=flow, response=response)
        )

    def _journal(self, session: SessionContext) -> None:
        if not self.config.journal_path:
            return
        record = {
            "session_id": session.session_id,
            "turn": session.turns[-1].to_payload() if session.turns else None,
        }
        with self._journal_lock:
            with open(self.config.journal_path, "a", encoding="utf-8") as handle:
                handle.write(json.dumps(record, ensure_ascii=False) + "\n")
