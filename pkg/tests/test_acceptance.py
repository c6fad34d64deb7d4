"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with -s to see them). Tolerances and time budgets are
pinned here and nowhere else.
"""

import json
import math
import random
import re
import time

import pytest

from shopchat.catalog import load_catalog
from shopchat.config import AppConfig, data_path
from shopchat.decision_assist import enforce_summary_caps
from shopchat.comparison import enforce_single_sentence
from shopchat.evaluation.metrics import (
    SessionOutcome,
    TurnRelevance,
    answerability,
    f1_from_precision_recall,
    turnwise_qma,
)
from shopchat.evaluation.records import EvalRecord
from shopchat.intent import ClassifyContext, classify, load_ruleset
from shopchat.orchestrator import ShoppingAssistant
from shopchat.retrieval import SearchIndex, reduce_context, sts_similarity, tokenize
from shopchat.search_flow import BUDGET_FACET, cleanup_query, run_search
from shopchat.session import SessionContext

from conftest import random_catalog


def report(name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {status}: {name}{suffix}")
    assert ok, f"{name}{suffix}"


class TestTranscriptReplay:
    def test_sample_conversations_replay(self):
        started = time.perf_counter()
        assistant = ShoppingAssistant.from_config(AppConfig())

        sid = assistant.create_session()
        assistant.handle_message(sid, "oppo mobile")
        assistant.handle_message(sid, "15,000")
        response = assistant.handle_message(sid, "Motorola mobile")
        session = assistant.get_session(sid)
        saq_ok = session.turns[2].saq == "Motorola mobile within 15,000"
        prices_ok = bool(response.products) and all(
            card.price <= 15000 for card in response.products
        )

        sid2 = assistant.create_session()
        assistant.handle_message(sid2, "PETER ENGLAND suit for wedding under 6000")
        assistant.handle_message(sid2, "No, what is the color of VAN HEUSEN suit?")
        sample2_saq = assistant.get_session(sid2).turns[1].saq
        saq2_ok = sample2_saq == "What is the color of VAN HEUSEN Men 2 PC Suit Solid Suit?"

        elapsed = time.perf_counter() - started
        report(
            "transcript replay (scripted mock, exact SAQ strings, price filter)",
            saq_ok and prices_ok and saq2_ok and elapsed < 1.0,
            f"elapsed {elapsed:.2f}s",
        )


class TestMetricReproduction:
    def test_published_numbers(self):
        started = time.perf_counter()
        f1 = f1_from_precision_recall(0.9962, 0.9867)
        f1_ok = abs(f1 - 0.9914) <= 1e-4

        records = [
            EvalRecord(id=str(i), kind="saq_qma", payload={"turn": 1},
                       gold="correct" if i < 3946 else "incorrect")
            for i in range(4000)
        ]
        by_turn = turnwise_qma(records)
        qma_ok = by_turn[1]["accuracy"] == 3946 / 4000 and round(by_turn[1]["accuracy"], 4) == 0.9865

        elapsed = time.perf_counter() - started
        report(
            "metric reproduction (F1 0.9914 +/- 1e-4; turn-1 QMA 0.9865 exact)",
            f1_ok and qma_ok and elapsed < 1.0,
            f"f1={f1:.5f}, elapsed {elapsed:.2f}s",
        )


class TestContextReductionOracle:
    def test_equals_brute_force_on_1000_instances(self):
        started = time.perf_counter()
        rng = random.Random(31337)
        vocab = ["battery", "screen", "camera", "zoom", "fast", "blue", "metal", "life", "size", "warm"]
        failures = 0
        for _ in range(1000):
            n = rng.randint(1, 30)
            items = [
                (rng.choice(vocab).title(), " ".join(rng.choice(vocab) for _ in range(rng.randint(1, 4))))
                for _ in range(n)
            ]
            query = " ".join(rng.choice(vocab) for _ in range(rng.randint(1, 3)))
            k = rng.randint(1, 25)
            scores = [sts_similarity(query, f"{key} {text}") for key, text in items]
            order = sorted(range(n), key=lambda i: (-scores[i], i))
            expected = list(items) if n <= k else [items[i] for i in order[:k]]
            if reduce_context(query, items, k) != expected:
                failures += 1
        elapsed = time.perf_counter() - started
        report(
            "context-reduction oracle (1,000 random instances, exact order)",
            failures == 0 and elapsed < 10.0,
            f"failures={failures}, elapsed {elapsed:.2f}s",
        )


class TestRetrievalOracle:
    def test_bm25_matches_naive_scorer(self):
        started = time.perf_counter()
        rng = random.Random(4242)
        failures = 0
        for _ in range(100):
            catalog = random_catalog(rng, n_products=50)
            index = SearchIndex(catalog)
            products = list(catalog.products.values())
            docs = [tokenize(" ".join([p.title, p.brand, *p.specs.values()])) for p in products]
            avgdl = sum(len(d) for d in docs) / len(docs)
            query = rng.choice(
                [" ".join(tokenize(rng.choice(products).title)[:2]), "alpha gold", "cotton fhd", "jolt"]
            )
            category = rng.choice([None, "Mobiles", "Clothing"])
            max_price = rng.choice([None, 8000, 20000])
            query_tokens = tokenize(query)
            scored = []
            for i, product in enumerate(products):
                if category and product.category != category:
                    continue
                if max_price and product.price > max_price:
                    continue
                score = 0.0
                for term in query_tokens:
                    freq = docs[i].count(term)
                    if not freq:
                        continue
                    df = sum(1 for d in docs if term in d)
                    idf = math.log((len(docs) - df + 0.5) / (df + 0.5) + 1.0)
                    score += idf * freq * 2.2 / (freq + 1.2 * (0.25 + 0.75 * len(docs[i]) / avgdl))
                if score > 0:
                    scored.append((i, score))
            scored.sort(key=lambda pair: -pair[1])
            expected = [products[i].id for i, _ in scored[:24]]
            got = [h.item_id for h in index.search(query, category=category, max_price=max_price, k=24)]
            if got != expected:
                failures += 1
        elapsed = time.perf_counter() - started
        report(
            "retrieval oracle (BM25 vs naive scorer, 100 random 50-doc catalogs)",
            failures == 0 and elapsed < 30.0,
            f"failures={failures}, elapsed {elapsed:.2f}s",
        )


class TestRoutingStateMachine:
    def test_da_stickiness_over_10000_sequences(self):
        from test_orchestrator import ACTIONS, tiny_assistant
        from shopchat.decision_assist import QuestionRoute, route_question

        started = time.perf_counter()
        assistant = tiny_assistant()
        product = assistant.catalog.products["W1"]
        rng = random.Random(777)
        action_names = list(ACTIONS)
        violations = 0
        for _ in range(10_000):
            sid = assistant.create_session()
            expected_active = None
            for action in rng.choices(action_names, k=3):
                query, coarse_flow = ACTIONS[action]
                assistant.handle_message(sid, query)
                turn = assistant.get_session(sid).turns[-1]
                if expected_active is not None:
                    if route_question(turn.saq, product) is QuestionRoute.EXIT_TO_MAIN:
                        if turn.flow != coarse_flow:
                            violations += 1
                        expected_active = "W1" if action == "enter_da" else None
                    elif turn.flow != "product_qa":
                        violations += 1
                else:
                    if turn.flow != coarse_flow:
                        violations += 1
                    if action == "enter_da":
                        expected_active = "W1"
                if assistant.get_session(sid).active_product_id != expected_active:
                    violations += 1
        elapsed = time.perf_counter() - started
        report(
            "routing state machine (10,000 random sequences, sticky flow + exit)",
            violations == 0 and elapsed < 10.0,
            f"violations={violations}, elapsed {elapsed:.2f}s",
        )


class TestFollowupProperties:
    def test_grounding_no_repeat_cap_on_200_catalogs(self):
        started = time.perf_counter()
        rng = random.Random(909)
        grounding_ok = no_repeat_ok = cap_ok = True
        for _ in range(200):
            catalog = random_catalog(rng, n_products=rng.randint(3, 40))
            index = SearchIndex(catalog)
            session = SessionContext(session_id="acc")
            asked: list[str] = []
            query = rng.choice(["alpha", "bravo", "carbon", "delta", "echo", "fox"])
            for _turn in range(6):
                outcome = run_search(session, cleanup_query(query), catalog, index, {})
                if not outcome.all_results:
                    break
                results = [catalog.products[pid] for pid in outcome.all_results]
                if outcome.follow_up is None:
                    continue
                follow_up = outcome.follow_up
                if follow_up.facet == BUDGET_FACET:
                    if not set(follow_up.suggestions) <= {str(p.price) for p in results}:
                        grounding_ok = False
                else:
                    values = {p.specs.get(follow_up.facet) for p in results}
                    if not set(follow_up.suggestions) <= values:
                        grounding_ok = False
                asked.append(follow_up.facet)
            if len(asked) != len(set(asked)):
                no_repeat_ok = False
            if len(asked) > 3:
                cap_ok = False
        elapsed = time.perf_counter() - started
        report(
            "follow-up properties (grounded suggestions, no repeats, cap 3, 200 catalogs)",
            grounding_ok and no_repeat_ok and cap_ok and elapsed < 30.0,
            f"elapsed {elapsed:.2f}s",
        )


class TestIntentBaselineGate:
    def test_accuracy_on_bundled_corpus(self):
        started = time.perf_counter()
        ruleset = load_ruleset(data_path("intent_rules.jsonl"))
        correct = total = 0
        with open(data_path("intent_gold.jsonl"), encoding="utf-8") as handle:
            for line in handle:
                record = json.loads(line)
                context = ClassifyContext(
                    has_displayed_products=bool(record["payload"].get("has_displayed_products"))
                )
                prediction = classify(record["payload"]["saq"], context, ruleset)
                correct += prediction.label.value == record["gold"]
                total += 1
        accuracy = correct / total
        elapsed = time.perf_counter() - started
        report(
            "intent baseline gate (>= 0.90 on bundled 400-query corpus)",
            total == 400 and accuracy >= 0.90 and elapsed < 5.0,
            f"accuracy={accuracy:.4f}, elapsed {elapsed:.2f}s",
        )


class TestOutputValidators:
    def test_summary_and_verdict_caps_on_adversarial_outputs(self):
        lexicon = json.loads(data_path("sentiment_lexicon.json").read_text(encoding="utf-8"))
        rng = random.Random(55)
        positive = ["The display is great.", "Battery life is excellent.", "Sound is crisp.",
                    "Build feels premium.", "Camera is sharp.", "It is fast."]
        negative = ["The speaker is weak.", "It heats up, a real problem.", "Screen is dim.",
                    "Battery drains quickly, disappointing.", "The body feels cheap."]
        summaries_ok = True
        for _ in range(300):
            sentences = rng.choices(positive, k=rng.randint(0, 8)) + rng.choices(
                negative, k=rng.randint(0, 8)
            )
            rng.shuffle(sentences)
            summary = enforce_summary_caps(" ".join(sentences), lexicon)
            if len(summary.positive_sentences) > 3 or len(summary.negative_sentences) > 2:
                summaries_ok = False

        verdicts_ok = True
        for _ in range(300):
            text = " ".join(rng.choices(positive + negative, k=rng.randint(0, 6)))
            verdict, _ = enforce_single_sentence(text)
            if verdict and len(re.findall(r"[.!?]", verdict)) != 1:
                verdicts_ok = False

        report(
            "output validators (<=3 positive / <=2 negative sentences; one-sentence verdict)",
            summaries_ok and verdicts_ok,
        )


class TestAnswerabilityAcceptance:
    def test_unit_cases_and_brute_force(self):
        H = TurnRelevance.HIGHLY_RELEVANT
        P = TurnRelevance.PARTIALLY_RELEVANT
        I = TurnRelevance.IRRELEVANT

        mixed = answerability([H, H, P, I])
        clean = answerability([H, H])
        units_ok = (
            mixed.turn_score == 0.625
            and mixed.outcome is SessionOutcome.UNSUCCESSFUL
            and clean.turn_score == 1.0
            and clean.outcome is SessionOutcome.SUCCESSFUL
        )

        rng = random.Random(808)
        weight = {H: 1.0, P: 0.5, I: 0.0}
        brute_ok = True
        for _ in range(1000):
            labels = [rng.choice([H, P, I]) for _ in range(rng.randint(1, 10))]
            expected_score = sum(weight[label] for label in labels) / len(labels)
            expected_success = expected_score >= 0.5 and labels[-1] is not I
            result = answerability(labels)
            if abs(result.turn_score - expected_score) > 1e-12:
                brute_ok = False
            if (result.outcome is SessionOutcome.SUCCESSFUL) != expected_success:
                brute_ok = False

        report(
            "answerability (unit cases + brute force on 1,000 random vectors)",
            units_ok and brute_ok,
        )
