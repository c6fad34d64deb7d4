"""Standalone-query rewriting: LLM path, ordinals, deterministic fallback."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shopchat.rewrite import (
    NoOrdinalError,
    OrdinalOutOfRangeError,
    extract_budget,
    fallback_rewrite,
    reformulate,
    resolve_ordinal,
)

from conftest import mock_gateway

DISPLAYED = [
    "OPPO A78 5G (Glowing Black)",
    "OPPO A78 (Aqua Green)",
    "OPPO A38 (Glowing Gold)",
]


class TestReformulate:
    def test_budget_carry_forward_via_llm(self):
        gateway = mock_gateway(
            ("saq.reformulate", "Motorola", "Motorola mobile within 15,000")
        )
        history = [("oppo mobile", "Products ..."), ("15,000", "Products ...")]
        result = reformulate("Motorola mobile", history, DISPLAYED, gateway)
        assert result.standalone_query == "Motorola mobile within 15,000"
        assert result.used_fallback is False

    def test_product_disambiguation_via_llm(self):
        gateway = mock_gateway(
            (
                "saq.reformulate",
                "VAN HEUSEN",
                "What is the color of VAN HEUSEN Men 2 PC Suit Solid Suit?",
            )
        )
        history = [("PETER ENGLAND suit for wedding under 6000", "Products ...")]
        displayed = [
            "PETER ENGLAND SLIM FIT Solid Suit",
            "Raymond Men Solid Suit",
            "VAN HEUSEN Men 2 PC Suit Solid Suit",
        ]
        result = reformulate(
            "No, what is the color of VAN HEUSEN suit?", history, displayed, gateway
        )
        assert result.standalone_query == "What is the color of VAN HEUSEN Men 2 PC Suit Solid Suit?"
        assert result.disambiguated_product == "VAN HEUSEN Men 2 PC Suit Solid Suit"

    def test_first_turn_passes_through_without_llm(self):
        result = reformulate("oppo mobile", [], [], gateway=None)
        assert result.standalone_query == "oppo mobile"
        assert result.used_fallback is False

    def test_gateway_failure_uses_fallback_and_flags_it(self):
        gateway = mock_gateway()  # no rules: every call errors
        history = [("oppo mobile", "..."), ("15,000", "...")]
        result = reformulate("Motorola mobile", history, DISPLAYED, gateway)
        assert result.standalone_query == "Motorola mobile within 15000"
        assert result.used_fallback is True


class TestResolveOrdinal:
    def test_second_product(self):
        assert resolve_ordinal("second product", ["A", "B", "C"]) == "B"

    def test_first_one_single_item(self):
        assert resolve_ordinal("first one", ["A"]) == "A"

    def test_out_of_range(self):
        with pytest.raises(OrdinalOutOfRangeError):
            resolve_ordinal("fifth product", ["A", "B"])

    def test_no_ordinal(self):
        with pytest.raises(NoOrdinalError):
            resolve_ordinal("the blue one", ["A", "B"])

    def test_last(self):
        assert resolve_ordinal("the last one", ["A", "B", "C"]) == "C"

    def test_numeral_forms(self):
        assert resolve_ordinal("3rd product", ["A", "B", "C"]) == "C"

    @given(st.integers(min_value=1, max_value=8))
    def test_every_ordinal_up_to_eight(self, n):
        words = ["first", "second", "third", "fourth", "fifth", "sixth", "seventh", "eighth"]
        displayed = [f"P{i}" for i in range(1, 9)]
        assert resolve_ordinal(f"{words[n - 1]} product", displayed) == f"P{n}"


class TestFallbackRewrite:
    def test_budget_appended_from_history(self):
        history = [("oppo mobile", "..."), ("15,000", "...")]
        assert fallback_rewrite("Motorola mobile", history) == "Motorola mobile within 15000"

    def test_query_with_number_left_alone(self):
        history = [("oppo mobile", "..."), ("15,000", "...")]
        assert fallback_rewrite("phone under 20000", history) == "phone under 20000"

    def test_ordinal_substitution(self):
        history = [("oppo mobile", "...")]
        result = fallback_rewrite("specs of the third product", history, DISPLAYED)
        assert result == "specs of OPPO A38 (Glowing Gold)"

    def test_keyworded_budget_in_older_turn(self):
        history = [("suits under 6000", "..."), ("no thanks", "...")]
        assert fallback_rewrite("blazers", history) == "blazers within 6000"

    @given(st.sampled_from(["Motorola mobile", "red shoes", "a nice sofa", "specs of the second product"]))
    def test_idempotent(self, query):
        history = [("oppo mobile", "..."), ("15,000", "...")]
        once = fallback_rewrite(query, history, DISPLAYED)
        assert fallback_rewrite(once, history, DISPLAYED) == once


class TestExtractBudget:
    def test_keyword_forms(self):
        assert extract_budget("under 15,000") == 15000
        assert extract_budget("less than 2000") == 2000
        assert extract_budget("within rs. 6,000") == 6000

    def test_bare_number_turn(self):
        assert extract_budget("15,000") == 15000

    def test_no_budget(self):
        assert extract_budget("red cotton shirt") is None
