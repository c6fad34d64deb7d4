"""Default prompt templates.

Placeholders use {name} syntax. Every generative call in the engine goes
through one of these; the mock backend matches on the rendered text, so
wording changes here can invalidate scripted fixtures.
"""

from __future__ import annotations

DEFAULT_TEMPLATES: dict[str, tuple[str, tuple[str, ...]]] = {
    "saq.reformulate": (
        "Rewrite the latest shopper message as a complete, self-contained shopping query.\n"
        "Carry forward constraints from the conversation (budget, brand, features) that still\n"
        "apply, and replace references like \"second product\" with the full product title\n"
        "from the displayed list. Reply with the rewritten query only.\n"
        "\n"
        "Conversation so far:\n"
        "{history}\n"
        "\n"
        "Displayed products:\n"
        "{displayed}\n"
        "\n"
        "Latest message: {query}\n"
        "Standalone query:",
        ("history", "displayed", "query"),
    ),
    "args.extract": (
        "Identify the full product titles the shopper is referring to.\n"
        "Intent: {intent}\n"
        "Suggested products from the previous turn:\n"
        "{suggested}\n"
        "Query: {query}\n"
        "Reply with one product title per line, copied exactly from the suggestions or the\n"
        "query, or the single word NONE if no product can be identified.",
        ("intent", "suggested", "query"),
    ),
    "args.direct": (
        "Reply briefly and politely to this shopper message. Stay neutral and helpful;\n"
        "one or two sentences.\n"
        "Message: {query}\n"
        "Reply:",
        ("query",),
    ),
    "da.answer": (
        "Answer the shopper's question about {product} using only the facts below.\n"
        "If the facts do not contain the answer, reply with exactly CANNOT_ANSWER.\n"
        "\n"
        "Facts:\n"
        "{context}\n"
        "\n"
        "Question: {query}\n"
        "Answer:",
        ("product", "context", "query"),
    ),
    "summarize.product": (
        "Write a short summary of {product} for this shopper query: {query}\n"
        "Use the details and customer reviews below. Keep positive or neutral points to at\n"
        "most three sentences and negative points to at most two sentences.\n"
        "\n"
        "Details:\n"
        "{context}\n"
        "\n"
        "Reviews:\n"
        "{reviews}\n"
        "\n"
        "Summary:",
        ("product", "query", "context", "reviews"),
    ),
    "compare.summarize": (
        "Compare these products for the shopper's question.\n"
        "Question: {query}\n"
        "\n"
        "{context}\n"
        "\n"
        "Write a concise comparison covering the features the question asks about, with pros\n"
        "and cons for each product.\n"
        "Comparison:",
        ("query", "context"),
    ),
    "compare.verdict": (
        "Based on this comparison, give a one-sentence verdict naming the single best choice\n"
        "for the question.\n"
        "Question: {query}\n"
        "Comparison:\n"
        "{summary}\n"
        "Verdict:",
        ("query", "summary"),
    ),
    "search.followup": (
        "Suggest one short follow-up question to refine this product search, grounded in the\n"
        "facets below.\n"
        "Query: {query}\n"
        "Facets: {facets}\n"
        "Question:",
        ("query", "facets"),
    ),
    "intent.classify": (
        "Classify the shopping query into exactly one label:\n"
        "answer_product_specific_questions, search_for_products, compare_products,\n"
        "return_direct_response, answer_offer_related_questions, post_purchase,\n"
        "get_answer_from_faq, not_applicable.\n"
        "Query: {query}\n"
        "Label:",
        ("query",),
    ),
    "judge.summary": (
        "You are grading a product summary.\n"
        "Query: {query}\n"
        "Product: {product}\n"
        "Summary: {summary}\n"
        "Grade whether the summary describes the right product, whether its facts are\n"
        "accurate, and how well it addresses the query. Reply with JSON only:\n"
        '{"product_relevancy": true or false, "factual_accuracy": "Pass" or "Fail",\n'
        ' "query_relevance": "Fully Relevant" or "Partially Relevant" or "Irrelevant"}',
        ("query", "product", "summary"),
    ),
    "judge.compare": (
        "You are grading a product comparison.\n"
        "Query: {query}\n"
        "Products and key specs:\n"
        "{context}\n"
        "Comparison summary: {summary}\n"
        "Verdict: {verdict}\n"
        "Extract the key aspects from the query and the summary, then grade each aspect.\n"
        "Reply with JSON only:\n"
        '{"aspects": [{"aspect": "...",\n'
        '  "relevancy": "Relevant" or "Partially Relevant" or "Irrelevant",\n'
        '  "verdict_correctness": "Correct" or "Incorrect" or "NA",\n'
        '  "comparison_correctness": "Correct" or "Incorrect"}]}',
        ("query", "context", "summary", "verdict"),
    ),
    "judge.args": (
        "You are grading extracted product names.\n"
        "Query: {query}\n"
        "Intent: {intent}\n"
        "Suggested products:\n"
        "{suggested}\n"
        "Extracted output: {output}\n"
        'Reply with JSON only: {"label": "good" or "partially good" or "bad"}',
        ("query", "intent", "suggested", "output"),
    ),
}
