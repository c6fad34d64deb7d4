"""Conversational shopping assistant engine.

Multi-turn product discovery over a local catalog: standalone-query rewriting,
coarse intent routing, search with grounded follow-up questions, product Q&A,
comparisons, and an offline evaluation harness. All generative calls go
through a single gateway with a deterministic scripted mock for tests.
"""

__version__ = "0.1.0"
