"""Metric formulas: classification metrics, rewrite accuracy, answerability.

All 0/0 cases resolve to 0. Answerability weights relevance labels 1 / 0.5 / 0
and calls a session successful when the mean weight clears a threshold and the
final turn was not irrelevant; both the weights and the threshold are
configurable.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .records import EvalRecord


class TurnRelevance(str, Enum):
    HIGHLY_RELEVANT = "HighlyRelevant"
    PARTIALLY_RELEVANT = "PartiallyRelevant"
    IRRELEVANT = "Irrelevant"


class SessionOutcome(str, Enum):
    SUCCESSFUL = "Successful"
    UNSUCCESSFUL = "Unsuccessful"


DEFAULT_RELEVANCE_WEIGHTS: Mapping[TurnRelevance, float] = {
    TurnRelevance.HIGHLY_RELEVANT: 1.0,
    TurnRelevance.PARTIALLY_RELEVANT: 0.5,
    TurnRelevance.IRRELEVANT: 0.0,
}


def f1_from_precision_recall(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def intent_metrics(pred: Sequence[str], gold: Sequence[str]) -> dict:
    """Per-class precision/recall/F1 plus accuracy, macro and weighted averages.

    Weighted averages weight by gold support; classes that never occur in gold
    contribute zero weight.
    """
    if len(pred) != len(gold):
        raise ValueError(f"length mismatch: {len(pred)} predictions vs {len(gold)} gold labels")
    if not gold:
        raise ValueError("need at least one labeled example")

    labels = sorted(set(pred) | set(gold))
    per_class: dict[str, dict[str, float]] = {}
    total = len(gold)
    correct = sum(1 for p, g in zip(pred, gold) if p == g)

    for label in labels:
        tp = sum(1 for p, g in zip(pred, gold) if p == label and g == label)
        fp = sum(1 for p, g in zip(pred, gold) if p == label and g != label)
        fn = sum(1 for p, g in zip(pred, gold) if p != label and g == label)
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        per_class[label] = {
            "precision": precision,
            "recall": recall,
            "f1": f1_from_precision_recall(precision, recall),
            "support": tp + fn,
        }

    n_labels = len(labels)
    macro = {
        key: sum(per_class[label][key] for label in labels) / n_labels
        for key in ("precision", "recall", "f1")
    }
    weighted = {
        key: sum(per_class[label][key] * per_class[label]["support"] for label in labels) / total
        for key in ("precision", "recall", "f1")
    }
    return {
        "per_class": per_class,
        "accuracy": correct / total,
        "macro_avg": macro,
        "weighted_avg": weighted,
    }


def _fraction_correct(records: Sequence[EvalRecord]) -> float:
    if not records:
        raise ValueError("no records to score")
    return sum(1 for record in records if record.gold == "correct") / len(records)


def qma(records: Sequence[EvalRecord]) -> float:
    """Query-rewrite accuracy: fraction of rewrites labeled correct."""
    return _fraction_correct(records)


def pda(records: Sequence[EvalRecord]) -> float:
    """Product-disambiguation accuracy: fraction labeled correct."""
    return _fraction_correct(records)


def turnwise_qma(records: Sequence[EvalRecord]) -> dict[int, dict[str, float]]:
    """Rewrite accuracy grouped by turn index (payload["turn"]), with support."""
    groups: dict[int, list[EvalRecord]] = defaultdict(list)
    for record in records:
        groups[int(record.payload["turn"])].append(record)
    return {
        turn: {"accuracy": _fraction_correct(group), "support": len(group)}
        for turn, group in sorted(groups.items())
    }


@dataclass(frozen=True)
class AnswerabilityResult:
    turn_score: float
    outcome: SessionOutcome


def answerability(
    turn_labels: Sequence[TurnRelevance | str],
    theta: float = 0.5,
    weights: Mapping[TurnRelevance, float] | None = None,
) -> AnswerabilityResult:
    """Session answerability from per-turn relevance labels.

    turn_score is the mean label weight; the session is successful when the
    score reaches theta and the final turn was not irrelevant.
    """
    if not turn_labels:
        raise ValueError("need at least one turn label")
    weights = weights or DEFAULT_RELEVANCE_WEIGHTS
    labels = [TurnRelevance(label) for label in turn_labels]
    score = sum(weights[label] for label in labels) / len(labels)
    successful = score >= theta and labels[-1] is not TurnRelevance.IRRELEVANT
    return AnswerabilityResult(
        turn_score=score,
        outcome=SessionOutcome.SUCCESSFUL if successful else SessionOutcome.UNSUCCESSFUL,
    )


def answerability_sessions(
    records: Sequence[EvalRecord],
    theta: float = 0.5,
    weights: Mapping[TurnRelevance, float] | None = None,
) -> dict:
    """Aggregate answerability over many sessions.

    Records carry payload {session_id, turn_index} and a relevance gold label.
    Turn-level aggregation is reported both micro (all turns pooled) and macro
    (mean of per-session scores).
    """
    weights = weights or DEFAULT_RELEVANCE_WEIGHTS
    by_session: dict[str, list[EvalRecord]] = defaultdict(list)
    for record in records:
        by_session[str(record.payload["session_id"])].append(record)

    sessions = {}
    pooled_weight = 0.0
    pooled_turns = 0
    for session_id, group in sorted(by_session.items()):
        group.sort(key=lambda record: int(record.payload.get("turn_index", 0)))
        labels = [TurnRelevance(record.gold) for record in group]
        result = answerability(labels, theta=theta, weights=weights)
        sessions[session_id] = {
            "turn_score": result.turn_score,
            "outcome": result.outcome.value,
            "turns": len(labels),
        }
        pooled_weight += sum(weights[label] for label in labels)
        pooled_turns += len(labels)

    session_scores = [s["turn_score"] for s in sessions.values()]
    successes = sum(1 for s in sessions.values() if s["outcome"] == SessionOutcome.SUCCESSFUL.value)
    return {
        "sessions": sessions,
        "turn_micro": pooled_weight / pooled_turns if pooled_turns else 0.0,
        "turn_macro": sum(session_scores) / len(session_scores) if session_scores else 0.0,
        "success_rate": successes / len(sessions) if sessions else 0.0,
        "session_count": len(sessions),
    }
