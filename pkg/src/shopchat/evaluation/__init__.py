"""Offline evaluation harness: labeled-record scoring, judge runners, reports."""

from .judge import JudgeParseError, parse_judge_output, run_judge
from .metrics import (
    AnswerabilityResult,
    SessionOutcome,
    TurnRelevance,
    answerability,
    answerability_sessions,
    f1_from_precision_recall,
    intent_metrics,
    pda,
    qma,
    turnwise_qma,
)
from .records import KINDS, EvalRecord, RecordError, load_records, load_transcripts
from .report import build_report, render_text, write_report

__all__ = [
    "AnswerabilityResult",
    "EvalRecord",
    "JudgeParseError",
    "KINDS",
    "RecordError",
    "SessionOutcome",
    "TurnRelevance",
    "answerability",
    "answerability_sessions",
    "build_report",
    "f1_from_precision_recall",
    "intent_metrics",
    "load_records",
    "load_transcripts",
    "parse_judge_output",
    "pda",
    "qma",
    "render_text",
    "run_judge",
    "turnwise_qma",
    "write_report",
]
