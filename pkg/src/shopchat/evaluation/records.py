"""Labeled evaluation records and their file formats.

Both evaluation inputs and exported session transcripts are line-delimited
JSON. Gold labels are validated against the label set of each record kind at
load time so scoring never sees an out-of-vocabulary label.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..intent import IntentLabel

KINDS = (
    "saq_qma",
    "saq_pda",
    "intent",
    "answerability_turn",
    "args",
    "summary",
    "compare",
)

_BINARY = {"correct", "incorrect"}
_RELEVANCE = {"HighlyRelevant", "PartiallyRelevant", "Irrelevant"}
_ARGS = {"good", "partially good", "bad"}
_FACTUAL = {"Pass", "Fail"}
_QUERY_RELEVANCE = {"Fully Relevant", "Partially Relevant", "Irrelevant"}
_ASPECT_RELEVANCY = {"Relevant", "Partially Relevant", "Irrelevant"}
_VERDICT = {"Correct", "Incorrect", "NA"}
_COMPARISON = {"Correct", "Incorrect"}


class RecordError(Exception):
    """Raised for malformed evaluation record files."""


@dataclass
class EvalRecord:
    id: str
    kind: str
    payload: dict = field(default_factory=dict)
    gold: object = None  # str for simple kinds, dict for rubric kinds, None for parse errors

    def to_json(self) -> str:
        return json.dumps(
            {"id": self.id, "kind": self.kind, "payload": self.payload, "gold": self.gold},
            ensure_ascii=False,
        )


def validate_gold(kind: str, gold: object) -> None:
    """Check a gold label against its kind's label set."""
    if gold is None:
        return
    if kind in ("saq_qma", "saq_pda"):
        if gold not in _BINARY:
            raise RecordError(f"{kind} gold must be one of {sorted(_BINARY)}, got {gold!r}")
    elif kind == "intent":
        try:
            IntentLabel(gold)
        except ValueError:
            raise RecordError(f"intent gold must be a valid intent label, got {gold!r}") from None
    elif kind == "answerability_turn":
        if gold not in _RELEVANCE:
            raise RecordError(f"answerability gold must be one of {sorted(_RELEVANCE)}, got {gold!r}")
    elif kind == "args":
        if gold not in _ARGS:
            raise RecordError(f"args gold must be one of {sorted(_ARGS)}, got {gold!r}")
    elif kind == "summary":
        if not isinstance(gold, dict):
            raise RecordError("summary gold must be an object")
        if not isinstance(gold.get("product_relevancy"), bool):
            raise RecordError("summary gold needs boolean product_relevancy")
        if gold.get("factual_accuracy") not in _FACTUAL:
            raise RecordError(f"summary factual_accuracy must be one of {sorted(_FACTUAL)}")
        if gold.get("query_relevance") not in _QUERY_RELEVANCE:
            raise RecordError(f"summary query_relevance must be one of {sorted(_QUERY_RELEVANCE)}")
    elif kind == "compare":
        if not isinstance(gold, dict) or not isinstance(gold.get("aspects"), list):
            raise RecordError("compare gold must be an object with an aspects list")
        for aspect in gold["aspects"]:
            if aspect.get("relevancy") not in _ASPECT_RELEVANCY:
                raise RecordError(f"aspect relevancy must be one of {sorted(_ASPECT_RELEVANCY)}")
            if aspect.get("verdict_correctness") not in _VERDICT:
                raise RecordError(f"verdict_correctness must be one of {sorted(_VERDICT)}")
            if aspect.get("comparison_correctness") not in _COMPARISON:
                raise RecordError(f"comparison_correctness must be one of {sorted(_COMPARISON)}")
    else:
        raise RecordError(f"unknown record kind {kind!r}")


def load_records(path: str | Path) -> list[EvalRecord]:
    records = []
    with Path(path).open("r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise RecordError(f"line {line_no}: invalid JSON ({exc.msg})") from exc
            kind = raw.get("kind")
            if kind not in KINDS:
                raise RecordError(f"line {line_no}: unknown kind {kind!r}")
            gold = raw.get("gold")
            try:
                validate_gold(kind, gold)
            except RecordError as exc:
                raise RecordError(f"line {line_no}: {exc}") from None
            records.append(
                EvalRecord(
                    id=str(raw.get("id", line_no)),
                    kind=kind,
                    payload=raw.get("payload", {}),
                    gold=gold,
                )
            )
    return records


def dump_records(records: list[EvalRecord], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as handle:
        for record in records:
            handle.write(record.to_json() + "\n")


def load_transcripts(path: str | Path) -> list[dict]:
    """Load session transcripts (one session per line) as exported by the
    orchestrator; export -> dump -> load is the identity."""
    transcripts = []
    with Path(path).open("r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise RecordError(f"line {line_no}: invalid JSON ({exc.msg})") from exc
            if "session_id" not in raw or "turns" not in raw:
                raise RecordError(f"line {line_no}: transcript needs session_id and turns")
            transcripts.append(raw)
    return transcripts
