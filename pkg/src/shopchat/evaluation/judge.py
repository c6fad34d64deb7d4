"""LLM-judge runners for summaries, comparisons, and product-name extraction.

Each runner renders the kind's rubric template, sends it through the gateway,
and parses the structured label. Output that does not parse into the schema
becomes a parse-error record; a label is never guessed.
"""

from __future__ import annotations

import json
from typing import Sequence

from ..gateway import GatewayError, LLMGateway
from .records import EvalRecord, RecordError, validate_gold

JUDGE_TEMPLATES = {
    "summary": "judge.summary",
    "compare": "judge.compare",
    "args": "judge.args",
}

_PAYLOAD_VARS = {
    "summary": ("query", "product", "summary"),
    "compare": ("query", "context", "summary", "verdict"),
    "args": ("query", "intent", "suggested", "output"),
}


class JudgeParseError(Exception):
    pass


def _extract_json(text: str) -> dict:
    text = text.strip()
    try:
        obj = json.loads(text)
        if isinstance(obj, dict):
            return obj
    except json.JSONDecodeError:
        pass
    start = text.find("{")
    end = text.rfind("}")
    if start != -1 and end > start:
        try:
            obj = json.loads(text[start : end + 1])
            if isinstance(obj, dict):
                return obj
        except json.JSONDecodeError:
            pass
    raise JudgeParseError(f"judge output is not a JSON object: {text[:120]!r}")


def parse_judge_output(kind: str, text: str) -> object:
    """Parse a judge reply into the kind's label schema or raise."""
    obj = _extract_json(text)
    if kind == "summary":
        label = {
            "product_relevancy": obj.get("product_relevancy"),
            "factual_accuracy": obj.get("factual_accuracy"),
            "query_relevance": obj.get("query_relevance"),
        }
    elif kind == "compare":
        label = {"aspects": obj.get("aspects")}
    elif kind == "args":
        label = obj.get("label")
    else:
        raise JudgeParseError(f"no judge for kind {kind!r}")
    try:
        validate_gold(kind, label)
    except RecordError as exc:
        raise JudgeParseError(str(exc)) from None
    return label


def run_judge(kind: str, payloads: Sequence[dict], gateway: LLMGateway) -> list[EvalRecord]:
    """Judge a batch of payloads; returns one record per item.

    Payload dicts must carry the template variables for the kind (and may
    carry an "id"). Parse failures and gateway errors yield records with a
    None label and the error message in the payload.
    """
    if kind not in JUDGE_TEMPLATES:
        raise ValueError(f"no judge for kind {kind!r}; expected one of {sorted(JUDGE_TEMPLATES)}")
    template_id = JUDGE_TEMPLATES[kind]
    variables = _PAYLOAD_VARS[kind]

    records = []
    for index, payload in enumerate(payloads):
        item_id = str(payload.get("id", index))
        rendered_vars = {name: payload.get(name, "") for name in variables}
        record_payload = dict(payload)
        try:
            response = gateway.run(template_id, rendered_vars)
            label = parse_judge_output(kind, response.text)
        except (GatewayError, JudgeParseError) as exc:
            record_payload["parse_error"] = str(exc)
            records.append(EvalRecord(id=item_id, kind=kind, payload=record_payload, gold=None))
            continue
        records.append(EvalRecord(id=item_id, kind=kind, payload=record_payload, gold=label))
    return records
