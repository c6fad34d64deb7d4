"""Aggregate evaluation records into a report.

One report document covers whatever kinds appear in the records; it is written
as JSON (machine-readable), a fixed-width text table, a CSV of metric rows,
and, unless disabled, one rendered figure per kind next to the output file.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Sequence

from .metrics import answerability_sessions, intent_metrics, qma, turnwise_qma
from .records import EvalRecord


def _summary_section(records: Sequence[EvalRecord]) -> dict:
    parsed = [r for r in records if isinstance(r.gold, dict)]
    section: dict = {"count": len(records), "parse_errors": len(records) - len(parsed)}
    if parsed:
        section["product_relevancy_rate"] = sum(
            1 for r in parsed if r.gold["product_relevancy"]
        ) / len(parsed)
        section["factuality"] = sum(
            1 for r in parsed if r.gold["factual_accuracy"] == "Pass"
        ) / len(parsed)
        relevance = [r.gold["query_relevance"] for r in parsed]
        section["query_relevance"] = {
            label: relevance.count(label) / len(parsed)
            for label in ("Fully Relevant", "Partially Relevant", "Irrelevant")
        }
        section["relevancy"] = (
            relevance.count("Fully Relevant") + relevance.count("Partially Relevant")
        ) / len(parsed)
    return section


def _compare_section(records: Sequence[EvalRecord]) -> dict:
    parsed = [r for r in records if isinstance(r.gold, dict)]
    section: dict = {"count": len(records), "parse_errors": len(records) - len(parsed)}
    aspects = [aspect for r in parsed for aspect in r.gold["aspects"]]
    if aspects:
        section["aspect_count"] = len(aspects)
        section["relevancy"] = sum(
            1 for a in aspects if a["relevancy"] in ("Relevant", "Partially Relevant")
        ) / len(aspects)
        section["comparison_correctness"] = sum(
            1 for a in aspects if a["comparison_correctness"] == "Correct"
        ) / len(aspects)
        judged = [a for a in aspects if a["verdict_correctness"] != "NA"]
        section["verdict_correctness"] = (
            sum(1 for a in judged if a["verdict_correctness"] == "Correct") / len(judged)
            if judged
            else 0.0
        )
    return section


def _args_section(records: Sequence[EvalRecord]) -> dict:
    parsed = [r for r in records if isinstance(r.gold, str)]
    section: dict = {"count": len(records), "parse_errors": len(records) - len(parsed)}
    if parsed:
        for label in ("good", "partially good", "bad"):
            key = label.replace(" ", "_") + "_rate"
            section[key] = sum(1 for r in parsed if r.gold == label) / len(parsed)
    return section


def build_report(records: Sequence[EvalRecord], theta: float = 0.5) -> dict:
    """Aggregate records per kind; kinds absent from the input are omitted."""
    by_kind: dict[str, list[EvalRecord]] = {}
    for record in records:
        by_kind.setdefault(record.kind, []).append(record)

    report: dict = {"kinds": {}}
    for kind, group in sorted(by_kind.items()):
        if kind == "saq_qma":
            section: dict = {"count": len(group), "qma": qma(group)}
            if all("turn" in r.payload for r in group):
                section["by_turn"] = turnwise_qma(group)
            report["kinds"][kind] = section
        elif kind == "saq_pda":
            report["kinds"][kind] = {"count": len(group), "pda": qma(group)}
        elif kind == "intent":
            pred = [str(r.payload["pred"]) for r in group]
            gold = [str(r.gold) for r in group]
            section = intent_metrics(pred, gold)
            section["count"] = len(group)
            report["kinds"][kind] = section
        elif kind == "answerability_turn":
            section = answerability_sessions(group, theta=theta)
            section["count"] = len(group)
            report["kinds"][kind] = section
        elif kind == "summary":
            report["kinds"][kind] = _summary_section(group)
        elif kind == "compare":
            report["kinds"][kind] = _compare_section(group)
        elif kind == "args":
            report["kinds"][kind] = _args_section(group)
    return report


def _metric_rows(report: dict) -> list[tuple[str, str, str]]:
    rows = []
    for kind, section in report["kinds"].items():
        for key, value in section.items():
            if isinstance(value, (int, float)):
                rows.append((kind, key, f"{value:.4f}" if isinstance(value, float) else str(value)))
            elif kind == "intent" and key == "per_class":
                for label, stats in value.items():
                    for stat_name in ("precision", "recall", "f1"):
                        rows.append((kind, f"{label}.{stat_name}", f"{stats[stat_name]:.4f}"))
            elif kind == "saq_qma" and key == "by_turn":
                for turn, stats in value.items():
                    rows.append((kind, f"turn_{turn}.accuracy", f"{stats['accuracy']:.4f}"))
                    rows.append((kind, f"turn_{turn}.support", str(stats["support"])))
            elif key == "query_relevance":
                for label, rate in value.items():
                    rows.append((kind, f"query_relevance.{label}", f"{rate:.4f}"))
            elif kind == "intent" and key in ("macro_avg", "weighted_avg"):
                for stat_name, stat in value.items():
                    rows.append((kind, f"{key}.{stat_name}", f"{stat:.4f}"))
    return rows


def render_text(report: dict) -> str:
    """Human-readable fixed-width table of every scalar metric."""
    rows = _metric_rows(report)
    if not rows:
        return "(no metrics)"
    kind_width = max(len(r[0]) for r in rows)
    name_width = max(len(r[1]) for r in rows)
    lines = [f"{'kind'.ljust(kind_width)}  {'metric'.ljust(name_width)}  value"]
    lines.append("-" * (kind_width + name_width + 9))
    for kind, name, value in rows:
        lines.append(f"{kind.ljust(kind_width)}  {name.ljust(name_width)}  {value}")
    return "\n".join(lines)


def write_report(
    records: Sequence[EvalRecord],
    out_path: str | Path,
    theta: float = 0.5,
    figures: bool = True,
) -> dict:
    """Build the report and write the JSON, text, CSV, and figure outputs.

    Sibling files take the out path's stem: report.json -> report.txt,
    report.csv, report_<kind>.png.
    """
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    report = build_report(records, theta=theta)

    out_path.write_text(json.dumps(report, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    out_path.with_suffix(".txt").write_text(render_text(report) + "\n", encoding="utf-8")
    with out_path.with_suffix(".csv").open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["kind", "metric", "value"])
        writer.writerows(_metric_rows(report))

    if figures:
        from .figures import render_figures

        render_figures(report, out_path.parent, out_path.stem)
    return report
