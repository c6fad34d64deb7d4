"""Figure rendering for evaluation reports.

One PNG per report kind, written next to the delimited outputs. Uses the Agg
backend so rendering works headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def _bar_figure(path: Path, title: str, labels: list[str], values: list[float], ylabel: str) -> None:
    fig, ax = plt.subplots(figsize=(max(4.0, 0.9 * len(labels) + 2.0), 3.2))
    ax.bar(range(len(labels)), values, color="#3b7dd8")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylim(0, 1.05)
    ax.set_ylabel(ylabel)
    ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_figures(report: dict, out_dir: str | Path, stem: str) -> list[Path]:
    """Render one figure per kind present in the report; returns written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    for kind, section in report.get("kinds", {}).items():
        path = out_dir / f"{stem}_{kind}.png"
        if kind == "intent" and "per_class" in section:
            labels = list(section["per_class"])
            values = [section["per_class"][label]["f1"] for label in labels]
            _bar_figure(path, "Intent F1 by class", labels, values, "F1")
        elif kind == "saq_qma" and "by_turn" in section:
            turns = list(section["by_turn"])
            values = [section["by_turn"][turn]["accuracy"] for turn in turns]
            _bar_figure(path, "Rewrite accuracy by turn", [f"turn {t}" for t in turns], values, "accuracy")
        elif kind == "saq_qma":
            _bar_figure(path, "Rewrite accuracy", ["QMA"], [section["qma"]], "accuracy")
        elif kind == "saq_pda":
            _bar_figure(path, "Disambiguation accuracy", ["PDA"], [section["pda"]], "accuracy")
        elif kind == "answerability_turn":
            _bar_figure(
                path,
                "Answerability",
                ["turn micro", "turn macro", "success rate"],
                [section["turn_micro"], section["turn_macro"], section["success_rate"]],
                "score",
            )
        elif kind == "summary" and "factuality" in section:
            _bar_figure(
                path,
                "Summary judge rates",
                ["product relevancy", "factuality", "relevancy"],
                [section["product_relevancy_rate"], section["factuality"], section["relevancy"]],
                "rate",
            )
        elif kind == "compare" and "relevancy" in section:
            _bar_figure(
                path,
                "Comparison judge rates",
                ["relevancy", "comparison correct", "verdict correct"],
                [
                    section["relevancy"],
                    section["comparison_correctness"],
                    section["verdict_correctness"],
                ],
                "rate",
            )
        elif kind == "args" and "good_rate" in section:
            _bar_figure(
                path,
                "Extraction judge labels",
                ["good", "partially good", "bad"],
                [
                    section["good_rate"],
                    section["partially_good_rate"],
                    section["bad_rate"],
                ],
                "rate",
            )
        else:
            continue
        written.append(path)
    return written
