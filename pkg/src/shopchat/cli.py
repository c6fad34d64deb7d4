"""Command-line entry points: serve the HTTP API, chat in a terminal REPL,
and run the offline evaluation harness."""

from __future__ import annotations

import json
from pathlib import Path

import click

from .config import AppConfig, load_config
from .evaluation.judge import JUDGE_TEMPLATES, run_judge
from .evaluation.records import KINDS, load_records
from .evaluation.report import render_text, write_report
from .gateway import HttpBackend, LLMGateway, MockBackend
from .intent import ClassifyContext, classify, load_ruleset
from .orchestrator import ShoppingAssistant


@click.group()
def main() -> None:
    """Conversational shopping assistant engine."""


def _load_app_config(config_path: str | None) -> AppConfig:
    return load_config(config_path) if config_path else AppConfig()


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(config_path: str | None, host: str, port: int) -> None:
    """Run the HTTP API server."""
    import uvicorn

    from .api import create_app

    assistant = ShoppingAssistant.from_config(_load_app_config(config_path))
    uvicorn.run(create_app(assistant), host=host, port=port)


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
def chat(config_path: str | None) -> None:
    """Interactive terminal chat against the local engine."""
    assistant = ShoppingAssistant.from_config(_load_app_config(config_path))
    session_id = assistant.create_session()
    click.echo("Session started. Empty line quits.")
    while True:
        text = click.prompt("you", default="", show_default=False)
        if not text.strip():
            break
        response = assistant.handle_message(session_id, text)
        click.echo(f"bot [{response.kind}]: {response.text}")
        if response.follow_up:
            click.echo(f"bot asks: {response.follow_up.question}")
            if response.follow_up.suggestions:
                click.echo(f"  suggestions: {', '.join(response.follow_up.suggestions)}")


@main.group()
def eval() -> None:
    """Offline evaluation harness."""


def _gateway_for(judge: str, config: AppConfig, mock_script: str | None) -> LLMGateway:
    if judge == "http":
        backend = HttpBackend(
            base_url=config.http.base_url,
            model=config.http.model,
            api_key=config.api_key,
            timeout=config.http.timeout,
        )
    else:
        backend = MockBackend.from_file(mock_script or config.mock_script_path)
    return LLMGateway(backend)


@eval.command("run")
@click.option("--kind", type=click.Choice(KINDS), required=True)
@click.option("--input", "input_path", type=click.Path(exists=True), required=True)
@click.option("--out", "out_path", type=click.Path(), default="report.json", show_default=True)
@click.option("--judge", type=click.Choice(["mock", "http"]), default="mock", show_default=True)
@click.option("--mock-script", type=click.Path(exists=True), default=None)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--figures/--no-figures", default=True, show_default=True)
@click.option("--theta", default=0.5, show_default=True, type=float)
def eval_run(
    kind: str,
    input_path: str,
    out_path: str,
    judge: str,
    mock_script: str | None,
    config_path: str | None,
    figures: bool,
    theta: float,
) -> None:
    """Score an evaluation file and write the report (JSON, text, CSV, figures)."""
    config = _load_app_config(config_path)
    records = load_records(input_path)
    records = [record for record in records if record.kind == kind]
    if not records:
        raise click.ClickException(f"no records of kind {kind!r} in {input_path}")

    if kind in JUDGE_TEMPLATES:
        gateway = _gateway_for(judge, config, mock_script)
        payloads = [{"id": record.id, **record.payload} for record in records]
        records = run_judge(kind, payloads, gateway)
    elif kind == "intent":
        missing = [record for record in records if "pred" not in record.payload]
        if missing:
            ruleset = load_ruleset(config.ruleset_path)
            for record in missing:
                context = ClassifyContext(
                    has_displayed_products=bool(record.payload.get("has_displayed_products"))
                )
                prediction = classify(str(record.payload.get("saq", "")), context, ruleset)
                record.payload["pred"] = prediction.label.value

    report = write_report(records, out_path, theta=theta, figures=figures)
    click.echo(render_text(report))
    click.echo(f"\nreport written to {Path(out_path).resolve()}")


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
def info(config_path: str | None) -> None:
    """Print the resolved configuration and catalog summary."""
    config = _load_app_config(config_path)
    assistant = ShoppingAssistant.from_config(config)
    summary = {
        "catalog_path": config.catalog_path,
        "products": len(assistant.catalog),
        "categories": list(assistant.catalog.categories),
        "backend": config.backend,
        "ruleset_rules": len(assistant.ruleset),
    }
    click.echo(json.dumps(summary, indent=2))
