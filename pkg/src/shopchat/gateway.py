"""Single choke-point for generative calls.

Three pieces: a prompt-template registry, a deterministic scripted mock
backend for tests and CI, and an HTTP backend speaking a chat-completion wire
format. Nothing else in the codebase talks to a model provider.
"""

from __future__ import annotations

import json
import re
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import requests

from .templates import DEFAULT_TEMPLATES

# Extraction and judging must be reproducible, so their temperature is pinned
# to 0 regardless of what the caller asks for.
ZERO_TEMPERATURE_PREFIXES = ("saq.", "args.", "judge.", "intent.")

_PLACEHOLDER = re.compile(r"\{([a-z][a-z0-9_.]*)\}")


class GatewayError(Exception):
    """Base class for all gateway failures."""


class UnknownTemplateError(GatewayError):
    pass


class MissingVariableError(GatewayError):
    def __init__(self, template_id: str, variable: str) -> None:
        super().__init__(f"template {template_id!r} missing variable {variable!r}")
        self.variable = variable


class NoScriptMatchError(GatewayError):
    """The mock backend has no rule for this request; never falls back silently."""


class ProviderError(GatewayError):
    def __init__(self, status: int, body: str) -> None:
        super().__init__(f"provider returned status {status}: {body[:200]}")
        self.status = status
        self.body = body


class ProviderTimeoutError(GatewayError):
    pass


@dataclass(frozen=True)
class PromptTemplate:
    id: str
    text: str
    required_vars: tuple[str, ...]


@dataclass(frozen=True)
class LLMRequest:
    template_id: str
    rendered_prompt: str
    max_tokens: int = 512
    temperature: float = 0.0


@dataclass(frozen=True)
class LLMResponse:
    text: str
    backend: str
    latency_ms: int


class TemplateRegistry:
    def __init__(self) -> None:
        self._templates: dict[str, PromptTemplate] = {}

    @classmethod
    def with_defaults(cls) -> "TemplateRegistry":
        registry = cls()
        for template_id, (text, required) in DEFAULT_TEMPLATES.items():
            registry.register(PromptTemplate(id=template_id, text=text, required_vars=required))
        return registry

    def register(self, template: PromptTemplate) -> None:
        self._templates[template.id] = template

    def get(self, template_id: str) -> PromptTemplate:
        try:
            return self._templates[template_id]
        except KeyError:
            raise UnknownTemplateError(f"unknown template {template_id!r}") from None

    def render(self, template_id: str, variables: dict[str, object]) -> str:
        """Substitute every placeholder; fails if any required or referenced
        variable is missing, so no placeholder survives rendering."""
        template = self.get(template_id)
        needed = set(template.required_vars) | set(_PLACEHOLDER.findall(template.text))
        for name in sorted(needed):
            if name not in variables:
                raise MissingVariableError(template_id, name)
        return _PLACEHOLDER.sub(lambda m: str(variables[m.group(1)]), template.text)


class Backend(Protocol):
    name: str

    def complete(self, request: LLMRequest) -> LLMResponse: ...


@dataclass(frozen=True)
class MockRule:
    template_id: str
    contains: str
    response: str


class MockBackend:
    """Scripted backend: first registered rule whose template id matches and
    whose `contains` pattern occurs in the rendered prompt wins."""

    name = "mock"

    def __init__(self, rules: list[MockRule] | None = None) -> None:
        self._rules = tuple(rules or ())

    @classmethod
    def from_file(cls, path: str | Path) -> "MockBackend":
        rules = []
        with Path(path).open("r", encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if not line:
                    continue
                raw = json.loads(line)
                rules.append(
                    MockRule(
                        template_id=raw["template_id"],
                        contains=raw["contains"],
                        response=raw["response"],
                    )
                )
        return cls(rules)

    def complete(self, request: LLMRequest) -> LLMResponse:
        for rule in self._rules:
            if rule.template_id == request.template_id and rule.contains in request.rendered_prompt:
                return LLMResponse(text=rule.response, backend=self.name, latency_ms=0)
        raise NoScriptMatchError(
            f"no scripted response matches template {request.template_id!r}"
        )


@dataclass
class HttpBackend:
    """POSTs a chat-completion request to a configurable URL."""

    base_url: str
    model: str
    api_key: str | None = None
    timeout: float = 30.0
    name: str = field(default="http", init=False)

    def complete(self, request: LLMRequest) -> LLMResponse:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        body = {
            "model": self.model,
            "messages": [{"role": "user", "content": request.rendered_prompt}],
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        }
        started = time.monotonic()
        try:
            response = requests.post(self.base_url, json=body, headers=headers, timeout=self.timeout)
        except requests.Timeout as exc:
            raise ProviderTimeoutError(f"provider timed out after {self.timeout}s") from exc
        if response.status_code >= 400:
            raise ProviderError(response.status_code, response.text)
        payload = response.json()
        try:
            choice = payload["choices"][0]
            text = choice["message"]["content"] if "message" in choice else choice["text"]
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderError(response.status_code, f"malformed provider payload: {payload!r}") from exc
        latency_ms = int((time.monotonic() - started) * 1000)
        return LLMResponse(text=text, backend=self.name, latency_ms=latency_ms)


class LLMGateway:
    """Renders templates and routes completion requests to the active backend."""

    def __init__(self, backend: Backend, registry: TemplateRegistry | None = None) -> None:
        self.registry = registry or TemplateRegistry.with_defaults()
        self.backend = backend

    def complete(self, request: LLMRequest) -> LLMResponse:
        return self.backend.complete(request)

    def run(
        self,
        template_id: str,
        variables: dict[str, object],
        max_tokens: int = 512,
        temperature: float = 0.0,
    ) -> LLMResponse:
        prompt = self.registry.render(template_id, variables)
        if template_id.startswith(ZERO_TEMPERATURE_PREFIXES):
            temperature = 0.0
        request = LLMRequest(
            template_id=template_id,
            rendered_prompt=prompt,
            max_tokens=max_tokens,
            temperature=temperature,
        )
        return self.complete(request)
