"""Completion providers and the retrying gateway in front of them.

Two providers back the same interface: an HTTP chat-completion client
(JSON {model, messages, temperature, max_tokens} request, first choice's
message content in the response) and a deterministic scripted provider
driven by a JSON playbook, used everywhere in tests and offline runs.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Protocol

from ..errors import InputError, ProtocolError, ProviderError, ProviderTimeoutError
from .messages import ChatMessage, CompletionParams, Conversation, Role

logger = logging.getLogger(__name__)

API_KEY_ENV = "LLM_API_KEY"


class TransientTransportError(Exception):
    """Internal signal: the attempt failed in a way worth retrying."""


class Provider(Protocol):
    def send(self, conversation: Conversation, params: CompletionParams) -> str: ...


@dataclass(frozen=True)
class ProviderConfig:
    """Exactly one provider kind is active per gateway instance."""

    kind: str  # "http_chat_api" | "scripted"
    endpoint: Optional[str] = None
    model: str = "gpt-4o"
    playbook_path: Optional[str] = None

    def __post_init__(self):
        if self.kind == "http_chat_api":
            if not self.endpoint or self.playbook_path:
                raise InputError("http_chat_api needs an endpoint and no playbook")
        elif self.kind == "scripted":
            if not self.playbook_path or self.endpoint:
                raise InputError("scripted needs a playbook path and no endpoint")
        else:
            raise InputError(f"unknown provider kind {self.kind!r}")


class ScriptedProvider:
    """Playbook-driven provider: first matching rule wins, in file order.

    Playbook format: JSON array of {purpose, match_substring?, response};
    the optional matcher is a substring test against the conversation's
    last user message. Stateless per call and safe to share.
    """

    def __init__(self, rules: list[dict]):
        for i, rule in enumerate(rules):
            if "purpose" not in rule or "response" not in rule:
                raise InputError(f"playbook rule {i} needs 'purpose' and 'response'")
        self._rules = [dict(r) for r in rules]

    @classmethod
    def from_file(cls, path) -> "ScriptedProvider":
        try:
            rules = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot load playbook {path}: {exc}") from exc
        if not isinstance(rules, list):
            raise InputError(f"playbook {path} must be a JSON array")
        return cls(rules)

    def send(self, conversation: Conversation, params: CompletionParams) -> str:
        last_user = conversation.last_user_content()
        for rule in self._rules:
            if rule["purpose"] != conversation.purpose.value:
                continue
            matcher = rule.get("match_substring")
            if matcher is None or matcher in last_user:
                return rule["response"]
        raise ProtocolError(
            f"scripted playbook has no rule for purpose '{conversation.purpose.value}'"
        )


def _httpx_transport(url: str, payload: dict, headers: dict, timeout: float) -> dict:
    """Default transport. Maps timeouts and transient failures to our signals."""
    import httpx

    try:
        response = httpx.post(url, json=payload, headers=headers, timeout=timeout)
    except httpx.TimeoutException as exc:
        raise ProviderTimeoutError(f"request to {url} timed out: {exc}") from exc
    except httpx.TransportError as exc:
        raise TransientTransportError(f"transport failure for {url}: {exc}") from exc
    if response.status_code == 429 or response.status_code >= 500:
        raise TransientTransportError(f"{url} answered {response.status_code}")
    if response.status_code >= 400:
        raise ProtocolError(f"{url} answered {response.status_code}: {response.text[:200]}")
    try:
        return response.json()
    except ValueError as exc:
        raise ProtocolError(f"{url} returned non-JSON payload") from exc


class HttpChatProvider:
    """Client for any chat-completion endpoint speaking the common wire shape."""

    def __init__(self, endpoint: str, model: str = "gpt-4o",
                 api_key: Optional[str] = None,
                 transport: Callable[[str, dict, dict, float], dict] = _httpx_transport):
        self.endpoint = endpoint
        self.model = model
        self._api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV, "")
        self._transport = transport

    def send(self, conversation: Conversation, params: CompletionParams) -> str:
        payload = {
            "model": self.model,
            "messages": [m.to_wire() for m in conversation.messages],
            "temperature": params.temperature,
            "max_tokens": params.max_output_tokens,
        }
        headers = {"Content-Type": "application/json"}
        if self._api_key:
            headers["Authorization"] = f"Bearer {self._api_key}"
        data = self._transport(self.endpoint, payload, headers, params.timeout)
        try:
            content = data["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise ProtocolError(f"malformed completion payload: {data!r:.200}") from exc
        if not isinstance(content, str) or not content:
            raise ProtocolError("completion payload has no message content")
        return content


class LlmGateway:
    """Provider-agnostic completion access with retry and an attempt counter.

    Transient transport failures are retried with exponential backoff
    (base 1s, factor 2) up to params.max_retries; timeouts and protocol
    errors are not retried. Shareable across sessions and threads.
    """

    def __init__(self, provider: Provider, defaults: Optional[CompletionParams] = None,
                 sleep: Callable[[float], None] = time.sleep):
        self._provider = provider
        self._defaults = defaults or CompletionParams()
        self._sleep = sleep
        self._lock = threading.Lock()
        self.total_attempts = 0
        self.last_attempt_count = 0

    @classmethod
    def from_config(cls, config: ProviderConfig, **kwargs) -> "LlmGateway":
        if config.kind == "scripted":
            provider: Provider = ScriptedProvider.from_file(config.playbook_path)
        else:
            provider = HttpChatProvider(endpoint=config.endpoint, model=config.model)
        return cls(provider, **kwargs)

    def complete(self, conversation: Conversation,
                 params: Optional[CompletionParams] = None) -> ChatMessage:
        params = params or self._defaults
        attempts_allowed = params.max_retries + 1
        attempts = 0
        last_failure: Optional[Exception] = None
        while attempts < attempts_allowed:
            attempts += 1
            with self._lock:
                self.total_attempts += 1
                self.last_attempt_count = attempts
            try:
                text = self._provider.send(conversation, params)
                return ChatMessage(role=Role.ASSISTANT, content=text)
            except TransientTransportError as exc:
                last_failure = exc
                if attempts < attempts_allowed:
                    delay = 1.0 * (2 ** (attempts - 1))
                    logger.warning("attempt %d/%d failed (%s); retrying in %.0fs",
                                   attempts, attempts_allowed, exc, delay)
                    self._sleep(delay)
        raise ProviderError(
            f"provider failed after {attempts} attempt(s): {last_failure}", attempts=attempts
        )
