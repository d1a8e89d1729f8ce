"""Prompt template loading and rendering.

Templates live as versioned text files next to this module, one per
purpose, with turns delimited by `=== role ===` lines and `${name}`
placeholders. The files are a contract: golden tests pin their rendered
output byte for byte.
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources
from string import Template

from ..errors import TemplateError
from .messages import ChatMessage, Conversation, Purpose, Role

_SECTION_RE = re.compile(r"^=== (system|user|assistant) ===$")
_PLACEHOLDER_RE = re.compile(r"\$\{([A-Za-z_][A-Za-z0-9_]*)\}")


@lru_cache(maxsize=None)
def _load_template(purpose: Purpose) -> tuple[tuple[str, str], ...]:
    """Parse a template file into (role, body) sections."""
    ref = resources.files("summpilot.gateway") / "templates" / f"{purpose.value}.txt"
    text = ref.read_text(encoding="utf-8")
    sections: list[tuple[str, list[str]]] = []
    for line in text.splitlines():
        m = _SECTION_RE.match(line)
        if m:
            sections.append((m.group(1), []))
        elif sections:
            sections[-1][1].append(line)
        elif line.strip():
            raise TemplateError(f"template {purpose.value} has content before the first section")
    return tuple((role, "\n".join(body).strip("\n")) for role, body in sections)


def template_placeholders(purpose: Purpose) -> set[str]:
    names: set[str] = set()
    for _, body in _load_template(purpose):
        names.update(_PLACEHOLDER_RE.findall(body))
    return names


def format_article_blocks(articles: list[str]) -> str:
    """Label article bodies as the summarize prompt expects them."""
    blocks = []
    for i, body in enumerate(articles, start=1):
        blocks.append(f"[Article {i}]\n{body}")
    return "\n".join(blocks)


def render_prompt(purpose: Purpose, bindings: dict) -> Conversation:
    """Render the prompt script for a purpose into a Conversation.

    `bindings` maps placeholder names to text; the summarize/refine
    templates additionally accept `articles` as a list of article bodies,
    expanded into numbered "[Article i]" blocks. A missing or empty
    binding raises TemplateError naming every missing placeholder.
    """
    resolved = dict(bindings)
    if "articles" in template_placeholders(purpose):
        articles = resolved.get("articles")
        if isinstance(articles, (list, tuple)):
            if not articles:
                raise TemplateError("binding 'articles' is empty", missing=["articles"])
            resolved["articles"] = format_article_blocks(list(articles))

    needed = template_placeholders(purpose)
    missing = sorted(
        name for name in needed
        if name not in resolved or not str(resolved[name]).strip()
    )
    if missing:
        raise TemplateError(
            f"missing bindings for {purpose.value}: {', '.join(missing)}", missing=missing
        )

    messages = []
    for role, body in _load_template(purpose):
        content = Template(body).safe_substitute({k: str(v) for k, v in resolved.items()})
        messages.append(ChatMessage(role=Role(role), content=content))
    return Conversation(messages=tuple(messages), purpose=purpose)
