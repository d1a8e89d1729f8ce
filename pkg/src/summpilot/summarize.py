"""Automatic baseline summary and constraint-driven regeneration.

Refinements continue the summarize conversation: each request restates only
its own constraints, while earlier ones persist implicitly through the
dialogue history (bounded to the last HISTORY_BOUND refinement turns to
keep the context budget flat).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .core import DocumentSet, Provenance, Summary, make_summary
from .errors import ConstraintConflictError, EmptySummaryError, InputError, ValidationError
from .extraction import ParseWarning, Triple
from .gateway import ChatMessage, Conversation, LlmGateway, Purpose, Role, render_prompt

HISTORY_BOUND = 5


@dataclass(frozen=True)
class RefinementRequest:
    """Include/exclude triple constraints plus an optional free-form command."""

    id: int
    include: frozenset[int] = frozenset()
    exclude: frozenset[int] = frozenset()
    freeform: Optional[str] = None

    def __post_init__(self):
        if not self.include and not self.exclude and not (self.freeform or "").strip():
            raise InputError("a refinement request needs constraints or a command")
        overlap = self.include & self.exclude
        if overlap:
            raise ConstraintConflictError(overlap)


def parse_summary_response(text: str) -> tuple[str, list[ParseWarning]]:
    """Return the body after the first '[Summary]' line (case-insensitive,
    trimmed); a missing header falls back to the whole trimmed text with a
    warning. An empty body is an error."""
    lines = text.splitlines()
    for i, line in enumerate(lines):
        if line.strip().lower() == "[summary]":
            body = "\n".join(lines[i + 1:]).strip()
            if not body:
                raise EmptySummaryError("response has an empty body after the [Summary] header")
            return body, []
    body = text.strip()
    if not body:
        raise EmptySummaryError("response is empty")
    return body, [ParseWarning(lines[0] if lines else "", "missing [Summary] header; using whole response")]


def _triple_phrase(triple: Triple) -> str:
    return f"{triple.subject.representative}-{triple.relation}-{triple.object.representative}"


def build_constraint_request(request: RefinementRequest, triples: list[Triple]) -> str:
    """Render the refinement user message: one Ensure line per include, one
    Remove line per exclude (representative surfaces), the free-form text
    verbatim, then the output-format footer."""
    out_of_range = [i for i in (request.include | request.exclude)
                    if i < 0 or i >= len(triples)]
    if out_of_range:
        raise ValidationError(f"triple indices out of range: {sorted(out_of_range)}")

    lines = ["Thank you. Please address the following requests in your summary."]
    for i in sorted(request.include):
        lines.append(
            f"* Ensure that the summary includes content related to the triple {_triple_phrase(triples[i])}."
        )
    for i in sorted(request.exclude):
        lines.append(
            f"* Remove any content related to the triple {_triple_phrase(triples[i])}."
        )
    if request.freeform and request.freeform.strip():
        lines.append(request.freeform)
    lines.append("* Format the output as follows:")
    lines.append("[Summary]")
    lines.append("Content")
    return "\n".join(lines)


@dataclass
class DialogueState:
    """The summarize exchange plus a bounded tail of refinement turns."""

    base_messages: tuple[ChatMessage, ...]
    turns: list[tuple[str, str]] = field(default_factory=list)

    def conversation_for(self, new_user_content: str) -> Conversation:
        messages = list(self.base_messages)
        for user_text, assistant_text in self.turns[-HISTORY_BOUND:]:
            messages.append(ChatMessage(role=Role.USER, content=user_text))
            messages.append(ChatMessage(role=Role.ASSISTANT, content=assistant_text))
        messages.append(ChatMessage(role=Role.USER, content=new_user_content))
        return Conversation(messages=tuple(messages), purpose=Purpose.REFINE)

    def record_turn(self, user_content: str, assistant_content: str):
        self.turns.append((user_content, assistant_content))

    def to_dict(self) -> dict:
        return {
            "base_messages": [m.to_wire() for m in self.base_messages],
            "turns": [{"user": u, "assistant": a} for u, a in self.turns],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DialogueState":
        return cls(
            base_messages=tuple(
                ChatMessage(role=Role(m["role"]), content=m["content"])
                for m in data["base_messages"]
            ),
            turns=[(t["user"], t["assistant"]) for t in data["turns"]],
        )


def summarize_auto(gateway: LlmGateway, docset: DocumentSet
                   ) -> tuple[DialogueState, Summary, list[ParseWarning]]:
    """Produce the version-0 automatic summary and the dialogue to build on."""
    conversation = render_prompt(
        Purpose.SUMMARIZE, {"articles": [d.body for d in docset.documents]}
    )
    reply = gateway.complete(conversation)
    body, warnings = parse_summary_response(reply.content)
    summary = make_summary(0, body, provenance=Provenance.AUTOMATIC)
    state = DialogueState(base_messages=conversation.messages + (reply,))
    return state, summary, warnings


def refine_summary(gateway: LlmGateway, state: DialogueState, request: RefinementRequest,
                   triples: list[Triple], next_version: int
                   ) -> tuple[Summary, list[ParseWarning]]:
    """Regenerate under the request's constraints; appends one dialogue turn."""
    if next_version < 1:
        raise InputError("refinement needs an existing version-0 summary")
    message = build_constraint_request(request, triples)
    conversation = state.conversation_for(message)
    reply = gateway.complete(conversation)
    body, warnings = parse_summary_response(reply.content)
    state.record_turn(message, reply.content)
    summary = make_summary(
        next_version, body, provenance=Provenance.REFINEMENT, request_id=request.id
    )
    return summary, warnings
