"""Chat message and conversation types used by every prompt."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ..errors import InputError


class Role(Enum):
    SYSTEM = "system"
    USER = "user"
    ASSISTANT = "assistant"


class Purpose(Enum):
    SUMMARIZE = "summarize"
    REFINE = "refine"
    EXTRACT_TRIPLES = "extract_triples"
    CLUSTER_ENTITIES = "cluster_entities"
    DECOMPOSE_FACTS = "decompose_facts"
    VERIFY_FACT = "verify_fact"


@dataclass(frozen=True)
class ChatMessage:
    role: Role
    content: str

    def __post_init__(self):
        if not self.content:
            raise InputError("chat messages must not be empty")

    def to_wire(self) -> dict:
        return {"role": self.role.value, "content": self.content}


@dataclass(frozen=True)
class Conversation:
    """An ordered prompt script: one system turn, then user/assistant turns.

    Consecutive user turns are allowed (the prompt scripts send instruction
    and payload as back-to-back user messages); consecutive assistant turns
    are not.
    """

    messages: tuple[ChatMessage, ...]
    purpose: Purpose

    def __post_init__(self):
        if not self.messages:
            raise InputError("a conversation needs at least one message")
        if self.messages[0].role is not Role.SYSTEM:
            raise InputError("the first message must have the system role")
        prev = Role.SYSTEM
        for msg in self.messages[1:]:
            if msg.role is Role.SYSTEM:
                raise InputError("only the first message may be a system message")
            if msg.role is Role.ASSISTANT and prev in (Role.SYSTEM, Role.ASSISTANT):
                raise InputError("assistant turns must follow a user turn")
            prev = msg.role

    def last_user_content(self) -> str:
        for msg in reversed(self.messages):
            if msg.role is Role.USER:
                return msg.content
        return ""

    def extended(self, *extra: ChatMessage) -> "Conversation":
        return Conversation(messages=self.messages + tuple(extra), purpose=self.purpose)


@dataclass(frozen=True)
class CompletionParams:
    """Request knobs; temperature defaults to 0 so runs stay reproducible."""

    temperature: float = 0.0
    max_output_tokens: int = 2048
    timeout: float = 60.0
    max_retries: int = 3

    def __post_init__(self):
        if self.temperature < 0:
            raise InputError("temperature must be >= 0")
        if self.max_output_tokens <= 0:
            raise InputError("max_output_tokens must be positive")
        if self.max_retries < 0:
            raise InputError("max_retries must be >= 0")
