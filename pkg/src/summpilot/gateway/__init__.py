from .messages import ChatMessage, CompletionParams, Conversation, Purpose, Role
from .providers import (
    API_KEY_ENV,
    HttpChatProvider,
    LlmGateway,
    Provider,
    ProviderConfig,
    ScriptedProvider,
    TransientTransportError,
)
from .templates import format_article_blocks, render_prompt, template_placeholders

__all__ = [
    "API_KEY_ENV",
    "ChatMessage",
    "CompletionParams",
    "Conversation",
    "HttpChatProvider",
    "LlmGateway",
    "Provider",
    "ProviderConfig",
    "Purpose",
    "Role",
    "ScriptedProvider",
    "TransientTransportError",
    "format_article_blocks",
    "render_prompt",
    "template_placeholders",
]
