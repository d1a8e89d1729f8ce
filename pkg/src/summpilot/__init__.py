"""Session-based, human-in-the-loop multi-document summarization engine.

Pipeline: relation-triple extraction → entity clustering → semantic graph →
automatic summary → constraint-driven refinement → explainable evaluation
(compression, coverage, factual consistency with flagged possible errors).
Served over REST, driven in batch from the CLI, backed by any chat-completion
endpoint or a deterministic scripted provider.
"""

from .core import (
    Document,
    DocumentSet,
    Provenance,
    Sentence,
    Summary,
    make_document_set,
    make_summary,
    normalize_text,
    split_sentences,
)
from .errors import (
    ConstraintConflictError,
    EmptySummaryError,
    ExtractionEmptyError,
    InputError,
    ProtocolError,
    ProviderError,
    ProviderTimeoutError,
    SummPilotError,
    TemplateError,
    ValidationError,
)
from .evaluation import (
    AtomicFact,
    EvaluationReport,
    Fragment,
    Token,
    Verdict,
    compression,
    coverage,
    decompose_facts,
    evaluate,
    extractive_fragments,
    tokenize,
    verify_fact,
)
from .extraction import (
    EntityCluster,
    Mention,
    ParseWarning,
    Triple,
    cluster_entities,
    count_frequency,
    extract_triples,
    parse_triple_lines,
    select_representative,
    serialize_triple,
    singleton_cluster,
)
from .gateway import (
    ChatMessage,
    CompletionParams,
    Conversation,
    HttpChatProvider,
    LlmGateway,
    ProviderConfig,
    Purpose,
    Role,
    ScriptedProvider,
    render_prompt,
)
from .graph import (
    GraphEdge,
    GraphNode,
    SemanticGraph,
    build_graph,
    export_dot,
    export_graph_json,
    graph_to_dict,
    node_size,
)
from .summarize import (
    HISTORY_BOUND,
    DialogueState,
    RefinementRequest,
    build_constraint_request,
    parse_summary_response,
    refine_summary,
    summarize_auto,
)

__version__ = "0.1.0"
