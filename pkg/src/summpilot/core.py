"""Canonical domain types, text normalization, and sentence segmentation.

Everything downstream (extraction, summarization, evaluation, the service)
works on these immutable values. Offsets are Unicode scalar indices, never
bytes, so UI highlighting stays encoding-agnostic.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Optional

from .errors import InputError

# Tokens ending at a period that never terminate a sentence.
ABBREVIATIONS = frozenset({"mr.", "mrs.", "dr.", "u.s.", "etc.", "e.g.", "i.e.", "vs."})

_TERMINATORS = ".!?"


def normalize_text(raw) -> str:
    """Canonicalize input text: NFC, LF newlines, trimmed ends.

    Interior whitespace runs are preserved. Bytes are accepted and decoded
    as UTF-8; undecodable bytes or lone surrogates raise InputError.
    """
    if isinstance(raw, (bytes, bytearray)):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InputError(f"input is not valid UTF-8: {exc}") from exc
    if not isinstance(raw, str):
        raise InputError(f"expected text, got {type(raw).__name__}")
    try:
        raw.encode("utf-8")
    except UnicodeEncodeError as exc:
        raise InputError(f"input contains unpaired surrogates: {exc}") from exc
    text = unicodedata.normalize("NFC", raw)
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    return text.strip()


@dataclass(frozen=True)
class Document:
    """One input article. Body is canonical text (see normalize_text)."""

    id: str
    body: str
    title: Optional[str] = None

    def __post_init__(self):
        if not self.body:
            raise InputError(f"document {self.id!r} has an empty body after normalization")


@dataclass(frozen=True)
class DocumentSet:
    """The ordered input articles of one session."""

    documents: tuple[Document, ...]
    created_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    def __post_init__(self):
        if not self.documents:
            raise InputError("a document set needs at least one document")
        ids = [d.id for d in self.documents]
        if len(set(ids)) != len(ids):
            raise InputError("document ids must be unique within a set")

    def concatenated_bodies(self) -> str:
        return "\n\n".join(d.body for d in self.documents)


def make_document_set(bodies, titles=None, created_at=None) -> DocumentSet:
    """Build a DocumentSet from raw texts, normalizing and numbering them."""
    titles = titles or [None] * len(bodies)
    docs = tuple(
        Document(id=f"doc-{i + 1}", body=normalize_text(body), title=title)
        for i, (body, title) in enumerate(zip(bodies, titles))
    )
    if created_at is not None:
        return DocumentSet(documents=docs, created_at=created_at)
    return DocumentSet(documents=docs)


@dataclass(frozen=True)
class Sentence:
    """One sentence of a parent text, with its [start, end) character span."""

    index: int
    text: str
    start: int
    end: int


class Provenance(Enum):
    AUTOMATIC = "automatic"
    REFINEMENT = "refinement"


@dataclass(frozen=True)
class Summary:
    """A versioned summary. Version 0 is always the automatic one."""

    version: int
    text: str
    sentences: tuple[Sentence, ...]
    provenance: Provenance
    request_id: Optional[int] = None

    def __post_init__(self):
        if self.version == 0 and self.provenance is not Provenance.AUTOMATIC:
            raise InputError("version 0 must have automatic provenance")
        if self.provenance is Provenance.REFINEMENT and self.request_id is None:
            raise InputError("refinement summaries must record the request id")


def make_summary(version: int, text: str, provenance: Provenance = Provenance.AUTOMATIC,
                 request_id: Optional[int] = None) -> Summary:
    return Summary(
        version=version,
        text=text,
        sentences=tuple(split_sentences(text)),
        provenance=provenance,
        request_id=request_id,
    )


def _is_abbreviation(text: str, period_idx: int) -> bool:
    """True when the token ending at text[period_idx] == '.' is an abbreviation."""
    start = period_idx
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    token = text[start:period_idx + 1].lower()
    for abbr in ABBREVIATIONS:
        if token == abbr:
            return True
        if token.endswith(abbr) and not token[-len(abbr) - 1].isalnum():
            return True
    return False


def split_sentences(text: str) -> list[Sentence]:
    """Rule-based sentence segmentation over canonical text.

    A split happens after a run of '.', '!', '?' that is followed by
    whitespace plus an uppercase letter, or by end of text. A final period
    belonging to an abbreviation (ABBREVIATIONS) suppresses the split.
    Spans exclude surrounding whitespace and jointly cover every
    non-whitespace character exactly once.
    """
    n = len(text)
    if not text.strip():
        return []
    boundaries: list[int] = []
    i = 0
    while i < n:
        if text[i] not in _TERMINATORS:
            i += 1
            continue
        run_end = i
        while run_end + 1 < n and text[run_end + 1] in _TERMINATORS:
            run_end += 1
        after = run_end + 1
        k = after
        while k < n and text[k].isspace():
            k += 1
        at_end = k >= n
        capital_follows = k > after and k < n and text[k].isupper()
        if (at_end or capital_follows) and not (
            text[run_end] == "." and _is_abbreviation(text, run_end)
        ):
            boundaries.append(after)
        i = run_end + 1

    if not boundaries or boundaries[-1] != n:
        boundaries.append(n)

    sentences: list[Sentence] = []
    seg_start = 0
    for boundary in boundaries:
        start, end = seg_start, boundary
        while start < end and text[start].isspace():
            start += 1
        while end > start and text[end - 1].isspace():
            end -= 1
        if start < end:
            sentences.append(
                Sentence(index=len(sentences), text=text[start:end], start=start, end=end)
            )
        seg_start = boundary
    return sentences
