"""Summary scoring: compression, coverage, factual consistency.

Compression and coverage are computed against the concatenated source
documents. Coverage uses greedy shared-fragment matching: at each summary
position take the longest match starting anywhere in the article (ties go
to the smallest article index), emit it, and continue after it. Factual
consistency decomposes each summary sentence into atomic facts and checks
them against the documents; sentences owning unverified facts are flagged
as possible errors.
"""

from __future__ import annotations

import unicodedata
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from typing import Sequence

import numpy as np

from .core import DocumentSet, Summary
from .errors import EmptySummaryError
from .extraction import ParseWarning
from .gateway import LlmGateway, Purpose, render_prompt

DEFAULT_VERIFY_PARALLELISM = 4
# Above this many characters of concatenated source text, facts are checked
# against each document separately and the verdicts are OR-ed.
DEFAULT_VERIFY_CONTEXT_CHARS = 400_000


@dataclass(frozen=True)
class Token:
    surface: str  # lowercased, edge punctuation stripped
    start: int
    end: int


@dataclass(frozen=True)
class Fragment:
    summary_start: int
    article_start: int
    length: int


class Verdict(Enum):
    VERIFIED = "verified"
    UNVERIFIED = "unverified"
    PENDING = "pending"


@dataclass(frozen=True)
class AtomicFact:
    text: str
    sentence_index: int
    verdict: Verdict = Verdict.PENDING


@dataclass(frozen=True)
class EvaluationReport:
    compression: float
    coverage: float
    consistency: float
    facts: tuple[AtomicFact, ...]
    flagged_sentences: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "compression": self.compression,
            "coverage": self.coverage,
            "consistency": self.consistency,
            "facts": [
                {"text": f.text, "sentence_index": f.sentence_index, "verdict": f.verdict.value}
                for f in self.facts
            ],
            "flagged_sentences": list(self.flagged_sentences),
        }


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize(text: str) -> list[Token]:
    """Whitespace split, strip edge punctuation (Unicode P*), lowercase."""
    tokens: list[Token] = []
    n = len(text)
    i = 0
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        start = i
        while i < n and not text[i].isspace():
            i += 1
        cs, ce = start, i
        while cs < ce and _is_punct(text[cs]):
            cs += 1
        while ce > cs and _is_punct(text[ce - 1]):
            ce -= 1
        if cs < ce:
            tokens.append(Token(surface=text[cs:ce].lower(), start=cs, end=ce))
    return tokens


def _greedy_fragment_scan(article, summary, out):
    """Greedy shared-fragment scan over integer-encoded token sequences.

    Writes (summary_start, article_start, length) rows into the flat `out`
    buffer (caller-allocated, >= 3*len(summary) slots) and returns the row
    count. Kept free of Python objects so it JIT-compiles as-is for the
    exhaustive equivalence suite.
    """
    n_a = article.shape[0]
    n_s = summary.shape[0]
    count = 0
    i = 0
    while i < n_s:
        best_len = 0
        best_j = -1
        t = summary[i]
        for j in range(n_a):
            if article[j] == t:
                k = 1
                while i + k < n_s and j + k < n_a and article[j + k] == summary[i + k]:
                    k += 1
                if k > best_len:
                    best_len = k
                    best_j = j
        if best_len > 0:
            out[count * 3] = i
            out[count * 3 + 1] = best_j
            out[count * 3 + 2] = best_len
            count += 1
            i += best_len
        else:
            i += 1
    return count


def _surfaces(tokens: Sequence) -> list[str]:
    return [t.surface if isinstance(t, Token) else t for t in tokens]


def extractive_fragments(article_tokens: Sequence, summary_tokens: Sequence) -> list[Fragment]:
    """Greedy left-to-right shared fragments; accepts Tokens or plain strings."""
    article = _surfaces(article_tokens)
    summary = _surfaces(summary_tokens)
    vocab: dict[str, int] = {}
    for s in article:
        vocab.setdefault(s, len(vocab))
    for s in summary:
        vocab.setdefault(s, len(vocab))
    a = np.fromiter((vocab[s] for s in article), dtype=np.int64, count=len(article))
    s = np.fromiter((vocab[t] for t in summary), dtype=np.int64, count=len(summary))
    out = np.empty(max(1, 3 * len(summary)), dtype=np.int64)
    count = _greedy_fragment_scan(a, s, out)
    return [
        Fragment(summary_start=int(out[r * 3]), article_start=int(out[r * 3 + 1]),
                 length=int(out[r * 3 + 2]))
        for r in range(count)
    ]


def _token_counts(docset: DocumentSet, summary: Summary) -> tuple[list[Token], list[Token]]:
    article_tokens = tokenize(docset.concatenated_bodies())
    summary_tokens = tokenize(summary.text)
    if not summary_tokens:
        raise EmptySummaryError("summary has no tokens to score")
    return article_tokens, summary_tokens


def compression(docset: DocumentSet, summary: Summary) -> float:
    """Source token count over summary token count (>= 1 means condensed)."""
    article_tokens, summary_tokens = _token_counts(docset, summary)
    return len(article_tokens) / len(summary_tokens)


def coverage(docset: DocumentSet, summary: Summary) -> float:
    """Fraction of summary tokens inside shared extractive fragments."""
    article_tokens, summary_tokens = _token_counts(docset, summary)
    fragments = extractive_fragments(article_tokens, summary_tokens)
    return sum(f.length for f in fragments) / len(summary_tokens)


def decompose_facts(gateway: LlmGateway, summary: Summary
                    ) -> tuple[list[AtomicFact], list[ParseWarning]]:
    """One decomposition prompt per sentence; bullets become pending facts.

    A sentence yielding no bullets contributes its own text as a single
    fact (with a warning); exact case-insensitive duplicates across the
    summary are dropped, first occurrence kept.
    """
    facts: list[AtomicFact] = []
    warnings: list[ParseWarning] = []
    for sentence in summary.sentences:
        conversation = render_prompt(Purpose.DECOMPOSE_FACTS, {"sentence": sentence.text})
        reply = gateway.complete(conversation)
        parsed = []
        for raw_line in reply.content.splitlines():
            line = raw_line.strip()
            if line.startswith("* ") and line[2:].strip():
                parsed.append(line[2:].strip())
        if not parsed:
            warnings.append(ParseWarning(
                reply.content.splitlines()[0] if reply.content else "",
                f"no facts parsed for sentence {sentence.index}; using the sentence itself",
            ))
            parsed = [sentence.text]
        facts.extend(AtomicFact(text=t, sentence_index=sentence.index) for t in parsed)

    deduped: list[AtomicFact] = []
    seen: set[str] = set()
    for fact in facts:
        key = fact.text.casefold()
        if key in seen:
            continue
        seen.add(key)
        deduped.append(fact)
    return deduped, warnings


def _parse_verdict(response: str) -> Verdict | None:
    parts = response.split()
    if not parts:
        return None
    token = parts[0]
    start, end = 0, len(token)
    while start < end and _is_punct(token[start]):
        start += 1
    while end > start and _is_punct(token[end - 1]):
        end -= 1
    word = token[start:end].casefold()
    if word == "true":
        return Verdict.VERIFIED
    if word == "false":
        return Verdict.UNVERIFIED
    return None


def _verify_against(gateway: LlmGateway, fact: AtomicFact, document_text: str
                    ) -> tuple[Verdict, list[ParseWarning]]:
    conversation = render_prompt(
        Purpose.VERIFY_FACT, {"document": document_text, "statement": fact.text}
    )
    last_response = ""
    for _ in range(2):
        reply = gateway.complete(conversation)
        last_response = reply.content
        verdict = _parse_verdict(reply.content)
        if verdict is not None:
            return verdict, []
    return Verdict.UNVERIFIED, [ParseWarning(
        last_response.splitlines()[0] if last_response else "",
        f"unrecognized verdict for fact {fact.text!r}; counting as unverified",
    )]


def verify_fact(gateway: LlmGateway, fact: AtomicFact, docset: DocumentSet,
                context_char_budget: int = DEFAULT_VERIFY_CONTEXT_CHARS
                ) -> tuple[Verdict, list[ParseWarning]]:
    """Judge one fact against the documents.

    The full concatenated text goes into one prompt when it fits the
    context budget; otherwise each document is checked separately and a
    single verified answer wins. Any response whose first token reads
    true/false is accepted; anything else gets one retry and then counts
    as unverified with a warning.
    """
    corpus = docset.concatenated_bodies()
    if len(corpus) <= context_char_budget:
        return _verify_against(gateway, fact, corpus)
    warnings: list[ParseWarning] = []
    for document in docset.documents:
        verdict, doc_warnings = _verify_against(gateway, fact, document.body)
        warnings.extend(doc_warnings)
        if verdict is Verdict.VERIFIED:
            return Verdict.VERIFIED, warnings
    return Verdict.UNVERIFIED, warnings


def evaluate(gateway: LlmGateway, docset: DocumentSet, summary: Summary,
             parallelism: int = DEFAULT_VERIFY_PARALLELISM,
             context_char_budget: int = DEFAULT_VERIFY_CONTEXT_CHARS
             ) -> tuple[EvaluationReport, list[ParseWarning]]:
    """Full report: compression, coverage, and fact-level consistency."""
    compression_value = compression(docset, summary)
    coverage_value = coverage(docset, summary)
    pending, warnings = decompose_facts(gateway, summary)

    workers = max(1, min(parallelism, len(pending)))
    with ThreadPoolExecutor(max_workers=workers) as executor:
        results = list(executor.map(
            lambda f: verify_fact(gateway, f, docset, context_char_budget), pending
        ))

    facts = []
    for fact, (verdict, fact_warnings) in zip(pending, results):
        facts.append(replace(fact, verdict=verdict))
        warnings.extend(fact_warnings)

    verified = sum(1 for f in facts if f.verdict is Verdict.VERIFIED)
    consistency = verified / len(facts)
    flagged = tuple(sorted({f.sentence_index for f in facts
                            if f.verdict is Verdict.UNVERIFIED}))
    report = EvaluationReport(
        compression=compression_value,
        coverage=coverage_value,
        consistency=consistency,
        facts=tuple(facts),
        flagged_sentences=flagged,
    )
    return report, warnings
