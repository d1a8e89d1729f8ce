"""Relational triples: extraction, strict-grammar parsing, entity clustering.

The response grammar is one bullet per triple, `* <Subject|Relation|Object>`.
Clustering responses may group coreferent mentions as `[A+B+C]` in the
subject or object slot. Lines that look like attempted triples but do not
parse are skipped and recorded as warnings; the pipeline never dies on a
formatting lapse.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .core import DocumentSet
from .errors import ExtractionEmptyError, InputError
from .gateway import LlmGateway, Purpose, render_prompt

_BULLET_RE = re.compile(r"^\*\s*<([^<>]*)>$")
_HEADER_RE = re.compile(r"^\[[^\[\]]*\]$")
_FORBIDDEN_CHARS = set("|<>")


@dataclass(frozen=True)
class Mention:
    """A surface form with its corpus frequency (case-insensitive,
    whole-token-boundary count over the concatenated document bodies)."""

    surface: str
    frequency: int = 0

    def __post_init__(self):
        if not self.surface or self.surface != self.surface.strip():
            raise InputError(f"mention surface must be non-empty and trimmed: {self.surface!r}")


@dataclass(frozen=True)
class EntityCluster:
    """Mentions of one entity plus the representative chosen for display."""

    mentions: tuple[Mention, ...]
    representative: str

    def __post_init__(self):
        if not self.mentions:
            raise InputError("a cluster needs at least one mention")
        surfaces = [m.surface for m in self.mentions]
        if len(set(surfaces)) != len(surfaces):
            raise InputError("cluster mentions must have distinct surfaces")
        if self.representative not in surfaces:
            raise InputError(
                f"representative {self.representative!r} is not one of the mentions"
            )

    def surfaces(self) -> tuple[str, ...]:
        return tuple(m.surface for m in self.mentions)


@dataclass(frozen=True)
class Triple:
    """One ⟨subject, relation, object⟩ unit. Fields never contain '|' or
    angle brackets; the grammar has no escape syntax."""

    subject: EntityCluster
    relation: str
    object: EntityCluster
    source_line: str = ""

    def __post_init__(self):
        if not self.relation:
            raise InputError("triple relation must be non-empty")
        for text in (self.relation, *self.subject.surfaces(), *self.object.surfaces()):
            bad = _FORBIDDEN_CHARS & set(text)
            if bad:
                raise InputError(f"triple field {text!r} contains forbidden {sorted(bad)}")


@dataclass(frozen=True)
class ParseWarning:
    line: str
    reason: str

    def to_dict(self) -> dict:
        return {"line": self.line, "reason": self.reason}


def singleton_cluster(surface: str, frequency: int = 0) -> EntityCluster:
    return EntityCluster(mentions=(Mention(surface, frequency),), representative=surface)


def serialize_triple(triple: Triple) -> str:
    """Render a triple back into the bullet grammar; multi-mention clusters
    use the [A+B] group form."""

    def field(cluster: EntityCluster) -> str:
        surfaces = cluster.surfaces()
        if len(surfaces) == 1:
            return surfaces[0]
        return "[" + "+".join(surfaces) + "]"

    return f"* <{field(triple.subject)}|{triple.relation}|{field(triple.object)}>"


def _split_payload(payload: str) -> list[str] | None:
    fields = [f.strip() for f in payload.split("|")]
    if len(fields) != 3 or not all(fields):
        return None
    return fields


def _parse_lines(text: str, allow_groups: bool):
    """Shared line scanner. Yields (fields, raw_line) or warnings.

    fields are [subject_surfaces, relation, object_surfaces]; surfaces are
    lists (singletons unless allow_groups and the slot uses [A+B] syntax).
    """
    parsed = []
    warnings: list[ParseWarning] = []
    for raw_line in text.splitlines():
        line = raw_line.strip()
        if not line or _HEADER_RE.match(line):
            continue
        if not line.startswith("*"):
            if "* <" in line:
                warnings.append(ParseWarning(raw_line, "triple bullet not at line start"))
            continue
        m = _BULLET_RE.match(line)
        if not m:
            warnings.append(ParseWarning(raw_line, "line does not match '* <A|B|C>'"))
            continue
        fields = _split_payload(m.group(1))
        if fields is None:
            warnings.append(
                ParseWarning(raw_line, "payload does not split into 3 non-empty fields on '|'")
            )
            continue
        subject_raw, relation, object_raw = fields
        try:
            subject = _parse_entity_slot(subject_raw, allow_groups)
            object_ = _parse_entity_slot(object_raw, allow_groups)
        except ValueError as exc:
            warnings.append(ParseWarning(raw_line, str(exc)))
            continue
        parsed.append((subject, relation, object_, raw_line))
    return parsed, warnings


def _parse_entity_slot(raw: str, allow_groups: bool) -> list[str]:
    if allow_groups and raw.startswith("[") and raw.endswith("]"):
        surfaces = [s.strip() for s in raw[1:-1].split("+")]
        if not surfaces or not all(surfaces):
            raise ValueError(f"malformed mention group {raw!r}")
        return surfaces
    return [raw]


def parse_triple_lines(text: str) -> tuple[list[Triple], list[ParseWarning]]:
    """Parse an extraction response into triples with singleton clusters.

    Tolerates a missing header, extra whitespace, and surrounding prose;
    every near-miss line becomes a ParseWarning instead of an error.
    """
    parsed, warnings = _parse_lines(text, allow_groups=False)
    triples = [
        Triple(
            subject=singleton_cluster(subject[0]),
            relation=relation,
            object=singleton_cluster(object_[0]),
            source_line=raw_line,
        )
        for subject, relation, object_, raw_line in parsed
    ]
    return triples, warnings


def count_frequency(surface: str, corpus: str) -> int:
    """Case-insensitive occurrences of `surface` at token boundaries."""
    pattern = rf"(?<!\w){re.escape(surface)}(?!\w)"
    return len(re.findall(pattern, corpus, re.IGNORECASE))


def _first_occurrence(surface: str, corpus: str) -> int:
    pattern = rf"(?<!\w){re.escape(surface)}(?!\w)"
    m = re.search(pattern, corpus, re.IGNORECASE)
    return m.start() if m else len(corpus) + 1


def select_representative(cluster: EntityCluster, docset: DocumentSet) -> str:
    """Pick the display mention: highest corpus frequency, then longer
    surface, then earliest first occurrence in document order (surfaces
    absent from the corpus sort last; a casefolded-lexicographic key makes
    the choice total and order-independent)."""
    corpus = docset.concatenated_bodies()

    def key(mention: Mention):
        return (
            -mention.frequency,
            -len(mention.surface),
            _first_occurrence(mention.surface, corpus),
            mention.surface.casefold(),
        )

    return min(cluster.mentions, key=key).surface


def _with_frequencies(surfaces: list[str], docset: DocumentSet) -> list[Mention]:
    corpus = docset.concatenated_bodies()
    return [Mention(s, count_frequency(s, corpus)) for s in surfaces]


def _triple_key(triple: Triple) -> tuple:
    return (
        triple.subject.representative.casefold(),
        triple.relation.casefold(),
        triple.object.representative.casefold(),
    )


def extract_triples(gateway: LlmGateway, docset: DocumentSet
                    ) -> tuple[list[Triple], list[ParseWarning]]:
    """Run the extraction prompt over the document set.

    Returns triples whose subjects/objects are singleton clusters carrying
    corpus frequencies. Exact duplicates (case-insensitive on all three
    fields) are dropped, first occurrence kept. A response with zero
    parsable triples raises ExtractionEmptyError carrying the raw text.
    """
    conversation = render_prompt(
        Purpose.EXTRACT_TRIPLES, {"document": docset.concatenated_bodies()}
    )
    reply = gateway.complete(conversation)
    parsed, warnings = parse_triple_lines(reply.content)
    if not parsed:
        raise ExtractionEmptyError(
            "extraction response contained no parsable triples", raw_response=reply.content
        )
    corpus = docset.concatenated_bodies()
    deduped: list[Triple] = []
    seen = set()
    for triple in parsed:
        key = _triple_key(triple)
        if key in seen:
            continue
        seen.add(key)
        deduped.append(
            Triple(
                subject=singleton_cluster(
                    triple.subject.representative,
                    count_frequency(triple.subject.representative, corpus),
                ),
                relation=triple.relation,
                object=singleton_cluster(
                    triple.object.representative,
                    count_frequency(triple.object.representative, corpus),
                ),
                source_line=triple.source_line,
            )
        )
    return deduped, warnings


def cluster_entities(gateway: LlmGateway, docset: DocumentSet, triples: list[Triple]
                     ) -> tuple[list[Triple], list[EntityCluster], list[ParseWarning]]:
    """Run the coreference prompt and merge mention clusters.

    Groups sharing any surface (casefolded) are merged transitively; every
    triple's subject/object is rewritten to its merged cluster; entities
    the response never grouped stay singletons. An unparsable response
    degrades to singleton clusters with a warning instead of failing.
    """
    triples_response = "[Relation Triples]\n" + "\n".join(
        serialize_triple(t) for t in triples
    )
    conversation = render_prompt(
        Purpose.CLUSTER_ENTITIES,
        {"document": docset.concatenated_bodies(), "triples_response": triples_response},
    )
    reply = gateway.complete(conversation)
    parsed, warnings = _parse_lines(reply.content, allow_groups=True)

    if not parsed:
        warnings.append(
            ParseWarning(
                reply.content.splitlines()[0] if reply.content else "",
                "clustering response unparsable; keeping singleton clusters",
            )
        )
        return list(triples), _referenced_clusters(triples), warnings

    # Union-find over casefolded surfaces, seeded with the triples' own.
    parent: dict[str, str] = {}
    originals: dict[str, set[str]] = {}

    def find(key: str) -> str:
        while parent[key] != key:
            parent[key] = parent[parent[key]]
            key = parent[key]
        return key

    def add(surface: str) -> str:
        key = surface.casefold()
        if key not in parent:
            parent[key] = key
            originals[key] = set()
        originals[key].add(surface)
        return key

    def union(keys: list[str]):
        roots = sorted({find(k) for k in keys})
        for other in roots[1:]:
            parent[other] = roots[0]

    for triple in triples:
        for surface in (*triple.subject.surfaces(), *triple.object.surfaces()):
            add(surface)
    for subject, _, object_, _ in parsed:
        for group in (subject, object_):
            union([add(s) for s in group])

    # Materialize merged clusters keyed by root.
    members: dict[str, set[str]] = {}
    for key in parent:
        members.setdefault(find(key), set()).update(originals[key])
    clusters_by_root: dict[str, EntityCluster] = {}
    for root, surfaces in members.items():
        mentions = tuple(
            sorted(_with_frequencies(sorted(surfaces), docset), key=lambda m: m.surface)
        )
        interim = EntityCluster(mentions=mentions, representative=mentions[0].surface)
        clusters_by_root[root] = EntityCluster(
            mentions=mentions, representative=select_representative(interim, docset)
        )

    def cluster_for(surface: str) -> EntityCluster:
        return clusters_by_root[find(surface.casefold())]

    rewritten = [
        Triple(
            subject=cluster_for(t.subject.representative),
            relation=t.relation,
            object=cluster_for(t.object.representative),
            source_line=t.source_line,
        )
        for t in triples
    ]
    return rewritten, _referenced_clusters(rewritten), warnings


def _referenced_clusters(triples: list[Triple]) -> list[EntityCluster]:
    """Distinct clusters used by at least one triple, in first-use order."""
    seen: dict[str, EntityCluster] = {}
    for triple in triples:
        for cluster in (triple.subject, triple.object):
            seen.setdefault(cluster.representative.casefold(), cluster)
    return list(seen.values())
