"""Keyword co-occurrence concept graph and citation lookup.

Vertices are the deduplicated union of all topics' keywords. Edges connect
keywords that share a topic's keyword list (per-topic cliques), so topics
sharing a lemma join into one component through the shared vertex. Each
topic flags its heaviest keyword as the central vertex.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .topics import TopicModelResult


@dataclass(frozen=True)
class Vertex:
    lemma: str
    weight: float            # max weight across topics
    topics: tuple[int, ...]  # topic ids containing this lemma
    central_for: tuple[int, ...]


@dataclass(frozen=True)
class ConceptGraph:
    vertices: tuple[Vertex, ...]              # sorted by lemma
    edges: tuple[tuple[str, str], ...]        # unordered pairs stored sorted
    topics: tuple[tuple[int, tuple, str], ...]  # (id, keywords, central lemma)


@dataclass(frozen=True)
class CitationIndex:
    """lemma -> sentences (corpus order) whose lemma list contains it."""
    entries: dict[str, tuple]

    def lookup(self, lemma: str) -> tuple:
        return self.entries.get(lemma, ())

    def payload(self, lemma: str) -> list[dict]:
        return [{"doc": s.doc_id, "turn": s.turn_index,
                 "sentence": s.sentence_index, "text": s.raw}
                for s in self.lookup(lemma)]


def central_vertices(result: TopicModelResult) -> dict[int, str]:
    """Per topic, the heaviest keyword; ties go to the lexicographically
    smaller lemma."""
    centrals: dict[int, str] = {}
    for topic in result.topics:
        if not topic.keywords:
            raise ValueError(f"topic {topic.topic_id} has no keywords")
        best = min(topic.keywords, key=lambda kw: (-kw.weight, kw.lemma))
        centrals[topic.topic_id] = best.lemma
    return centrals


def build_graph(result: TopicModelResult) -> ConceptGraph:
    if not result.topics or all(len(t.keywords) == 0 for t in result.topics):
        raise ValueError("need at least one topic with keywords")
    centrals = central_vertices(result)

    weight: dict[str, float] = {}
    memberships: dict[str, list[int]] = {}
    for topic in result.topics:
        for kw in topic.keywords:
            weight[kw.lemma] = max(weight.get(kw.lemma, 0.0), kw.weight)
            memberships.setdefault(kw.lemma, []).append(topic.topic_id)

    central_for: dict[str, list[int]] = {}
    for tid, lemma in centrals.items():
        central_for.setdefault(lemma, []).append(tid)

    vertices = tuple(
        Vertex(lemma=lemma, weight=weight[lemma],
               topics=tuple(sorted(memberships[lemma])),
               central_for=tuple(sorted(central_for.get(lemma, ()))))
        for lemma in sorted(weight)
    )

    edge_set: set[tuple[str, str]] = set()
    for topic in result.topics:
        lemmas = [kw.lemma for kw in topic.keywords]
        for i in range(len(lemmas)):
            for j in range(i + 1, len(lemmas)):
                a, b = lemmas[i], lemmas[j]
                if a == b:
                    continue
                edge_set.add((a, b) if a < b else (b, a))
    edges = tuple(sorted(edge_set))

    topic_meta = tuple(
        (topic.topic_id, topic.keywords, centrals[topic.topic_id])
        for topic in sorted(result.topics, key=lambda t: t.topic_id)
    )
    return ConceptGraph(vertices=vertices, edges=edges, topics=topic_meta)


def build_citation_index(corpus) -> CitationIndex:
    entries: dict[str, list] = {}
    for sentence in corpus.sentences:
        for lemma in set(sentence.lemmas):
            entries.setdefault(lemma, []).append(sentence)
    return CitationIndex(entries={k: tuple(v) for k, v in entries.items()})


def citations_for(lemma: str, corpus) -> list:
    """Sentences (corpus order) whose lemma list contains `lemma`."""
    return [s for s in corpus.sentences if lemma in s.lemmas]


def graph_to_dict(graph: ConceptGraph) -> dict:
    return {
        "topics": [
            {"id": tid,
             "keywords": [{"lemma": kw.lemma, "weight": float(kw.weight)} for kw in kws],
             "central": central}
            for tid, kws, central in graph.topics
        ],
        "vertices": [
            {"lemma": v.lemma, "weight": float(v.weight),
             "topics": list(v.topics), "central_for": list(v.central_for)}
            for v in graph.vertices
        ],
        "edges": [{"source": a, "target": b} for a, b in graph.edges],
    }


def export_graph_json(graph: ConceptGraph, path=None) -> bytes:
    """Serialize with stable ordering (topics by id, vertices by lemma, edges
    by endpoint pair) so repeated exports are byte-identical."""
    payload = json.dumps(graph_to_dict(graph), ensure_ascii=False,
                         separators=(",", ":")).encode("utf-8")
    if path is not None:
        with open(path, "wb") as fh:
            fh.write(payload)
    return payload
