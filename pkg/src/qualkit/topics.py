"""Keyword topics from cluster labels or LDA posteriors.

Keyword scoring is class-based TF-IDF: a lemma's share of its cluster's
tokens times log(1 + C/cf), where cf counts the clusters containing the
lemma. Topic reduction greedily merges the closest centroid pair and
rescores every topic, since merging changes the class statistics globally.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cluster import ClusterLabels
from .errors import NoTopics
from .lda import LdaModel, top_keywords


@dataclass(frozen=True)
class Keyword:
    lemma: str
    weight: float


@dataclass(frozen=True, eq=False)
class Topic:
    topic_id: int
    keywords: tuple[Keyword, ...]  # sorted by weight desc
    members: tuple[int, ...]       # modeled-unit indices
    centroid: np.ndarray | None


@dataclass(frozen=True, eq=False)
class TopicModelResult:
    topics: tuple[Topic, ...]
    method: str
    assignments: tuple[int, ...]   # per modeled unit; -1 = noise
    noise_units: tuple[int, ...]
    unit_lemmas: tuple[tuple[str, ...], ...]
    unit_vectors: np.ndarray | None = None
    keywords_per_topic: int = 10

    @property
    def topic_ids(self) -> tuple[int, ...]:
        return tuple(t.topic_id for t in self.topics)


def _unit_lemmas_of(corpus_or_units) -> tuple[tuple[str, ...], ...]:
    if hasattr(corpus_or_units, "modeled_sentences"):
        return tuple(s.lemmas for s in corpus_or_units.modeled_sentences)
    return tuple(tuple(u) for u in corpus_or_units)


def ctfidf_scores(unit_lemmas: Sequence[Sequence[str]],
                  assignments: Sequence[int]) -> dict[int, dict[str, float]]:
    """Per-cluster lemma scores: (tf / cluster tokens) * log(1 + C / cf)."""
    clusters = sorted({a for a in assignments if a >= 0})
    counts: dict[int, dict[str, int]] = {c: {} for c in clusters}
    totals: dict[int, int] = {c: 0 for c in clusters}
    for unit, a in zip(unit_lemmas, assignments):
        if a < 0:
            continue
        bag = counts[a]
        for lemma in unit:
            bag[lemma] = bag.get(lemma, 0) + 1
            totals[a] += 1
    n_classes = len(clusters)
    class_freq: dict[str, int] = {}
    for c in clusters:
        for lemma in counts[c]:
            class_freq[lemma] = class_freq.get(lemma, 0) + 1
    scores: dict[int, dict[str, float]] = {}
    for c in clusters:
        total = totals[c]
        scores[c] = {
            lemma: (tf / total) * np.log(1.0 + n_classes / class_freq[lemma])
            for lemma, tf in counts[c].items()
        } if total else {}
    return scores


def _top_m(score_table: dict[str, float], m: int) -> tuple[Keyword, ...]:
    ranked = sorted(score_table.items(), key=lambda kv: (-kv[1], kv[0]))
    return tuple(Keyword(lemma=k, weight=float(v)) for k, v in ranked[:m])


def assemble_topics(labels, corpus_or_units, m: int = 10,
                    unit_vectors: np.ndarray | None = None,
                    method: str = "cluster") -> TopicModelResult:
    """One topic per non-noise cluster, keywords by class-based TF-IDF."""
    assignments = labels.labels if isinstance(labels, ClusterLabels) else np.asarray(labels)
    units = _unit_lemmas_of(corpus_or_units)
    if len(units) != len(assignments):
        raise ValueError(f"{len(units)} units but {len(assignments)} labels")
    clusters = sorted({int(a) for a in assignments if a >= 0})
    if not clusters:
        raise NoTopics("every unit is noise; nothing to assemble")
    scores = ctfidf_scores(units, assignments)
    topics = []
    for c in clusters:
        members = tuple(int(i) for i in np.nonzero(np.asarray(assignments) == c)[0])
        centroid = None
        if unit_vectors is not None and members:
            centroid = np.asarray(unit_vectors)[list(members)].mean(axis=0)
        topics.append(Topic(topic_id=c, keywords=_top_m(scores[c], m),
                            members=members, centroid=centroid))
    noise = tuple(int(i) for i in np.nonzero(np.asarray(assignments) < 0)[0])
    return TopicModelResult(topics=tuple(topics), method=method,
                            assignments=tuple(int(a) for a in assignments),
                            noise_units=noise, unit_lemmas=units,
                            unit_vectors=unit_vectors, keywords_per_topic=m)


def topics_from_lda(model: LdaModel, corpus_or_units, m: int = 10) -> TopicModelResult:
    """Topics straight from the word distributions; units assigned by argmax theta."""
    units = _unit_lemmas_of(corpus_or_units)
    if len(units) != model.theta.shape[0]:
        raise ValueError("unit count does not match theta rows")
    assignments = np.argmax(model.theta, axis=1)
    topics = []
    for k in range(model.K):
        members = tuple(int(i) for i in np.nonzero(assignments == k)[0])
        kws = tuple(Keyword(lemma=w, weight=float(p))
                    for w, p in top_keywords(model, k, m))
        topics.append(Topic(topic_id=k, keywords=kws, members=members, centroid=None))
    return TopicModelResult(topics=tuple(topics), method="lda",
                            assignments=tuple(int(a) for a in assignments),
                            noise_units=(), unit_lemmas=units,
                            unit_vectors=None, keywords_per_topic=m)


def _centroids(result: TopicModelResult) -> dict[int, np.ndarray]:
    """Embedding-mean centroids; falls back to bag-of-lemma count means."""
    if result.unit_vectors is not None:
        vectors = np.asarray(result.unit_vectors, dtype=float)
    else:
        vocab = sorted({l for u in result.unit_lemmas for l in u})
        index = {l: i for i, l in enumerate(vocab)}
        vectors = np.zeros((len(result.unit_lemmas), max(len(vocab), 1)))
        for i, unit in enumerate(result.unit_lemmas):
            for lemma in unit:
                vectors[i, index[lemma]] += 1.0
    return {t.topic_id: vectors[list(t.members)].mean(axis=0) for t in result.topics}


def _cosine(a: np.ndarray, b: np.ndarray) -> float:
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


def reduce_topics(result: TopicModelResult, target: int) -> TopicModelResult:
    """Merge the most similar centroid pair until at most `target` topics remain.

    Ties pick the lowest id pair; the merged topic keeps the smaller id and
    all keywords are rescored because class counts shift with every merge.
    """
    if target < 1:
        raise ValueError("target must be >= 1")
    if len(result.topics) <= target:
        return result
    assignments = np.asarray(result.assignments).copy()
    centroids = _centroids(result)
    member_count = {t.topic_id: len(t.members) for t in result.topics}
    ids = sorted(centroids)
    while len(ids) > target:
        best_pair, best_sim = None, -np.inf
        for i_pos in range(len(ids)):
            for j_pos in range(i_pos + 1, len(ids)):
                pair = (ids[i_pos], ids[j_pos])
                sim = _cosine(centroids[pair[0]], centroids[pair[1]])
                if sim > best_sim:
                    best_pair, best_sim = pair, sim
        a, b = best_pair
        wa, wb = member_count[a], member_count[b]
        centroids[a] = (centroids[a] * wa + centroids[b] * wb) / (wa + wb)
        member_count[a] = wa + wb
        del centroids[b], member_count[b]
        assignments[assignments == b] = a
        ids = sorted(centroids)
    relabeled = ClusterLabels(labels=assignments, n_clusters=len(ids))
    merged = assemble_topics(relabeled, result.unit_lemmas, m=result.keywords_per_topic,
                             unit_vectors=result.unit_vectors, method=result.method)
    return merged


def topic_diversity(result: TopicModelResult, k: int = 25) -> float:
    """Unique lemmas among every topic's top-k over k*T; k clamps to the
    shortest keyword list."""
    topics = result.topics
    if not topics or any(len(t.keywords) == 0 for t in topics):
        raise ValueError("every topic needs at least one keyword")
    k_eff = min(k, min(len(t.keywords) for t in topics))
    seen = {kw.lemma for t in topics for kw in t.keywords[:k_eff]}
    return len(seen) / (k_eff * len(topics))
