"""Corpus-based topic coherence: UMass, UCI, NPMI, C_v.

Counts come from boolean word presence in sliding windows over each
sentence (stride 1; short sentences collapse to a single window). UMass
uses whole-document counts instead, per its usual convention. The corpus
being scored is its own reference corpus.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import MetricUndefined

log = logging.getLogger("qualkit.coherence")

EPSILON = 1e-12
UCI_WINDOW = 10
CV_WINDOW = 110


@dataclass(frozen=True)
class MetricReport:
    """One comparison-table column; None renders as NA where a metric is
    undefined for the method (silhouette off K-means paths, DBCV off
    density paths) or could not be computed."""
    c_v: float | None
    umass: float | None
    npmi: float | None
    uci: float | None
    topic_diversity: float | None
    silhouette: float | None
    dbcv: float | None

    ROWS = ("c_v", "umass", "npmi", "uci", "topic_diversity", "silhouette", "dbcv")

    def cell(self, row: str) -> str:
        value = getattr(self, row)
        return "NA" if value is None else f"{value:.3f}"

    def as_dict(self) -> dict:
        return {row: getattr(self, row) for row in self.ROWS}


@dataclass(frozen=True)
class CooccurrenceCounts:
    """Boolean presence counts; window == 0 means whole-unit granularity."""
    window: int
    total_windows: int
    word_counts: dict[str, int] = field(default_factory=dict)
    pair_counts: dict[tuple[str, str], int] = field(default_factory=dict)

    def count(self, word: str) -> int:
        return self.word_counts.get(word, 0)

    def pair(self, a: str, b: str) -> int:
        if a == b:
            return self.count(a)
        key = (a, b) if a < b else (b, a)
        return self.pair_counts.get(key, 0)

    def probability(self, word: str) -> float:
        return self.count(word) / self.total_windows if self.total_windows else 0.0

    def pair_probability(self, a: str, b: str) -> float:
        return self.pair(a, b) / self.total_windows if self.total_windows else 0.0


def _units_of(corpus_or_units) -> list[Sequence[str]]:
    if hasattr(corpus_or_units, "modeled_sentences"):
        return [s.lemmas for s in corpus_or_units.modeled_sentences]
    return [list(u) for u in corpus_or_units]


def _accumulate(windows: list[frozenset[str]]) -> CooccurrenceCounts:
    word_counts: dict[str, int] = {}
    pair_counts: dict[tuple[str, str], int] = {}
    for window in windows:
        ordered = sorted(window)
        for w in ordered:
            word_counts[w] = word_counts.get(w, 0) + 1
        for i in range(len(ordered)):
            for j in range(i + 1, len(ordered)):
                key = (ordered[i], ordered[j])
                pair_counts[key] = pair_counts.get(key, 0) + 1
    return CooccurrenceCounts(window=0, total_windows=len(windows),
                              word_counts=word_counts, pair_counts=pair_counts)


def count_windows(corpus_or_units, window: int) -> CooccurrenceCounts:
    """Sliding windows of `window` tokens per sentence, stride 1."""
    if window < 1:
        raise ValueError("window must be >= 1")
    windows: list[frozenset[str]] = []
    for unit in _units_of(corpus_or_units):
        tokens = list(unit)
        if not tokens:
            continue
        if len(tokens) <= window:
            windows.append(frozenset(tokens))
        else:
            for start in range(len(tokens) - window + 1):
                windows.append(frozenset(tokens[start:start + window]))
    counts = _accumulate(windows)
    return CooccurrenceCounts(window=window, total_windows=counts.total_windows,
                              word_counts=counts.word_counts, pair_counts=counts.pair_counts)


def count_documents(corpus_or_docs) -> CooccurrenceCounts:
    """One boolean window per document (UMass granularity)."""
    if hasattr(corpus_or_docs, "documents"):
        doc_sets = [frozenset(l for s in doc.sentences for l in s.lemmas)
                    for doc in corpus_or_docs.documents]
    else:
        doc_sets = [frozenset(d) for d in corpus_or_docs]
    doc_sets = [d for d in doc_sets if d]
    return _accumulate(doc_sets)


def _lemmas_only(keywords) -> list[str]:
    out = []
    for kw in keywords:
        out.append(kw.lemma if hasattr(kw, "lemma") else str(kw))
    return out


def umass(keywords, counts: CooccurrenceCounts) -> float:
    """Mean of log((D(w_i,w_j)+1)/D(w_j)) over ordered pairs i > j,
    keywords in weight-descending order."""
    words = _lemmas_only(keywords)
    if len(words) < 2:
        raise MetricUndefined("umass needs at least 2 keywords")
    values = []
    for i in range(1, len(words)):
        for j in range(i):
            wi, wj = words[i], words[j]
            if counts.count(wi) == 0 or counts.count(wj) == 0:
                log.warning("umass: skipping pair (%s, %s); word missing from corpus", wi, wj)
                continue
            values.append(np.log((counts.pair(wi, wj) + 1.0) / counts.count(wj)))
    if not values:
        raise MetricUndefined("umass: every keyword pair was skipped")
    return float(np.mean(values))


def _pmi(counts: CooccurrenceCounts, a: str, b: str) -> float:
    p_ab = counts.pair_probability(a, b)
    p_a, p_b = counts.probability(a), counts.probability(b)
    return float(np.log((p_ab + EPSILON) / (p_a * p_b)))


def uci(keywords, counts: CooccurrenceCounts) -> float:
    """Mean PMI with epsilon smoothing over unordered keyword pairs."""
    words = _lemmas_only(keywords)
    if len(words) < 2:
        raise MetricUndefined("uci needs at least 2 keywords")
    values = []
    for i in range(len(words)):
        for j in range(i + 1, len(words)):
            wi, wj = words[i], words[j]
            if counts.count(wi) == 0 or counts.count(wj) == 0:
                log.warning("uci: skipping pair (%s, %s); word missing from corpus", wi, wj)
                continue
            values.append(_pmi(counts, wi, wj))
    if not values:
        raise MetricUndefined("uci: every keyword pair was skipped")
    return float(np.mean(values))


def _npmi_pair(counts: CooccurrenceCounts, a: str, b: str) -> float:
    p_ab = counts.pair_probability(a, b)
    denom = -np.log(p_ab + EPSILON)
    if denom <= 0.0:  # pair present in every window: perfect association
        return 1.0
    value = _pmi(counts, a, b) / denom
    return float(min(1.0, max(-1.0, value)))


def npmi(keywords, counts: CooccurrenceCounts) -> float:
    """Mean normalized PMI over unordered keyword pairs, each in [-1, 1]."""
    words = _lemmas_only(keywords)
    if len(words) < 2:
        raise MetricUndefined("npmi needs at least 2 keywords")
    values = []
    for i in range(len(words)):
        for j in range(i + 1, len(words)):
            wi, wj = words[i], words[j]
            if counts.count(wi) == 0 or counts.count(wj) == 0:
                log.warning("npmi: skipping pair (%s, %s); word missing from corpus", wi, wj)
                continue
            values.append(_npmi_pair(counts, wi, wj))
    if not values:
        raise MetricUndefined("npmi: every keyword pair was skipped")
    return float(np.mean(values))


def c_v(keywords, counts: CooccurrenceCounts) -> float:
    """One-set segmentation: each word's NPMI context vector against the
    summed vector of the whole set, scored by cosine, then averaged.

    A zero context vector scores 0 for its segment.
    """
    words = _lemmas_only(keywords)
    present = [w for w in words if counts.count(w) > 0]
    for w in words:
        if counts.count(w) == 0:
            log.warning("c_v: dropping keyword %s; word missing from corpus", w)
    if len(present) < 2:
        raise MetricUndefined("c_v needs at least 2 corpus-attested keywords")
    m = len(present)
    vectors = np.zeros((m, m))
    for i in range(m):
        for j in range(m):
            vectors[i, j] = _npmi_pair(counts, present[i], present[j])
    summed = vectors.sum(axis=0)
    sims = []
    norm_sum = np.linalg.norm(summed)
    for i in range(m):
        norm_i = np.linalg.norm(vectors[i])
        if norm_i == 0.0 or norm_sum == 0.0:
            sims.append(0.0)
            continue
        sims.append(float(np.dot(vectors[i], summed) / (norm_i * norm_sum)))
    return float(np.mean(sims))


def average_over_topics(metric: Callable[[Sequence, CooccurrenceCounts], float],
                        topic_keyword_lists: Sequence[Sequence],
                        counts: CooccurrenceCounts) -> float:
    """Arithmetic mean of a per-topic metric, skipping undefined topics."""
    values = []
    for keywords in topic_keyword_lists:
        try:
            values.append(metric(keywords, counts))
        except MetricUndefined as exc:
            log.warning("topic skipped in %s: %s", getattr(metric, "__name__", "metric"), exc)
    if not values:
        raise MetricUndefined("metric undefined for every topic")
    return float(np.mean(values))
