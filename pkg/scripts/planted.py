"""Synthetic interview transcripts with disjoint per-group vocabularies.

Each group gets its own bag of pronounceable nonsense words; every
respondent sentence samples tokens from exactly one group. The group id of
each sentence is therefore a known ground truth that recovered topics can
be scored against.
"""

from __future__ import annotations

import numpy as np

from qualkit.corpus import (apply_stopwords, build_corpus, default_stopwords,
                            filter_interviewer, tokenize_lemmatize)

CONSONANTS = "bcfhklmnprtvwz"
VOWELS = "aeiou"


def make_word(rng: np.random.Generator) -> str:
    """CVCVCVC nonsense word; the final consonants avoid the inflection
    endings the lemmatizer rewrites, so tokens survive preprocessing."""
    parts = []
    for _ in range(3):
        parts.append(CONSONANTS[int(rng.integers(len(CONSONANTS)))])
        parts.append(VOWELS[int(rng.integers(len(VOWELS)))])
    parts.append(CONSONANTS[int(rng.integers(len(CONSONANTS)))])
    return "".join(parts)


def planted_transcript(n_groups: int, words_per_group: int,
                       sentences_per_group: int, tokens_per_sentence: int,
                       seed: int) -> tuple[str, list[list[str]]]:
    rng = np.random.default_rng(seed)
    groups: list[list[str]] = []
    seen: set[str] = set()
    for _ in range(n_groups):
        group: list[str] = []
        while len(group) < words_per_group:
            word = make_word(rng)
            if word not in seen:
                seen.add(word)
                group.append(word)
        groups.append(group)
    lines = ["Interviewer: tell me everything."]
    for group in groups:
        for _ in range(sentences_per_group):
            tokens = [group[int(rng.integers(len(group)))]
                      for _ in range(tokens_per_sentence)]
            lines.append("Respondent: " + " ".join(tokens) + ".")
    return "\n".join(lines) + "\n", groups


def preprocess(text: str):
    corpus = build_corpus([("doc0", text)])
    corpus = filter_interviewer(corpus, keep=False)
    corpus = tokenize_lemmatize(corpus)
    return apply_stopwords(corpus, default_stopwords())


def purity(assignments, sentences_per_group: int) -> float:
    """Majority-group share among non-noise units."""
    from collections import Counter
    votes: dict[int, Counter] = {}
    kept = 0
    for unit, label in enumerate(assignments):
        if label == -1:
            continue
        kept += 1
        votes.setdefault(label, Counter())[unit // sentences_per_group] += 1
    if kept == 0:
        return 0.0
    return sum(counter.most_common(1)[0][1] for counter in votes.values()) / kept
