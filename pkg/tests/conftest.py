"""Shared fixtures: synthetic planted-vocabulary corpora and tiny transcripts.

The planted corpora use disjoint per-group vocabularies of invented
consonant-vowel words (no s/d/g finals), so the rule-based lemmatizer maps
every token to itself and no token collides with a stop word. Group
membership of each sentence is then an exact ground truth for clustering.
"""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import settings

from qualkit.corpus import (
    Corpus,
    Document,
    Sentence,
    SpeakerRole,
    Turn,
    apply_stopwords,
    build_corpus,
    default_stopwords,
    filter_interviewer,
    tokenize_lemmatize,
)

settings.register_profile("suite", deadline=None, max_examples=50)
settings.load_profile("suite")

CONSONANTS = "bcfhklmnprtvwz"
VOWELS = "aeiou"


def make_word(rng: np.random.Generator) -> str:
    parts = []
    for _ in range(3):
        parts.append(CONSONANTS[rng.integers(len(CONSONANTS))])
        parts.append(VOWELS[rng.integers(len(VOWELS))])
    parts.append(CONSONANTS[rng.integers(len(CONSONANTS))])
    return "".join(parts)


def build_planted_text(n_groups: int = 4, words_per_group: int = 30,
                       sentences_per_group: int = 50,
                       tokens_per_sentence: int = 8, seed: int = 7):
    """Raw transcript whose respondent sentences draw from disjoint
    per-group vocabularies; returns (text, group vocabularies)."""
    rng = np.random.default_rng(seed)
    words: list[str] = []
    seen: set[str] = set()
    while len(words) < n_groups * words_per_group:
        word = make_word(rng)
        if word not in seen:
            seen.add(word)
            words.append(word)
    groups = [tuple(words[g * words_per_group:(g + 1) * words_per_group])
              for g in range(n_groups)]
    lines = ["Interviewer: tell me everything."]
    for vocab in groups:
        for _ in range(sentences_per_group):
            toks = [vocab[rng.integers(words_per_group)]
                    for _ in range(tokens_per_sentence)]
            lines.append("Respondent: " + " ".join(toks) + ".")
    return "\n".join(lines), groups


def preprocess_text(raw: str, keep_interviewer: bool = False,
                    extra: tuple[str, ...] = ()) -> Corpus:
    corpus = build_corpus([("doc0", raw)])
    corpus = filter_interviewer(corpus, keep=keep_interviewer)
    corpus = tokenize_lemmatize(corpus)
    return apply_stopwords(corpus, default_stopwords(extra))


def corpus_from_units(units, doc_id: str = "doc0") -> Corpus:
    """Corpus built directly from lemma lists, bypassing the parser."""
    sentences = tuple(
        Sentence(doc_id=doc_id, turn_index=0, sentence_index=i,
                 raw=" ".join(unit) + ".", lemmas=tuple(unit))
        for i, unit in enumerate(units))
    turn = Turn(doc_id=doc_id, turn_index=0, role=SpeakerRole.RESPONDENT,
                raw_text=" ".join(s.raw for s in sentences))
    return Corpus(documents=(Document(doc_id=doc_id, turns=(turn,),
                                      sentences=sentences),))


def corpus_from_docs(doc_units) -> Corpus:
    """Multi-document corpus from lists of lemma lists, one per document."""
    docs = []
    for d, units in enumerate(doc_units):
        doc_id = f"doc{d}"
        sentences = tuple(
            Sentence(doc_id=doc_id, turn_index=0, sentence_index=i,
                     raw=" ".join(unit) + ".", lemmas=tuple(unit))
            for i, unit in enumerate(units))
        turn = Turn(doc_id=doc_id, turn_index=0, role=SpeakerRole.RESPONDENT,
                    raw_text=" ".join(s.raw for s in sentences))
        docs.append(Document(doc_id=doc_id, turns=(turn,), sentences=sentences))
    return Corpus(documents=tuple(docs))


def toy_units(seed: int = 123, n_units: int = 20):
    """Small varied-length corpus over five words for coherence checks."""
    rng = np.random.default_rng(seed)
    vocab = ["alpha", "bravo", "chair", "delta", "ember"]
    probs = np.array([0.30, 0.25, 0.20, 0.15, 0.10])
    units = []
    for _ in range(n_units):
        length = int(rng.integers(3, 15))
        units.append([vocab[int(rng.choice(5, p=probs))] for _ in range(length)])
    return units


TINY_TRANSCRIPT = """Interviewer: How is work going these days?
Respondent: Work keeps changing and working late is common.
I remember the early days of my career.
I: Anything else about the job?
R: Probably the best part is the team and the freedom.
Training took time and the career path stayed narrow.
"""


@pytest.fixture(scope="session")
def planted4_text():
    return build_planted_text()


@pytest.fixture(scope="session")
def planted4(planted4_text):
    return preprocess_text(planted4_text[0])


@pytest.fixture(scope="session")
def planted4_groups(planted4_text):
    return planted4_text[1]


@pytest.fixture(scope="session")
def planted4_truth(planted4):
    n = len(planted4.modeled_sentences)
    per_group = n // 4
    return [i // per_group for i in range(n)]


@pytest.fixture(scope="session")
def planted2():
    text, groups = build_planted_text(n_groups=2, seed=11)
    return preprocess_text(text), groups


@pytest.fixture(scope="session")
def planted_small():
    text, groups = build_planted_text(n_groups=4, words_per_group=10,
                                      sentences_per_group=12,
                                      tokens_per_sentence=6, seed=5)
    return preprocess_text(text), groups


@pytest.fixture(scope="session")
def toy20():
    units = toy_units()
    return units, corpus_from_units(units)


@pytest.fixture()
def tiny_corpus():
    return preprocess_text(TINY_TRANSCRIPT)
