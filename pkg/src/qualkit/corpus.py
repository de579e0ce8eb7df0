"""Transcript parsing, tokenization, stop-word handling and frequency tables.

A raw transcript is a plain UTF-8 text file. Every non-empty line becomes a
Turn; lines starting with a known speaker prefix get that role, unprefixed
lines inherit the previous role (Unknown at file start). Turns are split into
sentences on terminal punctuation, tokens are maximal letter sequences,
lowercased and lemmatized.

The default lemmatizer is a rule-based English suffix stemmer. Its rule
table, applied to a lowercase token in this order:

  plural:  "sses" -> "ss";  "ies" -> "y" (token longer than 4);
           trailing "ss" kept;  trailing "s" dropped (token length >= 4)
  then one of:
           "ing" dropped when the remaining stem has >= 3 chars
           "ed"  dropped when the remaining stem has >= 3 chars
           after either strip, a doubled final consonant (other than
           l/s/z) collapses: "running" -> "run", "stopped" -> "stop"

Other languages go through the external lemmatizer hook.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, replace
from enum import Enum
from importlib import resources
from typing import Callable, Iterable, Sequence

from .errors import EmptyTranscript, LemmatizerUnavailable


class SpeakerRole(str, Enum):
    INTERVIEWER = "interviewer"
    RESPONDENT = "respondent"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Turn:
    doc_id: str
    turn_index: int
    role: SpeakerRole
    raw_text: str


@dataclass(frozen=True)
class Sentence:
    doc_id: str
    turn_index: int
    sentence_index: int
    raw: str
    lemmas: tuple[str, ...] = ()

    @property
    def is_empty(self) -> bool:
        return len(self.lemmas) == 0


@dataclass(frozen=True)
class Document:
    doc_id: str
    turns: tuple[Turn, ...]
    sentences: tuple[Sentence, ...] = ()


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]
    language: str = "en"

    @property
    def sentences(self) -> tuple[Sentence, ...]:
        """Flat sentence list in (document, turn, sentence) order."""
        out: list[Sentence] = []
        for doc in self.documents:
            out.extend(doc.sentences)
        return tuple(out)

    @property
    def modeled_sentences(self) -> tuple[Sentence, ...]:
        """Sentences that still carry lemmas after filtering; the modeling unit."""
        return tuple(s for s in self.sentences if not s.is_empty)


@dataclass(frozen=True)
class StopWordSet:
    base: frozenset[str] = frozenset()
    additional: frozenset[str] = frozenset()

    @property
    def union(self) -> frozenset[str]:
        return self.base | self.additional


@dataclass(frozen=True)
class ParserConfig:
    interviewer_prefixes: tuple[str, ...] = ("Interviewer:", "I:", "Q:")
    respondent_prefixes: tuple[str, ...] = ("Respondent:", "R:", "A:")


_SENTENCE_SPLIT = re.compile(r"[.!?]+")
_TOKEN = re.compile(r"[^\W\d_]+", re.UNICODE)
_VOWELS = set("aeiou")


def default_lemmatizer(token: str) -> str:
    """Rule-based English suffix stemmer (see module docstring for the table)."""
    w = token
    if w.endswith("sses"):
        w = w[:-2]
    elif w.endswith("ies") and len(w) > 4:
        w = w[:-3] + "y"
    elif w.endswith("ss"):
        pass
    elif w.endswith("s") and len(w) >= 4:
        w = w[:-1]
    for suffix in ("ing", "ed"):
        if w.endswith(suffix) and len(w) - len(suffix) >= 3:
            stem = w[: -len(suffix)]
            if stem[-1] == stem[-2] and stem[-1] not in "lsz":
                stem = stem[:-1]
            w = stem
            break
    return w


def parse_transcript(raw: str, config: ParserConfig | None = None, doc_id: str = "doc") -> Document:
    """Split a raw transcript into turns with speaker roles.

    Lines starting with a known prefix take that role (prefix stripped);
    unprefixed lines inherit the previous line's role, Unknown at file start.
    """
    config = config or ParserConfig()
    if not raw or not raw.strip():
        raise EmptyTranscript(f"transcript {doc_id!r} has no content")
    turns: list[Turn] = []
    current_role = SpeakerRole.UNKNOWN
    for line in raw.splitlines():
        text = line.strip()
        if not text:
            continue
        role = None
        for prefix in config.interviewer_prefixes:
            if text.startswith(prefix):
                role, text = SpeakerRole.INTERVIEWER, text[len(prefix):].strip()
                break
        if role is None:
            for prefix in config.respondent_prefixes:
                if text.startswith(prefix):
                    role, text = SpeakerRole.RESPONDENT, text[len(prefix):].strip()
                    break
        if role is None:
            role = current_role
        current_role = role
        if not text:
            continue
        turns.append(Turn(doc_id=doc_id, turn_index=len(turns), role=role, raw_text=text))
    if not turns:
        raise EmptyTranscript(f"transcript {doc_id!r} has no usable turns")
    return Document(doc_id=doc_id, turns=tuple(turns))


def build_corpus(raw_docs: Sequence[tuple[str, str]], config: ParserConfig | None = None,
                 language: str = "en") -> Corpus:
    """Parse (doc_id, raw text) pairs into a corpus. Document ids must be unique."""
    ids = [doc_id for doc_id, _ in raw_docs]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate document ids")
    docs = tuple(parse_transcript(raw, config, doc_id=doc_id) for doc_id, raw in raw_docs)
    return Corpus(documents=docs, language=language)


def filter_interviewer(corpus: Corpus, keep: bool) -> Corpus:
    """Drop Interviewer turns when keep is false; remaining order is preserved."""
    if keep:
        return corpus
    docs = []
    for doc in corpus.documents:
        kept = tuple(t for t in doc.turns if t.role is not SpeakerRole.INTERVIEWER)
        kept_indices = {t.turn_index for t in kept}
        sentences = tuple(s for s in doc.sentences if s.turn_index in kept_indices)
        docs.append(replace(doc, turns=kept, sentences=sentences))
    return replace(corpus, documents=tuple(docs))


def tokenize_lemmatize(corpus: Corpus, lemmatizer: Callable[[str], str] | None = None) -> Corpus:
    """Split turns into sentences and populate lowercase lemma lists.

    Sentences split on terminal punctuation (. ! ?); tokens are maximal
    letter sequences; digits and punctuation are dropped. An external
    lemmatizer hook that raises maps to LemmatizerUnavailable.
    """
    lemmatize = lemmatizer or default_lemmatizer
    external = lemmatizer is not None
    docs = []
    for doc in corpus.documents:
        sentences: list[Sentence] = []
        for turn in doc.turns:
            fragments = [f.strip() for f in _SENTENCE_SPLIT.split(turn.raw_text)]
            fragments = [f for f in fragments if f]
            for si, fragment in enumerate(fragments):
                tokens = [t.lower() for t in _TOKEN.findall(fragment)]
                try:
                    lemmas = tuple(lemmatize(t) for t in tokens)
                except Exception as exc:
                    if external:
                        raise LemmatizerUnavailable(str(exc)) from exc
                    raise
                sentences.append(Sentence(
                    doc_id=doc.doc_id, turn_index=turn.turn_index,
                    sentence_index=si, raw=fragment, lemmas=lemmas,
                ))
        docs.append(replace(doc, sentences=tuple(sentences)))
    return replace(corpus, documents=tuple(docs))


def apply_stopwords(corpus: Corpus, stops: StopWordSet) -> Corpus:
    """Remove every stop lemma from every sentence; emptied sentences are kept."""
    banned = stops.union
    if not banned:
        return corpus
    docs = []
    for doc in corpus.documents:
        sentences = tuple(
            replace(s, lemmas=tuple(l for l in s.lemmas if l not in banned))
            for s in doc.sentences
        )
        docs.append(replace(doc, sentences=sentences))
    return replace(corpus, documents=tuple(docs))


def frequency_table(corpus: Corpus, limit: int | None = None) -> list[tuple[str, int]]:
    """Lemma counts over all sentences, sorted by count desc then lemma asc."""
    counts = Counter()
    for sentence in corpus.sentences:
        counts.update(sentence.lemmas)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:limit] if limit is not None else ranked


def export_stopword_file(lemmas: Iterable[str], path) -> None:
    """Write one lowercase lemma per line, LF terminated, canonically sorted."""
    unique = sorted({l.strip().lower() for l in lemmas if l.strip()})
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for lemma in unique:
            fh.write(lemma + "\n")


def load_stopword_lemmas(path) -> frozenset[str]:
    with open(path, encoding="utf-8") as fh:
        return frozenset(line.strip().lower() for line in fh if line.strip())


def _load_data_file(name: str) -> frozenset[str]:
    text = resources.files("qualkit").joinpath(f"data/{name}").read_text(encoding="utf-8")
    return frozenset(line.strip().lower() for line in text.splitlines() if line.strip())


def default_stopwords(extra: Iterable[str] = ()) -> StopWordSet:
    """Shipped base English stop words plus the shipped interview-filler words."""
    additional = _load_data_file("stopwords_additional_default.txt")
    additional |= {w.strip().lower() for w in extra if w.strip()}
    return StopWordSet(base=_load_data_file("stopwords_base_en.txt"),
                       additional=frozenset(additional))


def corpus_to_dict(corpus: Corpus) -> dict:
    """JSON-ready structural dump; inverse of corpus_from_dict."""
    return {
        "language": corpus.language,
        "documents": [
            {
                "doc_id": doc.doc_id,
                "turns": [
                    {"turn_index": t.turn_index, "role": t.role.value, "raw_text": t.raw_text}
                    for t in doc.turns
                ],
                "sentences": [
                    {
                        "turn_index": s.turn_index,
                        "sentence_index": s.sentence_index,
                        "raw": s.raw,
                        "lemmas": list(s.lemmas),
                    }
                    for s in doc.sentences
                ],
            }
            for doc in corpus.documents
        ],
    }


def corpus_from_dict(payload: dict) -> Corpus:
    docs = []
    for d in payload["documents"]:
        turns = tuple(
            Turn(doc_id=d["doc_id"], turn_index=t["turn_index"],
                 role=SpeakerRole(t["role"]), raw_text=t["raw_text"])
            for t in d["turns"]
        )
        sentences = tuple(
            Sentence(doc_id=d["doc_id"], turn_index=s["turn_index"],
                     sentence_index=s["sentence_index"], raw=s["raw"],
                     lemmas=tuple(s["lemmas"]))
            for s in d["sentences"]
        )
        docs.append(Document(doc_id=d["doc_id"], turns=turns, sentences=sentences))
    return Corpus(documents=tuple(docs), language=payload.get("language", "en"))
