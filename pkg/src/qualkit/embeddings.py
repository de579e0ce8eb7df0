"""Embedding providers: deterministic baseline, precomputed file, remote HTTP.

One row per non-empty sentence, in corpus order. The baseline provider is a
pure function of the lemma multisets: TF-IDF with log(1+tf) * log(N/df)
weighting, projected to the target dimension by a seeded sparse random
projection with entries in {-1, 0, +1} at density 1/sqrt(V).

Remote protocol: POST JSON {"texts": [...]} -> {"vectors": [[...]]} with
HTTP 200; anything else is a provider failure. File format: JSON lines,
each line {"index": i, "vector": [...]}.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import httpx
import numpy as np

from .corpus import Corpus
from .errors import AlignmentError, EmptyVocabulary, FormatError, ProviderUnavailable


class ProviderKind(str, Enum):
    BASELINE = "baseline"
    FILE = "file"
    REMOTE = "remote"


@dataclass(frozen=True)
class ProviderConfig:
    kind: ProviderKind = ProviderKind.BASELINE
    dim: int = 64
    seed: int = 0
    endpoint: str | None = None
    path: str | None = None
    batch_size: int = 32


@dataclass(frozen=True)
class EmbeddingMatrix:
    values: np.ndarray  # (n, d) float64

    def __post_init__(self):
        v = self.values
        if v.ndim != 2 or v.shape[1] < 2:
            raise FormatError(f"embedding matrix must be n x d with d >= 2, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise FormatError("embedding matrix contains non-finite values")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]


def embed_baseline(corpus: Corpus, dim: int = 64, seed: int = 0) -> EmbeddingMatrix:
    """Seeded TF-IDF + sparse random projection over the lemma vocabulary."""
    units = corpus.modeled_sentences
    vocab = sorted({lemma for s in units for lemma in s.lemmas})
    if not vocab:
        raise EmptyVocabulary("no lemmas to embed")
    index = {w: j for j, w in enumerate(vocab)}
    n, V = len(units), len(vocab)

    df = np.zeros(V)
    for s in units:
        for w in set(s.lemmas):
            df[index[w]] += 1
    idf = np.log(n / df)

    tfidf = np.zeros((n, V))
    for i, s in enumerate(units):
        for w, tf in Counter(s.lemmas).items():
            j = index[w]
            tfidf[i, j] = math.log1p(tf) * idf[j]

    rng = np.random.default_rng(seed)
    density = 1.0 / math.sqrt(V)
    u = rng.random((V, dim))
    projection = np.where(u < density / 2, -1.0, np.where(u < density, 1.0, 0.0))
    return EmbeddingMatrix(values=tfidf @ projection)


def load_embeddings(path, expected_rows: int | None = None) -> EmbeddingMatrix:
    """Read JSON-lines {"index": i, "vector": [...]} and align rows by index."""
    rows: dict[int, list[float]] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            rows[int(record["index"])] = record["vector"]
    if expected_rows is not None and len(rows) != expected_rows:
        raise AlignmentError(f"file has {len(rows)} rows, corpus has {expected_rows} units")
    if sorted(rows) != list(range(len(rows))):
        raise AlignmentError("row indices are not a contiguous 0..n-1 range")
    values = np.array([rows[i] for i in range(len(rows))], dtype=float)
    if values.size and not np.all(np.isfinite(values)):
        raise FormatError("embedding file contains non-finite values")
    return EmbeddingMatrix(values=values)


def fetch_embeddings(endpoint: str, texts: Sequence[str], batch_size: int = 32,
                     client: httpx.Client | None = None) -> EmbeddingMatrix:
    """POST texts in batches and concatenate the returned vectors in order."""
    owned = client is None
    client = client or httpx.Client()
    vectors: list[list[float]] = []
    dim: int | None = None
    try:
        for start in range(0, len(texts), batch_size):
            batch = list(texts[start:start + batch_size])
            try:
                response = client.post(endpoint, json={"texts": batch})
            except httpx.HTTPError as exc:
                raise ProviderUnavailable(f"embedding endpoint unreachable: {exc}") from exc
            if response.status_code != 200:
                detail = ""
                try:
                    detail = response.json().get("error", "")
                except Exception:
                    pass
                raise ProviderUnavailable(
                    f"embedding endpoint returned {response.status_code}: {detail}")
            payload = response.json()
            got = payload.get("vectors")
            if not isinstance(got, list) or len(got) != len(batch):
                raise FormatError("endpoint returned wrong number of vectors for batch")
            for vec in got:
                if dim is None:
                    dim = len(vec)
                elif len(vec) != dim:
                    raise FormatError(f"inconsistent vector dims: {len(vec)} vs {dim}")
                vectors.append(vec)
    finally:
        if owned:
            client.close()
    return EmbeddingMatrix(values=np.array(vectors, dtype=float))


def get_embeddings(corpus: Corpus, config: ProviderConfig,
                   client: httpx.Client | None = None) -> EmbeddingMatrix:
    """Dispatch on provider kind and enforce row alignment with the corpus."""
    units = corpus.modeled_sentences
    if config.kind is ProviderKind.BASELINE:
        matrix = embed_baseline(corpus, dim=config.dim, seed=config.seed)
    elif config.kind is ProviderKind.FILE:
        matrix = load_embeddings(config.path, expected_rows=len(units))
    elif config.kind is ProviderKind.REMOTE:
        matrix = fetch_embeddings(config.endpoint, [s.raw for s in units],
                                  batch_size=config.batch_size, client=client)
        if matrix.n != len(units):
            raise AlignmentError(f"endpoint returned {matrix.n} rows for {len(units)} units")
    else:
        raise ValueError(f"unknown provider kind: {config.kind}")
    return matrix
