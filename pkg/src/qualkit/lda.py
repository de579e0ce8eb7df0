"""Latent Dirichlet Allocation via collapsed Gibbs sampling.

Serves both as the standalone baseline topic model and as the source of the
per-unit topic mixture that hybrid pipelines concatenate with embeddings.
Sampling order is fixed (corpus order) and the RNG is seeded inside the
kernel, so a (corpus, K, seed) triple always reproduces the same model.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numba import njit

from .corpus import Corpus
from .errors import TooFewDocuments


@dataclass(frozen=True)
class GibbsCounts:
    """Read-only snapshot of the sampler state after a sweep."""
    doc_topic: np.ndarray   # (D, K) int64
    topic_word: np.ndarray  # (K, V) int64
    topic_totals: np.ndarray  # (K,) int64
    total_tokens: int


@dataclass(frozen=True)
class LdaModel:
    K: int
    phi: np.ndarray    # (K, V) rows sum to 1
    theta: np.ndarray  # (D, K) rows sum to 1
    vocab: tuple[str, ...]
    alpha: float
    beta: float
    seed: int
    iterations: int
    log_likelihood: tuple[float, ...] = field(default=())


@njit(cache=True)
def _gibbs_init(token_doc, token_word, n_dk, n_kv, n_k, K, seed):
    np.random.seed(seed)
    T = token_doc.shape[0]
    z = np.empty(T, dtype=np.int64)
    for t in range(T):
        k = int(np.random.random() * K)
        if k == K:
            k = K - 1
        z[t] = k
        n_dk[token_doc[t], k] += 1
        n_kv[k, token_word[t]] += 1
        n_k[k] += 1
    return z


@njit(cache=True)
def _gibbs_sweep(token_doc, token_word, z, n_dk, n_kv, n_k, alpha, beta):
    T = token_doc.shape[0]
    K = n_k.shape[0]
    V = n_kv.shape[1]
    vbeta = V * beta
    p = np.empty(K)
    for t in range(T):
        d = token_doc[t]
        w = token_word[t]
        k = z[t]
        n_dk[d, k] -= 1
        n_kv[k, w] -= 1
        n_k[k] -= 1
        total = 0.0
        for j in range(K):
            p[j] = (n_dk[d, j] + alpha) * (n_kv[j, w] + beta) / (n_k[j] + vbeta)
            total += p[j]
        r = np.random.random() * total
        acc = 0.0
        k = K - 1
        for j in range(K):
            acc += p[j]
            if acc >= r:
                k = j
                break
        z[t] = k
        n_dk[d, k] += 1
        n_kv[k, w] += 1
        n_k[k] += 1


@njit(cache=True)
def _corpus_log_likelihood(token_doc, token_word, n_dk, n_kv, n_k, doc_len, alpha, beta):
    T = token_doc.shape[0]
    K = n_k.shape[0]
    V = n_kv.shape[1]
    vbeta = V * beta
    kalpha = K * alpha
    ll = 0.0
    for t in range(T):
        d = token_doc[t]
        w = token_word[t]
        px = 0.0
        for k in range(K):
            theta = (n_dk[d, k] + alpha) / (doc_len[d] + kalpha)
            phi = (n_kv[k, w] + beta) / (n_k[k] + vbeta)
            px += theta * phi
        ll += np.log(px)
    return ll


def fit_lda(corpus: Corpus, K: int, alpha: float | None = None, beta: float = 0.01,
            iterations: int = 500, seed: int = 0,
            on_sweep: Callable[[int, GibbsCounts], None] | None = None) -> LdaModel:
    """Collapsed Gibbs sampling over token-topic assignments.

    alpha defaults to 50/K, beta to 0.01. phi and theta come from the final
    counts with Dirichlet smoothing; per-sweep corpus log-likelihood is kept
    on the model. on_sweep, when given, sees a count snapshot after every
    sweep (used by consistency checks).
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    units = corpus.modeled_sentences
    if K > len(units):
        raise TooFewDocuments(f"K={K} topics but only {len(units)} modeled units")
    if alpha is None:
        alpha = 50.0 / K

    vocab = tuple(sorted({lemma for s in units for lemma in s.lemmas}))
    word_index = {w: j for j, w in enumerate(vocab)}
    token_doc, token_word = [], []
    for d, s in enumerate(units):
        for lemma in s.lemmas:
            token_doc.append(d)
            token_word.append(word_index[lemma])
    token_doc = np.asarray(token_doc, dtype=np.int64)
    token_word = np.asarray(token_word, dtype=np.int64)
    D, V, T = len(units), len(vocab), len(token_doc)
    doc_len = np.bincount(token_doc, minlength=D).astype(np.int64)

    n_dk = np.zeros((D, K), dtype=np.int64)
    n_kv = np.zeros((K, V), dtype=np.int64)
    n_k = np.zeros(K, dtype=np.int64)
    z = _gibbs_init(token_doc, token_word, n_dk, n_kv, n_k, K, seed)

    history = []
    for sweep in range(iterations):
        _gibbs_sweep(token_doc, token_word, z, n_dk, n_kv, n_k, alpha, beta)
        history.append(float(_corpus_log_likelihood(
            token_doc, token_word, n_dk, n_kv, n_k, doc_len, alpha, beta)))
        if on_sweep is not None:
            on_sweep(sweep, GibbsCounts(
                doc_topic=n_dk.copy(), topic_word=n_kv.copy(),
                topic_totals=n_k.copy(), total_tokens=T))

    phi = (n_kv + beta) / (n_k[:, None] + V * beta)
    theta = (n_dk + alpha) / (doc_len[:, None] + K * alpha)
    return LdaModel(K=K, phi=phi, theta=theta, vocab=vocab, alpha=alpha, beta=beta,
                    seed=seed, iterations=iterations, log_likelihood=tuple(history))


def top_keywords(model: LdaModel, topic_id: int, m: int) -> list[tuple[str, float]]:
    """m highest-phi words for a topic, ties broken lexicographically."""
    if not 0 <= topic_id < model.K:
        raise ValueError(f"topic_id {topic_id} out of range [0, {model.K})")
    if m < 1:
        raise ValueError("m must be >= 1")
    row = model.phi[topic_id]
    order = sorted(range(len(model.vocab)), key=lambda v: (-row[v], model.vocab[v]))
    return [(model.vocab[v], float(row[v])) for v in order[:m]]


def lda_features(model: LdaModel) -> np.ndarray:
    """Per-unit topic mixture (theta); rows sum to 1."""
    return model.theta
