"""End-to-end model pipelines and the method comparison table.

Five variants share one entry point: plain LDA, embeddings with K-means,
embeddings with UMAP + HDBSCAN, and two hybrids that concatenate LDA
features with embeddings, compress them to a small dense space with
truncated SVD, and cluster that. Every run yields topics, a metric report,
and a concept graph.

Cluster-validity scores (silhouette, DBCV) are computed in the space the
clusterer actually saw, over the final assignment the user gets.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .cluster import ClusterLabels, dbcv, hdbscan, kmeans, silhouette
from .coherence import (CV_WINDOW, UCI_WINDOW, MetricReport, average_over_topics,
                        c_v, count_documents, count_windows, npmi, uci, umass)
from .corpus import Corpus
from .embeddings import ProviderConfig, get_embeddings
from .errors import MetricUndefined, StageError, TooFewDocuments
from .graph import ConceptGraph, build_graph
from .lda import fit_lda, lda_features
from .reduce import umap_reduce
from .topics import (TopicModelResult, assemble_topics, reduce_topics,
                     topic_diversity, topics_from_lda)

log = logging.getLogger("qualkit.pipeline")

METHODS = ("lda", "embed_kmeans", "embed_hdbscan", "lda_embed_kmeans", "lda_embed_hdbscan")
KMEANS_METHODS = ("embed_kmeans", "lda_embed_kmeans")
HDBSCAN_METHODS = ("embed_hdbscan", "lda_embed_hdbscan")
HYBRID_METHODS = ("lda_embed_kmeans", "lda_embed_hdbscan")
NOISE_WARNING_FRACTION = 0.5


@dataclass(frozen=True)
class LdaParams:
    K: int | None = None          # None: use num_topics
    alpha: float | None = None    # None: 50/K
    beta: float = 0.01
    iterations: int = 300


@dataclass(frozen=True)
class UmapParams:
    target_dim: int = 5
    k: int = 15
    metric: str = "cosine"
    min_dist: float = 0.1
    epochs: int = 200


@dataclass(frozen=True)
class HdbscanParams:
    min_cluster_size: int = 5
    min_samples: int | None = None


@dataclass(frozen=True)
class PipelineConfig:
    method: str
    num_topics: int = 10
    seed: int = 0
    provider: ProviderConfig = field(default_factory=ProviderConfig)
    lda: LdaParams = field(default_factory=LdaParams)
    umap: UmapParams = field(default_factory=UmapParams)
    hdbscan: HdbscanParams = field(default_factory=HdbscanParams)
    svd_dim: int = 32
    keywords_per_topic: int = 10

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; choose from {METHODS}")
        if self.num_topics < 1:
            raise ValueError("num_topics must be >= 1")


@dataclass(frozen=True, eq=False)
class PipelineRun:
    config: PipelineConfig
    result: TopicModelResult
    metrics: MetricReport
    graph: ConceptGraph
    raw_topic_count: int
    timings: dict[str, float]
    total_seconds: float
    warnings: tuple[str, ...]
    notes: tuple[str, ...]


class _Stages:
    def __init__(self):
        self.timings: dict[str, float] = {}

    def run(self, stage: str, fn, *args, **kwargs):
        start = time.perf_counter()
        try:
            return fn(*args, **kwargs)
        except Exception as exc:
            raise StageError(stage, exc) from exc
        finally:
            self.timings[stage] = self.timings.get(stage, 0.0) + time.perf_counter() - start


def truncated_svd(features: np.ndarray, dim: int) -> np.ndarray:
    """Project rows onto the top singular directions, sign-fixed so the
    largest-magnitude loading of each component is positive."""
    features = np.asarray(features, dtype=float)
    dim = min(dim, min(features.shape))
    u, s, vt = np.linalg.svd(features, full_matrices=False)
    u, s, vt = u[:, :dim], s[:dim], vt[:dim]
    for j in range(dim):
        pivot = int(np.argmax(np.abs(vt[j])))
        if vt[j, pivot] < 0:
            vt[j] *= -1.0
            u[:, j] *= -1.0
    return u * s


def _balance_block(block: np.ndarray) -> np.ndarray:
    """Scale a feature block to unit mean row norm so that concatenated
    blocks contribute comparably regardless of their native scale."""
    scale = float(np.mean(np.linalg.norm(block, axis=1)))
    return block / scale if scale > 0 else block


def _coherence_or_none(metric_fn, result: TopicModelResult, counts, name: str,
                       warnings: list[str]) -> float | None:
    keyword_lists = [t.keywords for t in result.topics]
    try:
        return average_over_topics(metric_fn, keyword_lists, counts)
    except MetricUndefined as exc:
        warnings.append(f"{name} undefined: {exc}")
        return None


def _metric_report(corpus: Corpus, result: TopicModelResult, method: str,
                   cluster_space: np.ndarray | None, warnings: list[str]) -> MetricReport:
    doc_counts = count_documents(corpus)
    uci_counts = count_windows(corpus, UCI_WINDOW)
    cv_counts = count_windows(corpus, CV_WINDOW)

    report_cv = _coherence_or_none(c_v, result, cv_counts, "c_v", warnings)
    report_umass = _coherence_or_none(umass, result, doc_counts, "umass", warnings)
    report_npmi = _coherence_or_none(npmi, result, uci_counts, "npmi", warnings)
    report_uci = _coherence_or_none(uci, result, uci_counts, "uci", warnings)

    try:
        diversity = topic_diversity(result)
    except ValueError as exc:
        warnings.append(f"topic_diversity undefined: {exc}")
        diversity = None

    sil = None
    if method in KMEANS_METHODS and cluster_space is not None:
        labels = np.asarray(result.assignments)
        try:
            sil = silhouette(cluster_space, labels)
        except MetricUndefined as exc:
            warnings.append(f"silhouette undefined: {exc}")
    validity = None
    if method in HDBSCAN_METHODS and cluster_space is not None:
        validity = dbcv(cluster_space, np.asarray(result.assignments))

    return MetricReport(c_v=report_cv, umass=report_umass, npmi=report_npmi,
                        uci=report_uci, topic_diversity=diversity,
                        silhouette=sil, dbcv=validity)


def run(config: PipelineConfig, corpus: Corpus) -> PipelineRun:
    """Execute one method end to end; stage failures carry the stage name."""
    wall_start = time.perf_counter()
    stages = _Stages()
    warnings: list[str] = []
    notes: list[str] = []
    units = corpus.modeled_sentences
    if len(units) < 2:
        raise TooFewDocuments(f"need at least 2 modeled sentences, got {len(units)}")
    method = config.method
    m = config.keywords_per_topic

    cluster_space: np.ndarray | None = None
    if method == "lda":
        model = stages.run("lda", fit_lda, corpus, config.num_topics,
                           alpha=config.lda.alpha, beta=config.lda.beta,
                           iterations=config.lda.iterations, seed=config.seed)
        result = stages.run("topics", topics_from_lda, model, corpus, m)
        raw_count = config.num_topics
    else:
        need_lda = method in HYBRID_METHODS
        embeddings = stages.run("embed", get_embeddings, corpus, config.provider)
        features = embeddings.values
        if need_lda:
            K = config.lda.K or config.num_topics
            model = stages.run("lda", fit_lda, corpus, K,
                               alpha=config.lda.alpha, beta=config.lda.beta,
                               iterations=config.lda.iterations, seed=config.seed)
            concat = np.hstack([_balance_block(lda_features(model)),
                                _balance_block(features)])
            features = stages.run("svd", truncated_svd, concat, config.svd_dim)
            notes.append(f"hybrid path compresses scale-balanced LDA+embedding "
                         f"features with truncated SVD to {features.shape[1]} dims "
                         f"(deterministic stand-in for a learned autoencoder)")
            cluster_space = features
        if method in ("embed_kmeans", "lda_embed_kmeans"):
            if cluster_space is None:
                cluster_space = features
            km = stages.run("kmeans", kmeans, cluster_space, config.num_topics,
                            seed=config.seed)
            labels = ClusterLabels(labels=km.labels, n_clusters=config.num_topics)
            result = stages.run("topics", assemble_topics, labels, corpus, m,
                                unit_vectors=cluster_space, method=method)
            raw_count = config.num_topics
        else:
            if method == "embed_hdbscan":
                layout = stages.run("umap", umap_reduce, features,
                                    target_dim=config.umap.target_dim,
                                    k=config.umap.k, metric=config.umap.metric,
                                    min_dist=config.umap.min_dist,
                                    epochs=config.umap.epochs, seed=config.seed)
                cluster_space = layout.points
            labels, _tree = stages.run("hdbscan", hdbscan, cluster_space,
                                       min_cluster_size=config.hdbscan.min_cluster_size,
                                       min_samples=config.hdbscan.min_samples)
            if labels.noise_fraction > NOISE_WARNING_FRACTION:
                message = (f"noise fraction {labels.noise_fraction:.2f} exceeds "
                           f"{NOISE_WARNING_FRACTION:.2f}")
                warnings.append(message)
                log.warning(message)
            result = stages.run("topics", assemble_topics, labels, corpus, m,
                                unit_vectors=cluster_space, method=method)
            raw_count = len(result.topics)
            result = stages.run("reduce_topics", reduce_topics, result, config.num_topics)

    metrics = stages.run("metrics", _metric_report, corpus, result, method,
                         cluster_space, warnings)
    graph = stages.run("graph", build_graph, result)
    total = time.perf_counter() - wall_start
    return PipelineRun(config=config, result=result, metrics=metrics, graph=graph,
                       raw_topic_count=raw_count, timings=dict(stages.timings),
                       total_seconds=total, warnings=tuple(warnings), notes=tuple(notes))


@dataclass(frozen=True, eq=False)
class Comparison:
    runs: tuple[PipelineRun, ...]
    table: str


_ROW_TITLES = {
    "c_v": "C_v", "umass": "UMass", "npmi": "NPMI", "uci": "UCI",
    "topic_diversity": "Topic diversity", "silhouette": "Silhouette", "dbcv": "DBCV",
}


def render_table(reports: dict[str, MetricReport]) -> str:
    """Fixed-width text table: one row per metric, one column per method."""
    methods = list(reports)
    header = ["Metric"] + methods
    rows = [[_ROW_TITLES[row]] + [reports[m].cell(row) for m in methods]
            for row in MetricReport.ROWS]
    widths = [max(len(line[i]) for line in [header] + rows) for i in range(len(header))]
    def fmt(line):
        first = line[0].ljust(widths[0])
        rest = [cell.rjust(widths[i + 1]) for i, cell in enumerate(line[1:])]
        return "  ".join([first] + rest)
    divider = "-" * len(fmt(header))
    return "\n".join([fmt(header), divider] + [fmt(r) for r in rows])


def compare(configs: list[PipelineConfig], corpus: Corpus) -> Comparison:
    if not configs:
        raise ValueError("need at least one config to compare")
    runs = tuple(run(cfg, corpus) for cfg in configs)
    reports = {r.config.method: r.metrics for r in runs}
    return Comparison(runs=runs, table=render_table(reports))
