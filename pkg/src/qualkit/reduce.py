"""Nonlinear dimensionality reduction before density clustering.

Pipeline: exact brute-force kNN -> per-point bandwidth calibration ->
symmetric fuzzy graph (probabilistic t-conorm) -> stochastic gradient
descent on the fuzzy cross-entropy with negative sampling. Layout SGD runs
in a numba kernel seeded at entry, so identical (graph, seed) inputs give
bit-identical layouts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numba import njit
from scipy.optimize import curve_fit

from .embeddings import EmbeddingMatrix

SMOOTH_TOLERANCE = 1e-5
SMOOTH_MAX_ITER = 64
MIN_SIGMA_SCALE = 1e-3


@dataclass(frozen=True)
class KnnGraph:
    indices: np.ndarray    # (n, k) neighbor indices, self excluded
    distances: np.ndarray  # (n, k) ascending per row
    metric: str

    @property
    def n(self) -> int:
        return self.indices.shape[0]

    @property
    def k(self) -> int:
        return self.indices.shape[1]


@dataclass(frozen=True)
class FuzzyGraph:
    """Undirected weighted graph; each edge stored once with head < tail."""
    n: int
    heads: np.ndarray    # (E,) int
    tails: np.ndarray    # (E,) int
    weights: np.ndarray  # (E,) in (0, 1]
    rho: np.ndarray      # (n,)
    sigma: np.ndarray    # (n,)

    def weight(self, i: int, j: int) -> float:
        a, b = (i, j) if i < j else (j, i)
        mask = (self.heads == a) & (self.tails == b)
        hit = np.nonzero(mask)[0]
        return float(self.weights[hit[0]]) if hit.size else 0.0


@dataclass(frozen=True)
class LowDimLayout:
    points: np.ndarray  # (n, t)
    epochs: int
    seed: int
    objective: tuple[tuple[int, float], ...] = ()


def pairwise_distances(values: np.ndarray, metric: str) -> np.ndarray:
    """Dense distance matrix; cosine treats zero vectors as distance 1 to everything."""
    if metric == "euclidean":
        sq = np.sum(values ** 2, axis=1)
        d2 = sq[:, None] + sq[None, :] - 2.0 * (values @ values.T)
        return np.sqrt(np.clip(d2, 0.0, None))
    if metric == "cosine":
        norms = np.linalg.norm(values, axis=1)
        safe = np.where(norms > 0, norms, 1.0)
        unit = values / safe[:, None]
        sim = np.clip(unit @ unit.T, -1.0, 1.0)
        zero = norms == 0
        sim[zero, :] = 0.0
        sim[:, zero] = 0.0
        np.fill_diagonal(sim, 1.0)
        return 1.0 - sim
    raise ValueError(f"unknown metric: {metric}")


def knn(matrix: EmbeddingMatrix | np.ndarray, k: int, metric: str = "euclidean") -> KnnGraph:
    """Exact brute-force k nearest neighbors; ties broken by lower index."""
    values = matrix.values if isinstance(matrix, EmbeddingMatrix) else np.asarray(matrix, dtype=float)
    n = values.shape[0]
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")
    dist = pairwise_distances(values, metric)
    np.fill_diagonal(dist, np.inf)
    order = np.argsort(dist, axis=1, kind="stable")[:, :k]
    nd = np.take_along_axis(dist, order, axis=1)
    return KnnGraph(indices=order, distances=nd, metric=metric)


def smooth_knn(graph: KnnGraph, local_connectivity: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Per-point (rho, sigma): rho is the nearest-neighbor distance, sigma is
    found by bisection so the smoothed neighbor cardinality hits log2(k)."""
    n, k = graph.n, graph.k
    target = math.log2(k)
    rho = graph.distances[:, local_connectivity - 1].copy()
    sigma = np.zeros(n)
    for i in range(n):
        d = graph.distances[i]
        lo, hi, mid = 0.0, np.inf, 1.0
        for _ in range(SMOOTH_MAX_ITER):
            psum = float(np.sum(np.exp(-np.maximum(0.0, d - rho[i]) / mid)))
            if abs(psum - target) < SMOOTH_TOLERANCE:
                break
            if psum > target:
                hi = mid
                mid = (lo + hi) / 2.0
            else:
                lo = mid
                mid = mid * 2.0 if hi == np.inf else (lo + hi) / 2.0
        sigma[i] = max(mid, MIN_SIGMA_SCALE * float(np.mean(d)))
    return rho, sigma


def tconorm(a: float, b: float) -> float:
    """Probabilistic t-conorm combining two directed memberships."""
    return a + b - a * b


def fuzzy_union(graph: KnnGraph, rho: np.ndarray, sigma: np.ndarray) -> FuzzyGraph:
    """Directed membership exp(-max(0, d - rho)/sigma), symmetrized by t-conorm."""
    directed: dict[tuple[int, int], float] = {}
    for i in range(graph.n):
        for jj in range(graph.k):
            j = int(graph.indices[i, jj])
            gap = float(graph.distances[i, jj]) - float(rho[i])
            if gap <= 0.0:
                a = 1.0
            else:
                a = math.exp(-gap / float(sigma[i])) if sigma[i] > 0 else 0.0
            directed[(i, j)] = a
    undirected: dict[tuple[int, int], float] = {}
    for (i, j), a in directed.items():
        key = (i, j) if i < j else (j, i)
        if key in undirected:
            continue
        b = directed.get((j, i), 0.0)
        if key != (i, j):
            a, b = b, a
        undirected[key] = tconorm(a, b)
    keys = sorted(undirected)
    heads = np.array([k_[0] for k_ in keys], dtype=np.int64)
    tails = np.array([k_[1] for k_ in keys], dtype=np.int64)
    weights = np.array([undirected[k_] for k_ in keys], dtype=float)
    return FuzzyGraph(n=graph.n, heads=heads, tails=tails, weights=weights,
                      rho=np.asarray(rho, dtype=float), sigma=np.asarray(sigma, dtype=float))


def build_fuzzy_graph(matrix, k: int = 15, metric: str = "euclidean") -> FuzzyGraph:
    g = knn(matrix, k=k, metric=metric)
    rho, sigma = smooth_knn(g)
    return fuzzy_union(g, rho, sigma)


@lru_cache(maxsize=32)
def find_curve_params(min_dist: float = 0.1, spread: float = 1.0) -> tuple[float, float]:
    """Least-squares fit of 1/(1 + a*d^(2b)) to the piecewise target that is 1
    below min_dist and exp(-(d - min_dist)/spread) beyond it, over d in [0, 3*spread]."""
    xs = np.linspace(0.0, spread * 3.0, 300)
    ys = np.ones_like(xs)
    tail = xs >= min_dist
    ys[tail] = np.exp(-(xs[tail] - min_dist) / spread)

    def curve(x, a, b):
        return 1.0 / (1.0 + a * x ** (2.0 * b))

    (a, b), _ = curve_fit(curve, xs, ys, p0=(1.0, 1.0), maxfev=10000)
    return float(a), float(b)


@njit(cache=True)
def _seed_kernel_rng(seed):
    np.random.seed(seed)


@njit(cache=True)
def _clip(value):
    if value > 4.0:
        return 4.0
    if value < -4.0:
        return -4.0
    return value


@njit(cache=True)
def _layout_epoch(pos, heads, tails, weights, a, b, lr, neg_samples):
    n, t = pos.shape
    for e in range(heads.shape[0]):
        i = heads[e]
        j = tails[e]
        w = weights[e]
        d2 = 0.0
        for c in range(t):
            diff = pos[i, c] - pos[j, c]
            d2 += diff * diff
        if d2 > 0.0:
            coef = (-2.0 * a * b * d2 ** (b - 1.0)) / (1.0 + a * d2 ** b)
            for c in range(t):
                g = _clip(coef * (pos[i, c] - pos[j, c])) * w * lr
                pos[i, c] += g
                pos[j, c] -= g
        # each endpoint repels its own negative samples
        for side in range(2):
            head = i if side == 0 else j
            for _ in range(neg_samples):
                other = int(np.random.random() * n)
                if other == n:
                    other = n - 1
                if other == head:
                    continue
                d2n = 0.0
                for c in range(t):
                    diff = pos[head, c] - pos[other, c]
                    d2n += diff * diff
                if d2n > 0.0:
                    coef = (2.0 * b) / ((0.001 + d2n) * (1.0 + a * d2n ** b))
                    for c in range(t):
                        g = _clip(coef * (pos[head, c] - pos[other, c])) * w * lr
                        pos[head, c] += g
                else:
                    for c in range(t):
                        pos[head, c] += 4.0 * w * lr
    return pos


def cross_entropy(fg: FuzzyGraph, points: np.ndarray, a: float, b: float,
                  eps: float = 1e-9) -> float:
    """Fuzzy cross-entropy of the layout against the full graph (absent pairs weigh 0)."""
    n = fg.n
    w = np.zeros((n, n))
    w[fg.heads, fg.tails] = fg.weights
    w = w + w.T
    d2 = pairwise_distances(points, "euclidean") ** 2
    phi = 1.0 / (1.0 + a * np.where(d2 > 0, d2, 0.0) ** b)
    phi = np.clip(phi, eps, 1.0 - eps)
    iu = np.triu_indices(n, k=1)
    wij, pij = w[iu], phi[iu]
    return float(-np.sum(wij * np.log(pij) + (1.0 - wij) * np.log(1.0 - pij)))


def optimize_layout(fg: FuzzyGraph, target_dim: int = 2, epochs: int = 200, seed: int = 0,
                    min_dist: float = 0.1, spread: float = 1.0, learning_rate: float = 1.0,
                    negative_samples: int = 5, record_objective_every: int = 0) -> LowDimLayout:
    """SGD on the fuzzy cross-entropy; deterministic for a fixed seed.

    Attraction and repulsion follow the curve 1/(1 + a*d^(2b)) with (a, b)
    fit to min_dist; per-component gradients are clipped to +-4 and the
    learning rate decays linearly from learning_rate to 0.
    """
    if epochs < 1:
        raise ValueError("epochs must be >= 1")
    a, b = find_curve_params(min_dist, spread)
    rng = np.random.default_rng(seed)
    pos = rng.uniform(-10.0, 10.0, size=(fg.n, target_dim))
    _seed_kernel_rng(seed)
    checkpoints: list[tuple[int, float]] = []
    if record_objective_every > 0:
        checkpoints.append((0, cross_entropy(fg, pos, a, b)))
    for epoch in range(epochs):
        lr = learning_rate * (1.0 - epoch / float(epochs))
        _layout_epoch(pos, fg.heads, fg.tails, fg.weights, a, b, lr, negative_samples)
        if record_objective_every > 0 and (epoch + 1) % record_objective_every == 0:
            checkpoints.append((epoch + 1, cross_entropy(fg, pos, a, b)))
    return LowDimLayout(points=pos, epochs=epochs, seed=seed, objective=tuple(checkpoints))


def umap_reduce(matrix, target_dim: int = 5, k: int = 15, metric: str = "cosine",
                min_dist: float = 0.1, epochs: int = 200, seed: int = 0,
                record_objective_every: int = 0) -> LowDimLayout:
    """knn -> bandwidth calibration -> fuzzy union -> layout, end to end."""
    values = matrix.values if isinstance(matrix, EmbeddingMatrix) else np.asarray(matrix, dtype=float)
    k = min(k, values.shape[0] - 1)
    fg = build_fuzzy_graph(values, k=k, metric=metric)
    return optimize_layout(fg, target_dim=target_dim, epochs=epochs, seed=seed,
                           min_dist=min_dist, record_objective_every=record_objective_every)
