"""Density and centroid clustering plus cluster-validity scores.

HDBSCAN is built the long way: core distances -> mutual reachability ->
Prim MST -> single-linkage hierarchy -> condensed tree -> excess-of-mass
cluster extraction. K-means serves the comparison pipelines. Silhouette and
DBCV score the results; both are invariant under relabeling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embeddings import EmbeddingMatrix
from .errors import MetricUndefined
from .reduce import pairwise_distances

# lambda = 1/distance; zero distances get a finite lambda above every real one
# so the condensed tree stays ordered and stabilities stay finite.
_ZERO_DISTANCE_LAMBDA = 1e12


@dataclass(frozen=True)
class ClusterLabels:
    labels: np.ndarray  # (n,) int, -1 = noise
    n_clusters: int

    @property
    def noise_fraction(self) -> float:
        if self.labels.size == 0:
            return 0.0
        return float(np.mean(self.labels == -1))


@dataclass(frozen=True)
class CondensedTree:
    """Rows (parent, child, lambda, child_size); ids < n are points."""
    n_points: int
    parents: np.ndarray
    children: np.ndarray
    lambdas: np.ndarray
    sizes: np.ndarray
    root: int
    stability: dict[int, float]
    selected: tuple[int, ...]


@dataclass(frozen=True)
class KmeansModel:
    centroids: np.ndarray
    labels: np.ndarray
    inertia: float
    inertia_history: tuple[float, ...]
    iterations: int


def _as_array(matrix) -> np.ndarray:
    if isinstance(matrix, EmbeddingMatrix):
        return matrix.values
    if hasattr(matrix, "points"):
        return np.asarray(matrix.points, dtype=float)
    return np.asarray(matrix, dtype=float)


def core_distances(matrix, min_samples: int) -> np.ndarray:
    """Distance to the min_samples-th nearest neighbor, self excluded."""
    values = _as_array(matrix)
    n = values.shape[0]
    if not 1 <= min_samples < n:
        raise ValueError(f"need 1 <= min_samples < n, got {min_samples}, n={n}")
    dist = pairwise_distances(values, "euclidean")
    np.fill_diagonal(dist, np.inf)
    return np.sort(dist, axis=1)[:, min_samples - 1]


def mutual_reachability(dist: np.ndarray, core: np.ndarray) -> np.ndarray:
    """mr_ij = max(core_i, core_j, d_ij); diagonal zero."""
    mr = np.maximum(dist, np.maximum(core[:, None], core[None, :]))
    np.fill_diagonal(mr, 0.0)
    return mr


def mst(mr: np.ndarray) -> list[tuple[int, int, float]]:
    """Prim minimum spanning tree; ties broken by (min endpoint, max endpoint)."""
    n = mr.shape[0]
    if n == 1:
        return []
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best = mr[0].copy()
    best_from = np.zeros(n, dtype=np.int64)
    best[0] = np.inf
    edges: list[tuple[int, int, float]] = []
    for _ in range(n - 1):
        choice, choice_key = -1, None
        for j in range(n):
            if in_tree[j]:
                continue
            i = int(best_from[j])
            key = (best[j], min(i, j), max(i, j))
            if choice_key is None or key < choice_key:
                choice, choice_key = j, key
        i = int(best_from[choice])
        a, b = min(i, choice), max(i, choice)
        edges.append((a, b, float(best[choice])))
        in_tree[choice] = True
        for j in range(n):
            if in_tree[j]:
                continue
            d = mr[choice, j]
            if d < best[j]:
                best[j] = d
                best_from[j] = choice
            elif d == best[j]:
                cur = (min(int(best_from[j]), j), max(int(best_from[j]), j))
                new = (min(choice, j), max(choice, j))
                if new < cur:
                    best_from[j] = choice
    return edges


def _lambda_of(distance: float) -> float:
    return 1.0 / distance if distance > 0 else _ZERO_DISTANCE_LAMBDA


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        self.parent[self.find(a)] = self.find(b)


def _single_linkage(edges: list[tuple[int, int, float]], n: int):
    """Merge sorted MST edges into a binary dendrogram.

    Returns (left, right, dist, size) arrays indexed by internal node - n.
    """
    order = sorted(edges, key=lambda e: (e[2], e[0], e[1]))
    uf = _UnionFind(n)
    node_of_root: dict[int, int] = {}
    left, right, dist, size = [], [], [], []
    next_node = n
    for i, j, w in order:
        ri, rj = uf.find(i), uf.find(j)
        node_i = node_of_root.get(ri, ri)
        node_j = node_of_root.get(rj, rj)
        left.append(node_i)
        right.append(node_j)
        dist.append(w)
        size.append(_node_size(node_i, size, n) + _node_size(node_j, size, n))
        uf.union(i, j)
        node_of_root[uf.find(i)] = next_node
        next_node += 1
    return left, right, dist, size


def _node_size(node: int, size: list[int], n: int) -> int:
    return 1 if node < n else size[node - n]


def _collect_leaves(node: int, left, right, n: int) -> list[int]:
    out: list[int] = []
    stack = [node]
    while stack:
        cur = stack.pop()
        if cur < n:
            out.append(cur)
        else:
            stack.append(right[cur - n])
            stack.append(left[cur - n])
    return sorted(out)


def condense_tree(left, right, dist, size, n: int, min_cluster_size: int) -> CondensedTree:
    """Strip splits smaller than min_cluster_size from the dendrogram."""
    rows: list[tuple[int, int, float, int]] = []
    root = n
    next_cluster = n + 1
    if not dist:  # single point
        return CondensedTree(n_points=n, parents=np.array([root]), children=np.array([0]),
                             lambdas=np.array([_ZERO_DISTANCE_LAMBDA]), sizes=np.array([1]),
                             root=root, stability={root: 0.0}, selected=(root,))
    top = n + len(dist) - 1
    stack = [(top, root)]
    while stack:
        node, cluster = stack.pop()
        l, r = left[node - n], right[node - n]
        lam = _lambda_of(dist[node - n])
        sl = _node_size(l, size, n)
        sr = _node_size(r, size, n)
        if sl >= min_cluster_size and sr >= min_cluster_size:
            cl, next_cluster = next_cluster, next_cluster + 1
            rows.append((cluster, cl, lam, sl))
            cr, next_cluster = next_cluster, next_cluster + 1
            rows.append((cluster, cr, lam, sr))
            stack.append((l, cl))
            stack.append((r, cr))
        elif sl >= min_cluster_size:
            for p in _collect_leaves(r, left, right, n):
                rows.append((cluster, p, lam, 1))
            stack.append((l, cluster))
        elif sr >= min_cluster_size:
            for p in _collect_leaves(l, left, right, n):
                rows.append((cluster, p, lam, 1))
            stack.append((r, cluster))
        else:
            for p in _collect_leaves(l, left, right, n) + _collect_leaves(r, left, right, n):
                rows.append((cluster, p, lam, 1))
    parents = np.array([r[0] for r in rows], dtype=np.int64)
    children = np.array([r[1] for r in rows], dtype=np.int64)
    lambdas = np.array([r[2] for r in rows], dtype=float)
    sizes = np.array([r[3] for r in rows], dtype=np.int64)

    births = {root: 0.0}
    for parent, child, lam, sz in rows:
        if child >= n:
            births[child] = lam
    stability = {c: 0.0 for c in births}
    for parent, child, lam, sz in rows:
        stability[parent] += sz * (lam - births[parent])

    selected = _excess_of_mass(rows, stability, root, n)
    return CondensedTree(n_points=n, parents=parents, children=children, lambdas=lambdas,
                         sizes=sizes, root=root, stability=stability, selected=selected)


def _excess_of_mass(rows, stability: dict[int, float], root: int, n: int) -> tuple[int, ...]:
    """Select a cluster iff its stability exceeds its children's total; root only
    as a fallback when nothing else qualifies."""
    cluster_children: dict[int, list[int]] = {c: [] for c in stability}
    for parent, child, _, _ in rows:
        if child >= n:
            cluster_children[parent].append(child)
    candidates = sorted((c for c in stability if c != root), reverse=True)
    effective = dict(stability)
    selected: set[int] = set()
    for c in candidates:
        child_sum = sum(effective[d] for d in cluster_children[c])
        if stability[c] > child_sum:
            for d in _cluster_descendants(c, cluster_children):
                selected.discard(d)
            selected.add(c)
            effective[c] = stability[c]
        else:
            effective[c] = child_sum
    if not selected:
        selected = {root}
    return tuple(sorted(selected))


def _cluster_descendants(cluster: int, cluster_children: dict[int, list[int]]) -> list[int]:
    out: list[int] = []
    stack = list(cluster_children.get(cluster, []))
    while stack:
        c = stack.pop()
        out.append(c)
        stack.extend(cluster_children.get(c, []))
    return out


def _labels_from_tree(tree: CondensedTree) -> ClusterLabels:
    n = tree.n_points
    parent_of: dict[int, int] = {}
    point_parent: dict[int, int] = {}
    for parent, child in zip(tree.parents, tree.children):
        if child >= n:
            parent_of[int(child)] = int(parent)
        else:
            point_parent[int(child)] = int(parent)
    selected = set(tree.selected)
    label_map = {c: i for i, c in enumerate(sorted(selected))}
    labels = np.full(n, -1, dtype=np.int64)
    for p in range(n):
        cluster = point_parent.get(p, tree.root)
        while cluster not in selected and cluster in parent_of:
            cluster = parent_of[cluster]
        if cluster in selected:
            labels[p] = label_map[cluster]
    return ClusterLabels(labels=labels, n_clusters=len(selected))


def hdbscan(matrix, min_cluster_size: int = 5,
            min_samples: int | None = None) -> tuple[ClusterLabels, CondensedTree]:
    """Density clustering with excess-of-mass extraction; -1 labels noise."""
    values = _as_array(matrix)
    n = values.shape[0]
    if min_cluster_size < 2:
        raise ValueError("min_cluster_size must be >= 2")
    if n < min_cluster_size:
        raise ValueError(f"n={n} is smaller than min_cluster_size={min_cluster_size}")
    if min_samples is None:
        min_samples = min_cluster_size
    min_samples = min(min_samples, n - 1)
    dist = pairwise_distances(values, "euclidean")
    core = core_distances(values, min_samples)
    mr = mutual_reachability(dist, core)
    edges = mst(mr)
    left, right, d, size = _single_linkage(edges, n)
    tree = condense_tree(left, right, d, size, n, min_cluster_size)
    return _labels_from_tree(tree), tree


def kmeans(matrix, k: int, seed: int = 0, max_iter: int = 300) -> KmeansModel:
    """Lloyd iterations from k-means++ starts; empty clusters steal the farthest
    point from the largest cluster."""
    values = _as_array(matrix)
    n = values.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    rng = np.random.default_rng(seed)
    centroids = _kmeans_pp(values, k, rng)
    labels = np.zeros(n, dtype=np.int64)
    history: list[float] = []
    iterations = 0
    for it in range(max_iter):
        iterations = it + 1
        d2 = _sq_distances(values, centroids)
        new_labels = np.argmin(d2, axis=1)
        for c in range(k):
            if not np.any(new_labels == c):
                counts = np.bincount(new_labels, minlength=k)
                biggest = int(np.argmax(counts))
                members = np.nonzero(new_labels == biggest)[0]
                far = members[int(np.argmax(d2[members, biggest]))]
                new_labels[far] = c
        for c in range(k):
            centroids[c] = values[new_labels == c].mean(axis=0)
        inertia = float(np.sum((values - centroids[new_labels]) ** 2))
        history.append(inertia)
        if np.array_equal(new_labels, labels) and it > 0:
            labels = new_labels
            break
        labels = new_labels
    return KmeansModel(centroids=centroids, labels=labels, inertia=history[-1],
                       inertia_history=tuple(history), iterations=iterations)


def _kmeans_pp(values: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = values.shape[0]
    chosen = [int(rng.integers(n))]
    while len(chosen) < k:
        d2 = np.min(_sq_distances(values, values[chosen]), axis=1)
        total = float(d2.sum())
        if total <= 0.0:
            for i in range(n):
                if i not in chosen:
                    chosen.append(i)
                    break
            continue
        r = rng.random() * total
        idx = int(np.searchsorted(np.cumsum(d2), r, side="right"))
        chosen.append(min(idx, n - 1))
    return values[chosen].astype(float).copy()


def _sq_distances(values: np.ndarray, centers: np.ndarray) -> np.ndarray:
    diff = values[:, None, :] - centers[None, :, :]
    return np.sum(diff ** 2, axis=2)


def silhouette(matrix, labels: np.ndarray) -> float:
    """Mean (b - a) / max(a, b) over non-noise points; singletons score 0."""
    values = _as_array(matrix)
    labels = np.asarray(labels)
    mask = labels >= 0
    cluster_ids = sorted(set(labels[mask].tolist()))
    if len(cluster_ids) < 2:
        raise MetricUndefined("silhouette needs at least 2 clusters")
    pts = values[mask]
    labs = labels[mask]
    dist = pairwise_distances(pts, "euclidean")
    scores = []
    for i in range(pts.shape[0]):
        same = (labs == labs[i])
        n_same = int(same.sum())
        if n_same == 1:
            scores.append(0.0)
            continue
        a = float(dist[i, same].sum() / (n_same - 1))
        b = min(float(dist[i, labs == c].mean()) for c in cluster_ids if c != labs[i])
        denom = max(a, b)
        scores.append((b - a) / denom if denom > 0 else 0.0)
    return float(np.mean(scores))


def _apts_core_distances(pts: np.ndarray, dist: np.ndarray, dim: int) -> np.ndarray:
    """All-points core distance of the original density-validity definition."""
    n = pts.shape[0]
    core = np.zeros(n)
    for i in range(n):
        terms = []
        for j in range(n):
            if j == i:
                continue
            d = dist[i, j]
            terms.append(np.inf if d == 0 else (1.0 / d) ** dim)
        s = float(np.sum(terms))
        core[i] = 0.0 if np.isinf(s) else (s / (n - 1)) ** (-1.0 / dim)
    return core


def dbcv(matrix, labels: np.ndarray) -> float:
    """Density-based validity: sparseness (max internal MST edge) against
    separation (min inter-cluster reachability), size-weighted over clusters.

    All points noise, a single cluster, or singleton clusters contribute 0.
    """
    values = _as_array(matrix)
    labels = np.asarray(labels)
    cluster_ids = sorted(set(labels[labels >= 0].tolist()))
    if not cluster_ids:
        return 0.0
    if len(cluster_ids) == 1:
        return 0.0
    dim = values.shape[1]
    N = labels.shape[0]

    members: dict[int, np.ndarray] = {c: np.nonzero(labels == c)[0] for c in cluster_ids}
    apts: dict[int, np.ndarray] = {}
    sparseness: dict[int, float] = {}
    internal: dict[int, np.ndarray] = {}
    for c in cluster_ids:
        idx = members[c]
        pts = values[idx]
        if idx.size < 2:
            apts[c] = np.zeros(idx.size)
            sparseness[c] = 0.0
            internal[c] = idx
            continue
        dist = pairwise_distances(pts, "euclidean")
        core = _apts_core_distances(pts, dist, dim)
        apts[c] = core
        mr = mutual_reachability(dist, core)
        edges = mst(mr)
        degree = np.zeros(idx.size, dtype=int)
        for i, j, _ in edges:
            degree[i] += 1
            degree[j] += 1
        internal_edges = [w for i, j, w in edges if degree[i] > 1 and degree[j] > 1]
        sparseness[c] = max(internal_edges) if internal_edges else max(w for _, _, w in edges)
        nodes = np.nonzero(degree > 1)[0]
        internal[c] = idx[nodes] if nodes.size else idx

    validity_sum = 0.0
    for c in cluster_ids:
        idx = members[c]
        if idx.size < 2:
            continue
        separation = np.inf
        for other in cluster_ids:
            if other == c:
                continue
            for gi, p in enumerate(internal[c]):
                pi = int(np.nonzero(members[c] == p)[0][0])
                for q in internal[other]:
                    qi = int(np.nonzero(members[other] == q)[0][0])
                    d = float(np.linalg.norm(values[p] - values[q]))
                    reach = max(apts[c][pi], apts[other][qi], d)
                    separation = min(separation, reach)
        denom = max(separation, sparseness[c])
        v = (separation - sparseness[c]) / denom if denom > 0 else 0.0
        validity_sum += (idx.size / N) * v
    return float(validity_sum)
