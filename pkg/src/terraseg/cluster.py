"""Agglomerative clustering: squared Euclidean distances and the merge tree.

Two interchangeable engines build the tree:

* a nearest-neighbor-chain pass, O(n^2), exact for the reducible linkages
  (single, complete, average, ward);
* a naive greedy scan, O(n^3), valid for every linkage and used as the
  reference path and for centroid/median, which are not reducible and can
  produce inversions (a merge lower than its predecessor; a warning is
  emitted and counted on the tree).

Inter-cluster distances are maintained with the Lance-Williams recurrence

    d(k, i+j) = a_i d(k,i) + a_j d(k,j) + b d(i,j) + g |d(k,i) - d(k,j)|

with the standard coefficients per linkage, applied to squared Euclidean
distances. Merge heights therefore stay in squared-distance units throughout.

Ties are broken deterministically: among equally close pairs the naive scan
merges the lexicographically smallest pair of node ids. Node ids follow the
usual convention: leaves are 0..n-1, internal nodes n..2n-2 in merge order.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvalidLinkage, TooFewEntities
from .normalize import NormalizedMatrix

LINKAGES = ("single", "complete", "average", "ward", "centroid", "median")
REDUCIBLE_LINKAGES = ("single", "complete", "average", "ward")


@dataclass(frozen=True)
class DistanceMatrix:
    """Condensed upper triangle of pairwise distances over n entities."""

    n: int
    condensed: np.ndarray
    metric: str = "squared-euclidean"

    def __post_init__(self) -> None:
        expected = self.n * (self.n - 1) // 2
        if self.condensed.shape != (expected,):
            raise ValueError(f"condensed length {self.condensed.shape} != {expected} for n={self.n}")

    def value(self, i: int, j: int) -> float:
        if i == j:
            return 0.0
        if i > j:
            i, j = j, i
        return float(self.condensed[self.n * i - (i * (i + 1)) // 2 + (j - i - 1)])

    def full(self) -> np.ndarray:
        """Expand to a symmetric square matrix with a zero diagonal."""
        m = np.zeros((self.n, self.n))
        iu = np.triu_indices(self.n, k=1)
        m[iu] = self.condensed
        m[(iu[1], iu[0])] = self.condensed
        return m


@dataclass(frozen=True)
class Merge:
    left: int
    right: int
    height: float
    size: int


@dataclass(frozen=True)
class MergeTree:
    """Rooted binary merge tree over n leaves: n-1 merges with heights."""

    n_leaves: int
    merges: tuple[Merge, ...]
    linkage: str
    inversions: int = 0

    def heights(self) -> np.ndarray:
        return np.array([m.height for m in self.merges])

    def children(self) -> dict[int, tuple[int, int]]:
        return {self.n_leaves + k: (m.left, m.right) for k, m in enumerate(self.merges)}

    def leaf_order(self) -> list[int]:
        """Depth-first leaf order, visiting the smaller-id child first."""
        if self.n_leaves == 1:
            return [0]
        kids = self.children()
        order: list[int] = []
        stack = [self.n_leaves + len(self.merges) - 1]
        while stack:
            node = stack.pop()
            if node < self.n_leaves:
                order.append(node)
            else:
                left, right = kids[node]
                first, second = (left, right) if left < right else (right, left)
                stack.append(second)
                stack.append(first)
        return order

    def as_dict(self) -> dict:
        return {
            "n": self.n_leaves,
            "linkage": self.linkage,
            "inversions": self.inversions,
            "merges": [
                {"left": m.left, "right": m.right, "height": m.height, "size": m.size}
                for m in self.merges
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MergeTree":
        return cls(
            n_leaves=int(d["n"]),
            merges=tuple(
                Merge(int(m["left"]), int(m["right"]), float(m["height"]), int(m["size"]))
                for m in d["merges"]
            ),
            linkage=d.get("linkage", "ward"),
            inversions=int(d.get("inversions", 0)),
        )

    def to_newick(self, names: list[str] | None = None) -> str:
        """Newick text form; branch lengths are height differences to the parent."""
        n = self.n_leaves
        names = names if names is not None else [str(i) for i in range(n)]
        height_of = {i: 0.0 for i in range(n)}
        text: dict[int, str] = {i: names[i] for i in range(n)}
        for k, m in enumerate(self.merges):
            node = n + k
            parts = []
            for child in sorted((m.left, m.right)):
                parts.append(f"{text.pop(child)}:{max(m.height - height_of[child], 0.0):.6g}")
            text[node] = "(" + ",".join(parts) + ")"
            height_of[node] = m.height
        root = n + len(self.merges) - 1
        return text[root] + ";"


def pairwise_distances(z: NormalizedMatrix | np.ndarray) -> DistanceMatrix:
    """Squared Euclidean distance between every pair of entity rows.

    Each pair is computed once from explicit coordinate differences, so the
    matrix is symmetric and non-negative by construction.
    """
    x = z.z if isinstance(z, NormalizedMatrix) else np.asarray(z, dtype=float)
    n = x.shape[0]
    if n < 2:
        raise TooFewEntities(f"need at least 2 entities, got {n}")
    out = np.empty(n * (n - 1) // 2)
    pos = 0
    for i in range(n - 1):
        diff = x[i + 1 :] - x[i]
        out[pos : pos + n - 1 - i] = np.einsum("ij,ij->i", diff, diff)
        pos += n - 1 - i
    return DistanceMatrix(n=n, condensed=out)


def _lw_update(
    linkage: str,
    d_xk: np.ndarray,
    d_yk: np.ndarray,
    d_xy: float,
    s_x: float,
    s_y: float,
    s_k: np.ndarray,
) -> np.ndarray:
    if linkage == "single":
        return np.minimum(d_xk, d_yk)
    if linkage == "complete":
        return np.maximum(d_xk, d_yk)
    if linkage == "average":
        return (s_x * d_xk + s_y * d_yk) / (s_x + s_y)
    if linkage == "ward":
        tot = s_x + s_y + s_k
        return ((s_x + s_k) * d_xk + (s_y + s_k) * d_yk - s_k * d_xy) / tot
    if linkage == "centroid":
        s = s_x + s_y
        return (s_x * d_xk + s_y * d_yk) / s - (s_x * s_y * d_xy) / (s * s)
    if linkage == "median":
        return 0.5 * d_xk + 0.5 * d_yk - 0.25 * d_xy
    raise InvalidLinkage(linkage)


def agglomerate(dm: DistanceMatrix, linkage: str = "ward", engine: str = "auto") -> MergeTree:
    """Build the n-1 merges for the requested linkage.

    Parameters
    ----------
    dm : DistanceMatrix
        Pairwise squared Euclidean distances.
    linkage : str
        One of single, complete, average, ward, centroid, median.
    engine : str
        "auto" picks the chain pass for reducible linkages and the naive scan
        otherwise; "chain" and "naive" force one engine (chain rejects
        centroid/median, whose non-reducibility breaks it).
    """
    if linkage not in LINKAGES:
        raise InvalidLinkage(linkage)
    if engine == "auto":
        engine = "chain" if linkage in REDUCIBLE_LINKAGES else "naive"
    if engine == "chain":
        if linkage not in REDUCIBLE_LINKAGES:
            raise InvalidLinkage(f"{linkage} is not reducible; use the naive engine")
        merges = _agglomerate_chain(dm, linkage)
    elif engine == "naive":
        merges = _agglomerate_naive(dm, linkage)
    else:
        raise ValueError(f"unknown engine {engine!r}")

    inversions = sum(
        1 for prev, cur in zip(merges, merges[1:]) if cur.height < prev.height
    )
    if inversions:
        warnings.warn(
            f"{linkage} linkage produced {inversions} inversion(s): "
            "merge heights are not monotone",
            stacklevel=2,
        )
    return MergeTree(n_leaves=dm.n, merges=tuple(merges), linkage=linkage, inversions=inversions)


def _agglomerate_naive(dm: DistanceMatrix, linkage: str) -> list[Merge]:
    """Greedy scan over all active pairs; ties go to the smallest (i, j) node pair."""
    n = dm.n
    m = 2 * n - 1
    d = np.full((m, m), np.inf)
    d[:n, :n] = dm.full()
    np.fill_diagonal(d, np.inf)
    sizes = np.ones(m)
    active = np.zeros(m, dtype=bool)
    active[:n] = True
    merges: list[Merge] = []
    for step in range(n - 1):
        act = np.flatnonzero(active)
        sub = d[np.ix_(act, act)]
        sub = np.where(np.triu(np.ones(sub.shape, dtype=bool), k=1), sub, np.inf)
        flat = int(np.argmin(sub))
        i, j = divmod(flat, len(act))
        a, b = int(act[i]), int(act[j])
        height = float(d[a, b])
        new = n + step
        others = act[(act != a) & (act != b)]
        if others.size:
            updated = _lw_update(linkage, d[a, others], d[b, others], height, sizes[a], sizes[b], sizes[others])
            d[new, others] = updated
            d[others, new] = updated
        active[a] = active[b] = False
        active[new] = True
        sizes[new] = sizes[a] + sizes[b]
        merges.append(Merge(left=a, right=b, height=height, size=int(sizes[new])))
    return merges


def _agglomerate_chain(dm: DistanceMatrix, linkage: str) -> list[Merge]:
    """Nearest-neighbor-chain pass over leaf-indexed slots.

    Merges come out in chain order, not height order; they are stably sorted
    by height afterwards and relabelled through a union-find, which yields the
    same stepwise tree as the greedy scan for reducible linkages.
    """
    n = dm.n
    d = dm.full()
    np.fill_diagonal(d, np.inf)
    sizes = np.ones(n)
    alive = np.ones(n, dtype=bool)
    raw: list[tuple[float, int, int]] = []  # (height, slot_a, slot_b)
    chain: list[int] = []

    for _ in range(n - 1):
        if len(chain) < 2:
            start = int(np.flatnonzero(alive)[0])
            chain = [start]
        while True:
            a = chain[-1]
            row = np.where(alive, d[a], np.inf)
            row[a] = np.inf
            b = int(np.argmin(row))
            prev = chain[-2] if len(chain) > 1 else -1
            # Prefer the previous chain element on ties: guarantees termination.
            if prev >= 0 and row[prev] == row[b]:
                b = prev
            if b == prev:
                break
            chain.append(b)
        a = chain.pop()
        b = chain.pop()
        height = float(d[a, b])
        raw.append((height, a, b))
        keep, drop = (a, b) if a < b else (b, a)
        others = np.flatnonzero(alive)
        others = others[(others != a) & (others != b)]
        if others.size:
            updated = _lw_update(linkage, d[a, others], d[b, others], height, sizes[a], sizes[b], sizes[others])
            d[keep, others] = updated
            d[others, keep] = updated
        alive[drop] = False
        sizes[keep] = sizes[a] + sizes[b]

    # Stable sort by height, then map slot representatives to node ids.
    order = sorted(range(n - 1), key=lambda k: raw[k][0])
    parent = list(range(2 * n - 1))

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    node_sizes = [1] * n + [0] * (n - 1)
    merges: list[Merge] = []
    for k, idx in enumerate(order):
        height, sa, sb = raw[idx]
        ra, rb = find(sa), find(sb)
        left, right = (ra, rb) if ra < rb else (rb, ra)
        new = n + k
        parent[ra] = parent[rb] = new
        node_sizes[new] = node_sizes[ra] + node_sizes[rb]
        merges.append(Merge(left=left, right=right, height=height, size=node_sizes[new]))
    return merges


def cophenetic_heights(t: MergeTree) -> DistanceMatrix:
    """Matrix whose (i, j) entry is the height of the lowest common merge."""
    n = t.n_leaves
    coph = np.zeros((n, n))
    members: dict[int, list[int]] = {i: [i] for i in range(n)}
    for k, m in enumerate(t.merges):
        left = members.pop(m.left)
        right = members.pop(m.right)
        coph[np.ix_(left, right)] = m.height
        coph[np.ix_(right, left)] = m.height
        members[n + k] = left + right
    iu = np.triu_indices(n, k=1)
    return DistanceMatrix(n=n, condensed=coph[iu], metric="cophenetic")
