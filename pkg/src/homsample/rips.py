"""Vietoris-Rips complexes up to dimension 2 and their boundary maps.

A k-simplex enters the complex exactly when all pairwise distances among
its vertices are <= the threshold.  Simplices are stored as integer
arrays in strictly increasing vertex order, listed lexicographically, so
column order in the boundary matrices is reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.spatial.distance import cdist

from .field import DEFAULT_P, FieldMatrix
from .pointcloud import PointCloud


@dataclass
class SimplicialComplex:
    cloud: PointCloud
    threshold: float
    max_dim: int
    edges: np.ndarray      # (E, 2) int32, lexicographic
    triangles: np.ndarray  # (T, 3) int32, lexicographic; empty when max_dim < 2

    _edge_index: Optional[dict] = None

    @property
    def n_vertices(self) -> int:
        return len(self.cloud)

    @property
    def n_edges(self) -> int:
        return self.edges.shape[0]

    @property
    def n_triangles(self) -> int:
        return self.triangles.shape[0]

    def simplex_counts(self) -> tuple[int, int, int]:
        return (self.n_vertices, self.n_edges, self.n_triangles)

    def simplices(self, k: int) -> np.ndarray:
        """(count, k+1) array of vertex tuples for dimension k."""
        if k == 0:
            return np.arange(self.n_vertices, dtype=np.int32).reshape(-1, 1)
        if k == 1:
            return self.edges
        if k == 2:
            return self.triangles
        raise ValueError(f"dimension {k} out of range 0..2")

    def edge_index(self, u: int, v: int) -> int:
        """Index of edge (u, v), u < v; raises KeyError when absent."""
        if self._edge_index is None:
            self._edge_index = {(int(a), int(b)): i
                                for i, (a, b) in enumerate(self.edges)}
        return self._edge_index[(u, v)]

    def simplex_index(self, simplex: tuple) -> int:
        """Position of a simplex inside its dimension's lexicographic list."""
        s = tuple(int(v) for v in simplex)
        if any(a >= b for a, b in zip(s, s[1:])):
            raise ValueError(f"vertices must be strictly increasing, got {s}")
        k = len(s) - 1
        if k == 0:
            if not 0 <= s[0] < self.n_vertices:
                raise KeyError(f"vertex {s} not in complex")
            return s[0]
        if k == 1:
            return self.edge_index(*s)
        if k == 2:
            idx = _lex_search(self.triangles, s)
            if idx is None:
                raise KeyError(f"triangle {s} not in complex")
            return idx
        raise ValueError(f"dimension {k} out of range 0..2")

    def to_json(self) -> dict:
        return {
            "threshold": self.threshold,
            "max_dim": self.max_dim,
            "simplices": {
                "0": [[int(i)] for i in range(self.n_vertices)],
                "1": self.edges.tolist(),
                "2": self.triangles.tolist(),
            },
        }


def _lex_search(arr: np.ndarray, row: tuple) -> Optional[int]:
    """Binary search for `row` in a lexicographically sorted 2-d array."""
    if arr.shape[0] == 0:
        return None
    lo, hi = 0, arr.shape[0]
    target = tuple(row)
    while lo < hi:
        mid = (lo + hi) // 2
        cur = tuple(int(v) for v in arr[mid])
        if cur < target:
            lo = mid + 1
        elif cur > target:
            hi = mid
        else:
            return mid
    return None


def build_rips(cloud: PointCloud, r: float, max_dim: int = 2) -> SimplicialComplex:
    """Rips complex at threshold r by brute-force O(n^2) distance tests."""
    if len(cloud) == 0:
        raise ValueError("empty cloud")
    if r <= 0:
        raise ValueError(f"threshold must be positive, got {r}")
    if max_dim not in (1, 2):
        raise ValueError(f"max_dim must be 1 or 2, got {max_dim}")
    pts = cloud.points
    n = len(cloud)
    adj = cdist(pts, pts) <= r
    np.fill_diagonal(adj, False)
    iu, ju = np.nonzero(np.triu(adj, 1))
    edges = np.column_stack([iu, ju]).astype(np.int32)
    # lexicographic by construction: np.nonzero scans row-major

    triangles = np.zeros((0, 3), dtype=np.int32)
    if max_dim == 2 and edges.shape[0]:
        chunks = []
        for i, j in edges:
            ks = np.nonzero(adj[i] & adj[j])[0]
            ks = ks[ks > j]
            if ks.size:
                tri = np.empty((ks.size, 3), dtype=np.int32)
                tri[:, 0] = i
                tri[:, 1] = j
                tri[:, 2] = ks
                chunks.append(tri)
        if chunks:
            triangles = np.concatenate(chunks)
            # edge loop runs in lex order, so triangles come out lex sorted
    return SimplicialComplex(cloud=cloud, threshold=float(r), max_dim=max_dim,
                             edges=edges, triangles=triangles)


@dataclass
class BoundaryMatrix:
    """Boundary operator from k-chains to (k-1)-chains as a dense FieldMatrix."""
    k: int
    matrix: FieldMatrix


def triangle_face_indices(cx: SimplicialComplex) -> np.ndarray:
    """(T, 3) edge indices of each triangle's faces, ordered to match the
    alternating-sign boundary: (b,c) +, (a,c) -, (a,b) +."""
    t = cx.triangles
    if t.shape[0] == 0:
        return np.zeros((0, 3), dtype=np.int64)
    n = cx.n_vertices
    edge_keys = cx.edges[:, 0].astype(np.int64) * n + cx.edges[:, 1]
    a, b, c = (t[:, 0].astype(np.int64), t[:, 1].astype(np.int64),
               t[:, 2].astype(np.int64))
    face_keys = np.stack([b * n + c, a * n + c, a * n + b], axis=1)
    out = np.searchsorted(edge_keys, face_keys)
    if (out >= edge_keys.shape[0]).any() or (edge_keys[out] != face_keys).any():
        bad = np.argwhere(edge_keys[np.minimum(out, edge_keys.shape[0] - 1)]
                          != face_keys)[0]
        key = int(face_keys[bad[0], bad[1]])
        raise ValueError(
            f"triangle face ({key // n}, {key % n}) is not an edge of the complex"
        )
    return out


def boundary_matrices(cx: SimplicialComplex, p: int = DEFAULT_P) -> list[BoundaryMatrix]:
    """Dense boundary maps [d_1, d_2] over F_p.

    d[v_0..v_k] = sum_i (-1)^i [v_0..v_i-hat..v_k]; a single edge (u, v)
    therefore has column (p-1, 1) in vertex rows (u, v).  Dense storage
    keeps this honest for tests; large complexes go through the sparse
    reduction engine instead.
    """
    n, e, t = cx.simplex_counts()
    d1 = np.zeros((n, e), dtype=np.int64)
    for j, (a, b) in enumerate(cx.edges):
        d1[a, j] = p - 1
        d1[b, j] = 1
    mats = [BoundaryMatrix(1, FieldMatrix(d1, p))]
    if cx.max_dim >= 2:
        d2 = np.zeros((e, t), dtype=np.int64)
        faces = triangle_face_indices(cx)
        for j in range(t):
            d2[faces[j, 0], j] = (d2[faces[j, 0], j] + 1) % p
            d2[faces[j, 1], j] = (d2[faces[j, 1], j] + p - 1) % p
            d2[faces[j, 2], j] = (d2[faces[j, 2], j] + 1) % p
        mats.append(BoundaryMatrix(2, FieldMatrix(d2, p)))
    return mats
