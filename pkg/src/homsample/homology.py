"""Homology of chain complexes over F_p via column reduction.

The reduction factors each boundary map as R_k = d_k @ U_k with U_k unit
upper triangular and R_k having distinct lowest-nonzero rows across its
nonzero columns.  Betti numbers, surviving cycle indices and the
change-of-basis columns all read off the factorization.  One sparse
engine (see _reduction) serves both the dense test-sized path and the
large complexes from the sampling pipeline; dense R/U matrices are
materialized lazily and only when the operation log was recorded.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from ._reduction import reduce_columns
from .field import DEFAULT_P, FieldMatrix, _check_prime
from .pointcloud import PointCloud
from .rips import BoundaryMatrix, SimplicialComplex, triangle_face_indices

__all__ = [
    "BettiVector",
    "PersistencePair",
    "ReducedChainComplex",
    "betti_at_scale",
    "persistence_baseline",
    "reduce",
    "reduce_complex",
]


@dataclass(frozen=True)
class BettiVector:
    """Ranks of H_0 and H_1; higher degrees are out of scope here."""

    beta0: int
    beta1: int

    def as_tuple(self) -> tuple[int, int]:
        return (self.beta0, self.beta1)

    def dominates(self, other: "BettiVector") -> bool:
        """Componentwise >=, the overcounting comparison used in benchmarks."""
        return self.beta0 >= other.beta0 and self.beta1 >= other.beta1


@dataclass
class _Level:
    """Reduction output for one boundary map d_k."""

    n_rows: int
    n_cols: int
    pivrow: np.ndarray          # per column, its pivot row or -1
    pool_rows: np.ndarray       # stored pivot columns, rows descending
    pool_coefs: np.ndarray
    col_start: np.ndarray
    col_len: np.ndarray
    ops_col: np.ndarray | None  # recorded (pivot column, multiplier) per column
    ops_alpha: np.ndarray | None
    ops_start: np.ndarray | None
    _pivcol: np.ndarray | None = field(default=None, repr=False)

    @property
    def rank(self) -> int:
        return int((self.pivrow >= 0).sum())

    def pivcol_of_row(self) -> np.ndarray:
        if self._pivcol is None:
            pc = np.full(self.n_rows, -1, dtype=np.int64)
            owned = np.nonzero(self.pivrow >= 0)[0]
            pc[self.pivrow[owned]] = owned
            self._pivcol = pc
        return self._pivcol

    def column(self, j: int) -> tuple[np.ndarray, np.ndarray] | None:
        """Reduced column j as (rows descending, coefficients), None if zero."""
        if self.pivrow[j] < 0:
            return None
        s = self.col_start[j]
        e = s + self.col_len[j]
        return self.pool_rows[s:e], self.pool_coefs[s:e]


class ReducedChainComplex:
    """Reduced boundary maps d_1..d_K of a complex with `n_simplices[k]`
    cells in each degree.  Degree 0 needs no reduction: U_0 is the
    identity and R_0 the empty map."""

    def __init__(self, p: int, n_simplices: tuple[int, ...],
                 levels: list[_Level]):
        self.p = p
        self.n_simplices = n_simplices
        self._levels = levels

    @property
    def max_dim(self) -> int:
        return len(self._levels)

    def level(self, k: int) -> _Level:
        if not 1 <= k <= self.max_dim:
            raise ValueError(f"no boundary map in degree {k}")
        return self._levels[k - 1]

    def rank(self, k: int) -> int:
        """Rank of d_k (0 outside the complex's range)."""
        if 1 <= k <= self.max_dim:
            return self.level(k).rank
        return 0

    def betti(self) -> BettiVector:
        z0 = self.n_simplices[0]
        b0 = z0 - self.rank(1)
        b1 = 0
        if len(self.n_simplices) > 1:
            b1 = (self.n_simplices[1] - self.rank(1)) - self.rank(2)
        return BettiVector(b0, b1)

    def kernel_columns(self, k: int) -> np.ndarray:
        """Columns of U_k spanning ker d_k (those whose R_k column is zero)."""
        if k == 0:
            return np.arange(self.n_simplices[0])
        return np.nonzero(self.level(k).pivrow < 0)[0]

    def pivot_rows(self, k: int) -> np.ndarray:
        """Rows holding a pivot of R_k, i.e. the degree-(k-1) cycles that
        become boundaries."""
        if not 1 <= k <= self.max_dim:
            return np.zeros(0, dtype=np.int64)
        piv = self.level(k).pivrow
        return np.sort(piv[piv >= 0])

    def surviving_indices(self, k: int) -> np.ndarray:
        """Indices I_k: kernel columns of d_k not killed as pivots of
        R_{k+1}.  The U_k columns at these indices represent a homology
        basis, and len(I_k) equals the k-th Betti number."""
        kernel = self.kernel_columns(k)
        killed = self.pivot_rows(k + 1)
        if killed.size and not np.isin(killed, kernel).all():
            raise AssertionError(
                "pivot row of R_{k+1} is not a kernel column of d_k; "
                "the input was not a chain complex")
        return np.setdiff1d(kernel, killed)

    def u_column(self, k: int, j: int) -> dict[int, int]:
        """Column j of U_k as a sparse {row: coefficient} map, rebuilt from
        the recorded reduction operations."""
        lev = self.level(k)
        if lev.ops_start is None:
            raise ValueError(
                f"degree-{k} reduction was run without operation recording; "
                "U columns are unavailable")
        coef = {j: 1}
        heap = [-j]
        out: dict[int, int] = {}
        p = self.p
        while heap:
            i = -heapq.heappop(heap)
            if i not in coef:
                continue
            g = coef.pop(i)
            if g == 0:
                continue
            out[i] = g
            for q in range(lev.ops_start[i], lev.ops_start[i + 1]):
                pc = int(lev.ops_col[q])
                if pc not in coef:
                    coef[pc] = 0
                    heapq.heappush(heap, -pc)
                coef[pc] = (coef[pc] - int(lev.ops_alpha[q]) * g) % p
        return out

    def u_matrix(self, k: int) -> FieldMatrix:
        """Dense U_k (unit upper triangular, invertible)."""
        if k == 0:
            return FieldMatrix.identity(self.n_simplices[0], self.p)
        lev = self.level(k)
        data = np.zeros((lev.n_cols, lev.n_cols), dtype=np.int64)
        for j in range(lev.n_cols):
            for i, c in self.u_column(k, j).items():
                data[i, j] = c
        return FieldMatrix(data, self.p)

    def r_matrix(self, k: int) -> FieldMatrix:
        """Dense R_k = d_k @ U_k."""
        if k == 0:
            return FieldMatrix.zeros(0, self.n_simplices[0], self.p)
        lev = self.level(k)
        data = np.zeros((lev.n_rows, lev.n_cols), dtype=np.int64)
        for j in range(lev.n_cols):
            col = lev.column(j)
            if col is not None:
                rows, coefs = col
                data[rows, j] = coefs
        return FieldMatrix(data, self.p)


def _csc_from_dense(mat: FieldMatrix):
    colv, rowv = np.nonzero(mat.data.T)
    coefs = mat.data.T[colv, rowv].astype(np.int8)
    col_ptr = np.zeros(mat.cols + 1, dtype=np.int64)
    np.cumsum(np.bincount(colv, minlength=mat.cols), out=col_ptr[1:])
    return col_ptr, rowv.astype(np.int32), coefs


def _run(n_rows: int, n_cols: int, col_ptr, rows, coefs, p: int,
         record_ops: bool) -> _Level:
    (pivrow, pool_rows, pool_coefs, col_start, col_len,
     ops_col, ops_alpha, ops_start) = reduce_columns(
        n_rows, col_ptr, rows, coefs, p, record_ops)
    return _Level(
        n_rows, n_cols, pivrow, pool_rows, pool_coefs, col_start, col_len,
        ops_col if record_ops else None,
        ops_alpha if record_ops else None,
        ops_start if record_ops else None)


def reduce(boundaries: list[BoundaryMatrix],
           p: int | None = None) -> ReducedChainComplex:
    """Reduce explicit boundary matrices (degrees 1..K, consecutive).

    Validates chain-complex structure: shapes must chain together and
    consecutive maps must compose to zero, else ValueError.  Operation
    logs are always recorded, so U_k is available in every degree.
    """
    if not boundaries:
        raise ValueError("need at least one boundary matrix")
    for i, bm in enumerate(boundaries):
        if bm.k != i + 1:
            raise ValueError(
                f"boundary maps must cover degrees 1..K in order; "
                f"position {i} has degree {bm.k}")
    if p is None:
        p = boundaries[0].matrix.p
    _check_prime(p)
    for bm in boundaries:
        if bm.matrix.p != p:
            raise ValueError("boundary maps must share the field modulus")
    for lo, hi in zip(boundaries, boundaries[1:]):
        if lo.matrix.cols != hi.matrix.rows:
            raise ValueError(
                f"incompatible shapes: d_{hi.k} has {hi.matrix.rows} rows "
                f"but d_{lo.k} has {lo.matrix.cols} columns")
        prod = lo.matrix @ hi.matrix
        if not prod.is_zero():
            raise ValueError(
                f"not a chain complex: d_{lo.k} @ d_{hi.k} != 0")
    n_simplices = tuple([boundaries[0].matrix.rows]
                        + [bm.matrix.cols for bm in boundaries])
    levels = []
    for bm in boundaries:
        col_ptr, rows, coefs = _csc_from_dense(bm.matrix)
        levels.append(_run(bm.matrix.rows, bm.matrix.cols,
                           col_ptr, rows, coefs, p, True))
    return ReducedChainComplex(p, n_simplices, levels)


def reduce_complex(cx: SimplicialComplex, p: int = DEFAULT_P,
                   record_ops2: bool = False) -> ReducedChainComplex:
    """Reduce a Rips complex without materializing dense boundary maps.

    d_1 columns are the (-1, +1) endpoint pairs of the edges; d_2 columns
    the alternating (+1, -1, +1) triangle faces.  Face lookup fails loudly
    if a triangle's edge is missing, which is the only way these sparse
    columns could fail to compose to zero.  The degree-1 operation log is
    always kept (induced maps need U_1); the degree-2 log is opt-in since
    it is large and only dense U_2 export uses it.
    """
    _check_prime(p)
    v, e, t = cx.simplex_counts()

    col_ptr1 = np.arange(e + 1, dtype=np.int64) * 2
    rows1 = cx.edges.reshape(-1).astype(np.int32)
    coefs1 = np.tile(np.array([p - 1, 1], dtype=np.int8), e)
    levels = [_run(v, e, col_ptr1, rows1, coefs1, p, True)]

    if cx.max_dim >= 2:
        faces = triangle_face_indices(cx)
        col_ptr2 = np.arange(t + 1, dtype=np.int64) * 3
        rows2 = faces.reshape(-1).astype(np.int32)
        coefs2 = np.tile(np.array([1, p - 1, 1], dtype=np.int8), t)
        levels.append(_run(e, t, col_ptr2, rows2, coefs2, p, record_ops2))
        return ReducedChainComplex(p, (v, e, t), levels)
    return ReducedChainComplex(p, (v, e), levels)


@dataclass(frozen=True)
class PersistencePair:
    """One persistent class: born entering at scale `birth`, dying at
    `death` (math.inf when it survives the whole filtration)."""

    birth: float
    death: float
    dim: int

    @property
    def essential(self) -> bool:
        return math.isinf(self.death)


def persistence_baseline(cloud: PointCloud, r_max: float, steps: int = 50,
                         p: int = DEFAULT_P) -> list[PersistencePair]:
    """Persistent H_0/H_1 of the Rips filtration discretized at `steps`
    evenly spaced scales up to r_max.

    This is the reference pipeline we benchmark the sampled estimator
    against: one global reduction of the filtration-ordered boundary
    matrix, pairing each creator with the column that kills it.
    """
    _check_prime(p)
    if steps < 1:
        raise ValueError("steps must be positive")
    pts = cloud.points
    n = pts.shape[0]
    scales = np.linspace(r_max / steps, r_max, steps)

    dist = cdist(pts, pts)
    iu, ju = np.nonzero(np.triu(dist <= r_max, k=1))
    edge_len = dist[iu, ju]
    edge_step = np.searchsorted(scales, edge_len, side="left") + 1

    adj = dist <= r_max
    tri_a, tri_b, tri_c, tri_step = [], [], [], []
    for idx in range(iu.shape[0]):
        a, b = int(iu[idx]), int(ju[idx])
        ks = np.nonzero(adj[a, b + 1:] & adj[b, b + 1:])[0] + b + 1
        if ks.size:
            tri_a.append(np.full(ks.size, a))
            tri_b.append(np.full(ks.size, b))
            tri_c.append(ks)
            longest = np.maximum(dist[a, ks], np.maximum(dist[b, ks],
                                                         edge_len[idx]))
            tri_step.append(np.searchsorted(scales, longest, side="left") + 1)
    if tri_a:
        ta = np.concatenate(tri_a)
        tb = np.concatenate(tri_b)
        tc = np.concatenate(tri_c)
        ts = np.concatenate(tri_step)
    else:
        ta = tb = tc = ts = np.zeros(0, dtype=np.int64)

    n_e, n_t = iu.shape[0], ta.shape[0]
    step_all = np.concatenate([np.zeros(n, dtype=np.int64), edge_step, ts])
    dim_all = np.concatenate([np.zeros(n, dtype=np.int64),
                              np.ones(n_e, dtype=np.int64),
                              np.full(n_t, 2, dtype=np.int64)])
    order = np.lexsort((np.arange(n + n_e + n_t), dim_all, step_all))
    pos = np.empty_like(order)
    pos[order] = np.arange(order.shape[0])

    value = np.concatenate([[0.0], scales])
    birth_val = value[step_all[order]]
    dim_ord = dim_all[order]

    edge_keys = iu.astype(np.int64) * n + ju
    face_pos = [np.searchsorted(edge_keys, u.astype(np.int64) * n + v)
                for u, v in ((tb, tc), (ta, tc), (ta, tb))]

    lens = np.where(order < n, 0, np.where(order < n + n_e, 2, 3))
    col_ptr = np.zeros(order.shape[0] + 1, dtype=np.int64)
    np.cumsum(lens, out=col_ptr[1:])
    rows = np.zeros(col_ptr[-1], dtype=np.int32)
    coefs = np.zeros(col_ptr[-1], dtype=np.int8)

    e_cols = np.nonzero((order >= n) & (order < n + n_e))[0]
    e_ids = order[e_cols] - n
    starts = col_ptr[e_cols]
    rows[starts] = pos[iu[e_ids]]
    rows[starts + 1] = pos[ju[e_ids]]
    coefs[starts] = p - 1
    coefs[starts + 1] = 1

    t_cols = np.nonzero(order >= n + n_e)[0]
    t_ids = order[t_cols] - n - n_e
    starts = col_ptr[t_cols]
    for off, (fp, c) in enumerate(zip(face_pos, (1, p - 1, 1))):
        rows[starts + off] = pos[n + fp[t_ids]]
        coefs[starts + off] = c

    lev = _run(order.shape[0], order.shape[0], col_ptr, rows, coefs, p, False)

    pairs = []
    killed = np.zeros(order.shape[0], dtype=bool)
    for j in range(order.shape[0]):
        low = lev.pivrow[j]
        if low < 0:
            continue
        killed[low] = True
        if dim_ord[low] <= 1:
            pairs.append(PersistencePair(float(birth_val[low]),
                                         float(birth_val[j]),
                                         int(dim_ord[low])))
    creators = lev.pivrow < 0
    for j in np.nonzero(creators & ~killed)[0]:
        if dim_ord[j] <= 1:
            pairs.append(PersistencePair(float(birth_val[j]), math.inf,
                                         int(dim_ord[j])))
    pairs.sort(key=lambda q: (q.dim, q.birth, q.death))
    return pairs


def betti_at_scale(pairs: list[PersistencePair], scale: float) -> BettiVector:
    """Betti numbers read from a persistence diagram at one scale."""
    counts = [0, 0]
    for q in pairs:
        if q.birth <= scale < q.death:
            counts[q.dim] += 1
    return BettiVector(counts[0], counts[1])
