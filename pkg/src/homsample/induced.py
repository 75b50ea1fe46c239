"""Maps induced on degree-1 homology by sub-sample inclusions.

A sub-cloud C of a cloud D gives a simplicial inclusion of Rips
complexes whenever the sub-complex threshold does not exceed the full
one.  The induced map sends the homology basis of the sub-complex (the
U-columns at its surviving indices) through the chain map and expresses
the images in the full complex's basis, eliminating boundary parts.

Two routes compute the same matrix.  The dense route follows the
change-of-basis algorithm literally: pull the image back through
U_full, eliminate against the reduced degree-2 columns, read off the
surviving rows.  The sparse route never inverts U_full: it peels the
image cycle from its lowest nonzero row upward, subtracting a stored
reduced degree-2 column when the row is a boundary pivot and recording
a basis coordinate when the row is a surviving index.  Both produce the
unique coordinate vector c with  F x - sum_j c_j U_full[:, j]  a
boundary; tests cross-check them, the pipeline runs the sparse one.
"""
from __future__ import annotations

import heapq
import json
import time
from dataclasses import dataclass, field

import numpy as np

from .field import DEFAULT_P, FieldMatrix
from .homology import BettiVector, ReducedChainComplex, reduce_complex
from .pointcloud import PointCloud, SampleSchedule, ThresholdRule, subsample
from .rips import SimplicialComplex, build_rips

__all__ = [
    "EnsembleResult",
    "FullComplexSummary",
    "InducedMap",
    "induced_map_ensemble",
    "induced_on_homology",
    "inclusion_chain_map",
    "load_ensemble",
    "save_ensemble",
    "vertex_injection",
]


@dataclass(frozen=True)
class InducedMap:
    """Induced matrix on H_k plus the provenance of the sample it came
    from; metadata stays None for maps built outside the ensemble loop."""

    matrix: FieldMatrix
    k: int = 1
    sample_id: str | None = None
    size: int | None = None
    seed: int | None = None
    betti_sub: tuple[int, int] | None = None
    timing_ms: float | None = None
    threshold: float | None = None


@dataclass(frozen=True)
class FullComplexSummary:
    """What the shared full complex of one ensemble size looked like."""

    threshold: float
    betti: BettiVector
    n_simplices: tuple[int, ...]
    timing_ms: float


@dataclass
class EnsembleResult:
    maps: list[InducedMap]
    full: dict[int, FullComplexSummary] = field(default_factory=dict)


def vertex_injection(sub: PointCloud, full: PointCloud) -> np.ndarray:
    """Index of each sub-cloud point inside the full cloud.

    Points are matched exactly by coordinates.  The match must be
    strictly increasing (sub-sampling keeps the parent order) so that
    sorted simplices map to sorted simplices.
    """
    lookup: dict[bytes, int] = {}
    for i in range(len(full) - 1, -1, -1):
        lookup[full.points[i].tobytes()] = i
    vmap = np.empty(len(sub), dtype=np.int64)
    for i in range(len(sub)):
        key = sub.points[i].tobytes()
        if key not in lookup:
            raise ValueError(
                f"sub-cloud point {i} = {sub.points[i].tolist()} does not "
                "appear in the full cloud")
        vmap[i] = lookup[key]
    if len(sub) > 1 and not (np.diff(vmap) > 0).all():
        raise ValueError(
            "sub-cloud points must appear in the full cloud's order")
    return vmap


def _edge_positions(sub_cx: SimplicialComplex, full_cx: SimplicialComplex,
                    vmap: np.ndarray) -> np.ndarray:
    """Full-complex edge index of each sub-complex edge."""
    n = full_cx.n_vertices
    full_keys = full_cx.edges[:, 0].astype(np.int64) * n + full_cx.edges[:, 1]
    mapped = vmap[sub_cx.edges]
    sub_keys = mapped[:, 0] * n + mapped[:, 1]
    pos = np.searchsorted(full_keys, sub_keys)
    bad = (pos >= full_keys.shape[0])
    bad[~bad] = full_keys[pos[~bad]] != sub_keys[~bad]
    if bad.any():
        a, b = mapped[np.nonzero(bad)[0][0]]
        raise ValueError(
            f"sub-complex edge maps to ({a}, {b}), which is not an edge of "
            "the full complex; its threshold must not exceed the full one")
    return pos


def inclusion_chain_map(sub_cx: SimplicialComplex, full_cx: SimplicialComplex,
                        k: int = 1, p: int = DEFAULT_P) -> FieldMatrix:
    """Degree-k chain map of the inclusion: one 1 per column, placing
    each sub-simplex at its position in the full complex.  Raises if a
    sub-simplex (named in the message) is missing from the full complex.
    """
    vmap = vertex_injection(sub_cx.cloud, full_cx.cloud)
    if k == 0:
        data = np.zeros((full_cx.n_vertices, sub_cx.n_vertices), np.int64)
        data[vmap, np.arange(sub_cx.n_vertices)] = 1
        return FieldMatrix(data, p)
    if k == 1:
        pos = _edge_positions(sub_cx, full_cx, vmap)
        data = np.zeros((full_cx.n_edges, sub_cx.n_edges), np.int64)
        data[pos, np.arange(sub_cx.n_edges)] = 1
        return FieldMatrix(data, p)
    if k == 2:
        n = full_cx.n_vertices
        full_keys = (full_cx.triangles[:, 0].astype(np.int64) * n * n
                     + full_cx.triangles[:, 1].astype(np.int64) * n
                     + full_cx.triangles[:, 2])
        mapped = vmap[sub_cx.triangles]
        sub_keys = mapped[:, 0] * n * n + mapped[:, 1] * n + mapped[:, 2]
        pos = np.searchsorted(full_keys, sub_keys)
        bad = (pos >= full_keys.shape[0])
        bad[~bad] = full_keys[pos[~bad]] != sub_keys[~bad]
        if bad.any():
            a, b, c = mapped[np.nonzero(bad)[0][0]]
            raise ValueError(
                f"sub-complex triangle maps to ({a}, {b}, {c}), which is "
                "not a triangle of the full complex")
        data = np.zeros((full_cx.n_triangles, sub_cx.n_triangles), np.int64)
        data[pos, np.arange(sub_cx.n_triangles)] = 1
        return FieldMatrix(data, p)
    raise ValueError(f"unsupported chain map degree {k}")


def _solve_unit_upper(u: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Solve u @ y = b for unit upper triangular u over F_p."""
    y = b % p
    for i in range(u.shape[0] - 1, -1, -1):
        if y[i]:
            y[:i] = (y[:i] - u[:i, i] * y[i]) % p
    return y


def induced_on_homology(sub: ReducedChainComplex, full: ReducedChainComplex,
                        chain_map: FieldMatrix, k: int = 1) -> InducedMap:
    """Matrix of the induced map on H_k, dense route.

    Columns follow the sub-complex's surviving indices, rows the full
    complex's.  Each basis cycle of the sub-complex is pushed through
    the chain map, rewritten in the full complex's U-coordinates, and
    reduced modulo boundaries using the reduced degree-(k+1) columns.
    """
    if chain_map.p != sub.p or chain_map.p != full.p:
        raise ValueError("chain map and complexes must share the field modulus")
    p = full.p
    i_sub = sub.surviving_indices(k)
    i_full = full.surviving_indices(k)
    u_sub = sub.u_matrix(k).data
    u_full = full.u_matrix(k).data

    if k + 1 <= full.max_dim:
        r_next = full.r_matrix(k + 1).data
    else:
        r_next = np.zeros((full.n_simplices[k], 0), np.int64)
    # unit upper triangular change of basis preserves each column's
    # lowest nonzero row, so the eliminated matrix keeps R's pivots
    elim = np.zeros_like(r_next)
    low_of_row: dict[int, int] = {}
    for j in range(r_next.shape[1]):
        nz = np.nonzero(r_next[:, j])[0]
        if nz.size:
            elim[:, j] = _solve_unit_upper(u_full, r_next[:, j], p)
            low_of_row[int(nz.max())] = j

    kernel = set(int(i) for i in full.kernel_columns(k))
    data = np.zeros((i_full.shape[0], i_sub.shape[0]), np.int64)
    row_of = {int(r): idx for idx, r in enumerate(i_full)}
    for col, j in enumerate(i_sub):
        image = chain_map.data @ u_sub[:, j] % p
        y = _solve_unit_upper(u_full, image, p)
        for l in range(y.shape[0] - 1, -1, -1):
            if y[l] == 0:
                continue
            if l in low_of_row:
                jj = low_of_row[l]
                alpha = y[l] * pow(int(elim[l, jj]), p - 2, p) % p
                y = (y - alpha * elim[:, jj]) % p
            elif l not in kernel:
                raise AssertionError(
                    "image of a cycle has a non-cycle coordinate; "
                    "the chain map is not simplicial")
        for l in np.nonzero(y)[0]:
            data[row_of[int(l)], col] = y[l]
    return InducedMap(matrix=FieldMatrix(data, p), k=k)


def _induced_sparse(sub: ReducedChainComplex, full: ReducedChainComplex,
                    edge_map: np.ndarray,
                    u1_cache: dict[int, dict[int, int]]) -> FieldMatrix:
    """Sparse route for k = 1; see the module docstring for the idea."""
    p = full.p
    i_sub = sub.surviving_indices(1)
    i_full = full.surviving_indices(1)
    i_full_row = {int(r): idx for idx, r in enumerate(i_full)}
    lev2 = full.level(2) if full.max_dim >= 2 else None
    pivcol2 = lev2.pivcol_of_row() if lev2 is not None else None
    inv_cache = [0] + [pow(a, p - 2, p) for a in range(1, p)]

    def full_u1(l: int) -> dict[int, int]:
        got = u1_cache.get(l)
        if got is None:
            got = u1_cache[l] = full.u_column(1, l)
        return got

    data = np.zeros((i_full.shape[0], i_sub.shape[0]), np.int64)
    for col, j in enumerate(i_sub):
        res: dict[int, int] = {}
        heap: list[int] = []
        for e, c in sub.u_column(1, int(j)).items():
            r = int(edge_map[e])
            res[r] = c
            heap.append(-r)
        heapq.heapify(heap)

        def subtract(alpha: int, items) -> None:
            for r, c in items:
                r = int(r)
                old = res.get(r, 0)
                new = (old - alpha * int(c)) % p
                res[r] = new
                if old == 0 and new != 0:
                    heapq.heappush(heap, -r)

        while heap:
            l = -heapq.heappop(heap)
            cur = res.get(l, 0)
            if cur == 0:
                continue
            pc = int(pivcol2[l]) if pivcol2 is not None else -1
            if pc != -1:
                rows, coefs = full.level(2).column(pc)
                alpha = cur * inv_cache[int(coefs[0])] % p
                subtract(alpha, zip(rows, coefs))
            elif l in i_full_row:
                data[i_full_row[l], col] = cur
                subtract(cur, full_u1(l).items())
            else:
                raise AssertionError(
                    "residual cycle has its lowest entry outside the kernel "
                    "indices; chain map image left the cycle space")
            if res.get(l, 0) != 0:
                raise AssertionError("elimination failed to clear a row")
    return FieldMatrix(data, p)


def induced_map_ensemble(full_cloud: PointCloud, schedule: SampleSchedule,
                         rule: ThresholdRule | None = None,
                         p: int = DEFAULT_P) -> EnsembleResult:
    """Run the sampling pipeline: for each size, draw the scheduled
    sub-samples, build one shared full complex at the largest of their
    thresholds, reduce it once, and compute every replicate's induced
    map against it.

    Per-replicate timing covers that sample's own work (sub-sampling,
    threshold, complex, reduction, induced matrix); the shared full
    complex is timed separately in the per-size summary.
    """
    rule = rule or ThresholdRule()
    result = EnsembleResult(maps=[])
    for si, size in enumerate(schedule.sizes):
        if size > len(full_cloud):
            raise ValueError(
                f"sample size {size} exceeds the cloud size {len(full_cloud)}")
        reps = []
        for rep in range(schedule.replicates):
            t0 = time.perf_counter()
            sseed = schedule.replicate_seed(si, rep)
            sub = subsample(full_cloud, size, sseed)
            thr = rule(full_cloud, sub)
            reps.append([rep, sseed, sub, thr, time.perf_counter() - t0])

        t0 = time.perf_counter()
        r_full = max(r[3] for r in reps)
        full_cx = build_rips(full_cloud, r_full)
        full_rcc = reduce_complex(full_cx, p)
        result.full[size] = FullComplexSummary(
            threshold=r_full, betti=full_rcc.betti(),
            n_simplices=full_cx.simplex_counts(),
            timing_ms=(time.perf_counter() - t0) * 1e3)

        n = full_cx.n_vertices
        u1_cache: dict[int, dict[int, int]] = {}
        for rep, sseed, sub, thr, spent in reps:
            t0 = time.perf_counter()
            sub_cx = build_rips(sub, thr)
            sub_rcc = reduce_complex(sub_cx, p)
            vmap = vertex_injection(sub, full_cloud)
            emap = _edge_positions(sub_cx, full_cx, vmap)
            mat = _induced_sparse(sub_rcc, full_rcc, emap, u1_cache)
            ms = (spent + time.perf_counter() - t0) * 1e3
            result.maps.append(InducedMap(
                matrix=mat, k=1, sample_id=f"{size}-{rep:02d}", size=size,
                seed=int(sseed), betti_sub=sub_rcc.betti().as_tuple(),
                timing_ms=ms, threshold=thr))
    return result


def save_ensemble(maps: list[InducedMap], path: str) -> None:
    records = []
    for m in maps:
        records.append({
            "sample_id": m.sample_id,
            "size": m.size,
            "seed": m.seed,
            "k": m.k,
            "matrix": m.matrix.to_json(),
            "betti_sub": list(m.betti_sub) if m.betti_sub is not None else None,
            "timing_ms": m.timing_ms,
        })
    with open(path, "w") as fh:
        json.dump(records, fh, indent=1)
        fh.write("\n")


def load_ensemble(path: str) -> list[InducedMap]:
    with open(path) as fh:
        records = json.load(fh)
    if not isinstance(records, list):
        raise ValueError("ensemble file must hold a JSON array")
    maps = []
    for rec in records:
        maps.append(InducedMap(
            matrix=FieldMatrix.from_json(rec["matrix"]),
            k=rec.get("k", 1),
            sample_id=rec.get("sample_id"),
            size=rec.get("size"),
            seed=rec.get("seed"),
            betti_sub=(tuple(rec["betti_sub"])
                       if rec.get("betti_sub") is not None else None),
            timing_ms=rec.get("timing_ms"),
        ))
    return maps
