"""Weight formation over an induced-map ensemble and the greedy basis.

Each induced map is binarized and its duplicate columns removed; the
number of distinct column patterns is the map's weight (an all-zero
column is one pattern — `ignore_zero_columns` flips that, since the
source is ambiguous).  The greedy pass then visits maps by descending
weight (ties by ensemble position) and accepts each column that is
independent of the basis built so far.

Bookkeeping quirk kept from the source: after the initial map seeds the
basis, every later acceptance appends a zero row to the basis and every
candidate is padded with `n_zeros` trailing zeros.  Row count and
candidate length stay equal, and the padding is all zeros, so
acceptance decisions match the plain span test; the padding rows simply
travel with the output.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .field import FieldMatrix, binarize, rank, solve_in_span
from .homology import BettiVector
from .induced import InducedMap

__all__ = [
    "HomologyBasisEstimate",
    "WeightedMap",
    "WeightedMapSet",
    "estimate_from_basis",
    "form_weights",
    "greedy_basis",
    "load_basis",
    "rank_statistics",
    "save_basis",
]


@dataclass(frozen=True)
class WeightedMap:
    source: InducedMap
    weight: int
    reduced: FieldMatrix          # binarized, duplicate columns removed
    pattern_columns: tuple[int, ...]  # original column index per kept pattern


@dataclass(frozen=True)
class WeightedMapSet:
    maps: tuple[WeightedMap, ...]     # ensemble order
    ordering: tuple[int, ...]         # weight descending, ties by position


@dataclass(frozen=True)
class HomologyBasisEstimate:
    basis: FieldMatrix                # accepted columns, padded rows included
    provenance: tuple[tuple[str | None, int], ...]  # (sample_id, column) per accepted
    n_zeros: int                      # padding rows appended after seeding

    @property
    def rank(self) -> int:
        return self.basis.cols


def form_weights(ensemble: list[InducedMap],
                 ignore_zero_columns: bool = False) -> WeightedMapSet:
    """Binarize every map, drop duplicate columns (first occurrence kept),
    and weight each map by its distinct-pattern count."""
    weighted = []
    for m in ensemble:
        b = binarize(m.matrix)
        seen: set[bytes] = set()
        kept: list[int] = []
        for j in range(b.cols):
            col = b.data[:, j]
            if ignore_zero_columns and not col.any():
                continue
            key = col.tobytes()
            if key not in seen:
                seen.add(key)
                kept.append(j)
        reduced = FieldMatrix(b.data[:, kept], b.p)
        weighted.append(WeightedMap(m, len(kept), reduced, tuple(kept)))
    ordering = sorted(range(len(weighted)),
                      key=lambda i: (-weighted[i].weight, i))
    return WeightedMapSet(tuple(weighted), tuple(ordering))


def greedy_basis(weighted: WeightedMapSet) -> HomologyBasisEstimate:
    """Assemble a hypothetical homology basis from the weighted maps.

    The highest-weight map seeds the basis with its independent columns;
    the remaining maps' columns are visited in weight order and accepted
    whenever they lie outside the current span.  See the module
    docstring for the zero-padding bookkeeping.
    """
    nonempty = [weighted.maps[i] for i in weighted.ordering
                if weighted.maps[i].reduced.cols > 0
                or weighted.maps[i].reduced.rows > 0]
    rows = {wm.reduced.rows for wm in nonempty}
    if len(rows) > 1:
        raise ValueError(
            f"induced maps disagree on row count: {sorted(rows)}")
    n_rows = rows.pop() if rows else 0
    if not nonempty:
        empty = FieldMatrix.zeros(0, 0, weighted.maps[0].reduced.p
                                  if weighted.maps else 3)
        return HomologyBasisEstimate(empty, (), 0)

    p = nonempty[0].reduced.p
    basis = FieldMatrix.zeros(n_rows, 0, p)
    provenance: list[tuple[str | None, int]] = []

    seed = nonempty[0]
    for pos, j in enumerate(seed.pattern_columns):
        col = seed.reduced.column(pos)
        if solve_in_span(basis, col) is None:
            basis = FieldMatrix(np.column_stack([basis.data, col]), p)
            provenance.append((seed.source.sample_id, j))

    n_zeros = 0
    for wm in nonempty[1:]:
        for pos, j in enumerate(wm.pattern_columns):
            col = wm.reduced.column(pos)
            candidate = np.concatenate(
                [col, np.zeros(n_zeros, dtype=col.dtype)])
            if solve_in_span(basis, candidate) is None:
                stacked = np.column_stack([basis.data, candidate])
                padded = np.vstack(
                    [stacked, np.zeros((1, stacked.shape[1]), np.int64)])
                basis = FieldMatrix(padded, p)
                provenance.append((wm.source.sample_id, j))
                n_zeros += 1
    return HomologyBasisEstimate(basis, tuple(provenance), n_zeros)


def estimate_from_basis(est: HomologyBasisEstimate,
                        beta0_full: int) -> BettiVector:
    """Betti estimate: loops from the greedy basis rank, components from
    the full complex's own reduction."""
    return BettiVector(beta0_full, est.rank)


def rank_statistics(ensemble: list[InducedMap]
                    ) -> list[tuple[int | None, float, dict[int, int]]]:
    """Per sub-sample size: mean induced-map rank and the rank histogram."""
    by_size: dict[int | None, list[int]] = {}
    for m in ensemble:
        by_size.setdefault(m.size, []).append(rank(m.matrix))
    out = []
    for size in sorted(by_size, key=lambda s: (s is None, s)):
        ranks = by_size[size]
        hist = dict(sorted(Counter(ranks).items()))
        out.append((size, sum(ranks) / len(ranks), hist))
    return out


def save_basis(est: HomologyBasisEstimate, estimate: BettiVector,
               path: str) -> None:
    payload = {
        "p": est.basis.p,
        "columns": [est.basis.data[:, j].tolist()
                    for j in range(est.basis.cols)],
        "provenance": [list(pv) for pv in est.provenance],
        "beta_estimate": list(estimate.as_tuple()),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def load_basis(path: str) -> tuple[FieldMatrix, list[tuple[str | None, int]],
                                   BettiVector]:
    with open(path) as fh:
        payload = json.load(fh)
    p = payload["p"]
    cols = payload["columns"]
    if cols:
        data = np.array(cols, dtype=np.int64).T
        basis = FieldMatrix(data, p)
    else:
        basis = FieldMatrix.zeros(0, 0, p)
    provenance = [(pv[0], pv[1]) for pv in payload["provenance"]]
    b0, b1 = payload["beta_estimate"]
    return basis, provenance, BettiVector(b0, b1)
