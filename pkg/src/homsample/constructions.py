"""Shape checks on an estimated homology basis.

The columns of the input matrix are candidate loop classes.  A linearly
dependent column subset is a cycle of the column matroid: the redundancy
that an annulus-like structure leaves behind.  Two distinct dependent
subsets sharing a column form the overlapping-cycles pattern of a
figure-8.  An independent matrix ("forest") triggers neither check.

Subsets are enumerated by size then lexicographic order, so reports are
deterministic; `found` itself does not depend on column order.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .field import FieldMatrix, rank, solve_in_span

__all__ = [
    "ConstructionReport",
    "check_annulus",
    "check_figure8",
    "dependent_subset",
    "kernel_vector",
]


@dataclass(frozen=True)
class ConstructionReport:
    """Outcome of a shape check.

    For kind "annulus" the witness is one dependent column subset; for
    kind "figure8" it is (first subset, second subset, shared column).
    Whenever found is true the witness is present and its subsets are
    genuinely dependent (they admit nonzero kernel vectors).
    """

    kind: str
    found: bool
    witness: tuple[int, ...] | tuple[tuple[int, ...], tuple[int, ...], int] | None

    def to_json(self) -> dict:
        if self.kind == "figure8" and self.witness is not None:
            first, second, common = self.witness
            witness = {"first": list(first), "second": list(second),
                       "common": common}
        elif self.witness is not None:
            witness = {"columns": list(self.witness)}
        else:
            witness = None
        return {"kind": self.kind, "found": self.found, "witness": witness}


def kernel_vector(h: FieldMatrix, subset: tuple[int, ...]) -> np.ndarray | None:
    """Nonzero coefficients (indexed like `subset`) combining the chosen
    columns to zero, or None when they are independent."""
    prefix: list[np.ndarray] = []
    for pos, j in enumerate(subset):
        col = h.column(j)
        x = solve_in_span(
            FieldMatrix.column_stack(prefix, h.rows, h.p), col)
        if x is not None:
            out = np.zeros(len(subset), dtype=np.int64)
            out[:pos] = x
            out[pos] = h.p - 1          # col - (combination) = 0
            return out
        prefix.append(col)
    return None


def dependent_subset(h: FieldMatrix) -> tuple[int, ...] | None:
    """Minimal dependent column subset by incremental elimination: the
    first column inside the span of its predecessors, together with the
    predecessors it actually uses."""
    basis: list[np.ndarray] = []
    members: list[int] = []
    for j in range(h.cols):
        col = h.column(j)
        x = solve_in_span(
            FieldMatrix.column_stack(basis, h.rows, h.p), col)
        if x is not None:
            used = [members[i] for i in np.nonzero(x)[0]]
            return tuple(used + [j])
        basis.append(col)
        members.append(j)
    return None


def check_annulus(h: FieldMatrix, max_subset: int = 6) -> ConstructionReport:
    """One cycle suffices: the columns are dependent iff rank < count."""
    if rank(h) >= h.cols:
        return ConstructionReport("annulus", False, None)
    witness = dependent_subset(h)
    assert witness is not None
    return ConstructionReport("annulus", True, witness)


def check_figure8(h: FieldMatrix, max_subset: int = 6) -> ConstructionReport:
    """Two overlapping cycles: distinct dependent column subsets of size
    at most `max_subset` sharing at least one column (one may contain
    the other)."""
    found: list[tuple[int, ...]] = []
    for size in range(1, min(max_subset, h.cols) + 1):
        for subset in combinations(range(h.cols), size):
            sub = FieldMatrix(h.data[:, subset], h.p)
            if rank(sub) == size:
                continue
            for earlier in found:
                shared = set(earlier) & set(subset)
                if shared:
                    return ConstructionReport(
                        "figure8", True, (earlier, subset, min(shared)))
            found.append(subset)
    return ConstructionReport("figure8", False, None)


def load_matrix(path: str) -> FieldMatrix:
    """Matrix-file loader shared by the CLI and tests."""
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    return FieldMatrix.from_json(obj)
