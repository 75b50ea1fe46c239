"""Exact dense linear algebra over a prime field F_p.

Matrices are dense row-major integer arrays with entries reduced into
[0, p).  The default modulus is 3; every operation validates that its
operands share one modulus.  There is no floating point anywhere in this
module, so results are exact and runs are reproducible bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

DEFAULT_P = 3

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _check_prime(p: int) -> None:
    if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
        raise ValueError(f"modulus must be prime, got {p}")


def _inverses(p: int) -> np.ndarray:
    """Table of multiplicative inverses, index 0 unused."""
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)
    return inv


class FieldMatrix:
    """Dense matrix over F_p.  Empty shapes (0 rows and/or 0 columns) are legal."""

    __slots__ = ("data", "p")

    def __init__(self, data, p: int = DEFAULT_P):
        _check_prime(p)
        arr = np.asarray(data, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-d array, got ndim={arr.ndim}")
        self.data = np.mod(arr, p)
        self.p = p

    # -- constructors -------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], p: int = DEFAULT_P,
                  cols: Optional[int] = None) -> "FieldMatrix":
        """Build from a list of rows; `cols` disambiguates zero-row shapes."""
        if len(rows) == 0:
            return cls(np.zeros((0, cols or 0), dtype=np.int64), p)
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        if width == 0:
            return cls(np.zeros((len(rows), 0), dtype=np.int64), p)
        return cls(np.array(rows, dtype=np.int64), p)

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int = DEFAULT_P) -> "FieldMatrix":
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @classmethod
    def identity(cls, n: int, p: int = DEFAULT_P) -> "FieldMatrix":
        return cls(np.eye(n, dtype=np.int64), p)

    @classmethod
    def column_stack(cls, columns: Sequence[np.ndarray], rows: int,
                     p: int = DEFAULT_P) -> "FieldMatrix":
        if not columns:
            return cls.zeros(rows, 0, p)
        return cls(np.column_stack(columns), p)

    # -- basic properties ----------------------------------------------

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def column(self, j: int) -> np.ndarray:
        return self.data[:, j].copy()

    def is_zero(self) -> bool:
        return not self.data.any()

    def copy(self) -> "FieldMatrix":
        return FieldMatrix(self.data.copy(), self.p)

    def transpose(self) -> "FieldMatrix":
        return FieldMatrix(self.data.T.copy(), self.p)

    # -- arithmetic ----------------------------------------------------

    def _require_same_field(self, other: "FieldMatrix") -> None:
        if self.p != other.p:
            raise ValueError(f"mixed moduli: {self.p} vs {other.p}")

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._require_same_field(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.shape} @ {other.shape}")
        return FieldMatrix(self.data @ other.data % self.p, self.p)

    def matvec(self, vec: np.ndarray) -> np.ndarray:
        vec = np.asarray(vec, dtype=np.int64)
        if vec.shape != (self.cols,):
            raise ValueError(f"vector length {vec.shape} vs {self.cols} columns")
        if self.cols == 0:
            return np.zeros(self.rows, dtype=np.int64)
        return self.data @ np.mod(vec, self.p) % self.p

    def __add__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._require_same_field(other)
        return FieldMatrix((self.data + other.data) % self.p, self.p)

    def __sub__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._require_same_field(other)
        return FieldMatrix((self.data - other.data) % self.p, self.p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return (self.p == other.p and self.shape == other.shape
                and bool(np.array_equal(self.data, other.data)))

    def __hash__(self):
        return hash((self.p, self.shape, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"FieldMatrix(p={self.p}, {self.rows}x{self.cols})"

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        """Portable encoding: row-major entry list plus explicit shape and modulus."""
        return {"rows": self.rows, "cols": self.cols, "p": self.p,
                "entries": [int(v) for v in self.data.ravel()]}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldMatrix":
        try:
            rows, cols, p = int(obj["rows"]), int(obj["cols"]), int(obj["p"])
            entries = obj["entries"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed matrix object: {exc}") from exc
        if rows < 0 or cols < 0:
            raise ValueError("negative shape")
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        data = np.array([int(v) for v in entries], dtype=np.int64).reshape(rows, cols)
        return cls(data, p)


@dataclass
class LUFactorization:
    """Full-pivoting LU of a FieldMatrix: A[row_perm][:, col_perm] = L @ U.

    L is square unit lower triangular, U is upper triangular (trapezoidal
    for rectangular input), and the permutations are plain index lists.
    `rank` counts the pivots, i.e. the nonzero rows of U.
    """
    L: FieldMatrix
    U: FieldMatrix
    row_perm: list[int]
    col_perm: list[int]
    rank: int
    p: int

    def reassemble(self) -> FieldMatrix:
        """L @ U with permutations undone; used by tests to check the invariant."""
        prod = (self.L @ self.U).data
        out = np.zeros_like(prod)
        inv_rows = np.argsort(self.row_perm)
        inv_cols = np.argsort(self.col_perm)
        return FieldMatrix(prod[inv_rows][:, inv_cols], self.p)


def lu_full_pivot(a: FieldMatrix) -> LUFactorization:
    """Rows-and-columns pivoting LU over F_p.

    The pivot at each step is the first nonzero entry found by a row-major
    scan of the remaining submatrix, so matrices whose leading entries
    vanish (the hazard cases for partial pivoting) factor correctly.
    """
    m, n = a.shape
    p = a.p
    inv = _inverses(p)
    u = a.data.copy()
    lo = np.eye(m, dtype=np.int64)
    row_perm = list(range(m))
    col_perm = list(range(n))
    rank = 0
    for k in range(min(m, n)):
        pivot = None
        for i in range(k, m):
            nz = np.nonzero(u[i, k:])[0]
            if nz.size:
                pivot = (i, k + int(nz[0]))
                break
        if pivot is None:
            break
        pi, pj = pivot
        if pi != k:
            u[[k, pi], :] = u[[pi, k], :]
            # multipliers already stored travel with their rows
            lo[[k, pi], :k] = lo[[pi, k], :k]
            row_perm[k], row_perm[pi] = row_perm[pi], row_perm[k]
        if pj != k:
            u[:, [k, pj]] = u[:, [pj, k]]
            col_perm[k], col_perm[pj] = col_perm[pj], col_perm[k]
        pinv = inv[u[k, k]]
        factors = u[k + 1:, k] * pinv % p
        if factors.any():
            lo[k + 1:, k] = factors
            u[k + 1:, k:] = (u[k + 1:, k:] - np.outer(factors, u[k, k:])) % p
        rank += 1
    return LUFactorization(L=FieldMatrix(lo, p), U=FieldMatrix(u, p),
                           row_perm=row_perm, col_perm=col_perm, rank=rank, p=p)


def rank(a: FieldMatrix) -> int:
    """Rank over F_p via the pivoted factorization."""
    return lu_full_pivot(a).rank


def solve_in_span(basis: FieldMatrix, b) -> Optional[np.ndarray]:
    """Coefficients x with basis @ x = b, or None when b is outside the span.

    A length mismatch between b and the basis rows is reported as None
    rather than raised: callers stack vectors of drifting dimension and
    treat "does not fit" the same as "not in span".
    """
    vec = np.asarray(b, dtype=np.int64).ravel()
    if vec.shape[0] != basis.rows:
        return None
    p = basis.p
    vec = np.mod(vec, p)
    m, n = basis.shape
    if n == 0:
        return np.zeros(0, dtype=np.int64) if not vec.any() else None
    if m == 0:
        # 0-dimensional target: every combination works, pick zero
        return np.zeros(n, dtype=np.int64)
    fac = lu_full_pivot(basis)
    inv = _inverses(p)
    r = fac.rank
    ldata, udata = fac.L.data, fac.U.data
    z = vec[fac.row_perm].copy()
    for k in range(m):  # forward substitution, unit diagonal
        if z[k] and k + 1 < m:
            z[k + 1:] = (z[k + 1:] - z[k] * ldata[k + 1:, k]) % p
    if z[r:].any():
        return None
    y = np.zeros(n, dtype=np.int64)
    for i in range(r - 1, -1, -1):  # back substitution on the pivot block
        acc = z[i]
        if i + 1 < n:
            acc = (acc - udata[i, i + 1:] @ y[i + 1:]) % p
        y[i] = acc * inv[udata[i, i]] % p
    x = np.zeros(n, dtype=np.int64)
    for j, cj in enumerate(fac.col_perm):
        x[cj] = y[j]
    assert not ((basis.data @ x - vec) % p).any()
    return x


def binarize(a: FieldMatrix) -> FieldMatrix:
    """Map every nonzero entry to 1; idempotent."""
    return FieldMatrix((a.data != 0).astype(np.int64), a.p)
