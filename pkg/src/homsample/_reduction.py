"""Sparse column reduction over F_p, jitted.

The kernel performs the standard left-to-right reduction: each column is
repeatedly reduced by the stored pivot column owning its lowest nonzero
row until that row is unclaimed (new pivot) or the column vanishes.
Columns are accumulated in a dense working buffer; candidate low rows
live in a hand-rolled max-heap with lazy deletion.  Optionally the
sequence of (pivot column, multiplier) operations is recorded per column
so change-of-basis columns can be reconstructed on demand.
"""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(inline="always")
def _heap_push(heap, hn, val):
    heap[hn] = val
    i = hn
    while i > 0:
        parent = (i - 1) >> 1
        if heap[parent] < heap[i]:
            tmp = heap[parent]
            heap[parent] = heap[i]
            heap[i] = tmp
            i = parent
        else:
            break
    return hn + 1


@njit(inline="always")
def _heap_pop(heap, hn):
    hn -= 1
    heap[0] = heap[hn]
    i = 0
    while True:
        left = 2 * i + 1
        right = left + 1
        big = i
        if left < hn and heap[left] > heap[big]:
            big = left
        if right < hn and heap[right] > heap[big]:
            big = right
        if big == i:
            break
        tmp = heap[big]
        heap[big] = heap[i]
        heap[i] = tmp
        i = big
    return hn


@njit(cache=True)
def reduce_columns(n_rows, col_ptr, in_rows, in_coefs, p, record_ops):
    """Reduce a CSC matrix over F_p.

    Returns (pivrow_of_col, pool_rows, pool_coefs, col_start, col_len,
    ops_col, ops_alpha, ops_start).  pivrow_of_col[j] == -1 marks a column
    that reduced to zero; otherwise the stored pivot column for j sits in
    pool[col_start[j] : col_start[j] + col_len[j]], rows descending, so
    its first entry is the pivot row and coefficient.
    """
    ncols = col_ptr.shape[0] - 1

    inv = np.zeros(p, np.int64)
    for a in range(1, p):
        acc, base, e = 1, a, p - 2
        while e:
            if e & 1:
                acc = acc * base % p
            base = base * base % p
            e >>= 1
        inv[a] = acc

    pivcol_of_row = np.full(n_rows, -1, np.int64)
    pivrow_of_col = np.full(ncols, -1, np.int64)

    pool_rows = np.empty(4096, np.int32)
    pool_coefs = np.empty(4096, np.int8)
    pool_n = 0
    col_start = np.full(ncols, -1, np.int64)
    col_len = np.zeros(ncols, np.int64)

    ops_col = np.empty(4096, np.int32)
    ops_alpha = np.empty(4096, np.int8)
    ops_n = 0
    ops_start = np.zeros(ncols + 1, np.int64)

    buf = np.zeros(n_rows, np.int8)
    mark = np.zeros(n_rows, np.uint8)  # row already in `touched` this column
    touched = np.empty(n_rows, np.int64)
    heap = np.empty(1024, np.int64)

    for j in range(ncols):
        tn = 0
        hn = 0
        for q in range(col_ptr[j], col_ptr[j + 1]):
            r = in_rows[q]
            c = in_coefs[q] % p
            if c == 0:
                continue
            if buf[r] == 0:
                if mark[r] == 0:
                    mark[r] = 1
                    touched[tn] = r
                    tn += 1
                if hn + 1 > heap.shape[0]:
                    nh = np.empty(heap.shape[0] * 2, np.int64)
                    nh[:hn] = heap[:hn]
                    heap = nh
                hn = _heap_push(heap, hn, r)
            buf[r] = (buf[r] + c) % p

        low = -1
        while True:
            low = -1
            while hn > 0:
                top = heap[0]
                if buf[top] != 0:
                    low = top
                    break
                hn = _heap_pop(heap, hn)
            if low == -1:
                break
            pc = pivcol_of_row[low]
            if pc == -1:
                break
            s = col_start[pc]
            ln = col_len[pc]
            alpha = buf[low] * inv[pool_coefs[s]] % p
            for q in range(s, s + ln):
                r = pool_rows[q]
                old = buf[r]
                nb = (old - alpha * pool_coefs[q]) % p
                if old == 0 and nb != 0:
                    if mark[r] == 0:
                        mark[r] = 1
                        touched[tn] = r
                        tn += 1
                    if hn + 1 > heap.shape[0]:
                        nh = np.empty(heap.shape[0] * 2, np.int64)
                        nh[:hn] = heap[:hn]
                        heap = nh
                    hn = _heap_push(heap, hn, r)
                buf[r] = nb
            if record_ops:
                if ops_n + 1 > ops_col.shape[0]:
                    nc = np.empty(ops_col.shape[0] * 2, np.int32)
                    nc[:ops_n] = ops_col[:ops_n]
                    ops_col = nc
                    na = np.empty(ops_alpha.shape[0] * 2, np.int8)
                    na[:ops_n] = ops_alpha[:ops_n]
                    ops_alpha = na
                ops_col[ops_n] = pc
                ops_alpha[ops_n] = alpha
                ops_n += 1
        ops_start[j + 1] = ops_n

        if low != -1:
            nnz = 0
            for q in range(tn):
                if buf[touched[q]] != 0:
                    nnz += 1
            while pool_n + nnz > pool_rows.shape[0]:
                nr = np.empty(pool_rows.shape[0] * 2, np.int32)
                nr[:pool_n] = pool_rows[:pool_n]
                pool_rows = nr
                ncf = np.empty(pool_coefs.shape[0] * 2, np.int8)
                ncf[:pool_n] = pool_coefs[:pool_n]
                pool_coefs = ncf
            tmp = np.empty(nnz, np.int64)
            k = 0
            for q in range(tn):
                r = touched[q]
                if buf[r] != 0:
                    tmp[k] = r
                    k += 1
            tmp = np.sort(tmp)[::-1]
            for k in range(nnz):
                pool_rows[pool_n + k] = tmp[k]
                pool_coefs[pool_n + k] = buf[tmp[k]]
            col_start[j] = pool_n
            col_len[j] = nnz
            pool_n += nnz
            pivcol_of_row[low] = j
            pivrow_of_col[j] = low

        for q in range(tn):
            buf[touched[q]] = 0
            mark[touched[q]] = 0

    return (pivrow_of_col, pool_rows[:pool_n].copy(), pool_coefs[:pool_n].copy(),
            col_start, col_len,
            ops_col[:ops_n].copy(), ops_alpha[:ops_n].copy(), ops_start)
