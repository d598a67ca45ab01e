"""Pure-Python (numpy) versions of the hot kernels.

Signatures are shared with the compiled ``_ckernels`` module; see
``minbasis._kernels`` for the selection logic.
"""
import numpy as np


def fill_trimmed(out, stack, row_start, degrees, table, k, width):
    """Scatter the coefficient vectors of every row into a zeroed ``T_k``.

    ``table[p, i]`` is the row of ``out`` holding row ``i`` of block row ``p``
    (``-1`` when trimmed); ``stack[row_start[i] + j]`` is the coefficient of
    ``lambda**j`` in row ``i``.
    """
    for i, di in enumerate(degrees):
        s = row_start[i]
        block = stack[s:s + di + 1]
        for q in range(k):
            rows = table[q:q + di + 1, i]
            out[rows, q * width:(q + 1) * width] = block
    return out


def horner(stack, row_start, degrees, lam):
    m = len(degrees)
    width = stack.shape[1]
    out = np.empty((m, width), dtype=np.result_type(stack.dtype, type(lam)))
    for i, di in enumerate(degrees):
        s = row_start[i]
        acc = stack[s + di].astype(out.dtype, copy=True)
        for j in range(di - 1, -1, -1):
            acc = acc * lam + stack[s + j]
        out[i] = acc
    return out


def bareiss_rank(rows):
    """Rank of an integer matrix by fraction-free (Bareiss) elimination.

    ``rows`` is a list of equal-length lists of Python ints; it is consumed.
    Every intermediate entry is a minor of the input, so the division by the
    previous pivot is exact.
    """
    nr = len(rows)
    if nr == 0:
        return 0
    nc = len(rows[0])
    rank = 0
    prev = 1
    for c in range(nc):
        piv = -1
        for i in range(rank, nr):
            if rows[i][c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        p = prow[c]
        for i in range(rank + 1, nr):
            row = rows[i]
            f = row[c]
            for j in range(c + 1, nc):
                row[j] = (p * row[j] - f * prow[j]) // prev
            row[c] = 0
        prev = p
        rank += 1
        if rank == nr:
            break
    return rank
