# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels (same signatures as ``_pykernels``)."""
import numpy as np

ctypedef fused scalar_t:
    double
    double complex


def fill_trimmed(scalar_t[:, ::1] out, const scalar_t[:, ::1] stack, row_start,
                 degrees, const long long[:, ::1] table, Py_ssize_t k, Py_ssize_t width):
    cdef Py_ssize_t m = len(degrees)
    cdef Py_ssize_t i, q, j, c, s, di, r, col0
    for i in range(m):
        s = row_start[i]
        di = degrees[i]
        for q in range(k):
            col0 = q * width
            for j in range(di + 1):
                r = table[q + j, i]
                for c in range(width):
                    out[r, col0 + c] = stack[s + j, c]
    return np.asarray(out)


def _horner_c(const double complex[:, ::1] stack, row_start, degrees, double complex lam):
    cdef Py_ssize_t m = len(degrees)
    cdef Py_ssize_t width = stack.shape[1]
    out = np.empty((m, width), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    cdef Py_ssize_t i, j, c, s, di
    cdef double complex acc
    for i in range(m):
        s = row_start[i]
        di = degrees[i]
        for c in range(width):
            acc = stack[s + di, c]
            for j in range(di - 1, -1, -1):
                acc = acc * lam + stack[s + j, c]
            o[i, c] = acc
    return out


def _horner_r(const double[:, ::1] stack, row_start, degrees, double lam):
    cdef Py_ssize_t m = len(degrees)
    cdef Py_ssize_t width = stack.shape[1]
    out = np.empty((m, width), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j, c, s, di
    cdef double acc
    for i in range(m):
        s = row_start[i]
        di = degrees[i]
        for c in range(width):
            acc = stack[s + di, c]
            for j in range(di - 1, -1, -1):
                acc = acc * lam + stack[s + j, c]
            o[i, c] = acc
    return out


def horner(stack, row_start, degrees, lam):
    if np.iscomplexobj(stack) or isinstance(lam, complex) or np.iscomplexobj(lam):
        return _horner_c(np.ascontiguousarray(stack, dtype=np.complex128),
                         row_start, degrees, complex(lam))
    return _horner_r(np.ascontiguousarray(stack, dtype=np.float64),
                     row_start, degrees, float(lam))


def bareiss_rank(list rows):
    cdef Py_ssize_t nr = len(rows)
    if nr == 0:
        return 0
    cdef Py_ssize_t nc = len(rows[0])
    cdef Py_ssize_t rank = 0, c, i, j, piv
    cdef object prev = 1, p, f
    cdef list prow, row
    for c in range(nc):
        piv = -1
        for i in range(rank, nr):
            if (<list>rows[i])[c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = <list>rows[rank]
        p = prow[c]
        for i in range(rank + 1, nr):
            row = <list>rows[i]
            f = row[c]
            if f == 0:
                # the update reduces to an exact rescaling
                for j in range(c + 1, nc):
                    row[j] = (p * row[j]) // prev
            else:
                for j in range(c + 1, nc):
                    row[j] = (p * row[j] - f * prow[j]) // prev
            row[c] = 0
        prev = p
        rank += 1
        if rank == nr:
            break
    return rank
