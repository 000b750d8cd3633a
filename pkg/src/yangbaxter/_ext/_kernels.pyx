# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled transfer-matrix kernel.

For each quantum-space column ``I`` the rows ``J`` are visited in odometer
order and the running product of auxiliary-space matrices is kept per prefix,
so only the suffix after the changed digit is recomputed.
"""

import numpy as np


def transfer_matrix(double complex[:, :, :, ::1] w, int n):
    """``T[J, I] = tr prod_s L(i_s, j_s)`` with ``L(i, j)[a, b] = w[a, i, b, j]``."""
    cdef Py_ssize_t d = w.shape[0]
    cdef Py_ssize_t dim = d ** n
    out = np.zeros((dim, dim), dtype=np.complex128)
    cdef double complex[:, ::1] t = out
    prefix_arr = np.zeros((n + 1, d, d), dtype=np.complex128)
    cdef double complex[:, :, ::1] prefix = prefix_arr
    idig_arr = np.zeros(n, dtype=np.intp)
    jdig_arr = np.zeros(n, dtype=np.intp)
    cdef Py_ssize_t[::1] idig = idig_arr
    cdef Py_ssize_t[::1] jdig = jdig_arr
    cdef Py_ssize_t col, row, s, p, a, b, c, rest
    cdef double complex acc

    for a in range(d):
        prefix[0, a, a] = 1.0

    for col in range(dim):
        rest = col
        for s in range(n - 1, -1, -1):
            idig[s] = rest % d
            rest = rest // d
        for s in range(n):
            jdig[s] = 0
        p = 0
        row = 0
        while True:
            for s in range(p, n):
                for a in range(d):
                    for c in range(d):
                        acc = 0
                        for b in range(d):
                            acc = acc + prefix[s, a, b] * w[b, idig[s], c, jdig[s]]
                        prefix[s + 1, a, c] = acc
            acc = 0
            for a in range(d):
                acc = acc + prefix[n, a, a]
            t[row, col] = acc
            p = n - 1
            while p >= 0 and jdig[p] == d - 1:
                jdig[p] = 0
                p -= 1
            if p < 0:
                break
            jdig[p] += 1
            row += 1
    return out
