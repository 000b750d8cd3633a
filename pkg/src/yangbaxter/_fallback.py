"""Pure numpy versions of the compiled kernels."""

import numpy as np


def transfer_matrix(w, n):
    """``T[J, I] = tr prod_s L(i_s, j_s)`` with ``L(i, j)[a, b] = w[a, i, b, j]``."""
    d = w.shape[0]
    local = np.asarray(w).transpose(1, 3, 0, 2)  # local[i, j, a, b]
    x = np.eye(d, dtype=np.complex128)[None, None]
    for _ in range(n):
        x = np.einsum("IJab,ijbc->IiJjac", x, local)
        x = x.reshape(x.shape[0] * d, x.shape[2] * d, d, d)
    return np.ascontiguousarray(np.trace(x, axis1=2, axis2=3).T)
