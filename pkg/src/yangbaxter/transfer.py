"""Row-to-row transfer matrices on a periodic chain and their commutation."""

from dataclasses import dataclass

import numpy as np

from . import kernels, linalg
from .errors import SizeGuard
from .rmatrix import DEFAULT_GRID, DEFAULT_TOL, SpectralOperator, VertexWeights, finish_report, guarded

MAX_DIM = 4096


@dataclass(frozen=True)
class TransferMatrix:
    chain_len: int
    local_dim: int
    u: complex
    matrix: np.ndarray


def _weights(w):
    return VertexWeights(w) if isinstance(w, SpectralOperator) else w


def transfer_matrix(w, n, u, backend=None):
    """``T(u)[J, I] = sum_a prod_s S^{a_s i_s}_{a_{s+1} j_s}(u)``, ``a_{n+1} = a_1``."""
    w = _weights(w)
    if n < 1:
        raise ValueError("chain length must be at least 1")
    d = w.local_dim
    if d ** n > MAX_DIM:
        raise SizeGuard(f"transfer matrix of dim {d ** n} exceeds {MAX_DIM}")
    tensor = np.ascontiguousarray(w.tensor(u), dtype=np.complex128)
    return TransferMatrix(n, d, complex(u), kernels.transfer_matrix(tensor, n, backend))


def check_transfer_commutation(w, n, grid=DEFAULT_GRID, tol=DEFAULT_TOL, backend=None):
    """``[T(u), T(v)] = 0`` over the grid pairs."""
    w = _weights(w)
    d = w.local_dim
    if d ** n > MAX_DIM:
        raise SizeGuard(f"transfer matrix of dim {d ** n} exceeds {MAX_DIM}")
    op = w.operator
    notes, samples, cache = [], [], {}

    def t(x):
        if x not in cache:
            cache[x] = transfer_matrix(w, n, x, backend).matrix
        return cache[x]

    for u in grid.singles(op, notes=notes):
        for v in grid.singles(op, notes=notes):
            def res():
                a, b = t(u), t(v)
                return linalg.residual(a @ b, b @ a)
            r = guarded(grid, notes, (u, v), res)
            if r is not None:
                samples.append((u, v, r))
    return finish_report("transfer", tol, samples, sorted(set(notes)), {"chain_len": n})
