"""Reference operators used by the tests, the CLI fixtures and the benchmarks."""

import numpy as np

from . import linalg
from .properties import CrossingData
from .rmatrix import SpectralOperator


def bgr_qpt(q=3, p=1, t=1):
    """Three-eigenvalue braid representation with spectrum ``{q, q, p, -p}``."""
    q, p, t = complex(q), complex(p), complex(t)
    return np.array([
        [q, 0, 0, 0],
        [t, 0, p, 0],
        [t, p, 0, 0],
        [2 * t * t / (q - p), -t, -t, q],
    ], dtype=np.complex128)


def tl_T():
    """TL generator with ``T^2 = -2 T``."""
    return np.array([
        [0, 0, 0, 0],
        [0, -1, 1, 0],
        [0, 1, -1, 0],
        [0, 0, 0, 0],
    ], dtype=np.complex128)


def tl_rational_matrix(u, k=2):
    """``I - u/(k-u) T`` written out entrywise."""
    u, k = complex(u), complex(k)
    a, b = k / (k - u), -u / (k - u)
    return np.array([
        [1, 0, 0, 0],
        [0, a, b, 0],
        [0, b, a, 0],
        [0, 0, 0, 1],
    ], dtype=np.complex128)


def tl_rational_operator(k=2):
    return SpectralOperator(lambda u: tl_rational_matrix(u, k), 2, poles=(k,), label=f"tl-rational(k={k})")


def tl_rational_crossing_data(k=2):
    """Crossing data of :func:`tl_rational_operator`: ``lam = k``, ``r = (i, -i)``, ``F = -u/(k-u)``."""
    k = complex(k)
    return CrossingData(k, (1j, -1j), (1, 0), F=lambda u: -u / (k - u), label="tl-rational")


def tl_rational_normalized(k=2):
    """``(k - 2u)/k^2 [(k - u) I - u T]``: the same solution rescaled so that ``F = 1``."""
    k = complex(k)
    eye, t = linalg.identity(4), tl_T()
    return SpectralOperator(lambda u: (k - 2 * u) / k ** 2 * ((k - u) * eye - u * t), 2,
                            label=f"tl-rational-normalized(k={k})")


def tl_rational_normalized_crossing_data(k=2):
    return CrossingData(k, (1j, -1j), (1, 0), label="tl-rational-normalized")


def yang_operator(d=2):
    """Braided Yang solution ``I + u P``."""
    eye, p = linalg.identity(d * d), linalg.permutation_operator(d)
    return SpectralOperator(lambda u: eye + u * p, d, label="yang")


def yang_r_form(d=2):
    """``R(u) = P + u I``, the R-form of :func:`yang_operator`."""
    eye, p = linalg.identity(d * d), linalg.permutation_operator(d)
    return SpectralOperator(lambda u: p + u * eye, d, label="yang-r", form="r")


def random_operator(d=2, seed=0):
    rng = np.random.default_rng(seed)
    n = d * d
    a, b = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)) for _ in range(2))
    return SpectralOperator(lambda u: a + u * b, d, label=f"random(seed={seed})")
