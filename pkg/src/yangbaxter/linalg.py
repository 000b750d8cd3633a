"""Dense complex matrices on chains of ``d``-dimensional sites.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. The basis of
``V (x) V`` is ordered lexicographically: ``|a> (x) |b>`` is row ``a*d + b``.
Site 1 is the most significant digit of a chain index.
"""

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import DimMismatch, NotDiagonalizable, SiteOutOfRange

GROUPING_TOL = 1e-8


def as_cmatrix(a, dim=None):
    """Validate and convert ``a`` to a square, finite complex matrix."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimMismatch(f"expected a nonempty square matrix, got shape {m.shape}")
    if dim is not None and m.shape[0] != dim:
        raise DimMismatch(f"expected dimension {dim}, got {m.shape[0]}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def local_dim_of(m):
    """Return ``d`` such that ``m`` acts on ``V (x) V`` with ``dim V = d``."""
    n = m.shape[0]
    d = int(round(n ** 0.5))
    if d * d != n:
        raise DimMismatch(f"dimension {n} is not a perfect square; cannot split into two sites")
    return d


def residual(a, b):
    """Relative max-entry residual ``max|a-b| / max(1, max|a|, max|b|)``."""
    a = np.asarray(a)
    b = np.asarray(b)
    scale = max(1.0, float(np.max(np.abs(a), initial=0.0)), float(np.max(np.abs(b), initial=0.0)))
    return float(np.max(np.abs(a - b), initial=0.0)) / scale


def kron(a, b):
    return np.kron(a, b)


def identity(n):
    return np.eye(n, dtype=np.complex128)


def embed_pair(m, site, chain_len, local_dim):
    """Place the two-site operator ``m`` on sites ``site, site+1`` of a chain.

    Returns ``I^(site-1) (x) m (x) I^(chain_len-site-1)``; sites count from 1.
    """
    d = local_dim
    if m.shape[0] != d * d:
        raise DimMismatch(f"two-site operator has dim {m.shape[0]}, expected {d * d}")
    if chain_len < 2 or not 1 <= site <= chain_len - 1:
        raise SiteOutOfRange(f"site {site} not in 1..{chain_len - 1}")
    left = identity(d ** (site - 1))
    right = identity(d ** (chain_len - site - 1))
    return np.kron(np.kron(left, m), right)


def permutation_operator(d):
    """The swap ``P |a>|b> = |b>|a>`` on ``V (x) V``."""
    p = np.zeros((d * d, d * d), dtype=np.complex128)
    for a in range(d):
        for b in range(d):
            p[a * d + b, b * d + a] = 1.0
    return p


def distinct_eigenvalues(b, grouping_tol=GROUPING_TOL):
    """Eigenvalues of ``b`` with near-equal values merged.

    Values within ``grouping_tol`` of a cluster's first member join it and the
    cluster is represented by its mean. Output is sorted by descending real
    part, then descending imaginary part.
    """
    clusters = []
    for z in np.linalg.eigvals(b):
        for c in clusters:
            if abs(z - c[0]) <= grouping_tol:
                c.append(z)
                break
        else:
            clusters.append([z])
    values = [complex(np.mean(c)) for c in clusters]
    values = [_clean(z) for z in values]
    return sorted(values, key=lambda z: (-round(z.real, 10), -round(z.imag, 10)))


def _clean(z, eps=1e-13):
    # strip round-off crumbs so that e.g. 3+1e-16j prints and compares as 3
    re = 0.0 if abs(z.real) < eps else z.real
    im = 0.0 if abs(z.imag) < eps * max(1.0, abs(z)) else z.imag
    return complex(re, im)


@dataclass(frozen=True)
class ProjectorFamily:
    """Distinct eigenvalues of a matrix together with its spectral projectors."""

    eigenvalues: tuple
    projectors: tuple
    grouping_tol: float = GROUPING_TOL

    def __len__(self):
        return len(self.eigenvalues)

    @property
    def dim(self):
        return self.projectors[0].shape[0]

    def ranks(self):
        return tuple(int(round(np.trace(p).real)) for p in self.projectors)

    def reconstruct(self):
        return sum(lam * p for lam, p in zip(self.eigenvalues, self.projectors))

    def index_of(self, value, tol=1e-6):
        best = min(range(len(self)), key=lambda i: abs(self.eigenvalues[i] - value))
        if abs(self.eigenvalues[best] - value) > tol * max(1.0, abs(value)):
            raise ValueError(f"{value!r} is not an eigenvalue (closest {self.eigenvalues[best]!r})")
        return best

    def reordered(self, ordering):
        """Family with eigenvalues permuted to match ``ordering``."""
        idx = [self.index_of(v) for v in ordering]
        if sorted(idx) != list(range(len(self))):
            raise ValueError(f"ordering {list(ordering)!r} is not a permutation of the spectrum")
        return ProjectorFamily(tuple(self.eigenvalues[i] for i in idx),
                               tuple(self.projectors[i] for i in idx),
                               self.grouping_tol)

    def invariant_residuals(self):
        n = self.dim
        completeness = residual(sum(self.projectors), identity(n))
        ortho = 0.0
        for i, p in enumerate(self.projectors):
            for j, q in enumerate(self.projectors):
                target = p if i == j else np.zeros_like(p)
                ortho = max(ortho, residual(p @ q, target))
        return completeness, ortho


def spectral_projectors(b, grouping_tol=GROUPING_TOL):
    """Spectral decomposition of ``b`` by the Lagrange product formula.

    ``P_i = prod_{j != i} (b - lam_j I) / (lam_i - lam_j)`` over the distinct
    eigenvalues. Raises :class:`NotDiagonalizable` when the resulting family
    does not resolve the identity into orthogonal idempotents
    or does not reproduce ``b``.
    """
    b = as_cmatrix(b)
    n = b.shape[0]
    lams = distinct_eigenvalues(b, grouping_tol)
    eye = identity(n)
    projectors = []
    for i, li in enumerate(lams):
        factors = [(b - lj * eye) / (li - lj) for j, lj in enumerate(lams) if j != i]
        projectors.append(reduce(np.matmul, factors, eye))
    family = ProjectorFamily(tuple(lams), tuple(projectors), grouping_tol)
    completeness, ortho = family.invariant_residuals()
    if completeness > 1e-7 or ortho > 1e-7:
        raise NotDiagonalizable(
            f"projector family violates sum/orthogonality (residuals {completeness:.2e}, {ortho:.2e})")
    # a nilpotent part is invisible to the two checks above
    rebuilt = residual(family.reconstruct(), b)
    if rebuilt > 1e-7:
        raise NotDiagonalizable(f"sum of lam_i P_i misses the matrix by {rebuilt:.2e}")
    return family


def minimal_polynomial_residual(b, eigenvalues):
    """``prod_i (b - lam_i I)`` over the given eigenvalues, as a matrix."""
    eye = identity(b.shape[0])
    return reduce(np.matmul, [b - lam * eye for lam in eigenvalues], eye)


def lstsq_scalar(target, basis):
    """Best ``c`` minimising ``||target - c * basis||`` (Frobenius)."""
    denom = np.vdot(basis, basis)
    if abs(denom) == 0:
        return None
    return complex(np.vdot(basis, target) / denom)


def invertible(m, rcond=1e-10):
    """True when the reciprocal condition number exceeds ``rcond``."""
    s = np.linalg.svd(m, compute_uv=False)
    return s[-1] > rcond * s[0] if s[0] > 0 else False
