import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from yangbaxter import fixtures as fx
from yangbaxter import linalg
from yangbaxter.errors import DimMismatch, NotDiagonalizable, SiteOutOfRange


def _basis(d, digits):
    v = np.zeros(d ** len(digits))
    v[int("".join(map(str, digits)), d)] = 1
    return v


def test_permutation_swaps_basis_states():
    p = linalg.permutation_operator(3)
    for a, b in itertools.product(range(3), repeat=2):
        assert np.array_equal(p @ _basis(3, (a, b)), _basis(3, (b, a)))


@pytest.mark.parametrize("site", [1, 2, 3])
def test_embed_pair_against_index_oracle(site, rng):
    d, n = 2, 4
    m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    big = linalg.embed_pair(m, site, n, d)
    # oracle: act on digits (site, site+1) of every basis state, leave the rest alone
    oracle = np.zeros((d ** n, d ** n), dtype=complex)
    for col in itertools.product(range(d), repeat=n):
        for row in itertools.product(range(d), repeat=n):
            others = [k for k in range(n) if k not in (site - 1, site)]
            if any(row[k] != col[k] for k in others):
                continue
            r = row[site - 1] * d + row[site]
            c = col[site - 1] * d + col[site]
            oracle[int("".join(map(str, row)), d), int("".join(map(str, col)), d)] = m[r, c]
    assert np.allclose(big, oracle)


def test_embed_pair_rejects_bad_site():
    with pytest.raises(SiteOutOfRange):
        linalg.embed_pair(np.eye(4), 3, 3, 2)
    with pytest.raises(SiteOutOfRange):
        linalg.embed_pair(np.eye(4), 0, 3, 2)


def test_local_dim_requires_square_of_integer():
    assert linalg.local_dim_of(np.eye(9)) == 3
    with pytest.raises(DimMismatch):
        linalg.local_dim_of(np.eye(2))
    with pytest.raises(DimMismatch):
        linalg.as_cmatrix(np.ones((2, 3)))


def test_residual_is_relative_above_one():
    a = np.full((2, 2), 1e6)
    assert linalg.residual(a, a + 1) == pytest.approx(1e-6)
    assert linalg.residual(np.zeros(2), np.full(2, 1e-3)) == pytest.approx(1e-3)


def test_bgr_spectrum(bgr):
    pf = linalg.spectral_projectors(bgr)
    assert np.allclose(pf.eigenvalues, [3, 1, -1], atol=1e-9)
    assert pf.ranks() == (2, 1, 1)
    assert linalg.residual(pf.reconstruct(), bgr) < 1e-12
    completeness, ortho = pf.invariant_residuals()
    assert completeness < 1e-12 and ortho < 1e-12


def test_projector_minus_one_is_the_singlet(bgr):
    pf = linalg.spectral_projectors(bgr)
    p = pf.projectors[pf.index_of(-1)]
    v = np.array([0, 1, -1, 0]) / np.sqrt(2)
    assert np.allclose(p, np.outer(v, v))


def test_reordered_and_lookup(bgr):
    pf = linalg.spectral_projectors(bgr).reordered([-1, 3, 1])
    assert np.allclose(pf.eigenvalues, [-1, 3, 1])
    with pytest.raises(ValueError):
        pf.reordered([3, 3, 1])
    with pytest.raises(ValueError):
        pf.index_of(7)


def test_jordan_block_is_not_diagonalizable():
    j = np.eye(4, dtype=complex)
    j[0, 1] = 1
    with pytest.raises(NotDiagonalizable):
        linalg.spectral_projectors(j)


def test_minimal_polynomial_kills_bgr(bgr):
    r = linalg.minimal_polynomial_residual(bgr, [3, 1, -1])
    assert np.abs(r).max() < 1e-12


@given(hnp.arrays(np.float64, (4,), elements=st.floats(-3, 3)).filter(
    lambda v: min(abs(a - b) for a, b in itertools.combinations(v, 2)) > 1e-3))
@settings(max_examples=50, deadline=None)
def test_projectors_of_random_similar_diagonal(diag):
    rng = np.random.default_rng(0)
    s = rng.standard_normal((4, 4)) + 4 * np.eye(4)
    b = s @ np.diag(diag) @ np.linalg.inv(s)
    pf = linalg.spectral_projectors(b)
    assert len(pf) == 4
    assert linalg.residual(pf.reconstruct(), b) < 1e-8


def test_lstsq_scalar_recovers_scale(T):
    assert linalg.lstsq_scalar(T @ T, T) == pytest.approx(-2)
    assert linalg.lstsq_scalar(T, np.zeros((4, 4))) is None


def test_invertible():
    assert linalg.invertible(fx.bgr_qpt())
    assert not linalg.invertible(fx.tl_T())
