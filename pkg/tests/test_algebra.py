import itertools

import numpy as np
import pytest

from yangbaxter import fixtures as fx
from yangbaxter import linalg
from yangbaxter.algebra import (ChainFamily, check_bmw_prime, check_braid_relations,
                                check_temperley_lieb, fit_skein_4cb, normalize_tl_generator)
from yangbaxter.baxterize import bmw_normalize
from yangbaxter.errors import InconsistentParams, Singular, ZeroGenerator

P = linalg.permutation_operator(2)
I4 = np.eye(4, dtype=complex)


def test_chain_family_matches_embedding(T):
    fam = ChainFamily(T, 2, 3)
    assert np.array_equal(fam[2], linalg.embed_pair(T, 2, 3, 2))
    assert fam.identity.shape == (8, 8)


@pytest.mark.parametrize("g", [P, fx.bgr_qpt(), fx.bgr_qpt(5, 2, 0.5), linalg.permutation_operator(3)])
def test_braid_representations_pass(g):
    d = linalg.local_dim_of(g)
    report = check_braid_relations(g, d)
    assert report.passed and report.max_residual <= 1e-10


def test_i_plus_xp_is_not_a_braid_generator():
    # I + P itself is singular; any invertible I + xP, x != 0, misses by x (P1 - P2)
    with pytest.raises(Singular):
        check_braid_relations(I4 + P, 2)
    assert not check_braid_relations(I4 + 2 * P, 2)


def test_singular_generator_rejected(T):
    with pytest.raises(Singular):
        check_braid_relations(T, 2)


def test_tl_generator(T):
    params, report = check_temperley_lieb(T, 2)
    assert abs(params.delta + 2) <= 1e-12
    assert report.passed
    assert max(report.details["relations"].values()) <= 1e-12
    # the swapped variant E_i E_{i+1} E_i = E_{i+1} is measured, never decisive
    assert report.details["swapped_variant"] > 0.5


def test_local_projector_violates_tl():
    e = np.zeros((4, 4), dtype=complex)
    e[0, 0] = 1
    _, report = check_temperley_lieb(e, 2)
    assert not report.passed
    assert report.details["relations"]["E1E2E1=E1"] > 0.5


@pytest.mark.parametrize("delta", [2, -2, 1.5, 3j])
def test_delta_read_back_from_singlet_projector(delta):
    v = np.array([0, 1, -1, 0]) / np.sqrt(2)
    pm = np.outer(v, v)
    params, _ = check_temperley_lieb(delta * pm, 2)
    assert abs(params.delta - delta) <= 1e-12


@pytest.mark.parametrize("c", [1, -1, 0.5, 2 + 1j])
def test_delta_is_scale_covariant(T, c):
    params, _ = check_temperley_lieb(c * T, 2)
    assert params.delta == pytest.approx(-2 * c)


def test_zero_generator():
    with pytest.raises(ZeroGenerator):
        check_temperley_lieb(np.zeros((4, 4)), 2)


@pytest.mark.parametrize("sign", [1, -1])
def test_bgr_projectors_normalize_to_tl(bgr, sign):
    pf = linalg.spectral_projectors(bgr)
    for lam in (1, -1):
        p = pf.projectors[pf.index_of(lam)]
        raw, _ = check_temperley_lieb(p, 2)
        e, c = normalize_tl_generator(p, 2, sign)
        params, report = check_temperley_lieb(e, 2)
        assert c == pytest.approx(2 * sign)
        assert report.passed
        assert params.delta == pytest.approx(2 * sign)


def test_t_is_minus_two_singlet_projector(bgr, T):
    pf = linalg.spectral_projectors(bgr)
    assert np.allclose(T, -2 * pf.projectors[pf.index_of(-1)])


@pytest.mark.parametrize("xi", [1, -1, 0.25, 2 + 1j, 3])
def test_i_plus_xi_e_braids_iff_tl_coefficient_identity(T, xi):
    # G1G2G1 - G2G1G2 = xi (1 + delta xi + xi^2)(E1 - E2) under the TL relations
    delta = -2
    holds = abs(xi * xi + delta * xi + 1) < 1e-12
    assert check_braid_relations(I4 + xi * T, 2).passed == holds


# -- BMW' --------------------------------------------------------------------------

def test_bmw_identity_pair():
    params, report = check_bmw_prime(I4, I4, 2)
    assert report.passed
    assert params.l == pytest.approx(1)
    assert params.m is None
    assert any("indeterminate" in n for n in report.notes)


def test_bmw_scalar_generator_without_e():
    params, report = check_bmw_prime(2 * I4, np.zeros((4, 4)), 2)
    assert report.passed
    assert params.m == pytest.approx(1.5)
    assert params.l is None


def test_bmw_strict_params_raise():
    g = fx.bgr_qpt() / np.sqrt(3)
    with pytest.raises(InconsistentParams):
        check_bmw_prime(g, fx.tl_T(), 2, strict_params=True)
    _, report = check_bmw_prime(g, fx.tl_T(), 2)
    assert not report.passed


@pytest.mark.parametrize("ordering", [(3, 1, -1), (3, -1, 1), (1, 3, -1), (-1, 3, 1)])
def test_bmw_on_normalized_bgr_is_recorded(bgr, ordering):
    norm = bmw_normalize(bgr, ordering)
    params, report = check_bmw_prime(norm.G, norm.E, 2)
    rel = report.details["relations"]
    # finding: with E = (G + G^-1)/m - I every relation except the skein holds
    assert rel["skein"] > 1e-3
    assert all(v <= 1e-9 for k, v in rel.items() if k != "skein")


# -- 4-CB skein ---------------------------------------------------------------------

def test_involution_skein():
    coeffs = fit_skein_4cb(P, fx.tl_T() + np.diag([1, 0, 0, 0]))
    assert coeffs.residual <= 1e-12
    assert coeffs.alpha == pytest.approx(1)
    for c in (coeffs.beta, coeffs.gamma, coeffs.delta4):
        assert abs(c) <= 1e-12
    assert not coeffs.unique


def test_three_block_skein_matches_cubic(bgr):
    norm = bmw_normalize(bgr, (3, 1, -1))
    coeffs = fit_skein_4cb(norm.G, norm.E)
    assert coeffs.residual <= 1e-10
    # G^2 = (m + 1/l) G - (m/l + 1) I + G^-1 / l reproduced through the E direction as well
    g, gi = norm.G, np.linalg.inv(norm.G)
    rebuilt = coeffs.alpha * I4 + coeffs.beta * norm.E + coeffs.gamma * g + coeffs.delta4 * gi
    assert linalg.residual(rebuilt, g @ g) <= 1e-10


def test_four_generic_eigenvalues_quartic(rng):
    s = rng.standard_normal((4, 4)) + 3 * np.eye(4)
    g = s @ np.diag([1.5, -0.5, 2.0, 0.75]) @ np.linalg.inv(s)
    gi = np.linalg.inv(g)
    # choose E so that G^2 lies in span{I, E, G, G^-1} with known coefficients
    alpha, beta, gamma, d4 = 0.3, 1.7, -0.2, 0.9
    e = (g @ g - alpha * I4 - gamma * g - d4 * gi) / beta
    coeffs = fit_skein_4cb(g, e)
    assert coeffs.unique
    assert coeffs.residual <= 1e-12
    assert np.allclose([coeffs.alpha, coeffs.beta, coeffs.gamma, coeffs.delta4],
                       [alpha, beta, gamma, d4])
