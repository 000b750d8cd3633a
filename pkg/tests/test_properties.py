import cmath
import itertools

import numpy as np
import pytest

from yangbaxter import fixtures as fx
from yangbaxter.errors import BadMultipliers
from yangbaxter.properties import (CrossingData, check_charge_conservation, check_cpt,
                                   check_crossing, check_second_inversion, check_unitarity)
from yangbaxter.rmatrix import DEFAULT_GRID, SpectralOperator, VertexWeights

GRID_U = DEFAULT_GRID.u_values


# -- unitarity --------------------------------------------------------------------

def test_rational_solution_unitarity_scalar_is_one(rational):
    report = check_unitarity(rational)
    assert report.passed and report.max_residual <= 1e-12
    for u, s in report.scalars:
        assert abs(s - 1) <= 1e-12
    assert report.scalar_at(0) == pytest.approx(1)


@pytest.mark.parametrize("u", GRID_U)
def test_yang_unitarity_scalar(yang, u):
    report = check_unitarity(yang)
    assert abs(report.scalar_at(u) - (1 - u * u)) <= 1e-12


def test_random_operator_is_not_unitary():
    assert not check_unitarity(fx.random_operator(seed=7))


# -- crossing ---------------------------------------------------------------------

def _crossing_oracle(op, k, us=(0.3, -0.45, 0.7)):
    """Brute-force search: every (lam, r) in the candidate set that admits some F(u)."""
    w = VertexWeights(op)
    bar = (1, 0)
    found = {}
    for lam in (k, -k, k / 2, -k / 2, 2 * k, -2 * k):
        for m in range(8):
            r = (cmath.exp(1j * np.pi * m / 4), cmath.exp(-1j * np.pi * m / 4))
            sr = [cmath.sqrt(x) for x in r]
            worst, fitted = 0.0, []
            for u in us:
                lhs, core = [], []
                for i, kk, j, l in itertools.product(range(2), repeat=4):
                    lhs.append(w.S(i, kk, j, l, u))
                    core.append(sr[i] * sr[l] / (sr[j] * sr[kk]) * w.S(j, l, bar[kk], bar[i], lam - u))
                lhs, core = np.array(lhs), np.array(core)
                f = np.vdot(core, lhs) / np.vdot(core, core)
                worst = max(worst, np.abs(lhs - f * core).max() / max(1, np.abs(lhs).max()))
                fitted.append(f)
            if worst < 1e-9:
                found[(lam, m)] = fitted
    return found


def test_crossing_oracle_pins_the_fixture_data():
    k = 2
    found = _crossing_oracle(fx.tl_rational_operator(k), k)
    assert set(found) == {(k, 2), (k, 6)}  # r(0) = i or -i
    cd = fx.tl_rational_crossing_data(k)
    assert cd.lam == k and cd.multipliers == (1j, -1j)
    for f, u in zip(found[(k, 2)], (0.3, -0.45, 0.7)):
        assert f == pytest.approx(cd.f(u), abs=1e-12)


def test_crossing_oracle_on_normalized_fixture_gives_unit_f():
    found = _crossing_oracle(fx.tl_rational_normalized(2), 2)
    assert (2, 2) in found
    assert np.allclose(found[(2, 2)], 1)


@pytest.mark.parametrize("op, cd", [
    (fx.tl_rational_operator(2), fx.tl_rational_crossing_data(2)),
    (fx.tl_rational_operator(3), fx.tl_rational_crossing_data(3)),
    (fx.tl_rational_normalized(2), fx.tl_rational_normalized_crossing_data(2)),
])
def test_crossing_passes(op, cd):
    report = check_crossing(op, cd)
    assert report.passed and report.max_residual <= 1e-12


def test_crossing_fails_with_wrong_lambda():
    cd = CrossingData(-2, (1j, -1j), (1, 0), F=fx.tl_rational_crossing_data(2).F)
    assert not check_crossing(fx.tl_rational_operator(2), cd)


def test_crossing_fails_after_perturbation(rational):
    bump = np.zeros((4, 4))
    bump[1, 2] = 1e-3
    op = SpectralOperator(lambda u: rational.at(u) + bump, 2, rational.poles)
    assert not check_crossing(op, fx.tl_rational_crossing_data(2))


def test_crossing_ratio_root_is_not_used():
    # the principal root of the ratio r(i)r(l)/(r(j)r(k)) would pick the wrong branch here
    cd = fx.tl_rational_crossing_data(2)
    r = cd.multipliers
    ratio_root = cmath.sqrt(r[0] * r[0] / (r[1] * r[1]))
    split_root = cmath.sqrt(r[0]) ** 2 / cmath.sqrt(r[1]) ** 2
    assert ratio_root != pytest.approx(split_root)


def test_negative_real_multiplier_is_noted():
    cd = CrossingData(2, (-1, -1), (1, 0))
    report = check_crossing(fx.tl_rational_operator(2), cd)
    assert any("negative real axis" in n for n in report.notes)


def test_crossing_data_validation():
    with pytest.raises(BadMultipliers):
        CrossingData(1, (2, 2), (1, 0))
    with pytest.raises(BadMultipliers):
        CrossingData(1, (0, 1), (0, 1))
    with pytest.raises(BadMultipliers):
        CrossingData(1, (1,), (1, 0))
    with pytest.raises(ValueError):
        CrossingData(1, (1, 1, 1), (1, 2, 0))


# -- second inversion ---------------------------------------------------------------

@pytest.mark.parametrize("op, cd", [
    (fx.tl_rational_operator(2), fx.tl_rational_crossing_data(2)),
    (fx.tl_rational_normalized(2), fx.tl_rational_normalized_crossing_data(2)),
])
def test_second_inversion_scalar_tracks_unitarity(op, cd):
    assert check_crossing(op, cd).passed
    report = check_second_inversion(op, cd)
    assert report.passed
    unit = dict(report.details["unitarity_scalars"])
    fprod = dict(report.details["F_product"])
    assert report.details["scalars"]
    for u, s in report.details["scalars"]:
        assert abs(s - fprod[u] * unit[u]) <= 1e-8 * max(1, abs(s))


def test_second_inversion_equals_unitarity_when_f_is_one():
    op = fx.tl_rational_normalized(2)
    report = check_second_inversion(op, fx.tl_rational_normalized_crossing_data(2))
    unit = dict(report.details["unitarity_scalars"])
    for u, s in report.details["scalars"]:
        assert s == pytest.approx(unit[u], abs=1e-8)


def test_second_inversion_fails_for_random_operator():
    report = check_second_inversion(fx.random_operator(seed=11), fx.tl_rational_crossing_data(2))
    assert not report.passed
    assert any("F has a pole" in n for n in report.notes)


def test_crossing_skips_poles_of_f():
    cd = CrossingData(2, (1j, -1j), (1, 0), F=lambda u: 1 / (u - 0.45))
    report = check_crossing(fx.tl_rational_operator(2), cd)
    assert any("skipped" in n for n in report.notes)


# -- CPT and charge -------------------------------------------------------------------

def test_cpt_on_rational_solution(rational):
    report = check_cpt(rational, (1, 0))
    assert report.passed
    assert all(report.details[f"pass_{x}"] for x in "CPT")


def test_cpt_reports_each_symmetry_separately():
    m = np.diag([1.0, 2.0, 2.0, 3.0]).astype(complex)
    report = check_cpt(SpectralOperator.constant(m), (1, 0))
    assert not report.details["pass_C"]
    assert report.details["pass_P"] and report.details["pass_T"]


def test_charge_conservation(rational, yang):
    report = check_charge_conservation(rational)
    assert report.passed and report.max_residual == 0
    assert check_charge_conservation(yang, (0, 1)).max_residual == 0


def test_charge_violation_is_absolute():
    m = np.eye(4, dtype=complex)
    m[0, 3] = 1e-6
    report = check_charge_conservation(SpectralOperator.constant(m))
    assert report.max_residual == pytest.approx(1e-6)
    assert not report.passed
