import math

import numpy as np
import pytest

from wehrl_nc import states as fk
from wehrl_nc.errors import ConvergenceError, InvalidParameter
from wehrl_nc.husimi import q_grid
from wehrl_nc.quadrature import QuadratureRule, build_rule, estimate_wehrl, rule_for, wehrl_entropy
from wehrl_nc.special import EULER_GAMMA, digamma, log_factorial


def fock_wehrl(m):
    return 1 + m + log_factorial(m) - m * digamma(m + 1)


def test_rule_construction():
    rule = build_rule(0.0)
    assert rule.r_max == pytest.approx(math.sqrt(2) + 6)
    assert np.all(rule.weights > 0)
    assert rule.vacuum_normalization() == pytest.approx(1.0, abs=1e-11)
    assert rule.weights.shape == (rule.radial_count, rule.angular_count)
    assert build_rule(10.0).r_max == pytest.approx(math.sqrt(22) + 6)


def test_rule_rejects_bad_input():
    with pytest.raises(InvalidParameter):
        build_rule(-1.0)
    with pytest.raises(InvalidParameter):
        build_rule(1.0, tol=0.0)
    with pytest.raises(InvalidParameter):
        QuadratureRule(np.array([1.0]), np.array([-1.0]), 4, 2.0)


def test_thermal_normalization():
    st = fk.thermal(3.0, 512)
    rule = build_rule(3.0)
    assert rule.integrate(q_grid(st, rule)) == pytest.approx(1.0, abs=rule.tol)


def test_refinement_moves_fock3_below_tol():
    st = fk.fock(3, 32)
    rule = build_rule(3.0)
    coarse = wehrl_entropy(st, rule, check=False)
    fine = wehrl_entropy(st, rule.refined(), check=False)
    assert abs(fine - coarse) < rule.tol


def test_wehrl_examples():
    for beta in (0, 1.5, -1 + 2j):
        assert wehrl_entropy(fk.coherent(beta, 64)) == pytest.approx(1.0, abs=1e-6)
    assert wehrl_entropy(fk.thermal(1.0, 96)) == pytest.approx(1 + math.log(2), abs=1e-6)
    assert wehrl_entropy(fk.fock(1, 16)) == pytest.approx(1 + EULER_GAMMA, abs=1e-5)


@pytest.mark.parametrize("m", range(8))
def test_fock_wehrl_closed_form(m):
    assert wehrl_entropy(fk.fock(m, 64)) == pytest.approx(fock_wehrl(m), abs=1e-9)


def test_estimate_diagnostics():
    est = estimate_wehrl(fk.squeezed_vacuum(0.5, 64))
    assert est.normalization == pytest.approx(1.0, abs=1e-11)
    assert est.refinement_delta < 1e-6
    assert not est.diagnostics["negative_q_flag"]


def test_rotation_by_grid_step_is_exact():
    st = fk.squeezed_number(0.5, 2, 128)
    rule = rule_for(st)
    a = wehrl_entropy(st, rule, check=False)
    b = wehrl_entropy(fk.rotate(st, 2 * math.pi / rule.angular_count), rule, check=False)
    assert abs(a - b) < 1e-12


def test_displacement_and_rotation_invariance():
    st = fk.squeezed_number(0.4, 1, 96)
    ref = wehrl_entropy(st)
    for beta in (2.0, -1 + 1j):
        assert wehrl_entropy(fk.displace(st, beta)) == pytest.approx(ref, abs=2e-6)
    assert wehrl_entropy(fk.rotate(st, 0.77)) == pytest.approx(ref, abs=2e-6)


def test_wehrl_bound():
    for st in (fk.cat_state(0.7, "even", 64), fk.photon_added_coherent(2, 1.0, 64), fk.squeezed_thermal(0.5, 0.4, 128)):
        assert wehrl_entropy(st) >= 1.0 - 1e-6


def test_state_outside_disc_is_reported():
    st = fk.coherent(4.0, 128)
    with pytest.raises(ConvergenceError):
        estimate_wehrl(st, build_rule(0.0))


def test_impossible_tolerance_is_reported():
    st = fk.squeezed_number(1.0, 3, 128)
    with pytest.raises(ConvergenceError):
        estimate_wehrl(st, rule_for(st, tol=1e-13))


def test_result_is_bit_stable():
    st = fk.photon_added_thermal(2, 1.0, 96)
    assert wehrl_entropy(st) == wehrl_entropy(st)
