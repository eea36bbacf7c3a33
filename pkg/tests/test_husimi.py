import math

import numpy as np
import pytest

from wehrl_nc import states as fk
from wehrl_nc.gaussian import gaussian_q, moments
from wehrl_nc.husimi import coherent_row, q_grid, q_value, q_values
from wehrl_nc.quadrature import build_rule, rule_for


def test_coherent_row_examples():
    row = coherent_row(0, 8)
    assert row[0] == 1 and np.all(row[1:] == 0)
    assert np.sum(np.abs(coherent_row(3, 64)) ** 2) == pytest.approx(1.0, abs=1e-12)
    assert np.sum(np.abs(coherent_row(3, 16)) ** 2) < 1.0


def test_coherent_row_large_amplitude_no_overflow():
    row = coherent_row(25.0, 1200)
    assert np.all(np.isfinite(row))
    assert np.sum(np.abs(row) ** 2) == pytest.approx(1.0, abs=1e-10)


def test_q_value_examples():
    assert q_value(fk.vacuum(8), 0) == pytest.approx(1 / math.pi, abs=1e-15)
    assert q_value(fk.fock(1, 8), 0) == 0.0
    assert q_value(fk.thermal(1.0, 96), 0) == pytest.approx(1 / (2 * math.pi), abs=1e-12)


def test_q_of_fock_closed_form():
    alpha = 1.1 + 0.4j
    x = abs(alpha) ** 2
    for m in range(5):
        expect = math.exp(-x) * x**m / (math.factorial(m) * math.pi)
        assert q_value(fk.fock(m, 32), alpha) == pytest.approx(expect, abs=1e-14)


def test_q_grid_matches_pointwise_values():
    st = fk.photon_added_thermal(2, 0.7, 96)
    rule = build_rule(5.0, radial=12, angular=10)
    grid = q_grid(st, rule)
    direct = q_values(st, rule.points())
    np.testing.assert_allclose(grid, direct, atol=1e-14)
    pure = fk.cat_state(1.3, "odd", 64)
    np.testing.assert_allclose(q_grid(pure, rule), q_values(pure, rule.points()), atol=1e-14)


def test_q_bounded_by_inverse_pi():
    for st in (fk.squeezed_vacuum(0.8, 128), fk.cat_state(1.0, "even", 64), fk.thermal(0.5, 64)):
        q = q_grid(st, rule_for(st))
        assert q.min() >= 0.0 and q.max() <= 1 / math.pi + 1e-12


def test_even_cat_parity_symmetry():
    st = fk.cat_state(1.0, "even", 64)
    rule = build_rule(1.0, angular=256)
    q = q_grid(st, rule)
    # alpha -> -alpha maps angle index j to j + Na/2
    np.testing.assert_allclose(q, np.roll(q, 128, axis=1), atol=1e-12)


def test_squeezed_vacuum_is_stretched_along_x():
    st = fk.squeezed_vacuum(0.5, 64)
    for radius in (0.5, 1.0, 2.0):
        assert q_value(st, radius) > q_value(st, 1j * radius)


def test_displacement_translates_q():
    st = fk.squeezed_number(0.4, 2, 128)
    beta = 0.8 - 0.6j
    moved = fk.displace(st, beta)
    pts = np.array([0.3 + 0.1j, -1.0 + 0.5j, 1.5 - 1.2j, 2.0j])
    np.testing.assert_allclose(q_values(moved, pts), q_values(st, pts - beta), atol=1e-10)


@pytest.mark.parametrize(
    "st",
    [fk.squeezed_thermal(1.0, (0.6, 0.8), 256), fk.displace(fk.squeezed_vacuum(0.7, 128), 1 - 1j), fk.thermal(2.0, 256)],
    ids=["squeezed-thermal", "displaced-squeezed", "thermal"],
)
def test_gaussian_states_match_closed_form_q(st):
    rule = rule_for(st)
    pts = rule.points()[::7, ::9]
    np.testing.assert_allclose(q_values(st, pts), gaussian_q(moments(st), pts), atol=1e-8)
