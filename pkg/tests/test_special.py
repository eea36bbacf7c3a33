import math

import mpmath
import numpy as np
import pytest
from scipy import special as sp

from wehrl_nc.special import EULER_GAMMA, digamma, laguerre, legendre, log_factorial


@pytest.mark.parametrize("x", [1e-3, 0.5, 1.0, 2.0, 3.0, 5.0, 6.0, 10.5, 37.0, 1e4])
def test_digamma_matches_mpmath(x):
    assert digamma(x) == pytest.approx(float(mpmath.digamma(x)), abs=1e-12, rel=1e-13)


def test_digamma_integer_values():
    # psi(n + 1) = H_n - gamma
    for n in range(1, 12):
        harmonic = sum(1.0 / k for k in range(1, n + 1))
        assert digamma(n + 1) == pytest.approx(harmonic - EULER_GAMMA, abs=1e-13)


def test_log_factorial():
    for n in (0, 1, 2, 10, 170):
        assert log_factorial(n) == pytest.approx(math.log(math.factorial(n)), rel=1e-14, abs=1e-14)


@pytest.mark.parametrize("n", [0, 1, 2, 5, 13])
@pytest.mark.parametrize("alpha", [0.0, 1.0, 3.0])
def test_laguerre_matches_scipy(n, alpha):
    x = np.linspace(-2.0, 6.0, 9)
    np.testing.assert_allclose(laguerre(n, x, alpha), sp.eval_genlaguerre(n, alpha, x), rtol=1e-11, atol=1e-11)


@pytest.mark.parametrize("n", [0, 1, 2, 4, 9])
def test_legendre_matches_scipy(n):
    x = np.array([-1.0, -0.3, 0.0, 0.7, 1.0, 1.1276259652063807, 1.5430806348152437])
    np.testing.assert_allclose(legendre(n, x), sp.eval_legendre(n, x), rtol=1e-12)
