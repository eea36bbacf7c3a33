import math

import numpy as np
import pytest

from wehrl_nc import states as fk
from wehrl_nc.errors import InvalidParameter
from wehrl_nc.measure import (
    closed_form_fock,
    closed_form_pats,
    closed_form_squeezed,
    closed_form_squeezed_thermal,
    nc,
    nc_mixed,
    nc_pure,
)
from wehrl_nc.special import EULER_GAMMA

# frozen reference values (mpmath, 30 digits, rounded)
FOCK = {0: 0.0, 1: 0.57721566490153286, 2: 0.84757851036301103, 3: 1.0234064639326536, 4: 1.1535831566207437, 5: 1.2569034006230436}
PATS_M2 = 0.25103377830509866


def test_closed_form_values():
    for m, v in FOCK.items():
        assert closed_form_fock(m) == pytest.approx(v, abs=1e-13)
    assert closed_form_squeezed(0) == 0.0
    assert closed_form_squeezed(1) == pytest.approx(0.43378083048302719, abs=1e-13)
    assert closed_form_squeezed(0.5) == pytest.approx(0.12011450695827752, abs=1e-13)
    assert closed_form_pats(1) == pytest.approx(math.log(2) - 1 + (1 - EULER_GAMMA), abs=1e-13)
    assert closed_form_pats(2) == pytest.approx(PATS_M2, abs=1e-13)
    assert closed_form_squeezed_thermal(1.0, 0.0) == pytest.approx(0.0, abs=1e-15)
    assert closed_form_squeezed_thermal(0.0, 0.7) == pytest.approx(math.log(math.cosh(0.7)), abs=1e-14)
    expect = 0.5 * math.log(3 * math.cosh(0.5) ** 2 + 1) - math.log(2)
    assert closed_form_squeezed_thermal(1.0, 0.5) == pytest.approx(expect, abs=1e-15)
    assert expect == pytest.approx(0.0927, abs=1e-4)


def test_closed_form_domain():
    with pytest.raises(InvalidParameter):
        closed_form_fock(-1)
    with pytest.raises(InvalidParameter):
        closed_form_pats(0)
    with pytest.raises(InvalidParameter):
        closed_form_squeezed_thermal(-0.5, 0.1)


def test_pats_saturates():
    vals = [closed_form_pats(m) for m in range(1, 11)]
    steps = np.diff(vals)
    assert np.all(steps > 0) and np.all(np.diff(steps) < 0)


def test_pure_branch_examples():
    assert nc_pure(fk.coherent(1 - 1j, 64)).value == pytest.approx(0.0, abs=1e-6)
    assert nc_pure(fk.fock(1, 16)).value == pytest.approx(0.577216, abs=1e-5)
    assert nc_pure(fk.squeezed_vacuum(1.0, 128)).value == pytest.approx(0.433781, abs=1e-5)


def test_mixed_branch_examples():
    res = nc_mixed(fk.thermal(2.0, 256))
    assert res.value == pytest.approx(0.0, abs=1e-6)
    assert res.nbar_ref == pytest.approx(2.0, abs=1e-9)
    assert nc_mixed(fk.squeezed_thermal(1.0, 0.5, 128)).value == pytest.approx(closed_form_squeezed_thermal(1, 0.5), abs=1e-5)
    assert nc_mixed(fk.photon_added_thermal(1, 1.0, 96)).value == pytest.approx(0.11593, abs=1e-4)


def test_dispatch():
    proj = fk.fock(2, 32).to_density()
    res = nc(proj)
    assert res.branch == "pure"
    assert res.value == pytest.approx(nc_pure(fk.fock(2, 32)).value, abs=1e-9)
    th = nc(fk.thermal(1.0, 96))
    assert th.branch == "mixed" and th.value == pytest.approx(0.0, abs=1e-6)
    disguised = nc(fk.squeezed_thermal(0.0, 1.0, 128))
    assert disguised.branch == "pure"
    assert disguised.value == pytest.approx(math.log(math.cosh(1.0)), abs=1e-6)


def test_branches_differ_on_fock1():
    # the two references really disagree for a pure non-Gaussian state
    rho = fk.fock(1, 32).to_density()
    assert nc(rho).value == pytest.approx(FOCK[1], abs=1e-6)
    assert nc_mixed(rho).value == pytest.approx(closed_form_pats(1), abs=1e-6)


def test_result_fields_consistent():
    for res in (nc(fk.cat_state(1.0, "odd", 64)), nc(fk.photon_added_thermal(2, 0.5, 96))):
        assert res.value == pytest.approx(abs(res.wehrl - res.reference_entropy), abs=1e-12)
        assert res.value >= 0
        d = res.to_dict()
        assert set(d) == {"wehrl", "reference_entropy", "value", "branch", "nbar_ref", "diagnostics"}
    assert nc(fk.vacuum(8)).reference_entropy == 1.0


def test_pats_independent_of_nbar():
    for m in (1, 3):
        vals = [nc(fk.build_auto(lambda d: fk.photon_added_thermal(m, n, d))).value for n in (0.5, 1.0, 2.0)]
        assert max(vals) - min(vals) < 1e-4
        assert vals[0] == pytest.approx(closed_form_pats(m), abs=1e-6)
