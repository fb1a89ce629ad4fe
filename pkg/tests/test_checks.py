"""Structure of the self-check catalog (the CLI tests run it end to end)."""

import pytest

from fiberphase.checks import CheckResult, run_checks
from fiberphase.errors import SouthPoleError
from fiberphase.fiber_geometry import Helix


def test_catalog_structure_and_outcome():
    results = run_checks(Helix(radius=1.0, pitch=1.0))
    assert all(isinstance(r, CheckResult) for r in results)
    names = [r.name for r in results]
    assert len(names) == len(set(names))
    assert len(results) >= 25
    for r in results:
        assert r.residual >= 0.0
        assert r.passed == (r.residual <= r.bound)
    assert all(r.passed for r in results)


def test_catalog_refuses_polar_crossing():
    # a broken input is an error, not a sea of FAIL rows
    with pytest.raises(SouthPoleError):
        run_checks(Helix(radius=1.0, pitch=0.0))
