from __future__ import annotations

import pytest

from catalg import properties

COUNT = 500


@pytest.mark.parametrize("name", list(properties.PROPERTIES))
def test_property_battery(name):
    n, fails = properties.run_property(name, COUNT, seed=0)
    assert n == COUNT
    assert not fails, fails[:3]


@pytest.mark.parametrize("name", list(properties.PROPERTIES))
def test_property_runs_are_reproducible(name):
    assert properties.run_property(name, 10, seed=7) == properties.run_property(name, 10, seed=7)
