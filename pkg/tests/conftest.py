from __future__ import annotations

import pytest

from catalg.io import builtin_theory


@pytest.fixture
def theory():
    return builtin_theory
