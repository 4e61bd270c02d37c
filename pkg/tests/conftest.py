"""Shared fixtures: solved profiles are expensive, so cache them per session."""

from __future__ import annotations

from functools import lru_cache

import pytest

from redost import EquationKind, continue_family, solve_wave


@lru_cache(maxsize=32)
def _solved(kind_label: str, a: float, m: int):
    return solve_wave(EquationKind.parse(kind_label), a, m)


@pytest.fixture(scope="session")
def solved():
    """Memoized solver handle: ``solved('ro', 0.1, 256)``."""
    return _solved


@lru_cache(maxsize=4)
def _ladder(kind_label: str, stop: float, step: float, m: int):
    import numpy as np

    kind = EquationKind.parse(kind_label)
    sign = 1.0 if stop > 0 else -1.0
    rungs = list(sign * np.arange(step, abs(stop) + step / 2, step))
    return continue_family(kind, rungs, m)


@pytest.fixture(scope="session")
def ladder():
    """Memoized continuation handle: ``ladder('ro', -0.5, 0.1, 256)``."""
    return _ladder
