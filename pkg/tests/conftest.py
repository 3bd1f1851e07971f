"""Shared fixtures: a handful of small groupoids and fibrations."""

from pathlib import Path

import pytest

from src.fibrations import identity_fibration, set_universe
from src.groupoid import codiscrete, cyclic, discrete

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


@pytest.fixture
def samples_dir() -> Path:
    return SAMPLES


@pytest.fixture
def z2():
    return cyclic(2)


@pytest.fixture
def codiscrete2():
    return codiscrete(2)


@pytest.fixture
def p0():
    """Identity fibration over two points: not univalent."""
    return identity_fibration(discrete(2, name="B0"))


@pytest.fixture
def u1():
    return set_universe(1)


@pytest.fixture
def u2():
    return set_universe(2)
