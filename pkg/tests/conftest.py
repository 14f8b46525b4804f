from __future__ import annotations

import os
import random

import pytest

from src.core.diagram import Diagram, parse_diagram
from src.core.families import EnumeratedMonoid, enumerate_family
from src.utils.validation import parse_family


def pytest_collection_modifyitems(config, items):
    if os.getenv("DIAGRAMDEG_LONG") == "1":
        return
    skip = pytest.mark.skip(reason="long run; set DIAGRAMDEG_LONG=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def alpha_fig() -> Diagram:
    return parse_diagram("[[1,4],[2,3,-4,-5],[5,6],[-1,-2,-6],[-3]]", 6)


@pytest.fixture
def beta_fig() -> Diagram:
    return parse_diagram("[[1,2],[3,4,-1],[5,-4,-5,-6],[6],[-2,-3]]", 6)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


@pytest.fixture(scope="session")
def monoid():
    """monoid("P", 3) -> EnumeratedMonoid, shared across the session."""
    cache = {}

    def get(name: str, n: int) -> EnumeratedMonoid:
        if (name, n) not in cache:
            cache[(name, n)] = enumerate_family(parse_family(name), n)
        return cache[(name, n)]

    return get
