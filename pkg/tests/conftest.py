import random

import pytest

from geomhd.config import build_instance
from geomhd.instances import SHIPPED


@pytest.fixture(scope="session")
def shipped():
    """Every shipped instance, built once per session."""
    return {name: build_instance(cfg) for name, cfg in SHIPPED.items()}


def rng(seed: int) -> random.Random:
    return random.Random(seed)


def interior_points(grid, n, seed, margin=0.0):
    """Random points drawn from the grid box, shrunk by `margin` per side."""
    r = rng(seed)
    out = []
    for _ in range(n):
        point = {}
        for var, lo, hi, _count in grid.axes:
            span = hi - lo
            a = lo + margin * span
            b = hi - margin * span
            point[var] = r.uniform(a, b)
        out.append(point)
    return out
