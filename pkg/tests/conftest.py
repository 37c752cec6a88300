import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import graphcalc as gc

settings.register_profile(
    "numeric",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("numeric")


@pytest.fixture
def p2():
    return gc.build_graph([("a", "b", 1.0)])


@pytest.fixture
def p3():
    return gc.build_graph([("a", "b", 1.0), ("b", "c", 1.0)])


@pytest.fixture
def k3():
    return gc.generate("complete", n=3)


@pytest.fixture
def k5():
    return gc.generate("complete", n=5)


@pytest.fixture
def c3():
    return gc.generate("cycle", n=3)


@pytest.fixture
def star5():
    return gc.generate("star", n=5)


def family_corpus(per_family: int = 4, seed: int = 0):
    """A spread of small connected graphs across all generator families,
    with both unit and randomized positive weights."""
    rng = np.random.default_rng(seed)
    sampler = lambda r, m: r.uniform(0.2, 3.0, m)
    graphs = []
    for i in range(per_family):
        w = 1.0 if i % 2 == 0 else None
        kw = {"weight": 1.0} if w else {"weight_sampler": sampler}
        graphs.append((f"path{i}", gc.generate("path", n=3 + 2 * i, seed=int(rng.integers(1e6)), **kw)))
        graphs.append((f"cycle{i}", gc.generate("cycle", n=3 + 2 * i, seed=int(rng.integers(1e6)), **kw)))
        graphs.append((f"complete{i}", gc.generate("complete", n=3 + i, seed=int(rng.integers(1e6)), **kw)))
        graphs.append((f"star{i}", gc.generate("star", n=3 + 2 * i, seed=int(rng.integers(1e6)), **kw)))
        graphs.append((f"grid{i}", gc.generate("grid2d", rows=2 + i % 2, cols=2 + i, seed=int(rng.integers(1e6)), **kw)))
        graphs.append((f"gnp{i}", gc.generate("gnp", n=8 + 3 * i, p=0.4, seed=1000 + i, **kw)))
    return graphs
