import numpy as np
import pytest
from hypothesis import settings

from subfinsler.catalog import FAMILY_NAMES, REPRESENTATIVES, build_algebra, parameter_grid
from subfinsler.lie_core import Subspace, generates

settings.register_profile("ci", max_examples=40, deadline=None)
settings.load_profile("ci")

GRID_VALUES = (-1, -0.5, 0.3, 0.5, 1)
GRID = [fam for name in FAMILY_NAMES for fam in parameter_grid(name, GRID_VALUES)]
# families with at least one generating hyperplane
GENERATING = [fam for fam in REPRESENTATIVES if fam.label not in ("4g1", "g45ab(1, 1)")]


def random_generating_q(C, rng, tries=200):
    for _ in range(tries):
        q = Subspace.span(rng.standard_normal((3, 4)))
        if q.dim == 3 and generates(C, q):
            return q
    raise AssertionError("no generating subspace found")


def span(*rows):
    return Subspace.span(np.array(rows, dtype=float))


E = np.eye(4)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def algebras():
    return {fam.label: build_algebra(fam) for fam in REPRESENTATIVES}
