import numpy as np
import pytest

from conftest import E
from subfinsler.catalog import (
    FAMILY_NAMES, REPRESENTATIVES, AlgebraFamily, build_algebra, catalog_k, parameter_grid,
)
from subfinsler.errors import DomainError
from subfinsler.lie_core import admits_generating_hyperplane, check_jacobi


def test_g47_brackets_exactly():
    C = build_algebra("g47")
    expected = {(0, 3): 2 * E[0], (1, 3): E[1], (2, 3): E[1] + E[2], (1, 2): E[0]}
    for i in range(4):
        for j in range(i + 1, 4):
            assert np.array_equal(C.bracket(E[i], E[j]), expected.get((i, j), np.zeros(4)))


@pytest.mark.parametrize("name, params", [
    ("g42a", (0,)), ("g34a+g1", (1,)), ("g34a+g1", (-0.5,)), ("g35a+g1", (-1,)),
    ("g45ab", (0.5, 0.3)), ("g45ab", (-1, 0)), ("g45ab", (0, 0.5)), ("g45ab", (-1.5, 1)),
    ("g46ab", (0, 1)), ("g48a", (1.5,)), ("g48a", (-1.01,)), ("g49a", (-0.1,)),
    ("g41", (1,)), ("nope", ()),
])
def test_domain_errors(name, params):
    with pytest.raises(DomainError):
        build_algebra(name, *params)


@pytest.mark.parametrize("name, params", [
    ("g34a+g1", (0,)), ("g45ab", (-1, 1)), ("g45ab", (-0.5, 1)), ("g45ab", (1, 1)),
    ("g48a", (-1,)), ("g48a", (1,)), ("g49a", (0,)), ("g46ab", (0.1, -3)), ("g42a", (-1,)),
])
def test_domain_boundaries_accepted(name, params):
    assert check_jacobi(build_algebra(name, *params)) == 0.0


@pytest.mark.parametrize("name, params, k", [
    ("g36+g1", (), 5), ("g45ab", (-1, 1), 1), ("4g1", (), 0), ("g34a+g1", (0,), 3),
    ("g34a+g1", (0.5,), 4), ("g42a", (1,), 1), ("g42a", (2,), 3), ("g45ab", (0.5, 0.5), 1),
    ("g45ab", (0.3, 0.7), 4), ("g45ab", (1, 1), 0), ("g48a", (1,), 1), ("g48a", (0,), 2),
    ("g47", (), 2), ("g410", (), 1),
])
def test_catalog_k(name, params, k):
    assert catalog_k(name, *params) == k


def test_hyperplane_criterion_sweep():
    grid = np.round(np.arange(-1.0, 1.01, 0.1), 10)
    for name in FAMILY_NAMES:
        for fam in parameter_grid(name, grid):
            C = build_algebra(fam)
            expected = not (name == "4g1" or (name == "g45ab" and fam.params == (1, 1)))
            assert admits_generating_hyperplane(C) == expected, fam.label
            assert (catalog_k(fam) == 0) == (not expected)


def test_representatives_cover_every_family():
    assert {fam.name for fam in REPRESENTATIVES} == set(FAMILY_NAMES)


def test_labels():
    assert AlgebraFamily("g45ab", (0.5, 1)).label == "g45ab(0.5, 1)"
    assert build_algebra("g41").family == "g41"
