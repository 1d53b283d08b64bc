import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from subfinsler.convex_gauge import (
    Ellipsoid, LinearImage, PNorm, Polytope, exists_supporting_k, fixed_k_support_test,
    gauge_value, in_frame, scaled, support_value,
)

CUBE = Polytope([(a, b, c) for a in (-1, 1) for b in (-1, 1) for c in (-1, 1)])
ASYM = Polytope([(1, 0, 0), (-2, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)])
BALL = Ellipsoid(np.eye(3))
TILTED = Ellipsoid([[1, 0, 0], [0, 1, 0.5], [0, 0.5, 1]])

vec3 = arrays(np.float64, 3, elements=st.floats(-5, 5, allow_nan=False))


def random_body(rng):
    kind = rng.integers(4)
    if kind == 0:
        A = rng.standard_normal((3, 3))
        return Ellipsoid(A @ A.T + 0.2 * np.eye(3))
    if kind == 1:
        # random directions plus a small octahedron keep 0 inside
        V = rng.standard_normal((8, 3)) * rng.uniform(0.5, 2, (8, 1))
        return Polytope(np.vstack([V, 0.1 * np.vstack([np.eye(3), -np.eye(3)])]))
    if kind == 2:
        return PNorm(rng.choice([1, 1.5, 2, 3, np.inf]), tuple(rng.uniform(0.3, 3, 3)))
    return LinearImage(PNorm(3), rng.standard_normal((3, 3)) + 2 * np.eye(3))


def test_gauge_examples():
    assert gauge_value(BALL, (0, 3, 4)) == pytest.approx(5, abs=1e-14)
    assert gauge_value(CUBE, (0.5, 0.5, 0.5)) == pytest.approx(0.5, abs=1e-14)
    assert gauge_value(ASYM, (-1, 0, 0)) == pytest.approx(0.5, abs=1e-14)
    assert gauge_value(ASYM, (1, 0, 0)) == pytest.approx(1, abs=1e-14)
    for body in (BALL, CUBE, ASYM, PNorm(1.5)):
        assert gauge_value(body, (0, 0, 0)) == 0


def test_support_examples():
    assert support_value(BALL, (0, 1, 0)) == pytest.approx(1, abs=1e-14)
    assert support_value(CUBE, (1, 1, 0)) == pytest.approx(2, abs=1e-14)
    assert support_value(Ellipsoid(np.diag([1, 4, 1])), (0, 1, 0)) == pytest.approx(0.5, abs=1e-14)


def test_pnorm_closed_forms():
    assert gauge_value(PNorm(np.inf, (1, 2, 1)), (0.5, 1, -0.25)) == pytest.approx(0.5)
    assert support_value(PNorm(1, (1, 2, 1)), (0.5, 1, -0.25)) == pytest.approx(2)
    assert gauge_value(PNorm(2), (0, 3, 4)) == pytest.approx(5)


def test_invalid_bodies():
    with pytest.raises(ValueError):
        Ellipsoid(np.diag([1, -1, 1]))
    with pytest.raises(ValueError):
        Polytope([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)])
    with pytest.raises(ValueError):
        PNorm(0.5)


def test_exists_supporting_k_examples():
    r = exists_supporting_k(BALL, 1)
    assert r.found and abs(r.k) < 1e-8 and abs(r.gap) < 1e-12
    r = exists_supporting_k(TILTED, 1)
    assert not r.found and r.gap == pytest.approx(2 / np.sqrt(3) - 1, abs=1e-9)
    r = exists_supporting_k(ASYM, 1)
    assert r.found and -0.5 - 1e-8 <= r.k <= 1 + 1e-8


def test_fixed_k_examples():
    assert fixed_k_support_test(BALL, 0, 1) and fixed_k_support_test(BALL, 0, -1)
    assert not fixed_k_support_test(BALL, 0.3, 1)
    assert fixed_k_support_test(Ellipsoid(np.diag([1, 4, 1])), 0, 1)


def test_polar_inequality_and_lower_bound(rng):
    for _ in range(500):
        body = random_body(rng)
        U = rng.standard_normal((20, 3))
        X = rng.standard_normal((20, 3))
        for u, xi in zip(U, X):
            assert xi @ u <= support_value(body, xi) * gauge_value(body, u) * (1 + 1e-10) + 1e-12
        for s in (1, -1):
            bound = 1 / gauge_value(body, (0, s, 0))
            for k in rng.standard_normal(4) * 3:
                assert support_value(body, (k, s, 0)) >= bound * (1 - 1e-12)


@given(vec3, st.floats(0.01, 100))
def test_homogeneity(u, lam):
    for body in (BALL, TILTED, CUBE, ASYM, PNorm(3, (1, 2, 0.5))):
        g, h = gauge_value(body, u), support_value(body, u)
        assert gauge_value(body, lam * u) == pytest.approx(lam * g, rel=1e-12, abs=1e-12)
        assert support_value(body, lam * u) == pytest.approx(lam * h, rel=1e-12, abs=1e-12)


def test_ellipsoid_duality(rng):
    A = rng.standard_normal((3, 3))
    Q = A @ A.T + 0.5 * np.eye(3)
    body, polar = Ellipsoid(Q), Ellipsoid(np.linalg.inv(Q))
    for xi in rng.standard_normal((1000, 3)):
        assert abs(support_value(body, xi) - gauge_value(polar, xi)) <= 1e-10 * (1 + np.linalg.norm(xi))


def test_sublinear_spot_check(rng):
    for _ in range(50):
        body = random_body(rng)
        for u, v in rng.standard_normal((20, 2, 3)):
            assert gauge_value(body, u + v) <= (gauge_value(body, u) + gauge_value(body, v)) * (1 + 1e-10)


def test_frame_change_and_scaling(rng):
    M = rng.standard_normal((3, 3)) + 3 * np.eye(3)
    for body in (TILTED, ASYM, PNorm(1.5)):
        moved = in_frame(body, M)
        for b in rng.standard_normal((20, 3)):
            assert gauge_value(moved, b) == pytest.approx(gauge_value(body, M @ b), rel=1e-10)
        big = scaled(body, 2.5)
        for u in rng.standard_normal((20, 3)):
            assert gauge_value(big, u) == pytest.approx(gauge_value(body, u) / 2.5, rel=1e-10)
            assert support_value(big, u) == pytest.approx(2.5 * support_value(body, u), rel=1e-10)


def test_search_matches_grid(rng):
    # the search minimum is never beaten by a dense grid
    for _ in range(40):
        body = random_body(rng)
        for s in (1, -1):
            r = exists_supporting_k(body, s)
            grid = min(support_value(body, (k, s, 0)) for k in np.linspace(-20, 20, 801))
            target = 1 / gauge_value(body, (0, s, 0))
            assert r.gap + target <= grid + 1e-9
