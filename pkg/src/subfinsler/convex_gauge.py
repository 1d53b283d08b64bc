"""Gauges of convex bodies in q, their support functions, and the supporting-functional searches.

Every body has an exact support formula, so the equality tests of the
abnormality criteria are not polluted by approximation error.  Coordinates are
those of a fixed basis of q; :func:`in_frame` rewrites a body for a new basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy.spatial import ConvexHull

DEFAULT_TOL = 1e-8
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """Unit body ``{u : u^T Q u <= 1}``."""

    Q: np.ndarray

    def __post_init__(self):
        Q = np.asarray(self.Q, dtype=float)
        if Q.shape != (3, 3) or not np.allclose(Q, Q.T, atol=1e-12 * max(1.0, np.abs(Q).max())):
            raise ValueError("ellipsoid matrix must be symmetric 3x3")
        Q = (Q + Q.T) / 2
        if np.linalg.eigvalsh(Q)[0] <= 0:
            raise ValueError("ellipsoid matrix must be positive definite")
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "_L", np.linalg.cholesky(Q))

    def gauge(self, u) -> float:
        u = np.asarray(u, dtype=float)
        return float(np.linalg.norm(self._L.T @ u))

    def support(self, xi) -> float:
        # sqrt(xi^T Q^{-1} xi) = |L^{-1} xi|
        return float(np.linalg.norm(np.linalg.solve(self._L, np.asarray(xi, dtype=float))))


@dataclass(frozen=True, eq=False)
class Polytope:
    """Convex hull of finitely many vertices, with 0 strictly inside."""

    vertices: np.ndarray
    _A: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        V = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        if V.shape[1] != 3 or V.shape[0] < 4:
            raise ValueError("polytope needs at least four 3-dimensional vertices")
        hull = ConvexHull(V)
        # facets n.x + c <= 0  ->  (n / -c).x <= 1, requires c < 0
        offs = -hull.equations[:, 3]
        scale = np.abs(V).max()
        if np.any(offs <= 1e-12 * scale):
            raise ValueError("0 must lie in the interior of the polytope")
        object.__setattr__(self, "vertices", V)
        object.__setattr__(self, "_A", hull.equations[:, :3] / offs[:, None])

    def gauge(self, u) -> float:
        return float(max(0.0, np.max(self._A @ np.asarray(u, dtype=float))))

    def support(self, xi) -> float:
        return float(np.max(self.vertices @ np.asarray(xi, dtype=float)))


@dataclass(frozen=True, eq=False)
class PNorm:
    """Weighted p-norm ``(sum |u_i / w_i|^p)^(1/p)``, ``1 <= p <= inf``."""

    p: float
    scale: tuple = (1.0, 1.0, 1.0)

    def __post_init__(self):
        w = np.asarray(self.scale, dtype=float)
        if w.shape != (3,) or np.any(w <= 0):
            raise ValueError("scale must be three positive reals")
        if not self.p >= 1:
            raise ValueError("p must lie in [1, inf]")
        object.__setattr__(self, "scale", w)

    @property
    def dual_exponent(self) -> float:
        if self.p == 1:
            return np.inf
        if np.isinf(self.p):
            return 1.0
        return self.p / (self.p - 1)

    def gauge(self, u) -> float:
        return float(np.linalg.norm(np.asarray(u, dtype=float) / self.scale, ord=self.p))

    def support(self, xi) -> float:
        return float(np.linalg.norm(np.asarray(xi, dtype=float) * self.scale, ord=self.dual_exponent))


@dataclass(frozen=True, eq=False)
class LinearImage:
    """Body expressed in new coordinates ``b`` where old coordinates are ``a = M b``."""

    body: "GaugeBody"
    M: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.M, dtype=float)
        if M.shape != (3, 3) or abs(np.linalg.det(M)) < 1e-14:
            raise ValueError("frame change must be an invertible 3x3 matrix")
        object.__setattr__(self, "M", M)

    def gauge(self, u) -> float:
        return self.body.gauge(self.M @ np.asarray(u, dtype=float))

    def support(self, xi) -> float:
        return self.body.support(np.linalg.solve(self.M.T, np.asarray(xi, dtype=float)))


GaugeBody = Union[Ellipsoid, Polytope, PNorm, LinearImage]


def in_frame(body: GaugeBody, M) -> GaugeBody:
    """Rewrite ``body`` for coordinates ``b`` with old coordinates ``a = M b``."""
    M = np.asarray(M, dtype=float)
    if isinstance(body, Ellipsoid):
        return Ellipsoid(M.T @ body.Q @ M)
    if isinstance(body, Polytope):
        return Polytope(np.linalg.solve(M, body.vertices.T).T)
    if isinstance(body, LinearImage):
        return in_frame(body.body, body.M @ M)
    return LinearImage(body, M)


def scaled(body: GaugeBody, lam: float) -> GaugeBody:
    """The body ``lam * U``."""
    return in_frame(body, np.eye(3) / lam)


def gauge_value(body: GaugeBody, u) -> float:
    """Minkowski functional ``inf{lam > 0 : u / lam in U}``."""
    return body.gauge(u)


def support_value(body: GaugeBody, xi) -> float:
    """``max_{u in U} <xi, u>``."""
    return body.support(xi)


@dataclass(frozen=True)
class SupportSearch:
    found: bool
    k: float
    gap: float


def _phi(body: GaugeBody, s: int):
    return lambda k: support_value(body, (k, s, 0.0))


def _bracket(phi) -> tuple[float, float]:
    # phi is convex and coercive: once phi(R) >= phi(R/2) the minimizer is <= R
    hi = 1.0
    while phi(hi) < phi(hi / 2) and hi < 1e12:
        hi *= 2
    lo = -1.0
    while phi(lo) < phi(lo / 2) and lo > -1e12:
        lo *= 2
    return lo, hi


def golden_min(phi, lo: float, hi: float, width: float = 1e-10) -> tuple[float, float]:
    """Minimize a convex function on ``[lo, hi]`` by golden-section search."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = phi(c), phi(d)
    while b - a > width * max(1.0, abs(a) + abs(b)) / 2:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = phi(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = phi(d)
    k = (a + b) / 2
    best = min((phi(k), k), (fc, c), (fd, d))
    return best[1], best[0]


def exists_supporting_k(body: GaugeBody, s: int, tol: float = DEFAULT_TOL) -> SupportSearch:
    """Whether some ``k`` gives ``F_U(k, s, 0) = 1 / F(0, s, 0)``.

    The left side never drops below the right, so this minimizes it over ``k``.
    """
    target = 1.0 / gauge_value(body, (0.0, s, 0.0))
    phi = _phi(body, s)
    lo, hi = _bracket(phi)
    k, fmin = golden_min(phi, lo, hi)
    if phi(0.0) <= fmin:
        k, fmin = 0.0, phi(0.0)
    gap = fmin - target
    return SupportSearch(gap <= tol * (1 + target), float(k), float(gap))


def fixed_k_support_test(body: GaugeBody, k0: float, s: int, tol: float = DEFAULT_TOL) -> bool:
    """``F_U(k0, s, 0) = 1 / F(0, s, 0)`` up to the relative tolerance."""
    target = 1.0 / gauge_value(body, (0.0, s, 0.0))
    return abs(support_value(body, (k0, s, 0.0)) - target) <= tol * (1 + target)


def fixed_k_gap(body: GaugeBody, k0: float, s: int) -> float:
    return support_value(body, (k0, s, 0.0)) - 1.0 / gauge_value(body, (0.0, s, 0.0))
