"""Adjoint covector system along piecewise-constant controls, and its closed-form solutions.

In an adapted frame the covector components ``psi_i = psi(e_i)`` obey
``psi_i' = psi([u, e_i])``, i.e. ``psi' = ad(u)^T psi`` with ``u = (u1, u2, u3, 0)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .convex_gauge import GaugeBody, gauge_value
from .errors import BranchError, DomainError, StepTooLarge
from .lie_core import StructureConstants

LOCAL_ERROR_TOL = 1e-6
DEFAULT_STEP = 1e-3
B_ZERO_TOL = 1e-12

BRANCHES = ("exponential", "resonant", "oscillatory", "c1-zero-exponential", "c1-zero-polynomial")


@dataclass(frozen=True, eq=False)
class CovectorState:
    t: float
    psi: np.ndarray


@dataclass(frozen=True, eq=False)
class ControlLaw:
    """Piecewise-constant control: ``values[j]`` on ``[breaks[j-1], breaks[j])``.

    ``breaks`` has one entry fewer than ``values``; the last value holds forever.
    """

    values: tuple
    breaks: tuple = ()

    def __post_init__(self):
        vals = tuple(np.asarray(v, dtype=float) for v in self.values)
        if not vals or any(v.shape != (3,) for v in vals):
            raise DomainError("control values must be 3-vectors")
        if len(self.breaks) != len(vals) - 1 or list(self.breaks) != sorted(self.breaks):
            raise DomainError("breaks must be increasing, one fewer than values")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "breaks", tuple(float(b) for b in self.breaks))

    @classmethod
    def constant(cls, u) -> "ControlLaw":
        return cls((u,))

    @classmethod
    def abnormal(cls, body: GaugeBody, s: int) -> "ControlLaw":
        """``u = (0, s / F(s e2), 0)`` with ``body`` in the adapted coordinates."""
        if s not in (1, -1):
            raise DomainError("s must be +1 or -1")
        return cls.constant((0.0, s / gauge_value(body, (0.0, s, 0.0)), 0.0))

    def __call__(self, t: float) -> np.ndarray:
        return self.values[int(np.searchsorted(self.breaks, t, side="right"))]

    def check_unit(self, body: GaugeBody, tol: float = 1e-9) -> bool:
        return all(abs(gauge_value(body, v) - 1.0) <= tol for v in self.values)


def adjoint_generator(C: StructureConstants, u) -> np.ndarray:
    """Matrix A with ``psi' = A psi`` for the constant control u (3 or 4 components)."""
    u = np.asarray(u, dtype=float)
    x = np.zeros(4)
    x[: len(u)] = u
    return C.ad(x).T


def _rk4_matrix(A: np.ndarray, h: float) -> np.ndarray:
    # one classic RK4 step of a linear autonomous system, written as a matrix
    hA = h * A
    I = np.eye(len(A))
    return I + hA @ (I + hA @ (I / 2 + hA @ (I / 6 + hA / 24)))


def integrate_adjoint(C_adapted: StructureConstants, law: ControlLaw, psi0, t_end: float,
                      h: float = DEFAULT_STEP) -> list[CovectorState]:
    """Fixed-step RK4 on ``[0, t_end]``; steps end exactly on control switches and ``t_end``.

    Each step is also taken as two half steps; a difference above
    ``15 * LOCAL_ERROR_TOL`` (relative to ``max(1, |psi|)``) raises :class:`StepTooLarge`.
    """
    if not h > 0:
        raise DomainError("step must be positive")
    if t_end < 0:
        raise DomainError("t_end must be nonnegative")
    psi = np.asarray(psi0, dtype=float).copy()
    if psi.shape != (4,):
        raise DomainError("psi0 must have four components")
    traj = [CovectorState(0.0, psi.copy())]
    stops = [b for b in law.breaks if 0 < b < t_end] + [t_end]
    t = 0.0
    cache = {}
    for stop in stops:
        A = adjoint_generator(C_adapted, law(t))
        while t < stop - 1e-12 * max(1.0, stop):
            dt = min(h, stop - t)
            key = (id(A), dt)
            if key not in cache:
                half = _rk4_matrix(A, dt / 2)
                cache = {key: (_rk4_matrix(A, dt), half @ half)}
            full, twice = cache[key]
            coarse, fine = full @ psi, twice @ psi
            err = np.abs(coarse - fine).max() / 15 / max(1.0, np.abs(fine).max())
            if err > LOCAL_ERROR_TOL:
                raise StepTooLarge(f"local error {err:.2e} at t = {t:.6g} exceeds {LOCAL_ERROR_TOL}")
            psi = fine
            t = stop if stop - t <= h else t + dt
            traj.append(CovectorState(t, psi.copy()))
    return traj


def c24_4(C_adapted: StructureConstants) -> float:
    """``C^4_24 = C^3_23 - C^1_12`` on an adapted basis."""
    c = C_adapted.c
    return float(c[1, 2, 2] - c[0, 1, 0])


def psi4_closed_form(C_adapted: StructureConstants, u2: float, s: int, phi4: float, t):
    """``phi4 * exp(C^4_24 u2 t)`` along the abnormal control ``u2 = s / F(s e2)``."""
    if s not in (1, -1) or u2 == 0 or np.sign(u2) != s:
        raise DomainError("u2 must be nonzero with the sign of s")
    return phi4 * np.exp(c24_4(C_adapted) * u2 * np.asarray(t, dtype=float))


def psi1_branch(c23, c33_12: float = 1.0) -> str:
    """Which closed form of the second-order equation for psi_1 applies."""
    c1, _, c3 = (c33_12 * c23[0], c23[1], c23[2])
    if c1 == 0:
        return "c1-zero-exponential" if c3 != 0 else "c1-zero-polynomial"
    B = c3**2 - 4 * c1
    if abs(B) <= B_ZERO_TOL * (1 + c3**2):
        return "resonant"
    return "exponential" if B > 0 else "oscillatory"


def psi1_solution(c23, c33_12: float, u2: float, A1: float, A2: float, t, branch: str | None = None):
    """General solution of ``psi1'' - u2 C3 psi1' + u2^2 C1 psi1 + u2 C2 = 0``.

    ``(C1, C2, C3) = c23``; ``c33_12`` is the e3-coefficient of ``[e1, e2]``
    (1 in a commutator basis) and multiplies C1 and C2.  ``branch`` forces a
    closed form and raises :class:`BranchError` if it disagrees with the data.
    """
    c1, c2, c3 = (c33_12 * float(c23[0]), c33_12 * float(c23[1]), float(c23[2]))
    found = psi1_branch((c1, c2, c3))
    if branch is not None and branch != found:
        raise BranchError(f"data select the {found} branch, not {branch}")
    t = np.asarray(t, dtype=float)
    if found == "c1-zero-exponential":
        return A2 * np.exp(c3 * u2 * t) + c2 * t / c3 + A1
    if found == "c1-zero-polynomial":
        return -0.5 * c2 * u2 * t**2 + A2 * t + A1
    shift = -c2 / (c1 * u2)
    B = c3**2 - 4 * c1
    if found == "exponential":
        lam1 = u2 * (c3 + np.sqrt(B)) / 2
        lam2 = u2 * (c3 - np.sqrt(B)) / 2
        return A1 * np.exp(lam1 * t) + A2 * np.exp(lam2 * t) + shift
    if found == "resonant":
        return (A1 * t + A2) * np.exp(c3 * u2 * t / 2) + shift
    w = u2 * np.sqrt(-B) / 2
    return np.exp(c3 * u2 * t / 2) * (A1 * np.cos(w * t) + A2 * np.sin(w * t)) + shift


def psi1_range(c23, u2: float, A1: float, A2: float) -> tuple[float, float]:
    """Range of the bounded oscillatory solution (``C1 > 0``, ``C3 = 0``)."""
    c1, c2, _ = c23
    r = np.hypot(A1, A2)
    shift = -c2 / (c1 * u2)
    return shift - r, shift + r


def _expm_series(A: np.ndarray, terms: int) -> np.ndarray:
    out = np.eye(len(A))
    term = np.eye(len(A))
    for n in range(1, terms + 1):
        term = term @ A / n
        out = out + term
    return out


def adjoint_flow(C: StructureConstants, X, t: float) -> np.ndarray:
    """``exp(t ad X)`` by scaling and squaring a truncated Taylor series.

    When ``ad X`` is nilpotent the series is summed exactly, without scaling.
    """
    A = t * C.ad(np.asarray(X, dtype=float))
    n = len(A)
    if not np.any(np.linalg.matrix_power(A, n)):
        return _expm_series(A, n - 1)
    norm = np.abs(A).sum(axis=0).max()
    k = max(0, int(np.ceil(np.log2(norm / 0.25)))) if norm > 0 else 0
    E = _expm_series(A / 2**k, 16)
    for _ in range(k):
        E = E @ E
    return E
