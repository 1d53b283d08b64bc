"""Strong versus nonstrong abnormality of the extremals ``exp(s t e2 / F(s e2))``.

Three layers: the seminorm-free verdicts (q1 central, or q1 inside ``[q1, q]``),
the seminorm-dependent support-function tests, and the sub-Riemannian
criterion, which is checked purely algebraically.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .adapted_basis import (
    Unavailable, UnavailableReason, _adapted, commutator_basis, distinguished_line,
    e2_invariants, g481_basis, lemma1_basis, Convention,
)
from .convex_gauge import (
    DEFAULT_TOL, GaugeBody, exists_supporting_k, fixed_k_gap, gauge_value, in_frame,
)
from .errors import InconsistentCase
from .lie_core import StructureConstants, Subspace, ad_image

SIGNS = (1, -1)
# |C^1_23| (relative) at or below ZERO_TOL counts as zero; up to AMBIGUOUS_TOL it is undecidable
ZERO_TOL = 1e-9
AMBIGUOUS_TOL = 1e-7


class FreeVerdict(str, Enum):
    NONSTRONG_ALL = "NonstrongForAllSeminorms"
    STRONG_ALL = "StrongForAllSeminorms"
    DEPENDENT = "SeminormDependent"


class Condition(str, Enum):
    """Which test decided the verdict."""

    CENTRAL = "q1-central"
    SELF_BRACKET = "q1-in-[q1,q]"
    EXISTS_K = "exists-k"
    FIXED_K = "fixed-k"
    SCALAR_K0 = "scalar-k0"
    C1_ZERO_C2_NONZERO = "c1-zero-c2-nonzero"


@dataclass(frozen=True)
class SideResult:
    s: int
    nonstrong: bool
    witness_k: float | None
    gap: float | None


@dataclass(frozen=True, eq=False)
class AbnormalityVerdict:
    kind: FreeVerdict
    condition: Condition
    sides: dict
    extremal_directions: dict
    frame: np.ndarray
    c23: tuple | None = None
    diagnostic: str = ""

    def nonstrong(self, s: int) -> bool:
        return self.sides[s].nonstrong

    @property
    def summary(self) -> str:
        flags = [self.sides[s].nonstrong for s in SIGNS]
        if all(flags):
            return "NONSTRONG"
        if not any(flags):
            return "STRONG"
        return "MIXED"


def seminorm_free_verdict(C: StructureConstants, q: Subspace) -> FreeVerdict:
    """Verdicts that hold for every seminorm on q."""
    inv = e2_invariants(C, q)
    # [e2, q] = 0 makes e2 central, since q generates
    if inv.s_dim == 0:
        return FreeVerdict.NONSTRONG_ALL
    if inv.e2_in_s:
        return FreeVerdict.STRONG_ALL
    return FreeVerdict.DEPENDENT


def canonical_commutator_basis(C: StructureConstants, q: Subspace, seed: int = 0,
                               shift: bool | None = None):
    """Commutator basis shifted along e2 so that ``C^2_23 = 0`` whenever ``C^1_23 != 0``.

    ``e1 -> e1 + k e2`` leaves ``e3 = [e1, e2]`` unchanged and keeps the normalized form.
    """
    b = commutator_basis(C, q, seed)
    if not b:
        return b
    c1, c2 = b.coeff(2, 3, 1), b.coeff(2, 3, 2)
    if shift is None:
        shift = not e2_invariants(C, q).c1_zero
    if not shift:
        return b
    e1 = b.e1 + (c2 / c1) * b.e2
    e3 = C.bracket(e1, b.e2)
    return _adapted(C, e1, b.e2, e3, C.bracket(e1, e3), Convention.COMMUTATOR, b.branch)


def frame_change(frame, adapted_q_frame) -> np.ndarray:
    """M with ``frame @ M = adapted_q_frame`` (both 4x3 bases of the same q)."""
    frame = np.asarray(frame, dtype=float)
    M, *_ = np.linalg.lstsq(frame, adapted_q_frame, rcond=None)
    if np.linalg.norm(frame @ M - adapted_q_frame) > 1e-8 * (1 + np.abs(adapted_q_frame).max()):
        raise ValueError("body frame does not span q")
    return M


def _directions(body: GaugeBody, frame: np.ndarray) -> dict:
    e2 = frame[:, 1]
    return {s: s * e2 / gauge_value(body, (0.0, s, 0.0)) for s in SIGNS}


def theorem1_sides(c23, body: GaugeBody, tol: float = DEFAULT_TOL, c1_zero: bool | None = None):
    """Support-function tests from ``(C^1_23, C^2_23, C^3_23)`` in a commutator basis.

    Returns ``(condition, sides, diagnostic)``; ``body`` is in that basis.
    ``c1_zero`` overrides the threshold test on ``C^1_23`` with a basis-free decision.
    """
    c1, c2, _ = c23
    scale = 1.0 + sum(abs(x) for x in c23)
    sides = {}
    if c1_zero is None:
        if ZERO_TOL * scale < abs(c1) <= AMBIGUOUS_TOL * scale:
            raise InconsistentCase(f"C^1_23 = {c1:.3e} is too close to zero to choose a criterion")
        c1_zero = abs(c1) <= ZERO_TOL * scale
    if c1_zero:
        if abs(c2) <= AMBIGUOUS_TOL * scale:
            for s in SIGNS:
                r = exists_supporting_k(body, s, tol)
                sides[s] = SideResult(s, r.found, r.k, r.gap)
            return Condition.EXISTS_K, sides, ""
        # psi_1 would be unbounded: no normal covector exists
        for s in SIGNS:
            sides[s] = SideResult(s, False, None, None)
        return (Condition.C1_ZERO_C2_NONZERO, sides,
                "C^1_23 = 0 with C^2_23 != 0 forces strong abnormality")
    for s in SIGNS:
        k0 = -c2 * s / c1
        gap = fixed_k_gap(body, k0, s)
        target = 1.0 / gauge_value(body, (0.0, s, 0.0))
        sides[s] = SideResult(s, abs(gap) <= tol * (1 + target), k0, gap)
    return Condition.FIXED_K, sides, ""


def classify_abnormal(C: StructureConstants, q: Subspace, body: GaugeBody,
                      tol: float = DEFAULT_TOL, frame=None, seed: int = 0) -> AbnormalityVerdict:
    """Decide strong / nonstrong abnormality for s = +1 and s = -1 separately.

    ``body`` lives in the adapted frame ``(e1, e2, e3)`` built here, unless
    ``frame`` (4x3, columns spanning q) says which basis of q it is written in.
    """
    kind = seminorm_free_verdict(C, q)

    if kind is not FreeVerdict.DEPENDENT:
        basis = lemma1_basis(C, q, seed)
        # keep the reported e2 on the distinguished line with its canonical sign
        A = basis.q_frame
        B = body if frame is None else in_frame(body, frame_change(frame, A))
        ok = kind is FreeVerdict.NONSTRONG_ALL
        cond = Condition.CENTRAL if ok else Condition.SELF_BRACKET
        sides = {s: SideResult(s, ok, None, None) for s in SIGNS}
        return AbnormalityVerdict(kind, cond, sides, _directions(B, A), A)

    inv = e2_invariants(C, q)
    basis = canonical_commutator_basis(C, q, seed, shift=not inv.c1_zero)
    if isinstance(basis, Unavailable):
        if basis.reason is not UnavailableReason.G481:
            raise InconsistentCase(f"dependent case without a commutator basis: {basis.reason.value}")
        g = g481_basis(C, q)
        A = g.q_frame
        B = body if frame is None else in_frame(body, frame_change(frame, A))
        sides = {}
        for s in SIGNS:
            gap = fixed_k_gap(B, 0.0, s)
            target = 1.0 / gauge_value(B, (0.0, s, 0.0))
            sides[s] = SideResult(s, abs(gap) <= tol * (1 + target), 0.0, gap)
        return AbnormalityVerdict(kind, Condition.SCALAR_K0, sides, _directions(B, A), A)

    A = basis.q_frame
    B = body if frame is None else in_frame(body, frame_change(frame, A))
    c23 = tuple(basis.coeff(2, 3, k) for k in (1, 2, 3))
    cond, sides, diag = theorem1_sides(c23, B, tol, c1_zero=inv.c1_zero)
    return AbnormalityVerdict(kind, cond, sides, _directions(B, A), A, c23, diag)


def subriemannian_verdict(C: StructureConstants, q: Subspace, Q, frame=None,
                          tol: float = 1e-8) -> bool:
    """Nonstrong iff ``[e2, q]`` is orthogonal to e2 for the inner product with Gram matrix Q.

    Q is written in the adapted frame of :func:`classify_abnormal`, or in
    ``frame`` when given.  Only linear algebra is used, no support functions.
    """
    Q = np.asarray(Q, dtype=float)
    if frame is None:
        frame = adapted_frame(C, q)
    frame = np.asarray(frame, dtype=float)
    e2 = distinguished_line(C, q)
    s = ad_image(C, e2, q)
    if s.dim == 0:
        return True

    def coords(v):
        return np.linalg.lstsq(frame, v, rcond=None)[0]

    a = coords(e2)
    na = np.sqrt(a @ Q @ a)
    for v in s.vectors:
        b = coords(v)
        if abs(a @ Q @ b) > tol * na * np.sqrt(b @ Q @ b):
            return False
    return True


def adapted_frame(C: StructureConstants, q: Subspace, seed: int = 0) -> np.ndarray:
    """The 4x3 frame in which :func:`classify_abnormal` reads a body by default."""
    kind = seminorm_free_verdict(C, q)
    if kind is not FreeVerdict.DEPENDENT:
        return lemma1_basis(C, q, seed).q_frame
    b = canonical_commutator_basis(C, q, seed)
    if isinstance(b, Unavailable):
        return g481_basis(C, q).q_frame
    return b.q_frame
