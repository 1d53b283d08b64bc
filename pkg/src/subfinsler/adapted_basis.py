"""Bases of the algebra adapted to a generating three-dimensional subspace.

Two conventions are built here.  In the normalized convention ``e4 = [e1, e3]``
and the constants satisfy ``C^1_13 = C^2_13 = C^3_13 = 0``, ``C^4_13 = 1``,
``C^4_12 = C^4_23 = 0``.  The commutator convention additionally has
``e3 = [e1, e2]``; it is built by the case analysis on ``s = [e2, q]`` and is
unavailable when ``e2`` is central or when ``ad(e2)`` is a nonzero scalar on a
two-dimensional ``s`` (the ``g_{4,8}^1`` situation).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import DegenerateIntersection, NotGenerating
from .lie_core import (
    CONTAIN_TOL, StructureConstants, Subspace, ad_image, generates, normalize_direction, null_space,
)

EQUAL_EIG_TOL = 1e-8
_N_RANDOM_PAIRS = 32


class Convention(str, Enum):
    LEMMA1 = "lemma1"
    COMMUTATOR = "commutator"


@dataclass(frozen=True, eq=False)
class AdaptedBasis:
    """Basis ``(e1, e2, e3, e4)`` in ambient coordinates plus the constants in that basis."""

    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray
    e4: np.ndarray
    convention: Convention
    adapted_c: StructureConstants
    branch: str = ""

    @property
    def matrix(self) -> np.ndarray:
        """4x4 matrix with columns e1..e4."""
        return np.column_stack([self.e1, self.e2, self.e3, self.e4])

    @property
    def q_frame(self) -> np.ndarray:
        """4x3 matrix with columns e1, e2, e3 (a basis of q)."""
        return np.column_stack([self.e1, self.e2, self.e3])

    def coeff(self, i: int, j: int, k: int) -> float:
        """``C^k_{ij}`` with 1-based indices."""
        return float(self.adapted_c.c[i - 1, j - 1, k - 1])


class UnavailableReason(str, Enum):
    CENTRAL = "Central"
    G481 = "G481"
    SPANNED_BY_E2 = "SpannedByE2"


@dataclass(frozen=True)
class Unavailable:
    reason: UnavailableReason
    detail: str = ""

    def __bool__(self) -> bool:
        return False


def _require_generating(C: StructureConstants, q: Subspace) -> None:
    if q.dim != 3:
        raise NotGenerating(f"expected a 3-dimensional subspace, got dim {q.dim}")
    if not generates(C, q):
        raise NotGenerating("subspace does not generate the algebra")


def distinguished_line(C: StructureConstants, q: Subspace) -> np.ndarray:
    """Unit vector spanning ``q ∩ N(q)`` (first nonzero coordinate positive).

    With ``n`` normal to q and ``g_ij = n . [b_i, b_j]`` on an orthonormal basis
    of q, ``x = sum a_i b_i`` normalizes q iff ``G a = 0``.  G is antisymmetric
    3x3, so its kernel is spanned by ``(g_23, -g_13, g_12)``, which vanishes
    exactly when q is a subalgebra.
    """
    if q.dim != 3:
        raise NotGenerating(f"expected a 3-dimensional subspace, got dim {q.dim}")
    B = q.basis
    n = q.normal
    brs = [C.bracket(B[:, i], B[:, j]) for i, j in ((1, 2), (0, 2), (0, 1))]
    if all(abs(n @ b) <= CONTAIN_TOL * max(np.linalg.norm(b), C.scale) for b in brs):
        raise NotGenerating("subspace does not generate the algebra")
    a = np.array([n @ brs[0], -(n @ brs[1]), n @ brs[2]])
    return normalize_direction(B @ (a / np.linalg.norm(a)))


def _adapted(C: StructureConstants, e1, e2, e3, e4, conv: Convention, branch: str) -> AdaptedBasis:
    P = np.column_stack([e1, e2, e3, e4])
    return AdaptedBasis(np.asarray(e1), np.asarray(e2), np.asarray(e3), np.asarray(e4),
                        conv, C.change_basis(P), branch)


def _pair_candidates(q: Subspace, rng: np.random.Generator):
    b = q.vectors
    for i, j in combinations(range(3), 2):
        yield b[j], b[i]
        yield b[i], b[j]
    for _ in range(_N_RANDOM_PAIRS):
        a, c = rng.standard_normal(3), rng.standard_normal(3)
        yield q.basis @ a, q.basis @ c


def lemma1_basis(C: StructureConstants, q: Subspace, seed: int = 0) -> AdaptedBasis:
    """normalized basis: pick e1, e3 in q with [e1, e3] outside q, then correct e2.

    With ``e4 = [e1, e3]`` and any e2 completing q, replacing
    ``e2 <- e2 - C^4_23 e1 - C^4_12 e3`` moves e2 into ``q ∩ N(q)``.
    """
    _require_generating(C, q)
    rng = np.random.default_rng(seed)
    for e1, e3 in _pair_candidates(q, rng):
        e4 = C.bracket(e1, e3)
        if q.residual(e4) <= 1e-6 * max(1.0, np.linalg.norm(e4)):
            continue
        # the basis vector of q farthest from span(e1, e3)
        B = Subspace.span([e1, e3])
        e2 = max(q.vectors, key=B.residual)
        P = np.column_stack([e1, e2, e3, e4])
        if not _well_conditioned(P):
            continue
        coords = np.linalg.solve(P, np.column_stack([C.bracket(e1, e2), C.bracket(e2, e3)]))
        c412, c423 = coords[3]
        e2 = normalize_direction(e2 - c423 * e1 - c412 * e3)
        # any complement of e2 in q works; an orthonormal one keeps the basis well conditioned
        e1 = e1 - (e1 @ e2) * e2
        e1 = e1 / np.linalg.norm(e1)
        e3 = e3 - (e3 @ e2) * e2 - (e3 @ e1) * e1
        e3 = e3 / np.linalg.norm(e3)
        e4 = C.bracket(e1, e3)
        return _adapted(C, e1, e2, e3, e4, Convention.LEMMA1, "lemma1")
    raise NotGenerating("no pair e1, e3 in q with [e1, e3] outside q was found")


def _well_conditioned(P: np.ndarray, rcond: float = 1e-12) -> bool:
    sv = np.linalg.svd(P, compute_uv=False)
    return sv[-1] > rcond * sv[0]


def _real_eigvecs_2x2(M: np.ndarray):
    """Eigen-decomposition of a real 2x2 matrix classified by its discriminant."""
    tr = M[0, 0] + M[1, 1]
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    disc = tr * tr - 4 * det
    scale = tr * tr + float(np.sum(M * M))
    if abs(disc) <= EQUAL_EIG_TOL ** 2 * 1e4 * scale:
        return "equal", tr / 2, None
    if disc < 0:
        return "complex", None, None
    w, V = np.linalg.eig(M)
    return "distinct", w.real, V.real


def commutator_basis(C: StructureConstants, q: Subspace, seed: int = 0):
    """Basis ``(e1, e2, e3 = [e1, e2])`` of q in normalized form, or :class:`Unavailable`.

    e2 spans ``q ∩ N(q)``; e1 is chosen by the spectrum of ``ad(e2)`` on ``s = [e2, q]``.
    """
    _require_generating(C, q)
    e2 = distinguished_line(C, q)
    s = ad_image(C, e2, q)
    if s.dim == 0:
        return Unavailable(UnavailableReason.CENTRAL, "e2 is central: [e2, q] = 0")
    if s.dim == 1 and s.contains(e2):
        return Unavailable(UnavailableReason.SPANNED_BY_E2, "[e2, q] = <e2>")
    # unit operator norm of ad(e2) on q; the sign of e2 is kept
    e2 = e2 / e2_invariants(C, q, e2).norm
    T = C.ad(e2)

    if s.contains(e2):
        e1, branch = _generic_e1(C, q, e2, seed), "e2-in-s"
    elif s.dim == 1:
        f = s.basis[:, 0]
        alpha = float(f @ T @ f)
        if abs(alpha) <= 1e-9 * (1 + np.abs(T).max()):
            # ad(e2) nilpotent on q: any e1 outside its kernel
            e1, branch = _generic_e1(C, q, e2, seed), "dim1-nilpotent"
        else:
            # e in ker ad(e2)|q not parallel to e2, f eigenvector with eigenvalue alpha
            Tq = q.basis.T @ T @ q.basis
            ker = q.basis @ null_space(Tq, rank_tol=1e-7)
            u = e2 / np.linalg.norm(e2)
            e = max((v - (v @ u) * u for v in ker.T), key=np.linalg.norm)
            e1, branch = -(e / np.linalg.norm(e) + f), "dim1-eigen"
    else:
        M = s.basis.T @ T @ s.basis
        kind, w, V = _real_eigvecs_2x2(M)
        if kind == "complex":
            # no real eigenvector: every e1 outside <e2> works, take the best conditioned
            e1, branch = _generic_e1(C, q, e2, seed), "dim2-complex"
        elif kind == "distinct":
            e = s.basis @ V[:, 0]
            f = s.basis @ V[:, 1]
            e1, branch = -(e + f), "dim2-real-distinct"
        else:
            N = M - w * np.eye(2)
            if np.abs(N).max() <= 1e-7 * (1 + abs(w)):
                return Unavailable(UnavailableReason.G481,
                                   "ad(e2) acts as a nonzero scalar on the 2-dim s")
            # Jordan block: [e2, e] = alpha e + f, [e2, f] = alpha f
            e_s = np.linalg.svd(N)[2][0]
            e, f = s.basis @ e_s, s.basis @ (N @ e_s)
            e1, branch = f - e, "dim2-jordan"

    e1 = e1 / np.linalg.norm(e1)
    e3 = C.bracket(e1, e2)
    e4 = C.bracket(e1, e3)
    if not _well_conditioned(np.column_stack([e1, e2, e3, e4]), 1e-8):
        # near a degenerate stratum the eigenvector choice shrinks e3; any e1 is valid
        e1, branch = _generic_e1(C, q, e2, seed), branch + "-generic"
        e3 = C.bracket(e1, e2)
        e4 = C.bracket(e1, e3)
    if not _well_conditioned(np.column_stack([e1, e2, e3, e4])):
        raise DegenerateIntersection(f"branch {branch} produced a singular basis")
    return _adapted(C, e1, e2, e3, e4, Convention.COMMUTATOR, branch)


@dataclass(frozen=True)
class E2Invariants:
    """Similarity invariants of ``T = ad(e2)|q`` for the distinguished e2.

    T kills e2, so its characteristic polynomial is ``x (x^2 - c3 x + c1)``
    where ``c1, c3`` are the determinant and trace of the map induced on
    ``q / <e2>``; in a commutator basis they are ``C^1_23`` and ``C^3_23``
    (for unit e2 here; rescaling e2 by t multiplies them by ``t^2`` and ``t``).
    ``c1 != 0`` exactly when ``[e2, q] + <e2> = q``.

    Zero tests are made in floating point when the relevant ratios are clearly
    small or clearly not; otherwise they are redone in exact rational
    arithmetic on the given basis of q (``exact`` is then True).
    """

    c1: float
    c3: float
    s_dim: int
    e2_in_s: bool
    c1_zero: bool
    c3_zero: bool
    disc_sign: int
    scalar_on_s: bool
    norm: float
    exact: bool = False

    @property
    def rank(self) -> int:
        """Rank of the induced map on ``q / <e2>``."""
        return self.s_dim - int(self.e2_in_s)

    @property
    def nilpotent(self) -> bool:
        return self.c1_zero and self.c3_zero


# ratios at most ZERO_BAND[0] are zero, at least ZERO_BAND[1] nonzero, in between undecided
ZERO_BAND = (1e-12, 1e-6)


def _side(r: float):
    if r <= ZERO_BAND[0]:
        return False
    if r >= ZERO_BAND[1]:
        return True
    return None


def _float_decisions(Tq: np.ndarray, a: np.ndarray, norm: float, scale: float):
    nonzero = _side(norm / scale)
    if nonzero is None:
        return None
    if not nonzero:
        return 0, False, True, True, 0, False
    sides = [_side(x / norm) for x in np.linalg.svd(Tq, compute_uv=False)]
    P = np.linalg.qr(a[:, None], mode="complete")[0][:, 1:]
    sides_bar = [_side(x / norm) for x in np.linalg.svd(P.T @ Tq @ P, compute_uv=False)]
    c3_side = _side(abs(np.trace(Tq)) / norm)
    if None in sides or None in sides_bar or c3_side is None:
        return None
    s_dim, rank = sum(sides), sum(sides_bar)
    if s_dim - rank not in (0, 1):
        return None
    c3 = float(np.trace(Tq))
    if rank < 2:
        return s_dim, s_dim > rank, True, not c3_side, int(c3_side), False
    c1 = float(np.linalg.det(P.T @ Tq @ P))
    disc = c3**2 - 4 * c1
    d_side = _side(abs(disc) / norm**2)
    if d_side is None:
        return None
    scalar = False
    if not d_side:
        sc = _side(np.abs((Tq - c3 / 2 * np.eye(3)) @ Tq).max() / norm**2)
        if sc is None:
            return None
        scalar = not sc
    return s_dim, False, False, not c3_side, int(np.sign(disc)) if d_side else 0, scalar


def _frac_rank(rows: list) -> int:
    M = [list(r) for r in rows]
    rank, ncols = 0, len(M[0]) if M else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(M)) if M[r][col] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for r in range(len(M)):
            if r != rank and M[r][col] != 0:
                f = M[r][col] / M[rank][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[rank])]
        rank += 1
    return rank


def _frac_det3(M) -> Fraction:
    return (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
            - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
            + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))


def _exact_decisions(C: StructureConstants, q: Subspace):
    """The same decisions in rational arithmetic on the float basis of q."""
    c = C.exact_tensor
    B = [[Fraction(float(v)) for v in q.basis[:, i]] for i in range(3)]

    def br(x, y):
        return [sum(x[i] * y[j] * c[i][j][k] for i in range(4) if x[i] for j in range(4) if y[j])
                for k in range(4)]

    # normal covector by cofactors, then the kernel of the antisymmetric pairing
    n = [(-1) ** k * _frac_det3([[b[m] for m in range(4) if m != k] for b in B]) for k in range(4)]
    g = {(i, j): sum(x * y for x, y in zip(n, br(B[i], B[j]))) for i, j in ((0, 1), (0, 2), (1, 2))}
    a = [g[1, 2], -g[0, 2], g[0, 1]]
    if not any(a):
        raise NotGenerating("subspace does not generate the algebra")
    e2 = [sum(a[i] * B[i][k] for i in range(3)) for k in range(4)]
    cols = next(cs for cs in combinations(range(4), 3)
                if _frac_det3([[b[m] for m in cs] for b in B]) != 0)
    Bp = [[b[m] for m in cols] for b in B]
    D = _frac_det3(Bp)

    def coords(y):
        # Cramer's rule for sum_i t_i B_i = y on the pivot coordinates
        yp = [y[m] for m in cols]
        out = []
        for i in range(3):
            Mi = [row[:] for row in Bp]
            Mi[i] = yp
            out.append(_frac_det3(Mi) / D)
        return out

    cols_T = [coords(br(e2, B[j])) for j in range(3)]
    T = [[cols_T[j][i] for j in range(3)] for i in range(3)]
    s_dim = _frac_rank(cols_T)
    e2_in_s = _frac_rank(cols_T + [a]) == s_dim
    c3 = T[0][0] + T[1][1] + T[2][2]
    c1 = sum(T[i][i] * T[j][j] - T[i][j] * T[j][i] for i, j in combinations(range(3), 2))
    disc = c3 * c3 - 4 * c1
    scalar = False
    if s_dim - int(e2_in_s) == 2 and disc == 0:
        N = [[T[i][j] - (c3 / 2 if i == j else 0) for j in range(3)] for i in range(3)]
        scalar = all(sum(N[i][k] * T[k][j] for k in range(3)) == 0 for i in range(3) for j in range(3))
    sign = (disc > 0) - (disc < 0)
    return s_dim, e2_in_s, c1 == 0, c3 == 0, sign, scalar


def e2_invariants(C: StructureConstants, q: Subspace, e2: np.ndarray | None = None) -> E2Invariants:
    if e2 is None:
        e2 = distinguished_line(C, q)
    u = e2 / np.linalg.norm(e2)
    B = q.basis
    Tq = B.T @ C.ad(u) @ B
    a = B.T @ u
    norm = float(np.linalg.norm(Tq, 2))
    c3 = float(np.trace(Tq))
    c1 = float(sum(Tq[i, i] * Tq[j, j] - Tq[i, j] * Tq[j, i] for i, j in combinations(range(3), 2)))
    dec = _float_decisions(Tq, a, norm, 1.0 + C.scale)
    exact = dec is None
    if exact:
        dec = _exact_decisions(C, q)
    return E2Invariants(c1, c3, *dec, norm=norm, exact=exact)


def _generic_e1(C: StructureConstants, q: Subspace, e2: np.ndarray, seed: int) -> np.ndarray:
    """e1 in q making (e1, e2, [e1, e2], [e1, [e1, e2]]) a basis, best conditioned of a few tries."""
    rng = np.random.default_rng(seed)
    cands = list(q.vectors) + [q.basis @ rng.standard_normal(3) for _ in range(_N_RANDOM_PAIRS)]
    best, best_rc = None, 0.0
    for e1 in cands:
        e1 = e1 / np.linalg.norm(e1)
        e3 = C.bracket(e1, e2)
        sv = np.linalg.svd(np.column_stack([e1, e2, e3, C.bracket(e1, e3)]), compute_uv=False)
        rc = sv[-1] / sv[0]
        if rc > best_rc:
            best, best_rc = e1, rc
    if best is None or best_rc <= 1e-12:
        raise DegenerateIntersection("no e1 with (e1, e2, [e1, e2]) a normalized basis was found")
    return best


def derived_constants_check(basis: AdaptedBasis) -> float:
    """Max residual of the four identities forced by Jacobi on a normalized basis."""
    C = basis.coeff
    targets = [
        (C(2, 4, 1), C(1, 2, 1) * C(2, 3, 2) - C(1, 2, 2) * C(2, 3, 1)),
        (C(2, 4, 2), 0.0),
        (C(2, 4, 3), C(1, 2, 3) * C(2, 3, 2) - C(1, 2, 2) * C(2, 3, 3)),
        (C(2, 4, 4), C(2, 3, 3) - C(1, 2, 1)),
    ]
    return max(abs(a - b) for a, b in targets)


def eq1_residual(basis: AdaptedBasis) -> float:
    """Residual of the normal form on the adapted constants."""
    C = basis.coeff
    return max(abs(C(1, 3, 1)), abs(C(1, 3, 2)), abs(C(1, 3, 3)), abs(C(1, 3, 4) - 1),
               abs(C(1, 2, 4)), abs(C(2, 3, 4)))


def g481_basis(C: StructureConstants, q: Subspace) -> AdaptedBasis:
    """Basis with ``[e2, e1] = e1``, ``[e2, e3] = e3`` for the scalar case.

    e2 is the distinguished line rescaled so ``ad(e2)`` is the identity on
    ``s = [e2, q]``; e1, e3 span s.
    """
    _require_generating(C, q)
    e2 = distinguished_line(C, q)
    s = ad_image(C, e2, q)
    T = C.ad(e2)
    alpha = float(np.trace(s.basis.T @ T @ s.basis)) / 2
    e2 = e2 / alpha
    e1, e3 = s.basis[:, 0], s.basis[:, 1]
    e4 = C.bracket(e1, e3)
    return _adapted(C, e1, e2, e3, e4, Convention.LEMMA1, "g481")
