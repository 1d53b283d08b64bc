"""Numeric algebra of four-dimensional real Lie algebras.

Structure constants are held as a dense antisymmetric ``(4, 4, 4)`` array with
``c[i, j, k]`` the coefficient of ``E_k`` in ``[E_i, E_j]`` (0-based inside the
code, 1-based in every user-facing format).  Subspaces carry an orthonormal
basis and every rank decision goes through singular values with a relative
threshold ``rank_tol * sigma_max`` and a small absolute floor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

DIM = 4
RANK_TOL = 1e-9
ATOL = 1e-11
CONTAIN_TOL = 1e-8

# eigenvalues of defective blocks split by ~eps**(1/size); clusters are merged
# at this radius and replaced by their (accurate) mean
_CLUSTER_TOL = 1e-4
_UPPER = np.triu_indices(DIM, 1)


def _rank_cut(s: np.ndarray, rank_tol: float, atol: float) -> float:
    smax = float(s.max()) if s.size else 0.0
    return max(rank_tol * smax, atol)


def null_space(M: np.ndarray, rank_tol: float = RANK_TOL, atol: float = ATOL) -> np.ndarray:
    """Orthonormal basis (columns) of ker M."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    n = M.shape[1]
    if M.size == 0:
        return np.eye(n)
    _, s, vt = np.linalg.svd(M)
    cut = _rank_cut(s, rank_tol, atol)
    rank = int(np.sum(s > cut))
    return vt[rank:].T.copy()


def normalize_direction(v: np.ndarray, zero_tol: float = 1e-12) -> np.ndarray:
    """Unit vector with its first nonzero coordinate positive."""
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    for x in v:
        if abs(x) > zero_tol:
            return v if x > 0 else -v
    return v


@dataclass(frozen=True, eq=False)
class StructureConstants:
    """Structure constants of a 4-dimensional real Lie algebra.

    ``exact`` optionally holds the nonzero constants as ``Fraction`` records
    ``((i, j, k), value)`` with ``i < j`` (0-based); when present, Jacobi
    residuals are evaluated in exact arithmetic.
    """

    c: np.ndarray
    exact: tuple | None = None
    family: str | None = None
    params: tuple = ()

    def __post_init__(self):
        c = np.array(self.c, dtype=float)
        if c.shape != (DIM, DIM, DIM):
            raise ValueError(f"structure constants must have shape (4, 4, 4), got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("structure constants must be finite")
        if np.any(c + c.transpose(1, 0, 2) != 0):
            raise ValueError("structure constants must be antisymmetric in (i, j)")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    @classmethod
    def zero(cls) -> "StructureConstants":
        return cls(np.zeros((DIM, DIM, DIM)))

    @classmethod
    def from_brackets(cls, brackets: dict, family: str | None = None,
                      params: tuple = ()) -> "StructureConstants":
        """Build from ``{(i, j): {k: value}}`` with 1-based indices.

        Pairs may be given in either order; ``(j, i)`` entries are negated.
        Values that are ``int`` or ``Fraction`` are kept exactly as well.
        """
        c = np.zeros((DIM, DIM, DIM))
        exact = {}
        all_exact = True
        for (i, j), terms in brackets.items():
            if i == j:
                raise ValueError("bracket of a basis vector with itself is zero")
            sign = 1
            if i > j:
                i, j, sign = j, i, -1
            for k, val in terms.items():
                c[i - 1, j - 1, k - 1] += sign * float(val)
                c[j - 1, i - 1, k - 1] -= sign * float(val)
                if isinstance(val, (int, Fraction)):
                    key = (i - 1, j - 1, k - 1)
                    exact[key] = exact.get(key, Fraction(0)) + sign * Fraction(val)
                else:
                    all_exact = False
        rec = tuple(sorted((k, v) for k, v in exact.items() if v != 0)) if all_exact else None
        return cls(c, exact=rec, family=family, params=tuple(params))

    @classmethod
    def from_records(cls, records: Iterable) -> "StructureConstants":
        """Build from 1-based ``(i, j, k, value)`` records with ``i < j``."""
        c = np.zeros((DIM, DIM, DIM))
        for i, j, k, val in records:
            if not (1 <= i < j <= DIM and 1 <= k <= DIM):
                raise ValueError(f"bad structure-constant index ({i}, {j}, {k})")
            c[i - 1, j - 1, k - 1] += float(val)
            c[j - 1, i - 1, k - 1] -= float(val)
        return cls(c)

    def records(self) -> list[tuple[int, int, int, float]]:
        """Nonzero constants as 1-based ``(i, j, k, value)`` with ``i < j``."""
        out = []
        for i, j in combinations(range(DIM), 2):
            for k in range(DIM):
                if self.c[i, j, k] != 0:
                    out.append((i + 1, j + 1, k + 1, float(self.c[i, j, k])))
        return out

    @property
    def scale(self) -> float:
        return float(np.abs(self.c).max())

    @property
    def is_abelian(self) -> bool:
        return self.scale == 0.0

    def bracket(self, x, y) -> np.ndarray:
        # summing x_i y_j - x_j y_i over i < j makes [y, x] = -[x, y] bit for bit
        x, y = np.asarray(x, float), np.asarray(y, float)
        W = np.outer(x, y)
        return (W - W.T)[_UPPER] @ self._c_upper

    @cached_property
    def _c_upper(self) -> np.ndarray:
        return np.ascontiguousarray(self.c[_UPPER])

    @cached_property
    def ad_basis(self) -> np.ndarray:
        """``ad_basis[i]`` is the matrix of ``ad(E_i)`` (columns are images)."""
        return np.ascontiguousarray(self.c.transpose(0, 2, 1))

    def ad(self, x) -> np.ndarray:
        return np.einsum("i,ikj->kj", np.asarray(x, float), self.ad_basis)

    def right_mult(self, y) -> np.ndarray:
        """Matrix of ``x -> [x, y]``."""
        return np.einsum("j,ijk->ki", np.asarray(y, float), self.c)

    @cached_property
    def exact_tensor(self) -> list:
        """Nested ``[i][j][k]`` lists of ``Fraction``; float constants are converted exactly."""
        if self.exact is not None:
            c = [[[Fraction(0)] * DIM for _ in range(DIM)] for _ in range(DIM)]
            for (i, j, k), v in self.exact:
                c[i][j][k] += v
                c[j][i][k] -= v
            return c
        return [[[Fraction(float(self.c[i, j, k])) for k in range(DIM)] for j in range(DIM)]
                for i in range(DIM)]

    @cached_property
    def killing(self) -> np.ndarray:
        A = self.ad_basis
        return np.einsum("iab,jba->ij", A, A)

    def change_basis(self, P) -> "StructureConstants":
        """Constants in the basis given by the columns of ``P`` (ambient coordinates)."""
        P = np.asarray(P, dtype=float)
        Pinv = np.linalg.inv(P)
        c = np.einsum("ia,jb,ijk,lk->abl", P, P, self.c, Pinv)
        c = 0.5 * (c - c.transpose(1, 0, 2))
        return StructureConstants(c)


def bracket(C: StructureConstants, x, y) -> np.ndarray:
    return C.bracket(x, y)


def _exact_jacobi(exact: tuple) -> Fraction:
    c = [[[Fraction(0)] * DIM for _ in range(DIM)] for _ in range(DIM)]
    for (i, j, k), v in exact:
        c[i][j][k] += v
        c[j][i][k] -= v

    def br_basis_vec(i, vec):
        return [sum(vec[j] * c[i][j][k] for j in range(DIM)) for k in range(DIM)]

    worst = Fraction(0)
    for i, j, k in combinations(range(DIM), 3):
        total = [Fraction(0)] * DIM
        for a, b, d in ((i, j, k), (j, k, i), (k, i, j)):
            term = br_basis_vec(a, c[b][d])
            total = [t + s for t, s in zip(total, term)]
        worst = max(worst, max(abs(t) for t in total))
    return worst


def check_jacobi(C: StructureConstants) -> float:
    """Max sup-norm of the Jacobi cyclic sum over basis triples ``i < j < k``."""
    if C.exact is not None:
        return float(_exact_jacobi(C.exact))
    worst = 0.0
    E = np.eye(DIM)
    for i, j, k in combinations(range(DIM), 3):
        s = (C.bracket(E[i], C.bracket(E[j], E[k]))
             + C.bracket(E[j], C.bracket(E[k], E[i]))
             + C.bracket(E[k], C.bracket(E[i], E[j])))
        worst = max(worst, float(np.abs(s).max()))
    return worst


@dataclass(frozen=True, eq=False)
class Subspace:
    """Linear subspace of R^4 with an orthonormal basis stored as columns."""

    basis: np.ndarray
    rank_tol: float = RANK_TOL

    def __post_init__(self):
        b = np.array(self.basis, dtype=float).reshape(DIM, -1)
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @classmethod
    def span(cls, vectors, rank_tol: float = RANK_TOL, atol: float = ATOL) -> "Subspace":
        """Span of the given 4-vectors (rows of ``vectors``).

        When the vectors are independent the orthonormal basis is the
        order-preserving Gram-Schmidt one, so ``span([E2, E3, E4])`` keeps
        ``E2, E3, E4`` as its basis.
        """
        V = np.asarray(vectors, dtype=float)
        if V.size == 0:
            return cls(np.zeros((DIM, 0)), rank_tol)
        V = np.atleast_2d(V).T  # columns
        if V.shape[1] <= DIM:
            q, R = np.linalg.qr(V)
            d = np.abs(np.diag(R))
            if d.min() > max(1e-6 * np.abs(R).max(), atol):
                # clearly independent; skip the SVD rank test
                return cls(q * np.sign(np.diag(R)), rank_tol)
        u, s, _ = np.linalg.svd(V, full_matrices=False)
        cut = _rank_cut(s, rank_tol, atol)
        r = int(np.sum(s > cut))
        if r == V.shape[1]:
            q, R = np.linalg.qr(V)
            q = q * np.sign(np.where(np.diag(R) == 0, 1.0, np.diag(R)))
            return cls(q, rank_tol)
        return cls(u[:, :r], rank_tol)

    @classmethod
    def full(cls) -> "Subspace":
        return cls(np.eye(DIM))

    @classmethod
    def zero(cls) -> "Subspace":
        return cls(np.zeros((DIM, 0)))

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def vectors(self) -> list[np.ndarray]:
        return [self.basis[:, i] for i in range(self.dim)]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.T

    def complement_projector(self) -> np.ndarray:
        return np.eye(DIM) - self.projector()

    def residual(self, v) -> float:
        v = np.asarray(v, dtype=float)
        return float(np.linalg.norm(v - self.basis @ (self.basis.T @ v)))

    def contains(self, v, tol: float = CONTAIN_TOL) -> bool:
        v = np.asarray(v, dtype=float)
        n = np.linalg.norm(v)
        if n == 0:
            return True
        return self.residual(v) <= tol * n

    def contains_subspace(self, other: "Subspace", tol: float = CONTAIN_TOL) -> bool:
        return all(self.contains(v, tol) for v in other.vectors)

    def equals(self, other: "Subspace", tol: float = CONTAIN_TOL) -> bool:
        return (self.dim == other.dim and self.contains_subspace(other, tol)
                and other.contains_subspace(self, tol))

    @cached_property
    def normal(self) -> np.ndarray:
        """Unit normal of a hyperplane, from the cofactors of its basis."""
        if self.dim != DIM - 1:
            raise ValueError("normal() needs a hyperplane")
        B = self.basis
        n = np.array([(-1) ** k * np.linalg.det(np.delete(B, k, axis=0)) for k in range(DIM)])
        return n / np.linalg.norm(n)

    def orthogonal_complement(self) -> "Subspace":
        if self.dim == DIM - 1:
            return Subspace(self.normal[:, None], self.rank_tol)
        return Subspace(null_space(self.basis.T) if self.dim else np.eye(DIM), self.rank_tol)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, basis={np.round(self.basis.T, 6).tolist()})"


def subspace_sum(A: Subspace, B: Subspace) -> Subspace:
    vecs = A.vectors + B.vectors
    return Subspace.span(vecs, rank_tol=min(A.rank_tol, B.rank_tol)) if vecs else Subspace.zero()


def subspace_intersect(A: Subspace, B: Subspace) -> Subspace:
    """A ∩ B from the joint null space of the two complement projectors."""
    if A.dim == 0 or B.dim == 0:
        return Subspace.zero()
    # x = A a = B b  <=>  [A, -B] (a, b) = 0
    M = np.hstack([A.basis, -B.basis])
    N = null_space(M, min(A.rank_tol, B.rank_tol))
    if N.shape[1] == 0:
        return Subspace.zero()
    return Subspace.span((A.basis @ N[: A.dim]).T)


def ad_image(C: StructureConstants, x, S: Subspace) -> Subspace:
    """span{[x, b] : b in S}."""
    imgs = [C.bracket(x, b) for b in S.vectors]
    scale = max(1.0, np.linalg.norm(x) * C.scale)
    return Subspace.span(imgs, atol=ATOL * scale) if imgs else Subspace.zero()


def bracket_space(C: StructureConstants, A: Subspace, B: Subspace) -> Subspace:
    """span{[a, b] : a in A, b in B}."""
    imgs = [C.bracket(a, b) for a in A.vectors for b in B.vectors]
    return Subspace.span(imgs) if imgs else Subspace.zero()


def is_subalgebra(C: StructureConstants, S: Subspace) -> bool:
    # brackets of unit vectors are compared with the size of the constants, so
    # rounding noise in a vanishing bracket is not mistaken for a direction
    def inside(v):
        return S.residual(v) <= CONTAIN_TOL * max(np.linalg.norm(v), C.scale)
    return all(inside(C.bracket(a, b)) for a, b in combinations(S.vectors, 2))


def bracket_closure(C: StructureConstants, S: Subspace) -> Subspace:
    """Smallest subalgebra containing S (iterate S <- S + [S, S])."""
    cur = S
    while True:
        nxt = subspace_sum(cur, bracket_space(C, cur, cur))
        if nxt.dim == cur.dim:
            return cur
        cur = nxt


def generates(C: StructureConstants, q: Subspace) -> bool:
    if q.dim < 1:
        raise ValueError("generates() needs a nonzero subspace")
    if q.dim == DIM - 1:
        # a hyperplane plus one bracket outside it is everything
        return not is_subalgebra(C, q)
    return bracket_closure(C, q).dim == DIM


def normalizer(C: StructureConstants, q: Subspace) -> Subspace:
    """{x : [x, q] ⊂ q}."""
    if q.dim == 0 or q.dim == DIM:
        return Subspace.full()
    P = q.complement_projector()
    M = np.vstack([P @ C.right_mult(b) for b in q.vectors])
    return Subspace(null_space(M, q.rank_tol))


def centralizer(C: StructureConstants, S: Subspace) -> Subspace:
    """{x : [x, S] = 0}."""
    if S.dim == 0:
        return Subspace.full()
    M = np.vstack([C.right_mult(b) for b in S.vectors])
    return Subspace(null_space(M, S.rank_tol))


def center(C: StructureConstants) -> Subspace:
    return centralizer(C, Subspace.full())


def derived_algebra(C: StructureConstants) -> Subspace:
    full = Subspace.full()
    return bracket_space(C, full, full)


def eigen_clusters(A: np.ndarray, tol: float = _CLUSTER_TOL) -> list[tuple[complex, int]]:
    """Eigenvalues of A grouped into clusters; returns (cluster mean, multiplicity)."""
    w = np.linalg.eigvals(A)
    scale = 1.0 + float(np.abs(w).max(initial=0.0))
    groups: list[list[complex]] = []
    for z in sorted(w, key=lambda z: (z.real, z.imag)):
        for g in groups:
            if abs(z - np.mean(g)) <= tol * scale:
                g.append(z)
                break
        else:
            groups.append([z])
    return [(complex(np.mean(g)), len(g)) for g in groups]


def real_eigenvalues(A: np.ndarray, tol: float = _CLUSTER_TOL) -> list[float]:
    out = []
    scale = 1.0 + float(np.abs(A).max(initial=0.0))
    for z, _ in eigen_clusters(A, tol):
        if abs(z.imag) <= 1e-9 * scale:
            out.append(z.real)
    return out


def joint_eigenspaces(mats: Sequence[np.ndarray], rank_tol: float = RANK_TOL
                      ) -> list[tuple[Subspace, tuple[float, ...]]]:
    """Maximal subspaces W with ``A_j w = lam_j w`` for all j and all w in W.

    Returned with the tuple of eigenvalues ``(lam_1, ..., lam_m)``.  The split
    is done one operator at a time; each candidate is verified against every
    operator at the end.
    """
    spaces = [(Subspace(np.eye(DIM), rank_tol), ())]
    for A in mats:
        lams = real_eigenvalues(A)
        nxt = []
        for W, chars in spaces:
            for lam in lams:
                M = (A - lam * np.eye(DIM)) @ W.basis
                N = null_space(M, rank_tol, atol=1e-9 * (1.0 + np.abs(A).max()))
                if N.shape[1]:
                    nxt.append((Subspace.span((W.basis @ N).T, rank_tol), chars + (lam,)))
        spaces = nxt
    verified = []
    for W, chars in spaces:
        res = max((np.linalg.norm(A @ W.basis - lam * W.basis)
                   for A, lam in zip(mats, chars)), default=0.0)
        if res <= 1e-6 * (1.0 + max(np.abs(A).max() for A in mats)):
            verified.append((W, chars))
    return verified


@dataclass(frozen=True, eq=False)
class IdealLine:
    """A one-dimensional ideal <v> with character ``lambda(E_j)`` (``[E_j, v] = lambda_j v``).

    ``family_dim > 1`` means the line was taken from a joint eigenspace of that
    dimension, every line of which is an ideal with the same character.
    """

    direction: np.ndarray
    character: np.ndarray
    family_dim: int = 1

    @property
    def central(self) -> bool:
        return bool(np.all(np.abs(self.character) <= 1e-9))


def ideal_spaces(C: StructureConstants) -> list[tuple[Subspace, np.ndarray]]:
    """Joint eigenspaces of ``ad(E_1..E_4)`` with their characters.

    Every line in each returned space is a one-dimensional ideal, and every
    one-dimensional ideal lies in exactly one of them.
    """
    return [(W, np.array(chars)) for W, chars in joint_eigenspaces(list(C.ad_basis))]


def one_dim_ideals(C: StructureConstants) -> list[IdealLine]:
    """All one-dimensional ideals, as unit directions with first nonzero coordinate positive.

    Isolated ideal lines are returned once.  For a joint eigenspace of dimension
    ``d > 1`` (a continuum of ideal lines) a basis of ``d`` representative
    directions is returned, each tagged with ``family_dim = d``.
    """
    out = []
    for W, chars in ideal_spaces(C):
        for v in W.vectors:
            out.append(IdealLine(normalize_direction(v), chars, W.dim))
    return out


def hyperplane_ideals(C: StructureConstants) -> list[tuple[Subspace, np.ndarray]]:
    """Joint eigenspaces of the transposed ad-operators.

    A hyperplane ``ker(phi)`` is an ideal iff ``phi`` is a joint eigenvector of
    ``ad(E_j)^T``; each returned space collects such covectors.
    """
    mats = [A.T for A in C.ad_basis]
    return [(W, np.array(chars)) for W, chars in joint_eigenspaces(mats)]


def _hyperplane_candidates(W: Subspace, rng: np.random.Generator) -> list[np.ndarray]:
    cands = list(W.vectors)
    if W.dim > 1:
        cands += [W.basis @ rng.standard_normal(W.dim) for _ in range(3)]
    return cands


def admits_generating_hyperplane(C: StructureConstants) -> bool:
    """False iff g is abelian or has an abelian 3-dim ideal I and z with ad z|_I = id."""
    if C.is_abelian:
        return False
    rng = np.random.default_rng(0)
    tol = 1e-9 * (1.0 + C.scale)
    for W, _ in hyperplane_ideals(C):
        for phi in _hyperplane_candidates(W, rng):
            I = Subspace(null_space(phi[None, :]))
            vecs = I.vectors
            if any(np.linalg.norm(C.bracket(a, b)) > tol for a, b in combinations(vecs, 2)):
                continue
            # [z, b] = b for every b in I, linear in z
            M = np.vstack([C.right_mult(b) for b in vecs])
            rhs = np.concatenate(vecs)
            z, *_ = np.linalg.lstsq(M, rhs, rcond=None)
            if np.linalg.norm(M @ z - rhs) <= 1e-8:
                return False
    return True
