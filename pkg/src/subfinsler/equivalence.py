"""Automorphism-invariant fingerprints of generating 3-dim subspaces and the class census.

Every field of :class:`Fingerprint` is preserved by automorphisms, so distinct
fingerprints mean inequivalent subspaces.  That equal fingerprints mean
equivalent subspaces is checked empirically against the catalog k-column.
"""

from __future__ import annotations

from collections import Counter
from itertools import combinations
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .adapted_basis import ZERO_BAND, E2Invariants, distinguished_line, e2_invariants
from .catalog import catalog_k
from .errors import NotGenerating, UnknownFamily
from .lie_core import (
    CONTAIN_TOL, DIM, StructureConstants, Subspace, center, generates, ideal_spaces, null_space,
    subspace_intersect,
)

KILLING_TOL = 1e-9
SIGNATURE_DIGITS = 5
CHUNK = 250
IDEAL_SEEDS_PER_LINE = 32
PLANE_SEEDS = 400


class C23Pattern(str, Enum):
    """Direction of ``[e2, e3]`` in a commutator basis, read off basis-free."""

    CENTRAL = "Central"
    ZERO = "Zero"
    PARALLEL_E1 = "ParallelE1"
    PARALLEL_E2 = "ParallelE2"
    PARALLEL_E3 = "ParallelE3"
    C1_NONZERO_C2_ZERO = "C1NonzeroC2Zero"
    SCALAR = "Scalar"


class SpectralType(str, Enum):
    """Spectrum of ``ad(e2)`` on ``s = [e2, q]``."""

    NULL = "Null"
    NILPOTENT = "Nilpotent"
    REAL_SINGLE = "RealSingle"
    REAL_DISTINCT = "RealDistinct"
    REAL_EQUAL = "RealEqual"
    COMPLEX_PAIR = "ComplexPair"
    SCALAR = "Scalar"


@dataclass(frozen=True)
class Fingerprint:
    contains_central_ideal: bool
    contained_noncentral_ideal: tuple | None
    killing_signature_on_q: tuple
    c23_pattern: C23Pattern
    ad_e2_spectral_type: SpectralType

    def as_dict(self) -> dict:
        return {
            "contains_central_ideal": self.contains_central_ideal,
            "contained_noncentral_ideal": (None if self.contained_noncentral_ideal is None
                                           else [list(z) for z in self.contained_noncentral_ideal]),
            "killing_signature_on_q": list(self.killing_signature_on_q),
            "c23_pattern": self.c23_pattern.value,
            "ad_e2_spectral_type": self.ad_e2_spectral_type.value,
        }

    def __str__(self) -> str:
        ideal = "central ideal" if self.contains_central_ideal else (
            "no ideal" if self.contained_noncentral_ideal is None
            else f"ideal {_fmt_spectrum(self.contained_noncentral_ideal)}")
        return (f"{ideal}; killing {self.killing_signature_on_q}; "
                f"[e2,e3] {self.c23_pattern.value}; ad(e2)|s {self.ad_e2_spectral_type.value}")


def _fmt_spectrum(spec) -> str:
    return "{" + ", ".join(f"{re:g}" if im == 0 else f"{re:g}{im:+g}i" for re, im in spec) + "}"


@dataclass(frozen=True, eq=False)
class AlgebraData:
    """Per-algebra quantities reused across many fingerprints."""

    ideals: tuple
    center: Subspace
    signatures: tuple

    @classmethod
    def of(cls, C: StructureConstants) -> "AlgebraData":
        spaces = tuple(ideal_spaces(C))
        sigs = tuple(None if _is_central(chars) else character_signature(C, chars)
                     for _, chars in spaces)
        return cls(spaces, center(C), sigs)


def _is_central(chars) -> bool:
    return bool(np.all(np.abs(np.asarray(chars)) <= 1e-9))


def _round(z: complex) -> tuple:
    re, im = round(z.real, SIGNATURE_DIGITS) + 0.0, round(z.imag, SIGNATURE_DIGITS) + 0.0
    return (re, abs(im))


def character_signature(C: StructureConstants, chars) -> tuple:
    """Eigenvalues of ``ad(x)`` shared by every x with ``lambda(x) = 1``.

    ``lambda`` is the character of a one-dimensional ideal.  An automorphism
    carries this affine hyperplane to the one of the image ideal, so the
    shared spectrum is an invariant of the ideal up to equivalence.
    """
    lam = np.asarray(chars, dtype=float)
    x0 = lam / (lam @ lam)
    K = null_space(lam[None, :])
    rng = np.random.default_rng(0)
    shifts = [np.zeros(3)] + [rng.standard_normal(3) for _ in range(2)]
    spectra = [list(np.linalg.eigvals(C.ad(x0 + K @ a))) for a in shifts]
    common = spectra[0]
    for other in spectra[1:]:
        kept, pool = [], list(other)
        for z in common:
            j = min(range(len(pool)), key=lambda i: abs(pool[i] - z), default=None)
            if j is not None and abs(pool[j] - z) <= 1e-6 * (1 + abs(z)):
                kept.append(z)
                pool.pop(j)
        common = kept
    return tuple(sorted(_round(z) for z in common))


def contained_ideals(C: StructureConstants, q: Subspace, data: AlgebraData | None = None) -> list:
    """``(line, central, signature)`` for each one-dimensional ideal inside q."""
    data = data or AlgebraData.of(C)
    n = q.normal if q.dim == 3 else None
    out = []
    for (W, chars), sig in zip(data.ideals, data.signatures):
        if W.dim == 1 and n is not None:
            # a line lies in the hyperplane q iff it is orthogonal to the normal
            lines = W.vectors if abs(n @ W.basis[:, 0]) <= CONTAIN_TOL else []
        else:
            lines = subspace_intersect(W, q).vectors
        out.extend((v, sig is None, sig) for v in lines)
    return out


def killing_signature(C: StructureConstants, q: Subspace) -> tuple:
    """``(n+, n-, n0)`` of the Killing form restricted to q."""
    ev = np.linalg.eigvalsh(q.basis.T @ C.killing @ q.basis)
    scale = np.abs(ev).max()
    if scale == 0:
        return (0, 0, q.dim)
    thr = KILLING_TOL * scale
    return (int(np.sum(ev > thr)), int(np.sum(ev < -thr)), int(np.sum(np.abs(ev) <= thr)))


def spectral_type(inv: E2Invariants) -> SpectralType:
    """Spectrum type of ``ad(e2)`` on s from the invariants of ``ad(e2)|q``.

    When e2 is outside s, s is an invariant complement of ``<e2>`` and the
    spectrum on s is the root pair of ``x^2 - c3 x + c1``; otherwise it is ``{0, c3}``.
    """
    if inv.s_dim == 0:
        return SpectralType.NULL
    if inv.s_dim == 1:
        return SpectralType.NILPOTENT if inv.e2_in_s or inv.c3_zero else SpectralType.REAL_SINGLE
    if inv.e2_in_s:
        return SpectralType.NILPOTENT if inv.c3_zero else SpectralType.REAL_DISTINCT
    if inv.disc_sign == 0:
        return SpectralType.SCALAR if inv.scalar_on_s else SpectralType.REAL_EQUAL
    return SpectralType.REAL_DISTINCT if inv.disc_sign > 0 else SpectralType.COMPLEX_PAIR


def c23_pattern(inv: E2Invariants) -> C23Pattern:
    """Pattern of ``[e2, e3] = C1 e1 + C2 e2 + C3 e3`` once ``C2`` is shifted away."""
    if inv.s_dim == 0:
        return C23Pattern.CENTRAL
    if inv.e2_in_s:
        return C23Pattern.PARALLEL_E2
    if inv.scalar_on_s:
        return C23Pattern.SCALAR
    if inv.c1_zero:
        return C23Pattern.ZERO if inv.c3_zero else C23Pattern.PARALLEL_E3
    return C23Pattern.PARALLEL_E1 if inv.c3_zero else C23Pattern.C1_NONZERO_C2_ZERO


def fingerprint(C: StructureConstants, q: Subspace, data: AlgebraData | None = None) -> Fingerprint:
    """Invariant data of a generating q; ``data`` caches per-algebra work.

    Raises :class:`NotGenerating` when q does not generate.
    """
    e2 = distinguished_line(C, q)
    data = data or AlgebraData.of(C)
    central, noncentral = False, None
    for _, is_central, sig in contained_ideals(C, q, data):
        if is_central:
            central = True
        else:
            noncentral = sig
    inv = e2_invariants(C, q, e2)
    return Fingerprint(central, noncentral, killing_signature(C, q), c23_pattern(inv),
                       spectral_type(inv))


def _band(r: np.ndarray) -> np.ndarray:
    # 1 clearly nonzero, 0 clearly zero, -1 undecided (see ZERO_BAND)
    return np.where(r >= ZERO_BAND[1], 1, np.where(r <= ZERO_BAND[0], 0, -1))


def _batch_decisions(Tq: np.ndarray, a: np.ndarray, scale: float) -> list:
    """Vectorised float decisions of :func:`e2_invariants`; None marks rows left to it."""
    N = len(Tq)
    sv = np.linalg.svd(Tq, compute_uv=False)
    norm = sv[:, 0]
    safe = np.where(norm > 0, norm, 1.0)
    P = np.linalg.qr(a[:, :, None], mode="complete")[0][:, :, 1:]
    Tbar = np.swapaxes(P, 1, 2) @ Tq @ P
    sv_bar = np.linalg.svd(Tbar, compute_uv=False)
    c3 = np.trace(Tq, axis1=1, axis2=2)
    c1 = np.linalg.det(Tbar)
    disc = c3**2 - 4 * c1
    nz = _band(norm / scale)
    sides = _band(sv / safe[:, None])
    sides_bar = _band(sv_bar / safe[:, None])
    c3_side = _band(np.abs(c3) / safe)
    d_side = _band(np.abs(disc) / safe**2)
    N3 = Tq - (c3 / 2)[:, None, None] * np.eye(3)
    sc_side = _band(np.abs(N3 @ Tq).max(axis=(1, 2)) / safe**2)
    out = []
    for i in range(N):
        if nz[i] < 0:
            out.append(None)
            continue
        if nz[i] == 0:
            out.append((0, False, True, True, 0, False))
            continue
        if (sides[i] < 0).any() or (sides_bar[i] < 0).any() or c3_side[i] < 0:
            out.append(None)
            continue
        s_dim, rank = int(sides[i].sum()), int(sides_bar[i].sum())
        if s_dim - rank not in (0, 1):
            out.append(None)
        elif rank < 2:
            out.append((s_dim, s_dim > rank, True, not c3_side[i], int(c3_side[i]), False))
        elif d_side[i] < 0 or (d_side[i] == 0 and sc_side[i] < 0):
            out.append(None)
        else:
            sign = int(np.sign(disc[i])) if d_side[i] else 0
            scalar = bool(d_side[i] == 0 and sc_side[i] == 0)
            out.append((s_dim, False, False, not c3_side[i], sign, scalar))
    return out


def fingerprints(C: StructureConstants, bases: np.ndarray, data: AlgebraData | None = None) -> list:
    """Fingerprints of many hyperplanes at once; None where q does not generate.

    ``bases`` has shape ``(N, 4, 3)`` with orthonormal columns.  Rows whose
    float decisions are not clear-cut go through :func:`fingerprint`.
    """
    B = np.asarray(bases, dtype=float)
    N = len(B)
    if N == 0:
        return []
    data = data or AlgebraData.of(C)
    c, scale = C.c, C.scale
    n = np.stack([(-1) ** k * np.linalg.det(np.delete(B, k, axis=1)) for k in range(DIM)], axis=1)
    n /= np.linalg.norm(n, axis=1, keepdims=True)
    pairs = ((1, 2), (0, 2), (0, 1))
    brs = np.stack([np.einsum("ni,nj,ijk->nk", B[:, :, i], B[:, :, j], c) for i, j in pairs], axis=1)
    g = np.einsum("nk,npk->np", n, brs)
    zero = np.abs(g) <= CONTAIN_TOL * np.maximum(np.linalg.norm(brs, axis=2), scale)
    a = g * np.array([1.0, -1.0, 1.0])
    a /= np.where(zero.all(axis=1), 1.0, np.linalg.norm(a, axis=1))[:, None]
    u = np.einsum("nkp,np->nk", B, a)
    ad_u = np.einsum("ni,ikj->nkj", u, C.ad_basis)
    Tq = np.swapaxes(B, 1, 2) @ ad_u @ B
    decisions = _batch_decisions(Tq, a, 1.0 + scale)
    kill = np.linalg.eigvalsh(np.swapaxes(B, 1, 2) @ C.killing @ B)
    out = []
    for r in range(N):
        q = Subspace(B[r])
        if zero[r].all() or decisions[r] is None:
            try:
                out.append(fingerprint(C, q, data))
            except NotGenerating:
                out.append(None)
            continue
        central, noncentral = False, None
        for (W, _), sig in zip(data.ideals, data.signatures):
            if W.dim > 1 or abs(n[r] @ W.basis[:, 0]) <= CONTAIN_TOL:
                # a space of ideals of dim >= 2 always meets a hyperplane
                if sig is None:
                    central = True
                else:
                    noncentral = sig
        ev = kill[r]
        s = np.abs(ev).max()
        if s == 0:
            ks = (0, 0, 3)
        else:
            thr = KILLING_TOL * s
            ks = (int(np.sum(ev > thr)), int(np.sum(ev < -thr)), int(np.sum(np.abs(ev) <= thr)))
        Tr = Tq[r]
        c1 = float(Tr[0, 0] * Tr[1, 1] - Tr[0, 1] * Tr[1, 0] + Tr[0, 0] * Tr[2, 2] - Tr[0, 2] * Tr[2, 0]
                   + Tr[1, 1] * Tr[2, 2] - Tr[1, 2] * Tr[2, 1])
        inv = E2Invariants(c1, float(np.trace(Tr)), *decisions[r], norm=0.0)
        out.append(Fingerprint(central, noncentral, ks, c23_pattern(inv), spectral_type(inv)))
    return out


def _params(C: StructureConstants) -> tuple:
    return tuple(float(p) for p in C.params)


def theorem4_case(C: StructureConstants, q: Subspace, fp: Fingerprint | None = None):
    """Case label ``(item, sub_case)`` of the case list for the catalog family of C.

    Families that the case list does not split return ``None``.
    """
    if C.family is None:
        raise UnknownFamily("case labels need a catalog tensor")
    fp = fp or fingerprint(C, q)
    name, p = C.family, _params(C)
    ideal = fp.contained_noncentral_ideal is not None
    if name == "2g21":
        return (1, 1) if ideal else (1, 2)
    if name in ("g32+g1", "g34a+g1", "g43"):
        return (2, 1) if fp.contains_central_ideal else (2, 2) if ideal else (2, 3)
    if name in ("g35a+g1", "g41"):
        return (3, 1) if fp.contains_central_ideal else (3, 2)
    if name == "g36+g1":
        if fp.contains_central_ideal:
            return (4, 1)
        return (4, 2) if fp.c23_pattern is C23Pattern.PARALLEL_E2 else (4, 3)
    if name == "g37+g1":
        return (5, 1) if fp.contains_central_ideal else (5, 2)
    item6 = (
        (name == "g42a" and p[0] not in (0.0, 1.0))
        or name in ("g44", "g46ab")
        or (name == "g45ab" and (p[0] == -1.0 or (p[0] < p[1] < 1.0)))
    )
    if item6:
        return (6, 1) if ideal else (6, 2)
    if (name == "g48a" and p[0] == -1.0) or (name == "g49a" and p[0] == 0.0):
        return (8, 1) if fp.contains_central_ideal else (8, 2)
    if name == "g47" or (name == "g48a" and -1.0 < p[0] < 1.0 and p[0] != 0.0) or name == "g49a":
        return (7, 1) if ideal else (7, 2)
    if name == "g48a" and p[0] == 0.0:
        return (9, 1) if ideal else (9, 2)
    return None


def random_subspace(rng: np.random.Generator) -> Subspace:
    """Span of three standard-Gaussian vectors in R^4."""
    return Subspace.span(rng.standard_normal((3, 4)))


def ideal_seeds(C: StructureConstants, rng: np.random.Generator, data: AlgebraData | None = None,
                per_line: int = IDEAL_SEEDS_PER_LINE) -> list[Subspace]:
    """Generating subspaces through each one-dimensional ideal, found by random completion."""
    data = data or AlgebraData.of(C)
    out = []
    for W, _ in data.ideals:
        lines = list(W.vectors)
        if W.dim > 1:
            lines.append(W.basis @ rng.standard_normal(W.dim))
        for L in lines:
            for _ in range(per_line):
                q = Subspace.span(np.vstack([L, rng.standard_normal((2, 4))]))
                if q.dim == 3 and generates(C, q):
                    out.append(q)
    return out


def plane_seeds(C: StructureConstants, rng: np.random.Generator, n: int = PLANE_SEEDS) -> list[Subspace]:
    """Subspaces ``p + [p, p]`` for random 2-planes p.

    Subspaces without ideals have this form with p generating, so classes
    that are thin among 3-subspaces but open among 2-planes show up here.
    """
    out = []
    for _ in range(n):
        a, b = rng.standard_normal((2, 4))
        q = Subspace.span([a, b, C.bracket(a, b)])
        if q.dim == 3 and generates(C, q):
            out.append(q)
    return out


def lattice_seeds(C: StructureConstants) -> list[Subspace]:
    """Generating spans of three directions with at most two nonzero entries in {-1, 1}.

    Catches classes that are thin among both 3-subspaces and 2-planes but
    have simple representatives in the basis the brackets are given in.
    """
    dirs = []
    for i in range(DIM):
        dirs.append(np.eye(DIM)[i])
        for j in range(i + 1, DIM):
            for s in (1.0, -1.0):
                v = np.zeros(DIM)
                v[i], v[j] = 1.0, s
                dirs.append(v)
    out = []
    for trio in combinations(dirs, 3):
        q = Subspace.span(np.array(trio))
        if q.dim == 3 and generates(C, q):
            out.append(q)
    return out


def sample_classes(C: StructureConstants, n: int, seed: int = 0, seed_ideals: bool = True) -> Counter:
    """Fingerprint counts over n Gaussian 3-subspaces plus deterministic seeds.

    Draws come from independent sub-streams of ``SeedSequence(seed)``, one per
    block of :data:`CHUNK` draws, so the result depends only on ``(n, seed)``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    data = AlgebraData.of(C)
    n_chunks = -(-n // CHUNK)
    streams = np.random.SeedSequence(seed).spawn(n_chunks + 1)
    bases = []
    for i in range(n_chunks):
        rng = np.random.default_rng(streams[i])
        bases.extend(random_subspace(rng).basis for _ in range(min(CHUNK, n - i * CHUNK)))
    if seed_ideals:
        rng = np.random.default_rng(streams[-1])
        bases.extend(q.basis for q in ideal_seeds(C, rng, data) + plane_seeds(C, rng) + lattice_seeds(C))
    counts = Counter(fingerprints(C, np.array(bases), data))
    counts.pop(None, None)
    return counts


@dataclass(frozen=True)
class Census:
    family: str
    params: tuple
    counts: Counter
    expected: int | None

    @property
    def n_classes(self) -> int:
        return len(self.counts)

    @property
    def ok(self) -> bool:
        return self.expected is None or self.n_classes == self.expected


def census(C: StructureConstants, n: int = 2000, seed: int = 0) -> Census:
    expected = None
    if C.family is not None:
        expected = catalog_k(C.family, *C.params)
    return Census(C.family or "custom", tuple(C.params), sample_classes(C, n, seed), expected)
