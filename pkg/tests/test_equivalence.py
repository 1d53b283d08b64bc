import numpy as np
import pytest

from conftest import E, GENERATING, random_generating_q, span
from subfinsler.catalog import REPRESENTATIVES, build_algebra, catalog_k
from subfinsler.equivalence import (
    AlgebraData, C23Pattern, SpectralType, census, contained_ideals, fingerprint, fingerprints,
    ideal_seeds, killing_signature, lattice_seeds, plane_seeds, random_subspace, sample_classes,
    theorem4_case,
)
from subfinsler.errors import NotGenerating, UnknownFamily
from subfinsler.extremal_ode import adjoint_flow
from subfinsler.lie_core import StructureConstants, Subspace, generates


def test_g41_example(algebras):
    C = algebras["g41"]
    fp = fingerprint(C, span(E[1], E[2], E[3]))
    assert not fp.contains_central_ideal and fp.contained_noncentral_ideal is None
    assert fp.c23_pattern is C23Pattern.ZERO
    assert theorem4_case(C, span(E[1], E[2], E[3])) == (3, 2)
    # the center <E1> inside q
    assert theorem4_case(C, span(E[0], E[2], E[3])) == (3, 1)


def test_g36_central_subclasses(algebras, rng):
    C = algebras["g36+g1"]
    sigs = set()
    for q in ideal_seeds(C, rng, per_line=40):
        fp = fingerprint(C, q)
        if fp.contains_central_ideal:
            sigs.add(fp.killing_signature_on_q)
    assert sigs == {(1, 1, 1), (2, 0, 1)}


def test_single_class_families(algebras, rng):
    for label in ("g48a(1)", "g42a(1)", "g410"):
        C = algebras[label]
        fps = {fingerprint(C, random_generating_q(C, rng)) for _ in range(30)}
        assert len(fps) == 1


def test_case_label_examples(algebras, rng):
    C = algebras["g37+g1"]
    for _ in range(10):
        q = random_generating_q(C, rng)
        assert theorem4_case(C, q) == (5, 2)
        assert fingerprint(C, q).c23_pattern is C23Pattern.PARALLEL_E1
    C = algebras["g48a(0)"]
    q = span(E[1], E[2], E[3])
    assert theorem4_case(C, q) == (9, 2)
    assert fingerprint(C, q).c23_pattern in (C23Pattern.PARALLEL_E3, C23Pattern.ZERO)
    with pytest.raises(UnknownFamily):
        theorem4_case(StructureConstants.from_brackets({(2, 4): {1: 1}, (3, 4): {2: 1}}), q)


def test_fingerprint_rejects_non_generating(algebras):
    with pytest.raises(NotGenerating):
        fingerprint(algebras["g41"], span(E[0], E[1], E[3]))


def test_sample_classes_examples(algebras):
    assert len(sample_classes(algebras["g36+g1"], 2000)) == 5
    assert sample_classes(algebras["4g1"], 300) == {}
    assert len(sample_classes(algebras["g42a(1)"], 2000)) == 1
    with pytest.raises(ValueError):
        sample_classes(algebras["g41"], 0)


def test_sampling_is_deterministic(algebras):
    C = algebras["g34a+g1(0.5)"]
    assert sample_classes(C, 600, seed=3) == sample_classes(C, 600, seed=3)


def test_census_object(algebras):
    c = census(algebras["g45ab(0.5, 0.5)"], 300)
    assert c.ok and c.n_classes == 1 == c.expected


def automorphism_images(C, q, rng, n):
    for _ in range(n):
        U = adjoint_flow(C, rng.standard_normal(4), 1.0)
        yield Subspace.span((U @ q.basis).T)


@pytest.mark.parametrize("fam", GENERATING, ids=lambda f: f.label)
def test_inner_automorphism_invariance(fam, rng):
    # 100 subspaces over the families, 20 images each; generic and seeded ones
    C = build_algebra(fam)
    data = AlgebraData.of(C)
    qs = [random_generating_q(C, rng) for _ in range(2)] + ideal_seeds(C, rng, data, 1)[:1]
    for q in qs:
        fp = fingerprint(C, q, data)
        images = np.array([p.basis for p in automorphism_images(C, q, rng, 20)])
        assert all(f == fp for f in fingerprints(C, images, data))


def test_scaling_automorphisms(rng):
    # E_i -> d_i E_i preserves the bracket table of g41 when d1 = d2 d4, d2 = d3 d4
    C = build_algebra("g41")
    for _ in range(20):
        d3, d4 = rng.uniform(0.3, 3, 2) * rng.choice([-1, 1], 2)
        D = np.diag([d3 * d4 * d4, d3 * d4, d3, d4])
        assert np.allclose(C.change_basis(np.linalg.inv(D)).c, C.c)
        q = random_generating_q(C, rng)
        assert fingerprint(C, Subspace.span((D @ q.basis).T)) == fingerprint(C, q)


@pytest.mark.parametrize("fam", GENERATING, ids=lambda f: f.label)
def test_at_most_one_ideal_in_q(fam, rng):
    C = build_algebra(fam)
    data = AlgebraData.of(C)
    for q in ideal_seeds(C, rng, data, 4) + lattice_seeds(C):
        found = contained_ideals(C, q, data)
        assert len(found) <= 1


@pytest.mark.parametrize("fam", GENERATING, ids=lambda f: f.label)
def test_batch_matches_scalar(fam, rng):
    C = build_algebra(fam)
    data = AlgebraData.of(C)
    qs = [random_subspace(rng) for _ in range(30)] + ideal_seeds(C, rng, data, 2)
    qs += plane_seeds(C, rng, 20) + lattice_seeds(C)[::4]
    batch = fingerprints(C, np.array([q.basis for q in qs]), data)
    for q, fp in zip(qs, batch):
        if generates(C, q):
            assert fp == fingerprint(C, q, data)
        else:
            assert fp is None


def test_killing_signature_examples(algebras):
    assert killing_signature(algebras["g41"], span(E[1], E[2], E[3])) == (0, 0, 3)
    # g37 is so(3)-like: definite on its 3-dim part
    sig = killing_signature(algebras["g37+g1"], span(E[0], E[1], E[2]))
    assert sig in ((3, 0, 0), (0, 3, 0))


def test_spectral_types_cover_g36(algebras):
    counts = sample_classes(algebras["g36+g1"], 1000)
    types = {fp.ad_e2_spectral_type for fp in counts}
    assert {SpectralType.REAL_DISTINCT, SpectralType.COMPLEX_PAIR, SpectralType.NULL} <= types


@pytest.mark.parametrize("fam", [f for f in REPRESENTATIVES if f.name in ("g36+g1", "g47", "g41", "g410",
                                                                          "g34a+g1", "g45ab")],
                         ids=lambda f: f.label)
def test_census_spot_checks(fam):
    assert len(sample_classes(build_algebra(fam), 2000)) == catalog_k(fam)
