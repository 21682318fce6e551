import numpy as np
import pytest

from homcontract import liealg, smallmat
from homcontract.liealg import adjoint, bracket, check_ad_invariance, orthonormalize_basis
from homcontract.spaces import SO3_BASIS

AX, AY, AZ = SO3_BASIS


def test_bracket_antisymmetry():
    assert np.allclose(bracket(AX, AX), 0.0)


def test_bracket_structure_constants():
    # commutators of the standard skew basis cycle: [AX, AY] = AZ etc.
    assert np.allclose(bracket(AX, AY), AZ, atol=1e-15)
    assert np.allclose(bracket(AY, AX), -AZ, atol=1e-15)
    assert np.allclose(bracket(AY, AZ), AX, atol=1e-15)


def test_bracket_shape_mismatch():
    with pytest.raises(ValueError):
        bracket(AX, np.zeros((2, 2)))


def test_adjoint_identity():
    assert np.allclose(adjoint(np.eye(3), AX), AX)


def test_adjoint_fixes_own_axis():
    g = smallmat.expm(0.77 * AZ)
    assert np.allclose(adjoint(g, AZ), AZ, atol=1e-12)


def test_adjoint_rotates_generators():
    g = smallmat.expm((np.pi / 2.0) * AZ)
    assert np.allclose(adjoint(g, AX), AY, atol=1e-12)


def test_adjoint_homomorphism(rng):
    g1 = smallmat.expm(smallmat.hat3(rng.normal(size=3)))
    g2 = smallmat.expm(smallmat.hat3(rng.normal(size=3)))
    X = smallmat.hat3(rng.normal(size=3))
    assert np.allclose(adjoint(g1 @ g2, X), adjoint(g1, adjoint(g2, X)), atol=1e-10)


def test_adjoint_derivative_is_bracket(rng):
    # d/dt Ad_{exp(tX)} Y at t=0 equals [X, Y]
    X = smallmat.hat3(rng.normal(size=3))
    Y = smallmat.hat3(rng.normal(size=3))
    h = 1e-6
    fd = (adjoint(smallmat.expm(h * X), Y) - adjoint(smallmat.expm(-h * X), Y)) / (2 * h)
    assert np.allclose(fd, bracket(X, Y), atol=1e-6)


def test_jacobi_identity(rng):
    for _ in range(20):
        X, Y, Z = (smallmat.hat3(rng.normal(size=3)) for _ in range(3))
        acc = bracket(X, bracket(Y, Z)) + bracket(Y, bracket(Z, X)) + bracket(Z, bracket(X, Y))
        assert np.max(np.abs(acc)) < 1e-10


class TestProjections:
    def test_h_basis_vector_projects_to_zero(self, sphere):
        assert np.allclose(sphere.dec.project_m(AZ), 0.0, atol=1e-12)

    def test_componentwise(self, sphere):
        assert np.allclose(sphere.dec.project_m(AX + 2.0 * AZ), AX, atol=1e-12)

    def test_symmetric_space_bracket_falls_into_h(self, sphere):
        # [m, m] subset h is the symmetric-space property
        assert np.allclose(sphere.dec.project_m(bracket(AX, AY)), 0.0, atol=1e-12)

    def test_split_reconstructs(self, sphere, rng):
        X = smallmat.hat3(rng.normal(size=3))
        back = sphere.dec.project_m(X) + sphere.dec.project_h(X)
        assert np.allclose(back, X, atol=1e-10)

    def test_idempotent(self, sphere, rng):
        X = smallmat.hat3(rng.normal(size=3))
        P = sphere.dec.project_m(X)
        assert np.allclose(sphere.dec.project_m(P), P, atol=1e-12)

    def test_rejects_outside_algebra(self, sphere):
        with pytest.raises(ValueError):
            sphere.dec.split_coords(np.eye(3))


class TestOrthonormalize:
    def test_already_orthonormal_unchanged(self):
        out = orthonormalize_basis(np.stack([AX, AY]), trace_scale=0.5)
        assert np.allclose(out, np.stack([AX, AY]), atol=1e-12)

    def test_normalizes(self):
        out = orthonormalize_basis(np.stack([2.0 * AX]), trace_scale=0.5)
        assert np.allclose(out, np.stack([AX]), atol=1e-12)

    def test_one_gram_schmidt_step(self):
        out = orthonormalize_basis(np.stack([AX, AX + AY]), trace_scale=0.5)
        assert np.allclose(out, np.stack([AX, AY]), atol=1e-12)

    def test_first_vector_stays_parallel(self, rng):
        raw = np.stack([AX + 0.5 * AY, AY, AZ])
        out = orthonormalize_basis(raw, trace_scale=0.5)
        cross = out[0] / np.linalg.norm(out[0]) - raw[0] / np.linalg.norm(raw[0])
        assert np.max(np.abs(cross)) < 1e-12

    def test_gram_is_identity(self, rng):
        raw = np.stack([AX + 0.3 * AZ, AY - AX, AZ])
        out = orthonormalize_basis(raw, trace_scale=0.5)
        flat = out.reshape(3, -1)
        assert np.allclose(0.5 * flat @ flat.T, np.eye(3), atol=1e-12)

    def test_rank_deficient_raises(self):
        with pytest.raises(ValueError):
            orthonormalize_basis(np.stack([AX, AX]), trace_scale=0.5)


class TestAdInvariance:
    def test_sphere_rotations_about_pole_pass(self, sphere):
        samples = [smallmat.expm(a * AZ) for a in (0.3, 1.7, 3.0)]
        report = check_ad_invariance(sphere.dec, samples, in_h=sphere.in_h)
        assert report.passed

    def test_trivial_subgroup_vacuous(self, so3):
        report = check_ad_invariance(so3.dec, [np.eye(3)])
        assert report.passed and report.max_leak == 0.0

    def test_corrupted_decomposition_fails(self):
        # claim m = span(AX, AZ) against H = rotations about z: Ad leaks into AY
        dec = liealg.ReductiveDecomposition(
            h_basis=np.stack([AY]),
            m_basis=orthonormalize_basis(np.stack([AX, AZ]), trace_scale=0.5),
            trace_scale=0.5,
        )
        samples = [smallmat.expm(a * AZ) for a in (0.3, 1.7)]
        report = check_ad_invariance(dec, samples)
        assert not report.passed

    def test_non_member_sample_raises(self, sphere):
        with pytest.raises(ValueError):
            check_ad_invariance(sphere.dec, [smallmat.expm(0.5 * AX)], in_h=sphere.in_h)
