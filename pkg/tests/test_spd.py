import math

import numpy as np
import pytest

from covcompose import spd
from covcompose.errors import (
    DimensionMismatch,
    NotNearlyPSD,
    NotPositiveDefinite,
)
from helpers import random_spd, rel_frobenius


class TestSymEigen:
    def test_identity(self):
        evals, evecs = spd.sym_eigen(np.eye(3))
        assert np.array_equal(evals, np.ones(3))
        assert np.allclose(evecs @ evecs.T, np.eye(3), atol=1e-12)

    def test_diagonal(self):
        evals, evecs = spd.sym_eigen(np.diag([4.0, 1.0]))
        assert np.array_equal(evals, [4.0, 1.0])
        assert np.allclose(np.abs(evecs), np.eye(2), atol=1e-12)
        # sign fix: the dominant component of each eigenvector is positive
        assert evecs[0, 0] > 0 and evecs[1, 1] > 0

    def test_hand_2x2(self):
        evals, _ = spd.sym_eigen(np.array([[2.0, 1.0], [1.0, 2.0]]))
        assert np.allclose(evals, [3.0, 1.0], atol=1e-12)

    def test_reconstruction_and_orthogonality(self):
        rng = np.random.default_rng(10)
        for _ in range(200):
            p = int(rng.integers(2, 9))
            a = rng.normal(size=(p, p))
            sym = 0.5 * (a + a.T)
            evals, evecs = spd.sym_eigen(sym)
            assert np.all(np.diff(evals) <= 0)
            rebuilt = (evecs * evals) @ evecs.T
            assert rel_frobenius(rebuilt, sym) <= 1e-9
            assert np.abs(evecs.T @ evecs - np.eye(p)).max() <= 1e-10

    def test_deterministic(self):
        rng = np.random.default_rng(11)
        a = random_spd(rng, 5)
        e1 = spd.sym_eigen(a)
        e2 = spd.sym_eigen(a)
        assert np.array_equal(e1[0], e2[0]) and np.array_equal(e1[1], e2[1])

    def test_rejects_nonfinite(self):
        bad = np.array([[1.0, np.nan], [np.nan, 1.0]])
        with pytest.raises(ValueError):
            spd.sym_eigen(bad)


class TestLogExp:
    def test_log_identity_is_zero(self):
        assert np.abs(spd.spd_log(np.eye(4))).max() <= 1e-12

    def test_diag_logs(self):
        out = spd.spd_log(np.diag([math.e, math.e**2]))
        assert np.allclose(out, np.diag([1.0, 2.0]), atol=1e-12)

    def test_scaled_identity(self):
        assert np.allclose(spd.spd_log(math.e * np.eye(2)), np.eye(2), atol=1e-12)

    def test_not_pd_raises(self):
        with pytest.raises(NotPositiveDefinite):
            spd.spd_log(np.diag([1.0, -1.0]))
        with pytest.raises(NotPositiveDefinite):
            spd.spd_log(np.diag([1.0, 0.0]))

    def test_exp_log_roundtrip(self):
        rng = np.random.default_rng(12)
        for _ in range(200):
            p = int(rng.integers(2, 8))
            mat = random_spd(rng, p, log_cond=4.0)
            back = spd.spd_exp(spd.spd_log(mat))
            assert rel_frobenius(back, mat) <= 1e-8


class TestDistances:
    def test_euclidean_values(self):
        p = random_spd(np.random.default_rng(13), 3)
        assert spd.dist_euclidean(p, p) == 0.0
        assert spd.dist_euclidean(np.eye(2), 2 * np.eye(2)) == pytest.approx(math.sqrt(2), abs=1e-14)
        assert spd.dist_euclidean(np.diag([1.0, 1.0]), np.diag([4.0, 1.0])) == pytest.approx(3.0, abs=1e-14)

    def test_logeuclidean_values(self):
        p = random_spd(np.random.default_rng(14), 4)
        assert spd.dist_logeuclidean(p, p) == 0.0
        assert spd.dist_logeuclidean(np.eye(2), math.e * np.eye(2)) == pytest.approx(math.sqrt(2), abs=1e-12)
        assert spd.dist_logeuclidean(np.diag([math.e**2, 1.0]), np.eye(2)) == pytest.approx(2.0, abs=1e-12)

    def test_affine_values(self):
        p = random_spd(np.random.default_rng(15), 4)
        assert spd.dist_affineinvariant(p, p) <= 1e-10
        assert spd.dist_affineinvariant(np.eye(2), np.diag([math.e**2, 1.0])) == pytest.approx(2.0, abs=1e-12)

    def test_dimension_mismatch(self):
        for fn in (spd.dist_euclidean, spd.dist_logeuclidean, spd.dist_affineinvariant):
            with pytest.raises(DimensionMismatch):
                fn(np.eye(2), np.eye(3))

    def test_affine_exact_symmetry(self):
        rng = np.random.default_rng(16)
        for _ in range(100):
            p = random_spd(rng, 5)
            q = random_spd(rng, 5)
            assert spd.dist_affineinvariant(p, q) == spd.dist_affineinvariant(q, p)

    def test_affine_matches_frobenius_log_form(self):
        rng = np.random.default_rng(17)
        for _ in range(200):
            dim = int(rng.integers(2, 8))
            p = random_spd(rng, dim)
            q = random_spd(rng, dim)
            isq = spd.inv_sqrt(p)
            oracle = float(np.linalg.norm(spd.spd_log(spd.symmetrize(isq @ q @ isq)), "fro"))
            assert spd.dist_affineinvariant(p, q) == pytest.approx(oracle, abs=1e-9, rel=1e-9)

    def test_affine_invariance_under_congruence(self):
        rng = np.random.default_rng(18)
        for _ in range(100):
            p = random_spd(rng, 4)
            q = random_spd(rng, 4)
            a = rng.normal(size=(4, 4))
            while abs(np.linalg.det(a)) < 1e-3:
                a = rng.normal(size=(4, 4))
            d0 = spd.dist_affineinvariant(p, q)
            d1 = spd.dist_affineinvariant(a @ p @ a.T, a @ q @ a.T)
            assert abs(d1 - d0) <= 1e-7 * (1.0 + d0)

    def test_logeuclidean_equals_euclidean_of_logs(self):
        rng = np.random.default_rng(19)
        for _ in range(50):
            p = random_spd(rng, 5)
            q = random_spd(rng, 5)
            assert spd.dist_logeuclidean(p, q) == spd.dist_euclidean(spd.spd_log(p), spd.spd_log(q))

    def test_metric_axioms_sampled(self):
        rng = np.random.default_rng(20)
        dists = (spd.dist_euclidean, spd.dist_logeuclidean, spd.dist_affineinvariant)
        for _ in range(60):
            dim = int(rng.choice([2, 5, 7]))
            p, q, r = (random_spd(rng, dim) for _ in range(3))
            for dist in dists:
                assert dist(p, q) == dist(q, p)
                assert dist(p, p) <= 1e-10
                assert dist(p, r) <= dist(p, q) + dist(q, r) + 1e-9


class TestRegularize:
    def test_zero_matrix_gets_floor(self):
        out = spd.regularize(np.zeros((2, 2)))
        assert np.array_equal(out, 1e-10 * np.eye(2))

    def test_identity(self):
        out = spd.regularize(np.eye(3))
        assert np.allclose(out, (1.0 + 1e-6) * np.eye(3), atol=1e-18)

    def test_relative_change_is_small(self):
        rng = np.random.default_rng(21)
        for _ in range(50):
            mat = random_spd(rng, 6)
            out = spd.regularize(mat)
            assert rel_frobenius(out, mat) <= 2e-6

    def test_substantially_negative_raises(self):
        with pytest.raises(NotNearlyPSD):
            spd.regularize(np.diag([1.0, -0.1]))

    def test_rank_deficient_becomes_pd(self):
        v = np.array([1.0, 2.0, 3.0])
        out = spd.regularize(np.outer(v, v))
        assert np.linalg.eigvalsh(out)[0] > 0.0
