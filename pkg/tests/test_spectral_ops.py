"""Tests for generalized powers, projections, truncation, eigengaps and norms"""

import itertools

import numpy as np
import pytest

from funcsir.base import EigengapWarning, InputError, RankPolicy, UndefinedGapError
from funcsir.rkhs import BrownianKernel
from funcsir.spectral import (
    eigengap,
    generalized_power,
    hs_norm,
    min_eigenvalue,
    moore_penrose,
    retained_rank,
    sym_eigendecomp,
    top_k_projection,
    truncate_covariance,
    truncated_power,
)


def random_psd(rng: np.random.Generator, dim: int, rank: int) -> np.ndarray:
    b = rng.standard_normal((dim, rank))
    return b @ b.T


def brownian_gram(J: int) -> np.ndarray:
    return BrownianKernel().gram(np.arange(1, J + 1) / J)


class TestGeneralizedPower:
    def test_identity_inverse(self):
        """Test that the inverse of the identity is the identity"""
        np.testing.assert_allclose(generalized_power(sym_eigendecomp(np.eye(3)), -1.0), np.eye(3))

    def test_square_root(self):
        """Test diag(4, 0) ** 0.5 = diag(2, 0)"""
        out = generalized_power(sym_eigendecomp(np.diag([4.0, 0.0])), 0.5)
        np.testing.assert_allclose(out, np.diag([2.0, 0.0]), atol=1e-12)

    def test_pseudo_inverse(self):
        """Test that alpha = -1 on diag(2, 0) gives the Moore-Penrose inverse"""
        out = generalized_power(sym_eigendecomp(np.diag([2.0, 0.0])), -1.0)
        np.testing.assert_allclose(out, np.diag([0.5, 0.0]), atol=1e-12)

    def test_zero_power_is_range_projection(self):
        """Test that alpha = 0 projects onto the retained range"""
        rng = np.random.default_rng(1)
        a = random_psd(rng, 6, 3)
        p = generalized_power(sym_eigendecomp(a), 0.0)
        np.testing.assert_allclose(p @ p, p, atol=1e-9)
        assert np.trace(p) == pytest.approx(3.0, abs=1e-9)
        np.testing.assert_allclose(p @ a, a, atol=1e-9)

    def test_rejects_non_finite_alpha(self):
        """Test that alpha must be finite"""
        with pytest.raises(InputError):
            generalized_power(sym_eigendecomp(np.eye(2)), np.inf)

    def test_power_laws(self):
        """Test A^a A^b = A^(a+b) on the retained range"""
        rng = np.random.default_rng(2)
        powers = [-1.0, -0.5, 0.0, 0.5, 1.0]
        for _ in range(10):
            dim = int(rng.integers(2, 9))
            a = random_psd(rng, dim, int(rng.integers(1, dim + 1)))
            d = sym_eigendecomp(a)
            for x, y in itertools.product(powers, powers):
                lhs = generalized_power(d, x) @ generalized_power(d, y)
                rhs = generalized_power(d, x + y)
                scale = max(1.0, np.linalg.norm(rhs))
                assert np.linalg.norm(lhs - rhs) <= 1e-8 * scale

    def test_rank_policy(self):
        """Test that the policy decides which eigenvalues count as zero"""
        d = sym_eigendecomp(np.diag([1.0, 1e-6, 0.0]))
        assert retained_rank(d) == 2
        assert retained_rank(d, RankPolicy(rel_tol=1e-3)) == 1
        assert retained_rank(d, RankPolicy(abs_floor=2.0)) == 0


class TestMoorePenrose:
    def test_diagonal(self):
        """Test diag(5, 2, 0)^- = diag(0.2, 0.5, 0)"""
        out = moore_penrose(sym_eigendecomp(np.diag([5.0, 2.0, 0.0])))
        np.testing.assert_allclose(out, np.diag([0.2, 0.5, 0.0]), atol=1e-12)

    def test_rank_one_projector(self):
        """Test that a rank-one projector is its own pseudo-inverse"""
        u = np.array([1.0, 2.0, 2.0]) / 3.0
        a = np.outer(u, u)
        np.testing.assert_allclose(moore_penrose(sym_eigendecomp(a)), a, atol=1e-12)

    def test_penrose_identities(self):
        """Test the four Penrose identities on random PSD matrices of mixed rank"""
        rng = np.random.default_rng(4)
        for _ in range(200):
            dim = int(rng.integers(1, 13))
            a = random_psd(rng, dim, int(rng.integers(1, dim + 1)))
            g = moore_penrose(sym_eigendecomp(a))
            scale = max(1.0, np.linalg.norm(a), np.linalg.norm(g))
            assert np.linalg.norm(a @ g @ a - a) <= 1e-9 * scale
            assert np.linalg.norm(g @ a @ g - g) <= 1e-9 * scale
            np.testing.assert_allclose(a @ g, (a @ g).T, atol=1e-9 * scale)
            np.testing.assert_allclose(g @ a, (g @ a).T, atol=1e-9 * scale)

    def test_agrees_with_numpy(self):
        """Test agreement with numpy's pseudo-inverse on a full-rank matrix"""
        a = brownian_gram(10)
        np.testing.assert_allclose(moore_penrose(sym_eigendecomp(a)), np.linalg.pinv(a), rtol=1e-8, atol=1e-8)


class TestTopKProjection:
    def test_diagonal(self):
        """Test the top-2 projection of diag(3, 2, 1)"""
        p = top_k_projection(sym_eigendecomp(np.diag([3.0, 2.0, 1.0])), 2)
        np.testing.assert_allclose(p, np.diag([1.0, 1.0, 0.0]), atol=1e-12)

    def test_full_rank_is_identity(self):
        """Test that k = dim gives the identity"""
        d = sym_eigendecomp(brownian_gram(6))
        np.testing.assert_allclose(top_k_projection(d, 6), np.eye(6), atol=1e-10)

    def test_idempotent_with_trace_k(self):
        """Test idempotence and trace of random projections"""
        rng = np.random.default_rng(5)
        b = rng.standard_normal((8, 8))
        d = sym_eigendecomp(b + b.T)
        for k in range(1, 9):
            p = top_k_projection(d, k)
            assert hs_norm(p @ p - p) <= 1e-9
            assert np.trace(p) == pytest.approx(k, abs=1e-9)

    def test_tie_warns(self):
        """Test that a tie at the cut is flagged and the result is still produced"""
        d = sym_eigendecomp(np.diag([2.0, 1.0, 1.0]))
        with pytest.warns(EigengapWarning):
            p = top_k_projection(d, 2)
        assert np.trace(p) == pytest.approx(2.0)
        np.testing.assert_array_equal(p, top_k_projection(d, 2))

    @pytest.mark.parametrize("k", [0, 4])
    def test_out_of_range(self, k):
        """Test that k must lie in [1, dim]"""
        with pytest.raises(InputError, match="k must lie"):
            top_k_projection(sym_eigendecomp(np.eye(3)), k)


class TestTruncateCovariance:
    def test_diagonal(self):
        """Test truncation of diag(3, 2, 1) at k = 2"""
        np.testing.assert_allclose(
            truncate_covariance(np.diag([3.0, 2.0, 1.0]), 2), np.diag([3.0, 2.0, 0.0]), atol=1e-12
        )

    def test_full_rank_returns_input(self):
        """Test that k = dim reproduces the matrix"""
        a = brownian_gram(7)
        np.testing.assert_allclose(truncate_covariance(a, 7), a, atol=1e-12)

    def test_brownian_oracle(self):
        """Test the rank-3 truncation of a 50 point Brownian Gram matrix against numpy's eigh"""
        a = brownian_gram(50)
        values, vectors = np.linalg.eigh(a)
        oracle = sum(values[-j] * np.outer(vectors[:, -j], vectors[:, -j]) for j in (1, 2, 3))
        np.testing.assert_allclose(truncate_covariance(a, 3), oracle, atol=1e-9)

    def test_monotone_in_k(self):
        """Test that R_k' - R_k is PSD for k' >= k"""
        a = brownian_gram(12)
        for k in range(1, 12):
            diff = truncate_covariance(a, k + 1) - truncate_covariance(a, k)
            assert min_eigenvalue(diff) >= -1e-9

    def test_rejects_indefinite(self):
        """Test that an indefinite matrix is rejected"""
        with pytest.raises(InputError, match="positive semi-definite"):
            truncate_covariance(np.diag([1.0, -1.0]), 1)

    def test_truncated_power_matches_composition(self):
        """Test that truncated_power equals the power of the truncated matrix"""
        a = brownian_gram(9)
        d = sym_eigendecomp(a)
        for alpha in (-1.0, -0.5, 1.0):
            direct = generalized_power(sym_eigendecomp(truncate_covariance(a, 4)), alpha)
            np.testing.assert_allclose(truncated_power(d, 4, alpha), direct, rtol=1e-7, atol=1e-8)


def brute_force_gap(values: np.ndarray, m: int) -> float:
    target = values[m - 1]
    return min(abs(v - target) for v in values if v != target)


class TestEigengap:
    def test_examples(self):
        """Test eigengaps of diag(5, 3, 3, 1)"""
        d = sym_eigendecomp(np.diag([5.0, 3.0, 3.0, 1.0]))
        assert eigengap(d, 1) == pytest.approx(2.0)
        assert eigengap(d, 2) == pytest.approx(2.0)
        assert eigengap(d, 4) == pytest.approx(2.0)

    def test_brute_force(self):
        """Test agreement with an exhaustive scan on random matrices and a Brownian Gram matrix"""
        rng = np.random.default_rng(6)
        matrices = [brownian_gram(100)]
        for _ in range(200):
            dim = int(rng.integers(2, 10))
            b = rng.standard_normal((dim, dim))
            matrices.append(b + b.T)
        for a in matrices:
            d = sym_eigendecomp(a)
            for m in (1, d.source_dim):
                assert eigengap(d, m) == brute_force_gap(d.eigenvalues, m)

    def test_undefined(self):
        """Test that a single distinct eigenvalue has no gap"""
        with pytest.raises(UndefinedGapError):
            eigengap(sym_eigendecomp(2.0 * np.eye(3)), 1)

    def test_policy_merges_rounding_ties(self):
        """Test that eigenvalues within rel_tol * lambda_1 count as equal under a policy"""
        d = sym_eigendecomp(np.diag([2.0, 1.0 + 1e-14, 1.0]))
        assert eigengap(d, 2, RankPolicy()) == pytest.approx(1.0)
        assert eigengap(d, 2) == pytest.approx(1e-14, rel=0.1)


class TestNorms:
    def test_examples(self):
        """Test the HS norm of diag(3, 4) and of zero"""
        assert hs_norm(np.diag([3.0, 4.0])) == pytest.approx(5.0)
        assert hs_norm(np.zeros((3, 3))) == 0.0

    def test_direct_summation(self):
        """Test against direct summation and the operator norm bound"""
        rng = np.random.default_rng(7)
        a = rng.standard_normal((5, 5))
        assert hs_norm(a) == pytest.approx(np.sqrt(sum(v * v for v in a.ravel())), rel=1e-12)
        assert hs_norm(a) >= np.linalg.norm(a, 2)
        assert hs_norm(a @ a) <= hs_norm(a) ** 2 + 1e-12

    def test_rejects_non_finite(self):
        """Test that non-finite entries are rejected"""
        with pytest.raises(InputError):
            hs_norm([[np.nan]])
