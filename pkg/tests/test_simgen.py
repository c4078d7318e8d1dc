"""Tests for process generators and simulation designs"""

import numpy as np
import pytest
from pydantic import ValidationError

from funcsir.base import InputError
from funcsir.rkhs import BrownianKernel, FBMKernel
from funcsir.simgen import (
    EXAMPLE2_INDEX_POINTS,
    SimConfig,
    bm_eigenvalue,
    brownian_path,
    brownian_paths,
    derive_seed,
    example1_beta,
    fgp_factor,
    fgp_paths,
    gen_example1,
    gen_example2,
    gen_finite_dim,
    gen_null,
    make_rng,
    simulate,
)


class TestProcesses:
    def test_seeded(self):
        """Test that equal seeds give equal paths and different seeds do not"""
        grid = np.arange(1, 11) / 10
        np.testing.assert_array_equal(brownian_path(grid, 3), brownian_path(grid, 3))
        assert not np.array_equal(brownian_path(grid, 3), brownian_path(grid, 4))

    def test_brownian_covariance(self):
        """Test the empirical covariance of Brownian paths against min(s, t)"""
        grid = np.array([0.25, 0.5, 1.0])
        x = brownian_paths(grid, 50_000, make_rng(0))
        np.testing.assert_allclose(x.T @ x / x.shape[0], BrownianKernel().gram(grid), atol=0.03)

    def test_brownian_rejects_negative_grid(self):
        """Test that paths start at time 0"""
        with pytest.raises(InputError):
            brownian_paths([-0.5, 0.5], 2, make_rng(0))

    def test_paths_reject_grid_past_one(self):
        """Test that path grids end by time 1"""
        with pytest.raises(InputError, match=r"grid must lie in \[0, 1\]"):
            brownian_paths([0.5, 1.5], 2, make_rng(0))
        with pytest.raises(InputError, match=r"grid must lie in \[0, 1\]"):
            fgp_factor([0.5, 1.5], 0.75)

    def test_fgp_factor_squares_to_gram(self):
        """Test that the factor is a symmetric square root of the fBm Gram matrix"""
        grid = np.arange(1, 31) / 30
        factor = fgp_factor(grid, 0.75)
        np.testing.assert_array_equal(factor, factor.T)
        np.testing.assert_allclose(factor @ factor, FBMKernel(0.75).gram(grid), atol=1e-10)

    def test_fgp_covariance(self):
        """Test the empirical covariance of fractional paths"""
        grid = np.array([0.2, 0.6, 1.0])
        x = fgp_paths(grid, 0.75, 50_000, make_rng(1))
        np.testing.assert_allclose(x.T @ x / x.shape[0], FBMKernel(0.75).gram(grid), atol=0.03)

    def test_derive_seed(self):
        """Test that task seeds are stable, distinct and fit in 64 bits"""
        assert derive_seed(7, 1) == derive_seed(7, 1)
        seeds = {derive_seed(7, task) for task in range(50)}
        assert len(seeds) == 50
        assert all(0 <= s < 2**64 for s in seeds)


class TestDesigns:
    def test_example1(self):
        """Test shapes and the exponential single-index response"""
        sim = gen_example1(noise_sd=0.0, seed=0)
        d = sim.dataset
        assert (d.n, d.J) == (100, 100)
        np.testing.assert_allclose(d.grid, np.arange(1, 101) / 100)
        np.testing.assert_allclose(sim.xi_true[:, 0], d.x @ example1_beta(d.grid) / 100)
        np.testing.assert_array_equal(d.y, np.exp(sim.xi_true[:, 0]))
        assert sim.beta_true.shape == (100, 1)

    def test_example1_noise_level(self):
        """Test that the residual spread matches noise_sd"""
        sim = gen_example1(n=4000, J=20, noise_sd=0.3, seed=1)
        residual = sim.dataset.y - np.exp(sim.xi_true[:, 0])
        assert np.std(residual) == pytest.approx(0.3, abs=0.02)

    def test_example2(self):
        """Test the six-point index on the 120 point grid"""
        sim = gen_example2(n=30, noise_sd=0.0, seed=2)
        d = sim.dataset
        assert d.J == 120
        assert d.grid[0] == pytest.approx(1 / 121)
        columns = [i - 1 for i in EXAMPLE2_INDEX_POINTS]
        np.testing.assert_allclose(sim.xi_true[:, 0], d.x[:, columns].sum(axis=1))
        np.testing.assert_allclose(d.y, np.arctan(sim.xi_true[:, 0]))
        assert sim.beta_true is None

    def test_finite_dim_default_beta(self):
        """Test beta = (1, 1, 0, 0, 0) / sqrt(2) and the identity link"""
        sim = gen_finite_dim(n=50, noise_sd=0.0, seed=3)
        np.testing.assert_allclose(sim.beta_true[:, 0], np.array([1, 1, 0, 0, 0]) / np.sqrt(2))
        np.testing.assert_allclose(sim.dataset.y, sim.dataset.x @ sim.beta_true[:, 0])

    def test_finite_dim_links(self):
        """Test the exp link and validation of beta and the link name"""
        sim = gen_finite_dim(n=20, dim=3, beta=[0.0, 0.0, 1.0], link="exp", noise_sd=0.0, seed=4)
        np.testing.assert_allclose(sim.dataset.y, np.exp(sim.dataset.x[:, 2]))
        with pytest.raises(InputError, match="beta"):
            gen_finite_dim(n=20, dim=3, beta=[1.0, 0.0])
        with pytest.raises(InputError, match="link"):
            gen_finite_dim(n=20, link="cube")

    def test_null(self):
        """Test that the null design carries no index"""
        sim = gen_null(n=40, J=10, seed=5)
        assert sim.xi_true.shape == (40, 0)
        assert sim.dataset.J == 10
        assert np.std(gen_null(n=40, J=10, noise_sd=0.0, seed=5).dataset.y) > 0

    def test_bm_eigenvalue(self):
        """Test the Brownian operator eigenvalues"""
        assert bm_eigenvalue(1) == pytest.approx(4 / np.pi**2)
        assert bm_eigenvalue(2) == pytest.approx(4 / (9 * np.pi**2))
        with pytest.raises(InputError):
            bm_eigenvalue(0)


class TestSimulate:
    @pytest.mark.parametrize(
        "config, shape",
        [
            (SimConfig(model="example1", n=30, grid_size=15), (30, 15)),
            (SimConfig(model="example2", n=25), (25, 120)),
            (SimConfig(model="finite_dim", n=50, dim=4), (50, 4)),
            (SimConfig(model="null_model"), (100, 100)),
        ],
    )
    def test_dispatch(self, config, shape):
        """Test that each model name runs its design"""
        d = simulate(config).dataset
        assert (d.n, d.J) == shape

    def test_reproducible(self):
        """Test that a config fully determines the data"""
        config = SimConfig(model="example1", n=20, grid_size=10, seed=11)
        np.testing.assert_array_equal(simulate(config).dataset.x, simulate(config).dataset.x)
        np.testing.assert_array_equal(simulate(config).dataset.y, simulate(config).dataset.y)

    @pytest.mark.parametrize("kwargs", [{"n": 1}, {"hurst": 1.0}, {"noise_sd": -0.1}, {"model": "example3"}])
    def test_rejects(self, kwargs):
        """Test configuration validation"""
        with pytest.raises(ValidationError):
            SimConfig(**kwargs)
