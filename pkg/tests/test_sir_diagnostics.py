"""Tests for the technical-condition diagnostics"""

import numpy as np
import pytest

from funcsir.base import InputError
from funcsir.rkhs import BrownianKernel
from funcsir.simgen import gen_example1
from funcsir.sir import diagnose, eigengap_ratios, fit, scaling_table
from funcsir.spectral import sym_eigendecomp


def test_eigengap_ratios():
    """Test rho_m / J on diag(5, 3, 3, 1)"""
    d = sym_eigendecomp(np.diag([5.0, 3.0, 3.0, 1.0]))
    np.testing.assert_allclose(eigengap_ratios(d, 4), [0.5, 0.5, 0.5, 0.5])


def test_eigengap_ratios_undefined():
    """Test that a single distinct eigenvalue gives nan ratios"""
    assert np.all(np.isnan(eigengap_ratios(sym_eigendecomp(2.0 * np.eye(3)), 2)))


def test_scaling_table_brownian():
    """Test that lambda_j / J approaches 4 / ((2j - 1)^2 pi^2) as the grid refines"""
    errors = []
    for J in (50, 200):
        values = sym_eigendecomp(BrownianKernel().gram(np.arange(1, J + 1) / J)).eigenvalues
        table = scaling_table(values, 3)
        assert list(table.columns) == ["j", "scaled", "brownian", "rel_error"]
        assert table["brownian"].iloc[0] == pytest.approx(4.0 / np.pi**2)
        errors.append(table["rel_error"].iloc[0])
    assert errors[1] < errors[0] < 0.05


def test_scaling_table_capped_by_size():
    """Test that the table never has more rows than eigenvalues"""
    assert len(scaling_table([2.0, 1.0], 5)) == 2


class TestDiagnose:
    def test_report(self):
        """Test the report fields on a Brownian design"""
        d = gen_example1(n=100, J=30, seed=0).dataset
        report = diagnose(d, k_max=8, S=10, brownian=True)
        assert report.J == 30
        assert report.residual_trace.shape == (8,)
        assert report.eigengap_ratio.shape == (8,)
        assert report.covariance_eigenvalues.shape == (30,)
        assert 1 <= report.suggested_rank <= 30
        assert report.variance_explained[report.suggested_rank - 1] >= 0.99
        assert len(report.scaling) == 8

    def test_matches_fit_diagnostics(self):
        """Test that the sweep agrees with the diagnostics attached to a fit"""
        d = gen_example1(n=80, J=20, seed=1).dataset
        report = diagnose(d, k_max=20, S=8)
        result = fit(d, k=5, S=8)
        np.testing.assert_allclose(report.residual_trace, result.diagnostics.residual_trace)
        assert report.eigengap_ratio[4] == pytest.approx(result.diagnostics.eigengap_ratio)

    def test_to_frame(self):
        """Test the long plot-ready table"""
        d = gen_example1(n=60, J=12, seed=2).dataset
        frame = diagnose(d, k_max=5, S=6, brownian=True).to_frame()
        assert list(frame.columns) == ["series", "x", "y"]
        counts = frame["series"].value_counts().to_dict()
        assert counts == {
            "variance_explained": 12,
            "residual_trace": 5,
            "eigengap_ratio": 5,
            "scaled_eigenvalue": 5,
            "brownian_eigenvalue": 5,
        }

    def test_to_frame_without_scaling(self):
        """Test that scaling series only appear for Brownian designs"""
        d = gen_example1(n=60, J=12, seed=3).dataset
        frame = diagnose(d, k_max=3, S=6).to_frame()
        assert set(frame["series"]) == {"residual_trace", "eigengap_ratio", "variance_explained"}

    @pytest.mark.parametrize("k_max", [0, 13])
    def test_k_max_range(self, k_max):
        """Test that k_max must lie in [1, J]"""
        d = gen_example1(n=60, J=12, seed=4).dataset
        with pytest.raises(InputError, match="k_max"):
            diagnose(d, k_max=k_max, S=6)
