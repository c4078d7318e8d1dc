import os
import shutil
import tempfile
from pathlib import Path
from unittest import TestCase

import numpy as np
import pandas as pd

from funcsir.base import DataError, Dataset
from funcsir.link import CvReport, CvScheme
from funcsir.simgen import gen_example1
from funcsir.sir import diagnose
from funcsir.store import (
    atomic_write,
    read_curves,
    read_dataset,
    read_indices,
    read_kernel_matrix,
    write_cv_report,
    write_dataset,
    write_diagnostics,
    write_indices,
    write_kernel_matrix,
    write_predictions,
    xi_sidecar_path,
)


class TestDatasetFiles(TestCase):
    def setUp(self):
        """Set up a scratch directory before each test"""
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        """Remove the scratch directory after each test"""
        shutil.rmtree(self.temp_dir)

    def path(self, name: str) -> str:
        return os.path.join(self.temp_dir, name)

    def write_text(self, name: str, text: str) -> str:
        path = self.path(name)
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        return path

    def test_round_trip_is_exact(self):
        """Test that written datasets read back to the same floats"""
        d = gen_example1(n=20, J=7, seed=0).dataset
        path = self.path("data.csv")
        write_dataset(d, path)
        loaded = read_dataset(path)
        np.testing.assert_array_equal(loaded.grid, d.grid)
        np.testing.assert_array_equal(loaded.x, d.x)
        np.testing.assert_array_equal(loaded.y, d.y)

    def test_header(self):
        """Test that grid values name the curve columns and y comes last"""
        d = Dataset(grid=[0.25, 0.5, 1.0], x=np.ones((2, 3)), y=[1.0, 2.0])
        path = self.path("data.csv")
        write_dataset(d, path)
        with open(path, encoding="utf-8") as f:
            self.assertEqual(f.readline().strip(), "0.25,0.5,1,y")

    def test_curves_without_response(self):
        """Test that an all-numeric header means no response column"""
        path = self.write_text("curves.csv", "0.5,1\n1,2\n3,4\n")
        grid, x, y = read_curves(path)
        np.testing.assert_array_equal(grid, [0.5, 1.0])
        np.testing.assert_array_equal(x, [[1.0, 2.0], [3.0, 4.0]])
        self.assertIsNone(y)
        with self.assertRaises(DataError):
            read_dataset(path)

    def test_non_numeric_cell(self):
        """Test the location of a non-numeric cell"""
        path = self.write_text("bad.csv", "0.5,1,y\n1,2,3\n1,abc,3\n")
        with self.assertRaises(DataError) as ctx:
            read_dataset(path)
        self.assertEqual(ctx.exception.row, 2)
        self.assertEqual(ctx.exception.column, "1")

    def test_non_finite_cell(self):
        """Test that nan and inf cells are rejected with their location"""
        path = self.write_text("nan.csv", "0.5,1,y\n1,2,3\n4,5,6\n7,8,inf\n")
        with self.assertRaises(DataError) as ctx:
            read_dataset(path)
        self.assertEqual(ctx.exception.row, 3)
        self.assertEqual(ctx.exception.column, "y")

    def test_long_row(self):
        """Test that a row with extra fields is located"""
        path = self.write_text("long.csv", "0.5,1,y\n1,2,3\n1,2,3,4\n")
        with self.assertRaises(DataError) as ctx:
            read_dataset(path)
        self.assertEqual(ctx.exception.row, 2)

    def test_short_row(self):
        """Test that a row with missing fields is located"""
        path = self.write_text("short.csv", "0.5,1,y\n1,2,3\n1,2\n4,5,6\n")
        with self.assertRaises(DataError) as ctx:
            read_dataset(path)
        self.assertEqual(ctx.exception.row, 2)

    def test_grid_must_increase(self):
        """Test that a decreasing grid header is rejected at its column"""
        path = self.write_text("grid.csv", "1,0.5,y\n1,2,3\n4,5,6\n")
        with self.assertRaises(DataError) as ctx:
            read_dataset(path)
        self.assertEqual(ctx.exception.column, "0.5")

    def test_missing_and_empty_files(self):
        """Test that absent and empty files are data errors"""
        with self.assertRaises(DataError):
            read_dataset(self.path("absent.csv"))
        with self.assertRaises(DataError):
            read_dataset(self.write_text("empty.csv", ""))

    def test_single_observation(self):
        """Test that one observation is not a dataset"""
        with self.assertRaises(DataError):
            read_dataset(self.write_text("one.csv", "0.5,1,y\n1,2,3\n"))

    def test_logit10(self):
        """Test the log-odds transform and its domain check"""
        path = self.write_text("fat.csv", "0.5,1,y\n1,2,0.5\n3,4,0.9\n")
        d = read_dataset(path, transform="logit10")
        np.testing.assert_allclose(d.y, [0.0, np.log10(9.0)])
        bad = self.write_text("fat_bad.csv", "0.5,1,y\n1,2,0.5\n3,4,1\n")
        with self.assertRaises(DataError) as ctx:
            read_dataset(bad, transform="logit10")
        self.assertEqual(ctx.exception.row, 2)
        self.assertEqual(ctx.exception.column, "y")


class TestOtherFiles(TestCase):
    def setUp(self):
        """Set up a scratch directory before each test"""
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        """Remove the scratch directory after each test"""
        shutil.rmtree(self.temp_dir)

    def path(self, name: str) -> str:
        return os.path.join(self.temp_dir, name)

    def test_atomic_write(self):
        """Test parent creation, overwrite and no leftover temporary files"""
        target = self.path("nested/dir/out.txt")
        atomic_write(target, "first\n")
        atomic_write(target, "second\n")
        with open(target, encoding="utf-8") as f:
            self.assertEqual(f.read(), "second\n")
        self.assertEqual(os.listdir(os.path.dirname(target)), ["out.txt"])

    def test_sidecar_path(self):
        """Test the index sidecar name"""
        self.assertEqual(xi_sidecar_path("out/data.csv"), Path("out/data.xi.csv"))

    def test_indices(self):
        """Test index files read back exactly"""
        xi = np.random.default_rng(0).standard_normal((6, 2))
        path = self.path("data.xi.csv")
        write_indices(xi, path)
        with open(path, encoding="utf-8") as f:
            self.assertEqual(f.readline().strip(), "xi_1,xi_2")
        np.testing.assert_array_equal(read_indices(path), xi)

    def test_kernel_matrix(self):
        """Test kernel matrices read back exactly and row labels are checked"""
        grid = np.array([0.1, 0.5, 0.9])
        matrix = np.minimum.outer(grid, grid)
        path = self.path("kernel.csv")
        write_kernel_matrix(grid, matrix, path)
        g, m = read_kernel_matrix(path)
        np.testing.assert_array_equal(g, grid)
        np.testing.assert_array_equal(m, matrix)

        bad = self.path("bad_kernel.csv")
        write_kernel_matrix(grid, matrix, bad)
        text = Path(bad).read_text(encoding="utf-8").replace("\n0.5,", "\n0.6,")
        Path(bad).write_text(text, encoding="utf-8")
        with self.assertRaises(DataError):
            read_kernel_matrix(bad)

    def test_cv_report(self):
        """Test the CV table with an infeasible candidate"""
        report = CvReport(
            k_grid=[1, 2],
            cv_values=[1.5, float("nan")],
            cv_se=[0.0, float("nan")],
            k_star=1,
            scheme=CvScheme(),
            seed=0,
            notes=[None, "infeasible: k=2 outside [1, 1]"],
            n_folds=10,
            n_held_out=10,
            significant=False,
        )
        path = self.path("cv.csv")
        write_cv_report(report, path)
        df = pd.read_csv(path)
        self.assertEqual(list(df.columns), ["k", "cv", "cv_se", "note"])
        self.assertEqual(df["cv"].iloc[0], 1.5)
        self.assertTrue(np.isnan(df["cv"].iloc[1]))
        self.assertTrue(df["note"].iloc[1].startswith("infeasible"))

    def test_diagnostics(self):
        """Test the long diagnostics table"""
        report = diagnose(gen_example1(n=40, J=8, seed=1).dataset, k_max=4, S=4)
        path = self.path("diag.csv")
        write_diagnostics(report, path)
        df = pd.read_csv(path)
        self.assertEqual(list(df.columns), ["series", "x", "y"])
        self.assertEqual(len(df), 4 + 4 + 8)

    def test_predictions(self):
        """Test the prediction table columns"""
        path = self.path("pred.csv")
        write_predictions([1.0, 2.0], np.array([[0.1, 0.2], [0.3, 0.4]]), path, y=[1.5, 2.5])
        df = pd.read_csv(path)
        self.assertEqual(list(df.columns), ["y_hat", "xi_1", "xi_2", "y"])
        np.testing.assert_array_equal(df["y"], [1.5, 2.5])
