"""
Unit tests for experiment dispatch, point sampling and exit statuses.
"""

import csv
import math

import numpy as np
import pytest

from python.lib.errors import SpecValidationError
from python.lib.experiments.runner import (
    default_grid,
    execute,
    expected_scalar,
    list_builtins,
    load_metric,
    random_points,
    resolve_jobs,
    run,
    sample_points,
)
from python.lib.experiments.spec import ExperimentSpec


def read_rows(path):
    lines = [line for line in path.read_text(encoding="utf-8").splitlines() if not line.startswith("#")]
    rows = list(csv.DictReader(lines))
    return [{key: float(value) for key, value in row.items()} for row in rows]


def make_spec(subcommand, manifold, params, out=None, seed=0):
    return ExperimentSpec.from_mapping(
        {"subcommand": subcommand, "manifold": manifold, "params": params, "out": out, "seed": seed}
    )


class TestInputs:
    """Manifold references, worker counts and base points."""

    def test_builtin_reference(self):
        assert load_metric("round_sphere").kind == "round_sphere"

    def test_file_reference(self, manifold_dir):
        metric = load_metric(str(manifold_dir / "revolution.yaml"))
        assert metric.kind == "surface_of_revolution"

    def test_missing_file(self, tmp_path):
        with pytest.raises(SpecValidationError):
            load_metric(str(tmp_path / "nowhere.yaml"))

    def test_jobs_flag(self, monkeypatch):
        monkeypatch.delenv("WICKFLOW_JOBS", raising=False)
        assert resolve_jobs(3) == 3
        assert resolve_jobs(None) == 1

    def test_jobs_environment_wins(self, monkeypatch):
        monkeypatch.setenv("WICKFLOW_JOBS", "5")
        assert resolve_jobs(3) == 5

    def test_default_grid(self, sphere):
        grid = default_grid(sphere, 3)
        assert len(grid) == 9
        thetas = sorted({round(float(q[0]), 12) for q in grid})
        assert thetas == pytest.approx([math.pi / 4, math.pi / 2, 3 * math.pi / 4])

    def test_random_points_are_seeded(self, hyperbolic):
        first = random_points(hyperbolic, 5, seed=11)
        second = random_points(hyperbolic, 5, seed=11)
        np.testing.assert_array_equal(first, second)
        assert all(hyperbolic.contains(q, margin=0.5) for q in first)

    def test_explicit_points(self, torus):
        points = sample_points(torus, {"q": [[0.1, 0.2]]}, 0)
        np.testing.assert_array_equal(points[0], [0.1, 0.2])

    def test_point_dimension(self, torus):
        with pytest.raises(SpecValidationError):
            sample_points(torus, {"q": [[0.1]]}, 0)

    def test_near_boundary_warning(self, sphere, torus, caplog):
        with caplog.at_level("WARNING"):
            sample_points(sphere, {"q": [[0.05, 1.0]]}, 0)
            sample_points(torus, {"q": [[0.0, 0.01]]}, 0)
        messages = [record.getMessage() for record in caplog.records]
        assert len(messages) == 1
        assert "near the round_sphere chart boundary" in messages[0]

    def test_expected_scalar(self, sphere, hyperbolic, torus):
        assert expected_scalar(sphere, [1.0, 0.0]) == 2.0
        assert expected_scalar(hyperbolic, [0.0, 1.0]) == -2.0
        assert expected_scalar(torus, [0.0, 0.0]) == 0.0

    def test_list_builtins(self):
        text = list_builtins()
        assert text.startswith("Manifolds:\n")
        assert "  round_sphere (dim 2)" in text
        assert "  spherical_harmonic" in text
        assert text == list_builtins()


class TestExecute:
    """Each subcommand writes its artifact."""

    def test_curvature(self, tmp_path):
        path = tmp_path / "curvature.csv"
        execute(make_spec("curvature", "round_sphere", {"grid": 2}, out=str(path)))
        rows = read_rows(path)
        assert len(rows) == 4
        for row in rows:
            assert row["scalar"] == pytest.approx(row["scalar_expected"], abs=1e-6)
            assert row["r_prime"] == pytest.approx(math.sqrt(3.0), rel=1e-6)

    def test_flow(self, tmp_path):
        path = tmp_path / "flow.csv"
        params = {"x": [1.0, 0.0], "p": [0.3, 0.5], "sigma": 1.0, "samples": 4}
        execute(make_spec("flow", "round_sphere", params, out=str(path)))
        rows = read_rows(path)
        assert [row["sigma"] for row in rows] == pytest.approx([0.0, 0.25, 0.5, 0.75, 1.0])
        for row in rows:
            assert row["energy"] == pytest.approx(row["energy0"], abs=1e-9)

    def test_conjugate(self, tmp_path):
        path = tmp_path / "conjugate.csv"
        params = {"x": [math.pi / 2, 0.0], "p": [0.0, 1.0], "sigma_max": 4.0}
        execute(make_spec("conjugate", "round_sphere", params, out=str(path)))
        row = read_rows(path)[0]
        assert row["sigma_conjugate"] == pytest.approx(math.pi, abs=1e-6)
        assert row["sigma_expected"] == pytest.approx(math.pi)

    def test_tails(self, tmp_path):
        path = tmp_path / "tails.csv"
        params = {"r0": 1.0, "r": 4.0, "t_grid": [0.005, 0.01, 0.02]}
        execute(make_spec("tails", "circle", params, out=str(path)))
        text = path.read_text(encoding="utf-8")
        assert "# rate_expected=0.5" in text
        fitted = [line for line in text.splitlines() if line.startswith("# rate_fitted=")]
        assert float(fitted[0].split("=")[1]) == pytest.approx(0.5, rel=0.05)
        assert all(row["tail_mass"] <= row["bound"] for row in read_rows(path))

    def test_jt_remainder_bound(self, tmp_path):
        path = tmp_path / "jt.csv"
        params = {"psi": "const", "q": [[1.0, 0.5]], "t_grid": [0.001, 0.004]}
        execute(make_spec("jt", "round_sphere", params, out=str(path)))
        rows = read_rows(path)
        assert [row["t"] for row in rows] == [0.001, 0.004]
        assert rows[0]["remainder_bound"] > 0.0
        # C E|p|³ grows like t^{3/2}
        assert rows[1]["remainder_bound"] == pytest.approx(8.0 * rows[0]["remainder_bound"])
        assert all(row["re_jt"] == pytest.approx(1.0 + row["t"] / 6.0, abs=1e-8) for row in rows)

    def test_jt_flat_remainder_vanishes(self, tmp_path):
        path = tmp_path / "jt.csv"
        params = {"psi": "fourier_mode:k=1", "q": [[0.3]], "t_grid": [0.001, 0.002]}
        execute(make_spec("jt", "circle", params, out=str(path)))
        assert [row["remainder_bound"] for row in read_rows(path)] == [0.0, 0.0]

    def test_quantize_report(self, tmp_path):
        path = tmp_path / "quantize.json"
        params = {"psi": "fourier_mode:k=2", "q": [[0.3], [1.2]], "mode": "exact"}
        execute(make_spec("quantize", "circle", params, out=str(path)))
        assert '"max_rel_error"' in path.read_text(encoding="utf-8")

    def test_divergence(self, tmp_path):
        path = tmp_path / "divergence.csv"
        params = {"psi": "const", "sigma": 1.0, "cutoffs": [5.0, 50.0]}
        execute(make_spec("divergence-demo", "circle", params, out=str(path)))
        rows = read_rows(path)
        assert [row["l1_mass"] for row in rows] == pytest.approx([10.0, 100.0])
        assert rows[0]["re_limit"] == pytest.approx(math.sqrt(math.pi))

    def test_gaussian_model(self, tmp_path):
        path = tmp_path / "gaussian.csv"
        params = {"shape": "disk", "sigma": 0.5, "cutoffs": [math.sqrt(400.0 * math.pi), math.sqrt(402.0 * math.pi)]}
        execute(make_spec("divergence-demo", "flat_torus", params, out=str(path)))
        rows = read_rows(path)
        assert [row["im_limit"] for row in rows] == pytest.approx([2.0 * math.pi, 2.0 * math.pi])
        assert [row["re_value"] for row in rows] == pytest.approx([0.0, 0.0], abs=1e-8)
        assert [row["im_value"] for row in rows] == pytest.approx([0.0, 4.0 * math.pi], abs=1e-8)

    def test_gaussian_model_rejects_test_function(self):
        params = {"shape": "square", "psi": "const"}
        with pytest.raises(SpecValidationError):
            execute(make_spec("divergence-demo", "flat_torus", params))

    def test_check_holo(self, tmp_path):
        path = tmp_path / "holo.csv"
        params = {"psi": "fourier_mode:k=1,1", "t_grid": [0.5], "points": 8}
        execute(make_spec("check-holo", "flat_torus", params, out=str(path)))
        row = read_rows(path)[0]
        assert row["residual"] < 1e-10
        assert row["control_residual"] == pytest.approx(row["control_expected"], rel=1e-8)

    def test_list(self, tmp_path):
        path = tmp_path / "list.txt"
        execute(ExperimentSpec.from_mapping({"subcommand": "list", "out": str(path)}))
        assert path.read_text(encoding="utf-8") == list_builtins()


class TestRun:
    """Errors map to exit statuses with the message on stderr."""

    def test_success(self, tmp_path):
        assert run(make_spec("curvature", "circle", {"grid": 2}, out=str(tmp_path / "c.csv"))) == 0

    def test_validation_error(self, capsys):
        assert run(make_spec("jt", "circle", {"psi": "bessel"})) == 2
        assert "Unknown test function: bessel" in capsys.readouterr().err

    def test_computational_error(self, capsys):
        params = {"psi": "const", "q": [[1.0, 0.5]], "r": 5.0}
        assert run(make_spec("jt", "round_sphere", params)) == 1
        assert "exceeds the validity radius" in capsys.readouterr().err
