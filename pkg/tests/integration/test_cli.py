"""
Integration tests for the wickflow command line.

These run ``app.main`` in-process with real manifold spec files and check
exit statuses, artifacts and stderr messages.
"""

import json
import math

import pytest
from app import float_list, main, t_grid

pytestmark = pytest.mark.integration


def strip_timestamp(text):
    return "\n".join(line for line in text.splitlines() if not line.startswith("# generated:"))


class TestArgumentTypes:
    """Flag value parsers."""

    def test_geometric_t_grid(self):
        assert t_grid("1e-3:8e-3:x2") == pytest.approx([1e-3, 2e-3, 4e-3, 8e-3])

    def test_listed_t_grid(self):
        assert t_grid("0.1,0.2") == [0.1, 0.2]

    @pytest.mark.parametrize("text", ["1e-3:8e-3", "1e-3:8e-3:2", "0,0.1", "abc"])
    def test_bad_t_grid(self, text):
        with pytest.raises(Exception):
            t_grid(text)

    def test_float_list(self):
        assert float_list("1.0,0.5") == [1.0, 0.5]


class TestSubcommands:
    """Successful runs write their artifacts."""

    def test_list(self, capsys):
        assert main(["list"]) == 0
        out = capsys.readouterr().out
        for name in ("circle", "flat_torus", "round_sphere", "fourier_mode", "spherical_harmonic"):
            assert name in out

    def test_quantize_sphere_constant(self, manifold_dir, tmp_path):
        out = tmp_path / "report.json"
        argv = [
            "quantize",
            "--manifold",
            str(manifold_dir / "sphere.yaml"),
            "--psi",
            "const",
            "--t-grid",
            "1e-3:8e-3:x2",
            "--grid",
            "2",
            "--out",
            str(out),
        ]
        assert main(argv) == 0
        data = json.loads(out.read_text(encoding="utf-8"))
        assert data["header"][0].startswith("wickflow ")
        assert data["report"]["max_rel_error"] < 1e-6
        assert data["report"]["numeric_QE_psi"][0]["re"] == pytest.approx(1.0 / 6.0, rel=1e-6)

    def test_tails(self, manifold_dir, tmp_path):
        out = tmp_path / "tails.csv"
        argv = [
            "tails",
            "--manifold",
            str(manifold_dir / "circle.yaml"),
            "--r0",
            "1.0",
            "--r",
            "4.0",
            "--t-grid",
            "0.005,0.01,0.02",
            "--out",
            str(out),
        ]
        assert main(argv) == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert "t,tail_mass,bound" in lines
        assert any(line.startswith("# spec_hash=") for line in lines)

    def test_spectrum_with_jobs(self, tmp_path):
        out = tmp_path / "spectrum.csv"
        assert main(["spectrum", "--manifold", "circle", "--k-max", "2", "--jobs", "2", "--out", str(out)]) == 0
        body = [line for line in out.read_text(encoding="utf-8").splitlines() if not line.startswith("#")]
        assert body[0] == "k0,eigenvalue,numeric_re,numeric_im,rel_error"
        assert len(body) == 6

    def test_conjugate(self, tmp_path):
        out = tmp_path / "conjugate.csv"
        argv = ["conjugate", "--manifold", "round_sphere", "--x", f"{math.pi / 2},0.0", "--p", "0.0,1.0"]
        assert main(argv + ["--sigma-max", "4.0", "--out", str(out)]) == 0
        row = out.read_text(encoding="utf-8").splitlines()[-1].split(",")
        assert float(row[0]) == pytest.approx(math.pi, abs=1e-6)

    def test_conjugate_sigma_flag(self, tmp_path):
        out = tmp_path / "conjugate.csv"
        argv = ["conjugate", "--manifold", "round_sphere", "--x", f"{math.pi / 2},0.0", "--p", "0.0,1.0"]
        assert main(argv + ["--sigma", "4.0", "--out", str(out)]) == 0
        row = out.read_text(encoding="utf-8").splitlines()[-1].split(",")
        assert float(row[0]) == pytest.approx(math.pi, abs=1e-6)

    @pytest.mark.parametrize("shape", ["square", "disk"])
    def test_gaussian_model(self, tmp_path, shape):
        out = tmp_path / "gaussian.csv"
        argv = ["divergence-demo", "--manifold", "flat_torus", "--shape", shape, "--cutoffs", "5,50", "--out", str(out)]
        assert main(argv) == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert f'# param shape="{shape}"' in lines
        rows = [line.split(",") for line in lines if not line.startswith("#")][1:]
        assert [float(row[0]) for row in rows] == [5.0, 50.0]
        assert all(float(row[5]) == pytest.approx(math.pi) for row in rows)

    def test_check_holo(self, tmp_path):
        out = tmp_path / "holo.csv"
        argv = ["check-holo", "--manifold", "circle", "--psi", "fourier_mode:k=1", "--points", "16", "--out", str(out)]
        assert main(argv) == 0
        rows = [line.split(",") for line in out.read_text(encoding="utf-8").splitlines() if not line.startswith("#")]
        assert [float(row[0]) for row in rows[1:]] == [0.2, 0.5, 1.0]
        assert all(float(row[1]) < 1e-8 for row in rows[1:])

    def test_deterministic_output(self, tmp_path):
        outputs = []
        for name in ("a.csv", "b.csv"):
            out = tmp_path / name
            argv = ["curvature", "--manifold", "hyperbolic_halfplane", "--random", "3", "--seed", "7"]
            assert main(argv + ["--out", str(out)]) == 0
            outputs.append(strip_timestamp(out.read_text(encoding="utf-8")))
        assert outputs[0] == outputs[1]

    def test_seed_changes_points(self, tmp_path):
        texts = []
        for seed in ("1", "2"):
            out = tmp_path / f"seed{seed}.csv"
            argv = ["curvature", "--manifold", "hyperbolic_halfplane", "--random", "2", "--seed", seed]
            assert main(argv + ["--out", str(out)]) == 0
            texts.append(strip_timestamp(out.read_text(encoding="utf-8")))
        assert texts[0] != texts[1]


class TestExitStatus:
    """Validation errors exit 2, computational errors exit 1, message on stderr."""

    def test_malformed_manifold_key(self, tmp_path, capsys):
        spec = tmp_path / "bad.yaml"
        spec.write_text("kind: round_sphere\ncolour: red\n", encoding="utf-8")
        assert main(["curvature", "--manifold", str(spec)]) == 2
        assert "colour" in capsys.readouterr().err

    def test_unknown_flag(self, capsys):
        assert main(["flow", "--manifold", "circle", "--bogus", "1"]) == 2

    def test_missing_required_parameter(self, capsys):
        assert main(["flow", "--manifold", "circle", "--x", "0.5"]) == 2
        assert "flow requires: p" in capsys.readouterr().err

    def test_exact_mode_on_curved_manifold(self, capsys):
        argv = ["jt", "--manifold", "round_sphere", "--psi", "const", "--mode", "exact", "--q", "1.0,0.5"]
        assert main(argv) == 2
        assert "flat model" in capsys.readouterr().err

    def test_radius_beyond_validity(self, capsys):
        argv = ["jt", "--manifold", "round_sphere", "--psi", "const", "--q", "1.0,0.5", "--r", "5.0"]
        assert main(argv) == 1
        assert "validity radius" in capsys.readouterr().err

    def test_tails_radii_out_of_order(self, capsys):
        argv = ["tails", "--manifold", "circle", "--r0", "5", "--r", "1", "--t-grid", "0.01,0.02"]
        assert main(argv) == 2
        assert "tails needs r0 < r" in capsys.readouterr().err

    def test_decreasing_cutoffs(self, capsys):
        assert main(["divergence-demo", "--manifold", "circle", "--cutoffs", "10,1"]) == 2
        assert "cutoffs must be positive and increasing" in capsys.readouterr().err

    def test_gaussian_model_needs_flat_plane(self, capsys):
        assert main(["divergence-demo", "--manifold", "circle", "--shape", "square"]) == 2
        assert "flat_torus" in capsys.readouterr().err

    def test_unknown_shape(self, capsys):
        assert main(["divergence-demo", "--manifold", "flat_torus", "--shape", "hexagon"]) == 2

    def test_missing_manifold(self, capsys):
        assert main(["curvature"]) == 2
        assert "requires a manifold" in capsys.readouterr().err
