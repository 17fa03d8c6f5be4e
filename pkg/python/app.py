"""
Command-line entry point for wickflow experiments.

Each subcommand runs one experiment and writes a CSV sweep (or a report for
``quantize``) to ``--out`` or stdout. Artifacts open with ``#`` header lines
recording the tool version, a spec hash and every parameter.

Subcommands:
    curvature        Scalar curvature and validity radius at base points
    flow             Sampled geodesic flow with energy and Jacobi determinant
    conjugate        First conjugate time along a geodesic
    jt               Wick-rotated fiber integral against its Laplace expansion
    quantize         numeric_QE against analytic_QE over a grid (report)
    spectrum         Flat-model eigenvalues checked by numeric_QE
    tails            Fiber tail mass against its analytic bound
    divergence-demo  Partial values of the real-time S¹ integral, or of the
                     planar Gaussian model with --shape square|disk
    check-holo       Holomorphic-section residuals on flat models
    list             Built-in manifolds and test functions

Exit status:
    0 on success, 2 for invalid specs or flags, 1 for computational errors.

Example:
    Quantizing the constant function on the unit sphere::

        $ python python/app.py quantize --manifold python/config/manifolds/sphere.yaml \\
            --psi const --t-grid 1e-3:8e-3:x2 --out report.json

Author: wickflow
License: GPL-3.0
Version: 1.0.0
"""

from __future__ import annotations

import argparse
import logging
import sys

from lib import settings
from lib.errors import SpecValidationError, WickflowError
from lib.experiments import CUTOFF_SHAPES, SUBCOMMAND_PARAMS, ExperimentSpec, resolve_jobs, run
from lib.quantizer.richardson import geometric_grid
from lib.wick_quadrature.config import MODES, SCHEMES

logger = logging.getLogger(__name__)


def float_list(text: str) -> list[float]:
    """
    Parse a comma-separated list of floats.

    Examples:
        >>> float_list("1.0,0.5")
        [1.0, 0.5]
    """
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from e


def t_grid(text: str) -> list[float]:
    """
    Parse a Wick-time grid: ``start:stop:xRATIO`` or a comma-separated list.

    Examples:
        >>> t_grid("1e-3:8e-3:x2")
        [0.001, 0.002, 0.004, 0.008]
    """
    if ":" not in text:
        values = float_list(text)
    else:
        parts = text.split(":")
        if len(parts) != 3 or not parts[2].startswith("x"):
            raise argparse.ArgumentTypeError(f"expected start:stop:xRATIO, got {text!r}")
        try:
            values = geometric_grid(float(parts[0]), float(parts[1]), float(parts[2][1:]))
        except ValueError as e:
            raise argparse.ArgumentTypeError(str(e)) from e
    if not values or min(values) <= 0:
        raise argparse.ArgumentTypeError(f"Wick times must be positive, got {text!r}")
    return values


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per experiment."""
    parser = argparse.ArgumentParser(
        prog="wickflow",
        description="Numerical workbench for the Wick-rotated quantization of the geodesic flow.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--log-level", default=None, help="Logging level (default from wickflow.yaml)")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--manifold", help="Manifold spec file or built-in kind name")
    common.add_argument("--out", help="Output file (default: stdout)")
    common.add_argument("--jobs", type=int, default=None, help="Worker threads (WICKFLOW_JOBS overrides)")
    common.add_argument("--seed", type=int, default=0, help="Seed for --random base points")

    points = argparse.ArgumentParser(add_help=False)
    points.add_argument("--q", action="append", type=float_list, help="Base point, repeatable")
    points.add_argument("--grid", type=int, help="Interior grid with this many points per axis")
    points.add_argument("--random", type=int, help="Number of random base points")

    quadrature = argparse.ArgumentParser(add_help=False)
    quadrature.add_argument("--psi", help="Test function, e.g. const or fourier_mode:k=1")
    quadrature.add_argument("--t-grid", dest="t_grid", type=t_grid, help="Wick times, start:stop:xRATIO or list")
    quadrature.add_argument("--hbar", type=float)
    quadrature.add_argument("--mode", choices=MODES)
    quadrature.add_argument("--scheme", choices=SCHEMES)
    quadrature.add_argument("--nodes", type=int, help="Quadrature nodes per axis")

    phase = argparse.ArgumentParser(add_help=False)
    phase.add_argument("--x", type=float_list, help="Initial chart point")
    phase.add_argument("--p", type=float_list, help="Initial covector")
    phase.add_argument("--steps", type=int)
    phase.add_argument("--samples", type=int)

    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    subparsers.add_parser("curvature", parents=[common, points], help="Curvature at base points")
    flow = subparsers.add_parser("flow", parents=[common, phase], help="Sampled geodesic flow")
    flow.add_argument("--sigma", type=float)
    conjugate = subparsers.add_parser("conjugate", parents=[common, phase], help="First conjugate time")
    conjugate.add_argument("--sigma", "--sigma-max", dest="sigma_max", type=float, help="End of the search interval")
    jt = subparsers.add_parser("jt", parents=[common, points, quadrature], help="Fiber integral vs Laplace")
    jt.add_argument("--r", type=float, help="Fiber radius (default min(r', 8 sqrt(t hbar)))")
    subparsers.add_parser("quantize", parents=[common, points, quadrature], help="numeric_QE vs analytic_QE")
    spectrum = subparsers.add_parser("spectrum", parents=[common], help="Flat-model spectrum")
    spectrum.add_argument("--hbar", type=float)
    spectrum.add_argument("--k-max", dest="k_max", type=int)
    spectrum.add_argument("--t-grid", dest="t_grid", type=t_grid)
    tails = subparsers.add_parser("tails", parents=[common, points], help="Fiber tail mass vs bound")
    tails.add_argument("--r0", type=float)
    tails.add_argument("--r", type=float)
    tails.add_argument("--t-grid", dest="t_grid", type=t_grid)
    tails.add_argument("--hbar", type=float)
    divergence = subparsers.add_parser("divergence-demo", parents=[common], help="Real-time S1 partial values")
    divergence.add_argument("--psi")
    divergence.add_argument("--q", action="append", type=float_list)
    divergence.add_argument("--sigma", type=float)
    divergence.add_argument("--cutoffs", type=float_list)
    divergence.add_argument(
        "--shape", choices=CUTOFF_SHAPES, help="Planar Gaussian model with square or disk cutoffs (flat_torus)"
    )
    holo = subparsers.add_parser("check-holo", parents=[common], help="Holomorphic-section residuals")
    holo.add_argument("--psi")
    holo.add_argument("--t-grid", dest="t_grid", type=t_grid)
    holo.add_argument("--hbar", type=float)
    holo.add_argument("--points", type=int, help="Grid points per phase axis")
    subparsers.add_parser("list", parents=[common], help="Built-in manifolds and test functions")
    return parser


def main(argv: list[str] | None = None) -> int:
    """
    Parse arguments, configure logging and run one experiment.

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])

    Returns:
        Process exit status
    """
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        level = args.log_level or settings.get("logging", "level")
        logging.basicConfig(level=level.upper(), format=settings.get("logging", "format"))
        params = {key: getattr(args, key, None) for key in SUBCOMMAND_PARAMS[args.subcommand]}
        spec = ExperimentSpec.from_mapping(
            {
                "subcommand": args.subcommand,
                "manifold": args.manifold,
                "params": params,
                "seed": args.seed,
                "out": args.out,
                "jobs": resolve_jobs(args.jobs),
            }
        )
    except SpecValidationError as e:
        print(e.message, file=sys.stderr)
        return 2
    except WickflowError as e:
        print(e.message, file=sys.stderr)
        return 1

    try:
        return run(spec)
    except Exception as e:
        logger.error(f"Unexpected error in {spec.subcommand}: {e}", exc_info=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
