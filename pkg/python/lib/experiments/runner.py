"""
Experiment dispatch: builds the inputs of each subcommand, runs the
computation and writes its artifact.
"""

import logging
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .. import settings
from ..errors import SpecValidationError, WickflowError
from ..geodesic_flow import PhasePoint, find_conjugate_time, kinetic_energy, trajectory
from ..geometry import BUILTIN_MANIFOLDS, curvature, load_manifold, metric_from_spec
from ..half_forms import mean_remainder_bound, volume_remainder_constant
from ..quantizer import build_report, flat_spectrum, holomorphic_section_check, phase_grid
from ..wick_quadrature import (
    BUILTIN_TEST_FUNCTIONS,
    QuadratureConfig,
    decay_rate,
    fresnel_limit,
    gaussian_model_limit,
    gaussian_wick_model,
    laplace_expansion,
    parse_psi,
    r_prime,
    real_time_divergence_demo,
    tail_mass,
)
from .spec import POINT_KEYS
from .writers import header_lines, write_csv, write_report

logger = logging.getLogger(__name__)

DEFAULT_GRID = 4
DEFAULT_CUTOFFS = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0]
DEFAULT_HOLO_TIMES = [0.2, 0.5, 1.0]
NEAR_BOUNDARY = 0.05
JT_COLUMNS = ["t", "r", "re_jt", "im_jt", "a0_re", "a0_im", "a1_re", "a1_im", "residual", "remainder_bound"]
QUANTIZE_COLUMNS = ["re_numeric", "im_numeric", "re_analytic", "im_analytic", "extrapolation_error"]
DIVERGENCE_COLUMNS = ["cutoff", "re_value", "im_value", "l1_mass", "re_limit", "im_limit"]


@dataclass
class Artifact:
    """CSV columns and rows, or a report mapping, plus header summary values."""

    columns: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    report: dict | None = None
    summary: dict = field(default_factory=dict)
    text: str | None = None


def resolve_jobs(flag=None):
    """Worker count: WICKFLOW_JOBS, then the --jobs flag, then cli.jobs."""
    if os.environ.get("WICKFLOW_JOBS") or flag is None:
        return int(settings.get("cli", "jobs"))
    return int(flag)


def load_metric(reference):
    """A built-in kind name (default parameters) or a manifold spec file."""
    if reference in BUILTIN_MANIFOLDS:
        return metric_from_spec({"kind": reference})
    return load_manifold(reference)


def default_grid(metric, per_axis):
    """Interior tensor grid: evenly spaced on periodic axes, strictly inside the box otherwise."""
    axes = []
    for axis in range(metric.dim):
        low, high = metric.domain[axis]
        period = metric.periods[axis]
        if period is not None:
            axes.append(low + period * (np.arange(per_axis) + 0.5) / per_axis)
        else:
            axes.append(np.linspace(low, high, per_axis + 2)[1:-1])
    grids = np.meshgrid(*axes, indexing="ij")
    return [np.array(point) for point in np.stack([g.ravel() for g in grids], axis=-1)]


def random_points(metric, count, seed):
    """Uniform points in the middle 80% of every non-periodic axis."""
    rng = np.random.default_rng(seed)
    low = metric.domain[:, 0].copy()
    high = metric.domain[:, 1].copy()
    for axis, period in enumerate(metric.periods):
        if period is None:
            margin = 0.1 * (high[axis] - low[axis])
            low[axis] += margin
            high[axis] -= margin
    return [rng.uniform(low, high) for _ in range(count)]


def _near_boundary(metric, point):
    for axis, period in enumerate(metric.periods):
        if period is None:
            low, high = metric.domain[axis]
            margin = NEAR_BOUNDARY * (high - low)
            if point[axis] - low < margin or high - point[axis] < margin:
                return True
    return False


def sample_points(metric, params, seed):
    if params.get("q"):
        points = [np.asarray(q, dtype=float) for q in params["q"]]
    elif params.get("random"):
        points = random_points(metric, int(params["random"]), seed)
    else:
        points = default_grid(metric, int(params.get("grid", DEFAULT_GRID)))
    for point in points:
        if point.shape != (metric.dim,):
            raise SpecValidationError(f"Base point {point.tolist()} does not have {metric.dim} coordinates")
        if _near_boundary(metric, point):
            logger.warning(f"Base point {point.tolist()} is near the {metric.kind} chart boundary")
    return points


def _t_grid(params, default=None):
    return params.get("t_grid") or default or settings.get("quantizer", "t_grid")


def _hbar(params):
    return params.get("hbar", settings.get("quantizer", "hbar"))


def _parallel(func, items, jobs):
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, items))


def expected_scalar(metric, x):
    """Closed-form scalar curvature of the built-in manifolds (nan for custom metrics)."""
    if metric.is_flat:
        return 0.0
    if metric.kind == "round_sphere":
        return 2.0 / metric.params["radius"] ** 2
    if metric.kind == "hyperbolic_halfplane":
        return -2.0
    if metric.kind == "surface_of_revolution":
        profile = np.polynomial.Polynomial(metric.params["profile"])
        return float(-2.0 * profile.deriv(2)(x[0]) / profile(x[0]))
    return math.nan


def run_curvature(metric, spec):
    points = sample_points(metric, spec.params, spec.seed)

    def row(x):
        curv = curvature(metric, x)
        return [*x, curv.scalar, expected_scalar(metric, x), curv.ricci_norm(), r_prime(metric, x, math.inf, curv)]

    columns = [f"x{i}" for i in range(metric.dim)] + ["scalar", "scalar_expected", "ricci_norm", "r_prime"]
    return Artifact(columns=columns, rows=_parallel(row, points, spec.jobs))


def _phase_point(metric, params):
    x, p = params["x"], params["p"]
    if len(x) != metric.dim or len(p) != metric.dim:
        raise SpecValidationError(f"x and p need {metric.dim} components each")
    return PhasePoint(np.array(x, dtype=float), np.array(p, dtype=float))


def run_flow(metric, spec):
    z0 = _phase_point(metric, spec.params)
    sigma = float(spec.params.get("sigma", 1.0))
    states = trajectory(metric, z0, sigma, int(spec.params.get("samples", 10)), spec.params.get("steps"))
    columns = (
        ["sigma"] + [f"x{i}" for i in range(metric.dim)] + [f"p{i}" for i in range(metric.dim)]
    ) + ["energy", "det_block", "energy0"]
    rows = [
        [
            state.sigma,
            *state.point.x,
            *state.point.p,
            kinetic_energy(metric, state.point),
            float(np.linalg.det(state.jacobi_block())),
            state.energy0,
        ]
        for state in states
    ]
    return Artifact(columns=columns, rows=rows)


def run_conjugate(metric, spec):
    z0 = _phase_point(metric, spec.params)
    sigma_max = float(spec.params.get("sigma_max", 4.0))
    found = find_conjugate_time(metric, z0, sigma_max, spec.params.get("samples"), spec.params.get("steps"))
    expected = math.nan
    if metric.kind == "round_sphere":
        # first conjugate point at arc length πρ
        expected = math.pi * metric.params["radius"] / math.sqrt(2.0 * kinetic_energy(metric, z0))
    return Artifact(
        columns=["sigma_conjugate", "sigma_expected"], rows=[[found if found is not None else math.nan, expected]]
    )


def _fiber_radius(metric, q, t, hbar, params, mode):
    r = params.get("r")
    if r is None:
        r = settings.get("quadrature", "cutoff_sigmas") * math.sqrt(t * hbar)
        if mode == "taylor":
            r = r_prime(metric, q, r)
    return float(r)


def run_jt(metric, spec):
    params = spec.params
    psi = parse_psi(params["psi"], metric)
    hbar = _hbar(params)
    mode = params.get("mode", settings.get("quadrature", "mode"))
    t_grid = _t_grid(params)

    def expansion_row(q, t):
        r = _fiber_radius(metric, q, t, hbar, params, mode)
        cfg = QuadratureConfig.from_settings(
            t, r=r, hbar=hbar, mode=mode, scheme=params.get("scheme"), nodes_per_axis=params.get("nodes")
        )
        result = laplace_expansion(metric, psi, q, cfg=cfg)
        jt, a0, a1 = result.jt_numeric, result.a0, result.a1
        return [*q, t, r, jt.real, jt.imag, a0.real, a0.imag, a1.real, a1.imag, result.residual]

    def point_rows(q):
        rows = [expansion_row(q, t) for t in t_grid]
        constant = volume_remainder_constant(metric, q) if mode == "taylor" else 0.0
        bounds = [mean_remainder_bound(constant, t * hbar, metric.dim) for t in t_grid]
        return [row + [bound] for row, bound in zip(rows, bounds, strict=True)]

    columns = [f"q{i}" for i in range(metric.dim)] + JT_COLUMNS
    points = sample_points(metric, params, spec.seed)
    return Artifact(columns=columns, rows=[r for rows in _parallel(point_rows, points, spec.jobs) for r in rows])


def run_quantize(metric, spec):
    params = spec.params
    psi = parse_psi(params["psi"], metric)
    report = build_report(
        metric,
        psi,
        sample_points(metric, params, spec.seed),
        hbar=_hbar(params),
        t_grid=_t_grid(params),
        mode=params.get("mode"),
        jobs=spec.jobs,
        scheme=params.get("scheme"),
        nodes_per_axis=params.get("nodes"),
    )
    if spec.out_path is not None and str(spec.out_path).endswith(".csv"):
        columns = [f"q{i}" for i in range(metric.dim)] + QUANTIZE_COLUMNS
        rows = [
            [*q, numeric.real, numeric.imag, analytic.real, analytic.imag, error]
            for q, numeric, analytic, error in zip(
                report.q_grid, report.numeric_QE_psi, report.analytic_QE_psi, report.extrapolation_errors, strict=True
            )
        ]
        max_rel = report.max_rel_error if report.max_rel_error is not None else math.nan
        return Artifact(columns=columns, rows=rows, summary={"max_rel_error": max_rel})
    return Artifact(report=report.to_dict())


def run_spectrum(metric, spec):
    params = spec.params
    entries = flat_spectrum(metric, _hbar(params), params.get("k_max", 3), t_grid=params.get("t_grid"))
    columns = [f"k{i}" for i in range(metric.dim)] + ["eigenvalue", "numeric_re", "numeric_im", "rel_error"]
    rows = [[*entry.k, entry.eigenvalue, entry.numeric.real, entry.numeric.imag, entry.rel_error] for entry in entries]
    return Artifact(columns=columns, rows=rows)


def run_tails(metric, spec):
    params = spec.params
    hbar = _hbar(params)
    points = sample_points(metric, params, spec.seed) if POINT_KEYS & set(params) else default_grid(metric, 1)
    q = points[0]
    r0, r = float(params["r0"]), float(params["r"])
    estimates = [tail_mass(metric, q, r0, r, t, hbar) for t in _t_grid(params)]
    summary = {"rate_expected": r0**2 / (2.0 * hbar)}
    if len(estimates) > 1:
        summary["rate_fitted"] = decay_rate(estimates)
    rows = [[e.t, e.tail, e.bound] for e in estimates]
    return Artifact(columns=["t", "tail_mass", "bound"], rows=rows, summary=summary)


def run_gaussian_model(metric, spec):
    params = spec.params
    if metric.dim != 2 or not metric.is_flat:
        raise SpecValidationError(f"The Gaussian model lives in the fiber of flat_torus, not {metric.kind}")
    if "psi" in params or "q" in params:
        raise SpecValidationError("psi and q do not apply to the Gaussian model")
    sigma = float(params.get("sigma", 1.0))
    values = gaussian_wick_model(sigma, params.get("cutoffs", DEFAULT_CUTOFFS), params["shape"])
    limit = gaussian_model_limit(sigma)
    rows = [[v.cutoff, v.value.real, v.value.imag, v.l1_mass, limit.real, limit.imag] for v in values]
    return Artifact(columns=DIVERGENCE_COLUMNS, rows=rows)


def run_divergence(metric, spec):
    params = spec.params
    if "shape" in params:
        return run_gaussian_model(metric, spec)
    if metric.dim != 1:
        raise SpecValidationError(f"divergence-demo runs on the circle, not {metric.kind}")
    psi = parse_psi(params.get("psi", "fourier_mode:k=1"), metric)
    q = float(params["q"][0][0]) if params.get("q") else 0.0
    sigma = float(params.get("sigma", 1.0))
    values = real_time_divergence_demo(psi, q, sigma, params.get("cutoffs", DEFAULT_CUTOFFS))
    try:
        limit = fresnel_limit(psi, q, sigma)
    except SpecValidationError:
        limit = complex(math.nan, math.nan)
    rows = [[v.cutoff, v.value.real, v.value.imag, v.l1_mass, limit.real, limit.imag] for v in values]
    return Artifact(columns=DIVERGENCE_COLUMNS, rows=rows)


def run_check_holo(metric, spec):
    params = spec.params
    hbar = _hbar(params)
    psi = parse_psi(params.get("psi", "const"), metric)
    samples = phase_grid(metric.dim, int(params.get("points", 64)))
    n = metric.dim
    rows = []
    for t in _t_grid(params, DEFAULT_HOLO_TIMES):
        residual = holomorphic_section_check(metric, psi, t, hbar, samples)
        control = holomorphic_section_check(metric, psi, t, hbar, samples, weighted=False)
        unweighted = np.abs(psi.continued(samples[:, :n], t * samples[:, n:]))
        expected = float(np.max(t * np.abs(samples[:, n:]) * unweighted[:, None])) / hbar
        rows.append([t, residual, control, expected])
    return Artifact(columns=["t", "residual", "control_residual", "control_expected"], rows=rows)


def list_builtins():
    """
    Built-in manifolds and test functions with their parameter schemas.

    Returns:
        Deterministic multi-line text
    """
    lines = ["Manifolds:"]
    for name in sorted(BUILTIN_MANIFOLDS):
        entry = BUILTIN_MANIFOLDS[name]
        lines.append(f"  {name} (dim {entry['dim']})")
        for key in sorted(entry["params"]):
            lines.append(f"    {key}: {entry['params'][key]}")
    lines.append("Test functions:")
    for name in sorted(BUILTIN_TEST_FUNCTIONS):
        lines.append(f"  {name}")
        for key in sorted(BUILTIN_TEST_FUNCTIONS[name]):
            lines.append(f"    {key}: {BUILTIN_TEST_FUNCTIONS[name][key]}")
    return "\n".join(lines) + "\n"


EXPERIMENTS = {
    "curvature": run_curvature,
    "flow": run_flow,
    "conjugate": run_conjugate,
    "jt": run_jt,
    "quantize": run_quantize,
    "spectrum": run_spectrum,
    "tails": run_tails,
    "divergence-demo": run_divergence,
    "check-holo": run_check_holo,
}


def execute(spec):
    """
    Run an experiment and write its artifact, letting errors propagate.

    Returns:
        The Artifact that was written
    """
    if spec.subcommand == "list":
        artifact = Artifact(text=list_builtins())
        if spec.out_path is None:
            sys.stdout.write(artifact.text)
        else:
            with open(spec.out_path, "w", encoding="utf-8") as f:
                f.write(artifact.text)
        return artifact

    metric = load_metric(spec.manifold)
    description = metric.describe()
    logger.info(f"Running {spec.subcommand} on {metric.kind} with {spec.jobs} worker(s)")
    artifact = EXPERIMENTS[spec.subcommand](metric, spec)
    header = header_lines(spec, description, artifact.summary)
    if artifact.report is not None:
        write_report(spec.out_path, header, artifact.report)
    else:
        write_csv(spec.out_path, header, artifact.columns, artifact.rows)
    return artifact


def run(spec):
    """
    Run an experiment, mapping errors to exit statuses.

    Returns:
        0 on success, 2 for validation errors, 1 for computational errors;
        the error message is printed verbatim on stderr
    """
    try:
        execute(spec)
    except SpecValidationError as e:
        logger.error(f"Invalid experiment: {e.message}")
        print(e.message, file=sys.stderr)
        return 2
    except WickflowError as e:
        logger.error(f"{spec.subcommand} failed: {e.message}")
        print(e.message, file=sys.stderr)
        return 1
    return 0
