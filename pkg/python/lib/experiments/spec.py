"""
Strictly validated experiment specifications.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from ..errors import SpecValidationError

POINT_KEYS = {"q", "grid", "random"}

SUBCOMMAND_PARAMS = {
    "curvature": POINT_KEYS,
    "flow": {"x", "p", "sigma", "steps", "samples"},
    "conjugate": {"x", "p", "sigma_max", "steps", "samples"},
    "jt": POINT_KEYS | {"psi", "t_grid", "hbar", "mode", "scheme", "nodes", "r"},
    "quantize": POINT_KEYS | {"psi", "t_grid", "hbar", "mode", "scheme", "nodes"},
    "spectrum": {"hbar", "k_max", "t_grid"},
    "tails": POINT_KEYS | {"r0", "r", "t_grid", "hbar"},
    "divergence-demo": {"psi", "q", "sigma", "cutoffs", "shape"},
    "check-holo": {"psi", "t_grid", "hbar", "points"},
    "list": set(),
}

REQUIRED_PARAMS = {
    "flow": {"x", "p"},
    "conjugate": {"x", "p"},
    "jt": {"psi"},
    "quantize": {"psi"},
    "tails": {"r0", "r"},
}

SPEC_KEYS = {"subcommand", "manifold", "params", "seed", "out", "jobs"}
POSITIVE_PARAMS = ("sigma_max", "hbar", "r", "r0", "steps", "samples", "nodes", "points", "grid", "random")
CUTOFF_SHAPES = ("square", "disk")


def _positive(value):
    try:
        return float(value) > 0
    except (TypeError, ValueError):
        return False


def _point_count(params):
    if params.get("q"):
        return len(params["q"])
    if params.get("random"):
        return params["random"]
    return params.get("grid", 1)


@dataclass(frozen=True)
class ExperimentSpec:
    """One experiment: subcommand, manifold reference, parameters, seed and output path."""

    subcommand: str
    manifold: str | None = None
    params: dict = field(default_factory=dict)
    seed: int = 0
    out_path: str | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.subcommand not in SUBCOMMAND_PARAMS:
            raise SpecValidationError(f"Unknown subcommand: {self.subcommand}")
        allowed = SUBCOMMAND_PARAMS[self.subcommand]
        for key in self.params:
            if key not in allowed:
                raise SpecValidationError(f"Unknown parameter for {self.subcommand}: {key}")
        missing = REQUIRED_PARAMS.get(self.subcommand, set()) - set(self.params)
        if missing:
            raise SpecValidationError(f"{self.subcommand} requires: {', '.join(sorted(missing))}")
        if self.subcommand != "list" and not self.manifold:
            raise SpecValidationError(f"{self.subcommand} requires a manifold")
        if not isinstance(self.seed, int):
            raise SpecValidationError(f"seed must be an integer, got {self.seed!r}")
        if self.jobs < 1:
            raise SpecValidationError(f"jobs must be at least 1, got {self.jobs}")
        self._check_values()

    def _check_values(self):
        params = self.params
        for key in POSITIVE_PARAMS:
            if key in params and not _positive(params[key]):
                raise SpecValidationError(f"{key} must be positive, got {params[key]}")
        if self.subcommand == "divergence-demo" and "sigma" in params and not _positive(params["sigma"]):
            raise SpecValidationError(f"sigma must be positive, got {params['sigma']}")
        if "r0" in params and "r" in params and not float(params["r0"]) < float(params["r"]):
            raise SpecValidationError(f"tails needs r0 < r, got r0={params['r0']}, r={params['r']}")
        cutoffs = params.get("cutoffs")
        if cutoffs is not None:
            increasing = all(b > a for a, b in zip(cutoffs, cutoffs[1:], strict=False))
            if not cutoffs or not _positive(cutoffs[0]) or not increasing:
                raise SpecValidationError(f"cutoffs must be positive and increasing, got {cutoffs}")
        if "shape" in params and params["shape"] not in CUTOFF_SHAPES:
            raise SpecValidationError(f"Unknown cutoff shape: {params['shape']}")
        if "t_grid" in params and not all(_positive(t) for t in params["t_grid"] or [0]):
            raise SpecValidationError(f"Wick times must be positive, got {params['t_grid']}")
        if self.subcommand == "tails" and _point_count(params) > 1:
            raise SpecValidationError("tails takes a single base point")

    @classmethod
    def from_mapping(cls, mapping):
        """
        Build a spec from a plain mapping, rejecting unknown keys.

        Args:
            mapping: Keys subcommand, manifold, params, seed, out, jobs; None-valued params are dropped

        Returns:
            ExperimentSpec
        """
        if not isinstance(mapping, dict):
            raise SpecValidationError("Experiment spec must be a key-value mapping")
        for key in mapping:
            if key not in SPEC_KEYS:
                raise SpecValidationError(f"Unknown experiment spec key: {key}")
        if "subcommand" not in mapping:
            raise SpecValidationError("Experiment spec is missing required key: subcommand")
        params = {k: v for k, v in (mapping.get("params") or {}).items() if v is not None}
        return cls(
            subcommand=mapping["subcommand"],
            manifold=mapping.get("manifold"),
            params=params,
            seed=mapping.get("seed") if mapping.get("seed") is not None else 0,
            out_path=mapping.get("out"),
            jobs=mapping.get("jobs") or 1,
        )

    def canonical(self, manifold_description=None):
        """The parameters that determine the output, independent of where it is written."""
        return {
            "subcommand": self.subcommand,
            "manifold": manifold_description if manifold_description is not None else self.manifold,
            "params": self.params,
            "seed": self.seed,
        }

    def spec_hash(self, manifold_description=None):
        """sha256 of the canonical JSON form."""
        text = json.dumps(self.canonical(manifold_description), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()
