"""
Artifact writers: CSV sweeps and report files with a reproducibility header.

Every artifact starts with ``#`` comment lines recording the tool version,
the spec hash and all parameters. The ``# generated:`` timestamp is the only
line that changes between identical runs.
"""

import csv
import json
import logging
import math
import sys
from contextlib import contextmanager
from datetime import datetime, timezone

import yaml

from .. import __version__

logger = logging.getLogger(__name__)


def format_value(value):
    """Full-precision text for one CSV cell."""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return f"{value:.17g}"
    return str(value)


def header_lines(spec, manifold_description=None, summary=None):
    """
    Comment lines opening an artifact.

    Args:
        spec: ExperimentSpec
        manifold_description: ChartMetric.describe() output
        summary: Extra derived values (e.g. a fitted rate)

    Returns:
        List of lines without the leading "# "
    """
    manifold = manifold_description if manifold_description is not None else spec.manifold
    lines = [
        f"wickflow {__version__}",
        f"spec_hash={spec.spec_hash(manifold_description)}",
        f"subcommand={spec.subcommand}",
        f"manifold={json.dumps(manifold, sort_keys=True)}",
        f"seed={spec.seed}",
    ]
    for key in sorted(spec.params):
        lines.append(f"param {key}={json.dumps(spec.params[key])}")
    for key, value in (summary or {}).items():
        lines.append(f"{key}={format_value(value)}")
    lines.append(f"generated: {datetime.now(timezone.utc).isoformat(timespec='seconds')}")
    return lines


@contextmanager
def _open(path):
    if path is None:
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8", newline="") as f:
        yield f


def write_csv(path, header, columns, rows):
    """
    Write a CSV sweep.

    Args:
        path: Output file, or None for stdout
        header: Lines from header_lines
        columns: Column names
        rows: Iterable of row sequences
    """
    with _open(path) as f:
        for line in header:
            f.write(f"# {line}\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        count = 0
        for row in rows:
            writer.writerow([format_value(value) for value in row])
            count += 1
    logger.info(f"Wrote {count} rows to {path or 'stdout'}")


def write_report(path, header, report):
    """
    Write a structured report.

    A ``.json`` path gets a JSON document whose ``header`` holds the comment
    lines; any other path (or stdout) gets YAML preceded by ``#`` comments.
    """
    with _open(path) as f:
        if path is not None and str(path).endswith(".json"):
            json.dump({"header": header, "report": report}, f, indent=2)
            f.write("\n")
        else:
            for line in header:
                f.write(f"# {line}\n")
            yaml.safe_dump(report, f, sort_keys=False, default_flow_style=None)
    logger.info(f"Wrote report to {path or 'stdout'}")
